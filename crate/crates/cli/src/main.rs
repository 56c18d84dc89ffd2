use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use revsym_cli::{build_config, execute, kind_for_subcommand, Overrides, EXIT_INPUT};
use serde_json::Value;

/// Symmetry and reversing-symmetry groups of toral automorphisms,
/// substitution subshifts and planar shifts.
#[derive(Parser)]
#[command(name = "revsym", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Emit the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Coefficient bound of lattice scans (matrix).
    #[arg(long)]
    bound: Option<u64>,
    /// Largest sliding block radius (subshift).
    #[arg(long)]
    radius: Option<usize>,
    /// Random seed (visible, tracemap).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Toral automorphism given by an integer matrix.
    Matrix {
        #[command(flatten)]
        common: Common,
        /// Rows as JSON, e.g. '[[1,1],[1,0]]'.
        #[arg(long)]
        entries: Option<String>,
    },
    /// Substitution subshift, full shift or square-free window.
    Subshift {
        #[command(flatten)]
        common: Common,
        /// Bundled rule such as thue-morse, kl-2-1 or cyclic-thue-morse-3.
        #[arg(long)]
        named: Option<String>,
        /// Images as 'a=ab,b=ba'.
        #[arg(long)]
        images: Option<String>,
        /// Length of the longest legal words kept.
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Ledrappier's shift and its lattice symmetries.
    Ledrappier {
        #[command(flatten)]
        common: Common,
        /// Side of the square regions checked.
        #[arg(long)]
        region: Option<usize>,
    },
    /// Visible lattice points.
    Visible {
        #[command(flatten)]
        common: Common,
        /// Half-width of the density window.
        #[arg(long)]
        n: Option<u64>,
    },
    /// Fibonacci trace map.
    Tracemap {
        #[command(flatten)]
        common: Common,
        /// Number of rational sample points.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Two-dimensional block substitution patches.
    Block2d {
        #[command(flatten)]
        common: Common,
        /// Substitution steps applied to the seed.
        #[arg(long)]
        iterations: Option<usize>,
    },
}

fn parse_images(text: &str) -> Result<Value, String> {
    let mut map = serde_json::Map::new();
    for part in text.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("bad image {part:?}, expected letter=word"))?;
        map.insert(k.trim().to_string(), v.trim().into());
    }
    Ok(Value::Object(map))
}

fn run(cli: Cli) -> Result<(String, i32), String> {
    let (name, common, mut fields) = match cli.command {
        Command::Matrix { common, entries } => {
            let mut f = Vec::new();
            if let Some(e) = entries {
                let v: Value = serde_json::from_str(&e).map_err(|e| format!("--entries: {e}"))?;
                f.push(("entries".to_string(), v));
            }
            ("matrix", common, f)
        }
        Command::Subshift { common, named, images, max_len } => {
            let mut f = Vec::new();
            if let Some(n) = named {
                f.push(("named".to_string(), n.into()));
            }
            if let Some(i) = images {
                f.push(("images".to_string(), parse_images(&i)?));
            }
            if let Some(m) = max_len {
                f.push(("max_len".to_string(), m.into()));
            }
            ("subshift", common, f)
        }
        Command::Ledrappier { common, region } => {
            ("ledrappier", common, region.map(|r| ("region".to_string(), r.into())).into_iter().collect())
        }
        Command::Visible { common, n } => {
            ("visible", common, n.map(|n| ("n".to_string(), n.into())).into_iter().collect())
        }
        Command::Tracemap { common, samples } => {
            ("tracemap", common, samples.map(|s| ("samples".to_string(), s.into())).into_iter().collect())
        }
        Command::Block2d { common, iterations } => {
            ("block2d", common, iterations.map(|i| ("iterations".to_string(), i.into())).into_iter().collect())
        }
    };
    let base = match &common.config {
        Some(path) => Some(std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?),
        None => None,
    };
    fields.retain(|(_, v)| !v.is_null());
    let ov = Overrides { bound: common.bound, radius: common.radius, seed: common.seed, json: common.json, fields };
    let config = build_config(kind_for_subcommand(name), base.as_deref(), &ov).map_err(|e| e.to_string())?;
    Ok(execute(&config))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, code) = match run(cli) {
        Ok(r) => r,
        Err(msg) => (format!("error: {msg}\n"), EXIT_INPUT),
    };
    if out.starts_with("error:") {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    ExitCode::from(code as u8)
}
