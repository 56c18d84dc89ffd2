//! Config parsing, analysis dispatch and reporting behind the `revsym`
//! binary.

pub mod config;
pub mod report;

use std::fmt;

use serde_json::Value;

pub use config::{parse_config, AnalysisConfig, ConfigError, OutputFormat, Subject};
pub use report::{run_analysis, Report, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunError {
    pub code: i32,
    pub message: String,
}

impl RunError {
    pub fn input(message: impl Into<String>) -> Self {
        RunError { code: EXIT_INPUT, message: message.into() }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for RunError {}

impl From<revsym::Error> for RunError {
    fn from(e: revsym::Error) -> Self {
        use revsym::Error as E;
        let code = match e {
            E::Invariant(_) => EXIT_INTERNAL,
            E::BudgetExceeded(_) => EXIT_INCONCLUSIVE,
            _ => EXIT_INPUT,
        };
        RunError { code, message: e.to_string() }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::input(e.to_string())
    }
}

/// Command-line values that override fields of a config document.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub bound: Option<u64>,
    pub radius: Option<usize>,
    pub seed: Option<u64>,
    pub json: bool,
    /// Extra `field = value` pairs set by subcommand-specific flags.
    pub fields: Vec<(String, Value)>,
}

/// The config kind behind a subcommand name.
pub fn kind_for_subcommand(name: &str) -> &str {
    match name {
        "subshift" => "substitution",
        other => other,
    }
}

/// Starts from `base` (or an empty document of `kind`), applies the
/// overrides and validates.
pub fn build_config(kind: &str, base: Option<&str>, ov: &Overrides) -> Result<AnalysisConfig, ConfigError> {
    let mut doc = match base {
        Some(text) => serde_json::from_str::<Value>(text)
            .map_err(|e| ConfigError { violations: vec![format!("malformed JSON: {e}")] })?,
        None => serde_json::json!({ "kind": kind }),
    };
    let Value::Object(map) = &mut doc else {
        return Err(ConfigError { violations: vec!["config must be a JSON object".into()] });
    };
    match map.get("kind").and_then(Value::as_str) {
        Some(k) if k == kind => {}
        None => {
            map.insert("kind".into(), kind.into());
        }
        Some(k) => {
            return Err(ConfigError {
                violations: vec![format!("config kind {k:?} does not match subcommand {kind:?}")],
            })
        }
    }
    let mut violations = Vec::new();
    let mut set = |flag: &str, field: &str, allowed: &[&str], v: Value| {
        if allowed.contains(&kind) {
            map.insert(field.into(), v);
        } else {
            violations.push(format!("--{flag} does not apply to {kind}"));
        }
    };
    if let Some(b) = ov.bound {
        set("bound", "bound", &["matrix"], b.into());
    }
    if let Some(r) = ov.radius {
        set("radius", "radius_max", &["substitution"], r.into());
    }
    if let Some(s) = ov.seed {
        set("seed", "seed", &["visible", "tracemap"], s.into());
    }
    if !violations.is_empty() {
        return Err(ConfigError { violations });
    }
    for (k, v) in &ov.fields {
        map.insert(k.clone(), v.clone());
    }
    if ov.json {
        map.insert("output".into(), "json".into());
    }
    config::from_value(doc)
}

/// Runs a config and renders it; returns the output and the exit code.
pub fn execute(config: &AnalysisConfig) -> (String, i32) {
    match run_analysis(config) {
        Ok(report) => {
            let text = match config.output {
                OutputFormat::Json => report.to_json(),
                OutputFormat::Text => report.to_text(),
            };
            (text, report.exit_code())
        }
        Err(e) => (format!("error: {e}\n"), e.code),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let ov = Overrides { bound: Some(3), json: true, ..Default::default() };
        let c = build_config("matrix", Some(r#"{"entries":[[2,1],[1,1]]}"#), &ov).unwrap();
        assert_eq!(c.output, OutputFormat::Json);
        assert!(matches!(&c.subject, Subject::Matrix(m) if m.bound == 3));
        let bad = Overrides { radius: Some(1), ..Default::default() };
        assert!(build_config("matrix", Some(r#"{"entries":[[2,1],[1,1]]}"#), &bad).is_err());
        assert!(build_config("visible", Some(r#"{"kind":"matrix"}"#), &Overrides::default()).is_err());
        assert_eq!(kind_for_subcommand("subshift"), "substitution");
    }

    #[test]
    fn error_codes() {
        assert_eq!(RunError::from(revsym::Error::Invariant("x".into())).code, EXIT_INTERNAL);
        assert_eq!(RunError::from(revsym::Error::NotSquarePatch).code, EXIT_INPUT);
    }
}
