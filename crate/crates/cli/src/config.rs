//! JSON analysis configs. Every kind has its own field set; unknown fields
//! and out-of-range bounds are reported together.

use std::collections::BTreeMap;
use std::fmt;

use revsym::algebra::IntMatrix;
use revsym::num_serde::{parse_rational, Int};
use revsym::subshift::{LanguageSource, SubstitutionRule};
use revsym::trace_map::TracePoint;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub violations: Vec<String>,
}

impl ConfigError {
    fn one(msg: impl Into<String>) -> Self {
        ConfigError { violations: vec![msg.into()] }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid config: {}", self.violations.join("; "))
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixConfig {
    pub entries: Vec<Vec<Int>>,
    #[serde(default = "MatrixConfig::default_bound")]
    pub bound: u64,
}

impl MatrixConfig {
    pub const MAX_BOUND: u64 = 50;

    fn default_bound() -> u64 {
        10
    }

    pub fn matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<_>> = self.entries.iter().map(|r| r.iter().map(|v| v.0.clone()).collect()).collect();
        IntMatrix::from_rows(&rows).expect("validated")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubstitutionConfig {
    /// Letter to image word.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<BTreeMap<String, String>>,
    /// Letter order when `images` is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<String>,
    /// A bundled rule: `thue-morse`, `period-doubling`, `fibonacci`,
    /// `aba-baa`, `rudin-shapiro`, `kl-K-L` or `cyclic-thue-morse-N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named: Option<String>,
    /// Full shift over these letters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_shift: Option<String>,
    /// Square-free window `[-w, w]` of the square-free integers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub square_free_half_width: Option<u64>,
    #[serde(default = "SubstitutionConfig::default_radius")]
    pub radius_max: usize,
    #[serde(default = "SubstitutionConfig::default_max_len")]
    pub max_len: usize,
}

impl SubstitutionConfig {
    pub const MAX_RADIUS: usize = 3;

    fn default_radius() -> usize {
        revsym::subshift::classify::DEFAULT_RADIUS_MAX
    }

    fn default_max_len() -> usize {
        revsym::subshift::classify::DEFAULT_MAX_LEN
    }

    pub fn source(&self) -> Result<LanguageSource, ConfigError> {
        let given = [
            self.images.is_some(),
            self.named.is_some(),
            self.full_shift.is_some(),
            self.square_free_half_width.is_some(),
        ];
        if given.iter().filter(|&&b| b).count() != 1 {
            return Err(ConfigError::one(
                "exactly one of images, named, full_shift, square_free_half_width is required",
            ));
        }
        let err = |e: revsym::Error| ConfigError::one(e.to_string());
        if let Some(images) = &self.images {
            let mut text = String::new();
            if let Some(a) = &self.alphabet {
                text.push_str(&format!("alphabet = {}\n", toml_string(a)));
            }
            text.push_str("[images]\n");
            for (k, v) in images {
                text.push_str(&format!("{} = {}\n", toml_string(k), toml_string(v)));
            }
            return SubstitutionRule::from_toml(&text).map(LanguageSource::Substitution).map_err(err);
        }
        if self.alphabet.is_some() {
            return Err(ConfigError::one("alphabet only applies to images"));
        }
        if let Some(name) = &self.named {
            return named_rule(name).map(LanguageSource::Substitution);
        }
        if let Some(letters) = &self.full_shift {
            let mut alphabet: Vec<char> = letters.chars().collect();
            alphabet.dedup();
            if alphabet.is_empty() {
                return Err(ConfigError::one("full_shift needs at least one letter"));
            }
            return Ok(LanguageSource::FullShift(alphabet));
        }
        Ok(LanguageSource::SquareFreeWindow { half_width: self.square_free_half_width.expect("checked above") })
    }
}

fn toml_string(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn named_rule(name: &str) -> Result<SubstitutionRule, ConfigError> {
    let bad = || ConfigError::one(format!("unknown named rule {name:?}"));
    Ok(match name {
        "thue-morse" => SubstitutionRule::thue_morse(),
        "period-doubling" => SubstitutionRule::period_doubling(),
        "fibonacci" => SubstitutionRule::fibonacci(),
        "aba-baa" => SubstitutionRule::aba_baa(),
        "rudin-shapiro" => SubstitutionRule::rudin_shapiro(),
        _ => {
            if let Some(n) = name.strip_prefix("cyclic-thue-morse-") {
                let n: usize = n.parse().map_err(|_| bad())?;
                if !(2..=26).contains(&n) {
                    return Err(ConfigError::one("cyclic Thue–Morse needs 2..=26 letters"));
                }
                SubstitutionRule::cyclic_thue_morse(n)
            } else if let Some(kl) = name.strip_prefix("kl-") {
                let (k, l) = kl.split_once('-').ok_or_else(bad)?;
                let (k, l): (usize, usize) = (k.parse().map_err(|_| bad())?, l.parse().map_err(|_| bad())?);
                if k == 0 || l == 0 || k + l > 12 {
                    return Err(ConfigError::one("k, l must be positive with k + l <= 12"));
                }
                SubstitutionRule::k_l_family(k, l)
            } else {
                return Err(bad());
            }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedrappierConfig {
    /// Side of the square region for symmetry checks.
    #[serde(default = "LedrappierConfig::default_region")]
    pub region: usize,
    /// Patch counts are reported for sizes `1..=count_max`.
    #[serde(default = "LedrappierConfig::default_count_max")]
    pub count_max: usize,
    /// Maps to check; defaults to the six elements of `D₃` and the order-6
    /// rotation `[[0,−1],[1,1]]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<[[i64; 2]; 2]>>,
}

impl LedrappierConfig {
    fn default_region() -> usize {
        5
    }

    fn default_count_max() -> usize {
        8
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VisibleConfig {
    /// Density over `[-n, n]²`.
    #[serde(default = "VisibleConfig::default_n")]
    pub n: u64,
    #[serde(default = "VisibleConfig::default_holes")]
    pub holes: Vec<u64>,
    /// Half-width of the invariance window.
    #[serde(default = "VisibleConfig::default_invariance_n")]
    pub invariance_n: i64,
    /// Number of random `GL(2,Z)` products checked for invariance.
    #[serde(default = "VisibleConfig::default_random_products")]
    pub random_products: usize,
    #[serde(default = "VisibleConfig::default_product_len")]
    pub product_len: usize,
    /// Extra matrices to check, e.g. `[[2,0],[0,1]]`.
    #[serde(default)]
    pub matrices: Vec<[[i64; 2]; 2]>,
    #[serde(default)]
    pub seed: u64,
}

impl VisibleConfig {
    pub const MAX_N: u64 = 5000;

    fn default_n() -> u64 {
        1000
    }

    fn default_holes() -> Vec<u64> {
        vec![2, 3]
    }

    fn default_invariance_n() -> i64 {
        50
    }

    fn default_random_products() -> usize {
        20
    }

    fn default_product_len() -> usize {
        6
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceMapConfig {
    #[serde(default = "TraceMapConfig::default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    /// Start of an exact orbit, as rational strings like `"1/2"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_start: Option<[String; 3]>,
    #[serde(default = "TraceMapConfig::default_steps")]
    pub orbit_steps: usize,
}

impl TraceMapConfig {
    fn default_samples() -> usize {
        1000
    }

    fn default_steps() -> usize {
        6
    }

    pub fn orbit_point(&self) -> Option<TracePoint> {
        let [x, y, z] = self.orbit_start.as_ref()?;
        Some(TracePoint::new(parse_rational(x)?, parse_rational(y)?, parse_rational(z)?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Block2dConfig {
    /// `"chair"` for the bundled table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named: Option<String>,
    /// Inline rule in the bundled TOML layout.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_toml: Option<String>,
    /// Seed rows, top row first; defaults to the symmetric chair seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_rows: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_origin: Option<(i64, i64)>,
    #[serde(default = "Block2dConfig::default_iterations")]
    pub iterations: usize,
    /// Include the final patch in the report.
    #[serde(default = "Block2dConfig::default_emit")]
    pub emit_patch: bool,
}

impl Block2dConfig {
    pub const MAX_ITERATIONS: usize = 6;

    fn default_iterations() -> usize {
        3
    }

    fn default_emit() -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Subject {
    Matrix(MatrixConfig),
    Substitution(SubstitutionConfig),
    Ledrappier(LedrappierConfig),
    Visible(VisibleConfig),
    Tracemap(TraceMapConfig),
    Block2d(Block2dConfig),
}

impl Subject {
    pub fn kind(&self) -> &'static str {
        match self {
            Subject::Matrix(_) => "matrix",
            Subject::Substitution(_) => "substitution",
            Subject::Ledrappier(_) => "ledrappier",
            Subject::Visible(_) => "visible",
            Subject::Tracemap(_) => "tracemap",
            Subject::Block2d(_) => "block2d",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisConfig {
    #[serde(flatten)]
    pub subject: Subject,
    pub output: OutputFormat,
}

pub const KINDS: [&str; 6] = ["matrix", "substitution", "ledrappier", "visible", "tracemap", "block2d"];

fn payload<T: DeserializeOwned>(v: Value) -> Result<T, ConfigError> {
    serde_json::from_value(v).map_err(|e| ConfigError::one(e.to_string()))
}

/// Parses and validates a JSON config.
pub fn parse_config(input: &str) -> Result<AnalysisConfig, ConfigError> {
    let value: Value = serde_json::from_str(input).map_err(|e| ConfigError::one(format!("malformed JSON: {e}")))?;
    from_value(value)
}

pub fn from_value(value: Value) -> Result<AnalysisConfig, ConfigError> {
    let Value::Object(mut map) = value else {
        return Err(ConfigError::one("config must be a JSON object"));
    };
    let kind = match map.remove("kind") {
        Some(Value::String(k)) => k,
        Some(_) => return Err(ConfigError::one("kind must be a string")),
        None => return Err(ConfigError::one("missing field `kind`")),
    };
    let output = match map.remove("output") {
        None => OutputFormat::Text,
        Some(v) => payload(v)?,
    };
    let rest = Value::Object(map);
    let subject = match kind.as_str() {
        "matrix" => Subject::Matrix(payload(rest)?),
        "substitution" => Subject::Substitution(payload(rest)?),
        "ledrappier" => Subject::Ledrappier(payload(rest)?),
        "visible" => Subject::Visible(payload(rest)?),
        "tracemap" => Subject::Tracemap(payload(rest)?),
        "block2d" => Subject::Block2d(payload(rest)?),
        other => return Err(ConfigError::one(format!("unknown subject kind {other:?}, expected one of {KINDS:?}"))),
    };
    let config = AnalysisConfig { subject, output };
    validate(&config)?;
    Ok(config)
}

/// Collects every violation of the bounds and payload rules.
pub fn validate(config: &AnalysisConfig) -> Result<(), ConfigError> {
    let mut v = Vec::new();
    match &config.subject {
        Subject::Matrix(m) => {
            let n = m.entries.len();
            if n == 0 {
                v.push("matrix has no rows".to_string());
            }
            for (i, row) in m.entries.iter().enumerate() {
                if row.len() != n {
                    v.push(format!("matrix is not square: row {i} has {} entries, expected {n}", row.len()));
                }
            }
            if n > 8 {
                v.push(format!("dimension {n} exceeds 8"));
            }
            if !(1..=MatrixConfig::MAX_BOUND).contains(&m.bound) {
                v.push(format!("bound must be in 1..={}", MatrixConfig::MAX_BOUND));
            }
        }
        Subject::Substitution(s) => {
            if let Err(e) = s.source() {
                v.extend(e.violations);
            }
            if s.radius_max > SubstitutionConfig::MAX_RADIUS {
                v.push(format!("radius_max must be at most {}", SubstitutionConfig::MAX_RADIUS));
            }
            let needed = revsym::subshift::search::required_depth(s.radius_max);
            if s.max_len < needed || s.max_len > 200 {
                v.push(format!("max_len must be in {needed}..=200 for radius_max {}", s.radius_max));
            }
        }
        Subject::Ledrappier(l) => {
            if !(2..=6).contains(&l.region) {
                v.push("region must be in 2..=6".into());
            }
            if !(1..=revsym::multidim::ledrappier::MAX_COUNT_SIZE).contains(&l.count_max) {
                v.push(format!("count_max must be in 1..={}", revsym::multidim::ledrappier::MAX_COUNT_SIZE));
            }
            for m in l.matrices.iter().flatten() {
                if (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() != 1 {
                    v.push(format!("{m:?} is not unimodular"));
                }
            }
        }
        Subject::Visible(c) => {
            if !(1..=VisibleConfig::MAX_N).contains(&c.n) {
                v.push(format!("n must be in 1..={}", VisibleConfig::MAX_N));
            }
            if c.holes.iter().any(|&k| k == 0 || k > 6) {
                v.push("hole sizes must be in 1..=6".into());
            }
            if !(1..=500).contains(&c.invariance_n) {
                v.push("invariance_n must be in 1..=500".into());
            }
            if c.random_products > 1000 || c.product_len > 64 {
                v.push("random_products must be at most 1000 and product_len at most 64".into());
            }
        }
        Subject::Tracemap(t) => {
            if !(1..=100_000).contains(&t.samples) {
                v.push("samples must be in 1..=100000".into());
            }
            if t.orbit_start.is_some() && t.orbit_point().is_none() {
                v.push("orbit_start entries must be rationals like \"1/2\"".into());
            }
            if t.orbit_steps > 64 {
                v.push("orbit_steps must be at most 64".into());
            }
        }
        Subject::Block2d(b) => {
            if b.named.is_some() && b.rule_toml.is_some() {
                v.push("give either named or rule_toml, not both".into());
            }
            if let Some(n) = &b.named {
                if n != "chair" {
                    v.push(format!("unknown named block substitution {n:?}"));
                }
            }
            if b.iterations > Block2dConfig::MAX_ITERATIONS {
                v.push(format!("iterations must be at most {}", Block2dConfig::MAX_ITERATIONS));
            }
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(ConfigError { violations: v })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_configs() {
        let c = parse_config(r#"{"kind":"matrix","entries":[[1,1],[1,0]],"bound":10}"#).unwrap();
        assert!(matches!(&c.subject, Subject::Matrix(m) if m.bound == 10));
        let e = parse_config(r#"{"kind":"matrix","entries":[[1,1]]}"#).unwrap_err();
        assert!(e.violations[0].contains("not square"), "{e}");
        let e = parse_config(r#"{"kind":"matrix","entries":[[1,1],[1]],"bound":0}"#).unwrap_err();
        assert_eq!(e.violations.len(), 2);
        let big = parse_config(r#"{"kind":"matrix","entries":[["12345678901234567890",1],[1,0]]}"#).unwrap();
        assert!(matches!(big.subject, Subject::Matrix(_)));
    }

    #[test]
    fn substitution_configs() {
        let c = parse_config(r#"{"kind":"substitution","images":{"a":"ab","b":"ba"},"radius_max":2}"#).unwrap();
        let Subject::Substitution(s) = &c.subject else { panic!() };
        assert!(matches!(s.source().unwrap(), LanguageSource::Substitution(r) if r == SubstitutionRule::thue_morse()));
        assert!(parse_config(r#"{"kind":"substitution","named":"kl-2-1"}"#).is_ok());
        assert!(parse_config(r#"{"kind":"substitution","named":"nope"}"#).is_err());
        assert!(parse_config(r#"{"kind":"substitution"}"#).is_err());
        assert!(parse_config(r#"{"kind":"substitution","named":"fibonacci","max_len":5}"#).is_err());
    }

    #[test]
    fn general_errors() {
        assert!(parse_config("{").unwrap_err().violations[0].starts_with("malformed JSON"));
        assert!(parse_config(r#"{"kind":"torus"}"#).unwrap_err().violations[0].contains("unknown subject kind"));
        assert!(parse_config(r#"{"kind":"visible","nn":3}"#).is_err());
        assert!(parse_config(r#"{"kind":"visible","output":"json"}"#).unwrap().output == OutputFormat::Json);
        assert!(parse_config(r#"{"kind":"ledrappier","matrices":[[[2,0],[0,1]]]}"#).is_err());
        assert!(parse_config(r#"{"kind":"tracemap","orbit_start":["1/2","x","0"]}"#).is_err());
    }
}
