//! Runs a validated config and renders the findings.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use revsym::algebra::{char_poly, is_irreducible, IntMatrix};
use revsym::group::GroupPresentation;
use revsym::multidim::{
    block_substitution_patch, chair_seed, d3_elements, dihedral_d4, find_hole, gl_invariance_check, ledrappier_count,
    random_gl2_product, verify_ledrappier_symmetry, verify_point_symmetry, BlockSubstitution2D, DensityReport,
    HoleReport, InvarianceReport, LatticeMap, Patch2D,
};
use revsym::subshift::{classify_language, generate_language, LanguageKind, LanguageSource, ShiftClassification};
use revsym::toral::{
    centralizer_units_2d, check_infinite_order_2d, classify_reversing_group_2d, commutant_basis, find_reversors_2d,
    pell_cross_check, reversibility_verdict, unit_group_signature, MatrixWitness, ReversorSearchResult, UnitSignature,
    Verdict, VerdictKind,
};
use revsym::trace_map::{
    coordinate_swap, fib_trace_map, fib_trace_map_inverse, fricke_vogt, orbit, sample_points, verify_reversor_relation,
    OrbitRecord, ReversorReport, TracePoint,
};
use serde::Serialize;

use crate::config::{
    AnalysisConfig, Block2dConfig, LedrappierConfig, MatrixConfig, Subject, SubstitutionConfig, TraceMapConfig,
    VisibleConfig,
};
use crate::{RunError, EXIT_INCONCLUSIVE, EXIT_OK};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub subject: Subject,
    pub findings: Findings,
    /// False when a bounded search ended without settling the question.
    pub conclusive: bool,
    /// Wall time, kept out of JSON so reports are byte-stable.
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Findings {
    Matrix(Box<MatrixFindings>),
    Substitution(Box<SubshiftFindings>),
    Ledrappier(LedrappierFindings),
    Visible(VisibleFindings),
    Tracemap(TraceMapFindings),
    Block2d(BlockFindings),
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.conclusive {
            EXIT_OK
        } else {
            EXIT_INCONCLUSIVE
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = match &self.findings {
            Findings::Matrix(f) => f.render(),
            Findings::Substitution(f) => f.render(),
            Findings::Ledrappier(f) => f.render(),
            Findings::Visible(f) => f.render(),
            Findings::Tracemap(f) => f.render(),
            Findings::Block2d(f) => f.render(),
        };
        if !self.conclusive {
            s.push_str("inconclusive within the search bounds\n");
        }
        let _ = writeln!(s, "elapsed: {} ms", self.elapsed.as_millis());
        s
    }
}

/// Dispatches the analysis for `config`.
pub fn run_analysis(config: &AnalysisConfig) -> Result<Report, RunError> {
    let start = Instant::now();
    let (findings, conclusive) = match &config.subject {
        Subject::Matrix(c) => analyze_matrix(c)?,
        Subject::Substitution(c) => analyze_substitution(c)?,
        Subject::Ledrappier(c) => (Findings::Ledrappier(analyze_ledrappier(c)?), true),
        Subject::Visible(c) => (Findings::Visible(analyze_visible(c)?), true),
        Subject::Tracemap(c) => (Findings::Tracemap(analyze_tracemap(c)), true),
        Subject::Block2d(c) => (Findings::Block2d(analyze_block2d(c)?), true),
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        subject: config.subject.clone(),
        findings,
        conclusive,
        elapsed: start.elapsed(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixFindings {
    pub matrix: IntMatrix,
    pub verdict: Verdict,
    pub unit_signature: Option<UnitSignature>,
    pub commutant_rank: usize,
    pub planar: Option<PlanarFindings>,
    pub summary: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanarFindings {
    pub centralizer: GroupPresentation<MatrixWitness>,
    pub pell_generator: Option<IntMatrix>,
    pub pell_agrees: Option<bool>,
    pub gl_reversors: ReversorSearchResult,
    pub pgl_reversors: ReversorSearchResult,
    pub reversing_group: GroupPresentation<MatrixWitness>,
}

fn first_found(r: &ReversorSearchResult) -> Option<String> {
    r.found.first().map(|f| format!("{}, order {}", f.matrix, f.order))
}

fn analyze_matrix(c: &MatrixConfig) -> Result<(Findings, bool), RunError> {
    let m = c.matrix();
    let verdict = reversibility_verdict(&m)?;
    let p = char_poly(&m);
    let unit_signature = if is_irreducible(&p)? { Some(unit_group_signature(&p)?) } else { None };
    let commutant_rank = commutant_basis(&m).len();

    let planar = if m.dim() == 2 && check_infinite_order_2d(&m).is_ok() {
        let pell = pell_cross_check(&m, c.bound).ok();
        Some(PlanarFindings {
            centralizer: centralizer_units_2d(&m, c.bound)?,
            pell_generator: pell.as_ref().map(|p| p.pell_generator.clone()),
            pell_agrees: pell.map(|p| p.agree),
            gl_reversors: find_reversors_2d(&m, 1, c.bound)?,
            pgl_reversors: find_reversors_2d(&m, -1, c.bound)?,
            reversing_group: classify_reversing_group_2d(&m, c.bound)?,
        })
    } else {
        None
    };

    let mut summary = verdict.kind.to_string();
    let mut conclusive = verdict.kind != VerdictKind::NecessaryConditionHolds;
    if let Some(pl) = &planar {
        summary.push_str(" (GL)");
        match first_found(&pl.gl_reversors) {
            Some(w) => {
                conclusive = true;
                let _ = write!(summary, "; GL reversor found: {w}");
            }
            None if verdict.kind == VerdictKind::NecessaryConditionHolds => {
                let _ = write!(summary, "; no GL reversor within bound {}", c.bound);
            }
            None => {}
        }
        match first_found(&pl.pgl_reversors) {
            Some(w) => {
                let _ = write!(summary, "; PGL reversor found: {w}");
            }
            None => {
                let _ = write!(summary, "; no PGL reversor within bound {}", c.bound);
            }
        }
        let _ = write!(summary, "; {}", pl.reversing_group);
    }
    let f = MatrixFindings { matrix: m, verdict, unit_signature, commutant_rank, planar, summary };
    Ok((Findings::Matrix(Box::new(f)), conclusive))
}

impl MatrixFindings {
    fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "matrix {}", self.matrix);
        let _ = writeln!(s, "det {}, characteristic polynomial {}", self.verdict.det, self.verdict.char_poly);
        let factors: Vec<String> =
            self.verdict.factors.iter().map(|f| format!("({})^{}", f.factor, f.multiplicity)).collect();
        let _ = writeln!(s, "factors: {}", factors.join(" "));
        let _ = writeln!(s, "verdict: {}", self.verdict.kind);
        if let Some(u) = &self.unit_signature {
            let _ = writeln!(s, "unit group: n1 = {}, n2 = {}, rank {}, torsion {}", u.n1, u.n2, u.rank, u.torsion);
        }
        let _ = writeln!(s, "commutant rank: {}", self.commutant_rank);
        if let Some(p) = &self.planar {
            let gen = &p.centralizer.witnesses[0].matrix;
            let _ = writeln!(s, "centralizer: {}, generator {gen}", p.centralizer);
            if let (Some(g), Some(ok)) = (&p.pell_generator, p.pell_agrees) {
                let _ = writeln!(s, "pell generator: {g} ({})", if ok { "agrees" } else { "DISAGREES" });
            }
            for (name, r) in [("GL", &p.gl_reversors), ("PGL", &p.pgl_reversors)] {
                let orders: Vec<String> = r.orders().iter().map(ToString::to_string).collect();
                let _ = writeln!(
                    s,
                    "{name} reversors within bound {}{}: {} found, orders {{{}}}",
                    r.bound,
                    if r.exhausted { "" } else { " (truncated)" },
                    r.found.len(),
                    orders.join(", ")
                );
            }
            let _ = writeln!(s, "reversing symmetry group: {}", p.reversing_group);
            for w in &p.reversing_group.witnesses {
                let _ = writeln!(s, "  witness {} of order {}", w.matrix, w.order);
            }
        }
        let _ = writeln!(s, "summary: {}", self.summary);
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LanguageSummary {
    pub kind: LanguageKind,
    pub max_len: usize,
    /// Number of legal words of length `1, 2, …`.
    pub complexity: Vec<usize>,
    pub reflection_invariant: bool,
    pub non_reversible_word: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubshiftFindings {
    pub source: String,
    pub primitive: Option<bool>,
    pub language: LanguageSummary,
    pub classification: ShiftClassification,
    pub summary: String,
}

fn analyze_substitution(c: &SubstitutionConfig) -> Result<(Findings, bool), RunError> {
    let source = c.source().map_err(|e| RunError::input(e.to_string()))?;
    let (description, primitive) = match &source {
        LanguageSource::Substitution(r) => (r.to_string(), Some(r.is_primitive())),
        LanguageSource::FullShift(a) => (format!("full shift over {}", a.iter().collect::<String>()), None),
        LanguageSource::SquareFreeWindow { half_width } => {
            (format!("square-free integers on [-{half_width}, {half_width}]"), None)
        }
    };
    let lang = generate_language(&source, c.max_len)?;
    let classification = classify_language(&lang, c.radius_max)?;
    let language = LanguageSummary {
        kind: lang.kind(),
        max_len: lang.max_len(),
        complexity: (1..=lang.max_len().min(12)).map(|n| lang.complexity(n)).collect(),
        reflection_invariant: lang.is_reflection_invariant(),
        non_reversible_word: lang.first_non_reversible_word().map(|w| lang.decode(&w)),
    };
    let r0 = &classification.per_radius[0];
    let reversible = classification.presentation.is_reversible();
    let reversor_note = match classification.per_radius.iter().find(|r| r.reversors > 0) {
        Some(r) => format!("reversor at radius {}", r.radius),
        None => format!("no reversor at radius <= {}", c.radius_max),
    };
    let summary = format!(
        "radius-0 automorphisms: {}; {reversor_note}; empirical group {}",
        r0.automorphisms, classification.presentation
    );
    let f = SubshiftFindings { source: description, primitive, language, classification, summary };
    Ok((Findings::Substitution(Box::new(f)), reversible))
}

impl SubshiftFindings {
    fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "subshift: {}", self.source);
        if let Some(p) = self.primitive {
            let _ = writeln!(s, "primitive: {p}");
        }
        let complexity: Vec<String> = self.language.complexity.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "language up to length {}: complexity {}", self.language.max_len, complexity.join(", "));
        let _ = writeln!(s, "reflection invariant: {}", self.language.reflection_invariant);
        if let Some(w) = &self.language.non_reversible_word {
            let _ = writeln!(s, "  {w} is legal but its reversal is not");
        }
        for r in &self.classification.per_radius {
            let _ = writeln!(
                s,
                "radius {}: {} automorphisms ({} mod shift), {} reversors ({} mod shift)",
                r.radius, r.automorphisms, r.automorphism_classes, r.reversors, r.reversor_classes
            );
        }
        let _ = writeln!(s, "symmetry group: {}", self.classification.symmetry_label);
        let _ = writeln!(s, "reversing symmetry group: {}", self.classification.presentation);
        for w in &self.classification.presentation.witnesses {
            let _ = writeln!(s, "  {:?} of order {}: {}", w.role, w.order, w.rule.describe());
        }
        let _ = writeln!(s, "summary: {}", self.summary);
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CountRow {
    pub n: usize,
    pub count: u64,
    pub expected: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryRow {
    pub matrix: IntMatrix,
    pub holds: bool,
    pub patches_checked: usize,
    pub counterexample: Option<Patch2D>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedrappierFindings {
    pub counts: Vec<CountRow>,
    pub region: usize,
    pub symmetries: Vec<SymmetryRow>,
}

fn analyze_ledrappier(c: &LedrappierConfig) -> Result<LedrappierFindings, RunError> {
    let counts = (1..=c.count_max)
        .map(|n| Ok(CountRow { n, count: ledrappier_count(n)?, expected: 1 << (2 * n - 1) }))
        .collect::<Result<Vec<_>, revsym::Error>>()?;
    let maps: Vec<LatticeMap> = match &c.matrices {
        Some(ms) => ms.iter().map(|&m| LatticeMap::from_i64(m)).collect::<Result<_, _>>()?,
        None => {
            let mut v = d3_elements();
            v.push(LatticeMap::from_i64([[0, -1], [1, 1]]).expect("unimodular"));
            v
        }
    };
    let mut symmetries = Vec::new();
    for m in &maps {
        let r = verify_ledrappier_symmetry(m, c.region)?;
        symmetries.push(SymmetryRow {
            matrix: m.matrix.clone(),
            holds: r.holds,
            patches_checked: r.patches_checked,
            counterexample: r.counterexample,
        });
    }
    Ok(LedrappierFindings { counts, region: c.region, symmetries })
}

impl LedrappierFindings {
    fn render(&self) -> String {
        let mut s = String::new();
        for r in &self.counts {
            let _ = writeln!(s, "valid {0}×{0} patches: {1} (2^(2n-1) = {2})", r.n, r.count, r.expected);
        }
        for r in &self.symmetries {
            let _ = writeln!(
                s,
                "h_M for M = {} on {}×{} patches: {}",
                r.matrix,
                self.region,
                self.region,
                if r.holds { "preserves validity" } else { "FAILS" }
            );
            if let Some(p) = &r.counterexample {
                let _ = writeln!(s, "  counterexample patch at {:?}:", p.origin());
                for line in p.to_text().lines() {
                    let _ = writeln!(s, "    {line}");
                }
            }
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceRow {
    pub label: String,
    pub matrix: IntMatrix,
    pub report: InvarianceReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct VisibleFindings {
    pub density: DensityReport,
    pub holes: Vec<HoleReport>,
    pub invariance_n: i64,
    pub invariance: Vec<InvarianceRow>,
    pub random_products_hold: bool,
}

fn analyze_visible(c: &VisibleConfig) -> Result<VisibleFindings, RunError> {
    let density = revsym::multidim::visible_density(c.n);
    let holes = c.holes.iter().map(|&k| find_hole(k)).collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    let mut checked = vec![
        ("shear".to_string(), IntMatrix::from_i64([[1, 1], [0, 1]])),
        ("diag(2,1)".to_string(), IntMatrix::from_i64([[2, 0], [0, 1]])),
    ];
    checked.extend(c.matrices.iter().map(|&m| ("custom".to_string(), IntMatrix::from_i64(m))));
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let random: Vec<(String, IntMatrix)> = (0..c.random_products)
        .map(|i| (format!("random product {i}"), random_gl2_product(&mut rng, c.product_len)))
        .collect();
    let mut random_products_hold = true;
    for (label, m) in checked.into_iter().chain(random.iter().cloned()) {
        let report = gl_invariance_check(&m, c.invariance_n)?;
        if label.starts_with("random") {
            random_products_hold &= report.holds;
        }
        rows.push(InvarianceRow { label, matrix: m, report });
    }
    Ok(VisibleFindings { density, holes, invariance_n: c.invariance_n, invariance: rows, random_products_hold })
}

impl VisibleFindings {
    fn render(&self) -> String {
        let mut s = String::new();
        let d = &self.density;
        let _ = writeln!(
            s,
            "visible points in [-{0}, {0}]²: {1} / {2} = {3:.6} (6/π² deviation {4:.6})",
            d.n, d.count, d.total, d.density, d.deviation
        );
        for h in &self.holes {
            let _ = writeln!(
                s,
                "{0}×{0} hole at ({1}, {2}), verified on {3} cells",
                h.k,
                h.translation.0,
                h.translation.1,
                h.cells.len()
            );
        }
        for r in self.invariance.iter().filter(|r| !r.label.starts_with("random")) {
            let verdict = match &r.report.counterexample {
                None => "invariant".to_string(),
                Some((v, w)) => format!("not invariant: {v:?} ↦ {w:?}"),
            };
            let _ = writeln!(s, "{} {} on [-{n}, {n}]²: {verdict}", r.label, r.matrix, n = self.invariance_n);
        }
        let random = self.invariance.iter().filter(|r| r.label.starts_with("random")).count();
        if random > 0 {
            let _ = writeln!(
                s,
                "{random} random GL(2,Z) products: {}",
                if self.random_products_hold { "all invariant" } else { "SOME FAIL" }
            );
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceMapFindings {
    pub samples: usize,
    pub seed: u64,
    pub invariant_preserved: usize,
    pub inverse_round_trips: usize,
    pub swap_reversor: ReversorReport,
    pub fixed_point_preserved: bool,
    pub orbit: Option<Vec<OrbitRecord>>,
}

fn analyze_tracemap(c: &TraceMapConfig) -> TraceMapFindings {
    let pts = sample_points(c.samples, c.seed);
    let invariant_preserved = pts.iter().filter(|p| fricke_vogt(&fib_trace_map(p)) == fricke_vogt(p)).count();
    let inverse_round_trips = pts.iter().filter(|p| fib_trace_map_inverse(&fib_trace_map(p)) == **p).count();
    let swap_reversor =
        verify_reversor_relation(fib_trace_map, fib_trace_map_inverse, coordinate_swap, coordinate_swap, true, &pts);
    let one = TracePoint::from_i64(1, 1, 1);
    TraceMapFindings {
        samples: c.samples,
        seed: c.seed,
        invariant_preserved,
        inverse_round_trips,
        swap_reversor,
        fixed_point_preserved: fib_trace_map(&one) == one,
        orbit: c.orbit_point().map(|p| orbit(&p, c.orbit_steps)),
    }
}

impl TraceMapFindings {
    fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "F(x, y, z) = (y, z, 2yz - x) on {} rational samples (seed {})", self.samples, self.seed);
        let _ = writeln!(s, "Fricke–Vogt invariant preserved: {}/{}", self.invariant_preserved, self.samples);
        let _ = writeln!(s, "F⁻¹∘F = id: {}/{}", self.inverse_round_trips, self.samples);
        let _ = writeln!(
            s,
            "(x, y, z) ↦ (z, y, x) is an involutory reversor: {}",
            if self.swap_reversor.holds { "yes" } else { "NO" }
        );
        let _ =
            writeln!(s, "fixed point (1, 1, 1): {}", if self.fixed_point_preserved { "preserved" } else { "MOVED" });
        for r in self.orbit.iter().flatten() {
            let _ = writeln!(s, "  F^{}: {}  I = {}", r.step, r.point, r.invariant);
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointSymmetryRow {
    pub name: String,
    pub matrix: IntMatrix,
    pub letter_perm: std::collections::BTreeMap<char, char>,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockFindings {
    pub primitive: bool,
    pub iterations: usize,
    pub size: (usize, usize),
    pub symmetries: Vec<PointSymmetryRow>,
    pub patch: Option<Patch2D>,
}

fn analyze_block2d(c: &Block2dConfig) -> Result<BlockFindings, RunError> {
    let rule = match &c.rule_toml {
        Some(text) => BlockSubstitution2D::from_toml(text)?,
        None => BlockSubstitution2D::chair(),
    };
    let seed = match &c.seed_rows {
        Some(rows) => {
            let origin = c.seed_origin.unwrap_or_else(|| {
                let h = rows.len() as i64;
                let w = rows.first().map_or(0, |r| r.chars().count()) as i64;
                (-(w / 2), -(h / 2))
            });
            Patch2D::from_text(&rows.join("\n"), origin)?
        }
        None => chair_seed(),
    };
    let patch = block_substitution_patch(&rule, &seed, c.iterations)?;
    let mut symmetries = Vec::new();
    for (name, m) in dihedral_d4() {
        let map = LatticeMap::new(m)?;
        let perm = rule.letter_perm(&map).unwrap_or_default();
        let map = map.with_perm(perm.clone());
        let holds = match verify_point_symmetry(&patch, &map) {
            Ok(h) => h,
            Err(revsym::Error::NotSquarePatch) => false,
            Err(e) => return Err(e.into()),
        };
        symmetries.push(PointSymmetryRow {
            name: name.to_string(),
            matrix: map.matrix.clone(),
            letter_perm: perm,
            holds,
        });
    }
    Ok(BlockFindings {
        primitive: rule.is_primitive(),
        iterations: c.iterations,
        size: (patch.width(), patch.height()),
        symmetries,
        patch: c.emit_patch.then_some(patch),
    })
}

impl BlockFindings {
    fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "level-{} patch, {}×{}, primitive rule: {}",
            self.iterations, self.size.0, self.size.1, self.primitive
        );
        for r in &self.symmetries {
            let perm: String = r.letter_perm.iter().map(|(a, b)| format!("{a}→{b} ")).collect();
            let _ = writeln!(
                s,
                "{:<24} {:<16} {}{}",
                r.name,
                r.matrix.to_string(),
                if r.holds { "symmetric" } else { "NOT symmetric" },
                if perm.is_empty() { String::new() } else { format!("  [{}]", perm.trim_end()) }
            );
        }
        if let Some(p) = &self.patch {
            s.push_str(&p.to_text());
        }
        s
    }
}
