use std::collections::BTreeSet;

use serde::Serialize;

use super::language::{generate_language, Language, LanguageKind, LanguageSource};
use super::rule::SlidingBlockRule;
use super::search::{find_inverse, search_rules, SearchOptions};
use crate::error::{Error, Result};
use crate::group::{ElementOrder, Extension, GroupPresentation, Qualifier};

pub const DEFAULT_MAX_LEN: usize = 40;
pub const DEFAULT_RADIUS_MAX: usize = 2;
pub const ORDER_CAP: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleRole {
    Automorphism,
    Reversor,
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleWitness {
    pub role: RuleRole,
    pub order: ElementOrder,
    pub rule: SlidingBlockRule,
}

impl RuleWitness {
    /// Re-checks legality on the language and the existence of an inverse.
    pub fn verify(&self, lang: &Language) -> bool {
        let reflected = self.role == RuleRole::Reversor;
        self.rule.is_reflected() == reflected
            && self.rule.element_order(lang, ORDER_CAP) == self.order
            && find_inverse(&self.rule, lang, self.rule.radius() + 2).is_some()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiusSummary {
    pub radius: usize,
    pub automorphisms: usize,
    pub automorphism_classes: usize,
    pub reversors: usize,
    pub reversor_classes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftClassification {
    pub symmetry_label: String,
    pub presentation: GroupPresentation<RuleWitness>,
    pub reflection_invariant: bool,
    pub involutory_reversor: bool,
    pub per_radius: Vec<RadiusSummary>,
}

/// One representative per class of `rules` modulo composition with shift
/// powers, keeping the first rule of each class.
pub fn modulo_shifts(rules: &[SlidingBlockRule], lang: &Language) -> Vec<SlidingBlockRule> {
    let mut reps: Vec<SlidingBlockRule> = Vec::new();
    for r in rules {
        if !reps.iter().any(|q| r.equal_modulo_shift(q, lang).is_some()) {
            reps.push(r.clone());
        }
    }
    reps
}

fn subscript(n: usize) -> String {
    n.to_string().chars().map(|c| char::from_u32(0x2080 + c.to_digit(10).unwrap()).unwrap()).collect()
}

/// Radius-bounded empirical symmetry and reversing symmetry groups.
///
/// Automorphisms modulo shift powers give the finite part of `S`; the orders
/// of the reversors decide whether an involution is present. All findings
/// carry the radius bound.
pub fn classify_shift_groups(
    source: &LanguageSource,
    radius_max: usize,
    max_len: usize,
) -> Result<ShiftClassification> {
    let lang = generate_language(source, max_len)?;
    classify_language(&lang, radius_max)
}

pub fn classify_language(lang: &Language, radius_max: usize) -> Result<ShiftClassification> {
    let mut per_radius = Vec::new();
    // smallest radius first, so class representatives are as small as possible
    let mut autos = Vec::new();
    let mut revs = Vec::new();
    for r in 0..=radius_max {
        let a = search_rules(lang, r, false, SearchOptions::default())?.rules;
        let v = search_rules(lang, r, true, SearchOptions::default())?.rules;
        per_radius.push(RadiusSummary {
            radius: r,
            automorphisms: a.len(),
            automorphism_classes: modulo_shifts(&a, lang).len(),
            reversors: v.len(),
            reversor_classes: modulo_shifts(&v, lang).len(),
        });
        autos.extend(a);
        revs.extend(v);
    }

    let classes = modulo_shifts(&autos, lang);
    let expected = per_radius.last().map_or(0, |r| r.automorphism_classes);
    if classes.len() != expected {
        return Err(Error::Invariant(format!(
            "{} automorphism classes over all radii, {expected} at the largest",
            classes.len()
        )));
    }
    let n = classes.len();
    let cyclic =
        classes.iter().any(|c| c.order_modulo_shifts(lang, ORDER_CAP, true).is_some_and(|(k, _)| k as usize == n));
    let torsion = match n {
        0 | 1 => "trivial".to_string(),
        _ if cyclic => format!("C{}", subscript(n)),
        _ => format!("order-{n} group"),
    };
    let symmetry_label = if n <= 1 { "Z".to_string() } else { format!("Z × {torsion}") };

    let mut orders = BTreeSet::new();
    let mut witnesses = Vec::new();
    for c in &classes {
        let order = c.element_order(lang, ORDER_CAP);
        witnesses.push(RuleWitness { role: RuleRole::Automorphism, order, rule: c.clone() });
    }
    let mut first_of_order = std::collections::BTreeMap::new();
    for r in &revs {
        let order = r.element_order(lang, ORDER_CAP);
        if let Some(k) = order.finite() {
            if k % 2 == 1 {
                return Err(Error::Invariant(format!("reversor of odd order {k}: {r}")));
            }
        }
        orders.insert(order);
        first_of_order.entry(order).or_insert_with(|| r.clone());
    }
    for (order, rule) in first_of_order {
        witnesses.push(RuleWitness { role: RuleRole::Reversor, order, rule });
    }

    let involution = orders.contains(&ElementOrder::Finite(2));
    let wrapped = if n > 1 { format!("({symmetry_label})") } else { symmetry_label.clone() };
    let (label, extension) = if revs.is_empty() {
        (format!("{symmetry_label} (irreversible within radius bound)"), Extension::None)
    } else if involution {
        (format!("{wrapped} ⋊ C₂"), Extension::SemidirectC2)
    } else {
        let list: Vec<String> = orders.iter().map(ToString::to_string).collect();
        (
            format!("{symmetry_label}, reversible without involutory reversor (reversor orders {})", list.join(", ")),
            Extension::SemidirectC4,
        )
    };
    let qualifier = match lang.kind() {
        LanguageKind::Exact => Qualifier::RadiusBounded { radius: radius_max, max_len: lang.max_len() },
        LanguageKind::WindowApproximate { window } => {
            Qualifier::WindowApproximate { radius: radius_max, max_len: lang.max_len(), window }
        }
    };
    let presentation =
        GroupPresentation::new(label, torsion, 1, extension, orders, witnesses, qualifier, |w| w.verify(lang))?;
    Ok(ShiftClassification {
        symmetry_label,
        presentation,
        reflection_invariant: lang.is_reflection_invariant(),
        involutory_reversor: involution,
        per_radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshift::substitution::SubstitutionRule;

    #[test]
    fn subscripts() {
        assert_eq!(subscript(4), "₄");
        assert_eq!(subscript(12), "₁₂");
    }

    #[test]
    fn thue_morse_classification() {
        let c = classify_shift_groups(&LanguageSource::Substitution(SubstitutionRule::thue_morse()), 1, 24).unwrap();
        assert_eq!(c.symmetry_label, "Z × C₂");
        assert!(c.involutory_reversor);
        assert_eq!(c.presentation.extension, Extension::SemidirectC2);
        assert_eq!(c.presentation.label, "(Z × C₂) ⋊ C₂");
        assert_eq!(c.per_radius[0].automorphisms, 2);
        assert_eq!(c.per_radius[1].automorphism_classes, 2);
        assert_eq!(c.presentation.to_string(), "(Z × C₂) ⋊ C₂ (radius-bounded, r <= 1)");
    }

    #[test]
    fn fibonacci_classification() {
        let c = classify_shift_groups(&LanguageSource::Substitution(SubstitutionRule::fibonacci()), 1, 24).unwrap();
        assert_eq!(c.symmetry_label, "Z");
        assert_eq!(c.presentation.label, "Z ⋊ C₂");
        assert!(c.reflection_invariant);
    }

    #[test]
    fn square_free_is_window_qualified() {
        let c = classify_shift_groups(&LanguageSource::SquareFreeWindow { half_width: 400 }, 0, 8).unwrap();
        assert!(matches!(c.presentation.qualifier, Qualifier::WindowApproximate { window: 801, .. }));
        assert!(c.involutory_reversor);
        assert_eq!(c.symmetry_label, "Z");
    }
}
