use std::sync::OnceLock;

use proptest::prelude::*;
use revsym::subshift::search::{check_inverse_pair, required_depth};
use revsym::subshift::{
    find_automorphisms, find_inverse, find_reversors, generate_language, Language, LanguageSource, Patch1D,
    SlidingBlockRule, SubstitutionRule,
};

const MAX_LEN: usize = 24;

fn languages() -> &'static [(&'static str, Language)] {
    static LANGS: OnceLock<Vec<(&'static str, Language)>> = OnceLock::new();
    LANGS.get_or_init(|| {
        let sub = |r: SubstitutionRule| LanguageSource::Substitution(r);
        let sources = [
            ("thue-morse", sub(SubstitutionRule::thue_morse()), MAX_LEN),
            ("period-doubling", sub(SubstitutionRule::period_doubling()), MAX_LEN),
            ("fibonacci", sub(SubstitutionRule::fibonacci()), MAX_LEN),
            ("aba-baa", sub(SubstitutionRule::aba_baa()), MAX_LEN),
            ("k1-l2", sub(SubstitutionRule::k_l_family(1, 2)), MAX_LEN),
            ("cyclic-tm-3", sub(SubstitutionRule::cyclic_thue_morse(3)), MAX_LEN),
            ("rudin-shapiro", sub(SubstitutionRule::rudin_shapiro()), MAX_LEN),
            ("full-2", LanguageSource::FullShift(vec!['0', '1']), 10),
        ];
        sources.into_iter().map(|(name, s, n)| (name, generate_language(&s, n).unwrap())).collect()
    })
}

fn case() -> impl Strategy<Value = (usize, usize)> {
    (0..languages().len(), 0usize..=1)
}

fn test_patches(lang: &Language) -> Vec<Patch1D> {
    lang.words(lang.max_len()).iter().map(|w| Patch1D::new(0, w.clone())).collect()
}

/// `g ∘ f` agrees with the identity wherever it is defined.
fn is_identity_on(f: &SlidingBlockRule, g: &SlidingBlockRule, lang: &Language) -> bool {
    test_patches(lang).iter().all(|p| f.apply(p).and_then(|q| g.apply(&q)).is_some_and(|q| p.contains_patch(&q)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn languages_are_factor_closed((i, _) in case()) {
        let (name, lang) = &languages()[i];
        for n in 2..=lang.max_len() {
            for w in lang.words(n) {
                prop_assert!(lang.contains(&w[1..]) && lang.contains(&w[..n - 1]), "{name}: {}", lang.decode(w));
            }
        }
    }

    #[test]
    fn automorphisms_have_inverses((i, r) in case()) {
        let (name, lang) = &languages()[i];
        for f in find_automorphisms(lang, r).unwrap() {
            let g = find_inverse(&f, lang, r + 2);
            prop_assert!(g.is_some(), "{name}: {f} has no inverse");
            let g = g.unwrap();
            prop_assert!(check_inverse_pair(&f, &g, lang));
            prop_assert!(is_identity_on(&f, &g, lang) && is_identity_on(&g, &f, lang), "{name}: {f}");
        }
    }

    #[test]
    fn automorphisms_close_under_composition((i, _) in case()) {
        let (name, lang) = &languages()[i];
        prop_assume!(lang.max_len() >= required_depth(2));
        let one = find_automorphisms(lang, 1).unwrap();
        let two = find_automorphisms(lang, 2).unwrap();
        for f in &one {
            for g in &one {
                let h = f.compose(g, lang).unwrap().recode(lang, 2).unwrap();
                prop_assert!(two.iter().any(|t| t.table() == h.table()), "{name}: {f} ∘ {g}");
            }
        }
    }

    #[test]
    fn reversors_conjugate_the_shift((i, r) in case()) {
        let (name, lang) = &languages()[i];
        for rev in find_reversors(lang, r).unwrap() {
            for p in test_patches(lang) {
                // ρ(S x) = S⁻¹ ρ(x)
                let lhs = rev.apply(&p.shifted(1)).unwrap();
                let rhs = rev.apply(&p).unwrap().shifted(-1);
                prop_assert_eq!(&lhs, &rhs, "{}: {}", name, rev);
            }
            if let Some(k) = rev.element_order(lang, 12).finite() {
                prop_assert!(k % 2 == 0, "{name}: reversor {rev} of odd order {k}");
            }
        }
    }

    #[test]
    fn reflection_invariance_gives_a_reversor((i, _) in case()) {
        let (name, lang) = &languages()[i];
        if lang.is_reflection_invariant() {
            let revs = find_reversors(lang, 0).unwrap();
            prop_assert!(!revs.is_empty(), "{name}");
            prop_assert!(revs.iter().any(|r| r.table() == SlidingBlockRule::reflection(lang).table()));
        }
    }

    #[test]
    fn automorphisms_persist_at_larger_radius((i, r) in case()) {
        let (name, lang) = &languages()[i];
        prop_assume!(lang.max_len() >= required_depth(r + 1));
        let next = find_automorphisms(lang, r + 1).unwrap();
        for f in find_automorphisms(lang, r).unwrap() {
            let g = f.recode(lang, r + 1).unwrap();
            prop_assert!(next.iter().any(|t| t.table() == g.table()), "{name}: {f}");
        }
    }
}
