use num_traits::{One, Signed, ToPrimitive};
use proptest::prelude::*;
use revsym::algebra::{char_poly, IntMatrix};
use revsym::group::ElementOrder;
use revsym::toral::{
    centralizer_units_2d, check_infinite_order_2d, classify_reversing_group_2d, find_reversors_2d, is_reversor,
    reversibility_verdict, MatrixRole, VerdictKind,
};

const BOUND: u64 = 3;

fn word_matrix(word: &[usize]) -> IntMatrix {
    let gens = [
        IntMatrix::from_i64([[1, 1], [0, 1]]),
        IntMatrix::from_i64([[1, -1], [0, 1]]),
        IntMatrix::from_i64([[0, -1], [1, 0]]),
        IntMatrix::from_i64([[0, 1], [1, 0]]),
    ];
    word.iter().fold(IntMatrix::identity(2), |acc, &i| &acc * &gens[i])
}

fn hyperbolic() -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(0usize..4, 2..9)
        .prop_map(|w| word_matrix(&w))
        .prop_filter("infinite order, small entries", |m| {
            check_infinite_order_2d(m).is_ok() && m.height().to_i64().is_some_and(|h| h <= 12)
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn witnesses_verify(m in hyperbolic()) {
        let c = centralizer_units_2d(&m, BOUND).unwrap();
        let r = classify_reversing_group_2d(&m, BOUND).unwrap();
        for w in c.witnesses.iter().chain(&r.witnesses) {
            prop_assert!(w.verify(&m));
            match w.role {
                MatrixRole::Generator | MatrixRole::Torsion => prop_assert!(w.matrix.commutes_with(&m)),
                MatrixRole::Reversor { sign } => prop_assert!(is_reversor(&m, &w.matrix, sign)),
            }
        }
    }

    #[test]
    fn reversor_orders_reduce_to_powers_of_two(m in hyperbolic()) {
        for sign in [1i8, -1] {
            let found = find_reversors_2d(&m, sign, BOUND).unwrap();
            for r in &found.found {
                let Some(k) = r.order.finite() else { continue };
                prop_assert!(k % 2 == 0, "odd order {k}");
                let two_part = 1u32 << k.trailing_zeros();
                let h = r.matrix.pow(k / two_part);
                prop_assert!(is_reversor(&m, &h, sign));
                prop_assert_eq!(h.order(64), Some(two_part));
            }
        }
    }

    #[test]
    fn classification_is_inverse_invariant(m in hyperbolic()) {
        let a = classify_reversing_group_2d(&m, BOUND).unwrap();
        let b = classify_reversing_group_2d(&m.inverse().unwrap(), BOUND).unwrap();
        prop_assert_eq!(a.label, b.label);
        prop_assert_eq!(a.extension, b.extension);
        prop_assert_eq!(a.reversor_orders, b.reversor_orders);
    }

    #[test]
    fn algebra_and_search_agree(m in hyperbolic()) {
        let verdict = reversibility_verdict(&m).unwrap();
        let found = find_reversors_2d(&m, 1, BOUND).unwrap();
        if verdict.kind != VerdictKind::NecessaryConditionHolds {
            prop_assert!(found.found.is_empty());
        }
        let self_rec = char_poly(&m).is_self_reciprocal(&m.det()).unwrap();
        if !self_rec {
            prop_assert!(found.found.is_empty());
        }
    }

    #[test]
    fn centralizer_generator_is_minimal(m in hyperbolic()) {
        let c = centralizer_units_2d(&m, BOUND).unwrap();
        let g = &c.witnesses.iter().find(|w| w.role == MatrixRole::Generator).unwrap().matrix;
        prop_assert!(g.commutes_with(&m));
        prop_assert_eq!(c.witnesses[0].order, ElementOrder::Infinite);
        let h = g.height().to_i64().unwrap();
        prop_assume!(h <= 6);
        // brute force over every matrix of smaller height
        let r = h - 1;
        for a in -r..=r {
            for b in -r..=r {
                for cc in -r..=r {
                    for d in -r..=r {
                        let u = IntMatrix::from_i64([[a, b], [cc, d]]);
                        if u.det().abs().is_one() && u.commutes_with(&m) {
                            prop_assert!(u.order(12).is_some(), "smaller unit {u} of infinite order");
                        }
                    }
                }
            }
        }
    }
}
