use proptest::prelude::*;
use truestage::ordinal::{g_eval, in_tree, kb_less, parse_ordinal, path_of};
use truestage::Ordinal;

fn exponent() -> impl Strategy<Value = Ordinal> {
    prop_oneof![
        Just(Ordinal::zero()),
        Just(Ordinal::one()),
        Just(Ordinal::nat(2)),
        Just(Ordinal::omega()),
        Just(Ordinal::omega().succ()),
    ]
}

fn ordinal() -> impl Strategy<Value = Ordinal> {
    prop::collection::vec((exponent(), 1u64..4), 0..4).prop_map(|terms| {
        terms.iter().fold(Ordinal::zero(), |acc, (e, c)| acc.add(&Ordinal::omega_pow(e.clone()).mul_nat(*c)))
    })
}

proptest! {
    #[test]
    fn display_roundtrips(a in ordinal()) {
        prop_assert_eq!(parse_ordinal(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn fundamental_sequences_climb_below(a in ordinal(), n in 0u64..6) {
        if a.is_zero() {
            prop_assert!(a.fund(n).is_err());
        } else {
            let x = a.fund(n).unwrap();
            let y = a.fund(n + 1).unwrap();
            prop_assert!(x < a);
            prop_assert!(x <= y);
            if a.is_successor() {
                prop_assert_eq!(Some(x), a.pred());
            }
        }
    }

    #[test]
    fn addition_is_ordered(a in ordinal(), b in ordinal()) {
        let s = a.add(&b);
        prop_assert!(s >= b);
        prop_assert!(s >= a);
        if !b.is_zero() {
            prop_assert!(s > a);
        }
        prop_assert_eq!(s.sub_left(&a), Some(b));
    }

    #[test]
    fn normal_form_map_is_kb_monotone(p in prop::collection::vec(0u64..4, 0..4), q in prop::collection::vec(0u64..4, 0..4)) {
        for eta in [Ordinal::one(), Ordinal::nat(2), Ordinal::omega()] {
            if in_tree(&eta, &p) && in_tree(&eta, &q) {
                let (gp, gq) = (g_eval(&eta, &p).unwrap(), g_eval(&eta, &q).unwrap());
                prop_assert_eq!(kb_less(&p, &q), gp < gq);
                prop_assert_eq!(path_of(&eta, &gp).unwrap(), p.clone());
            }
        }
    }
}
