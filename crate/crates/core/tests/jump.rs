use proptest::prelude::*;
use truestage::jump::{japprox, japprox_inv, japprox_n};
use truestage::{FinString, FunctionalTable, ToyBehavior, Value};

fn toy_table() -> impl Strategy<Value = FunctionalTable> {
    prop::collection::vec((0u64..4, 1usize..7, prop::option::of((0usize..3, 0u64..2))), 0..4).prop_map(|ms| {
        FunctionalTable::toy(ms.into_iter().map(|(e, k, guard)| {
            let b = ToyBehavior::halting(k, Value::Nat(0));
            (e, match guard {
                Some((p, v)) => b.with_guard(p, Value::Nat(v)),
                None => b,
            })
        }))
    })
}

fn nats() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..3, 0..9)
}

fn split3(v: &[u64], i: usize, j: usize) -> (FinString, FinString, FinString) {
    let (i, j) = (i.min(v.len()), j.min(v.len()));
    let (i, j) = (i.min(j), i.max(j));
    (FinString::nats(&v[..i]), FinString::nats(&v[..j]), FinString::nats(v))
}

proptest! {
    #[test]
    fn inclusion_at_the_end_gives_inclusion_between(t in toy_table(), v in nats(), i in 0usize..9, j in 0usize..9) {
        let (s, u, p) = split3(&v, i, j);
        let (js, ju, jp) = (japprox(&t, &s), japprox(&t, &u), japprox(&t, &p));
        if js.is_prefix_of(&jp) {
            prop_assert!(js.is_prefix_of(&ju));
        }
    }

    #[test]
    fn nonempty_inclusion_reflects_prefix(t in toy_table(), a in nats(), b in nats()) {
        let (sa, sb) = (FinString::nats(&a), FinString::nats(&b));
        let (ja, jb) = (japprox(&t, &sa), japprox(&t, &sb));
        if !ja.is_empty() && ja.is_prefix_of(&jb) {
            prop_assert!(sa.is_prefix_of(&sb));
        }
    }

    #[test]
    fn inverse_and_length(t in toy_table(), v in nats(), n in 0usize..4) {
        let s = FinString::nats(&v);
        if s.len() >= 2 {
            prop_assert_eq!(japprox_inv(&japprox(&t, &s)).unwrap(), s.clone());
        }
        prop_assert!(japprox_n(&t, &s, n).len() <= s.len().saturating_sub(n));
    }
}
