use proptest::prelude::*;
use truestage::{Belief, BeliefContext, FunctionalTable, Ordinal, ToyBehavior, Value};

fn toy_table() -> impl Strategy<Value = FunctionalTable> {
    prop::collection::vec((0u64..4, 2usize..8), 0..3)
        .prop_map(|ms| FunctionalTable::toy(ms.into_iter().map(|(e, k)| (e, ToyBehavior::halting(k, Value::Nat(0))))))
}

fn eta() -> impl Strategy<Value = Ordinal> {
    prop_oneof![Just(Ordinal::one()), Just(Ordinal::nat(2))]
}

const N: usize = 9;

fn levels(top: &Ordinal) -> Vec<Ordinal> {
    let mut xs: Vec<Ordinal> = (0..5).map(Ordinal::nat).collect();
    xs.extend([Ordinal::omega(), Ordinal::omega().succ(), top.clone()]);
    xs.retain(|x| x <= top);
    xs.dedup();
    xs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn basic_laws(t in toy_table(), eta in eta()) {
        let ctx = BeliefContext::new(&t, eta);
        let top = ctx.top_xi();
        let xs = levels(&top);
        for s in 0..N {
            for u in 0..N {
                prop_assert_eq!(ctx.leq(&Ordinal::zero(), s, u), s <= u);
                let m = ctx.max_level(s, u, &top).unwrap();
                for x in &xs {
                    let holds = ctx.leq(x, s, u);
                    prop_assert_eq!(holds, m.as_ref().is_some_and(|m| x <= m));
                    prop_assert_eq!(ctx.tri_leq(x, s, u), ctx.tri_leq_exhaustive(x, s, u));
                    for v in 0..N {
                        if holds && ctx.leq(x, u, v) {
                            prop_assert!(ctx.leq(x, s, v));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn divergent_table_relates_every_ordered_pair() {
    let t = FunctionalTable::all_divergent();
    let ctx = BeliefContext::new(&t, Ordinal::omega());
    let top = ctx.top_xi();
    for s in 0..7 {
        for u in s..7 {
            assert_eq!(ctx.max_level(s, u, &top), Ok(Some(top.clone())));
        }
        assert!(ctx.witness_set(7).is_empty());
    }
}
