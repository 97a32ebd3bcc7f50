use proptest::prelude::*;
use truestage::fixtures::table;
use truestage::system::{enumerate, run, verify_run, Violation, BUILTIN_SYSTEMS};
use truestage::{BeliefContext, Composite, Error, Ordinal, Run};

#[test]
fn every_builtin_is_deterministic_and_sound() {
    let t = table("break").unwrap();
    let ctx = BeliefContext::new(&t, Ordinal::nat(2));
    for name in BUILTIN_SYSTEMS.iter().filter(|n| **n != "broken") {
        let sys = Composite::builtin(name, ctx.top_xi()).unwrap();
        let a = run(&ctx, &sys, 25).unwrap();
        assert_eq!(run(&ctx, &sys, 25).unwrap(), a, "{name}");
        assert_eq!(verify_run(&ctx, &sys, &a), Ok(()), "{name}");
        assert!(enumerate(&sys, &Run::default()).is_empty());
    }
    assert!(Composite::builtin("nope", Ordinal::one()).is_none());
}

#[test]
fn system_above_the_context_is_rejected() {
    let t = table("divergent").unwrap();
    let ctx = BeliefContext::new(&t, Ordinal::one());
    let sys = Composite::builtin("counter", Ordinal::nat(2).omega_to()).unwrap();
    assert_eq!(run(&ctx, &sys, 3), Err(Error::OutOfRange));
}

#[test]
fn congruence_chains_reach_intermediate_levels() {
    let t = table("halting").unwrap();
    let ctx = BeliefContext::new(&t, Ordinal::nat(2));
    let sys = Composite::builtin("congruence", ctx.top_xi()).unwrap();
    let r = run(&ctx, &sys, 20).unwrap();
    assert!(r.trace.iter().any(|rec| rec.chain.len() >= 3));
    for rec in &r.trace {
        for link in &rec.chain {
            assert_eq!(link.state, r.states[link.s]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lowering_a_counter_state_is_caught(at in 1usize..15, by in 1u64..4) {
        let t = table("late").unwrap();
        let ctx = BeliefContext::new(&t, Ordinal::one());
        let sys = Composite::builtin("counter", ctx.top_xi()).unwrap();
        let mut r = run(&ctx, &sys, 15).unwrap();
        let lowered = r.states[at].saturating_sub(by);
        prop_assume!(lowered < r.states[at - 1]);
        r.states[at] = lowered;
        let restraint_broken = matches!(verify_run(&ctx, &sys, &r), Err(Violation::Restraint { .. }));
        prop_assert!(restraint_broken);
    }
}
