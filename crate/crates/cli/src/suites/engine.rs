//! Soundness of the run engine on the built-in systems.

use truestage::fixtures::{table, TABLE_NAMES};
use truestage::structures::demo::{pair_tree, two_level_tree};
use truestage::structures::{BranchOracle, EmptyOracle, EtaTree, HaltsOracle, PreLeq, StructSystem};
use truestage::system::{self, EtaSystem, BUILTIN_SYSTEMS};
use truestage::{Belief, BeliefContext, Composite, Error, Ordinal, Run};

use super::Report;

/// Run lengths per `η`; the engine at `η = ω` pays for trees that grow
/// exponentially in the stage.
pub fn run_length(eta: &Ordinal, max: usize) -> usize {
    if eta.is_finite() {
        max
    } else {
        max.min(24)
    }
}

fn check_run(rep: &mut Report, tag: &str, ctx: &dyn Belief, sys: &dyn EtaSystem, stages: usize) {
    let r = match system::run(ctx, sys, stages) {
        Ok(r) => r,
        Err(e) => {
            rep.check(false, || format!("{tag}: engine error {e}"));
            return;
        }
    };
    rep.check(r.len() == stages, || format!("{tag}: run has length {}", r.len()));
    let verdict = system::verify_run(ctx, sys, &r);
    rep.check(verdict.is_ok(), || format!("{tag}: verify_run gave {verdict:?}"));
    for rec in &r.trace {
        let s = rec.stage;
        let chain = &rec.chain;
        rep.check(chain.is_empty() == (s == 0), || format!("{tag}: stage {s} chain emptiness"));
        if let Some(first) = chain.first() {
            rep.check(first.s + 1 == s, || format!("{tag}: stage {s} chain starts at {}", first.s));
        }
        for w in chain.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            rep.check(b.s < a.s && a.xi < b.xi, || format!("{tag}: stage {s} chain not monotone"));
            rep.check(ctx.leq(&a.xi.succ(), b.s, a.s), || {
                format!("{tag}: stage {s}: {} ≰_{} {}", b.s, a.xi.succ(), a.s)
            });
        }
        for link in chain {
            rep.check(ctx.leq(&link.xi, link.s, s), || {
                format!("{tag}: stage {s}: {} ≰_{} {s}", link.s, link.xi)
            });
        }
    }
    for k in 0..r.len() {
        let a = system::enumerate(sys, &prefix(&r, k));
        let b = system::enumerate(sys, &prefix(&r, k + 1));
        rep.check(a.is_subset(&b), || format!("{tag}: enumeration shrinks at {k}"));
    }
    let again = system::run(ctx, sys, stages);
    rep.check(again.as_ref() == Ok(&r), || format!("{tag}: rerun differs"));
}

fn prefix(r: &Run, k: usize) -> Run {
    Run { states: r.states[..k].to_vec(), trace: r.trace[..k].to_vec() }
}

fn check_broken(rep: &mut Report, tag: &str, ctx: &BeliefContext, eta: Ordinal) {
    let sys = Composite::builtin("broken", eta).expect("built-in");
    let ok = system::run(ctx, &sys, 5);
    rep.check(ok.is_ok(), || format!("{tag}: broken system failed before its bad stage: {ok:?}"));
    match system::run(ctx, &sys, 10) {
        Err(Error::ExtendibilityViolated { stage: 5, .. }) => rep.check(true, String::new),
        other => rep.check(false, || format!("{tag}: broken callback gave {other:?}")),
    }
}

fn check_tree(rep: &mut Report, tag: &str, ctx: &BeliefContext, tree: &EtaTree, w: &dyn BranchOracle, stages: usize) {
    let pre = PreLeq::new(ctx, w, 0, Ordinal::nat(tree.levels()));
    let sys = StructSystem::new(tree, &pre);
    check_run(rep, tag, &pre, &sys, stages);
}

/// The engine suite with runs of length at most `stages`.
pub fn run(stages: usize) -> Report {
    let mut rep = Report::new("engine soundness");
    for name in TABLE_NAMES {
        let t = table(name).expect("bundled table");
        for eta in [Ordinal::one(), Ordinal::nat(2), Ordinal::omega()] {
            let ctx = BeliefContext::new(&t, eta.clone());
            let len = run_length(&eta, stages);
            for sys_eta in [Ordinal::one(), Ordinal::omega(), ctx.top_xi()] {
                for sys_name in BUILTIN_SYSTEMS.iter().filter(|n| **n != "broken") {
                    let sys = Composite::builtin(sys_name, sys_eta.clone()).expect("built-in");
                    let tag = format!("{sys_name}/{sys_eta} on {name} η={eta}");
                    check_run(&mut rep, &tag, &ctx, &sys, len);
                }
            }
            check_broken(&mut rep, &format!("broken on {name} η={eta}"), &ctx, ctx.top_xi());
        }
        let ctx = BeliefContext::new(&t, Ordinal::one());
        let halts = HaltsOracle { table: t.clone(), machine: 0 };
        check_tree(&mut rep, &format!("pair tree on {name}"), &ctx, &pair_tree(), &halts, stages);
        check_tree(&mut rep, &format!("two-level tree on {name}"), &ctx, &two_level_tree(), &halts, stages);
        check_tree(&mut rep, &format!("two-level tree, empty W, on {name}"), &ctx, &two_level_tree(), &EmptyOracle, stages);
    }
    rep
}
