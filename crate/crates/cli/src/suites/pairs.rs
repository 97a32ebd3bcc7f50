//! End-to-end builds of the frozen demo trees and the laws of `⪯`.

use truestage::fixtures::{table, TABLE_NAMES};
use truestage::structures::demo::{pair_structure, pair_tree, two_level_structure, two_level_tree};
use truestage::structures::{build, iso_check, BranchOracle, EmptyOracle, EtaTree, FinStructure, HaltsOracle, LiteralCoding, PreLeq};
use truestage::{BeliefContext, Ordinal};

use super::belief::generic_laws;
use super::Report;

/// Stages for every demo build.
pub const DEMO_STAGES: usize = 40;

/// Builds the tree and checks the diagram against the expected structure
/// and against every other structure of the family.
fn demo(rep: &mut Report, tag: &str, ctx: &BeliefContext, tree: &EtaTree, w: &dyn BranchOracle, expect: &FinStructure) {
    let built = match build(ctx, tree, w, 0, DEMO_STAGES) {
        Ok(b) => b,
        Err(e) => return rep.check(false, || format!("{tag}: build failed: {e}")),
    };
    let coding = LiteralCoding::for_structure(expect);
    let got = iso_check(&coding, &built.diagram, expect);
    rep.check(got == Ok(true), || format!("{tag}: diagram against the expected structure gave {got:?}"));
    for other in tree.family().values().filter(|a| !truestage::structures::isomorphic(a, expect)) {
        let got = iso_check(&coding, &built.diagram, other);
        rep.check(got == Ok(false), || format!("{tag}: diagram against a different structure gave {got:?}"));
    }
}

fn demos(rep: &mut Report) {
    let pair = pair_tree();
    for (name, bit) in [("halting", true), ("divergent", false)] {
        let t = table(name).expect("bundled table");
        let ctx = BeliefContext::new(&t, Ordinal::one());
        let w = HaltsOracle { table: t.clone(), machine: 0 };
        demo(rep, &format!("pair demo on {name}"), &ctx, &pair, &w, &pair_structure(bit));
    }
    let tree = two_level_tree();
    let root = two_level_structure(&truestage::structures::Branch::zeros());
    for name in TABLE_NAMES {
        let t = table(name).expect("bundled table");
        let ctx = BeliefContext::new(&t, Ordinal::one());
        demo(rep, &format!("two-level demo, empty W, on {name}"), &ctx, &tree, &EmptyOracle, &root);
    }
}

/// `⪯` satisfies the laws of a belief relation.
fn pre_laws(rep: &mut Report, stages: usize) {
    for name in TABLE_NAMES {
        let t = table(name).expect("bundled table");
        let ctx = BeliefContext::new(&t, Ordinal::one());
        let w = HaltsOracle { table: t.clone(), machine: 0 };
        for width in [1, 2] {
            let pre = PreLeq::new(&ctx, &w, 0, Ordinal::nat(width));
            let tag = format!("⪯ width {width} on {name}");
            let mut xs: Vec<Ordinal> = (0..=4).map(Ordinal::nat).collect();
            xs.push(ctx.top_xi());
            generic_laws(rep, &tag, &pre, &xs, stages);
        }
    }
}

pub fn run(stages: usize) -> Report {
    let mut rep = Report::new("structure pairs");
    demos(&mut rep);
    pre_laws(&mut rep, stages);
    rep
}
