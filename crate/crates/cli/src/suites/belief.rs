//! Laws of the stage preorders over every bundled toy table.

use std::collections::{BTreeMap, BTreeSet};

use truestage::fixtures::{table, TABLE_NAMES};
use truestage::{Belief, BeliefContext, Ordinal};

use super::Report;

/// The ordinals at which the relations on stages `≤ stages` can change,
/// together with their neighbours and a few small levels.
pub fn sweep_levels(ctx: &BeliefContext, stages: usize) -> Vec<Ordinal> {
    let top = ctx.top_xi();
    let mut set = BTreeSet::new();
    for n in 0..4 {
        set.insert(Ordinal::nat(n));
    }
    set.insert(top.clone());
    let add_around = |set: &mut BTreeSet<Ordinal>, o: Ordinal| {
        if let Some(p) = o.pred() {
            if let Some(pp) = p.pred() {
                set.insert(pp);
            }
            set.insert(p);
        }
        set.insert(o);
    };
    for s in 0..=stages {
        for t in s..=stages {
            if let Some(l) = ctx.least_fail(s, t) {
                add_around(&mut set, ctx.level_ordinal(&l));
            }
        }
    }
    for w in ctx.witness_set(stages) {
        add_around(&mut set, ctx.level_ordinal(&w.gamma));
        add_around(&mut set, ctx.level_ordinal(&w.lambda));
    }
    for l in ctx.tower().candidate_levels(5) {
        add_around(&mut set, ctx.level_ordinal(&l));
    }
    let succs: Vec<Ordinal> = set.iter().map(Ordinal::succ).collect();
    set.extend(succs);
    set.into_iter().filter(|x| *x <= top).collect()
}

/// `rel[i][s][t]` for every swept level `xs[i]`.
struct Table {
    xs: Vec<Ordinal>,
    index: BTreeMap<Ordinal, usize>,
    rel: Vec<Vec<Vec<bool>>>,
}

impl Table {
    fn build(xs: &[Ordinal], stages: usize, f: impl Fn(&Ordinal, usize, usize) -> bool) -> Table {
        let rel = xs
            .iter()
            .map(|x| (0..=stages).map(|s| (0..=stages).map(|t| f(x, s, t)).collect()).collect())
            .collect();
        let index = xs.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
        Table { xs: xs.to_vec(), index, rel }
    }

    fn succ_index(&self, i: usize) -> Option<usize> {
        self.index.get(&self.xs[i].succ()).copied()
    }
}

fn preorder_laws(rep: &mut Report, tag: &str, tab: &Table, n: usize) {
    for (i, x) in tab.xs.iter().enumerate() {
        let r = &tab.rel[i];
        for s in 0..n {
            rep.check(r[s][s], || format!("{tag}: reflexivity fails at ξ={x} s={s}"));
            for t in 0..n {
                if !r[s][t] {
                    continue;
                }
                for u in 0..n {
                    if r[t][u] {
                        rep.check(r[s][u], || format!("{tag}: transitivity fails at ξ={x} {s},{t},{u}"));
                    }
                }
            }
        }
    }
}

fn club(rep: &mut Report, tag: &str, tab: &Table, n: usize) {
    for i in 0..tab.xs.len() {
        let Some(j) = tab.succ_index(i) else { continue };
        let (lo, hi) = (&tab.rel[i], &tab.rel[j]);
        for r in 0..n {
            for s in r + 1..n {
                for t in s + 1..n {
                    if hi[r][t] && lo[s][t] {
                        rep.check(hi[r][s], || format!("{tag}: (♣) fails at ξ={} r={r} s={s} t={t}", tab.xs[i]));
                    }
                }
            }
        }
    }
}

fn observation(rep: &mut Report, tag: &str, tab: &Table, n: usize) {
    for (i, x) in tab.xs.iter().enumerate() {
        let rel = &tab.rel[i];
        for r in 0..n {
            for s in r + 1..n {
                for t in s + 1..n {
                    if rel[r][t] && rel[s][t] {
                        rep.check(rel[r][s], || format!("{tag}: covering fails at ξ={x} r={r} s={s} t={t}"));
                    }
                }
            }
        }
    }
}

/// The laws every belief relation satisfies, checked at the levels `xs`.
pub fn generic_laws(rep: &mut Report, tag: &str, b: &dyn Belief, xs: &[Ordinal], stages: usize) {
    let n = stages + 1;
    let top = b.top();
    let leq = Table::build(xs, stages, |x, s, t| b.leq(x, s, t));
    for s in 0..n {
        for t in 0..n {
            rep.check(b.leq(&Ordinal::zero(), s, t) == (s <= t), || format!("{tag}: (B0) fails at {s},{t}"));
        }
    }
    preorder_laws(rep, tag, &leq, n);
    for i in 1..xs.len() {
        for s in 0..n {
            for t in 0..n {
                if leq.rel[i][s][t] {
                    rep.check(leq.rel[i - 1][s][t], || format!("{tag}: (B3) fails at ξ={} {s},{t}", xs[i]));
                }
            }
        }
    }
    for s in 0..n {
        for t in s..n {
            match b.max_level(s, t, &top) {
                Ok(Some(m)) => {
                    for (i, x) in xs.iter().enumerate() {
                        rep.check(leq.rel[i][s][t] == (*x <= m), || {
                            format!("{tag}: max level {m} disagrees with ≤ at ξ={x} {s},{t}")
                        });
                    }
                }
                other => rep.check(false, || format!("{tag}: max level {s},{t} gave {other:?}")),
            }
        }
    }
    club(rep, tag, &leq, n);
    observation(rep, tag, &leq, n);
}

/// All laws for one table and one `η`.
pub fn check_context(rep: &mut Report, tag: &str, ctx: &BeliefContext, stages: usize) {
    let n = stages + 1;
    let xs = sweep_levels(ctx, stages);
    let top = ctx.top_xi();
    generic_laws(rep, tag, ctx, &xs, stages);
    let leq = Table::build(&xs, stages, |x, s, t| ctx.leq(x, s, t));
    let tri = Table::build(&xs, stages, |x, s, t| ctx.tri_leq(x, s, t));

    for (i, lambda) in xs.iter().enumerate().filter(|(_, x)| x.is_limit()) {
        for s in 0..n {
            for t in 0..n {
                let below = (0..i).all(|j| leq.rel[j][s][t]);
                rep.check(leq.rel[i][s][t] == below, || format!("{tag}: (B4) fails at λ={lambda} {s},{t}"));
            }
        }
    }

    let tower = ctx.tower();
    for (i, x) in xs.iter().enumerate().filter(|(_, x)| **x < top) {
        let level = tower.level_of(&x.succ()).expect("ξ + 1 lies in the tree");
        for s in 0..n {
            for t in 0..n {
                let incl = tower.nabla(&level, s).is_prefix_of(&tower.nabla(&level, t));
                if leq.rel[i][s][t] {
                    rep.check(incl, || format!("{tag}: (B5) fails at ξ={x} {s},{t}"));
                }
                if x.is_finite() && s < t && tower.nonempty(&level, s) {
                    rep.check(leq.rel[i][s][t] == incl, || format!("{tag}: finite shortcut fails at ξ={x} {s},{t}"));
                }
            }
        }
    }

    for (i, x) in xs.iter().enumerate().filter(|(_, x)| **x < top) {
        let actual = match ctx.actual_true_stages(x, stages) {
            Ok(a) => a,
            Err(e) => {
                rep.check(false, || format!("{tag}: actual stages at ξ={x}: {e}"));
                continue;
            }
        };
        for (k, &a) in actual.iter().enumerate() {
            for &b in &actual[k + 1..] {
                rep.check(leq.rel[i][a][b], || format!("{tag}: (B6) chain fails at ξ={x} {a},{b}"));
            }
        }
    }

    club(rep, &format!("{tag} ⊴"), &tri, n);
}

/// The fast and exhaustive evaluations of `⊴_ξ` agree on small stages.
pub fn check_dual_route(rep: &mut Report, tag: &str, ctx: &BeliefContext, stages: usize) {
    let xs = sweep_levels(ctx, stages);
    for x in &xs {
        for s in 0..=stages {
            for t in 0..=stages {
                rep.check(ctx.tri_leq(x, s, t) == ctx.tri_leq_exhaustive(x, s, t), || {
                    format!("{tag}: ⊴ routes disagree at ξ={x} {s},{t}")
                });
            }
        }
    }
}

/// The belief suite at the given stage bound.
pub fn run(stages: usize) -> Report {
    let mut rep = Report::new("belief laws");
    for name in TABLE_NAMES {
        let t = table(name).expect("bundled table");
        for eta in [Ordinal::one(), Ordinal::nat(2), Ordinal::omega()] {
            let tag = format!("{name} η={eta}");
            let ctx = BeliefContext::new(&t, eta);
            check_context(&mut rep, &tag, &ctx, stages);
            check_dual_route(&mut rep, &tag, &ctx, stages.min(8));
        }
    }
    rep
}
