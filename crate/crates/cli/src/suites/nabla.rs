//! Laws of the canonical approximations `∇_s^ξ` on the divergent table and
//! one halting table.

use std::collections::{BTreeMap, BTreeSet};

use truestage::fixtures::table;
use truestage::ordinal::in_tree;
use truestage::transfinite::{Level, Tower};
use truestage::{FinString, Ordinal, PrefixMemo};

use super::Report;

pub const TABLES: [&str; 2] = ["divergent", "halting"];

/// Stages at or below this bound use the brute-force level scan.
const SCAN_STAGES: usize = 12;

/// The limit law at `λ = ω` with `η = ω` runs on stages up to this bound.
const OMEGA_STAGES: usize = 20;

fn incl(tower: &Tower, l: &Level, s: usize, t: usize) -> bool {
    tower.nabla(l, s).is_prefix_of(&tower.nabla(l, t))
}

/// `∇_s^ξ` for every candidate level at the stage bound and every stage.
struct Grid {
    levels: Vec<Level>,
    vals: Vec<Vec<FinString>>,
}

impl Grid {
    fn new(tower: &Tower, stages: usize) -> Grid {
        let levels = tower.candidate_levels(stages);
        let vals = levels.iter().map(|l| (0..=stages).map(|s| tower.nabla(l, s)).collect()).collect();
        Grid { levels, vals }
    }

    fn nonempty_at(&self, s: usize) -> Vec<usize> {
        (0..self.levels.len()).filter(|&i| !self.vals[i][s].is_empty()).collect()
    }
}

/// Paths with at most three entries, each at most `bound`.
fn scan_paths(eta: &Ordinal, bound: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..3 {
        layer = layer.iter().flat_map(|p| (0..=bound).map(move |x| [p.as_slice(), &[x]].concat())).collect();
        out.extend(layer.iter().cloned());
    }
    out.into_iter().filter(|p| in_tree(eta, p)).collect()
}

/// The listed nonempty levels, computed directly, match the cached values,
/// and no level outside the candidates is nonempty.
fn finiteness(rep: &mut Report, tag: &str, tower: &Tower, grid: &Grid, stages: usize) {
    let index: BTreeMap<&Level, usize> = grid.levels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    for s in 0..=stages {
        let cands = tower.candidate_levels(s);
        for w in cands.windows(2) {
            rep.check(tower.cmp(&w[0], &w[1]).is_lt(), || format!("{tag}: candidates out of order at s={s}"));
        }
        let cached: Vec<&Level> = grid.nonempty_at(s).into_iter().map(|i| &grid.levels[i]).collect();
        let listed = tower.nonempty_levels(s);
        rep.check(listed.iter().eq(cached.iter().copied()), || format!("{tag}: nonempty levels disagree at s={s}"));
        for l in &cands {
            let i = index[l];
            rep.check(tower.nonempty(l, s) == !grid.vals[i][s].is_empty(), || format!("{tag}: emptiness routes disagree at {l:?} s={s}"));
        }
        if s <= SCAN_STAGES {
            let known: BTreeSet<Level> = cands.into_iter().collect();
            for p in scan_paths(tower.eta(), s as u64 + 1) {
                let l = Level::Lifted(p);
                if !known.contains(&l) {
                    rep.check(tower.nabla_direct(&l, s).is_empty(), || format!("{tag}: unlisted level {l:?} nonempty at s={s}"));
                }
            }
        }
    }
}

/// Inclusion at a nonempty level passes to every lower level.
fn restriction(rep: &mut Report, tag: &str, grid: &Grid, stages: usize) {
    let mut memo = PrefixMemo::new();
    for s in 0..=stages {
        let levels = grid.nonempty_at(s);
        for t in s..=stages {
            let incs: Vec<bool> = levels.iter().map(|&i| memo.is_prefix(&grid.vals[i][s], &grid.vals[i][t])).collect();
            let Some(h) = incs.iter().rposition(|&b| b) else { continue };
            for (&i, &ok) in levels.iter().zip(&incs).take(h) {
                rep.check(ok, || format!("{tag}: {:?} included at {s},{t} but {:?} is not", grid.levels[levels[h]], grid.levels[i]));
            }
        }
    }
}

/// `∇_s^λ ⊆ ∇_t^λ` iff the same holds at every level below `λ`, whenever
/// `∇_s^λ` is nonempty. Levels outside the candidates are empty throughout.
fn limit_law(rep: &mut Report, tag: &str, tower: &Tower, lambda: &Ordinal, stages: usize) {
    let top = tower.level_of(lambda).expect("λ in range");
    let below: Vec<Level> =
        tower.candidate_levels(stages).into_iter().filter(|l| tower.cmp(l, &top).is_lt()).collect();
    for s in 0..=stages {
        if !tower.nonempty(&top, s) {
            continue;
        }
        for t in 0..=stages {
            let all = below.iter().all(|l| incl(tower, l, s, t));
            rep.check(incl(tower, &top, s, t) == all, || format!("{tag}: limit law fails at λ={lambda} {s},{t}"));
        }
    }
}

/// Correct stages give nested approximations. A level first nonempty at
/// `f` has a correct nonempty stage when `2f` is within the stage bound, and
/// two correct stages of different lengths when `4f` is.
fn convergence(rep: &mut Report, tag: &str, tower: &Tower, grid: &Grid, stages: usize) {
    let truths: Vec<FinString> = grid
        .levels
        .iter()
        .zip(&grid.vals)
        .map(|(l, vals)| tower.nabla_true(l, vals.iter().map(FinString::len).max().unwrap_or(0)).expect("toy table"))
        .collect();
    let mut memo = PrefixMemo::new();
    for ((l, vals), truth) in grid.levels.iter().zip(&grid.vals).zip(&truths) {
        let Some(first) = vals.iter().position(|a| !a.is_empty()) else { continue };
        let flags = tower.correct_stages(l, stages).expect("toy table");
        let mut correct: Vec<(usize, &FinString)> = Vec::new();
        for (s, (a, &ok)) in vals.iter().zip(&flags).enumerate() {
            let direct = memo.is_prefix(a, truth);
            rep.check(ok == direct, || format!("{tag}: correctness routes disagree at {l:?} s={s}"));
            if ok && !a.is_empty() {
                correct.push((s, a));
            }
        }
        if 2 * first <= stages {
            rep.check(!correct.is_empty(), || format!("{tag}: no correct nonempty stage at {l:?}"));
        }
        if 4 * first <= stages {
            let grows = correct.windows(2).any(|w| w[0].1.len() < w[1].1.len());
            rep.check(grows, || format!("{tag}: correct approximations at {l:?} never grow"));
        }
        for w in correct.windows(2) {
            rep.check(memo.is_prefix(w[0].1, w[1].1), || format!("{tag}: correct stages {} and {} diverge at {l:?}", w[0].0, w[1].0));
        }
    }
}

pub fn run(stages: usize) -> Report {
    let mut rep = Report::new("nabla laws");
    for name in TABLES {
        let t = table(name).expect("bundled table");
        let tower = Tower::new(&t, Ordinal::nat(2));
        let tag = format!("{name} η=2");
        let grid = Grid::new(&tower, stages);
        finiteness(&mut rep, &tag, &tower, &grid, stages);
        restriction(&mut rep, &tag, &grid, stages);
        convergence(&mut rep, &tag, &tower, &grid, stages);
        for k in 1..=3 {
            limit_law(&mut rep, &tag, &tower, &Ordinal::omega().mul_nat(k), stages);
        }
        let wide = Tower::new(&t, Ordinal::omega());
        limit_law(&mut rep, &format!("{name} η=ω"), &wide, &Ordinal::omega(), stages.min(OMEGA_STAGES));
    }
    rep
}
