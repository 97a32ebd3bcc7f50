//! Apparent true stages: the preorders `⊴_ξ`, the witness set `C`, the
//! corrected relations `≤_ξ` and the greatest-level search.

use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::error::Error;
use crate::functional::FunctionalTable;
use crate::ordinal::{Ordinal, TuplePath};
use crate::transfinite::{Level, Tower};

/// A triple `(λ, u, v) ∈ C` together with the blamed level `γ_{λ,v}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTriple {
    pub lambda: Level,
    pub u: usize,
    pub v: usize,
    pub gamma: Level,
}

/// A nested family of stage preorders indexed by ordinals.
pub trait Belief {
    /// `s ≤_ξ t`.
    fn leq(&self, xi: &Ordinal, s: usize, t: usize) -> bool;

    /// The greatest `ξ ≤ cap` with `t ≤_ξ s`, or `None` when `t ≰_0 s`.
    fn max_level(&self, t: usize, s: usize, cap: &Ordinal) -> Result<Option<Ordinal>, Error>;

    /// The greatest level the relations are defined at.
    fn top(&self) -> Ordinal;
}

/// The ambient `(table, η)` with caches for failing levels and witnesses.
pub struct BeliefContext<'a> {
    tower: Tower<'a>,
    fail: RefCell<BTreeMap<(usize, usize), Option<Level>>>,
    triples: RefCell<BTreeMap<usize, Rc<Vec<WitnessTriple>>>>,
}

impl<'a> BeliefContext<'a> {
    pub fn new(table: &'a FunctionalTable, eta: Ordinal) -> BeliefContext<'a> {
        BeliefContext { tower: Tower::new(table, eta), fail: RefCell::new(BTreeMap::new()), triples: RefCell::new(BTreeMap::new()) }
    }

    pub fn tower(&self) -> &Tower<'a> {
        &self.tower
    }

    pub fn table(&self) -> &'a FunctionalTable {
        self.tower.table()
    }

    pub fn eta(&self) -> &Ordinal {
        self.tower.eta()
    }

    /// `ω^η`, the largest admissible `ξ`.
    pub fn top_xi(&self) -> Ordinal {
        self.tower.eta().omega_to()
    }

    pub fn level_ordinal(&self, level: &Level) -> Ordinal {
        self.tower.level_ordinal(level).expect("levels produced here lie in the tree")
    }

    /// `∇_s^γ ⊄ ∇_t^γ`.
    pub fn fails(&self, level: &Level, s: usize, t: usize) -> bool {
        !self.tower.nabla(level, s).is_prefix_of(&self.tower.nabla(level, t))
    }

    /// The least level `γ` with `∇_s^γ ⊄ ∇_t^γ`, if any.
    pub fn least_fail(&self, s: usize, t: usize) -> Option<Level> {
        if let Some(l) = self.fail.borrow().get(&(s, t)) {
            return l.clone();
        }
        let out = self.descend(s, t);
        self.fail.borrow_mut().insert((s, t), out.clone());
        out
    }

    fn descend(&self, s: usize, t: usize) -> Option<Level> {
        if s > t {
            return Some(Level::Base);
        }
        let top = self.tower.top();
        if !self.tower.nonempty(&top, s) || !self.fails(&top, s, t) {
            return None;
        }
        let mut path: TuplePath = Vec::new();
        'down: loop {
            if self.tower.is_leaf(&path) {
                return Some(Level::Lifted(path));
            }
            let mut k = 0;
            loop {
                let mut child = path.clone();
                child.push(k);
                let level = Level::Lifted(child);
                if !self.tower.nonempty(&level, s) {
                    return Some(Level::Lifted(path));
                }
                if self.fails(&level, s, t) {
                    let Level::Lifted(child) = level else { unreachable!() };
                    path = child;
                    continue 'down;
                }
                k += 1;
            }
        }
    }

    /// `s ⊴_ξ t`.
    pub fn tri_leq(&self, xi: &Ordinal, s: usize, t: usize) -> bool {
        match self.least_fail(s, t) {
            None => true,
            Some(l) => xi.succ() < self.level_ordinal(&l),
        }
    }

    /// `s ⊴_ξ t` by comparing every nonempty level `γ ≤ ξ + 1` of stage `s`
    /// directly.
    pub fn tri_leq_exhaustive(&self, xi: &Ordinal, s: usize, t: usize) -> bool {
        if s > t {
            return false;
        }
        let bound = xi.succ();
        self.tower.nonempty_levels(s).iter().filter(|l| self.level_ordinal(l) <= bound).all(|l| {
            self.tower.nabla_direct(l, s).is_prefix_of(&self.tower.nabla_direct(l, t))
        })
    }

    /// For a successor level `λ + 1` with `λ` a limit strictly inside the
    /// tree, the path of `λ`.
    pub fn limit_below(&self, level: &Level) -> Option<TuplePath> {
        let p = level.path()?;
        let end = p.iter().rposition(|&n| n > 0)?;
        let mut q = p[..=end].to_vec();
        *q.last_mut().unwrap() -= 1;
        (!self.tower.is_leaf(&q)).then_some(q)
    }

    /// The triples of `C` whose third entry is `v`.
    pub fn triples_at(&self, v: usize) -> Rc<Vec<WitnessTriple>> {
        if let Some(c) = self.triples.borrow().get(&v) {
            return c.clone();
        }
        let mut out = Vec::new();
        for u in 0..v {
            if let Some(t) = self.triple(u, v) {
                out.push(t);
            }
        }
        let out = Rc::new(out);
        self.triples.borrow_mut().insert(v, out.clone());
        out
    }

    fn triple(&self, u: usize, v: usize) -> Option<WitnessTriple> {
        let next = self.least_fail(u, v)?;
        let lp = self.limit_below(&next)?;
        let lambda = Level::Lifted(lp.clone());
        let a = self.tower.nabla(&lambda, u);
        let b = self.tower.nabla(&lambda, v);
        if a == b {
            return None;
        }
        for r in u + 1..v {
            let c = self.tower.nabla(&lambda, r);
            let between = a.is_prefix_of(&c) && a != c && c.is_prefix_of(&b) && c != b;
            if between && self.fails(&next, u, r) {
                return None;
            }
        }
        let mut gp = lp;
        gp.push(b.len() as u64 - 1);
        Some(WitnessTriple { lambda, u, v, gamma: Level::Lifted(gp) })
    }

    /// All triples of `C` with `u < v ≤ bound`.
    pub fn witness_set(&self, bound: usize) -> Vec<WitnessTriple> {
        (0..=bound).flat_map(|v| self.triples_at(v).as_ref().clone()).collect()
    }

    /// Whether a triple blocks `s ≤_ξ t` through its blamed level.
    fn blocks(&self, w: &WitnessTriple, s: usize, t: usize) -> Option<Ordinal> {
        if !(w.u <= s && s < w.v && w.v <= t) {
            return None;
        }
        let g = self.level_ordinal(&w.gamma);
        self.tri_leq(&g, w.v, t).then_some(g)
    }

    /// The witnesses relevant to the pair `(s, t)`, as blamed ordinals.
    fn blocking(&self, s: usize, t: usize) -> Vec<Ordinal> {
        let mut out = Vec::new();
        for v in s + 1..=t {
            for w in self.triples_at(v).iter() {
                if let Some(g) = self.blocks(w, s, t) {
                    out.push(g);
                }
            }
        }
        out
    }

    /// `{t ≤ T : t ≤_ξ T}`.
    pub fn apparent_true_stages(&self, xi: &Ordinal, big_t: usize) -> Vec<usize> {
        (0..=big_t).filter(|&t| self.leq(xi, t, big_t)).collect()
    }

    /// `{t ≤ T : ⟨⟩ ≠ ∇_t^{ξ+1} ⊂ ∇^{ξ+1}}`. Requires a toy table.
    pub fn actual_true_stages(&self, xi: &Ordinal, big_t: usize) -> Result<Vec<usize>, Error> {
        if !self.table().is_toy() {
            return Err(Error::UndecidableMode);
        }
        let level = self.tower.level_of(&xi.succ())?;
        let mut out = Vec::new();
        for t in 0..=big_t {
            if self.tower.nonempty(&level, t) && self.tower.is_correct(&level, t)? {
                out.push(t);
            }
        }
        Ok(out)
    }
}

impl Belief for BeliefContext<'_> {
    fn top(&self) -> Ordinal {
        self.top_xi()
    }

    fn leq(&self, xi: &Ordinal, s: usize, t: usize) -> bool {
        self.tri_leq(xi, s, t) && self.blocking(s, t).iter().all(|g| g >= xi)
    }

    fn max_level(&self, t: usize, s: usize, cap: &Ordinal) -> Result<Option<Ordinal>, Error> {
        if t > s {
            return Ok(None);
        }
        let mut best = cap.clone();
        let mut gap = None;
        if let Some(l) = self.least_fail(t, s) {
            let beta = self.level_ordinal(&l).pred().ok_or(Error::ContinuityGap { t, s })?;
            match beta.pred() {
                Some(m) => best = best.min(m),
                None => gap = Some(beta),
            }
        }
        for g in self.blocking(t, s) {
            best = best.min(g);
        }
        if gap.is_some_and(|b| best >= b) {
            return Err(Error::ContinuityGap { t, s });
        }
        if cfg!(debug_assertions) && (!self.leq(&best, t, s) || (best < *cap && self.leq(&best.succ(), t, s))) {
            return Err(Error::ContinuityGap { t, s });
        }
        Ok(Some(best))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::ToyBehavior;

    fn late_table() -> FunctionalTable {
        FunctionalTable::toy([(1, ToyBehavior::halting(5, crate::Value::Nat(0)))])
    }

    #[test]
    fn base_level_is_numeric_order() {
        let t = late_table();
        let ctx = BeliefContext::new(&t, Ordinal::one());
        for s in 0..12 {
            for u in 0..12 {
                assert_eq!(ctx.tri_leq(&Ordinal::zero(), s, u), s <= u);
                assert_eq!(ctx.leq(&Ordinal::zero(), s, u), s <= u);
            }
        }
    }

    #[test]
    fn divergent_table_believes_everything() {
        let t = FunctionalTable::all_divergent();
        for eta in [Ordinal::one(), Ordinal::nat(2), Ordinal::omega()] {
            let ctx = BeliefContext::new(&t, eta);
            let top = ctx.top_xi();
            for s in 0..9 {
                for u in s..9 {
                    assert_eq!(ctx.least_fail(s, u), None);
                    assert!(ctx.leq(&top, s, u));
                }
                if s > 0 {
                    assert_eq!(ctx.max_level(s - 1, s, &top).unwrap(), Some(top.clone()));
                }
            }
            assert!(ctx.witness_set(8).is_empty());
        }
    }

    #[test]
    fn late_convergence_breaks_level_one() {
        let t = late_table();
        let ctx = BeliefContext::new(&t, Ordinal::one());
        assert!(ctx.leq(&Ordinal::zero(), 3, 5));
        assert!(!ctx.leq(&Ordinal::one(), 3, 5));
        assert_eq!(ctx.max_level(3, 5, &Ordinal::omega()).unwrap(), Some(Ordinal::zero()));
        assert_eq!(ctx.least_fail(3, 5), Some(Level::Lifted(alloc::vec![0])));
    }

    #[test]
    fn fast_matches_exhaustive() {
        let t = late_table();
        for eta in [Ordinal::one(), Ordinal::nat(2), Ordinal::omega()] {
            let ctx = BeliefContext::new(&t, eta);
            let xis = [Ordinal::zero(), Ordinal::one(), Ordinal::nat(3), Ordinal::omega(), ctx.top_xi()];
            for s in 0..8 {
                for u in 0..8 {
                    for xi in xis.iter().filter(|x| **x <= ctx.top_xi()) {
                        assert_eq!(ctx.tri_leq(xi, s, u), ctx.tri_leq_exhaustive(xi, s, u), "{s} {u} {xi}");
                    }
                }
            }
        }
    }

    #[test]
    fn limit_below_levels() {
        let t = FunctionalTable::all_divergent();
        let ctx = BeliefContext::new(&t, Ordinal::nat(2));
        assert_eq!(ctx.limit_below(&Level::Lifted(alloc::vec![1, 0])), Some(alloc::vec![0]));
        assert_eq!(ctx.limit_below(&Level::Lifted(alloc::vec![0, 3])), None);
        assert_eq!(ctx.limit_below(&Level::Lifted(alloc::vec![0, 0])), None);
        assert_eq!(ctx.limit_below(&Level::Base), None);
    }
}
