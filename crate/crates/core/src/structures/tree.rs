//! Finite-support branches, η-trees of structures, the branch approximation
//! `τ_s` and the relations `⪯_ξ`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

use super::{bf, lift_search, FinStructure};
use crate::belief::{Belief, BeliefContext};
use crate::error::Error;
use crate::functional::FunctionalTable;
use crate::ordinal::Ordinal;
use crate::value::{FinString, Value};

/// A branch in `2^{<η}`, stored as the sorted positions holding `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Branch(Vec<u64>);

impl Branch {
    pub fn zeros() -> Branch {
        Branch(Vec::new())
    }

    pub fn from_ones(mut ones: Vec<u64>) -> Branch {
        ones.sort_unstable();
        ones.dedup();
        Branch(ones)
    }

    /// The branch of width `width` whose bits are those of `bits`.
    pub fn from_bits(bits: u64, width: u64) -> Branch {
        Branch((0..width).filter(|&i| bits >> i & 1 == 1).collect())
    }

    pub fn ones(&self) -> &[u64] {
        &self.0
    }

    pub fn get(&self, xi: u64) -> bool {
        self.0.binary_search(&xi).is_ok()
    }

    /// The least position where the branches differ.
    pub fn first_difference(&self, other: &Branch) -> Option<u64> {
        let a = self.0.iter().find(|x| !other.get(**x));
        let b = other.0.iter().find(|x| !self.get(**x));
        match (a, b) {
            (Some(x), Some(y)) => Some(*x.min(y)),
            (x, y) => x.or(y).copied(),
        }
    }

    /// `σ↾ξ = τ↾ξ`.
    pub fn agrees_below(&self, other: &Branch, xi: &Ordinal) -> bool {
        match self.first_difference(other) {
            None => true,
            Some(d) => *xi <= Ordinal::nat(d),
        }
    }
}

impl core::fmt::Display for Branch {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// A monotone c.e. operator, decided on finite oracle strings.
pub trait BranchOracle {
    /// `n ∈ W^σ`.
    fn member(&self, n: u64, sigma: &FinString) -> bool;
}

/// `W = ∅`.
pub struct EmptyOracle;

impl BranchOracle for EmptyOracle {
    fn member(&self, _n: u64, _sigma: &FinString) -> bool {
        false
    }
}

/// `n ∈ W^σ` iff machine `machine` of `table` converges on input `machine`
/// with oracle `σ`.
pub struct HaltsOracle {
    pub table: FunctionalTable,
    pub machine: u64,
}

impl BranchOracle for HaltsOracle {
    fn member(&self, _n: u64, sigma: &FinString) -> bool {
        self.table.first_convergence(self.machine, sigma, self.machine).is_some()
    }
}

/// `n ∈ W^σ` iff `σ(pos)` is defined and equals `value`.
pub struct EntryOracle {
    pub pos: usize,
    pub value: Value,
}

impl BranchOracle for EntryOracle {
    fn member(&self, _n: u64, sigma: &FinString) -> bool {
        sigma.get(self.pos) == Some(&self.value)
    }
}

/// Back-and-forth answers `(A_σ, ā) ≤_ξ (A_τ, b̄)` supplied by the user in
/// place of brute force.
pub trait BfOracle {
    fn leq(&self, sigma: &Branch, abar: &[usize], tau: &Branch, bbar: &[usize], xi: u64) -> bool;
}

/// A family `{A_σ : σ ∈ 2^{<n}}` for finite `n`.
pub struct EtaTree {
    levels: u64,
    family: BTreeMap<Branch, FinStructure>,
    oracle: Option<Box<dyn BfOracle>>,
}

impl core::fmt::Debug for EtaTree {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("EtaTree").field("levels", &self.levels).field("family", &self.family).finish()
    }
}

/// A failure of the tree condition: `A_σ ≱_{ξ+1} A_τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeViolation {
    pub sigma: Branch,
    pub tau: Branch,
    pub xi: u64,
}

impl EtaTree {
    /// A tree over every branch of width `levels`, with the tree condition
    /// checked by brute force.
    pub fn new(levels: u64, family: BTreeMap<Branch, FinStructure>) -> Result<EtaTree, Error> {
        let t = EtaTree::unchecked(levels, family)?;
        if t.violation().is_some() {
            return Err(Error::Unsupported(alloc::string::String::from("tree condition fails")));
        }
        Ok(t)
    }

    /// A tree whose family is complete and shares one signature, without the
    /// tree condition.
    pub fn unchecked(levels: u64, family: BTreeMap<Branch, FinStructure>) -> Result<EtaTree, Error> {
        if levels >= 16 {
            return Err(Error::Unsupported(alloc::string::String::from("too many levels")));
        }
        for bits in 0..1u64 << levels {
            if !family.contains_key(&Branch::from_bits(bits, levels)) {
                return Err(Error::Unsupported(alloc::format!("no structure at branch {}", Branch::from_bits(bits, levels))));
            }
        }
        if family.keys().any(|b| b.ones().iter().any(|&x| x >= levels)) {
            return Err(Error::Unsupported(alloc::string::String::from("branch wider than the tree")));
        }
        let mut arities = family.values().map(FinStructure::arities);
        let first = arities.next().unwrap_or_default();
        if arities.any(|a| a != first) {
            return Err(Error::ArityMismatch);
        }
        Ok(EtaTree { levels, family, oracle: None })
    }

    pub fn with_oracle(mut self, oracle: Box<dyn BfOracle>) -> EtaTree {
        self.oracle = Some(oracle);
        self
    }

    pub fn levels(&self) -> u64 {
        self.levels
    }

    pub fn family(&self) -> &BTreeMap<Branch, FinStructure> {
        &self.family
    }

    pub fn structure(&self, sigma: &Branch) -> &FinStructure {
        &self.family[sigma]
    }

    /// `(A_σ, ā) ≤_ξ (A_τ, b̄)`.
    pub fn leq(&self, sigma: &Branch, abar: &[usize], tau: &Branch, bbar: &[usize], xi: u64) -> bool {
        match &self.oracle {
            Some(o) => o.leq(sigma, abar, tau, bbar, xi),
            None => bf(self.structure(sigma), abar, self.structure(tau), bbar, xi),
        }
    }

    /// Some `c̄ ⊇ ā` with `(A_τ, b̄) ≤_β (A_σ, c̄)`, given
    /// `(A_σ, ā) ≤_{β+1} (A_τ, b̄)`.
    pub fn lift(&self, sigma: &Branch, abar: &[usize], tau: &Branch, bbar: &[usize], beta: u64) -> Result<Vec<usize>, Error> {
        if !self.leq(sigma, abar, tau, bbar, beta + 1) {
            return Err(Error::NoWitness);
        }
        let size = self.structure(sigma).size();
        lift_search(size, abar, bbar, |c| self.leq(tau, bbar, sigma, c, beta)).ok_or(Error::NoWitness)
    }

    /// The first failure of `σ↾ξ = τ↾ξ & σ(ξ) ≤ τ(ξ) ⇒ A_σ ≥_{ξ+1} A_τ`.
    pub fn violation(&self) -> Option<TreeViolation> {
        for sigma in self.family.keys() {
            for tau in self.family.keys() {
                for xi in 0..self.levels {
                    let below = sigma.agrees_below(tau, &Ordinal::nat(xi));
                    if below && sigma.get(xi) <= tau.get(xi) && !self.leq(tau, &[], sigma, &[], xi + 1) {
                        return Some(TreeViolation { sigma: sigma.clone(), tau: tau.clone(), xi });
                    }
                }
            }
        }
        None
    }
}

/// `τ_s`: bit `ξ` is set iff `∇_s^{ξ+1} ≠ ⟨⟩` and `n ∈ W^{∇_s^{ξ+1}}`, for
/// finite `ξ < width`.
pub fn tau_approx(ctx: &BeliefContext, w: &dyn BranchOracle, n: u64, s: usize, width: &Ordinal) -> Branch {
    let tower = ctx.tower();
    let mut ones = Vec::new();
    let mut xi = 0u64;
    while Ordinal::nat(xi) < *width {
        let Ok(level) = tower.level_of(&Ordinal::nat(xi + 1)) else { break };
        if !tower.nonempty(&level, s) {
            break;
        }
        if w.member(n, &tower.nabla(&level, s)) {
            ones.push(xi);
        }
        xi += 1;
    }
    Branch(ones)
}

/// `s ⪯_ξ t ⟺ s ≤_ξ t & τ_s↾ξ = τ_t↾ξ`.
pub struct PreLeq<'c, 'a> {
    ctx: &'c BeliefContext<'a>,
    oracle: &'c dyn BranchOracle,
    n: u64,
    width: Ordinal,
    taus: RefCell<Vec<Branch>>,
}

impl<'c, 'a> PreLeq<'c, 'a> {
    pub fn new(ctx: &'c BeliefContext<'a>, oracle: &'c dyn BranchOracle, n: u64, width: Ordinal) -> PreLeq<'c, 'a> {
        PreLeq { ctx, oracle, n, width, taus: RefCell::new(Vec::new()) }
    }

    pub fn ctx(&self) -> &'c BeliefContext<'a> {
        self.ctx
    }

    pub fn width(&self) -> &Ordinal {
        &self.width
    }

    pub fn tau(&self, s: usize) -> Branch {
        while self.taus.borrow().len() <= s {
            let k = self.taus.borrow().len();
            let t = tau_approx(self.ctx, self.oracle, self.n, k, &self.width);
            self.taus.borrow_mut().push(t);
        }
        self.taus.borrow()[s].clone()
    }
}

impl Belief for PreLeq<'_, '_> {
    fn leq(&self, xi: &Ordinal, s: usize, t: usize) -> bool {
        self.ctx.leq(xi, s, t) && self.tau(s).agrees_below(&self.tau(t), xi)
    }

    fn max_level(&self, t: usize, s: usize, cap: &Ordinal) -> Result<Option<Ordinal>, Error> {
        let Some(m) = self.ctx.max_level(t, s, cap)? else { return Ok(None) };
        Ok(Some(match self.tau(t).first_difference(&self.tau(s)) {
            Some(d) if Ordinal::nat(d) < m => Ordinal::nat(d),
            _ => m,
        }))
    }

    fn top(&self) -> Ordinal {
        self.ctx.top()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::table;

    #[test]
    fn branch_basics() {
        let a = Branch::from_ones(alloc::vec![3, 1]);
        let b = Branch::from_bits(0b0010, 4);
        assert!(a.get(1) && a.get(3) && !a.get(0));
        assert_eq!(a.first_difference(&b), Some(3));
        assert!(a.agrees_below(&b, &Ordinal::nat(3)));
        assert!(!a.agrees_below(&b, &Ordinal::omega()));
        assert_eq!(a.first_difference(&a), None);
    }

    #[test]
    fn empty_oracle_gives_zeros() {
        let t = table("late").unwrap();
        let ctx = BeliefContext::new(&t, Ordinal::nat(2));
        for s in 0..10 {
            assert_eq!(tau_approx(&ctx, &EmptyOracle, 0, s, &Ordinal::omega()), Branch::zeros());
        }
        let pre = PreLeq::new(&ctx, &EmptyOracle, 0, Ordinal::nat(2));
        for s in 0..8 {
            for t in 0..8 {
                for xi in [Ordinal::zero(), Ordinal::one(), Ordinal::omega()] {
                    assert_eq!(pre.leq(&xi, s, t), ctx.leq(&xi, s, t));
                }
            }
        }
    }

    #[test]
    fn halting_machine_flips_bit_zero() {
        let t = table("halting").unwrap();
        let ctx = BeliefContext::new(&t, Ordinal::one());
        let w = HaltsOracle { table: t.clone(), machine: 0 };
        let base = ctx.tower().level_of(&Ordinal::one()).unwrap();
        for s in 0..12 {
            let covers = ctx.tower().nabla(&base, s).len() >= 3;
            assert_eq!(tau_approx(&ctx, &w, 0, s, &Ordinal::one()).get(0), covers, "s={s}");
        }
        assert_eq!(tau_approx(&ctx, &w, 0, 0, &Ordinal::one()), Branch::zeros());
    }
}
