//! Transfinite towers of jump approximations and the canonical
//! approximations `∇_s^ξ`.

use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::cmp::Ordering;

use crate::error::Error;
use crate::functional::{FunctionalTable, Oracle};
use crate::jump::{japprox, japprox_inv, JumpOracle};
use crate::ordinal::{g_eval, iterate_fund, kb_cmp, path_of, Ordinal, TuplePath};
use crate::truth::{agrees, AgreeMemo, TrueJump};
use crate::value::{FinString, Value};

fn pow_finite(table: &FunctionalTable, k: u64, sigma: &FinString) -> FinString {
    if k == 0 {
        return japprox(table, sigma);
    }
    let mut out = Vec::new();
    let mut cur = sigma.clone();
    loop {
        let next = pow_finite(table, k - 1, &cur);
        match next.first() {
            Some(v) => out.push(v.clone()),
            None => break,
        }
        cur = next;
    }
    FinString::from_vec(out)
}

/// `J^{ω^α}(σ) = ⟨J_1^{ω^α}(σ)(0), …, J_{n−1}^{ω^α}(σ)(0)⟩` with `n` least
/// such that `J_n^{ω^α}(σ) = ⟨⟩`; `J^{ω^0} = J`.
pub fn japprox_pow(table: &FunctionalTable, alpha: &Ordinal, sigma: &FinString) -> FinString {
    if let Some(k) = alpha.as_nat() {
        return pow_finite(table, k, sigma);
    }
    let mut out = Vec::new();
    let mut cur = sigma.clone();
    let mut n = 0;
    loop {
        let beta = alpha.fund(n).expect("alpha is positive");
        let next = japprox_pow(table, &beta, &cur);
        match next.first() {
            Some(v) => out.push(v.clone()),
            None => break,
        }
        cur = next;
        n += 1;
    }
    FinString::from_vec(out)
}

/// `J_n^{ω^α}(σ) = J^{ω^{α[n−1]}} ∘ ⋯ ∘ J^{ω^{α[0]}}(σ)`.
pub fn japprox_pow_n(table: &FunctionalTable, alpha: &Ordinal, n: u64, sigma: &FinString) -> Result<FinString, Error> {
    let mut cur = sigma.clone();
    for i in 0..n {
        cur = japprox_pow(table, &alpha.fund(i)?, &cur);
    }
    Ok(cur)
}

/// Inverse of [`japprox_pow`] on strings of length at least 2.
pub fn japprox_pow_inv(alpha: &Ordinal, tau: &FinString) -> Result<FinString, Error> {
    if alpha.is_zero() {
        return japprox_inv(tau);
    }
    let last = tau.last().ok_or(Error::EmptyInput)?;
    let mut x = FinString::from_vec(alloc::vec![last.clone()]);
    for j in (0..tau.len() as u64).rev() {
        x = japprox_pow_inv(&alpha.fund(j)?, &x)?;
    }
    Ok(x)
}

/// `J^{ω^η}_{⟨n₀,…,n_k⟩} = J^{ω^{η[n₀]}}_{⟨n₁,…,n_k⟩} ∘ J_{n₀}^{ω^η}`.
pub fn japprox_path(table: &FunctionalTable, eta: &Ordinal, path: &[u64], sigma: &FinString) -> Result<FinString, Error> {
    let mut cur_eta = eta.clone();
    let mut cur = sigma.clone();
    for &n in path {
        if cur_eta.is_zero() {
            return Err(Error::NotInTree);
        }
        cur = japprox_pow_n(table, &cur_eta, n, &cur)?;
        cur_eta = cur_eta.fund(n)?;
    }
    Ok(japprox_pow(table, &cur_eta, &cur))
}

/// Inverse of [`japprox_path`].
pub fn japprox_path_inv(eta: &Ordinal, path: &[u64], tau: &FinString) -> Result<FinString, Error> {
    let mut etas = Vec::with_capacity(path.len());
    let mut cur_eta = eta.clone();
    for &n in path {
        if cur_eta.is_zero() {
            return Err(Error::NotInTree);
        }
        let next = cur_eta.fund(n)?;
        etas.push(cur_eta);
        cur_eta = next;
    }
    let mut x = japprox_pow_inv(&cur_eta, tau)?;
    for (&n, e) in path.iter().zip(etas.iter()).rev() {
        for i in (0..n).rev() {
            x = japprox_pow_inv(&e.fund(i)?, &x)?;
        }
    }
    Ok(x)
}

const KEEP_DEPTH: usize = 2;
const KEEP_SUM: u64 = 3;

/// A node ordinal with a cheap path for the finite ones.
enum NodeOrd {
    Fin(u64),
    Big(Ordinal),
}

impl From<Ordinal> for NodeOrd {
    fn from(o: Ordinal) -> NodeOrd {
        match o.as_nat() {
            Some(k) => NodeOrd::Fin(k),
            None => NodeOrd::Big(o),
        }
    }
}

impl NodeOrd {
    fn is_zero(&self) -> bool {
        matches!(self, NodeOrd::Fin(0))
    }

    fn fund(&self, n: u64) -> NodeOrd {
        match self {
            NodeOrd::Fin(k) => NodeOrd::Fin(k - 1),
            NodeOrd::Big(o) => NodeOrd::from(o.fund(n).expect("positive")),
        }
    }
}

/// A level `ξ` of the hierarchy: `Base` is `ξ = 1`, `Lifted(p)` is
/// `ξ = 1 + η⟨p⟩`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Base,
    Lifted(TuplePath),
}

impl Level {
    pub fn path(&self) -> Option<&[u64]> {
        match self {
            Level::Base => None,
            Level::Lifted(p) => Some(p),
        }
    }
}

/// Order of levels: `Base` first, then Kleene–Brouwer order on paths.
pub fn level_cmp(a: &Level, b: &Level) -> Ordering {
    match (a, b) {
        (Level::Base, Level::Base) => Ordering::Equal,
        (Level::Base, _) => Ordering::Less,
        (_, Level::Base) => Ordering::Greater,
        (Level::Lifted(p), Level::Lifted(q)) => kb_cmp(p, q),
    }
}

/// `(η, table)` with memoized `∇_s^ξ` and true `∇^ξ`.
pub struct Tower<'a> {
    table: &'a FunctionalTable,
    eta: Ordinal,
    nabla: RefCell<BTreeMap<(Level, usize), FinString>>,
    truth: RefCell<BTreeMap<Level, Rc<TrueJump<'a>>>>,
}

impl<'a> Tower<'a> {
    pub fn new(table: &'a FunctionalTable, eta: Ordinal) -> Tower<'a> {
        Tower { table, eta, nabla: RefCell::new(BTreeMap::new()), truth: RefCell::new(BTreeMap::new()) }
    }

    pub fn table(&self) -> &'a FunctionalTable {
        self.table
    }

    pub fn eta(&self) -> &Ordinal {
        &self.eta
    }

    /// The top level `1 + ω^η`.
    pub fn top(&self) -> Level {
        Level::Lifted(Vec::new())
    }

    pub fn top_ordinal(&self) -> Ordinal {
        self.eta.omega_to().one_plus()
    }

    /// `η[n₀]⋯[n_k]`.
    pub fn node_ordinal(&self, path: &[u64]) -> Result<Ordinal, Error> {
        iterate_fund(&self.eta, path).ok_or(Error::NotInTree)
    }

    pub fn is_leaf(&self, path: &[u64]) -> bool {
        iterate_fund(&self.eta, path).is_some_and(|o| o.is_zero())
    }

    pub fn level_ordinal(&self, level: &Level) -> Result<Ordinal, Error> {
        match level {
            Level::Base => Ok(Ordinal::one()),
            Level::Lifted(p) => Ok(g_eval(&self.eta, p)?.one_plus()),
        }
    }

    /// The level for `1 ≤ ξ ≤ 1 + ω^η`.
    pub fn level_of(&self, xi: &Ordinal) -> Result<Level, Error> {
        if *xi == Ordinal::one() {
            return Ok(Level::Base);
        }
        let alpha = xi.minus_one_plus().ok_or(Error::OutOfRange)?;
        Ok(Level::Lifted(path_of(&self.eta, &alpha)?))
    }

    /// The level `ξ + 1`, or `None` at the top.
    pub fn succ_level(&self, level: &Level) -> Option<Level> {
        let xi = self.level_ordinal(level).ok()?;
        self.level_of(&xi.succ()).ok()
    }

    pub fn cmp(&self, a: &Level, b: &Level) -> Ordering {
        level_cmp(a, b)
    }

    /// The string the last jump of `p` is applied to: `0^s` at the root,
    /// `P(q) ` at `q⌢0` and `∇_s` of `q⌢(k−1)` at `q⌢k`.
    fn pre(&self, path: &[u64], s: usize) -> FinString {
        match path.split_last() {
            None => FinString::zeros(s),
            Some((&0, parent)) => self.pre(parent, s),
            Some((&k, parent)) => {
                let mut left = parent.to_vec();
                left.push(k - 1);
                self.nabla(&Level::Lifted(left), s)
            }
        }
    }

    /// Whether `∇_s^ξ ≠ ⟨⟩`, decided from the input of the last jump.
    pub fn nonempty(&self, level: &Level, s: usize) -> bool {
        match level {
            Level::Base => s > 0,
            Level::Lifted(p) => {
                if let Some(v) = self.nabla.borrow().get(&(level.clone(), s)) {
                    return !v.is_empty();
                }
                self.pre(p, s).len() >= 2
            }
        }
    }

    /// `∇_s^ξ`: `0^s` at the base, `J^{ω^η}_p(0^s)` at `1 + η⟨p⟩`.
    pub fn nabla(&self, level: &Level, s: usize) -> FinString {
        let p = match level {
            Level::Base => return FinString::zeros(s),
            Level::Lifted(p) => p,
        };
        let key = (level.clone(), s);
        if let Some(v) = self.nabla.borrow().get(&key) {
            return v.clone();
        }
        let ord = NodeOrd::from(self.node_ordinal(p).expect("level path lies in the tree"));
        let input = self.pre(p, s);
        let mut path = p.clone();
        let out = self.compute_node(&mut path, &ord, input, s);
        self.nabla.borrow_mut().insert(key, out.clone());
        out
    }

    /// Nodes whose values are kept when they are computed as part of a
    /// larger node.
    fn keep(path: &[u64]) -> bool {
        path.len() <= KEEP_DEPTH || path.iter().sum::<u64>() <= KEEP_SUM
    }

    /// `J^{ω^β}(input)` for the node at `path` with `β = η[path]`, walking the
    /// children so that shallow ones are memoized on the way.
    fn compute_node(&self, path: &mut Vec<u64>, ord: &NodeOrd, input: FinString, s: usize) -> FinString {
        if input.len() < 2 {
            return FinString::empty();
        }
        if ord.is_zero() {
            return japprox(self.table, &input);
        }
        let mut entries = Vec::new();
        let mut cur = input;
        let mut n = 0u64;
        loop {
            path.push(n);
            let child_ord = ord.fund(n);
            let next = self.compute_node(path, &child_ord, cur, s);
            if Self::keep(path) {
                self.nabla.borrow_mut().insert((Level::Lifted(path.clone()), s), next.clone());
            }
            path.pop();
            match next.first() {
                Some(v) => entries.push(v.clone()),
                None => break,
            }
            cur = next;
            n += 1;
        }
        FinString::from_vec(entries)
    }

    /// `∇_s^ξ` by direct composition, without caches.
    pub fn nabla_direct(&self, level: &Level, s: usize) -> FinString {
        match level {
            Level::Base => FinString::zeros(s),
            Level::Lifted(p) => japprox_path(self.table, &self.eta, p, &FinString::zeros(s)).expect("path in tree"),
        }
    }

    /// Children `p⌢0, p⌢1, …` of a node, while their path sum stays below `s`.
    fn children_below(&self, p: &[u64], s: usize, out: &mut Vec<Level>) {
        if self.is_leaf(p) {
            return;
        }
        let sum: u64 = p.iter().sum();
        let mut n = 0;
        while sum + n < s as u64 {
            let mut q = p.to_vec();
            q.push(n);
            self.children_below(&q, s, out);
            out.push(Level::Lifted(q));
            n += 1;
        }
    }

    /// Every level that can be nonempty at stage `s`: the base and all
    /// `p ∈ T_η` with `n₀ + ⋯ + n_k < s`, in increasing order.
    pub fn candidate_levels(&self, s: usize) -> Vec<Level> {
        if s == 0 {
            return Vec::new();
        }
        let mut out = alloc::vec![Level::Base];
        self.children_below(&[], s, &mut out);
        out.push(self.top());
        out
    }

    /// The levels `ξ` with `∇_s^ξ ≠ ⟨⟩`, in increasing order, by computing
    /// each candidate directly.
    pub fn nonempty_levels(&self, s: usize) -> Vec<Level> {
        self.candidate_levels(s).into_iter().filter(|l| !self.nabla_direct(l, s).is_empty()).collect()
    }

    fn true_oracle(&self, level: &Level) -> Result<Rc<TrueJump<'a>>, Error> {
        if !self.table.is_toy() {
            return Err(Error::UndecidableMode);
        }
        if let Some(o) = self.truth.borrow().get(level) {
            return Ok(o.clone());
        }
        let o = match level {
            Level::Base => TrueJump::zero(self.table),
            Level::Lifted(p) => {
                let inner = self.true_pre(p)?;
                TrueJump::pow(self.table, self.node_ordinal(p)?, inner)
            }
        };
        self.truth.borrow_mut().insert(level.clone(), o.clone());
        Ok(o)
    }

    /// The true counterpart of the input of the last jump at `path`.
    fn true_pre(&self, path: &[u64]) -> Result<Rc<TrueJump<'a>>, Error> {
        match path.split_last() {
            None => self.true_oracle(&Level::Base),
            Some((&0, parent)) => self.true_pre(parent),
            Some((&k, parent)) => {
                let mut left = parent.to_vec();
                left.push(k - 1);
                self.true_oracle(&Level::Lifted(left))
            }
        }
    }

    /// `∇^ξ↾k`. Requires a toy table.
    pub fn nabla_true(&self, level: &Level, k: usize) -> Result<FinString, Error> {
        Ok(self.true_oracle(level)?.prefix(k))
    }

    /// Whether `∇_s^ξ` is an initial segment of `∇^ξ`, decided without
    /// building the true value.
    pub fn is_correct(&self, level: &Level, s: usize) -> Result<bool, Error> {
        let o = self.true_oracle(level)?;
        Ok(agrees(&self.nabla(level, s), &o))
    }

    /// [`Tower::is_correct`] at every stage `s ≤ stages`.
    pub fn correct_stages(&self, level: &Level, stages: usize) -> Result<Vec<bool>, Error> {
        let o = self.true_oracle(level)?;
        let vals: Vec<FinString> = (0..=stages).map(|s| self.nabla(level, s)).collect();
        let mut memo = AgreeMemo::new();
        Ok(vals.iter().map(|a| memo.agrees(a, &o)).collect())
    }
}

/// `𝒥^{ω^α}(Z)`, computed lazily from the chain `Z, 𝒥^{ω^{α[0]}}(Z), …`.
pub struct PowJumpOracle<'a> {
    table: &'a FunctionalTable,
    alpha: Ordinal,
    chain: RefCell<Vec<Rc<dyn Oracle + 'a>>>,
    entries: RefCell<Vec<Value>>,
    cache: RefCell<FinString>,
}

/// `𝒥^{ω^α}(Z)`; plain [`JumpOracle`] when `α = 0`.
pub fn pow_oracle<'a>(table: &'a FunctionalTable, alpha: Ordinal, base: Rc<dyn Oracle + 'a>) -> Rc<dyn Oracle + 'a> {
    if alpha.is_zero() {
        return Rc::new(JumpOracle::new(table, alloc::boxed::Box::new(base)).expect("toy table"));
    }
    Rc::new(PowJumpOracle { table, alpha, chain: RefCell::new(alloc::vec![base]), entries: RefCell::new(Vec::new()), cache: RefCell::new(FinString::empty()) })
}

impl Oracle for PowJumpOracle<'_> {
    fn prefix(&self, n: usize) -> FinString {
        if self.cache.borrow().len() >= n {
            return self.cache.borrow().restrict(n);
        }
        while self.entries.borrow().len() < n {
            let k = self.entries.borrow().len();
            // entry k is the first entry of the (k+1)-th link
            while self.chain.borrow().len() < k + 2 {
                let j = self.chain.borrow().len() - 1;
                let prev = self.chain.borrow()[j].clone();
                let link = pow_oracle(self.table, self.alpha.fund(j as u64).unwrap(), prev);
                self.chain.borrow_mut().push(link);
            }
            let link = self.chain.borrow()[k + 1].clone();
            let v = link.prefix(1).first().cloned().expect("true jumps are infinite");
            self.entries.borrow_mut().push(v);
        }
        if self.cache.borrow().len() < n {
            *self.cache.borrow_mut() = FinString::from_vec(self.entries.borrow()[..n].to_vec());
        }
        self.cache.borrow().restrict(n)
    }
}

impl<T: Oracle + ?Sized> Oracle for Rc<T> {
    fn prefix(&self, n: usize) -> FinString {
        (**self).prefix(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::ToyBehavior;
    use crate::ordinal::parse_ordinal;

    fn codes(lens: &[usize]) -> FinString {
        lens.iter().map(|&n| Value::Code(FinString::zeros(n))).collect()
    }

    #[test]
    fn pow_zero_is_jump() {
        let t = FunctionalTable::all_divergent();
        for n in 0..7 {
            let s = FinString::zeros(n);
            assert_eq!(japprox_pow(&t, &Ordinal::zero(), &s), japprox(&t, &s));
        }
        assert!(japprox_pow(&t, &Ordinal::omega(), &FinString::zeros(1)).is_empty());
    }

    #[test]
    fn omega_jump_of_zeros() {
        // J^ω(0⁵) collects the first entries of J(0⁵), J²(0⁵), J³(0⁵), J⁴(0⁵)
        let t = FunctionalTable::all_divergent();
        let s = FinString::zeros(5);
        let got = japprox_pow(&t, &Ordinal::one(), &s);
        let mut want = Vec::new();
        let mut cur = s.clone();
        loop {
            cur = japprox(&t, &cur);
            if cur.is_empty() {
                break;
            }
            want.push(cur.first().unwrap().clone());
        }
        assert_eq!(want.len(), 4);
        assert_eq!(got, FinString::from_vec(want));
        assert_eq!(got.first(), Some(&Value::Code(FinString::zeros(2))));
    }

    #[test]
    fn path_examples() {
        let t = FunctionalTable::toy([(1, ToyBehavior::halting(3, Value::Nat(0)))]);
        let one = Ordinal::one();
        for n in 0..7 {
            let s = FinString::zeros(n);
            assert_eq!(japprox_path(&t, &one, &[0], &s).unwrap(), japprox(&t, &s));
            assert_eq!(japprox_path(&t, &one, &[], &s).unwrap(), japprox_pow(&t, &one, &s));
        }
        assert_eq!(japprox_path(&t, &one, &[0, 0], &FinString::zeros(3)), Err(Error::NotInTree));
    }

    #[test]
    fn inverses() {
        let t = FunctionalTable::toy([(0, ToyBehavior::halting(3, Value::Nat(0)))]);
        for a in ["0", "1", "2", "w"] {
            let alpha = parse_ordinal(a).unwrap();
            for n in 2..7 {
                let s = FinString::zeros(n);
                let f = japprox_pow(&t, &alpha, &s);
                assert_eq!(japprox_pow_inv(&alpha, &f).unwrap(), s, "alpha {a}, n {n}");
            }
        }
        let eta = parse_ordinal("w").unwrap();
        for p in [&[][..], &[0], &[2], &[2, 1], &[1, 0]] {
            for n in 2..7 {
                let s = FinString::zeros(n);
                let f = japprox_path(&t, &eta, p, &s).unwrap();
                if !f.is_empty() {
                    assert_eq!(japprox_path_inv(&eta, p, &f).unwrap(), s);
                }
            }
        }
        assert_eq!(japprox_pow_inv(&Ordinal::one(), &FinString::empty()), Err(Error::EmptyInput));
    }

    #[test]
    fn nabla_base_cases() {
        let t = FunctionalTable::all_divergent();
        let tw = Tower::new(&t, parse_ordinal("2").unwrap());
        assert_eq!(tw.nabla(&Level::Base, 4), FinString::zeros(4));
        for l in tw.candidate_levels(6) {
            assert!(tw.nabla(&l, 0).is_empty());
        }
        let two = tw.level_of(&Ordinal::nat(2)).unwrap();
        assert_eq!(two, Level::Lifted(alloc::vec![0, 0]));
        assert_eq!(tw.nabla(&two, 5), codes(&[2, 3, 4, 5]));
        assert_eq!(tw.nabla_true(&two, 3).unwrap(), codes(&[2, 3, 4]));
        assert_eq!(tw.nabla_true(&Level::Base, 3).unwrap(), FinString::zeros(3));
    }

    #[test]
    fn cached_matches_direct() {
        let t = FunctionalTable::toy([(0, ToyBehavior::halting(4, Value::Nat(0))), (2, ToyBehavior::halting(6, Value::Nat(1)))]);
        for eta in ["1", "2", "w"] {
            let tw = Tower::new(&t, parse_ordinal(eta).unwrap());
            for s in 0..9 {
                for l in tw.candidate_levels(s).iter().rev() {
                    assert_eq!(tw.nabla(l, s), tw.nabla_direct(l, s), "eta {eta} level {l:?} s {s}");
                    assert_eq!(tw.nonempty(l, s), !tw.nabla_direct(l, s).is_empty());
                }
            }
        }
    }

    #[test]
    fn nonempty_levels_small() {
        let t = FunctionalTable::all_divergent();
        let tw = Tower::new(&t, Ordinal::one());
        assert!(tw.nonempty_levels(0).is_empty());
        let l3 = tw.nonempty_levels(3);
        assert_eq!(
            l3,
            alloc::vec![Level::Base, Level::Lifted(alloc::vec![0]), Level::Lifted(alloc::vec![1]), Level::Lifted(alloc::vec![])]
        );
    }

    #[test]
    fn level_conversions() {
        let t = FunctionalTable::all_divergent();
        let tw = Tower::new(&t, parse_ordinal("w").unwrap());
        for x in ["1", "2", "5", "w", "w+1", "w*2+3", "w^2", "w^w"] {
            let xi = parse_ordinal(x).unwrap();
            let l = tw.level_of(&xi).unwrap();
            assert_eq!(tw.level_ordinal(&l).unwrap(), xi);
        }
        assert_eq!(tw.succ_level(&tw.top()), None);
        assert_eq!(tw.succ_level(&Level::Base), Some(Level::Lifted(alloc::vec![0])));
        assert!(tw.level_of(&Ordinal::zero()).is_err());
    }
}
