//! True iterated jumps of the zero oracle, evaluated lazily. An entry of a
//! true jump is a code whose length is a true stage, so comparing a finite
//! approximation against the truth never has to build more of the truth than
//! the approximation itself contains.

use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::functional::{FunctionalTable, Oracle};
use crate::ordinal::Ordinal;
use crate::value::{FinString, Value};

/// An entry of a true jump: a natural, or the code of `Z↾len` for the oracle
/// `Z` held by reference.
#[derive(Clone)]
pub enum Lazy<'a> {
    Nat(u64),
    Code(Rc<TrueJump<'a>>, usize),
}

enum Kind<'a> {
    Zero,
    Jump { base: Rc<TrueJump<'a>>, stages: RefCell<Vec<usize>> },
    Pow { alpha: Ordinal, chain: RefCell<Vec<Rc<TrueJump<'a>>>>, entries: RefCell<Vec<Lazy<'a>>> },
}

/// `0`, `𝒥(Z)` or `𝒥^{ω^α}(Z)` over a toy table.
pub struct TrueJump<'a> {
    table: &'a FunctionalTable,
    kind: Kind<'a>,
    cache: RefCell<FinString>,
}

impl<'a> TrueJump<'a> {
    fn make(table: &'a FunctionalTable, kind: Kind<'a>) -> Rc<TrueJump<'a>> {
        Rc::new(TrueJump { table, kind, cache: RefCell::new(FinString::empty()) })
    }

    /// The oracle `0^ω`.
    pub fn zero(table: &'a FunctionalTable) -> Rc<TrueJump<'a>> {
        TrueJump::make(table, Kind::Zero)
    }

    pub fn jump(table: &'a FunctionalTable, base: Rc<TrueJump<'a>>) -> Rc<TrueJump<'a>> {
        TrueJump::make(table, Kind::Jump { base, stages: RefCell::new(Vec::new()) })
    }

    /// `𝒥^{ω^α}(Z)`, which is `𝒥(Z)` when `α = 0`.
    pub fn pow(table: &'a FunctionalTable, alpha: Ordinal, base: Rc<TrueJump<'a>>) -> Rc<TrueJump<'a>> {
        if alpha.is_zero() {
            return TrueJump::jump(table, base);
        }
        let kind = Kind::Pow { alpha, chain: RefCell::new(alloc::vec![base]), entries: RefCell::new(Vec::new()) };
        TrueJump::make(table, kind)
    }

    fn id(this: &Rc<TrueJump<'a>>) -> usize {
        Rc::as_ptr(this) as *const () as usize
    }

    /// The `i`-th true stage of a jump node.
    fn stage(&self, base: &Rc<TrueJump<'a>>, stages: &RefCell<Vec<usize>>, i: usize) -> usize {
        while stages.borrow().len() <= i {
            let e = stages.borrow().len();
            let prev = stages.borrow().last().copied().unwrap_or(1);
            let mut t = prev + 1;
            if let Some(b) = self.table.toy_behavior(e as u64) {
                if let Some(k) = b.halt_step {
                    if b.guard.iter().all(|(p, v)| value_agrees(v, &base.entry(*p))) {
                        t = t.max(k.max(b.guard_len()));
                    }
                }
            }
            stages.borrow_mut().push(t);
        }
        stages.borrow()[i]
    }

    /// The `i`-th entry, without building the strings it codes.
    pub fn entry(&self, i: usize) -> Lazy<'a> {
        match &self.kind {
            Kind::Zero => Lazy::Nat(0),
            Kind::Jump { base, stages } => Lazy::Code(base.clone(), self.stage(base, stages, i)),
            Kind::Pow { alpha, chain, entries } => {
                while entries.borrow().len() <= i {
                    let k = entries.borrow().len();
                    while chain.borrow().len() < k + 2 {
                        let j = chain.borrow().len() - 1;
                        let prev = chain.borrow()[j].clone();
                        let link = TrueJump::pow(self.table, alpha.fund(j as u64).expect("positive exponent"), prev);
                        chain.borrow_mut().push(link);
                    }
                    let link = chain.borrow()[k + 1].clone();
                    let v = link.entry(0);
                    entries.borrow_mut().push(v);
                }
                entries.borrow()[i].clone()
            }
        }
    }
}

impl Oracle for TrueJump<'_> {
    fn prefix(&self, n: usize) -> FinString {
        if self.cache.borrow().len() >= n {
            return self.cache.borrow().restrict(n);
        }
        let out: FinString = match &self.kind {
            Kind::Zero => FinString::zeros(n),
            Kind::Jump { base, stages } => {
                let ts: Vec<usize> = (0..n).map(|i| self.stage(base, stages, i)).collect();
                let z = base.prefix(ts.last().copied().unwrap_or(0));
                ts.into_iter().map(|t| Value::Code(z.restrict(t))).collect()
            }
            Kind::Pow { .. } => (0..n)
                .map(|i| match self.entry(i) {
                    Lazy::Nat(m) => Value::Nat(m),
                    Lazy::Code(z, len) => Value::Code(z.prefix(len)),
                })
                .collect(),
        };
        *self.cache.borrow_mut() = out.clone();
        out
    }
}

/// Whether a concrete value equals a lazy entry.
pub fn value_agrees(v: &Value, l: &Lazy<'_>) -> bool {
    match (v, l) {
        (Value::Nat(m), Lazy::Nat(n)) => m == n,
        (Value::Code(s), Lazy::Code(z, len)) => s.len() == *len && agrees(s, z),
        _ => false,
    }
}

struct Frame<'a> {
    a: FinString,
    o: Rc<TrueJump<'a>>,
    key: (usize, usize),
    i: usize,
}

/// Whether `a` is an initial segment of the true oracle `o`.
pub fn agrees(a: &FinString, o: &Rc<TrueJump<'_>>) -> bool {
    let mut memo = BTreeMap::new();
    lcp(a.whole(), o.clone(), &mut memo) >= a.len()
}

/// Agreement tests that share one memo. The borrows keep every compared
/// buffer and oracle alive, so the memo's address keys stay valid.
#[derive(Default)]
pub struct AgreeMemo<'s> {
    memo: BTreeMap<(usize, usize), usize>,
    _borrows: core::marker::PhantomData<&'s ()>,
}

impl<'s> AgreeMemo<'s> {
    pub fn new() -> AgreeMemo<'s> {
        AgreeMemo::default()
    }

    /// Whether `a` is an initial segment of `o`.
    pub fn agrees<'a: 's>(&mut self, a: &'s FinString, o: &'s Rc<TrueJump<'a>>) -> bool {
        lcp(a.whole(), o.clone(), &mut self.memo) >= a.len()
    }
}

/// Length of the longest common prefix of a whole buffer and a true oracle.
fn lcp<'a>(a: FinString, o: Rc<TrueJump<'a>>, memo: &mut BTreeMap<(usize, usize), usize>) -> usize {
    let key = (a.buffer_id(), TrueJump::id(&o));
    if let Some(&l) = memo.get(&key) {
        return l;
    }
    let mut stack = alloc::vec![Frame { a, o, key, i: 0 }];
    let mut last = 0;
    while let Some(f) = stack.last_mut() {
        let mut child = None;
        while f.i < f.a.len() {
            let step = match (&f.a.as_slice()[f.i], f.o.entry(f.i)) {
                (Value::Nat(m), Lazy::Nat(n)) => *m == n,
                (Value::Code(s), Lazy::Code(z, len)) if s.len() == len => {
                    let k = (s.buffer_id(), TrueJump::id(&z));
                    match memo.get(&k) {
                        Some(&l) => l >= len,
                        None => {
                            child = Some(Frame { a: s.whole(), o: z, key: k, i: 0 });
                            break;
                        }
                    }
                }
                _ => false,
            };
            if !step {
                break;
            }
            f.i += 1;
        }
        if let Some(c) = child {
            stack.push(c);
            continue;
        }
        let f = stack.pop().expect("frame");
        memo.insert(f.key, f.i);
        last = f.i;
    }
    last
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{ConstOracle, ToyBehavior};
    use crate::jump::jump_prefix;
    use crate::transfinite::pow_oracle;

    fn tables() -> [FunctionalTable; 3] {
        [
            FunctionalTable::all_divergent(),
            FunctionalTable::toy([(1, ToyBehavior::halting(5, Value::Nat(0)))]),
            FunctionalTable::toy([(1, ToyBehavior::halting(4, Value::Nat(0)).with_guard(1, Value::Nat(0)))]),
        ]
    }

    #[test]
    fn eager_prefix_matches_jump_oracle() {
        for t in tables() {
            let j = TrueJump::jump(&t, TrueJump::zero(&t));
            assert_eq!(j.prefix(6), jump_prefix(&t, ConstOracle::zero(), 5).unwrap());
        }
    }

    #[test]
    fn eager_prefix_matches_pow_oracle() {
        for t in tables() {
            for alpha in [Ordinal::one(), Ordinal::nat(2), Ordinal::omega()] {
                let lazy = TrueJump::pow(&t, alpha.clone(), TrueJump::zero(&t));
                let eager = pow_oracle(&t, alpha.clone(), Rc::new(ConstOracle::zero()));
                assert_eq!(lazy.prefix(3), eager.prefix(3), "{alpha}");
            }
        }
    }

    #[test]
    fn shared_memo_matches_single_tests() {
        for t in tables() {
            let j = TrueJump::pow(&t, Ordinal::one(), TrueJump::zero(&t));
            let good = j.prefix(4);
            let bad = FinString::from_vec(alloc::vec![Value::Nat(0)]);
            let strings = [good.clone(), good.restrict(2), bad, FinString::empty()];
            let mut memo = AgreeMemo::new();
            for a in &strings {
                assert_eq!(memo.agrees(a, &j), agrees(a, &j));
            }
        }
    }

    #[test]
    fn agreement_with_prefixes() {
        for t in tables() {
            let j = TrueJump::pow(&t, Ordinal::one(), TrueJump::zero(&t));
            let p = j.prefix(4);
            for n in 0..=4 {
                assert!(agrees(&p.restrict(n), &j));
            }
            let wrong = FinString::from_vec(alloc::vec![Value::Code(FinString::zeros(3))]);
            assert!(!agrees(&wrong, &j));
            assert!(!agrees(&FinString::nats(&[0]), &j));
        }
    }
}
