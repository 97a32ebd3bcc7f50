//! An effective enumeration `φ₀, φ₁, …` of step-bounded oracle functionals.
//!
//! A finite oracle `σ` grants `|σ|` steps and answers queries at positions
//! below `|σ|`. Both modes report the least prefix length at which a run
//! converges, which is what the jump approximations need.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::Error;
use crate::value::{FinString, Value};

/// An infinite oracle answered through finite prefixes.
pub trait Oracle {
    /// `Z↾n`.
    fn prefix(&self, n: usize) -> FinString;
}

/// The constant oracle `v v v …`.
#[derive(Clone, Debug)]
pub struct ConstOracle(pub Value);

impl ConstOracle {
    pub fn zero() -> ConstOracle {
        ConstOracle(Value::Nat(0))
    }
}

impl Oracle for ConstOracle {
    fn prefix(&self, n: usize) -> FinString {
        FinString::from_vec(alloc::vec![self.0.clone(); n])
    }
}

/// A finite string followed by a constant tail.
#[derive(Clone, Debug)]
pub struct PaddedOracle {
    pub head: FinString,
    pub fill: Value,
}

impl Oracle for PaddedOracle {
    fn prefix(&self, n: usize) -> FinString {
        if n <= self.head.len() {
            return self.head.restrict(n);
        }
        let mut v = self.head.as_slice().to_vec();
        v.resize(n, self.fill.clone());
        FinString::from_vec(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalResult {
    Converged(Value),
    DivergedWithinBudget,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrueResult {
    Converged(Value),
    Diverges,
}

/// A decidable toy functional: halts at step `max(k, m)` with `output` when
/// the guard holds, where `m` is one past the largest guarded position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyBehavior {
    pub halt_step: Option<usize>,
    pub output: Value,
    pub guard: Vec<(usize, Value)>,
}

impl ToyBehavior {
    pub fn never() -> ToyBehavior {
        ToyBehavior { halt_step: None, output: Value::Nat(0), guard: Vec::new() }
    }

    pub fn halting(k: usize, output: Value) -> ToyBehavior {
        ToyBehavior { halt_step: Some(k), output, guard: Vec::new() }
    }

    pub fn with_guard(mut self, pos: usize, equals: Value) -> ToyBehavior {
        self.guard.push((pos, equals));
        self
    }

    /// Number of oracle entries the guard reads.
    pub fn guard_len(&self) -> usize {
        self.guard.iter().map(|(p, _)| p + 1).max().unwrap_or(0)
    }

    fn guard_holds(&self, sigma: &FinString) -> bool {
        self.guard.iter().all(|(p, v)| sigma.get(*p) == Some(v))
    }

    /// Least convergent prefix length and output, judged on `σ`.
    fn first_convergence(&self, sigma: &FinString) -> Option<(usize, Value)> {
        let k = self.halt_step?;
        let m = self.guard_len();
        if m > sigma.len() || !self.guard_holds(sigma) {
            return None;
        }
        Some((k.max(m), self.output.clone()))
    }
}

pub const NUM_REGS: usize = 4;
const JUMP_TARGETS: usize = 8;

/// One instruction of the universal register machine. Registers hold
/// [`Value`]s; arithmetic reads a code as `0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Instr {
    Inc(u8),
    Dec(u8),
    /// Jump to `target mod len` when the register holds `Nat(0)`.
    Jz(u8, u8),
    /// `dst := σ(pos)`; a code or out-of-range position diverges.
    Query { pos: u8, dst: u8 },
    IsNat { src: u8, dst: u8 },
    /// Length of a code, `0` for a natural.
    Len { src: u8, dst: u8 },
    /// `dst := src[idx]`, or `0` when undefined.
    Index { src: u8, idx: u8, dst: u8 },
    Eq { a: u8, b: u8, dst: u8 },
    Halt(u8),
}

const R: u64 = NUM_REGS as u64;
const BLOCKS: [u64; 9] = [R, R, R * JUMP_TARGETS as u64, R * R, R * R, R * R, R * R * R, R * R * R, R];

/// Number of distinct instruction words.
pub const INSTR_WORDS: u64 = {
    let mut s = 0;
    let mut i = 0;
    while i < BLOCKS.len() {
        s += BLOCKS[i];
        i += 1;
    }
    s
};

impl Instr {
    pub fn from_word(w: u64) -> Instr {
        let mut w = w % INSTR_WORDS;
        let mut block = 0;
        while w >= BLOCKS[block] {
            w -= BLOCKS[block];
            block += 1;
        }
        let d = |k: u32| ((w / R.pow(k)) % R) as u8;
        match block {
            0 => Instr::Inc(d(0)),
            1 => Instr::Dec(d(0)),
            2 => Instr::Jz((w % R) as u8, (w / R) as u8),
            3 => Instr::Query { pos: d(0), dst: d(1) },
            4 => Instr::IsNat { src: d(0), dst: d(1) },
            5 => Instr::Len { src: d(0), dst: d(1) },
            6 => Instr::Index { src: d(0), idx: d(1), dst: d(2) },
            7 => Instr::Eq { a: d(0), b: d(1), dst: d(2) },
            _ => Instr::Halt(d(0)),
        }
    }

    pub fn to_word(self) -> u64 {
        let r = |x: u8| (x as u64) % R;
        let (block, w) = match self {
            Instr::Inc(a) => (0, r(a)),
            Instr::Dec(a) => (1, r(a)),
            Instr::Jz(a, t) => (2, r(a) + R * ((t as u64) % JUMP_TARGETS as u64)),
            Instr::Query { pos, dst } => (3, r(pos) + R * r(dst)),
            Instr::IsNat { src, dst } => (4, r(src) + R * r(dst)),
            Instr::Len { src, dst } => (5, r(src) + R * r(dst)),
            Instr::Index { src, idx, dst } => (6, r(src) + R * r(idx) + R * R * r(dst)),
            Instr::Eq { a, b, dst } => (7, r(a) + R * r(b) + R * R * r(dst)),
            Instr::Halt(a) => (8, r(a)),
        };
        BLOCKS[..block].iter().sum::<u64>() + w
    }
}

/// Program `e`: the bijective base-[`INSTR_WORDS`] digits of `e`, least
/// significant first. Every finite program has exactly one index.
pub fn decode_program(e: u64) -> Vec<Instr> {
    let mut prog = Vec::new();
    let mut e = e;
    while e > 0 {
        e -= 1;
        prog.push(Instr::from_word(e % INSTR_WORDS));
        e /= INSTR_WORDS;
    }
    prog
}

/// Inverse of [`decode_program`]; `None` if the index overflows `u64`.
pub fn encode_program(prog: &[Instr]) -> Option<u64> {
    let mut e: u64 = 0;
    for ins in prog.iter().rev() {
        e = e.checked_mul(INSTR_WORDS)?.checked_add(ins.to_word() + 1)?;
    }
    Some(e)
}

fn as_nat(v: &Value) -> u64 {
    match v {
        Value::Nat(n) => *n,
        Value::Code(_) => 0,
    }
}

/// Runs program `e` on input `i` with oracle `σ` for at most `|σ|` steps.
/// Returns the step count, one past the largest queried position, and the
/// output.
fn run_universal(e: u64, sigma: &FinString, i: u64) -> Option<(usize, usize, Value)> {
    let prog = decode_program(e);
    if prog.is_empty() {
        return None;
    }
    let mut regs: [Value; NUM_REGS] = core::array::from_fn(|_| Value::Nat(0));
    regs[0] = Value::Nat(i);
    let mut pc = 0usize;
    let mut use_bound = 0usize;
    for step in 1..=sigma.len() {
        let ins = *prog.get(pc)?;
        pc += 1;
        match ins {
            Instr::Inc(r) => regs[r as usize] = Value::Nat(as_nat(&regs[r as usize]).saturating_add(1)),
            Instr::Dec(r) => regs[r as usize] = Value::Nat(as_nat(&regs[r as usize]).saturating_sub(1)),
            Instr::Jz(r, t) => {
                if regs[r as usize] == Value::Nat(0) {
                    pc = t as usize % prog.len();
                }
            }
            Instr::Query { pos, dst } => {
                let Value::Nat(p) = regs[pos as usize] else {
                    return None;
                };
                let p = usize::try_from(p).ok()?;
                regs[dst as usize] = sigma.get(p)?.clone();
                use_bound = use_bound.max(p + 1);
            }
            Instr::IsNat { src, dst } => {
                regs[dst as usize] = Value::Nat(matches!(regs[src as usize], Value::Nat(_)) as u64);
            }
            Instr::Len { src, dst } => {
                let n = match &regs[src as usize] {
                    Value::Code(s) => s.len() as u64,
                    Value::Nat(_) => 0,
                };
                regs[dst as usize] = Value::Nat(n);
            }
            Instr::Index { src, idx, dst } => {
                let out = match (&regs[src as usize], &regs[idx as usize]) {
                    (Value::Code(s), Value::Nat(k)) => {
                        usize::try_from(*k).ok().and_then(|k| s.get(k).cloned()).unwrap_or(Value::Nat(0))
                    }
                    _ => Value::Nat(0),
                };
                regs[dst as usize] = out;
            }
            Instr::Eq { a, b, dst } => {
                regs[dst as usize] = Value::Nat((regs[a as usize] == regs[b as usize]) as u64);
            }
            Instr::Halt(r) => return Some((step, use_bound, regs[r as usize].clone())),
        }
    }
    None
}

/// A concrete enumeration of functionals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionalTable {
    /// Every program index runs on the register machine.
    Universal,
    /// Listed indices follow their toy behavior; all others diverge.
    Toy(BTreeMap<u64, ToyBehavior>),
}

impl FunctionalTable {
    /// The toy table with no halting entries.
    pub fn all_divergent() -> FunctionalTable {
        FunctionalTable::Toy(BTreeMap::new())
    }

    pub fn toy<I: IntoIterator<Item = (u64, ToyBehavior)>>(entries: I) -> FunctionalTable {
        FunctionalTable::Toy(entries.into_iter().collect())
    }

    pub fn is_toy(&self) -> bool {
        matches!(self, FunctionalTable::Toy(_))
    }

    /// The least `t ≤ |σ|` with `φ_e^{σ↾t}(i)↓`, with its output.
    /// The behaviour of toy index `e`, if registered.
    pub fn toy_behavior(&self, e: u64) -> Option<&ToyBehavior> {
        match self {
            FunctionalTable::Toy(map) => map.get(&e),
            FunctionalTable::Universal => None,
        }
    }

    pub fn first_convergence(&self, e: u64, sigma: &FinString, i: u64) -> Option<(usize, Value)> {
        match self {
            FunctionalTable::Universal => {
                let (steps, used, v) = run_universal(e, sigma, i)?;
                Some((steps.max(used), v))
            }
            FunctionalTable::Toy(map) => {
                let (t, v) = map.get(&e)?.first_convergence(sigma)?;
                (t <= sigma.len()).then_some((t, v))
            }
        }
    }

    pub fn eval_bounded(&self, e: u64, sigma: &FinString, i: u64) -> EvalResult {
        match self.first_convergence(e, sigma, i) {
            Some((_, v)) => EvalResult::Converged(v),
            None => EvalResult::DivergedWithinBudget,
        }
    }

    /// The least `t` with `φ_e^{Z↾t}(i)↓`, with its output, or `None` if
    /// `φ_e^Z(i)↑`.
    pub fn true_convergence<O: Oracle + ?Sized>(
        &self,
        e: u64,
        z: &O,
        _i: u64,
    ) -> Result<Option<(usize, Value)>, Error> {
        let FunctionalTable::Toy(map) = self else {
            return Err(Error::UndecidableMode);
        };
        let Some(b) = map.get(&e) else {
            return Ok(None);
        };
        if b.halt_step.is_none() {
            return Ok(None);
        }
        Ok(b.first_convergence(&z.prefix(b.guard_len())))
    }

    pub fn eval_true<O: Oracle + ?Sized>(&self, e: u64, z: &O, i: u64) -> Result<TrueResult, Error> {
        Ok(match self.true_convergence(e, z, i)? {
            Some((_, v)) => TrueResult::Converged(v),
            None => TrueResult::Diverges,
        })
    }

    /// Whether convergence on `σ` carries over unchanged to `τ ⊇ σ`.
    pub fn check_monotone(&self, e: u64, sigma: &FinString, tau: &FinString, i: u64) -> bool {
        match self.eval_bounded(e, sigma, i) {
            EvalResult::DivergedWithinBudget => true,
            r => self.eval_bounded(e, tau, i) == r,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_count() {
        assert_eq!(INSTR_WORDS, 220);
        for w in 0..INSTR_WORDS {
            assert_eq!(Instr::from_word(w).to_word(), w);
        }
    }

    #[test]
    fn program_indices_are_bijective() {
        for e in 0..3000u64 {
            assert_eq!(encode_program(&decode_program(e)), Some(e));
        }
        assert!(decode_program(0).is_empty());
    }

    #[test]
    fn toy_examples() {
        let t = FunctionalTable::toy([(0, ToyBehavior::halting(2, Value::Nat(7)))]);
        assert_eq!(t.eval_bounded(0, &FinString::zeros(2), 0), EvalResult::Converged(Value::Nat(7)));
        assert_eq!(t.eval_bounded(0, &FinString::zeros(5), 0), EvalResult::Converged(Value::Nat(7)));
        assert_eq!(t.eval_bounded(0, &FinString::zeros(1), 0), EvalResult::DivergedWithinBudget);
        assert_eq!(t.eval_bounded(1, &FinString::zeros(9), 1), EvalResult::DivergedWithinBudget);
        let d = FunctionalTable::all_divergent();
        for e in 0..5 {
            assert_eq!(d.eval_bounded(e, &FinString::zeros(9), e), EvalResult::DivergedWithinBudget);
            assert_eq!(d.eval_true(e, &ConstOracle::zero(), e), Ok(TrueResult::Diverges));
        }
    }

    #[test]
    fn toy_guard_and_truth() {
        let b = ToyBehavior::halting(1, Value::Nat(3)).with_guard(3, Value::Nat(0));
        let t = FunctionalTable::toy([(0, b)]);
        assert_eq!(t.first_convergence(0, &FinString::zeros(6), 0), Some((4, Value::Nat(3))));
        assert_eq!(t.eval_bounded(0, &FinString::zeros(3), 0), EvalResult::DivergedWithinBudget);
        assert_eq!(t.eval_true(0, &ConstOracle::zero(), 0), Ok(TrueResult::Converged(Value::Nat(3))));
        let z = PaddedOracle { head: FinString::nats(&[0, 0, 0, 1]), fill: Value::Nat(0) };
        assert_eq!(t.eval_true(0, &z, 0), Ok(TrueResult::Diverges));
        assert_eq!(FunctionalTable::Universal.eval_true(0, &z, 0), Err(Error::UndecidableMode));
    }

    #[test]
    fn universal_runs() {
        // r1 := σ(r0); halt r1
        let query = encode_program(&[Instr::Query { pos: 0, dst: 1 }, Instr::Halt(1)]).unwrap();
        let s = FinString::nats(&[5, 6, 7]);
        assert_eq!(FunctionalTable::Universal.first_convergence(query, &s, 0), Some((2, Value::Nat(5))));
        assert_eq!(FunctionalTable::Universal.first_convergence(query, &s, 2), Some((3, Value::Nat(7))));
        assert_eq!(FunctionalTable::Universal.first_convergence(query, &s, 3), None);
        assert_eq!(FunctionalTable::Universal.first_convergence(query, &s.restrict(1), 0), None);
        // loop forever on r1 = 0
        let lp = encode_program(&[Instr::Jz(1, 0)]).unwrap();
        assert_eq!(FunctionalTable::Universal.first_convergence(lp, &FinString::zeros(50), 0), None);
        // count r0 down to zero, then halt
        let down = encode_program(&[Instr::Jz(0, 3), Instr::Dec(0), Instr::Jz(1, 0), Instr::Halt(2)]).unwrap();
        assert_eq!(FunctionalTable::Universal.first_convergence(down, &FinString::zeros(20), 2), Some((8, Value::Nat(0))));
    }

    #[test]
    fn universal_least_use_is_least() {
        let u = FunctionalTable::Universal;
        let sigma = FinString::nats(&[0, 1, 0, 2, 1, 0, 3, 0, 0, 1, 2, 0]);
        for e in 0..4000u64 {
            for i in 0..3 {
                if let Some((t, v)) = u.first_convergence(e, &sigma, i) {
                    assert_eq!(u.eval_bounded(e, &sigma.restrict(t), i), EvalResult::Converged(v));
                    if t > 0 {
                        assert_eq!(u.eval_bounded(e, &sigma.restrict(t - 1), i), EvalResult::DivergedWithinBudget);
                    }
                }
            }
        }
    }
}
