//! η-systems and the run engine that builds 0-runs from an extension
//! callback, with verification of finished runs.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::belief::Belief;
use crate::error::Error;
use crate::ordinal::Ordinal;

pub type State = u64;

/// One element `(s_i, ξ_i, ℓ_{s_i})` of the chain handed to the callback.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainLink {
    pub s: usize,
    pub xi: Ordinal,
    pub state: State,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: usize,
    pub state: State,
    pub chain: Vec<ChainLink>,
}

/// A finite run `⟨ℓ₀, …, ℓ_{s−1}⟩` with the chain used at every stage.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Run {
    pub states: Vec<State>,
    pub trace: Vec<StageRecord>,
}

impl Run {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// States `L ⊆ ω`, action tree `P₀`, restraints `≤_ξ^L`, enumeration `E`
/// and the extension callback.
pub trait EtaSystem {
    /// The top restraint level.
    fn eta(&self) -> Ordinal;

    fn is_state(&self, l: State) -> bool;

    /// Membership of a nonempty state sequence in `P₀`.
    fn in_tree(&self, seq: &[State]) -> bool;

    /// `a ≤_ξ^L b`.
    fn restraint(&self, xi: &Ordinal, a: State, b: State) -> bool;

    /// `E(ℓ)`.
    fn enumerate(&self, l: State) -> Vec<u64>;

    /// A state extending `prefix` that respects every link of `chain`.
    fn extend(&self, prefix: &[State], chain: &[ChainLink]) -> Result<State, Error>;
}

fn broken(stage: usize, clause: String) -> Error {
    Error::ChainBroken { stage, clause }
}

/// The largest `t < s` with `t ≤_ξ s`.
fn last_believed(belief: &dyn Belief, xi: &Ordinal, s: usize) -> Option<usize> {
    (0..s).rev().find(|&t| belief.leq(xi, t, s))
}

/// The chain `(s_i, ξ_i)` for stage `s ≥ 1`, with its structural assertions.
pub fn build_chain(belief: &dyn Belief, top: &Ordinal, s: usize) -> Result<Vec<(usize, Ordinal)>, Error> {
    let mut eta0: Option<Ordinal> = None;
    for t in 0..s {
        if let Some(m) = belief.max_level(t, s, top)? {
            eta0 = Some(match eta0 {
                Some(e) if e >= m => e,
                _ => m,
            });
        }
    }
    let eta0 = eta0.ok_or_else(|| broken(s, format!("no stage below {s} is believed at level 0")))?;
    let mut chain: Vec<(usize, Ordinal)> = Vec::new();
    let mut si = s - 1;
    loop {
        let xi = belief.max_level(si, s, &eta0)?.ok_or_else(|| broken(s, format!("{si} ≰_0 {s}")))?;
        if let Some((prev_s, prev_xi)) = chain.last() {
            if si >= *prev_s || xi <= *prev_xi {
                return Err(broken(s, format!("chain not monotone at s_i = {si}")));
            }
            if !belief.leq(&prev_xi.succ(), si, *prev_s) {
                return Err(broken(s, format!("{si} ≰_{} {prev_s}", prev_xi.succ())));
            }
        }
        if !belief.leq(&xi, si, s) {
            return Err(broken(s, format!("{si} ≰_{xi} {s}")));
        }
        let done = xi >= eta0;
        chain.push((si, xi.clone()));
        if done {
            break;
        }
        si = last_believed(belief, &xi.succ(), s).ok_or_else(|| broken(s, format!("no stage is {}-believed", xi.succ())))?;
    }
    check_covering(belief, &chain, &eta0, s)?;
    Ok(chain)
}

/// Every `t < s` believed at some level is believed by the chain element
/// responsible for that level.
fn check_covering(belief: &dyn Belief, chain: &[(usize, Ordinal)], eta0: &Ordinal, s: usize) -> Result<(), Error> {
    for t in 0..s {
        let Some(m) = belief.max_level(t, s, eta0)? else { continue };
        let mut lo = Ordinal::zero();
        for (sj, xj) in chain {
            if lo > m {
                break;
            }
            let hi = if *xj < m { xj.clone() } else { m.clone() };
            if t > *sj || !belief.leq(&hi, t, *sj) {
                return Err(broken(s, format!("{t} ≤_{hi} {s} is not covered by s_j = {sj}")));
            }
            lo = xj.succ();
        }
    }
    Ok(())
}

/// One engine stage: extends `run` by a single state.
pub fn step(belief: &dyn Belief, sys: &dyn EtaSystem, run: &mut Run) -> Result<(), Error> {
    let s = run.len();
    if sys.eta() > belief.top() {
        return Err(Error::OutOfRange);
    }
    let links: Vec<ChainLink> = if s == 0 {
        Vec::new()
    } else {
        build_chain(belief, &sys.eta(), s)?
            .into_iter()
            .map(|(si, xi)| ChainLink { s: si, xi, state: run.states[si] })
            .collect()
    };
    for w in links.windows(2) {
        if !sys.restraint(&w[0].xi.succ(), w[1].state, w[0].state) {
            return Err(broken(s, format!("ℓ_{} ≰^L_{} ℓ_{}", w[1].s, w[0].xi.succ(), w[0].s)));
        }
    }
    let l = sys.extend(&run.states, &links)?;
    if !sys.is_state(l) {
        return Err(Error::ExtendibilityViolated { stage: s, clause: format!("{l} is not a state") });
    }
    let mut seq = run.states.clone();
    seq.push(l);
    if !sys.in_tree(&seq) {
        return Err(Error::TreeRejected { stage: s });
    }
    for link in &links {
        if !sys.restraint(&link.xi, link.state, l) {
            return Err(Error::ExtendibilityViolated {
                stage: s,
                clause: format!("ℓ_{} ≤^L_{} ℓ_{s}", link.s, link.xi),
            });
        }
    }
    run.states.push(l);
    run.trace.push(StageRecord { stage: s, state: l, chain: links });
    Ok(())
}

/// `stages` engine steps from the empty run.
pub fn run(belief: &dyn Belief, sys: &dyn EtaSystem, stages: usize) -> Result<Run, Error> {
    let mut r = Run::default();
    for _ in 0..stages {
        step(belief, sys, &mut r)?;
    }
    Ok(r)
}

/// Why a run fails to be a 0-run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotAState { stage: usize },
    Tree { len: usize },
    Restraint { s: usize, t: usize, xi: Ordinal },
    NotNested { s: usize, t: usize, xi: Ordinal },
    Enumeration { s: usize, t: usize },
    Belief { s: usize, t: usize },
}

const FINITE_CHECKS: u64 = 4;

/// The levels at which the restraint between `ℓ_s` and `ℓ_t` is checked:
/// small finite levels, the levels used by the chains, and the greatest
/// believed level itself.
fn relevant_levels(run: &Run, m: &Ordinal) -> Vec<Ordinal> {
    let mut set = BTreeSet::new();
    for n in 0..=FINITE_CHECKS {
        set.insert(Ordinal::nat(n));
    }
    for rec in &run.trace {
        for link in &rec.chain {
            set.insert(link.xi.clone());
            set.insert(link.xi.succ());
        }
    }
    set.insert(m.clone());
    set.into_iter().filter(|x| x <= m).collect()
}

/// Checks the 0-run property over every pair of stages.
pub fn verify_run(belief: &dyn Belief, sys: &dyn EtaSystem, run: &Run) -> Result<(), Violation> {
    let top = sys.eta();
    for (i, &l) in run.states.iter().enumerate() {
        if !sys.is_state(l) {
            return Err(Violation::NotAState { stage: i });
        }
        if !sys.in_tree(&run.states[..=i]) {
            return Err(Violation::Tree { len: i + 1 });
        }
    }
    let n = run.len();
    for s in 0..n {
        for t in s..n {
            let m = match belief.max_level(s, t, &top) {
                Ok(Some(m)) => m,
                Ok(None) => continue,
                Err(_) => return Err(Violation::Belief { s, t }),
            };
            let (a, b) = (run.states[s], run.states[t]);
            let levels = relevant_levels(run, &m);
            let mut prev_holds = true;
            for xi in &levels {
                let holds = sys.restraint(xi, a, b);
                if !holds {
                    return Err(Violation::Restraint { s, t, xi: xi.clone() });
                }
                if holds && !prev_holds {
                    return Err(Violation::NotNested { s, t, xi: xi.clone() });
                }
                prev_holds = holds;
            }
            if sys.restraint(&Ordinal::zero(), a, b) {
                let ea = sys.enumerate(a);
                let eb: BTreeSet<u64> = sys.enumerate(b).into_iter().collect();
                if !ea.iter().all(|k| eb.contains(k)) {
                    return Err(Violation::Enumeration { s, t });
                }
            }
        }
    }
    Ok(())
}

/// `E(π) = ⋃ E(ℓ_i)`.
pub fn enumerate(sys: &dyn EtaSystem, run: &Run) -> BTreeSet<u64> {
    run.states.iter().flat_map(|&l| sys.enumerate(l)).collect()
}

/// The state space of a composite system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum States {
    All,
    /// `{0, …, max}`.
    UpTo(State),
}

/// The action tree of a composite system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tree {
    Any,
    /// `ℓ_s ≤ s` at every position.
    Bounded,
}

/// The restraint relations of a composite system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Restraint {
    /// Every pair at every level.
    All,
    /// `a ≤ b` at every level.
    Numeric,
    /// `a ≤ b` and `a ≡ b (mod 2^min(ξ, cap))`, with infinite `ξ` counting
    /// as `cap`.
    Congruence { cap: u32 },
}

/// The extension callback of a composite system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extend {
    Constant(State),
    /// One more than every chain state, `0` at the root.
    Successor,
    /// The least state above every chain state in the residue class the
    /// chain forces.
    Congruent { cap: u32 },
    /// Follows `inner` but returns `value` at stage `at`.
    BreakAt { at: usize, value: State, inner: Box<Extend> },
}

/// The enumeration function of a composite system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumerate {
    Nothing,
    /// `E(ℓ) = {0, …, ℓ}`.
    Below,
    /// `E(ℓ) = {0, …, bit length of ℓ}`.
    BitLength,
}

/// A system assembled from the building blocks above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composite {
    pub eta: Ordinal,
    pub states: States,
    pub tree: Tree,
    pub restraint: Restraint,
    pub extend: Extend,
    pub enumerate: Enumerate,
}

/// Names of the built-in systems, in a fixed order.
pub const BUILTIN_SYSTEMS: [&str; 4] = ["singleton", "counter", "congruence", "broken"];

impl Composite {
    /// A built-in system by name, with top restraint level `eta`.
    pub fn builtin(name: &str, eta: Ordinal) -> Option<Composite> {
        let c = match name {
            "singleton" => Composite {
                eta,
                states: States::UpTo(0),
                tree: Tree::Any,
                restraint: Restraint::All,
                extend: Extend::Constant(0),
                enumerate: Enumerate::Below,
            },
            "counter" => Composite {
                eta,
                states: States::All,
                tree: Tree::Bounded,
                restraint: Restraint::Numeric,
                extend: Extend::Successor,
                enumerate: Enumerate::Below,
            },
            "congruence" => Composite {
                eta,
                states: States::All,
                tree: Tree::Any,
                restraint: Restraint::Congruence { cap: 6 },
                extend: Extend::Congruent { cap: 6 },
                enumerate: Enumerate::BitLength,
            },
            "broken" => Composite {
                eta,
                states: States::All,
                tree: Tree::Bounded,
                restraint: Restraint::Numeric,
                extend: Extend::BreakAt { at: 5, value: 0, inner: Box::new(Extend::Successor) },
                enumerate: Enumerate::Below,
            },
            _ => return None,
        };
        Some(c)
    }
}

fn modulus(xi: &Ordinal, cap: u32) -> u64 {
    let e = xi.as_nat().map_or(cap, |n| n.min(cap as u64) as u32);
    1u64 << e
}

fn extend_with(rule: &Extend, prefix: &[State], chain: &[ChainLink]) -> State {
    match rule {
        Extend::Constant(c) => *c,
        Extend::Successor => chain.iter().map(|l| l.state + 1).max().unwrap_or(0),
        Extend::Congruent { cap } => {
            let Some(last) = chain.last() else { return 0 };
            let m = modulus(&last.xi, *cap);
            let floor = chain.iter().map(|l| l.state).max().unwrap_or(0) + 1;
            let steps = (floor.saturating_sub(last.state)).div_ceil(m);
            last.state + steps * m
        }
        Extend::BreakAt { at, value, inner } => {
            if prefix.len() == *at {
                *value
            } else {
                extend_with(inner, prefix, chain)
            }
        }
    }
}

impl EtaSystem for Composite {
    fn eta(&self) -> Ordinal {
        self.eta.clone()
    }

    fn is_state(&self, l: State) -> bool {
        match self.states {
            States::All => true,
            States::UpTo(m) => l <= m,
        }
    }

    fn in_tree(&self, seq: &[State]) -> bool {
        match self.tree {
            Tree::Any => true,
            Tree::Bounded => seq.iter().enumerate().all(|(i, &l)| l <= i as u64),
        }
    }

    fn restraint(&self, xi: &Ordinal, a: State, b: State) -> bool {
        match self.restraint {
            Restraint::All => true,
            Restraint::Numeric => a <= b,
            Restraint::Congruence { cap } => a <= b && (b - a).is_multiple_of(modulus(xi, cap)),
        }
    }

    fn enumerate(&self, l: State) -> Vec<u64> {
        match self.enumerate {
            Enumerate::Nothing => Vec::new(),
            Enumerate::Below => (0..=l).collect(),
            Enumerate::BitLength => (0..=(64 - l.leading_zeros() as u64)).collect(),
        }
    }

    fn extend(&self, prefix: &[State], chain: &[ChainLink]) -> Result<State, Error> {
        Ok(extend_with(&self.extend, prefix, chain))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::BeliefContext;
    use crate::fixtures::table;

    #[test]
    fn singleton_runs_constant() {
        let t = table("late").unwrap();
        let ctx = BeliefContext::new(&t, Ordinal::one());
        let sys = Composite::builtin("singleton", Ordinal::omega()).unwrap();
        let r = run(&ctx, &sys, 30).unwrap();
        assert_eq!(r.states, alloc::vec![0; 30]);
        assert_eq!(verify_run(&ctx, &sys, &r), Ok(()));
        assert!(r.trace[0].chain.is_empty());
    }

    #[test]
    fn counter_respects_restraints() {
        let t = table("break").unwrap();
        let ctx = BeliefContext::new(&t, Ordinal::nat(2));
        let sys = Composite::builtin("counter", Ordinal::omega()).unwrap();
        let r = run(&ctx, &sys, 20).unwrap();
        assert_eq!(verify_run(&ctx, &sys, &r), Ok(()));
        for k in 1..r.len() {
            let earlier = enumerate(&sys, &Run { states: r.states[..k].to_vec(), trace: Vec::new() });
            let later = enumerate(&sys, &Run { states: r.states[..k + 1].to_vec(), trace: Vec::new() });
            assert!(earlier.is_subset(&later));
        }
    }

    #[test]
    fn broken_callback_is_caught() {
        let t = table("halting").unwrap();
        let ctx = BeliefContext::new(&t, Ordinal::one());
        let sys = Composite::builtin("broken", Ordinal::one()).unwrap();
        match run(&ctx, &sys, 10) {
            Err(Error::ExtendibilityViolated { stage, .. }) => assert_eq!(stage, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn corrupted_run_is_rejected() {
        let t = table("divergent").unwrap();
        let ctx = BeliefContext::new(&t, Ordinal::one());
        let sys = Composite::builtin("counter", Ordinal::one()).unwrap();
        let mut r = run(&ctx, &sys, 8).unwrap();
        r.states[6] = 2;
        assert!(matches!(verify_run(&ctx, &sys, &r), Err(Violation::Restraint { t: 6, .. })));
        assert_eq!(verify_run(&ctx, &sys, &Run::default()), Ok(()));
    }
}
