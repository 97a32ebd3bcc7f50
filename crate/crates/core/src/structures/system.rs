//! The system whose states are pairs `(τ, ā)` and whose 0-runs enumerate
//! the atomic diagram of a copy of the guessed structure.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cell::RefCell;

use super::iso::complete_part;
use super::literal::LiteralCoding;
use super::tree::{Branch, BranchOracle, EtaTree, PreLeq};
use crate::belief::BeliefContext;
use crate::error::Error;
use crate::ordinal::Ordinal;
use crate::system::{self, ChainLink, EtaSystem, Run, State};

/// A guess `τ` with a tuple `ā` of elements of `A_τ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct StructState {
    pub tau: Branch,
    pub abar: Vec<usize>,
}

fn top_level(tree: &EtaTree, xi: &Ordinal) -> bool {
    *xi >= Ordinal::nat(tree.levels())
}

/// `ℓ ≤_ξ^L ℓ'`: the back-and-forth relation below the top, and equal
/// guesses with `ā ⊆ ā'` at the top.
pub fn state_restraint(tree: &EtaTree, xi: &Ordinal, a: &StructState, b: &StructState) -> bool {
    if top_level(tree, xi) {
        return a.tau == b.tau && b.abar.starts_with(&a.abar);
    }
    let xi = xi.as_nat().expect("levels below a finite top are finite");
    tree.leq(&a.tau, &a.abar, &b.tau, &b.abar, xi)
}

/// A state at stage `s` with guess `tau_s` that dominates every chain state
/// at its level. `chain` lists `(ℓ_{s_i}, ξ_i)` from `s_0` down to `s_k`.
pub fn extend_witness(tree: &EtaTree, chain: &[(StructState, Ordinal)], s: usize, tau_s: &Branch) -> Result<StructState, Error> {
    let mut c: Vec<usize> = Vec::new();
    if let Some(((first, _), rest)) = chain.split_first() {
        let mut tau_b = first.tau.clone();
        let mut b = first.abar.clone();
        for (j, (next, _)) in rest.iter().enumerate() {
            let xi_j = &chain[j].1;
            if top_level(tree, &xi_j.succ()) {
                if next.tau != tau_b || !b.starts_with(&next.abar) {
                    return Err(Error::NoWitness);
                }
                continue;
            }
            let beta = xi_j.as_nat().ok_or(Error::InfiniteLevel)?;
            b = tree.lift(&next.tau, &next.abar, &tau_b, &b, beta)?;
            tau_b = next.tau.clone();
        }
        let xi_k = &chain[chain.len() - 1].1;
        if top_level(tree, xi_k) {
            if tau_b != *tau_s {
                return Err(Error::NoWitness);
            }
            c = b;
        } else {
            let beta = xi_k.as_nat().ok_or(Error::InfiniteLevel)?;
            c = tree.lift(tau_s, &[], &tau_b, &b, beta)?;
        }
    }
    let size = tree.structure(tau_s).size();
    for x in 0..s.min(size) {
        if !c.contains(&x) {
            c.push(x);
        }
    }
    while c.len() < s {
        c.push(c.len() % size);
    }
    Ok(StructState { tau: tau_s.clone(), abar: c })
}

/// The system over a tree, with states interned as naturals in order of
/// first use.
pub struct StructSystem<'t, 'p, 'c, 'a> {
    tree: &'t EtaTree,
    pre: &'p PreLeq<'c, 'a>,
    coding: LiteralCoding,
    states: RefCell<Vec<StructState>>,
    index: RefCell<BTreeMap<StructState, State>>,
}

impl<'t, 'p, 'c, 'a> StructSystem<'t, 'p, 'c, 'a> {
    pub fn new(tree: &'t EtaTree, pre: &'p PreLeq<'c, 'a>) -> StructSystem<'t, 'p, 'c, 'a> {
        let any = tree.family().values().next().expect("nonempty family");
        StructSystem {
            tree,
            pre,
            coding: LiteralCoding::for_structure(any),
            states: RefCell::new(Vec::new()),
            index: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn coding(&self) -> &LiteralCoding {
        &self.coding
    }

    pub fn intern(&self, st: StructState) -> State {
        if let Some(&l) = self.index.borrow().get(&st) {
            return l;
        }
        let l = self.states.borrow().len() as State;
        self.states.borrow_mut().push(st.clone());
        self.index.borrow_mut().insert(st, l);
        l
    }

    pub fn decode(&self, l: State) -> Option<StructState> {
        self.states.borrow().get(l as usize).cloned()
    }

    fn state(&self, l: State) -> StructState {
        self.decode(l).expect("interned state")
    }
}

impl EtaSystem for StructSystem<'_, '_, '_, '_> {
    fn eta(&self) -> Ordinal {
        Ordinal::nat(self.tree.levels())
    }

    fn is_state(&self, l: State) -> bool {
        (l as usize) < self.states.borrow().len()
    }

    fn in_tree(&self, seq: &[State]) -> bool {
        seq.iter().enumerate().all(|(i, &l)| {
            let Some(st) = self.decode(l) else { return false };
            let size = self.tree.structure(&st.tau).size();
            st.tau == self.pre.tau(i)
                && st.abar.len() >= i
                && st.abar.iter().all(|&x| x < size)
                && (0..i.min(size)).all(|x| st.abar.contains(&x))
        })
    }

    fn restraint(&self, xi: &Ordinal, a: State, b: State) -> bool {
        state_restraint(self.tree, xi, &self.state(a), &self.state(b))
    }

    fn enumerate(&self, l: State) -> Vec<u64> {
        let st = self.state(l);
        self.coding.type_codes(self.tree.structure(&st.tau), &st.abar)
    }

    fn extend(&self, prefix: &[State], chain: &[ChainLink]) -> Result<State, Error> {
        let s = prefix.len();
        let decoded: Vec<(StructState, Ordinal)> = chain.iter().map(|l| (self.state(l.state), l.xi.clone())).collect();
        let st = extend_witness(self.tree, &decoded, s, &self.pre.tau(s))?;
        Ok(self.intern(st))
    }
}

/// The outcome of a build: the run, its decoded states and the diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Built {
    pub run: Run,
    pub states: Vec<StructState>,
    /// Every literal code enumerated by the run.
    pub enumerated: BTreeSet<u64>,
    /// The enumerated literals over the longest initial run of constants
    /// on which the enumeration decides every literal.
    pub diagram: BTreeSet<u64>,
}

/// Runs the tree's system for `stages` stages with `⪯` as belief.
pub fn build(ctx: &BeliefContext, tree: &EtaTree, w: &dyn BranchOracle, n: u64, stages: usize) -> Result<Built, Error> {
    let pre = PreLeq::new(ctx, w, n, Ordinal::nat(tree.levels()));
    let sys = StructSystem::new(tree, &pre);
    let run = system::run(&pre, &sys, stages)?;
    let enumerated = system::enumerate(&sys, &run);
    let diagram = complete_part(sys.coding(), &enumerated);
    let states = run.states.iter().map(|&l| sys.state(l)).collect();
    Ok(Built { run, states, enumerated, diagram })
}
