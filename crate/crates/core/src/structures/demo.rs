//! Searches for small η-trees of one-unary-relation structures, and the
//! trees they produced, frozen with their certificates.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::iso::isomorphic;
use super::tree::{Branch, EtaTree};
use super::{bf, FinStructure};

/// The largest universe the searches consider.
pub const MAX_SIZE: usize = 3;

/// What brute force says about a pair `A₀, A₁`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// The greatest `ξ ≤ 3` with `A₀ ≥_ξ A₁`.
    pub geq_level: u64,
    pub isomorphic: bool,
}

/// One-unary-relation structures as `(size, marked)`, up to isomorphism,
/// smallest first.
pub fn unary_candidates(max: usize) -> Vec<(usize, usize)> {
    (1..=max).flat_map(|n| (0..=n).map(move |k| (n, k))).collect()
}

fn make(c: (usize, usize)) -> FinStructure {
    FinStructure::unary(c.0, c.1)
}

pub fn certify(a0: &FinStructure, a1: &FinStructure) -> Certificate {
    let geq_level = (0..=3).take_while(|&x| bf(a1, &[], a0, &[], x)).last().unwrap_or(0);
    Certificate { geq_level, isomorphic: isomorphic(a0, a1) }
}

/// The first pair with `A₀ ≥_1 A₁` and `A₀ ≇ A₁`, ordered by total size,
/// then by `A₀`, then by `A₁`.
pub fn search_pair(max: usize) -> Option<[(usize, usize); 2]> {
    let cands = unary_candidates(max);
    let mut pairs: Vec<[(usize, usize); 2]> = cands.iter().flat_map(|&x| cands.iter().map(move |&y| [x, y])).collect();
    pairs.sort_by_key(|[x, y]| (x.0 + y.0, *x, *y));
    pairs.into_iter().find(|[x, y]| {
        let (a0, a1) = (make(*x), make(*y));
        bf(&a1, &[], &a0, &[], 1) && !isomorphic(&a0, &a1)
    })
}

/// The first two-level tree `A_{00}, A_{10}, A_{01}, A_{11}` (indexed by
/// `σ(0) + 2σ(1)`) satisfying the tree condition with `A_{00} ≇ A_{10}`,
/// ordered by total size and then lexicographically. For one unary relation
/// on finite universes `≡_1` already forces isomorphism, so the level-1
/// siblings are necessarily isomorphic.
pub fn search_two_level(max: usize) -> Option<[(usize, usize); 4]> {
    let cands = unary_candidates(max);
    let m = cands.len();
    let structs: Vec<FinStructure> = cands.iter().map(|&c| make(c)).collect();
    let geq = |lvl: u64| -> Vec<Vec<bool>> {
        (0..m).map(|i| (0..m).map(|j| bf(&structs[j], &[], &structs[i], &[], lvl)).collect()).collect()
    };
    let (g1, g2) = (geq(1), geq(2));
    let iso: Vec<Vec<bool>> = (0..m).map(|i| (0..m).map(|j| isomorphic(&structs[i], &structs[j])).collect()).collect();
    let mut best: Option<(usize, [usize; 4])> = None;
    for code in 0..m.pow(4) {
        let idx = [code % m, code / m % m, code / (m * m) % m, code / (m * m * m)];
        let ok = (0..4).all(|s| {
            (0..4).all(|t| {
                let (s0, s1, t0, t1) = (s & 1, s >> 1, t & 1, t >> 1);
                let level0 = s0 > t0 || g1[idx[s]][idx[t]];
                let level1 = s0 != t0 || s1 > t1 || g2[idx[s]][idx[t]];
                level0 && level1
            })
        }) && !iso[idx[0]][idx[1]];
        if ok {
            let size: usize = idx.iter().map(|&i| cands[i].0).sum();
            let better = match &best {
                None => true,
                Some((b, bi)) => (size, idx.map(|i| cands[i])) < (*b, bi.map(|i| cands[i])),
            };
            if better {
                best = Some((size, idx));
            }
        }
    }
    best.map(|(_, idx)| idx.map(|i| cands[i]))
}

/// The pair found by [`search_pair`] over structures of size at most 3.
pub const PAIR: [(usize, usize); 2] = [(1, 0), (2, 0)];

pub const PAIR_CERTIFICATE: Certificate = Certificate { geq_level: 1, isomorphic: false };

/// The tree found by [`search_two_level`] over structures of size at most 3.
pub const TWO_LEVEL: [(usize, usize); 4] = [(1, 0), (2, 0), (1, 0), (2, 0)];

/// The one-level tree `A_0 = A₀`, `A_1 = A₁` of the frozen pair.
pub fn pair_tree() -> EtaTree {
    let mut family = BTreeMap::new();
    family.insert(Branch::zeros(), make(PAIR[0]));
    family.insert(Branch::from_bits(1, 1), make(PAIR[1]));
    EtaTree::new(1, family).expect("frozen pair is a tree")
}

/// The frozen two-level tree.
pub fn two_level_tree() -> EtaTree {
    let family = (0..4u64).map(|bits| (Branch::from_bits(bits, 2), make(TWO_LEVEL[bits as usize]))).collect();
    EtaTree::new(2, family).expect("frozen two-level family is a tree")
}

/// `A_σ` of the frozen pair at the given branch bit.
pub fn pair_structure(bit: bool) -> FinStructure {
    make(PAIR[bit as usize])
}

pub fn two_level_structure(sigma: &Branch) -> FinStructure {
    let bits = sigma.get(0) as usize + 2 * sigma.get(1) as usize;
    make(TWO_LEVEL[bits])
}
