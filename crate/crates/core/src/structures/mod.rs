//! Finite relational structures, brute-force back-and-forth relations, η-trees
//! of structures and the system whose runs build copies of a guessed branch.

pub mod demo;
pub mod iso;
pub mod literal;
pub mod system;
pub mod tree;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::ordinal::Ordinal;

pub use iso::{complete_part, iso_check, isomorphic};
pub use literal::{Literal, LiteralCoding};
pub use system::{build, extend_witness, Built, StructState, StructSystem};
pub use tree::{tau_approx, Branch, BranchOracle, EmptyOracle, EtaTree, HaltsOracle, PreLeq};

/// A relation of fixed arity as a set of tuples.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A finite structure on `{0, …, size − 1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FinStructure {
    size: usize,
    relations: Vec<Relation>,
}

impl FinStructure {
    pub fn new(size: usize, relations: Vec<Relation>) -> Result<FinStructure, Error> {
        if size == 0 {
            return Err(Error::Unsupported(String::from("empty universe")));
        }
        for r in &relations {
            if r.arity == 0 {
                return Err(Error::ArityMismatch);
            }
            for t in &r.tuples {
                if t.len() != r.arity {
                    return Err(Error::ArityMismatch);
                }
                if t.iter().any(|&x| x >= size) {
                    return Err(Error::Unsupported(String::from("relation tuple outside the universe")));
                }
            }
        }
        Ok(FinStructure { size, relations })
    }

    /// A structure with one unary relation holding of `0, …, marked − 1`.
    pub fn unary(size: usize, marked: usize) -> FinStructure {
        let tuples = (0..marked.min(size)).map(|x| alloc::vec![x]).collect();
        FinStructure::new(size, alloc::vec![Relation { arity: 1, tuples }]).expect("well-formed")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn arities(&self) -> Vec<usize> {
        self.relations.iter().map(|r| r.arity).collect()
    }

    pub fn holds(&self, rel: usize, args: &[usize]) -> bool {
        self.relations[rel].tuples.contains(args)
    }
}

fn check_signature(a: &FinStructure, b: &FinStructure) -> Result<(), Error> {
    if a.arities() != b.arities() {
        return Err(Error::ArityMismatch);
    }
    Ok(())
}

fn check_tuple(a: &FinStructure, abar: &[usize]) -> Result<(), Error> {
    if abar.iter().any(|&x| x >= a.size) {
        return Err(Error::Unsupported(String::from("tuple entry outside the universe")));
    }
    Ok(())
}

/// Whether `ā` in `A` and `b̄` in `B` satisfy the same literals.
pub fn same_atomic_type(a: &FinStructure, abar: &[usize], b: &FinStructure, bbar: &[usize]) -> bool {
    let n = abar.len();
    if bbar.len() != n {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            if (abar[i] == abar[j]) != (bbar[i] == bbar[j]) {
                return false;
            }
        }
    }
    for (r, rel) in a.relations.iter().enumerate() {
        let mut idx = alloc::vec![0usize; rel.arity];
        if n == 0 {
            continue;
        }
        loop {
            let xa: Vec<usize> = idx.iter().map(|&i| abar[i]).collect();
            let xb: Vec<usize> = idx.iter().map(|&i| bbar[i]).collect();
            if a.holds(r, &xa) != b.holds(r, &xb) {
                return false;
            }
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    true
}

/// Sequences of distinct elements of `A` outside `used`, shortest first.
pub fn fresh_tuples(a: &FinStructure, used: &[usize]) -> Vec<Vec<usize>> {
    let pool: Vec<usize> = (0..a.size).filter(|x| !used.contains(x)).collect();
    let mut out = alloc::vec![Vec::new()];
    let mut frontier = alloc::vec![Vec::new()];
    for _ in 0..pool.len() {
        let mut next = Vec::new();
        for t in &frontier {
            for &x in &pool {
                if !t.contains(&x) {
                    let mut u: Vec<usize> = t.clone();
                    u.push(x);
                    next.push(u);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn concat(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

pub(crate) fn bf(a: &FinStructure, abar: &[usize], b: &FinStructure, bbar: &[usize], xi: u64) -> bool {
    if abar.len() > bbar.len() {
        return false;
    }
    let bbar = &bbar[..abar.len()];
    if xi == 0 {
        return same_atomic_type(a, abar, b, bbar);
    }
    let cs = fresh_tuples(a, abar);
    for d in fresh_tuples(b, bbar) {
        let bd = concat(bbar, &d);
        for gamma in 0..xi {
            let found = cs
                .iter()
                .filter(|c| c.len() == d.len())
                .any(|c| bf(b, &bd, a, &concat(abar, c), gamma));
            if !found {
                return false;
            }
        }
    }
    true
}

fn finite_level(xi: &Ordinal) -> Result<u64, Error> {
    xi.as_nat().ok_or(Error::InfiniteLevel)
}

/// `(A, ā) ≤_ξ (B, b̄)`, comparing against `b̄↾|ā|`.
pub fn bf_leq(a: &FinStructure, abar: &[usize], b: &FinStructure, bbar: &[usize], xi: &Ordinal) -> Result<bool, Error> {
    check_signature(a, b)?;
    check_tuple(a, abar)?;
    check_tuple(b, bbar)?;
    Ok(bf(a, abar, b, bbar, finite_level(xi)?))
}

/// Searches `c̄ = ā⌢ē` whose new entries copy the equality pattern of
/// `b̄` beyond `|ā|`, trying every image in `{0, …, size − 1}` for the fresh
/// elements of `b̄`.
pub(crate) fn lift_search(size: usize, abar: &[usize], bbar: &[usize], check: impl Fn(&[usize]) -> bool) -> Option<Vec<usize>> {
    let head = abar.len().min(bbar.len());
    let mut fresh: Vec<usize> = Vec::new();
    for &y in &bbar[head..] {
        if !bbar[..head].contains(&y) && !fresh.contains(&y) {
            fresh.push(y);
        }
    }
    let mut images = alloc::vec![0usize; fresh.len()];
    loop {
        let mut c = abar.to_vec();
        for &y in &bbar[head..] {
            let x = match bbar[..head].iter().position(|&z| z == y) {
                Some(i) => abar[i],
                None => images[fresh.iter().position(|&z| z == y).expect("fresh element")],
            };
            c.push(x);
        }
        if check(&c) {
            return Some(c);
        }
        let mut k = 0;
        while k < images.len() {
            images[k] += 1;
            if images[k] < size {
                break;
            }
            images[k] = 0;
            k += 1;
        }
        if k == images.len() {
            return None;
        }
    }
}

/// Some `c̄ ⊇ ā` with `(B, b̄) ≤_β (A, c̄)`, given `(A, ā) ≤_{β+1} (B, b̄)`.
pub fn bf_lift(a: &FinStructure, abar: &[usize], b: &FinStructure, bbar: &[usize], beta: &Ordinal) -> Result<Vec<usize>, Error> {
    check_signature(a, b)?;
    check_tuple(a, abar)?;
    check_tuple(b, bbar)?;
    let beta = finite_level(beta)?;
    if !bf(a, abar, b, bbar, beta + 1) {
        return Err(Error::NoWitness);
    }
    lift_search(a.size, abar, bbar, |c| bf(b, bbar, a, c, beta)).ok_or(Error::NoWitness)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_unary(max: usize) -> Vec<FinStructure> {
        (1..=max).flat_map(|n| (0..=n).map(move |k| FinStructure::unary(n, k))).collect()
    }

    #[test]
    fn atomic_mismatch() {
        let a = FinStructure::unary(1, 1);
        let b = FinStructure::unary(1, 0);
        assert_eq!(bf_leq(&a, &[0], &b, &[0], &Ordinal::zero()), Ok(false));
        assert_eq!(bf_leq(&a, &[], &b, &[], &Ordinal::zero()), Ok(true));
    }

    #[test]
    fn reflexive_and_monotone() {
        let fam = all_unary(3);
        for a in &fam {
            for abar in fresh_tuples(a, &[]).iter().filter(|t| t.len() <= 2) {
                for xi in 0..=3 {
                    assert_eq!(bf_leq(a, abar, a, abar, &Ordinal::nat(xi)), Ok(true));
                }
            }
        }
        for a in &fam {
            for b in &fam {
                for xi in 0..3 {
                    if bf(a, &[], b, &[], xi + 1) {
                        assert!(bf(a, &[], b, &[], xi));
                    }
                }
            }
        }
    }

    #[test]
    fn one_point_below_two_points() {
        let one = FinStructure::unary(1, 0);
        let two = FinStructure::unary(2, 0);
        assert_eq!(bf_leq(&two, &[], &one, &[], &Ordinal::one()), Ok(true));
        assert_eq!(bf_leq(&one, &[], &two, &[], &Ordinal::one()), Ok(false));
        assert_eq!(bf_leq(&one, &[], &two, &[], &Ordinal::omega()), Err(Error::InfiniteLevel));
    }

    #[test]
    fn lift_rechecks() {
        let fam = all_unary(3);
        for a in &fam {
            for b in &fam {
                for bbar in fresh_tuples(b, &[]) {
                    for beta in 0..2 {
                        let pre = bf(a, &[], b, &bbar, beta + 1);
                        match bf_lift(a, &[], b, &bbar, &Ordinal::nat(beta)) {
                            Ok(c) => {
                                assert!(pre);
                                assert!(bf(b, &bbar, a, &c, beta));
                            }
                            Err(e) => {
                                assert_eq!(e, Error::NoWitness);
                                assert!(!pre);
                            }
                        }
                    }
                }
            }
        }
        let a = FinStructure::unary(2, 1);
        assert_eq!(bf_lift(&a, &[1], &a, &[], &Ordinal::zero()), Err(Error::NoWitness));
        assert_eq!(bf_lift(&a, &[1, 0], &a, &[1, 0, 1], &Ordinal::one()), Ok(alloc::vec![1, 0, 1]));
    }

    #[test]
    fn signature_checked() {
        let a = FinStructure::unary(1, 0);
        let b = FinStructure::new(1, Vec::new()).unwrap();
        assert_eq!(bf_leq(&a, &[], &b, &[], &Ordinal::zero()), Err(Error::ArityMismatch));
        let bad = Relation { arity: 2, tuples: [alloc::vec![0]].into_iter().collect() };
        assert_eq!(FinStructure::new(1, alloc::vec![bad]), Err(Error::ArityMismatch));
    }
}
