//! Reading a structure off an enumerated atomic diagram, and isomorphism of
//! finite structures.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::literal::{Literal, LiteralCoding};
use super::{FinStructure, Relation};
use crate::error::Error;

fn decided_blocks(coding: &LiteralCoding, set: &BTreeSet<u64>) -> usize {
    let mut m = 0;
    loop {
        let start = coding.block_start(m);
        let len = coding.block_len(m);
        if !(0..len / 2).all(|i| set.contains(&(start + 2 * i)) || set.contains(&(start + 2 * i + 1))) {
            return m;
        }
        m += 1;
    }
}

/// The literals over `c_0, …, c_{M−1}` for the largest `M` such that the set
/// decides every literal over those constants.
pub fn complete_part(coding: &LiteralCoding, set: &BTreeSet<u64>) -> BTreeSet<u64> {
    let end = coding.block_start(decided_blocks(coding, set));
    set.range(..end).copied().collect()
}

fn permutations_match(a: &FinStructure, b: &FinStructure, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
    if map.len() == a.size() {
        return a.relations().iter().zip(b.relations()).all(|(ra, rb)| {
            ra.tuples.len() == rb.tuples.len()
                && ra.tuples.iter().all(|t| rb.tuples.contains(&t.iter().map(|&x| map[x]).collect::<Vec<_>>()))
        });
    }
    for y in 0..b.size() {
        if !used[y] {
            used[y] = true;
            map.push(y);
            if permutations_match(a, b, map, used) {
                return true;
            }
            map.pop();
            used[y] = false;
        }
    }
    false
}

/// Whether two finite structures are isomorphic, by exhaustive search.
pub fn isomorphic(a: &FinStructure, b: &FinStructure) -> bool {
    a.size() == b.size()
        && a.arities() == b.arities()
        && permutations_match(a, b, &mut Vec::new(), &mut alloc::vec![false; b.size()])
}

/// Whether the structure presented by `diagram`, quotiented by its equality
/// literals, is isomorphic to `a`.
pub fn iso_check(coding: &LiteralCoding, diagram: &BTreeSet<u64>, a: &FinStructure) -> Result<bool, Error> {
    let lits: Vec<Literal> = diagram.iter().map(|&c| coding.decode(c)).collect();
    let consts = lits.iter().map(|l| l.max_var() + 1).max().unwrap_or(0);
    if decided_blocks(coding, diagram) < consts {
        return Err(Error::IncompleteDiagram);
    }
    if consts == 0 {
        return Ok(false);
    }
    if (0..coding.block_start(consts) / 2).any(|i| diagram.contains(&(2 * i)) && diagram.contains(&(2 * i + 1))) {
        return Ok(false);
    }
    let truth = |rel: usize, vars: Vec<usize>| {
        let code = coding.encode(&Literal { rel, vars, positive: true }).expect("literal in range");
        diagram.contains(&code)
    };
    let eq: Vec<Vec<bool>> = (0..consts).map(|i| (0..consts).map(|j| truth(0, alloc::vec![i, j])).collect()).collect();
    for i in 0..consts {
        for j in 0..consts {
            if !eq[i][i] || eq[i][j] != eq[j][i] || (0..consts).any(|k| eq[i][j] && eq[j][k] && !eq[i][k]) {
                return Ok(false);
            }
        }
    }
    let reps: Vec<usize> = (0..consts).filter(|&i| (0..i).all(|j| !eq[i][j])).collect();
    let class = |i: usize| reps.iter().position(|&r| eq[i][r]).expect("class representative");
    let mut relations = Vec::new();
    for (r, &k) in a.arities().iter().enumerate() {
        let mut tuples = BTreeSet::new();
        let mut idx = alloc::vec![0usize; k];
        loop {
            let holds = truth(r + 1, idx.clone());
            let rep: Vec<usize> = idx.iter().map(|&i| reps[class(i)]).collect();
            if holds != truth(r + 1, rep) {
                return Ok(false);
            }
            if holds {
                tuples.insert(idx.iter().map(|&i| class(i)).collect::<Vec<_>>());
            }
            let mut p = 0;
            while p < k {
                idx[p] += 1;
                if idx[p] < consts {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
            if p == k {
                break;
            }
        }
        relations.push(Relation { arity: k, tuples });
    }
    let quotient = FinStructure::new(reps.len(), relations)?;
    Ok(isomorphic(&quotient, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagram_of(a: &FinStructure, abar: &[usize], consts: usize) -> BTreeSet<u64> {
        let coding = LiteralCoding::for_structure(a);
        let mut padded = abar.to_vec();
        while (padded.len() as u64) < coding.block_start(consts) {
            padded.push(abar[padded.len() % abar.len()]);
        }
        let all: BTreeSet<u64> = coding.type_codes(a, &padded).into_iter().collect();
        complete_part(&coding, &all)
    }

    #[test]
    fn unary_isomorphism() {
        assert!(isomorphic(&FinStructure::unary(3, 1), &FinStructure::unary(3, 1)));
        assert!(!isomorphic(&FinStructure::unary(3, 1), &FinStructure::unary(3, 2)));
        assert!(!isomorphic(&FinStructure::unary(2, 1), &FinStructure::unary(3, 1)));
    }

    #[test]
    fn diagram_of_a_covering_tuple() {
        let a = FinStructure::unary(3, 1);
        let coding = LiteralCoding::for_structure(&a);
        let d = diagram_of(&a, &[2, 0, 1], 4);
        assert_eq!(iso_check(&coding, &d, &a), Ok(true));
        assert_eq!(iso_check(&coding, &d, &FinStructure::unary(3, 2)), Ok(false));
        let partial = diagram_of(&a, &[2, 0], 2);
        assert_eq!(iso_check(&coding, &partial, &a), Ok(false));
        let mut broken = d.clone();
        broken.remove(&0);
        assert_eq!(iso_check(&coding, &broken, &a), Err(Error::IncompleteDiagram));
    }
}
