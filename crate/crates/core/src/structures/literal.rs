//! Gödel coding of literals over the variables `x_0, x_1, …`.
//!
//! Literals are grouped into blocks by their largest variable. Block `m`
//! lists equality first and then the signature's relations in order; within
//! a relation, variable vectors with largest entry `m` come in lexicographic
//! order, each as the positive literal followed by its negation. A literal's
//! code is its position in the concatenation of the blocks.

use alloc::vec::Vec;

use super::FinStructure;

/// `R_rel(x_{vars})` or its negation; relation `0` is equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Literal {
    pub rel: usize,
    pub vars: Vec<usize>,
    pub positive: bool,
}

impl Literal {
    pub fn max_var(&self) -> usize {
        self.vars.iter().copied().max().unwrap_or(0)
    }
}

/// The coding for a signature given by the arities of its relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralCoding {
    arities: Vec<usize>,
}

fn vectors_with_max(arity: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut v = alloc::vec![0usize; arity];
    loop {
        if v.iter().copied().max() == Some(m) {
            out.push(v.clone());
        }
        let mut k = arity;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            v[k] += 1;
            if v[k] <= m {
                break;
            }
            v[k] = 0;
        }
    }
}

impl LiteralCoding {
    /// The coding for structures with the given relation arities.
    pub fn new(arities: &[usize]) -> LiteralCoding {
        let mut all = alloc::vec![2];
        all.extend_from_slice(arities);
        LiteralCoding { arities: all }
    }

    pub fn for_structure(a: &FinStructure) -> LiteralCoding {
        LiteralCoding::new(&a.arities())
    }

    /// The literals whose largest variable is `m`, in code order.
    pub fn block(&self, m: usize) -> Vec<Literal> {
        let mut out = Vec::new();
        for (rel, &k) in self.arities.iter().enumerate() {
            for vars in vectors_with_max(k, m) {
                out.push(Literal { rel, vars: vars.clone(), positive: true });
                out.push(Literal { rel, vars, positive: false });
            }
        }
        out
    }

    pub fn block_len(&self, m: usize) -> u64 {
        self.arities
            .iter()
            .map(|&k| 2 * ((m as u64 + 1).pow(k as u32) - (m as u64).pow(k as u32)))
            .sum()
    }

    /// The code of the first literal of block `m`.
    pub fn block_start(&self, m: usize) -> u64 {
        (0..m).map(|j| self.block_len(j)).sum()
    }

    pub fn encode(&self, lit: &Literal) -> Option<u64> {
        let m = lit.max_var();
        let pos = self.block(m).iter().position(|l| l == lit)?;
        Some(self.block_start(m) + pos as u64)
    }

    pub fn decode(&self, code: u64) -> Literal {
        let mut m = 0;
        let mut start = 0;
        while start + self.block_len(m) <= code {
            start += self.block_len(m);
            m += 1;
        }
        self.block(m).swap_remove((code - start) as usize)
    }

    /// Whether `A ⊨ ψ(ā)`.
    pub fn holds(&self, a: &FinStructure, lit: &Literal, abar: &[usize]) -> bool {
        let args: Vec<usize> = lit.vars.iter().map(|&i| abar[i]).collect();
        let atom = if lit.rel == 0 { args[0] == args[1] } else { a.holds(lit.rel - 1, &args) };
        atom == lit.positive
    }

    /// `E(τ, ā)`: codes below `|ā|` of literals true of `ā`.
    pub fn type_codes(&self, a: &FinStructure, abar: &[usize]) -> Vec<u64> {
        let mut out = Vec::new();
        let mut code = 0u64;
        let mut m = 0;
        while code < abar.len() as u64 {
            for lit in self.block(m) {
                if code >= abar.len() as u64 {
                    break;
                }
                if lit.max_var() < abar.len() && self.holds(a, &lit, abar) {
                    out.push(code);
                }
                code += 1;
            }
            m += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unary_signature_blocks() {
        let c = LiteralCoding::new(&[1]);
        assert_eq!(c.block_len(0), 4);
        assert_eq!(c.block_len(1), 8);
        assert_eq!(c.block_start(3), 4 + 8 + 12);
        assert_eq!(c.decode(0), Literal { rel: 0, vars: alloc::vec![0, 0], positive: true });
        assert_eq!(c.decode(3), Literal { rel: 1, vars: alloc::vec![0], positive: false });
        assert_eq!(c.decode(4), Literal { rel: 0, vars: alloc::vec![0, 1], positive: true });
    }

    #[test]
    fn codes_roundtrip() {
        let c = LiteralCoding::new(&[1, 2]);
        for code in 0..200 {
            let lit = c.decode(code);
            assert_eq!(c.encode(&lit), Some(code));
            assert_eq!(c.decode(code ^ 1).positive, !lit.positive);
            assert!(lit.max_var() as u64 <= code);
        }
    }

    #[test]
    fn type_codes_of_a_pair() {
        let a = FinStructure::unary(2, 1);
        let c = LiteralCoding::for_structure(&a);
        assert_eq!(c.type_codes(&a, &[0, 1, 0, 1]), alloc::vec![0, 2]);
        assert!(c.type_codes(&a, &[]).is_empty());
    }
}
