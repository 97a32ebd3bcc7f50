//! Ordinals below ε₀ in Cantor normal form, their fundamental sequences, the
//! tree `T_η` of iterated sequence indices and the normal-form map
//! `g_η : T_η → (0, ω^η]`.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::Error;

/// `ω^exp · coef`, `coef ≥ 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub exp: Ordinal,
    pub coef: u64,
}

/// An ordinal in Cantor normal form: terms with strictly decreasing
/// exponents. The derived lexicographic order is the ordinal order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Ordinal {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Ordinal {
        Ordinal::nat(1)
    }

    pub fn nat(n: u64) -> Ordinal {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: alloc::vec![Term { exp: Ordinal::zero(), coef: n }] }
        }
    }

    pub fn omega() -> Ordinal {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `ω^e`.
    pub fn omega_pow(e: Ordinal) -> Ordinal {
        Ordinal { terms: alloc::vec![Term { exp: e, coef: 1 }] }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exp.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|t| !t.exp.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [Term { exp, coef }] if exp.is_zero() => Some(*coef),
            _ => None,
        }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    /// `α − 1` for a successor `α`.
    pub fn pred(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().unwrap();
        if last.coef == 1 {
            terms.pop();
        } else {
            last.coef -= 1;
        }
        Some(Ordinal { terms })
    }

    /// Ordinal addition `self + other`.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self.terms.iter().take_while(|t| t.exp > lead.exp).cloned().collect();
        let same = self.terms.iter().find(|t| t.exp == lead.exp).map(|t| t.coef);
        match same {
            Some(c) => {
                terms.push(Term { exp: lead.exp.clone(), coef: c + lead.coef });
                terms.extend(other.terms[1..].iter().cloned());
            }
            None => terms.extend(other.terms.iter().cloned()),
        }
        Ordinal { terms }
    }

    /// The unique `δ` with `lower + δ = self`, for `lower ≤ self`.
    pub fn sub_left(&self, lower: &Ordinal) -> Option<Ordinal> {
        if lower > self {
            return None;
        }
        for (i, (a, b)) in self.terms.iter().zip(lower.terms.iter()).enumerate() {
            if a == b {
                continue;
            }
            if a.exp == b.exp {
                // a.coef > b.coef because lower ≤ self
                let mut terms = alloc::vec![Term { exp: a.exp.clone(), coef: a.coef - b.coef }];
                terms.extend(self.terms[i + 1..].iter().cloned());
                return Some(Ordinal { terms });
            }
            return Some(Ordinal { terms: self.terms[i..].to_vec() });
        }
        Some(Ordinal { terms: self.terms[lower.terms.len().min(self.terms.len())..].to_vec() })
    }

    /// `self · n` for a natural `n`.
    pub fn mul_nat(&self, n: u64) -> Ordinal {
        if n == 0 || self.is_zero() {
            return Ordinal::zero();
        }
        let mut terms = self.terms.clone();
        terms[0].coef *= n;
        Ordinal { terms }
    }

    /// `1 + self`.
    pub fn one_plus(&self) -> Ordinal {
        Ordinal::one().add(self)
    }

    /// The `α` with `1 + α = self`, for `self ≥ 1`.
    pub fn minus_one_plus(&self) -> Option<Ordinal> {
        self.sub_left(&Ordinal::one()).filter(|_| !self.is_zero())
    }

    /// The fundamental sequence `α[n]`: `α − 1` at successors,
    /// `γ + ω^β·n` at `γ + ω^{β+1}`, and `γ + ω^{λ[n]}` at `γ + ω^λ` with `λ`
    /// a limit.
    pub fn fund(&self, n: u64) -> Result<Ordinal, Error> {
        let Some(last) = self.terms.last() else {
            return Err(Error::ZeroHasNoSequence);
        };
        if last.exp.is_zero() {
            return Ok(self.pred().unwrap());
        }
        let mut base = self.terms.clone();
        let e = last.exp.clone();
        let tail_coef = last.coef;
        if tail_coef == 1 {
            base.pop();
        } else {
            base.last_mut().unwrap().coef -= 1;
        }
        let base = Ordinal { terms: base };
        if let Some(b) = e.pred() {
            Ok(base.add(&Ordinal::omega_pow(b).mul_nat(n)))
        } else {
            Ok(base.add(&Ordinal::omega_pow(e.fund(n)?)))
        }
    }

    /// `ω^η` for this `η`.
    pub fn omega_to(&self) -> Ordinal {
        Ordinal::omega_pow(self.clone())
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if t.exp.is_zero() {
                write!(f, "{}", t.coef)?;
                continue;
            }
            if t.exp == Ordinal::one() {
                f.write_str("w")?;
            } else if t.exp.terms.len() == 1 && (t.exp.terms[0].coef == 1 || t.exp.is_finite()) {
                write!(f, "w^{}", t.exp)?;
            } else {
                write!(f, "w^({})", t.exp)?;
            }
            if t.coef > 1 {
                write!(f, "*{}", t.coef)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `ord := sum; sum := prod ("+" prod)*; prod := atom ("*" nat)*;
/// atom := nat | "w" | "w^" atom | "(" sum ")"`. `0` is a nat.
pub fn parse_ordinal(input: &str) -> Result<Ordinal, Error> {
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = OrdParser { chars: &chars, pos: 0 };
    if chars.is_empty() {
        return Err(Error::Parse { pos: 0, msg: String::from("empty ordinal") });
    }
    let o = p.sum()?;
    if p.pos != chars.len() {
        return Err(Error::Parse { pos: p.pos, msg: String::from("unexpected trailing input") });
    }
    Ok(o)
}

struct OrdParser<'a> {
    chars: &'a [char],
    pos: usize,
}

impl OrdParser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T, Error> {
        Err(Error::Parse { pos: self.pos, msg: String::from(msg) })
    }

    fn sum(&mut self) -> Result<Ordinal, Error> {
        let mut acc = self.prod()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            let rhs = self.prod()?;
            acc = acc.add(&rhs);
        }
        Ok(acc)
    }

    fn prod(&mut self) -> Result<Ordinal, Error> {
        let mut acc = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let n = self.nat()?;
            acc = acc.mul_nat(n);
        }
        Ok(acc)
    }

    fn nat(&mut self) -> Result<u64, Error> {
        let start = self.pos;
        let mut n: u64 = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            n = match n.checked_mul(10).and_then(|n| n.checked_add(d as u64)) {
                Some(n) => n,
                None => return Err(Error::Parse { pos: start, msg: String::from("number too large") }),
            };
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a natural number");
        }
        Ok(n)
    }

    fn atom(&mut self) -> Result<Ordinal, Error> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::nat(self.nat()?)),
            Some('w') | Some('ω') => {
                self.pos += 1;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    let e = self.atom()?;
                    Ok(Ordinal::omega_pow(e))
                } else {
                    Ok(Ordinal::omega())
                }
            }
            Some('(') => {
                self.pos += 1;
                let o = self.sum()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(o)
            }
            None => self.err("unexpected end of input"),
            _ => self.err("expected a natural number, 'w' or '('"),
        }
    }
}

/// A node `⟨n₀, …, n_k⟩` of `T_η`.
pub type TuplePath = Vec<u64>;

/// `η[n₀][n₁]⋯[n_k]`, if it exists.
pub fn iterate_fund(eta: &Ordinal, path: &[u64]) -> Option<Ordinal> {
    let mut cur = eta.clone();
    for &n in path {
        if cur.is_zero() {
            return None;
        }
        cur = cur.fund(n).ok()?;
    }
    Some(cur)
}

pub fn in_tree(eta: &Ordinal, path: &[u64]) -> bool {
    iterate_fund(eta, path).is_some()
}

/// `Σ_{i<n} ω^{η[i]}`.
fn partial_sum(eta: &Ordinal, n: u64) -> Result<Ordinal, Error> {
    let mut acc = Ordinal::zero();
    for i in 0..n {
        acc = acc.add(&Ordinal::omega_pow(eta.fund(i)?));
    }
    Ok(acc)
}

/// The normal-form map `η⟨n₀,…,n_k⟩ = Σ_{i<n₀} ω^{η[i]} + η[n₀]⟨n₁,…,n_k⟩`,
/// `η⟨⟩ = ω^η`.
pub fn g_eval(eta: &Ordinal, path: &[u64]) -> Result<Ordinal, Error> {
    let mut acc = Ordinal::zero();
    let mut cur = eta.clone();
    for &n in path {
        if cur.is_zero() {
            return Err(Error::NotInTree);
        }
        acc = acc.add(&partial_sum(&cur, n)?);
        cur = cur.fund(n)?;
    }
    Ok(acc.add(&cur.omega_to()))
}

/// Inverse of [`g_eval`]: the node `p ∈ T_η` with `η⟨p⟩ = α`, `0 < α ≤ ω^η`.
pub fn path_of(eta: &Ordinal, alpha: &Ordinal) -> Result<TuplePath, Error> {
    if alpha.is_zero() || *alpha > eta.omega_to() {
        return Err(Error::OutOfRange);
    }
    let mut path = Vec::new();
    let mut cur_eta = eta.clone();
    let mut rem = alpha.clone();
    loop {
        if rem == cur_eta.omega_to() {
            return Ok(path);
        }
        // 0 < rem < ω^{cur_eta}, so cur_eta > 0.
        let mut below = Ordinal::zero();
        let mut n = 0u64;
        loop {
            let step = cur_eta.fund(n)?;
            let next = below.add(&Ordinal::omega_pow(step.clone()));
            if next >= rem {
                rem = rem.sub_left(&below).ok_or(Error::OutOfRange)?;
                path.push(n);
                cur_eta = step;
                break;
            }
            below = next;
            n += 1;
        }
    }
}

/// Strict Kleene–Brouwer order: `p <_KB q` iff `q ⊊ p` or at the first
/// difference `p(i) < q(i)`.
pub fn kb_less(p: &[u64], q: &[u64]) -> bool {
    kb_cmp(p, q) == Ordering::Less
}

pub fn kb_cmp(p: &[u64], q: &[u64]) -> Ordering {
    for (a, b) in p.iter().zip(q.iter()) {
        if a != b {
            return a.cmp(b);
        }
    }
    // one is a prefix of the other: the longer one is smaller
    q.len().cmp(&p.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn o(s: &str) -> Ordinal {
        parse_ordinal(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(o("w^2+w*3+1").to_string(), "w^2+w*3+1");
        assert_eq!(o("1+w"), Ordinal::omega());
        assert_eq!(o("w+1").to_string(), "w+1");
        assert_eq!(o("w^w").to_string(), "w^w");
        assert_eq!(o("w*0"), Ordinal::zero());
        assert_eq!(o("w^(w+1)").to_string(), "w^(w+1)");
        match parse_ordinal("w+") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_ordinal("w x"), Err(Error::Parse { pos: 1, .. })));
    }

    #[test]
    fn fund_examples() {
        for n in 0..6 {
            assert_eq!(Ordinal::omega().fund(n).unwrap(), Ordinal::nat(n));
            assert_eq!(Ordinal::nat(5).fund(n).unwrap(), Ordinal::nat(4));
        }
        assert_eq!(o("w^2").fund(3).unwrap(), o("w*3"));
        assert_eq!(o("w^w").fund(2).unwrap(), o("w^2"));
        assert_eq!(o("w*2").fund(4).unwrap(), o("w+4"));
        assert_eq!(Ordinal::zero().fund(0), Err(Error::ZeroHasNoSequence));
    }

    #[test]
    fn sub_left_inverts_add() {
        let pairs = [("w", "w^2"), ("3", "w+1"), ("w*2+1", "w*3"), ("w^2+w", "w^2+w*2+5"), ("0", "w")];
        for (a, b) in pairs {
            let (a, b) = (o(a), o(b));
            let d = b.sub_left(&a).unwrap();
            assert_eq!(a.add(&d), b, "{a} + {d}");
        }
    }

    #[test]
    fn tree_membership() {
        assert!(in_tree(&Ordinal::one(), &[]));
        assert!(in_tree(&Ordinal::one(), &[7]));
        assert!(!in_tree(&Ordinal::one(), &[7, 0]));
        assert!(in_tree(&Ordinal::omega(), &[3, 1]));
        assert!(!in_tree(&Ordinal::zero(), &[0]));
    }

    #[test]
    fn g_eval_small() {
        assert_eq!(g_eval(&Ordinal::zero(), &[]).unwrap(), Ordinal::one());
        for n in 0..5 {
            assert_eq!(g_eval(&Ordinal::one(), &[n]).unwrap(), Ordinal::nat(n + 1));
        }
        assert_eq!(g_eval(&o("2"), &[]).unwrap(), o("w^2"));
        assert_eq!(g_eval(&o("2"), &[0]).unwrap(), o("w"));
        assert_eq!(g_eval(&o("2"), &[1, 2]).unwrap(), o("w+3"));
        assert_eq!(g_eval(&Ordinal::omega(), &[3]).unwrap(), o("w^3"));
        assert_eq!(g_eval(&Ordinal::one(), &[1, 0]), Err(Error::NotInTree));
    }

    #[test]
    fn path_of_examples() {
        assert_eq!(path_of(&Ordinal::one(), &Ordinal::nat(3)).unwrap(), vec![2]);
        assert_eq!(path_of(&o("w"), &o("w^w")).unwrap(), Vec::<u64>::new());
        assert_eq!(path_of(&o("2"), &o("w+3")).unwrap(), vec![1, 2]);
        assert_eq!(path_of(&Ordinal::one(), &o("w+1")), Err(Error::OutOfRange));
        assert_eq!(path_of(&Ordinal::one(), &Ordinal::zero()), Err(Error::OutOfRange));
    }

    #[test]
    fn kb_examples() {
        assert!(kb_less(&[4], &[]));
        assert!(kb_less(&[0], &[1]));
        assert!(kb_less(&[0, 5], &[1]));
        assert!(!kb_less(&[1], &[1]));
        assert!(!kb_less(&[], &[0]));
    }
}
