//! The jump operator `𝒥`, its finite approximation `J`, the inverse `J⁻¹`
//! and finite iterates.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::error::Error;
use crate::functional::{FunctionalTable, Oracle};
use crate::value::{decode, FinString, Value};

/// The stages `t₀ < t₁ < … < t_k` used by `J(σ)`; `t_k = |σ|` unless the
/// list is empty.
pub fn approx_stages(table: &FunctionalTable, sigma: &FinString) -> Vec<usize> {
    let mut stages = Vec::new();
    let mut prev = 1usize;
    let mut i = 0u64;
    loop {
        let mut t = prev + 1;
        if let Some((use_t, _)) = table.first_convergence(i, sigma, i) {
            t = t.max(use_t);
        }
        if t > sigma.len() {
            return stages;
        }
        stages.push(t);
        prev = t;
        i += 1;
    }
}

/// `J(σ) = ⟨σ↾t₀, …, σ↾t_k⟩` with every entry a code.
pub fn japprox(table: &FunctionalTable, sigma: &FinString) -> FinString {
    let mut out = Vec::with_capacity(sigma.len().saturating_sub(1));
    let mut prev = 1usize;
    let mut i = 0u64;
    loop {
        let mut t = prev + 1;
        if let Some((use_t, _)) = table.first_convergence(i, sigma, i) {
            t = t.max(use_t);
        }
        if t > sigma.len() {
            return FinString::from_vec(out);
        }
        out.push(Value::Code(sigma.restrict(t)));
        prev = t;
        i += 1;
    }
}

/// `J⁻¹(τ)`: the string coded by the last entry of `τ`.
pub fn japprox_inv(tau: &FinString) -> Result<FinString, Error> {
    decode(tau.last().ok_or(Error::EmptyInput)?)
}

/// `Jⁿ(σ)`.
pub fn japprox_n(table: &FunctionalTable, sigma: &FinString, n: usize) -> FinString {
    let mut cur = sigma.clone();
    for _ in 0..n {
        if cur.is_empty() {
            break;
        }
        cur = japprox(table, &cur);
    }
    cur
}

/// `J⁻ⁿ(τ)`.
pub fn japprox_inv_n(tau: &FinString, n: usize) -> Result<FinString, Error> {
    let mut cur = tau.clone();
    for _ in 0..n {
        cur = japprox_inv(&cur)?;
    }
    Ok(cur)
}

/// The true jump `𝒥(Z)` of an oracle, computed lazily. Requires a toy table.
pub struct JumpOracle<'a> {
    table: &'a FunctionalTable,
    base: Box<dyn Oracle + 'a>,
    stages: RefCell<Vec<usize>>,
    cache: RefCell<FinString>,
}

impl<'a> JumpOracle<'a> {
    pub fn new(table: &'a FunctionalTable, base: Box<dyn Oracle + 'a>) -> Result<JumpOracle<'a>, Error> {
        if !table.is_toy() {
            return Err(Error::UndecidableMode);
        }
        Ok(JumpOracle { table, base, stages: RefCell::new(Vec::new()), cache: RefCell::new(FinString::empty()) })
    }

    /// `⟨t₀, …, t_{n−1}⟩`, the first `n` true stages of the base oracle.
    pub fn stages(&self, n: usize) -> Vec<usize> {
        let mut st = self.stages.borrow_mut();
        while st.len() < n {
            let i = st.len() as u64;
            let prev = st.last().copied().unwrap_or(1);
            let conv = self.table.true_convergence(i, self.base.as_ref(), i).expect("toy table checked at construction");
            let t = match conv {
                Some((use_t, _)) => (prev + 1).max(use_t),
                None => prev + 1,
            };
            st.push(t);
        }
        st[..n].to_vec()
    }
}

impl Oracle for JumpOracle<'_> {
    fn prefix(&self, n: usize) -> FinString {
        if self.cache.borrow().len() >= n {
            return self.cache.borrow().restrict(n);
        }
        let st = self.stages(n);
        let Some(&top) = st.last() else {
            return FinString::empty();
        };
        let z = self.base.prefix(top);
        let out: FinString = st.into_iter().map(|t| Value::Code(z.restrict(t))).collect();
        *self.cache.borrow_mut() = out.clone();
        out
    }
}

/// `⟨t₀, …, t_n⟩`, the Z-true stages.
pub fn true_stage_seq<O: Oracle>(table: &FunctionalTable, z: O, n: usize) -> Result<Vec<usize>, Error> {
    Ok(JumpOracle::new(table, Box::new(z))?.stages(n + 1))
}

/// `𝒥(Z)↾(n+1)`.
pub fn jump_prefix<O: Oracle>(table: &FunctionalTable, z: O, n: usize) -> Result<FinString, Error> {
    Ok(JumpOracle::new(table, Box::new(z))?.prefix(n + 1))
}

/// The oracle `𝒥ⁿ(Z)`.
pub fn jump_n_oracle<'a, O: Oracle + 'a>(
    table: &'a FunctionalTable,
    z: O,
    n: usize,
) -> Result<Box<dyn Oracle + 'a>, Error> {
    if !table.is_toy() {
        return Err(Error::UndecidableMode);
    }
    let mut cur: Box<dyn Oracle + 'a> = Box::new(z);
    for _ in 0..n {
        cur = Box::new(JumpOracle::new(table, cur)?);
    }
    Ok(cur)
}

/// `𝒥ⁿ(Z)↾len`.
pub fn jump_n<O: Oracle>(table: &FunctionalTable, z: O, n: usize, len: usize) -> Result<FinString, Error> {
    Ok(jump_n_oracle(table, z, n)?.prefix(len))
}

impl<T: Oracle + ?Sized> Oracle for Box<T> {
    fn prefix(&self, n: usize) -> FinString {
        (**self).prefix(n)
    }
}

impl<T: Oracle + ?Sized> Oracle for &T {
    fn prefix(&self, n: usize) -> FinString {
        (**self).prefix(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{ConstOracle, ToyBehavior};

    fn zeros(n: usize) -> FinString {
        FinString::zeros(n)
    }

    #[test]
    fn short_strings_jump_to_empty() {
        let t = FunctionalTable::all_divergent();
        assert!(japprox(&t, &zeros(0)).is_empty());
        assert!(japprox(&t, &zeros(1)).is_empty());
    }

    #[test]
    fn divergent_table_example() {
        let t = FunctionalTable::all_divergent();
        let j = japprox(&t, &zeros(4));
        let want: FinString = [2, 3, 4].iter().map(|&n| Value::Code(zeros(n))).collect();
        assert_eq!(j, want);
        assert_eq!(approx_stages(&t, &zeros(4)), alloc::vec![2, 3, 4]);
        assert_eq!(japprox_inv(&j).unwrap(), zeros(4));
    }

    #[test]
    fn inverse_edge_cases() {
        let tau = FinString::from_vec(alloc::vec![Value::Code(FinString::nats(&[3]))]);
        assert_eq!(japprox_inv(&tau).unwrap(), FinString::nats(&[3]));
        assert_eq!(japprox_inv(&FinString::empty()), Err(Error::EmptyInput));
        assert_eq!(japprox_inv(&FinString::nats(&[1])), Err(Error::NotACode));
    }

    #[test]
    fn true_stages() {
        let t = FunctionalTable::all_divergent();
        assert_eq!(true_stage_seq(&t, ConstOracle::zero(), 4).unwrap(), alloc::vec![2, 3, 4, 5, 6]);
        assert_eq!(true_stage_seq(&t, ConstOracle::zero(), 0).unwrap(), alloc::vec![2]);
        let want: FinString = [2, 3].iter().map(|&n| Value::Code(zeros(n))).collect();
        assert_eq!(jump_prefix(&t, ConstOracle::zero(), 1).unwrap(), want);

        let h = FunctionalTable::toy([(0, ToyBehavior::halting(5, Value::Nat(1)))]);
        assert_eq!(true_stage_seq(&h, ConstOracle::zero(), 1).unwrap(), alloc::vec![5, 6]);
        assert_eq!(jump_prefix(&h, ConstOracle::zero(), 0).unwrap().first(), Some(&Value::Code(zeros(5))));
        assert_eq!(
            true_stage_seq(&FunctionalTable::Universal, ConstOracle::zero(), 1),
            Err(Error::UndecidableMode)
        );
    }

    #[test]
    fn iterates() {
        let t = FunctionalTable::all_divergent();
        assert_eq!(japprox_n(&t, &zeros(5), 0), zeros(5));
        assert_eq!(japprox_n(&t, &zeros(6), 2), japprox(&t, &japprox(&t, &zeros(6))));
        let j2 = jump_n(&t, ConstOracle::zero(), 2, 3).unwrap();
        let j1 = jump_n(&t, ConstOracle::zero(), 1, 10).unwrap();
        for (k, v) in j2.iter().enumerate() {
            let Value::Code(s) = v else { panic!() };
            assert!(s.is_prefix_of(&j1), "entry {k}");
        }
    }
}
