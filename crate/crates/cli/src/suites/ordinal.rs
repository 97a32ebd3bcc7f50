//! The normal-form map on `T_η` and the fixed fundamental sequences.

use truestage::ordinal::{g_eval, in_tree, kb_less, path_of};
use truestage::Ordinal;

use super::Report;

const FUND_RANGE: u64 = 20;

fn etas() -> [Ordinal; 3] {
    [Ordinal::one(), Ordinal::nat(2), Ordinal::omega()]
}

/// Nodes of `T_η` with entries below 4 and length at most 3.
pub fn fragment(eta: &Ordinal) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..3 {
        layer = layer.iter().flat_map(|p| (0..4).map(move |x| [p.as_slice(), &[x]].concat())).collect();
        out.extend(layer.iter().cloned());
    }
    out.into_iter().filter(|p| in_tree(eta, p)).collect()
}

/// Ordinals up to `ω^η` with at most two Cantor terms, exponents among the
/// first few below `η` and coefficients below 4.
fn samples(eta: &Ordinal) -> Vec<Ordinal> {
    let exps: Vec<Ordinal> = (0..4).map(Ordinal::nat).filter(|e| e < eta).collect();
    let mut out = vec![eta.omega_to()];
    for (i, hi) in exps.iter().enumerate() {
        for c in 1..4 {
            let head = Ordinal::omega_pow(hi.clone()).mul_nat(c);
            out.push(head.clone());
            for lo in &exps[..i] {
                for d in 1..4 {
                    out.push(head.add(&Ordinal::omega_pow(lo.clone()).mul_nat(d)));
                }
            }
        }
    }
    out
}

fn normal_form(rep: &mut Report) {
    for eta in etas() {
        let frag = fragment(&eta);
        let vals: Vec<Ordinal> = frag.iter().map(|p| g_eval(&eta, p).expect("node in tree")).collect();
        let top = eta.omega_to();
        for (p, gp) in frag.iter().zip(&vals) {
            rep.check(!gp.is_zero() && *gp <= top, || format!("η={eta}: {p:?} maps to {gp}"));
            rep.check(path_of(&eta, gp).as_ref() == Ok(p), || format!("η={eta}: path of {gp} is not {p:?}"));
            for (q, gq) in frag.iter().zip(&vals) {
                rep.check(kb_less(p, q) == (gp < gq), || format!("η={eta}: order of {p:?}, {q:?} not preserved"));
            }
        }
        for a in samples(&eta) {
            let back = path_of(&eta, &a).and_then(|p| g_eval(&eta, &p));
            rep.check(back.as_ref() == Ok(&a), || format!("η={eta}: {a} is not hit"));
        }
    }
}

fn fundamental(rep: &mut Report) {
    let mut alphas = vec![Ordinal::nat(1), Ordinal::nat(5), Ordinal::omega().succ()];
    for eta in etas() {
        alphas.extend(samples(&eta));
    }
    alphas.push(Ordinal::omega_pow(Ordinal::omega()).add(&Ordinal::omega()));
    for a in &alphas {
        for n in 0..=FUND_RANGE {
            let (x, y) = (a.fund(n).expect("positive"), a.fund(n + 1).expect("positive"));
            rep.check(x < *a && x.succ() <= *a, || format!("{a}[{n}] = {x} is not below"));
            rep.check(x <= y, || format!("{a}[{n}] > {a}[{}]", n + 1));
            if a.is_successor() {
                rep.check(Some(&x) == a.pred().as_ref(), || format!("{a}[{n}] = {x} is not the predecessor"));
            } else {
                rep.check(x < y, || format!("{a}[{n}] = {a}[{}] at a limit", n + 1));
            }
        }
    }
    rep.check(Ordinal::zero().fund(0).is_err(), || "0[0] exists".to_string());
}

/// `Σ_{i<n} ω^{α[i]}` is `ω^{α−1}·n` at successors and `ω^{α[n−1]}` at
/// limits, stays below `ω^α`, and passes every `ω^{α[k]}·c`.
fn power_sums(rep: &mut Report) {
    let alphas = [
        Ordinal::one(),
        Ordinal::nat(2),
        Ordinal::omega(),
        Ordinal::omega().succ(),
        Ordinal::omega_pow(Ordinal::nat(2)),
    ];
    for a in alphas {
        let top = a.omega_to();
        let mut sums = vec![Ordinal::zero()];
        for i in 0..FUND_RANGE {
            let next = sums[sums.len() - 1].add(&Ordinal::omega_pow(a.fund(i).expect("positive")));
            sums.push(next);
        }
        for (n, s) in sums.iter().enumerate().skip(1) {
            let expect = match a.pred() {
                Some(p) => p.omega_to().mul_nat(n as u64),
                None => a.fund(n as u64 - 1).expect("positive").omega_to(),
            };
            rep.check(*s == expect, || format!("α={a}: partial sum {n} is {s}, expected {expect}"));
            rep.check(*s < top && sums[n - 1] < *s, || format!("α={a}: partial sum {n} = {s} out of order"));
        }
        for k in 0..5 {
            for c in 1..4 {
                let b = a.fund(k).expect("positive").omega_to().mul_nat(c);
                rep.check(sums.iter().any(|s| *s > b), || format!("α={a}: partial sums stay below {b}"));
            }
        }
    }
}

pub fn run() -> Report {
    let mut rep = Report::new("ordinal normal form");
    normal_form(&mut rep);
    fundamental(&mut rep);
    power_sums(&mut rep);
    rep
}
