//! Laws of the transfinite towers `J^{ω^α}` and `J^{ω^η}_p`.

use truestage::fixtures::{table, TABLE_NAMES};
use truestage::ordinal::{in_tree, kb_less};
use truestage::transfinite::{japprox_path, japprox_pow, japprox_pow_inv, japprox_pow_n};
use truestage::{FinString, FunctionalTable, Ordinal};

use super::{strings, Report};

pub const MAX_LEN: usize = 6;

fn exponents() -> [Ordinal; 3] {
    [Ordinal::one(), Ordinal::nat(2), Ordinal::omega()]
}

/// `J^{ω^α}(σ)` with the iterates `J_n^{ω^α}(σ)` for `n ≤ |σ| + 1`; later
/// iterates are empty.
fn iterates(t: &FunctionalTable, alpha: &Ordinal, s: &FinString) -> (FinString, Vec<FinString>) {
    let ns = (0..=s.len() as u64 + 1).map(|n| japprox_pow_n(t, alpha, n, s).expect("α is positive")).collect();
    (japprox_pow(t, alpha, s), ns)
}

fn pow_laws(rep: &mut Report, name: &str, t: &FunctionalTable, all: &[FinString]) {
    for alpha in exponents() {
        let tag = format!("{name} α={alpha}");
        let vals: Vec<(FinString, Vec<FinString>)> = all.iter().map(|s| iterates(t, &alpha, s)).collect();
        for (s, (js, ns)) in all.iter().zip(&vals) {
            rep.check(ns.last().is_some_and(FinString::is_empty), || format!("{tag}: late iterate of {s} is nonempty"));
            if js.is_empty() {
                continue;
            }
            if s.len() >= 2 {
                rep.check(japprox_pow_inv(&alpha, js).as_ref() == Ok(s), || format!("{tag}: inverse fails on {s}"));
            }
            for (u, (ju, nu)) in all.iter().zip(&vals) {
                let left = js.is_prefix_of(ju);
                let right = ns.iter().zip(nu).all(|(a, b)| a.is_prefix_of(b));
                rep.check(left == right, || format!("{tag}: tower inclusion {left} but iterates {right} for {s}, {u}"));
                if left {
                    rep.check(s.is_prefix_of(u), || format!("{tag}: J({s}) ⊆ J({u}) but {s} ⊄ {u}"));
                }
            }
        }
    }
}

/// Nodes of `T_η` with entries below 3 and length at most 2.
pub fn small_paths(eta: &Ordinal) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for a in 0..3 {
        out.push(vec![a]);
        for b in 0..3 {
            out.push(vec![a, b]);
        }
    }
    out.into_iter().filter(|p| in_tree(eta, p)).collect()
}

fn path_laws(rep: &mut Report, name: &str, t: &FunctionalTable, all: &[FinString]) {
    for eta in exponents() {
        let paths = small_paths(&eta);
        let vals: Vec<Vec<FinString>> = paths
            .iter()
            .map(|p| all.iter().map(|s| japprox_path(t, &eta, p, s).expect("path in tree")).collect())
            .collect();
        for (qi, q) in paths.iter().enumerate() {
            let lower: Vec<usize> = (0..paths.len()).filter(|&pi| kb_less(&paths[pi], q)).collect();
            for (si, js) in vals[qi].iter().enumerate() {
                if js.is_empty() {
                    continue;
                }
                for (ui, ju) in vals[qi].iter().enumerate() {
                    if !js.is_prefix_of(ju) {
                        continue;
                    }
                    for &pi in &lower {
                        rep.check(vals[pi][si].is_prefix_of(&vals[pi][ui]), || {
                            format!("{name} η={eta}: {:?} <KB {q:?} fails for {}, {}", paths[pi], all[si], all[ui])
                        });
                    }
                }
            }
        }
    }
}

pub fn run() -> Report {
    let mut rep = Report::new("tower laws");
    let all = strings(3, MAX_LEN);
    for name in TABLE_NAMES {
        let t = table(name).expect("bundled table");
        pow_laws(&mut rep, name, &t, &all);
        path_laws(&mut rep, name, &t, &all);
    }
    rep
}
