//! Laws of the jump approximation over every bundled toy table.

use truestage::fixtures::{table, TABLE_NAMES};
use truestage::jump::{japprox, japprox_inv, japprox_n};
use truestage::FinString;

use super::{strings, Report};

/// Strings with entries below 3 and length at most 6.
pub const MAX_LEN: usize = 6;

pub fn run() -> Report {
    let mut rep = Report::new("jump laws");
    let all = strings(3, MAX_LEN);
    for name in TABLE_NAMES {
        let t = table(name).expect("bundled table");
        let js: Vec<FinString> = all.iter().map(|s| japprox(&t, s)).collect();

        for (k, pi) in all.iter().enumerate() {
            for i in 0..=pi.len() {
                for j in i..=pi.len() {
                    let (sigma, tau) = (pi.restrict(i), pi.restrict(j));
                    let (js_, jt) = (japprox(&t, &sigma), japprox(&t, &tau));
                    if js_.is_prefix_of(&js[k]) {
                        rep.check(js_.is_prefix_of(&jt), || format!("{name}: inclusion between fails for {sigma} ⊆ {tau} ⊆ {pi}"));
                    }
                }
            }
        }

        for (a, ja) in all.iter().zip(&js) {
            if ja.is_empty() {
                continue;
            }
            for (b, jb) in all.iter().zip(&js) {
                if ja.is_prefix_of(jb) {
                    rep.check(a.is_prefix_of(b), || format!("{name}: J({a}) ⊆ J({b}) but {a} ⊄ {b}"));
                }
            }
        }

        for (s, j) in all.iter().zip(&js) {
            if s.len() >= 2 {
                rep.check(japprox_inv(j).as_ref() == Ok(s), || format!("{name}: inverse fails on {s}"));
            }
            for n in 0..=MAX_LEN + 1 {
                let len = japprox_n(&t, s, n).len();
                rep.check(len <= s.len().saturating_sub(n), || format!("{name}: |J^{n}({s})| = {len}"));
            }
        }
    }
    rep
}
