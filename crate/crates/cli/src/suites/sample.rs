//! Seeded spot checks of the jump laws on strings longer and wider than
//! the exhaustive suites reach.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use truestage::fixtures::{table, TABLE_NAMES};
use truestage::jump::{japprox, japprox_inv, japprox_n};
use truestage::transfinite::{japprox_pow, japprox_pow_inv};
use truestage::{FinString, Ordinal};

use super::Report;

pub const DEFAULT_SEED: u64 = 0x7472_7565;
pub const DEFAULT_SAMPLES: usize = 300;

const MIN_LEN: usize = 7;
const MAX_LEN: usize = 11;
const ALPHABET: u64 = 5;

fn random_string(rng: &mut ChaCha8Rng) -> FinString {
    let len = rng.gen_range(MIN_LEN..=MAX_LEN);
    let entries: Vec<u64> = (0..len).map(|_| rng.gen_range(0..ALPHABET)).collect();
    FinString::nats(&entries)
}

/// `samples` random triples `σ ⊆ τ ⊆ π` and unrelated pairs per table.
pub fn run(seed: u64, samples: usize) -> Report {
    let mut rep = Report::new("seeded samples");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphas = [Ordinal::one(), Ordinal::nat(2)];
    for name in TABLE_NAMES {
        let t = table(name).expect("bundled table");
        for _ in 0..samples {
            let pi = random_string(&mut rng);
            let j = rng.gen_range(0..=pi.len());
            let i = rng.gen_range(0..=j);
            let (sigma, tau) = (pi.restrict(i), pi.restrict(j));
            let (js, jt, jp) = (japprox(&t, &sigma), japprox(&t, &tau), japprox(&t, &pi));
            if js.is_prefix_of(&jp) {
                rep.check(js.is_prefix_of(&jt), || format!("{name}: inclusion between fails for {sigma} ⊆ {tau} ⊆ {pi}"));
            }

            let other = random_string(&mut rng);
            let jo = japprox(&t, &other);
            for (a, ja, b, jb) in [(&pi, &jp, &other, &jo), (&sigma, &js, &pi, &jp)] {
                if !ja.is_empty() && ja.is_prefix_of(jb) {
                    rep.check(a.is_prefix_of(b), || format!("{name}: J({a}) ⊆ J({b}) but {a} ⊄ {b}"));
                }
            }

            rep.check(japprox_inv(&jp).as_ref() == Ok(&pi), || format!("{name}: inverse fails on {pi}"));
            let n = rng.gen_range(0..=MAX_LEN + 1);
            let len = japprox_n(&t, &pi, n).len();
            rep.check(len <= pi.len().saturating_sub(n), || format!("{name}: |J^{n}({pi})| = {len}"));

            for alpha in &alphas {
                let up = japprox_pow(&t, alpha, &pi);
                if !up.is_empty() {
                    let back = japprox_pow_inv(alpha, &up);
                    rep.check(back.as_ref() == Ok(&pi), || format!("{name}: J^(w^{alpha}) inverse fails on {pi}"));
                }
            }
        }
    }
    rep
}
