use std::rc::Rc;

use truestage::fixtures::{table, TABLE_NAMES};
use truestage::transfinite::{japprox_path, japprox_pow, Tower};
use truestage::truth::{agrees, TrueJump};
use truestage::{FinString, Ordinal};

/// The approximations taken on prefixes of `0^ω` that agree with the
/// recursively defined jump keep growing, and some agree in every window of
/// five consecutive lengths.
#[test]
fn iteration_form_approximates_recursion_form() {
    for name in TABLE_NAMES {
        let t = table(name).unwrap();
        for alpha in [Ordinal::zero(), Ordinal::one(), Ordinal::nat(2), Ordinal::omega()] {
            let truth = TrueJump::pow(&t, alpha.clone(), TrueJump::zero(&t));
            let hits: Vec<(usize, FinString)> = (0..13)
                .map(|n| (n, japprox_pow(&t, &alpha, &FinString::zeros(n))))
                .filter(|(_, a)| agrees(a, &truth))
                .collect();
            for w in hits.windows(2) {
                assert!(w[0].1.is_prefix_of(&w[1].1), "{name} α={alpha} n={}", w[1].0);
                assert!(w[1].0 - w[0].0 <= 5, "{name} α={alpha} gap after {}", w[0].0);
            }
            assert!(hits.last().unwrap().1.len() >= 2, "{name} α={alpha}");
        }
    }
}

#[test]
fn tree_nodes_approximate_their_true_levels() {
    for name in TABLE_NAMES {
        let t = table(name).unwrap();
        for eta in [Ordinal::one(), Ordinal::nat(2), Ordinal::omega()] {
            let tower = Tower::new(&t, eta.clone());
            for level in tower.candidate_levels(6) {
                for s in 0..7 {
                    assert_eq!(tower.nabla(&level, s), tower.nabla_direct(&level, s), "{name} η={eta} s={s}");
                }
            }
            for path in [vec![], vec![0], vec![1], vec![1, 0], vec![2, 1]] {
                if let Ok(v) = japprox_path(&t, &eta, &path, &FinString::zeros(1)) {
                    assert!(v.is_empty(), "{name} η={eta} {path:?}");
                }
            }
        }
    }
}

#[test]
fn lazy_truth_is_shared() {
    let t = table("late").unwrap();
    let j = TrueJump::pow(&t, Ordinal::one(), TrueJump::zero(&t));
    let p = truestage::Oracle::prefix(&*j, 3);
    assert!(agrees(&p, &j));
    assert_eq!(Rc::strong_count(&j), 1);
}
