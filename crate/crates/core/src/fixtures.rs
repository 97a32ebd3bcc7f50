//! Toy tables bundled with the library.

use crate::functional::{FunctionalTable, ToyBehavior};
use crate::value::Value;

/// Names accepted by [`table`], in a fixed order.
pub const TABLE_NAMES: [&str; 5] = ["divergent", "halting", "late", "break", "guarded"];

/// A bundled toy table by name.
///
/// * `divergent`: every functional diverges.
/// * `halting`: `φ₀` halts at step 3 with output `1`.
/// * `late`: `φ₁` halts at step 5.
/// * `break`: `φ₂` halts at step 5, which produces witness triples at
///   limit levels once `η ≥ 2`.
/// * `guarded`: `φ₁` halts at step 4 when the oracle reads `0` at position 1,
///   so it converges on `0^s` but not on strings of codes.
pub fn table(name: &str) -> Option<FunctionalTable> {
    let t = match name {
        "divergent" => FunctionalTable::all_divergent(),
        "halting" => FunctionalTable::toy([(0, ToyBehavior::halting(3, Value::Nat(1)))]),
        "late" => FunctionalTable::toy([(1, ToyBehavior::halting(5, Value::Nat(0)))]),
        "break" => FunctionalTable::toy([(2, ToyBehavior::halting(5, Value::Nat(0)))]),
        "guarded" => FunctionalTable::toy([(1, ToyBehavior::halting(4, Value::Nat(0)).with_guard(1, Value::Nat(0)))]),
        _ => return None,
    };
    Some(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for name in TABLE_NAMES {
            assert!(table(name).is_some_and(|t| t.is_toy()), "{name}");
        }
        assert!(table("universal").is_none());
    }
}
