#![no_std]

extern crate alloc;

pub mod belief;
pub mod error;
pub mod fixtures;
pub mod functional;
pub mod jump;
pub mod ordinal;
pub mod structures;
pub mod system;
pub mod transfinite;
pub mod truth;
pub mod value;

pub use belief::{Belief, BeliefContext, WitnessTriple};
pub use error::Error;
pub use functional::{ConstOracle, EvalResult, FunctionalTable, Oracle, ToyBehavior, TrueResult};
pub use ordinal::{Ordinal, TuplePath};
pub use system::{ChainLink, Composite, EtaSystem, Run, StageRecord, State, Violation};
pub use value::{FinString, PrefixMemo, Value};
