use alloc::string::String;
use core::fmt;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A `Nat` entry was found where a code was expected.
    NotACode,
    /// An inverse jump was applied to the empty string.
    EmptyInput,
    /// True halting was requested from a table whose halting is undecidable.
    UndecidableMode,
    /// `α[n]` was requested for `α = 0`.
    ZeroHasNoSequence,
    /// The tuple is not a node of `T_η`.
    NotInTree,
    /// The ordinal is outside the range of the normal-form map.
    OutOfRange,
    /// Malformed textual input at a character position.
    Parse { pos: usize, msg: String },
    /// A belief search hit a limit that is not attained (continuity gap).
    ContinuityGap { t: usize, s: usize },
    /// The extension callback returned a state that breaks a restraint.
    ExtendibilityViolated { stage: usize, clause: String },
    /// The action tree refused the extension.
    TreeRejected { stage: usize },
    /// A chain built by the engine failed one of its structural assertions.
    ChainBroken { stage: usize, clause: String },
    /// No back-and-forth witness exists.
    NoWitness,
    /// Relation arity does not match the signature.
    ArityMismatch,
    /// A brute-force back-and-forth query at an infinite level.
    InfiniteLevel,
    /// A diagram does not decide every literal over the constants it mentions.
    IncompleteDiagram,
    /// A request outside what the object supports.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotACode => f.write_str("entry is a natural number, not a code"),
            Error::EmptyInput => f.write_str("inverse applied to the empty string"),
            Error::UndecidableMode => f.write_str("true halting is undecidable for a universal table"),
            Error::ZeroHasNoSequence => f.write_str("0 has no fundamental sequence"),
            Error::NotInTree => f.write_str("tuple is not in the tree T_eta"),
            Error::OutOfRange => f.write_str("ordinal outside (0, w^eta]"),
            Error::Parse { pos, msg } => write!(f, "parse error at position {pos}: {msg}"),
            Error::ContinuityGap { t, s } => {
                write!(f, "belief levels of {t} at {s} have a non-attained supremum")
            }
            Error::ExtendibilityViolated { stage, clause } => {
                write!(f, "extendibility violated at stage {stage}: {clause}")
            }
            Error::TreeRejected { stage } => write!(f, "action tree rejected the state at stage {stage}"),
            Error::ChainBroken { stage, clause } => write!(f, "chain assertion failed at stage {stage}: {clause}"),
            Error::NoWitness => f.write_str("no back-and-forth witness"),
            Error::ArityMismatch => f.write_str("relation arity mismatch"),
            Error::InfiniteLevel => f.write_str("brute-force back-and-forth needs a finite level"),
            Error::IncompleteDiagram => f.write_str("diagram is not total on its constants"),
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
        }
    }
}

impl core::error::Error for Error {}
