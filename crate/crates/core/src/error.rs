//! Error type shared by every engine layer.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the engine. Arithmetic that would have to fabricate a
/// coefficient it cannot determine is refused up front, so a passing
/// verification never rests on a silently invented value.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot invert under truncation: series is zero on its known window")]
    NonInvertible,
    #[error("non-nilpotent exponent under truncation: valuation {valuation} < 1")]
    NonNilpotentExp { valuation: i32 },
    #[error("h^{exponent} falls below the Laurent floor -{floor}")]
    FloorExceeded { exponent: i32, floor: i32 },
    #[error("coefficient of h^{exponent} is unknown at truncation order {order}")]
    CoefficientUnknown { exponent: i32, order: i32 },
    #[error("rewriting budget exhausted while reducing {monomial}")]
    BudgetExceeded { monomial: String },
    #[error("no image assigned to generator {letter}")]
    MissingImage { letter: String },
    #[error("tensor slot mismatch: {left} vs {right}")]
    SlotMismatch { left: usize, right: usize },
    #[error("membership undecided within degree bound {bound}; raise the bound")]
    DegreeBound { bound: usize },
    #[error("verdict needs coefficients through h^{needed} but only h^{have} is tracked")]
    InsufficientTruncation { needed: i32, have: i32 },
    #[error("no commutative limit: {witness} has an h-free commutator")]
    NotCommutativeLimit { witness: String },
    #[error("not primitive modulo h: {witness}")]
    NonPrimitiveLimit { witness: String },
    #[error("completion did not close: {pending} unresolved critical pairs")]
    Completion { pending: usize },
    #[error("cannot orient derived relation {rule}")]
    Orientation { rule: String },
    #[error("invalid presentation: {message}")]
    BadPresentation { message: String },
    #[error("parse error at {at:?}")]
    Parse { at: String },
    #[error("unknown suite {name:?}")]
    UnknownSuite { name: String },
    #[error("invalid configuration: {message}")]
    InvalidConfig { message: String },
}
