//! Error taxonomy shared by every module in the crate.
//!
//! The arithmetic layer is fallible by design: a capped-precision p-adic
//! number can run out of known digits, a matrix handed to a decomposition
//! routine can fail to be symplectic, a residue-specific construction can be
//! requested in the wrong residue case.  All of these surface as variants of
//! [`Error`] rather than panics, so callers (and the verification harness)
//! can distinguish "the identity failed" from "the computation could not be
//! carried out".

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode the toolkit can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// All digits known for a value have cancelled; the requested decision
    /// (zero test, valuation, pivot choice) cannot be made at this precision.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// An operation required a unit (valuation zero) and got something else.
    #[error("not a unit: {0}")]
    NotAUnit(String),

    /// An operation is undefined at zero (inverse, square class, Weil index).
    #[error("zero argument: {0}")]
    ZeroArgument(String),

    /// A canonical square root was requested outside its declared domain.
    #[error("not a square in the requested domain: {0}")]
    NotASquareInDomain(String),

    /// An argument was required to lie in the group of squares of the
    /// residue field but does not.
    #[error("not in the square residue subgroup: {0}")]
    NotInF2(String),

    /// A residue-field operation received an element with zero residue.
    #[error("zero residue: {0}")]
    ZeroResidue(String),

    /// A construction specific to one residue class of p mod 4 was invoked
    /// for a prime in the other class.
    #[error("wrong residue case: {0}")]
    WrongResidueCase(String),

    /// The dimension bookkeeping invariant t(g1,g2) failed to be an integer.
    #[error("non-integer t invariant: {0}")]
    NonIntegerT(String),

    /// An internal identity that must hold by theory failed at runtime; this
    /// always indicates a bug and is never silently ignored.
    #[error("internal identity violation: {0}")]
    InternalIdentityViolation(String),

    /// A quantity proved by theory to lie in {+1, -1} came out elsewhere.
    #[error("value not in {{+1,-1}}: {0}")]
    NotPlusMinusOne(String),

    /// Two independent computation routes for the same quantity disagreed.
    #[error("route mismatch: {0}")]
    RouteMismatch(String),

    /// A generic domain violation (malformed form, empty basis, bad index).
    #[error("domain error: {0}")]
    DomainError(String),

    /// A linear system expected to be infeasible turned out feasible.
    #[error("system unexpectedly feasible: {0}")]
    FeasibleUnexpectedly(String),

    /// An element claimed to lie in a constructed group does not.
    #[error("not in group: {0}")]
    NotInGroup(String),

    /// Mixed residue-case or mixed-prime data was combined.
    #[error("tag mismatch: {0}")]
    TagMismatch(String),

    /// The harness was asked for a cocycle name it does not know.
    #[error("unknown cocycle: {0}")]
    UnknownCocycle(String),

    /// The harness was asked for a lemma id it does not know.
    #[error("unknown lemma: {0}")]
    UnknownLemma(String),

    /// The harness was asked for a table name it does not know.
    #[error("unknown table: {0}")]
    UnknownTable(String),

    /// A matrix expected to be symplectic (or a similitude) is not.
    #[error("not symplectic: {0}")]
    NotSymplectic(String),

    /// Malformed textual input (CLI matrix entries, numbers).
    #[error("parse error: {0}")]
    ParseError(String),
}

impl Error {
    /// Exit code the command-line tool maps this error to: configuration and
    /// usage problems exit 2, everything that represents a mathematical
    /// counterexample is handled separately by the harness (exit 1).
    pub fn exit_code(&self) -> i32 {
        2
    }
}
