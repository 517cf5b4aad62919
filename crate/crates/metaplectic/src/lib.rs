//! Metaplectic two-cocycles and extended covering groups over Q_p (p odd).
//!
//! The crate implements, as executable and testable mathematics:
//!
//! * capped-precision and exact arithmetic over F = Q_p ([`padic`]);
//! * quadratic forms over F, their invariants, and Weil indices ([`quadform`]);
//! * the symplectic similitude group GSp(W), Bruhat-style decompositions
//!   relative to the Siegel parabolic, and Leray-type invariants ([`symplectic`]);
//! * the normalized metaplectic two-cocycles on Sp(W) ([`rao`]);
//! * the compatibility factors for outer automorphisms coming from the
//!   similitude action ([`barthel`]);
//! * extended groups obtained by adjoining canonical section matrices for
//!   the similitude classes, in both residue cases ([`extended`], [`cover`]);
//! * twisted actions on the Heisenberg group ([`heisenberg`]);
//! * a verification harness that replays every identity on seeded random
//!   samples ([`harness`]).
//!
//! All cocycle values are exact eighth roots of unity ([`padic::Mu8`]);
//! floating point appears only inside the numeric character-sum oracle that
//! calibrates Weil indices.

pub mod error;
pub mod harness;
pub mod extended;
pub mod heisenberg;
pub mod padic;
pub mod barthel;
pub mod cover;
pub mod matrix;
pub mod quadform;
pub mod rao;
pub mod symplectic;

pub use error::{Error, Result};
