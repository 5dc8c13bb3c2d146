//! Invariants of the two-parameter-triple family of 2-connected 7-manifolds:
//! cohomology order, linking-form residues, and the standardness decision
//! that settles whether a member is homotopy equivalent to an S3-bundle
//! over S4.
//!
//! A family member is described by two integer triples `a = (a1, a2, a3)`
//! and `b = (b1, b2, b3)` with every entry congruent to 1 mod 4 and
//! `gcd(a1, a2 ± a3) = 1 = gcd(b1, b2 ± b3)`.  From these the crate
//! computes
//!
//! * `a0 = (a2² − a3²)/8`, `b0 = (b2² − b3²)/8` and the fourth-cohomology
//!   order `n = a1²·b0 − a0·b1²` ([`family`]),
//! * an independent Smith-normal-form cross-check that H⁴ is cyclic of
//!   order `|n|` ([`cohomology`]),
//! * the linking-form residues `rho` and `kappa` with their Bézout
//!   certificates ([`linking`]),
//! * the standardness verdict via quadratic-residue arithmetic mod `|n|`,
//!   with a machine-checkable witness either way ([`classify`]),
//! * explicit non-standard examples and parameter-space censuses
//!   ([`search`]).
//!
//! Brute-force reference implementations live in [`oracle`]; they back the
//! test suite and the [`verify`] runner but are not features of their own.

pub mod arith;
pub mod classify;
pub mod cohomology;
pub mod family;
pub mod linking;
pub mod oracle;
pub mod search;
pub mod verify;

pub use classify::{classify, Classification, Verdict};
pub use family::{FamilyParams, ManifoldInvariants, ParamTriple};
pub use linking::{linking_form, LinkingForm};
