//! Classification toolkit for perfect binary one-error-correcting codes.
//!
//! The library covers the whole chain from combinatorial raw material to
//! audited classification results:
//!
//! - [`word`], [`perm`], [`equiv`], [`code`] — bit-exact algebra of binary
//!   codewords and codes under the wreath-product action (coordinate
//!   permutation plus translation).
//! - [`steiner`] — Steiner systems viewed as constant-weight codes, the
//!   neighborhood triple/quadruple systems of perfect codes, and catalog I/O.
//! - [`cover`] — an exact-cover enumeration engine and the reduction from
//!   "complete a partial 1-perfect code" to exact cover.
//! - [`canon`] — canonical forms, symmetry and automorphism groups, orbit
//!   computations.
//! - [`pipeline`] — the classification driver: augment quadruple systems to
//!   extended 1-perfect codes, reject equivalent copies, derive the perfect,
//!   shortened and half-size classifications.
//! - [`audit`] — orbit-stabilizer double counting that cross-checks the
//!   classification totals.

pub mod audit;
pub mod canon;
pub mod code;
pub mod cover;
pub mod equiv;
pub mod group;
pub mod hamming;
pub mod perm;
pub mod pipeline;
pub mod steiner;
pub mod word;

pub use code::{Code, Parity};
pub use equiv::Equivalence;
pub use perm::Perm;
pub use word::Codeword;
