//! Numerical and exact tools for mean Euler characteristics of contact
//! manifolds and their use in telling twisted contact structures apart.
//!
//! - [`rs_index`]: Robbin–Salamon index of symplectic paths and models of
//!   Boothby–Wang Reeb flows.
//! - [`mec`]: mean Euler characteristic formulas and the `E¹` page of the
//!   Morse–Bott spectral sequence.
//! - [`twist`]: necessary conditions for a power of a fibered Dehn twist
//!   to be isotopic to the identity.
//! - [`profile`]: the profile function behind the twisted contact form and
//!   its numerical checks.
//! - [`catalog`]: Euler characteristics of hypersurface families.

// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod exact;
pub mod mec;
pub mod profile;
pub mod rs_index;
pub mod twist;

pub use exact::{HalfInteger, Rational};
