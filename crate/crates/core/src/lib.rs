//! Exact combinatorics of Bruhat intervals in crystallographic Coxeter
//! groups: f-vectors of lower and relative intervals, Kazhdan-Lusztig
//! polynomials, vertex-disjoint chain certificates, Macaulay M-sequence
//! tests, and the bound functions used by the tail checks.

pub(crate) mod bits;
pub mod bounds;
pub mod bruhat;
pub mod chains;
pub mod coxeter;
pub mod error;
pub mod kl;
pub mod matrix;
pub mod msequence;

#[cfg(feature = "testing")]
pub mod testing;

pub use error::{Error, Result};
