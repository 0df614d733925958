//! Coined quantum walks on integer lattices, their recurrence and meeting
//! statistics, and integer factorization with truncated exponential sums.

pub mod error;
pub mod expsum;
pub mod lattice;
pub mod numeric;
pub mod recurrence;
pub mod spectral;
pub mod two_particle;
pub mod walk;

pub use error::{Error, Result};
pub use num_complex::Complex64;
