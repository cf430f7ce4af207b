//! Orthogonal bases of p-adic extension fields built from roots of unity and
//! Eisenstein roots, closest vectors against them, and the lattice signature
//! scheme that uses them as a trapdoor.
//!
//! All arithmetic is exact over Q. Absolute values are carried as rational
//! valuation exponents and never evaluated to reals.

pub mod builder;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod fp_poly;
pub mod hash;
pub mod lattice;
pub mod linalg;
pub mod modular;
pub mod ortho;
pub mod padic;
pub mod poly;
pub mod serial;
pub mod signature;
pub mod tower;

pub use error::{Error, Result};
