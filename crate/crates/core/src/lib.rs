//! Exact invariants of families of cyclic covers of the projective line.

pub mod arith;
pub mod classify;
pub mod cover;
pub mod cy;
pub mod error;
pub mod monodromy;
pub mod tables;

pub use error::{Error, Result};
