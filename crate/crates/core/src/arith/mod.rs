//! Exact rational, residue-class, cyclotomic and matrix arithmetic.

pub mod cyclotomic;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod residue;

pub use cyclotomic::{cyc_root, CyclotomicField, CyclotomicNumber};
pub use matrix::{CycMatrix, MatrixOrder};
pub use poly::{cyclotomic_polynomial, euler_phi};
pub use rational::{frac_part, Rational};
pub use residue::ResidueClass;
