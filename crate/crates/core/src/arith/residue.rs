use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

use crate::error::{bail, Result};

/// An element `[value]_modulus` of `Z/(modulus)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueClass {
    value: u64,
    modulus: u64,
}

impl ResidueClass {
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            bail!(InvalidArgument, "modulus must be at least 2, got {modulus}");
        }
        Ok(Self::reduce(value, modulus))
    }

    pub(crate) fn reduce(value: i64, modulus: u64) -> Self {
        let m = modulus as i64;
        Self {
            value: value.rem_euclid(m) as u64,
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_unit(self) -> bool {
        self.value.gcd(&self.modulus) == 1
    }

    pub fn inverse(self) -> Option<Self> {
        let ext = (self.value as i64).extended_gcd(&(self.modulus as i64));
        (ext.gcd == 1).then(|| Self::reduce(ext.x, self.modulus))
    }

    fn check(self, other: Self) {
        assert_eq!(self.modulus, other.modulus, "residue classes with different moduli");
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self.value, self.modulus)
    }
}

impl Add for ResidueClass {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        Self {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Sub for ResidueClass {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ResidueClass {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for ResidueClass {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        let v = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        Self {
            value: v as u64,
            modulus: self.modulus,
        }
    }
}

/// Units of `Z/(m)` in increasing order.
pub fn units(m: u64) -> impl Iterator<Item = u64> {
    (1..m.max(2)).filter(move |v| v.gcd(&m) == 1)
}

/// Elements `v` with `v^2 = 1` in `Z/(m)` other than `1` and `m - 1`.
pub fn nontrivial_involutions(m: u64) -> impl Iterator<Item = u64> {
    (2..m.saturating_sub(1)).filter(move |&v| (v * v) % m == 1)
}
