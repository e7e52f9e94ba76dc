//! Exact arithmetic in `Q(xi_m) = Q[x] / Phi_m(x)`.
//!
//! Elements are stored in the power basis `1, x, ..., x^{phi(m)-1}` and kept
//! reduced modulo the cyclotomic polynomial, so coefficient equality is field
//! equality.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use super::poly::{self, RatPoly};
use super::rational::{self, Rational};
use crate::error::{bail, Error, Result};

/// The field `Q(xi_m)` together with its defining polynomial.
#[derive(Debug)]
pub struct CyclotomicField {
    order: u64,
    /// `Phi_m` as a monic rational polynomial of degree `phi(m)`.
    modulus: RatPoly,
}

impl CyclotomicField {
    /// Shared handle to `Q(xi_m)`. Fields are built once per order.
    pub fn get(order: u64) -> Arc<CyclotomicField> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicField>>>> = OnceLock::new();
        assert!(order >= 1, "cyclotomic field order must be at least 1");
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry(order)
            .or_insert_with(|| {
                let modulus = poly::cyclotomic_polynomial(order)
                    .into_iter()
                    .map(Rational::from_integer)
                    .collect();
                Arc::new(CyclotomicField { order, modulus })
            })
            .clone()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut p: RatPoly) -> Vec<Rational> {
        let deg = self.degree();
        for i in (deg..p.len()).rev() {
            let c = std::mem::take(&mut p[i]);
            if c.is_zero() {
                continue;
            }
            for (k, mk) in self.modulus.iter().enumerate().take(deg) {
                p[i - deg + k] -= &c * mk;
            }
        }
        p.resize(deg, Rational::zero());
        p
    }
}

/// An element of `Q(xi_m)`.
#[derive(Clone)]
pub struct CyclotomicNumber {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn zero(order: u64) -> Self {
        let field = CyclotomicField::get(order);
        let coeffs = vec![Rational::zero(); field.degree()];
        Self { field, coeffs }
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u64, q: Rational) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = q;
        z
    }

    /// `xi_m^e` for any integer exponent.
    pub fn root(order: u64, exponent: i64) -> Self {
        let field = CyclotomicField::get(order);
        let e = exponent.rem_euclid(order as i64) as usize;
        let mut p = vec![Rational::zero(); e + 1];
        p[e] = Rational::one();
        let coeffs = field.reduce(p);
        Self { field, coeffs }
    }

    /// Builds an element from power-basis coordinates. Longer inputs are
    /// reduced modulo `Phi_m`.
    pub fn from_coeffs(order: u64, coeffs: Vec<Rational>) -> Self {
        let field = CyclotomicField::get(order);
        let coeffs = field.reduce(coeffs);
        Self { field, coeffs }
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(
            self.order(),
            other.order(),
            "mixing elements of different cyclotomic fields"
        );
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            bail!(DivisionByZero, "inverse of zero in Q(xi_{})", self.order());
        }
        let inv = poly::rat_inverse_mod(&self.coeffs, &self.field.modulus)
            .ok_or_else(|| Error::Internal(format!("nonzero element not invertible in Q(xi_{})", self.order())))?;
        Ok(Self {
            field: self.field.clone(),
            coeffs: self.field.reduce(inv),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Image under the Galois automorphism `xi -> xi^v`; `v` must be a unit mod `m`.
    pub fn galois(&self, v: u64) -> Result<Self> {
        let m = self.order();
        if poly::gcd_u64(v % m, m) != 1 && m > 1 {
            bail!(InvalidArgument, "{v} is not a unit modulo {m}");
        }
        let mut p = vec![Rational::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                p[(i as u64 * v % m) as usize] += c;
            }
        }
        Ok(Self {
            field: self.field.clone(),
            coeffs: self.field.reduce(p),
        })
    }

    /// Least `k >= 1` with `self^k = 1`, searching up to `bound`.
    pub fn multiplicative_order(&self, bound: u64) -> Option<u64> {
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_one() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.coeffs == other.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicNumber(m={}, {})", self.order(), self)
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            first = false;
            let coeff = if abs.is_integer() {
                abs.numer().to_string()
            } else {
                abs.to_string()
            };
            match i {
                0 => f.write_str(&coeff)?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{coeff}*")?;
                    }
                    if i == 1 {
                        f.write_str("z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.same_field(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicNumber {
            field: self.field.clone(),
            coeffs,
        }
    }
}

impl<'a> Sub<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.same_field(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        CyclotomicNumber {
            field: self.field.clone(),
            coeffs,
        }
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        let coeffs = self.coeffs.iter().map(|a| -a).collect();
        CyclotomicNumber {
            field: self.field.clone(),
            coeffs,
        }
    }
}

impl<'a> Mul<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.same_field(rhs);
        let prod = poly::rat_mul(&self.coeffs, &rhs.coeffs);
        CyclotomicNumber {
            field: self.field.clone(),
            coeffs: self.field.reduce(prod),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $f(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$f(&rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

/// `xi_m^e` reduced modulo `Phi_m`.
pub fn cyc_root(m: u64, e: i64) -> CyclotomicNumber {
    CyclotomicNumber::root(m, e)
}

/// Renders the coordinates as `p/q` strings.
pub fn render_coeffs(z: &CyclotomicNumber) -> Vec<String> {
    z.coeffs().iter().map(rational::render).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use proptest::prelude::*;

    /// Float embedding `x -> exp(2 pi i / m)`, used only as a test oracle.
    fn embed(z: &CyclotomicNumber) -> (f64, f64) {
        let m = z.order() as f64;
        z.coeffs().iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let c = c.numer().to_string().parse::<f64>().unwrap() / c.denom().to_string().parse::<f64>().unwrap();
            let t = std::f64::consts::TAU * k as f64 / m;
            (re + c * t.cos(), im + c * t.sin())
        })
    }

    fn close(a: (f64, f64), b: (f64, f64)) -> bool {
        (a.0 - b.0).abs() < 1e-8 && (a.1 - b.1).abs() < 1e-8
    }

    fn small(m: u64, seed: &[i64]) -> CyclotomicNumber {
        let coeffs = seed.iter().map(|&c| rat(c, 1 + c.rem_euclid(3))).collect();
        CyclotomicNumber::from_coeffs(m, coeffs)
    }

    #[test]
    fn roots() {
        assert!(cyc_root(4, 0).is_one());
        assert_eq!(cyc_root(4, 2), CyclotomicNumber::from_rational(4, int(-1)));
        // x^2 = x - 1 modulo x^2 - x + 1
        assert_eq!(cyc_root(6, 2).coeffs(), &[int(-1), int(1)]);
        assert!((&cyc_root(4, 1) * &cyc_root(4, 3)).is_one());
        assert_eq!(cyc_root(12, -1), cyc_root(12, 11));
    }

    #[test]
    fn root_orders() {
        for m in 1..=30u64 {
            for e in 0..m {
                let z = cyc_root(m, e as i64);
                assert!(z.pow(m).is_one());
                let expected = m / poly::gcd_u64(m, e % m);
                assert_eq!(z.multiplicative_order(m), Some(expected), "m={m} e={e}");
            }
        }
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert!(matches!(
            CyclotomicNumber::zero(5).inverse(),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn inverse_of_one_minus_root() {
        let z = &CyclotomicNumber::one(12) - &cyc_root(12, 5);
        let inv = z.inverse().unwrap();
        assert!((&z * &inv).is_one());
    }

    #[test]
    fn display() {
        assert_eq!(cyc_root(6, 2).to_string(), "-1 + z");
        assert_eq!(CyclotomicNumber::zero(7).to_string(), "0");
        let z = CyclotomicNumber::from_coeffs(5, vec![rat(1, 2), int(0), int(-3)]);
        assert_eq!(z.to_string(), "1/2 - 3*z^2");
    }

    #[test]
    fn galois_action() {
        let z = cyc_root(12, 1);
        assert_eq!(z.galois(5).unwrap(), cyc_root(12, 5));
        assert_eq!(z.galois(1).unwrap(), z);
        assert!(z.galois(4).is_err());
        let w = &z + &cyc_root(12, 7);
        assert_eq!(w.galois(7).unwrap().galois(7).unwrap(), w);
    }

    proptest! {
        #[test]
        fn reciprocal_roots(m in 1u64..60, e in -200i64..200) {
            let prod = &cyc_root(m, e) * &cyc_root(m, m as i64 - e);
            prop_assert!(prod.is_one());
        }

        #[test]
        fn ring_ops_match_float_embedding(
            m in 2u64..40,
            a in proptest::collection::vec(-5i64..5, 1..8),
            b in proptest::collection::vec(-5i64..5, 1..8),
        ) {
            let (x, y) = (small(m, &a), small(m, &b));
            let (ex, ey) = (embed(&x), embed(&y));
            prop_assert!(close(embed(&(&x + &y)), (ex.0 + ey.0, ex.1 + ey.1)));
            prop_assert!(close(embed(&(&x * &y)), (ex.0 * ey.0 - ex.1 * ey.1, ex.0 * ey.1 + ex.1 * ey.0)));
            if !x.is_zero() {
                prop_assert!((&x * &x.inverse().unwrap()).is_one());
            }
        }

        #[test]
        fn galois_is_a_ring_homomorphism(
            m in 2u64..30,
            a in proptest::collection::vec(-5i64..5, 1..8),
            b in proptest::collection::vec(-5i64..5, 1..8),
            v in 1u64..30,
        ) {
            prop_assume!(poly::gcd_u64(v % m, m) == 1);
            let (x, y) = (small(m, &a), small(m, &b));
            let g = |z: &CyclotomicNumber| z.galois(v).unwrap();
            prop_assert_eq!(g(&(&x * &y)), &g(&x) * &g(&y));
            prop_assert_eq!(g(&(&x + &y)), &g(&x) + &g(&y));
        }
    }
}
