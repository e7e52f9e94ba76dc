//! Dense univariate polynomials, coefficients stored lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::Rational;

pub type IntPoly = Vec<BigInt>;
pub(crate) type RatPoly = Vec<Rational>;

pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut phi = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

fn mobius(n: u64) -> i8 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// `x^d - 1`.
fn x_pow_minus_one(d: u64) -> IntPoly {
    let mut p = vec![BigInt::zero(); d as usize + 1];
    p[0] = BigInt::from(-1);
    p[d as usize] = BigInt::one();
    p
}

pub(crate) fn int_mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact quotient of `a` by a monic `b`; panics if the division leaves a remainder.
pub(crate) fn int_div_exact_monic(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    let mut rem = a.to_vec();
    if rem.len() <= db {
        assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (k, bk) in b.iter().enumerate() {
            rem[i + k] -= &c * bk;
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    quot
}

/// The `m`-th cyclotomic polynomial, via the Möbius product
/// `prod_{d | m} (x^d - 1)^{mu(m/d)}`.
pub fn cyclotomic_polynomial(m: u64) -> IntPoly {
    assert!(m >= 1, "cyclotomic polynomial needs m >= 1");
    let mut numer: IntPoly = vec![BigInt::one()];
    let mut denom: IntPoly = vec![BigInt::one()];
    for d in divisors(m) {
        match mobius(m / d) {
            1 => numer = int_mul(&numer, &x_pow_minus_one(d)),
            -1 => denom = int_mul(&denom, &x_pow_minus_one(d)),
            _ => {}
        }
    }
    // denominators are products of monic polynomials up to sign
    let sign = denom.last().unwrap().clone();
    if sign != BigInt::one() {
        numer.iter_mut().for_each(|c| *c = -&*c);
        denom.iter_mut().for_each(|c| *c = -&*c);
    }
    int_div_exact_monic(&numer, &denom)
}

pub(crate) fn trim(p: &mut RatPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub(crate) fn rat_sub(a: &[Rational], b: &[Rational]) -> RatPoly {
    let n = a.len().max(b.len());
    let mut out: RatPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn rat_mul(a: &[Rational], b: &[Rational]) -> RatPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Division with remainder in `Q[x]`; `b` must be nonzero and trimmed.
pub(crate) fn rat_divmod(a: &[Rational], b: &[Rational]) -> (RatPoly, RatPoly) {
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (k, bk) in b.iter().enumerate() {
            rem[i + k] -= &c * bk;
        }
        quot[i] = c;
    }
    trim(&mut quot);
    trim(&mut rem);
    (quot, rem)
}

/// Returns `s` with `s * a = 1 (mod modulus)`, or `None` when `a` and
/// `modulus` are not coprime.
pub(crate) fn rat_inverse_mod(a: &[Rational], modulus: &[Rational]) -> Option<RatPoly> {
    // invariant: s_i * a = r_i (mod modulus)
    let (mut r0, mut r1) = (modulus.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut s0, mut s1): (RatPoly, RatPoly) = (Vec::new(), vec![Rational::one()]);
    while !r1.is_empty() {
        let (q, r) = rat_divmod(&r0, &r1);
        let s = rat_sub(&s0, &rat_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].clone();
    Some(s0.into_iter().map(|x| x / &c).collect())
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
