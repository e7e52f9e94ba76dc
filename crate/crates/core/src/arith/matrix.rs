use std::fmt;

use num_integer::Integer;

use super::cyclotomic::CyclotomicNumber;
use super::rational::int;
use crate::error::{bail, Result};

/// Square matrix over `Q(xi_m)`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct CycMatrix {
    order: u64,
    dim: usize,
    entries: Vec<CyclotomicNumber>,
}

/// Outcome of [`CycMatrix::finite_order`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixOrder {
    Finite(u64),
    /// `M != I` and `M - I` is nilpotent, so no power of `M` is the identity.
    InfiniteUnipotent,
    ExceedsBound(u64),
}

impl CycMatrix {
    pub fn from_rows(order: u64, rows: Vec<Vec<CyclotomicNumber>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            bail!(InvalidArgument, "matrix must have positive dimension");
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                bail!(InvalidArgument, "matrix is not square");
            }
            for z in row {
                if z.order() != order {
                    bail!(InvalidArgument, "entry lives in Q(xi_{}) not Q(xi_{order})", z.order());
                }
                entries.push(z);
            }
        }
        Ok(Self { order, dim, entries })
    }

    pub fn identity(order: u64, dim: usize) -> Self {
        let mut entries = vec![CyclotomicNumber::zero(order); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = CyclotomicNumber::one(order);
        }
        Self { order, dim, entries }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &CyclotomicNumber {
        &self.entries[row * self.dim + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, z: CyclotomicNumber) {
        self.entries[row * self.dim + col] = z;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[CyclotomicNumber]> {
        self.entries.chunks(self.dim)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.order, self.dim)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!((self.order, self.dim), (rhs.order, rhs.dim), "incompatible matrices");
        let n = self.dim;
        let mut out = Self {
            order: self.order,
            dim: n,
            entries: Vec::with_capacity(n * n),
        };
        for i in 0..n {
            for j in 0..n {
                let mut acc = CyclotomicNumber::zero(self.order);
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = rhs.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.entries.push(acc);
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect();
        Self {
            order: self.order,
            dim: self.dim,
            entries,
        }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.order, self.dim);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn map(&self, f: impl Fn(&CyclotomicNumber) -> Result<CyclotomicNumber>) -> Result<Self> {
        let entries = self.entries.iter().map(f).collect::<Result<_>>()?;
        Ok(Self {
            order: self.order,
            dim: self.dim,
            entries,
        })
    }

    pub fn trace(&self) -> CyclotomicNumber {
        (0..self.dim).fold(CyclotomicNumber::zero(self.order), |acc, i| &acc + self.get(i, i))
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det(&self) -> CyclotomicNumber {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut det = CyclotomicNumber::one(self.order);
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return CyclotomicNumber::zero(self.order);
            };
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det = &det * &p;
            let p_inv = p.inverse().expect("pivot is nonzero");
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let factor = &a[r * n + col] * &p_inv;
                for k in col..n {
                    let t = &factor * &a[col * n + k];
                    a[r * n + k] = &a[r * n + k] - &t;
                }
            }
        }
        det
    }

    /// Coefficients of `det(xI - M)`, lowest degree first (monic, length `dim + 1`).
    /// Faddeev–LeVerrier recursion.
    pub fn charpoly(&self) -> Vec<CyclotomicNumber> {
        let n = self.dim;
        let mut coeffs = vec![CyclotomicNumber::zero(self.order); n + 1];
        coeffs[n] = CyclotomicNumber::one(self.order);
        let mut aux = Self {
            order: self.order,
            dim: n,
            entries: vec![CyclotomicNumber::zero(self.order); n * n],
        };
        for k in 1..=n {
            let shifted = self.mul(&aux).add_identity_times(&coeffs[n + 1 - k]);
            aux = shifted;
            let tr = self.mul(&aux).trace();
            let scale = CyclotomicNumber::from_rational(self.order, int(-(k as i64)).recip());
            coeffs[n - k] = &tr * &scale;
        }
        coeffs
    }

    fn add_identity_times(mut self, c: &CyclotomicNumber) -> Self {
        for i in 0..self.dim {
            let z = self.get(i, i) + c;
            self.set(i, i, z);
        }
        self
    }

    /// Default search bound `lcm(1..=m) * dim`.
    pub fn default_order_bound(&self) -> u64 {
        let l = (1..=self.order).fold(1u64, |acc, k| (acc / acc.gcd(&k)).saturating_mul(k));
        l.saturating_mul(self.dim as u64)
    }

    /// Least `k >= 1` with `M^k = I`. Nontrivial unipotent matrices are reported
    /// without iterating.
    pub fn finite_order(&self, bound: u64) -> MatrixOrder {
        let id = Self::identity(self.order, self.dim);
        if *self == id {
            return MatrixOrder::Finite(1);
        }
        let nilpotent_part = self.sub(&id);
        if nilpotent_part
            .pow(self.dim as u64)
            .entries
            .iter()
            .all(CyclotomicNumber::is_zero)
        {
            return MatrixOrder::InfiniteUnipotent;
        }
        let mut acc = self.clone();
        for k in 2..=bound {
            acc = acc.mul(self);
            if acc == id {
                return MatrixOrder::Finite(k);
            }
        }
        MatrixOrder::ExceedsBound(bound)
    }
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycMatrix(m={}, {})", self.order, self)
    }
}

impl fmt::Display for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, z) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{z}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}
