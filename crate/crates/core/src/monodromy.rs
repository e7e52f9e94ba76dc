//! Exact Dehn-twist monodromy on eigenspaces and the exceptional-summand
//! analysis for four-point families.
//!
//! A twist acts on the basis `[e_k delta_k]`, `k = 0..dim`, of the character-`j`
//! eigenspace of `H_1` with `dim = |S_j| - 2`. `T(ell)` (between slots `ell` and
//! `ell + 1`) is the identity except in row `ell`:
//!
//! ```text
//! M[ell][ell - 1] = a_ell (1 - a_{ell+1})
//! M[ell][ell]     = a_ell a_{ell+1}
//! M[ell][ell + 1] = 1 - a_ell
//! ```
//!
//! where `a_k = xi^{j d_k}`. Entries whose column falls outside `0..dim` are dropped.

use num_integer::Integer;

use crate::arith::cyclotomic::{cyc_root, CyclotomicNumber};
use crate::arith::matrix::CycMatrix;
use crate::arith::residue::nontrivial_involutions;
use crate::cover::CoverFamily;
use crate::error::{bail, Error, Result};

/// The twist `T_{ell, ell+1}` between consecutive slots (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DehnTwist {
    pub ell: usize,
}

impl DehnTwist {
    pub fn between(ell: usize) -> Self {
        Self { ell }
    }
}

/// Local monodromy `a_k = xi_m^{e_k}` of one eigenspace, restricted to its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSystem {
    order: u64,
    exponents: Vec<u64>,
}

impl LocalSystem {
    pub fn new(order: u64, exponents: Vec<u64>) -> Result<Self> {
        if let Some(e) = exponents.iter().find(|&&e| e % order == 0) {
            bail!(InvalidArgument, "exponent {e} gives trivial local monodromy");
        }
        Ok(Self { order, exponents })
    }

    /// The character-`j` eigenspace of `family`, restricted to its support `S_j`.
    pub fn of_eigenspace(family: &CoverFamily, j: u64) -> Result<Self> {
        family.check_character(j)?;
        let exponents = family.twisted_indices(j).into_iter().filter(|&e| e != 0).collect();
        Ok(Self {
            order: family.degree(),
            exponents,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Rank of the eigenspace, `|S_j| - 2`.
    pub fn dim(&self) -> usize {
        self.exponents.len().saturating_sub(2)
    }

    fn alpha(&self, k: usize) -> CyclotomicNumber {
        cyc_root(self.order, self.exponents[k] as i64)
    }

    pub fn twist_matrix(&self, twist: DehnTwist) -> Result<CycMatrix> {
        let dim = self.dim();
        let ell = twist.ell;
        if ell >= dim {
            bail!(InvalidArgument, "twist {ell} is outside 0..{dim}");
        }
        let m = self.order;
        let one = CyclotomicNumber::one(m);
        let (a, b) = (self.alpha(ell), self.alpha(ell + 1));
        let mut matrix = CycMatrix::identity(m, dim);
        matrix.set(ell, ell, &a * &b);
        if ell >= 1 {
            matrix.set(ell, ell - 1, &a * &(&one - &b));
        }
        if ell + 1 < dim {
            matrix.set(ell, ell + 1, &one - &a);
        }
        Ok(matrix)
    }

    /// Moves slots `k1`, `k2` to the front, keeping the others in order.
    fn with_leading_pair(&self, k1: usize, k2: usize) -> Self {
        let mut exponents = vec![self.exponents[k1], self.exponents[k2]];
        exponents.extend(
            self.exponents
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != k1 && k != k2)
                .map(|(_, &e)| e),
        );
        Self {
            order: self.order,
            exponents,
        }
    }
}

/// `rho_j(T_{ell,ell+1})` for a family whose character-`j` eigenspace has full support.
pub fn dehn_twist_matrix(family: &CoverFamily, j: u64, twist: DehnTwist) -> Result<CycMatrix> {
    let system = LocalSystem::of_eigenspace(family, j)?;
    if system.exponents.len() != family.len() {
        bail!(
            Precondition,
            "eigenspace j={j} of {family} has support of size {} < {}; restrict with LocalSystem::of_eigenspace first",
            system.exponents.len(),
            family.len()
        );
    }
    system.twist_matrix(twist)
}

/// Applies `xi -> xi^v` to every entry.
pub fn galois_conjugate(matrix: &CycMatrix, v: u64) -> Result<CycMatrix> {
    let m = matrix.order();
    if v.gcd(&m) != 1 {
        bail!(InvalidArgument, "{v} is not a unit modulo {m}");
    }
    matrix.map(|z| z.galois(v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwistOrder {
    Finite(u64),
    /// Nontrivial unipotent twist.
    Infinite,
}

/// Order of the twist swapping slots `k1` and `k2` on the character-`j` eigenspace.
pub fn twist_order(family: &CoverFamily, j: u64, k1: usize, k2: usize) -> Result<TwistOrder> {
    family.check_character(j)?;
    let m = family.degree();
    let twisted = family.twisted_indices(j);
    for k in [k1, k2] {
        if k >= family.len() || twisted[k] == 0 {
            bail!(InvalidArgument, "slot {k} is not in the support of eigenspace j={j}");
        }
    }
    if k1 == k2 {
        bail!(InvalidArgument, "twist needs two distinct slots");
    }
    // positions of k1, k2 inside the support
    let pos = |k: usize| twisted[..k].iter().filter(|&&e| e != 0).count();
    let system = LocalSystem::of_eigenspace(family, j)?.with_leading_pair(pos(k1), pos(k2));
    if system.dim() == 0 {
        return Ok(TwistOrder::Finite(1));
    }
    let matrix = system.twist_matrix(DehnTwist::between(0))?;
    let e = (twisted[k1] + twisted[k2]) % m;
    if e != 0 {
        return Ok(TwistOrder::Finite(m / e.gcd(&m)));
    }
    Ok(if matrix.is_identity() {
        TwistOrder::Finite(1)
    } else {
        TwistOrder::Infinite
    })
}

/// Order of the subgroup of `mu_m` fixed by `xi -> xi^v`, as a divisor: `m / gcd(m, v - 1)`.
pub fn t1(m: u64, v: u64) -> u64 {
    m / m.gcd(&((v + m - 1) % m))
}

/// `m / gcd(m, v + 1)`: generator index of the roots on which `xi -> xi^v` acts by conjugation.
pub fn t2(m: u64, v: u64) -> u64 {
    m / m.gcd(&((v + 1) % m))
}

/// Checks one of the two congruence systems for `d` in the given order:
///
/// ```text
/// system 1: v d2 = d1 + d2 + d3,        v d1 = -d3,        v d3 = -d1
/// system 2: v d2 = d1 + d2 + d3 + m/2,  v d1 = -d3 + m/2,  v d3 = -d1 + m/2
/// ```
///
/// all modulo `m`. System 2 requires `m` even.
pub fn satisfies_congruence_system(m: u64, d: [u64; 4], v: u64, system: u8) -> bool {
    let shift = match system {
        1 => 0,
        2 if m.is_multiple_of(2) => m / 2,
        _ => return false,
    };
    let r = |x: u64| x % m;
    let neg = |x: u64| (m - x % m) % m;
    let [d1, d2, d3, _] = d;
    r(v * d2) == r(d1 + d2 + d3 + shift) && r(v * d1) == r(neg(d3) + shift) && r(v * d3) == r(neg(d1) + shift)
}

/// `v = m/2 + 1`, `4 | m` and every index odd.
pub fn separated_closed_form(family: &CoverFamily, v: u64) -> bool {
    let m = family.degree();
    m.is_multiple_of(4) && v == m / 2 + 1 && family.indices().iter().all(|d| d % 2 == 1)
}

/// `t1 = 2` and 2 divides `d1 + d2`, `d2 + d3` and `d1 + d3`.
pub fn separated_by_pair_sums(family: &CoverFamily, v: u64) -> bool {
    let d = family.indices();
    t1(family.degree(), v) == 2 && [d[0] + d[1], d[1] + d[2], d[0] + d[2]].iter().all(|s| s % 2 == 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SummandKind {
    Separated,
    /// `witness[i]` is the slot playing the role of `d_{i+1}`.
    Complex {
        witness: [usize; 4],
        system: u8,
    },
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionRecord {
    pub v: u64,
    pub t1: u64,
    pub t2: u64,
    pub kind: SummandKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalReport {
    pub family: CoverFamily,
    pub involutions: Vec<InvolutionRecord>,
}

impl ExceptionalReport {
    pub fn record(&self, v: u64) -> Option<&InvolutionRecord> {
        self.involutions.iter().find(|r| r.v == v)
    }

    pub fn has_complex(&self) -> bool {
        self.involutions
            .iter()
            .any(|r| matches!(r.kind, SummandKind::Complex { .. }))
    }

    pub fn has_separated(&self) -> bool {
        self.involutions.iter().any(|r| r.kind == SummandKind::Separated)
    }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                out.push([a, b, c, 6 - a - b - c]);
            }
        }
    }
    out
}

fn complex_witness(family: &CoverFamily, v: u64) -> Option<([usize; 4], u8)> {
    let m = family.degree();
    let d = family.indices();
    let perms = permutations4();
    [1u8, 2].into_iter().find_map(|system| {
        perms.iter().find_map(|&p| {
            let permuted = [d[p[0]], d[p[1]], d[p[2]], d[p[3]]];
            satisfies_congruence_system(m, permuted, v, system).then_some((p, system))
        })
    })
}

/// Exceptional-summand analysis of the character-1 summand of a four-point family.
///
/// For every involution `v` of `(Z/m)^*` other than `+-1` this records `t1`, `t2`
/// and whether the summand is separated or complex with respect to `v`.
/// Separated takes precedence when the same `v` also solves a congruence system.
pub fn exceptional_analysis(family: &CoverFamily) -> Result<ExceptionalReport> {
    if family.len() != 4 {
        bail!(
            InvalidArgument,
            "exceptional analysis needs exactly 4 branch points, got {}",
            family.len()
        );
    }
    let m = family.degree();
    let sum: u64 = family.indices().iter().sum();
    if sum != 2 * m {
        bail!(
            Precondition,
            "index sum {sum} is not 2m = {}, so the character-1 summand is special",
            2 * m
        );
    }
    let involutions = nontrivial_involutions(m)
        .map(|v| {
            let kind = if separated_closed_form(family, v) {
                SummandKind::Separated
            } else if let Some((witness, system)) = complex_witness(family, v) {
                SummandKind::Complex { witness, system }
            } else {
                SummandKind::Neither
            };
            InvolutionRecord {
                v,
                t1: t1(m, v),
                t2: t2(m, v),
                kind,
            }
        })
        .collect();
    Ok(ExceptionalReport {
        family: family.clone(),
        involutions,
    })
}

/// Ratio of the off-diagonal entries of `rho_j` and `rho_{jv} = gamma_v(rho_j)`:
///
/// ```text
/// rho_j(T_{1,2})[0][1] / rho_jv(T_{1,2})[0][1]  *  rho_j(T_{2,3})[1][0] / rho_jv(T_{2,3})[1][0]
/// ```
///
/// When `(family, v)` satisfies the first congruence system in slot order this
/// equals `1`, and the two representations agree up to diagonal conjugation.
pub fn intertwiner_identity(family: &CoverFamily, j: u64, v: u64) -> Result<CyclotomicNumber> {
    if family.len() != 4 {
        bail!(
            InvalidArgument,
            "intertwiner needs exactly 4 branch points, got {}",
            family.len()
        );
    }
    let t12 = dehn_twist_matrix(family, j, DehnTwist::between(0))?;
    let t23 = dehn_twist_matrix(family, j, DehnTwist::between(1))?;
    let (b, c) = (t12.get(0, 1).clone(), t23.get(1, 0).clone());
    let (bv, cv) = (b.galois(v)?, c.galois(v)?);
    let [d1, d2, d3, _] = [0, 1, 2, 3].map(|k| family.indices()[k]);
    if bv.is_zero() {
        return Err(Error::DivisionByZero(format!(
            "factor 1 - xi^{} vanishes",
            j * v * d1 % family.degree()
        )));
    }
    if cv.is_zero() {
        return Err(Error::DivisionByZero(format!(
            "factor xi^{} - xi^{} vanishes",
            j * v * d2 % family.degree(),
            j * v * (d2 + d3) % family.degree()
        )));
    }
    Ok(&b.checked_div(&bv)? * &c.checked_div(&cv)?)
}
