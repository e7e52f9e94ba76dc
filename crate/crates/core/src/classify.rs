//! Pure `(1,n)`-VHS detection, the SINT/INT integrality conditions, the
//! triangle-group parametrization of four-point data, and exhaustive
//! enumeration of pure families up to equivalence.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::rational::{self, rat, Rational};
use crate::cover::{CoverFamily, QuotientFamily};
use crate::error::{bail, Error, Result};

/// Why a family fails to carry a pure `(1,n)`-VHS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// No conjugate pair has types `(1,n)` and `(n,1)`.
    NoDistinguishedPair,
    /// A second pair of types `(1,n)`/`(n,1)` besides the one at `first`.
    SecondPair { first: u64, second: u64 },
    /// Character `j` is neither unitary nor of type `(1,n)`/`(n,1)`.
    NonUnitary { j: u64, p: u64, q: u64 },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::NoDistinguishedPair => f.write_str("no eigenspace of type (1,n)"),
            Obstruction::SecondPair { first, second } => {
                write!(f, "second non-unitary pair at j={second} (first at j={first})")
            }
            Obstruction::NonUnitary { j, p, q } => {
                write!(f, "eigenspace j={j} has non-unitary type ({p},{q})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PureVhsResult {
    NotPure {
        obstruction: Obstruction,
    },
    /// `j0` is a unit modulo `m`.
    Primitive {
        j0: u64,
    },
    /// `r0 = gcd(j0, m) > 1`; the VHS comes from the primitive quotient family.
    Derived {
        j0: u64,
        r0: u64,
        primitive: CoverFamily,
    },
}

impl PureVhsResult {
    pub fn is_pure(&self) -> bool {
        !matches!(self, PureVhsResult::NotPure { .. })
    }

    pub fn distinguished_character(&self) -> Option<u64> {
        match self {
            PureVhsResult::NotPure { .. } => None,
            PureVhsResult::Primitive { j0 } | PureVhsResult::Derived { j0, .. } => Some(*j0),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            PureVhsResult::NotPure { .. } => "not-pure",
            PureVhsResult::Primitive { .. } => "primitive",
            PureVhsResult::Derived { .. } => "derived",
        }
    }
}

/// Classifies `family` as not pure, primitive pure or derived pure `(1,n)`.
///
/// Characters `j` and `m - j` are treated as one conjugate pair. The
/// distinguished character `j0` is the member of the pair of type `(1,n)`;
/// for `n = 1` both members qualify and the smaller is reported.
pub fn classify_pure(family: &CoverFamily) -> Result<PureVhsResult> {
    let m = family.degree();
    let n = family.base_dimension() as u64;
    let mut pair: Option<u64> = None;
    for j in 1..=m / 2 {
        let (p, q) = family.hodge_type(j);
        let (pc, qc) = family.hodge_type(m - j);
        let distinguished = (p == 1 && q == n) || (p == n && q == 1);
        if distinguished && (pc, qc) == (q, p) {
            if let Some(first) = pair {
                return Ok(PureVhsResult::NotPure {
                    obstruction: Obstruction::SecondPair { first, second: j },
                });
            }
            pair = Some(j);
            continue;
        }
        for (jj, p, q) in [(j, p, q), (m - j, pc, qc)] {
            if p != 0 && q != 0 {
                return Ok(PureVhsResult::NotPure {
                    obstruction: Obstruction::NonUnitary { j: jj, p, q },
                });
            }
        }
    }
    let Some(j) = pair else {
        return Ok(PureVhsResult::NotPure {
            obstruction: Obstruction::NoDistinguishedPair,
        });
    };
    let j0 = if family.hodge_type(j) == (1, n) { j } else { m - j };
    let r0 = j0.gcd(&m);
    if r0 == 1 {
        return Ok(PureVhsResult::Primitive { j0 });
    }
    let primitive = match family.quotient_family(r0)? {
        QuotientFamily::Family(f) => f,
        QuotientFamily::Degenerate { .. } => {
            return Err(Error::Internal(format!(
                "derived family {family} has a degenerate quotient by {r0}"
            )))
        }
    };
    match classify_pure(&primitive)? {
        PureVhsResult::Primitive { .. } => Ok(PureVhsResult::Derived { j0, r0, primitive }),
        other => Err(Error::Internal(format!(
            "quotient {primitive} of derived family {family} is {}",
            other.tag()
        ))),
    }
}

/// Outcome of an integrality check. `violation` holds the first failing
/// pair of positions in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityVerdict {
    pub sum_is_two: bool,
    pub violation: Option<(usize, usize)>,
}

impl IntegralityVerdict {
    pub fn holds(&self) -> bool {
        self.sum_is_two && self.violation.is_none()
    }
}

fn check_open_unit(mu: &[Rational]) -> Result<()> {
    if let Some((k, q)) = mu.iter().enumerate().find(|(_, q)| !rational::in_open_unit_interval(q)) {
        bail!(InvalidArgument, "datum {k} = {q} is not in (0,1)");
    }
    Ok(())
}

fn inverse_defect_is_integral(a: &Rational, b: &Rational) -> bool {
    let defect = Rational::one() - a - b;
    !defect.is_zero() && rational::is_integer(&defect.recip())
}

fn integrality(mu: &[Rational], pair_ok: impl Fn(&Rational, &Rational) -> bool) -> Result<IntegralityVerdict> {
    check_open_unit(mu)?;
    let sum_is_two = mu.iter().sum::<Rational>() == rational::int(2);
    let violation = (0..mu.len())
        .flat_map(|a| (a + 1..mu.len()).map(move |b| (a, b)))
        .find(|&(a, b)| !pair_ok(&mu[a], &mu[b]));
    Ok(IntegralityVerdict { sum_is_two, violation })
}

/// SINT: `sum mu = 2` and every pair has `mu_s + mu_t = 1` or
/// `(1 - mu_s - mu_t)^{-1}` integral.
pub fn sint_check(mu: &[Rational]) -> Result<IntegralityVerdict> {
    integrality(mu, |a, b| a + b == Rational::one() || inverse_defect_is_integral(a, b))
}

/// INT: `sum mu = 2` and pairs with `mu_s + mu_t < 1` have integral inverse defect.
pub fn int_check(mu: &[Rational]) -> Result<IntegralityVerdict> {
    integrality(mu, |a, b| a + b >= Rational::one() || inverse_defect_is_integral(a, b))
}

/// Triangle-group parameters `1 < p <= q <= r` with `1/p + 1/q + 1/r < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TriangleParams {
    p: u64,
    q: u64,
    r: u64,
}

impl TriangleParams {
    pub fn new(p: u64, q: u64, r: u64) -> Result<Self> {
        if !(1 < p && p <= q && q <= r) {
            bail!(InvalidArgument, "need 1 < p <= q <= r, got ({p},{q},{r})");
        }
        let s = rat(1, p as i64) + rat(1, q as i64) + rat(1, r as i64);
        if s >= Rational::one() {
            bail!(InvalidArgument, "1/{p} + 1/{q} + 1/{r} = {s} is not < 1");
        }
        Ok(Self { p, q, r })
    }

    pub fn pqr(&self) -> (u64, u64, u64) {
        (self.p, self.q, self.r)
    }
}

/// Four-point data with `mu_1 + mu_2 = 1 - 1/p`, `mu_1 + mu_3 = 1 - 1/q`,
/// `mu_2 + mu_3 = 1 - 1/r` and total sum 2.
pub fn triangle_family(t: TriangleParams) -> [Rational; 4] {
    let (ip, iq, ir) = (rat(1, t.p as i64), rat(1, t.q as i64), rat(1, t.r as i64));
    let half = rat(1, 2);
    let one = Rational::one();
    [
        &half * (&one - &ip - &iq + &ir),
        &half * (&one - &ip + &iq - &ir),
        &half * (&one + &ip - &iq - &ir),
        &half * (&one + &ip + &iq + &ir),
    ]
}

/// A canonical family together with its classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifiedFamily {
    pub family: CoverFamily,
    pub result: PureVhsResult,
}

/// All pure `(1,n)` families with `2 <= m <= m_max`, one per equivalence
/// class, sorted by degree then canonical indices.
pub fn enumerate_pure(n: usize, m_max: u64) -> Result<Vec<ClassifiedFamily>> {
    enumerate_pure_with_jobs(n, m_max, 1)
}

/// As [`enumerate_pure`], splitting the `(m, d_1)` search space across `jobs`
/// worker threads. The output does not depend on `jobs`.
pub fn enumerate_pure_with_jobs(n: usize, m_max: u64, jobs: usize) -> Result<Vec<ClassifiedFamily>> {
    if n == 0 {
        bail!(InvalidArgument, "n must be at least 1");
    }
    let slots = n + 3;
    let work: Vec<(u64, u64)> = (2..=m_max).flat_map(|m| (1..m).map(move |d1| (m, d1))).collect();
    let next = AtomicUsize::new(0);
    let found = Mutex::new(Vec::new());
    let first_error = Mutex::new(None);
    let worker = || {
        let mut local = Vec::new();
        loop {
            let i = next.fetch_add(1, Ordering::Relaxed);
            let Some(&(m, d1)) = work.get(i) else { break };
            let mut prefix = vec![d1];
            if let Err(e) = search(m, slots, &mut prefix, d1, m.gcd(&d1), &mut local) {
                first_error.lock().unwrap().get_or_insert(e);
                break;
            }
        }
        found.lock().unwrap().extend(local);
    };
    std::thread::scope(|s| {
        for _ in 1..jobs.max(1) {
            s.spawn(worker);
        }
        worker();
    });
    if let Some(e) = first_error.into_inner().unwrap() {
        return Err(e);
    }
    let mut out = found.into_inner().unwrap();
    out.sort_by(|a, b| a.family.cmp(&b.family));
    Ok(out)
}

/// Depth-first generation of non-decreasing index tuples. Only tuples equal to
/// their own canonical form are classified, so each orbit is seen once.
fn search(
    m: u64,
    slots: usize,
    prefix: &mut Vec<u64>,
    sum: u64,
    g: u64,
    out: &mut Vec<ClassifiedFamily>,
) -> Result<()> {
    let last = *prefix.last().unwrap();
    if prefix.len() + 1 == slots {
        // the final index is forced by m | sum
        let d = (m - sum % m) % m;
        if d < last || d == 0 || g.gcd(&d) != 1 {
            return Ok(());
        }
        prefix.push(d);
        let result = classify_candidate(m, prefix);
        prefix.pop();
        if let Some(c) = result? {
            out.push(c);
        }
        return Ok(());
    }
    for d in last..m {
        prefix.push(d);
        search(m, slots, prefix, sum + d, g.gcd(&d), out)?;
        prefix.pop();
    }
    Ok(())
}

fn classify_candidate(m: u64, indices: &[u64]) -> Result<Option<ClassifiedFamily>> {
    let family = CoverFamily::new(m, indices.to_vec())?;
    if family.canonical_form() != family {
        return Ok(None);
    }
    let result = classify_pure(&family)?;
    Ok(result.is_pure().then_some(ClassifiedFamily { family, result }))
}
