//! Families of cyclic covers of the projective line, described by their
//! degree `m` and branch indices `d_1, ..., d_N` (local monodromy data
//! `mu_k = d_k / m`).
//!
//! Branch points are ordered slots `0..N`. Their order matters for monodromy
//! computations; classification only sees the multiset.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::rational::{self, Rational};
use crate::arith::residue::units;
use crate::error::{bail, Error, Result};

/// Degree plus branch indices of a family `C -> P_n` of irreducible cyclic covers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverFamily {
    degree: u64,
    indices: Vec<u64>,
}

impl CoverFamily {
    /// Validates `0 < d_k < m`, `m | sum d_k`, `gcd(m, d_1, ..., d_N) = 1` and `N >= 4`.
    pub fn new(degree: u64, indices: Vec<u64>) -> Result<Self> {
        if degree < 2 {
            bail!(InvalidFamily, "degree must be at least 2, got {degree}");
        }
        if indices.len() < 4 {
            bail!(InvalidFamily, "need at least 4 branch points, got {}", indices.len());
        }
        if let Some(d) = indices.iter().find(|&&d| d == 0 || d >= degree) {
            bail!(InvalidFamily, "branch index {d} is not in 1..{}", degree - 1);
        }
        let sum: u64 = indices.iter().sum();
        if !sum.is_multiple_of(degree) {
            bail!(
                InvalidFamily,
                "degree {degree} does not divide the index sum {sum} (infinity would be a branch point)"
            );
        }
        let g = indices.iter().fold(degree, |g, d| g.gcd(d));
        if g != 1 {
            bail!(
                InvalidFamily,
                "gcd of degree and indices is {g}, so the cover is reducible"
            );
        }
        Ok(Self { degree, indices })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    /// Number of branch points `N`.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Dimension `n = N - 3` of the base.
    pub fn base_dimension(&self) -> usize {
        self.indices.len() - 3
    }

    pub fn local_data(&self) -> Vec<Rational> {
        self.indices.iter().map(|&d| self.mu(d)).collect()
    }

    fn mu(&self, d: u64) -> Rational {
        rational::rat(d as i64, self.degree as i64)
    }

    /// Residues `[j * d_k]_m` for every slot.
    pub fn twisted_indices(&self, j: u64) -> Vec<u64> {
        self.indices.iter().map(|&d| j * d % self.degree).collect()
    }

    pub(crate) fn check_character(&self, j: u64) -> Result<()> {
        if j == 0 || j >= self.degree {
            bail!(InvalidArgument, "character {j} is not in 1..{}", self.degree - 1);
        }
        Ok(())
    }

    /// Hodge type `(p, q)` of the character-`j` eigenspace, integer arithmetic only.
    pub(crate) fn hodge_type(&self, j: u64) -> (u64, u64) {
        let m = self.degree;
        let (mut sum, mut count) = (0u64, 0u64);
        for &d in &self.indices {
            let r = j * d % m;
            if r != 0 {
                sum += r;
                count += 1;
            }
        }
        if count == 0 {
            return (0, 0);
        }
        let p = sum / m - 1;
        (p, count - 2 - p)
    }

    pub fn eigenspace_profile(&self, j: u64) -> Result<EigenspaceProfile> {
        self.check_character(j)?;
        let m = self.degree;
        let mut support = Vec::new();
        let mut local_data = Vec::new();
        for (k, &d) in self.indices.iter().enumerate() {
            let r = j * d % m;
            if r != 0 {
                support.push(k);
                local_data.push(self.mu(r));
            }
        }
        let (hodge_p, hodge_q) = if support.is_empty() {
            (0, 0)
        } else {
            let total: Rational = local_data.iter().sum();
            if !rational::is_integer(&total) {
                return Err(Error::Internal(format!(
                    "fractional parts of {self} at j={j} sum to {total}"
                )));
            }
            let p = total.to_integer().to_u64().unwrap_or(0) - 1;
            (p, support.len() as u64 - 2 - p)
        };
        Ok(EigenspaceProfile {
            character: j,
            support,
            local_data,
            hodge_p,
            hodge_q,
        })
    }

    pub fn eigenspace_profiles(&self) -> Vec<EigenspaceProfile> {
        (1..self.degree)
            .map(|j| self.eigenspace_profile(j).expect("j in range"))
            .collect()
    }

    /// Genus of a fiber as the sum of `h^{1,0}` over all eigenspaces.
    pub fn genus(&self) -> u64 {
        (1..self.degree).map(|j| self.hodge_type(j).0).sum()
    }

    pub fn quotient_family(&self, r: u64) -> Result<QuotientFamily> {
        if r <= 1 || r >= self.degree || !self.degree.is_multiple_of(r) {
            bail!(InvalidArgument, "{r} is not a proper divisor of {}", self.degree);
        }
        let degree = self.degree / r;
        let indices: Vec<u64> = self.indices.iter().map(|d| d % degree).filter(|&d| d != 0).collect();
        if indices.len() <= 3 {
            return Ok(QuotientFamily::Degenerate { degree, indices });
        }
        Ok(QuotientFamily::Family(CoverFamily::new(degree, indices)?))
    }

    /// Least sorted index tuple over all unit multiples `d -> [v d]_m`.
    pub fn canonical_form(&self) -> CoverFamily {
        let m = self.degree;
        let best = units(m)
            .map(|v| {
                let mut t: Vec<u64> = self.indices.iter().map(|d| v * d % m).collect();
                t.sort_unstable();
                t
            })
            .min()
            .expect("1 is always a unit");
        CoverFamily {
            degree: m,
            indices: best,
        }
    }

    pub fn is_equivalent(&self, other: &CoverFamily) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    fn check_partition(&self, partition: &Partition) -> Result<()> {
        if partition.slots != self.len() {
            bail!(
                InvalidArgument,
                "partition covers {} slots but the family has {}",
                partition.slots,
                self.len()
            );
        }
        Ok(())
    }

    fn block_datum(&self, block: &[usize]) -> Rational {
        let sum: u64 = block.iter().map(|&k| self.indices[k]).sum();
        self.mu(sum)
    }

    /// Every block has a non-integral sum of local monodromy data.
    pub fn is_stable_partition(&self, partition: &Partition) -> Result<bool> {
        self.check_partition(partition)?;
        Ok(partition
            .blocks()
            .iter()
            .all(|b| !rational::is_integer(&self.block_datum(b))))
    }

    /// Collides each block to a single branch point with datum
    /// `[sum_{k in B} mu_k]_1`; blocks are emitted in order of their smallest slot.
    pub fn collide(&self, partition: &Partition) -> Result<CoverFamily> {
        if !self.is_stable_partition(partition)? {
            bail!(
                Precondition,
                "partition is not stable: some block has an integral datum sum"
            );
        }
        if partition.blocks().len() < 4 {
            bail!(
                InvalidArgument,
                "collision leaves {} branch points, need at least 4",
                partition.blocks().len()
            );
        }
        let data: Vec<Rational> = partition
            .blocks()
            .iter()
            .map(|b| rational::frac_part(&self.block_datum(b)))
            .collect();
        let degree = rational::common_denominator(&data);
        let indices = data
            .iter()
            .map(|q| (q * Rational::from_integer(degree.clone())).to_integer())
            .map(|d| {
                d.to_u64()
                    .ok_or_else(|| Error::Internal("collided index overflow".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let degree = degree
            .to_u64()
            .ok_or_else(|| Error::Internal("collided degree overflow".into()))?;
        CoverFamily::new(degree, indices)
    }

    /// Some index value occurs at least `N - 2` times, so a fiber is covered by a Fermat curve.
    pub fn has_fermat_cm_fiber(&self) -> bool {
        let mut counts = BTreeMap::new();
        for &d in &self.indices {
            *counts.entry(d).or_insert(0usize) += 1;
        }
        counts.values().any(|&c| c + 2 >= self.len())
    }
}

/// Genus from the Riemann–Hurwitz formula `2 - 2g = 2m - sum_k (m - gcd(m, d_k))`.
pub fn riemann_hurwitz_genus(family: &CoverFamily) -> u64 {
    let m = family.degree() as i64;
    let ramification: i64 = family.indices().iter().map(|&d| m - (d as i64).gcd(&m)).sum();
    let two_g = 2 - 2 * m + ramification;
    (two_g / 2) as u64
}

impl fmt::Display for CoverFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.degree)?;
        for (i, d) in self.indices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for CoverFamily {
    type Err = Error;

    /// Parses the literal `m:d1,d2,...,dN`.
    fn from_str(s: &str) -> Result<Self> {
        let (m, ds) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected m:d1,...,dN, got {s:?}")))?;
        let m = m
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad degree {m:?}")))?;
        let indices = ds
            .split(',')
            .map(|d| {
                d.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad branch index {d:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        CoverFamily::new(m, indices)
    }
}

/// Character-`j` eigenspace data of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenspaceProfile {
    pub character: u64,
    /// Slots `k` with `[j mu_k]_1 != 0`.
    pub support: Vec<usize>,
    /// `[j mu_k]_1` for the slots in `support`, in slot order.
    pub local_data: Vec<Rational>,
    pub hodge_p: u64,
    pub hodge_q: u64,
}

impl EigenspaceProfile {
    pub fn hodge_type(&self) -> (u64, u64) {
        (self.hodge_p, self.hodge_q)
    }

    pub fn is_unitary(&self) -> bool {
        self.hodge_p == 0 || self.hodge_q == 0
    }

    pub fn has_full_support(&self, slots: usize) -> bool {
        self.support.len() == slots
    }
}

/// Result of passing to the quotient family of degree `m / r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientFamily {
    Family(CoverFamily),
    /// At most three branch points survive, so the quotient has a trivial VHS.
    Degenerate {
        degree: u64,
        indices: Vec<u64>,
    },
}

impl QuotientFamily {
    pub fn family(&self) -> Option<&CoverFamily> {
        match self {
            QuotientFamily::Family(f) => Some(f),
            QuotientFamily::Degenerate { .. } => None,
        }
    }
}

/// A set partition of the slots `0..slots`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    slots: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Blocks are normalized (each sorted, ordered by smallest element).
    pub fn new(slots: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; slots];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                bail!(InvalidArgument, "partition has an empty block");
            }
            block.sort_unstable();
            for &k in block.iter() {
                if k >= slots {
                    bail!(InvalidArgument, "slot {k} is out of range 0..{slots}");
                }
                if std::mem::replace(&mut seen[k], true) {
                    bail!(InvalidArgument, "slot {k} appears in two blocks");
                }
            }
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            bail!(InvalidArgument, "slot {k} is not covered by the partition");
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { slots, blocks })
    }

    pub fn discrete(slots: usize) -> Self {
        Self {
            slots,
            blocks: (0..slots).map(|k| vec![k]).collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn slots(&self) -> usize {
        self.slots
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    fn fam(s: &str) -> CoverFamily {
        s.parse().unwrap()
    }

    fn part(n: usize, blocks: &[&[usize]]) -> Partition {
        Partition::new(n, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn invariants_are_enforced() {
        assert!(CoverFamily::new(1, vec![1, 1, 1, 1]).is_err());
        assert!(CoverFamily::new(5, vec![1, 2, 2]).is_err());
        assert!(CoverFamily::new(5, vec![0, 2, 4, 4]).is_err());
        assert!(CoverFamily::new(5, vec![1, 2, 2, 5]).is_err());
        assert!(CoverFamily::new(6, vec![3, 3, 3, 2, 2]).is_err());
        assert!(CoverFamily::new(4, vec![2, 2, 2, 2]).is_err());
        assert!(CoverFamily::new(6, vec![2, 2, 2, 3, 3]).is_ok());
    }

    #[test]
    fn literal_round_trip() {
        let f = fam(" 12:5, 1,11,7");
        assert_eq!(f.to_string(), "12:5,1,11,7");
        assert_eq!(fam(&f.to_string()), f);
        assert!(matches!("12;5,1".parse::<CoverFamily>(), Err(Error::Parse(_))));
        assert!(matches!("12:5,x,1,1".parse::<CoverFamily>(), Err(Error::Parse(_))));
        let err = "6:3,3,3,2,2".parse::<CoverFamily>().unwrap_err();
        assert!(err.to_string().contains("does not divide"), "{err}");
    }

    #[test]
    fn eigenspace_examples() {
        let f = fam("5:1,3,3,3");
        assert_eq!(f.eigenspace_profile(1).unwrap().hodge_type(), (1, 1));
        let p2 = f.eigenspace_profile(2).unwrap();
        assert_eq!(p2.hodge_type(), (0, 2));
        assert_eq!(p2.local_data, vec![rat(2, 5), rat(1, 5), rat(1, 5), rat(1, 5)]);

        let g = fam("4:1,1,1,1").eigenspace_profile(2).unwrap();
        assert_eq!(g.hodge_type(), (1, 1));
        assert_eq!(g.support.len(), 4);

        let partial = fam("6:2,2,2,3,3").eigenspace_profile(3).unwrap();
        assert_eq!(partial.support, vec![3, 4]);
        assert_eq!(partial.hodge_type(), (0, 0));

        assert!(f.eigenspace_profile(0).is_err());
        assert!(f.eigenspace_profile(5).is_err());
    }

    #[test]
    fn genus_examples() {
        assert_eq!(fam("2:1,1,1,1").genus(), 1);
        assert_eq!(fam("7:2,4,4,4").genus(), 6);
        assert_eq!(fam("3:1,1,1,1,1,1").genus(), 4);
        for f in ["2:1,1,1,1", "7:2,4,4,4", "3:1,1,1,1,1,1", "12:4,7,7,6"] {
            assert_eq!(fam(f).genus(), riemann_hurwitz_genus(&fam(f)));
        }
    }

    #[test]
    fn quotient_examples() {
        let q = fam("4:1,1,1,1").quotient_family(2).unwrap();
        assert_eq!(q, QuotientFamily::Family(fam("2:1,1,1,1")));
        let q = fam("6:1,2,2,1").quotient_family(2).unwrap();
        assert_eq!(q, QuotientFamily::Family(fam("3:1,2,2,1")));
        let q = fam("6:2,2,2,3,3").quotient_family(3).unwrap();
        assert_eq!(
            q,
            QuotientFamily::Degenerate {
                degree: 2,
                indices: vec![1, 1]
            }
        );
        assert!(fam("6:2,2,2,3,3").quotient_family(4).is_err());
        assert!(fam("6:2,2,2,3,3").quotient_family(6).is_err());
        assert!(fam("6:2,2,2,3,3").quotient_family(1).is_err());
    }

    #[test]
    fn canonical_form_examples() {
        assert_eq!(fam("5:2,2,2,2,2").canonical_form(), fam("5:1,1,1,1,1"));
        // unit multiples by 1, 5, 7, 11 give 5568, 1146, 6 8 11 11, 4677
        let f = fam("12:5,5,6,8");
        assert_eq!(f.canonical_form(), fam("12:1,1,4,6"));
        assert!(f.is_equivalent(&fam("12:4,7,7,6")));
        assert_eq!(fam("2:1,1,1,1").canonical_form(), fam("2:1,1,1,1"));
        let c = f.canonical_form();
        assert_eq!(c.canonical_form(), c);
    }

    #[test]
    fn stable_partitions() {
        let f = fam("4:1,2,2,3");
        assert!(f.is_stable_partition(&Partition::discrete(4)).unwrap());
        let g = fam("2:1,1,1,1");
        assert!(!g.is_stable_partition(&part(4, &[&[0, 1], &[2, 3]])).unwrap());
        let h = fam("5:1,3,3,3");
        assert!(h.is_stable_partition(&part(4, &[&[0, 1], &[2], &[3]])).unwrap());
        assert!(h.is_stable_partition(&Partition::discrete(5)).is_err());
    }

    #[test]
    fn malformed_partitions() {
        assert!(Partition::new(4, vec![vec![0, 1], vec![1, 2, 3]]).is_err());
        assert!(Partition::new(4, vec![vec![0, 1], vec![2]]).is_err());
        assert!(Partition::new(4, vec![vec![0, 1], vec![], vec![2, 3]]).is_err());
        assert!(Partition::new(4, vec![vec![0, 1, 2, 3, 4]]).is_err());
    }

    #[test]
    fn collisions() {
        let f = fam("4:1,1,2,2,2");
        assert_eq!(
            f.collide(&part(5, &[&[0, 1], &[2], &[3], &[4]])).unwrap(),
            fam("2:1,1,1,1")
        );
        for s in ["5:1,3,3,3", "12:5,1,11,7", "3:1,1,1,1,1,1"] {
            assert_eq!(fam(s).collide(&Partition::discrete(fam(s).len())).unwrap(), fam(s));
        }
        let g = fam("3:1,1,1,1,1,1");
        let c = g.collide(&part(6, &[&[0, 1], &[2], &[3], &[4], &[5]])).unwrap();
        assert_eq!(c, fam("3:2,1,1,1,1"));
        let unstable = part(6, &[&[0, 1, 2], &[3], &[4], &[5]]);
        assert!(matches!(g.collide(&unstable), Err(Error::Precondition(_))));
        let too_coarse = part(6, &[&[0, 1], &[2, 3], &[4, 5]]);
        assert!(matches!(g.collide(&too_coarse), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn fermat_cm_fibers() {
        assert!(fam("5:1,3,3,3").has_fermat_cm_fiber());
        assert!(fam("5:1,1,1,1,1").has_fermat_cm_fiber());
        assert!(fam("12:4,6,7,7").has_fermat_cm_fiber());
        assert!(!fam("12:5,1,11,7").has_fermat_cm_fiber());
    }
}
