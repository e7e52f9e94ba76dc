//! Calabi-Yau threefold invariants: Borcea-Voisin Hodge numbers, fixed loci of
//! K3 involutions, and the length calculus of Yukawa couplings.

use std::fmt;
use std::str::FromStr;

use crate::error::{bail, Error, Result};

/// Fixed locus of an anti-symplectic K3 involution: `curve_count` curves of total genus `genus_sum`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FixedLocusProfile {
    pub curve_count: u64,
    pub genus_sum: u64,
}

impl FixedLocusProfile {
    pub fn new(curve_count: u64, genus_sum: u64) -> Self {
        Self { curve_count, genus_sum }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HodgeNumbers {
    pub h11: u64,
    pub h21: u64,
}

/// `h11 = 11 + 5N - N'` and `h21 = 11 + 5N' - N`.
pub fn borcea_voisin_hodge(profile: FixedLocusProfile) -> Result<HodgeNumbers> {
    let n = i128::from(profile.curve_count);
    let n_prime = i128::from(profile.genus_sum);
    let h11 = 11 + 5 * n - n_prime;
    let h21 = 11 + 5 * n_prime - n;
    if h11 < 0 || h21 < 0 {
        bail!(
            InvalidArgument,
            "profile (N={n}, N'={n_prime}) gives negative Hodge numbers ({h11}, {h21})"
        );
    }
    Ok(HodgeNumbers {
        h11: h11 as u64,
        h21: h21 as u64,
    })
}

/// Lattice invariants `(t, a, delta)` of a K3 involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NikulinTriple {
    t: u64,
    a: u64,
    delta: u8,
}

impl NikulinTriple {
    pub fn new(t: u64, a: u64, delta: u8) -> Result<Self> {
        if delta > 1 {
            bail!(InvalidArgument, "delta must be 0 or 1, got {delta}");
        }
        Ok(Self { t, a, delta })
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn delta(&self) -> u8 {
        self.delta
    }
}

/// Fixed locus of the involution with invariants `tr`.
///
/// `(10, 10, 0)` has empty fixed locus and `(10, 8, 0)` fixes two elliptic curves;
/// otherwise `N' = (22 - t - a) / 2` and `N = (t - a) / 2 + 1`.
pub fn nikulin_fixed_locus(tr: NikulinTriple) -> Result<FixedLocusProfile> {
    match (tr.t, tr.a, tr.delta) {
        (10, 10, 0) => return Ok(FixedLocusProfile::new(0, 0)),
        (10, 8, 0) => return Ok(FixedLocusProfile::new(2, 2)),
        _ => {}
    }
    let (t, a) = (tr.t, tr.a);
    if a > t || t + a > 22 {
        bail!(InvalidArgument, "need a <= t and t + a <= 22, got t={t}, a={a}");
    }
    if (t - a) % 2 != 0 || (22 - t - a) % 2 != 0 {
        bail!(InvalidArgument, "t - a and 22 - t - a must be even, got t={t}, a={a}");
    }
    Ok(FixedLocusProfile::new((t - a) / 2 + 1, (22 - t - a) / 2))
}

/// Symbolic expression in variations of Hodge structures.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VhsExpression {
    Leaf { zeta: u64 },
    Tensor(Vec<VhsExpression>),
    DirectSum(Vec<VhsExpression>),
}

impl VhsExpression {
    pub fn leaf(zeta: u64) -> Self {
        Self::Leaf { zeta }
    }

    pub fn tensor(children: Vec<VhsExpression>) -> Result<Self> {
        if children.is_empty() {
            bail!(InvalidArgument, "tensor needs at least one factor");
        }
        Ok(Self::Tensor(children))
    }

    pub fn direct_sum(children: Vec<VhsExpression>) -> Result<Self> {
        if children.is_empty() {
            bail!(InvalidArgument, "sum needs at least one summand");
        }
        Ok(Self::DirectSum(children))
    }

    /// Merges nested nodes of the same kind and unwraps single-child nodes.
    pub fn flatten(&self) -> Self {
        fn absorb(children: &[VhsExpression], tensor: bool) -> Vec<VhsExpression> {
            let mut out = Vec::new();
            for child in children.iter().map(VhsExpression::flatten) {
                match child {
                    VhsExpression::Tensor(inner) if tensor => out.extend(inner),
                    VhsExpression::DirectSum(inner) if !tensor => out.extend(inner),
                    other => out.push(other),
                }
            }
            out
        }
        let wrap = |mut children: Vec<VhsExpression>, tensor: bool| {
            if children.len() == 1 {
                children.pop().unwrap()
            } else if tensor {
                Self::Tensor(children)
            } else {
                Self::DirectSum(children)
            }
        };
        match self {
            Self::Leaf { zeta } => Self::leaf(*zeta),
            Self::Tensor(c) => wrap(absorb(c, true), true),
            Self::DirectSum(c) => wrap(absorb(c, false), false),
        }
    }

    pub fn children(&self) -> &[VhsExpression] {
        match self {
            Self::Leaf { .. } => &[],
            Self::Tensor(c) | Self::DirectSum(c) => c,
        }
    }
}

/// Length of the Yukawa coupling: additive under tensor products, maximal under sums.
pub fn yukawa_length(e: &VhsExpression) -> u64 {
    match e {
        VhsExpression::Leaf { zeta } => *zeta,
        VhsExpression::Tensor(c) => c.iter().map(yukawa_length).sum(),
        VhsExpression::DirectSum(c) => c.iter().map(yukawa_length).max().unwrap_or(0),
    }
}

impl fmt::Display for VhsExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, children) = match self {
            Self::Leaf { zeta } => return write!(f, "leaf {zeta}"),
            Self::Tensor(c) => ("tensor", c),
            Self::DirectSum(c) => ("sum", c),
        };
        write!(f, "{name}(")?;
        for (i, child) in children.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{child}")?;
        }
        f.write_str(")")
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expr(&mut self) -> Result<VhsExpression> {
        let start = self.pos;
        match self.word() {
            "leaf" => {
                let digits = self.word();
                let zeta = digits.parse().map_err(|_| {
                    self.pos = start;
                    self.error("expected a nonnegative integer after 'leaf'")
                })?;
                Ok(VhsExpression::leaf(zeta))
            }
            kind @ ("tensor" | "sum") => {
                self.expect('(')?;
                let mut children = vec![self.expr()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    children.push(self.expr()?);
                }
                self.expect(')')?;
                Ok(if kind == "tensor" {
                    VhsExpression::Tensor(children)
                } else {
                    VhsExpression::DirectSum(children)
                })
            }
            _ => {
                self.pos = start;
                Err(self.error("expected 'leaf', 'tensor' or 'sum'"))
            }
        }
    }
}

impl FromStr for VhsExpression {
    type Err = Error;

    /// Grammar: `leaf <int>`, `tensor(e, e, ...)`, `sum(e, e, ...)`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parser = Parser { src: s, pos: 0 };
        let e = parser.expr()?;
        parser.skip_ws();
        if parser.pos != s.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(e)
    }
}
