//! Reproductions of the reference tables. Only input data is stored here;
//! every derived column is recomputed.

use crate::classify::{enumerate_pure_with_jobs, ClassifiedFamily, PureVhsResult};
use crate::cover::CoverFamily;
use crate::cy::{
    borcea_voisin_hodge, nikulin_fixed_locus, yukawa_length, FixedLocusProfile, HodgeNumbers, NikulinTriple,
    VhsExpression,
};
use crate::error::{bail, Result};

/// Largest degree searched when rebuilding the classification tables.
pub const CLASSIFICATION_DEGREE_BOUND: u64 = 12;

/// Values of `n` searched for the `(1, n)` tables.
pub const CLASSIFICATION_RANKS: [usize; 3] = [1, 2, 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorceaVoisinRow {
    pub family: &'static str,
    pub basis: &'static str,
    pub involution: &'static str,
    pub profile: FixedLocusProfile,
    pub hodge: HodgeNumbers,
    pub zeta: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NikulinRow {
    pub triple: NikulinTriple,
    pub profile: FixedLocusProfile,
    pub hodge: HodgeNumbers,
}

const BORCEA_VOISIN_INPUTS: [(&str, &str, &str, u64, u64); 11] = [
    ("C_2", "M_1", "iota_1", 1, 3),
    ("C_2", "M_1", "iota_4", 1, 3),
    ("C_2", "M_1", "gamma_sqrt(lambda), gamma_sqrt(-lambda)", 1, 3),
    ("C_<iota_3>", "M_1", "iota_1", 2, 2),
    ("C_<iota_3>", "M_1", "iota_4", 2, 2),
    ("C_<epsilon>", "M_1", "iota_1", 8, 0),
    ("C_<epsilon>", "M_1", "iota_4", 2, 2),
    ("C_<delta>", "M_1", "iota_1=iota_4", 2, 2),
    ("C_<delta>", "M_1", "iota_5", 8, 0),
    ("W", "M_3", "gamma", 2, 4),
    ("Y", "M_3", "gamma", 2, 4),
];

const NIKULIN_INPUTS: [(u64, u64, u8); 12] = [
    (10, 10, 0),
    (11, 11, 1),
    (12, 10, 1),
    (13, 9, 1),
    (14, 8, 1),
    (15, 7, 1),
    (16, 6, 1),
    (17, 5, 1),
    (18, 4, 1),
    (18, 4, 0),
    (19, 3, 1),
    (20, 2, 1),
];

/// K3 surface times elliptic curve: a tensor of two length-one variations.
fn k3_times_elliptic() -> VhsExpression {
    VhsExpression::Tensor(vec![VhsExpression::leaf(1), VhsExpression::leaf(1)])
}

pub fn borcea_voisin_table() -> Result<Vec<BorceaVoisinRow>> {
    let zeta = yukawa_length(&k3_times_elliptic());
    BORCEA_VOISIN_INPUTS
        .iter()
        .map(|&(family, basis, involution, n, n_prime)| {
            let profile = FixedLocusProfile::new(n, n_prime);
            Ok(BorceaVoisinRow {
                family,
                basis,
                involution,
                profile,
                hodge: borcea_voisin_hodge(profile)?,
                zeta,
            })
        })
        .collect()
}

pub fn nikulin_table() -> Result<Vec<NikulinRow>> {
    NIKULIN_INPUTS
        .iter()
        .map(|&(t, a, delta)| {
            let triple = NikulinTriple::new(t, a, delta)?;
            let profile = nikulin_fixed_locus(triple)?;
            Ok(NikulinRow {
                triple,
                profile,
                hodge: borcea_voisin_hodge(profile)?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveRow {
    pub number: usize,
    pub n: usize,
    pub family: CoverFamily,
    pub genus: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedRow {
    pub family: CoverFamily,
    pub genus: u64,
    pub r0: u64,
    /// Row number of the primitive quotient in the `(1,1)` table.
    pub quotient_number: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationTables {
    pub primitive_rank_one: Vec<PrimitiveRow>,
    pub derived_rank_one: Vec<DerivedRow>,
    pub primitive_higher_rank: Vec<PrimitiveRow>,
}

pub fn classification_tables(jobs: usize) -> Result<ClassificationTables> {
    let mut primitive_rank_one = Vec::new();
    let mut derived = Vec::new();
    let mut primitive_higher_rank = Vec::new();
    for n in CLASSIFICATION_RANKS {
        for ClassifiedFamily { family, result } in enumerate_pure_with_jobs(n, CLASSIFICATION_DEGREE_BOUND, jobs)? {
            let genus = family.genus();
            match result {
                PureVhsResult::Primitive { .. } => {
                    let rows = if n == 1 {
                        &mut primitive_rank_one
                    } else {
                        &mut primitive_higher_rank
                    };
                    rows.push(PrimitiveRow {
                        number: rows.len() + 1,
                        n,
                        family,
                        genus,
                    });
                }
                PureVhsResult::Derived { r0, primitive, .. } => derived.push((n, family, genus, r0, primitive)),
                PureVhsResult::NotPure { .. } => {}
            }
        }
    }
    let derived_rank_one = derived
        .into_iter()
        .map(|(n, family, genus, r0, primitive)| {
            if n != 1 {
                bail!(Internal, "derived family {family} has rank {n} > 1");
            }
            let target = primitive.canonical_form();
            let Some(row) = primitive_rank_one.iter().find(|r| r.family == target) else {
                bail!(
                    Internal,
                    "quotient {primitive} of {family} is not in the primitive table"
                );
            };
            Ok(DerivedRow {
                family,
                genus,
                r0,
                quotient_number: row.number,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ClassificationTables {
        primitive_rank_one,
        derived_rank_one,
        primitive_higher_rank,
    })
}

/// Left-aligned columns separated by two spaces, with a dashed rule under the header.
pub fn render_aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    let mut out = line(header.to_vec());
    out += &line(rule.iter().map(String::as_str).collect());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

fn spaced(family: &CoverFamily) -> String {
    family
        .indices()
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_borcea_voisin(rows: &[BorceaVoisinRow]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.family.to_string(),
                r.basis.to_string(),
                r.involution.to_string(),
                r.profile.curve_count.to_string(),
                r.profile.genus_sum.to_string(),
                r.hodge.h11.to_string(),
                r.hodge.h21.to_string(),
                r.zeta.to_string(),
            ]
        })
        .collect();
    render_aligned(
        &["family", "basis", "involution", "N", "N'", "h11", "h21", "zeta"],
        &cells,
    )
}

pub fn render_nikulin(rows: &[NikulinRow]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.triple.t().to_string(),
                r.triple.a().to_string(),
                r.triple.delta().to_string(),
                r.profile.curve_count.to_string(),
                r.hodge.h11.to_string(),
                r.hodge.h21.to_string(),
            ]
        })
        .collect();
    render_aligned(&["t", "a", "delta", "N", "h11", "h21"], &cells)
}

pub fn render_classification(tables: &ClassificationTables) -> String {
    let primitive = |rows: &[PrimitiveRow], with_n: bool| {
        let cells: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                let mut c = vec![r.number.to_string(), r.family.degree().to_string(), spaced(&r.family)];
                c.push(r.genus.to_string());
                if with_n {
                    c.push(r.n.to_string());
                }
                c
            })
            .collect();
        let header: &[&str] = if with_n {
            &["number", "degree", "indices", "genus", "n"]
        } else {
            &["number", "degree", "indices", "genus"]
        };
        render_aligned(header, &cells)
    };
    let derived: Vec<Vec<String>> = tables
        .derived_rank_one
        .iter()
        .map(|r| {
            vec![
                r.family.degree().to_string(),
                spaced(&r.family),
                r.genus.to_string(),
                r.r0.to_string(),
                r.quotient_number.to_string(),
            ]
        })
        .collect();
    format!(
        "primitive pure (1,1)\n{}\nderived pure (1,1)\n{}\nprimitive pure (1,n), n > 1\n{}",
        primitive(&tables.primitive_rank_one, false),
        render_aligned(&["degree", "indices", "genus", "r0", "N_r0"], &derived),
        primitive(&tables.primitive_higher_rank, true),
    )
}
