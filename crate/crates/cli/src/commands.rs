use cyclovhs::arith::rational;
use cyclovhs::arith::residue::units;
use cyclovhs::arith::{CycMatrix, CyclotomicNumber, Rational};
use cyclovhs::classify::{classify_pure, enumerate_pure_with_jobs, sint_check, PureVhsResult};
use cyclovhs::cover::{riemann_hurwitz_genus, CoverFamily};
use cyclovhs::cy::{
    borcea_voisin_hodge, nikulin_fixed_locus, yukawa_length, FixedLocusProfile, NikulinTriple, VhsExpression,
};
use cyclovhs::monodromy::{
    dehn_twist_matrix, exceptional_analysis, galois_conjugate, intertwiner_identity, twist_order, DehnTwist,
    LocalSystem, SummandKind, TwistOrder,
};
use cyclovhs::tables::{self, render_aligned};
use cyclovhs::{Error, Result};
use num_integer::Integer;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::Output;
use crate::Table;

fn parse_family(literal: &str) -> Result<CoverFamily> {
    literal.parse()
}

fn rat_json(q: &Rational) -> Value {
    Value::String(rational::render(q))
}

fn cyc_json(z: &CyclotomicNumber) -> Value {
    json!({ "coeffs": z.coeffs().iter().map(rat_json).collect::<Vec<_>>() })
}

pub fn matrix_json(m: &CycMatrix) -> Value {
    let entries: Vec<Value> = m
        .rows()
        .map(|row| Value::Array(row.iter().map(cyc_json).collect()))
        .collect();
    json!({ "order": m.order(), "dim": m.dim(), "entries": entries })
}

fn one_based(slots: &[usize]) -> Vec<usize> {
    slots.iter().map(|k| k + 1).collect()
}

fn joined<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn purity_json(result: &PureVhsResult) -> Value {
    match result {
        PureVhsResult::NotPure { obstruction } => {
            json!({ "tag": result.tag(), "obstruction": obstruction.to_string() })
        }
        PureVhsResult::Primitive { j0 } => json!({ "tag": result.tag(), "j0": j0 }),
        PureVhsResult::Derived { j0, r0, primitive } => json!({
            "tag": result.tag(),
            "j0": j0,
            "r0": r0,
            "quotient": primitive.to_string(),
            "quotient_canonical": primitive.canonical_form().to_string(),
        }),
    }
}

fn purity_text(result: &PureVhsResult) -> String {
    match result {
        PureVhsResult::NotPure { obstruction } => format!("not pure: {obstruction}"),
        PureVhsResult::Primitive { j0 } => format!("primitive (j0 = {j0})"),
        PureVhsResult::Derived { j0, r0, primitive } => {
            format!("derived (j0 = {j0}, r0 = {r0}, quotient {primitive})")
        }
    }
}

pub fn analyze(literal: &str) -> Result<Output> {
    let family = parse_family(literal)?;
    let profiles = family.eigenspace_profiles();
    let purity = classify_pure(&family)?;
    // SINT is read on the distinguished eigenspace when there is one.
    let sint_character = purity.distinguished_character().unwrap_or(1);
    let sint_profile = &profiles[sint_character as usize - 1];
    let sint = sint_check(&sint_profile.local_data)?;
    let witness = sint
        .violation
        .map(|(a, b)| [sint_profile.support[a] + 1, sint_profile.support[b] + 1]);
    let fermat = family.has_fermat_cm_fiber();

    let eigenspaces: Vec<Value> = profiles
        .iter()
        .map(|p| {
            json!({
                "j": p.character,
                "support": one_based(&p.support),
                "local_data": p.local_data.iter().map(rat_json).collect::<Vec<_>>(),
                "type": [p.hodge_p, p.hodge_q],
            })
        })
        .collect();
    let result = json!({
        "family": family.to_string(),
        "canonical": family.canonical_form().to_string(),
        "degree": family.degree(),
        "indices": family.indices(),
        "genus": family.genus(),
        "eigenspaces": eigenspaces,
        "purity": purity_json(&purity),
        "sint": {
            "character": sint_character,
            "holds": sint.holds(),
            "sum_is_two": sint.sum_is_two,
            "witness": witness,
        },
        "fermat_cm": fermat,
    });

    let rows: Vec<Vec<String>> = profiles
        .iter()
        .map(|p| {
            vec![
                p.character.to_string(),
                joined(one_based(&p.support), " "),
                joined(p.local_data.iter().map(rational::render), " "),
                format!("({},{})", p.hodge_p, p.hodge_q),
            ]
        })
        .collect();
    let sint_text = match (sint.holds(), witness) {
        (true, _) => format!("holds on character {sint_character}"),
        (false, Some([a, b])) => format!("fails on character {sint_character}, witness slots ({a},{b})"),
        (false, None) => format!("fails on character {sint_character}: data do not sum to 2"),
    };
    let text = format!(
        "family     {family}\ncanonical  {}\ngenus      {}\npurity     {}\nSINT       {sint_text}\nFermat CM  {}\n\n{}",
        family.canonical_form(),
        family.genus(),
        match purity.distinguished_character() {
            Some(j0) => {
                let (p, q) = profiles[j0 as usize - 1].hodge_type();
                format!("{}, type ({p},{q})", purity_text(&purity))
            }
            None => purity_text(&purity),
        },
        if fermat { "yes" } else { "no" },
        render_aligned(&["j", "support", "local data", "type"], &rows),
    );
    Ok(Output::new(json!({ "family": literal }), result, text))
}

pub fn classify(n: usize, m_max: u64, jobs: usize) -> Result<Output> {
    let found = enumerate_pure_with_jobs(n, m_max, jobs.max(1))?;
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for c in &found {
        let mut row = json!({
            "family": c.family.to_string(),
            "degree": c.family.degree(),
            "indices": c.family.indices(),
            "genus": c.family.genus(),
            "tag": c.result.tag(),
            "j0": c.result.distinguished_character(),
        });
        let mut r0_cell = String::new();
        if let PureVhsResult::Derived { r0, primitive, .. } = &c.result {
            row["r0"] = json!(r0);
            row["quotient"] = json!(primitive.canonical_form().to_string());
            r0_cell = r0.to_string();
        }
        rows.push(row);
        cells.push(vec![
            c.family.degree().to_string(),
            joined(c.family.indices(), " "),
            c.family.genus().to_string(),
            c.result.tag().to_string(),
            c.result
                .distinguished_character()
                .map(|j| j.to_string())
                .unwrap_or_default(),
            r0_cell,
        ]);
    }
    let count = |tag: &str| found.iter().filter(|c| c.result.tag() == tag).count();
    let result = json!({
        "rows": rows,
        "primitive_count": count("primitive"),
        "derived_count": count("derived"),
    });
    let text = format!(
        "pure (1,{n}) families with m <= {m_max}: {} primitive, {} derived\n\n{}",
        count("primitive"),
        count("derived"),
        render_aligned(&["degree", "indices", "genus", "tag", "j0", "r0"], &cells)
    );
    Ok(Output::new(
        json!({ "n": n, "m_max": m_max, "jobs": jobs }),
        result,
        text,
    ))
}

fn order_json(order: TwistOrder) -> Value {
    match order {
        TwistOrder::Finite(k) => json!(k),
        TwistOrder::Infinite => json!("infinite"),
    }
}

fn order_text(order: TwistOrder) -> String {
    match order {
        TwistOrder::Finite(k) => k.to_string(),
        TwistOrder::Infinite => "infinite".into(),
    }
}

pub fn monodromy(literal: &str, j: u64, twist: Option<usize>, restrict: bool) -> Result<Output> {
    let family = parse_family(literal)?;
    let profile = family.eigenspace_profile(j)?;
    let support = profile.support.clone();
    let full = profile.has_full_support(family.len());
    let mut warnings = Vec::new();
    if !full {
        if !restrict {
            return Err(Error::InvalidArgument(format!(
                "eigenspace j={j} of {family} is supported on slots {:?} only; pass --restrict to use that support",
                one_based(&support)
            )));
        }
        warnings.push(format!(
            "restricted to support slots {}",
            joined(one_based(&support), ",")
        ));
    }
    let system = LocalSystem::of_eigenspace(&family, j)?;
    let dim = system.dim();
    let twists: Vec<usize> = match twist {
        Some(0) => return Err(Error::InvalidArgument("twists are numbered from 1".into())),
        Some(ell) => vec![ell],
        None => (1..=dim).collect(),
    };
    if dim == 0 {
        warnings.push(format!("eigenspace j={j} is zero-dimensional"));
    }
    let mut entries = Vec::new();
    let mut text = format!("family {family}, character {j}, dimension {dim}\n");
    for ell in twists {
        let matrix = if full {
            dehn_twist_matrix(&family, j, DehnTwist::between(ell - 1))?
        } else {
            system.twist_matrix(DehnTwist::between(ell - 1))?
        };
        let (k1, k2) = (support[ell - 1], support[ell]);
        let order = twist_order(&family, j, k1, k2)?;
        text += &format!("T({},{}) = {matrix}  order {}\n", k1 + 1, k2 + 1, order_text(order));
        entries.push(json!({
            "ell": ell,
            "slots": [k1 + 1, k2 + 1],
            "matrix": matrix_json(&matrix),
            "det": cyc_json(&matrix.det()),
            "order": order_json(order),
        }));
    }
    let result =
        json!({ "family": family.to_string(), "j": j, "dim": dim, "support": one_based(&support), "twists": entries });
    let input = json!({ "family": literal, "j": j, "twist": twist, "restrict": restrict });
    let mut out = Output::new(input, result, text);
    out.warnings = warnings;
    Ok(out)
}

pub fn exceptional(literal: &str) -> Result<Output> {
    let family = parse_family(literal)?;
    let report = exceptional_analysis(&family)?;
    let mut records = Vec::new();
    let mut cells = Vec::new();
    for r in &report.involutions {
        let mut rec = json!({ "v": r.v, "t1": r.t1, "t2": r.t2 });
        let kind = match &r.kind {
            SummandKind::Separated => {
                rec["kind"] = json!("separated");
                "separated".to_string()
            }
            SummandKind::Neither => {
                rec["kind"] = json!("neither");
                "neither".to_string()
            }
            SummandKind::Complex { witness, system } => {
                rec["kind"] = json!("complex");
                rec["system"] = json!(system);
                rec["witness"] = json!(one_based(witness));
                if *system == 1 {
                    let reordered = CoverFamily::new(family.degree(), witness.map(|k| family.indices()[k]).to_vec())?;
                    let value = intertwiner_identity(&reordered, 1, r.v)?;
                    rec["intertwiner"] = json!(value.to_string());
                }
                format!("complex (system {system}, slots {})", joined(one_based(witness), ","))
            }
        };
        records.push(rec);
        cells.push(vec![r.v.to_string(), r.t1.to_string(), r.t2.to_string(), kind]);
    }
    let result = json!({
        "family": family.to_string(),
        "involutions": records,
        "complex": report.has_complex(),
        "separated": report.has_separated(),
    });
    let text = format!(
        "family {family}: complex {}, separated {}\n\n{}",
        if report.has_complex() { "yes" } else { "no" },
        if report.has_separated() { "yes" } else { "no" },
        render_aligned(&["v", "t1", "t2", "kind"], &cells)
    );
    let mut out = Output::new(json!({ "family": literal }), result, text);
    if report.involutions.is_empty() {
        out = out.warn(format!("no involutions other than +-1 modulo {}", family.degree()));
    }
    Ok(out)
}

pub fn bv(n: u64, n_prime: u64) -> Result<Output> {
    let h = borcea_voisin_hodge(FixedLocusProfile::new(n, n_prime))?;
    Ok(Output::new(
        json!({ "N": n, "N'": n_prime }),
        json!({ "h11": h.h11, "h21": h.h21 }),
        format!("h11 = {}\nh21 = {}\n", h.h11, h.h21),
    ))
}

pub fn nikulin(t: u64, a: u64, delta: u8) -> Result<Output> {
    let profile = nikulin_fixed_locus(NikulinTriple::new(t, a, delta)?)?;
    let h = borcea_voisin_hodge(profile)?;
    Ok(Output::new(
        json!({ "t": t, "a": a, "delta": delta }),
        json!({ "N": profile.curve_count, "N'": profile.genus_sum, "h11": h.h11, "h21": h.h21 }),
        format!(
            "N = {}\nN' = {}\nh11 = {}\nh21 = {}\n",
            profile.curve_count, profile.genus_sum, h.h11, h.h21
        ),
    ))
}

pub fn yukawa(literal: &str) -> Result<Output> {
    let e: VhsExpression = literal.parse()?;
    let zeta = yukawa_length(&e);
    Ok(Output::new(
        json!({ "expression": literal }),
        json!({ "expression": e.to_string(), "zeta": zeta }),
        format!("{e}\nzeta = {zeta}\n"),
    ))
}

pub fn tables(which: Table, jobs: usize) -> Result<Output> {
    let (name, result, text) = match which {
        Table::Ch10 => {
            let rows = tables::borcea_voisin_table()?;
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "family": r.family, "basis": r.basis, "involution": r.involution,
                        "N": r.profile.curve_count, "N'": r.profile.genus_sum,
                        "h11": r.hodge.h11, "h21": r.hodge.h21, "zeta": r.zeta,
                    })
                })
                .collect();
            (
                "ch10",
                json!({ "rows": json_rows }),
                tables::render_borcea_voisin(&rows),
            )
        }
        Table::Ch11 => {
            let rows = tables::nikulin_table()?;
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "t": r.triple.t(), "a": r.triple.a(), "delta": r.triple.delta(),
                        "N": r.profile.curve_count, "h11": r.hodge.h11, "h21": r.hodge.h21,
                    })
                })
                .collect();
            ("ch11", json!({ "rows": json_rows }), tables::render_nikulin(&rows))
        }
        Table::Classification => {
            let t = tables::classification_tables(jobs.max(1))?;
            let primitive = |rows: &[tables::PrimitiveRow]| -> Vec<Value> {
                rows.iter()
                    .map(|r| {
                        json!({
                            "number": r.number, "n": r.n, "degree": r.family.degree(),
                            "indices": r.family.indices(), "genus": r.genus,
                        })
                    })
                    .collect()
            };
            let derived: Vec<Value> = t
                .derived_rank_one
                .iter()
                .map(|r| {
                    json!({
                        "degree": r.family.degree(), "indices": r.family.indices(), "genus": r.genus,
                        "r0": r.r0, "N_r0": r.quotient_number,
                    })
                })
                .collect();
            let result = json!({
                "primitive_rank_one": primitive(&t.primitive_rank_one),
                "derived_rank_one": derived,
                "primitive_higher_rank": primitive(&t.primitive_higher_rank),
            });
            ("classification", result, tables::render_classification(&t))
        }
    };
    Ok(Output::new(json!({ "table": name }), result, text))
}

fn random_family(rng: &mut impl Rng, m_max: u64, n_max: usize) -> CoverFamily {
    loop {
        let m = rng.gen_range(2..=m_max);
        let n = rng.gen_range(4..=n_max);
        let mut d: Vec<u64> = (0..n - 1).map(|_| rng.gen_range(1..m)).collect();
        let last = (m - d.iter().sum::<u64>() % m) % m;
        if last == 0 || d.iter().fold(m.gcd(&last), |g, x| g.gcd(x)) != 1 {
            continue;
        }
        d.push(last);
        if let Ok(f) = CoverFamily::new(m, d) {
            return f;
        }
    }
}

#[derive(Default)]
struct Tally {
    passed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(what());
        }
    }

    fn json(&self) -> Value {
        json!({ "passed": self.passed, "failed": self.failures.len(), "failures": self.failures.iter().take(5).collect::<Vec<_>>() })
    }
}

pub fn selfcheck(seed: u64, samples: usize) -> Result<Output> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut genus, mut conjugation, mut galois) = (Tally::default(), Tally::default(), Tally::default());
    for _ in 0..samples {
        let f = random_family(&mut rng, 40, 9);
        genus.check(f.genus() == riemann_hurwitz_genus(&f), || format!("genus of {f}"));
        let m = f.degree();
        let j = rng.gen_range(1..m);
        let (p, q) = f.eigenspace_profile(j)?.hodge_type();
        conjugation.check(f.eigenspace_profile(m - j)?.hodge_type() == (q, p), || {
            format!("{f} j={j}")
        });

        let g = random_family(&mut rng, 24, 6);
        let m = g.degree();
        let full: Vec<u64> = (1..m)
            .filter(|&j| g.twisted_indices(j).iter().all(|&e| e != 0))
            .collect();
        let j = full[rng.gen_range(0..full.len())];
        let us: Vec<u64> = units(m).collect();
        let v = us[rng.gen_range(0..us.len())];
        let ell = rng.gen_range(0..g.len() - 2);
        let t = dehn_twist_matrix(&g, j, DehnTwist::between(ell))?;
        let conj = dehn_twist_matrix(&g, j * v % m, DehnTwist::between(ell))?;
        galois.check(galois_conjugate(&t, v)? == conj, || {
            format!("{g} j={j} v={v} twist {}", ell + 1)
        });
    }
    let failed = [&genus, &conjugation, &galois].iter().any(|t| !t.failures.is_empty());
    let result = json!({
        "genus_vs_riemann_hurwitz": genus.json(),
        "conjugate_types": conjugation.json(),
        "galois_equivariance": galois.json(),
        "ok": !failed,
    });
    let line = |name: &str, t: &Tally| format!("{name:<26} {} passed, {} failed\n", t.passed, t.failures.len());
    let text = line("genus vs Riemann-Hurwitz", &genus)
        + &line("conjugate types", &conjugation)
        + &line("Galois equivariance", &galois);
    let mut out = Output::new(json!({ "seed": seed, "samples": samples }), result, text);
    out.failed = failed;
    Ok(out)
}
