//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use cyclovhs::arith::residue::{nontrivial_involutions, units};
use cyclovhs::arith::{cyc_root, CycMatrix, CyclotomicNumber};
use cyclovhs::classify::sint_check;
use cyclovhs::cover::{riemann_hurwitz_genus, CoverFamily};
use cyclovhs::cy::{yukawa_length, VhsExpression};
use cyclovhs::monodromy::{
    dehn_twist_matrix, exceptional_analysis, galois_conjugate, intertwiner_identity, separated_by_pair_sums,
    separated_closed_form, t1, t2, DehnTwist, SummandKind,
};
use num_integer::Integer;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

/// Wall-clock limits, measured around the CLI process.
const RANK_ONE_LIMIT: Duration = Duration::from_secs(10);
const HIGHER_RANK_LIMIT: Duration = Duration::from_secs(60);
const SEED: u64 = 20_240_601;
const RANDOM_GENUS_SAMPLES: usize = 10_000;
const GALOIS_FAMILIES: usize = 100;
const YUKAWA_TREES: usize = 1_000;

const RANK_ONE_PRIMITIVE: [(&str, u64); 11] = [
    ("2:1,1,1,1", 1),
    ("3:1,1,2,2", 2),
    ("4:1,2,2,3", 2),
    ("5:1,3,3,3", 4),
    ("6:1,3,4,4", 3),
    ("6:2,3,3,4", 2),
    ("7:2,4,4,4", 6),
    ("8:2,4,5,5", 5),
    ("9:3,5,5,5", 7),
    ("10:3,5,6,6", 6),
    ("12:4,6,7,7", 7),
];
const RANK_ONE_DERIVED: [(&str, u64); 3] = [("4:1,1,1,1", 3), ("6:1,1,1,3", 4), ("6:1,1,2,2", 4)];
const HIGHER_RANK_PRIMITIVE: [(&str, u64); 5] = [
    ("3:2,1,1,1,1", 3),
    ("4:2,2,2,1,1", 3),
    ("5:2,2,2,2,2", 6),
    ("6:2,2,2,3,3", 4),
    ("3:1,1,1,1,1,1", 4),
];

/// (N, N', h11, h21, zeta) as printed for the K3 times elliptic curve quotients.
const CH10_ROWS: [(u64, u64, u64, u64, u64); 11] = [
    (1, 3, 13, 25, 2),
    (1, 3, 13, 25, 2),
    (1, 3, 13, 25, 2),
    (2, 2, 19, 19, 2),
    (2, 2, 19, 19, 2),
    (8, 0, 51, 3, 2),
    (2, 2, 19, 19, 2),
    (2, 2, 19, 19, 2),
    (8, 0, 51, 3, 2),
    (2, 4, 17, 29, 2),
    (2, 4, 17, 29, 2),
];
/// (t, a, delta, N, h11, h21) as printed for the Nikulin involutions.
const CH11_ROWS: [(u64, u64, u64, u64, u64, u64); 12] = [
    (10, 10, 0, 0, 11, 11),
    (11, 11, 1, 1, 16, 10),
    (12, 10, 1, 2, 21, 9),
    (13, 9, 1, 3, 26, 8),
    (14, 8, 1, 4, 31, 7),
    (15, 7, 1, 5, 36, 6),
    (16, 6, 1, 6, 41, 5),
    (17, 5, 1, 7, 46, 4),
    (18, 4, 1, 8, 51, 3),
    (18, 4, 0, 8, 51, 3),
    (19, 3, 1, 9, 56, 2),
    (20, 2, 1, 10, 61, 1),
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn cli(args: &[&str]) -> Result<(String, Duration), String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_cyclovhs"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot run cli: {e}"))?;
    let elapsed = start.elapsed();
    ensure!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    Ok((String::from_utf8(out.stdout).map_err(|e| e.to_string())?, elapsed))
}

fn cli_json(args: &[&str]) -> Result<(Value, Duration), String> {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (text, elapsed) = cli(&full)?;
    Ok((serde_json::from_str(&text).map_err(|e| e.to_string())?, elapsed))
}

fn fam(s: &str) -> CoverFamily {
    s.parse().expect("literal is valid")
}

fn canonical_set(list: &[(&str, u64)]) -> BTreeSet<String> {
    list.iter().map(|(s, _)| fam(s).canonical_form().to_string()).collect()
}

/// (primitive, derived) canonical families reported by `classify`.
fn classify(n: usize, m_max: u64) -> Result<(Vec<String>, Vec<String>, Duration), String> {
    let (report, elapsed) = cli_json(&[
        "classify",
        "--n",
        &n.to_string(),
        "--m-max",
        &m_max.to_string(),
        "--jobs",
        "1",
    ])?;
    let rows = report["result"]["rows"].as_array().ok_or("rows missing")?;
    let pick = |tag: &str| -> Vec<String> {
        rows.iter()
            .filter(|r| r["tag"] == tag)
            .map(|r| fam(r["family"].as_str().unwrap()).canonical_form().to_string())
            .collect()
    };
    Ok((pick("primitive"), pick("derived"), elapsed))
}

fn as_set(v: &[String]) -> Result<BTreeSet<String>, String> {
    let set: BTreeSet<String> = v.iter().cloned().collect();
    ensure!(set.len() == v.len(), "duplicate classes in {v:?}");
    Ok(set)
}

fn criterion_1() -> Outcome {
    let (primitive, derived, elapsed) = classify(1, 30)?;
    ensure!(elapsed < RANK_ONE_LIMIT, "took {elapsed:?}");
    ensure!(
        as_set(&primitive)? == canonical_set(&RANK_ONE_PRIMITIVE),
        "primitive classes {primitive:?}"
    );
    ensure!(
        as_set(&derived)? == canonical_set(&RANK_ONE_DERIVED),
        "derived classes {derived:?}"
    );
    Ok(format!("11 primitive + 3 derived classes for m <= 30 in {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let (p2, d2, e2) = classify(2, 12)?;
    let (p3, d3, e3) = classify(3, 12)?;
    let (p4, d4, e4) = classify(4, 12)?;
    let elapsed = e2 + e3 + e4;
    ensure!(elapsed < HIGHER_RANK_LIMIT, "took {elapsed:?}");
    let primitive: Vec<String> = p2.into_iter().chain(p3).collect();
    ensure!(
        as_set(&primitive)? == canonical_set(&HIGHER_RANK_PRIMITIVE),
        "primitive classes {primitive:?}"
    );
    ensure!(d2.is_empty() && d3.is_empty(), "derived classes {d2:?} {d3:?}");
    ensure!(p4.is_empty() && d4.is_empty(), "n = 4 classes {p4:?} {d4:?}");
    ensure!(
        fam("6:2,2,2,3,3").genus() == 4,
        "corrected degree-6 tuple has wrong genus"
    );
    Ok(format!(
        "5 primitive classes for n = 2, 3, none for n = 4, in {elapsed:.2?}"
    ))
}

fn random_family(rng: &mut impl Rng, m_max: u64, n_max: usize) -> CoverFamily {
    loop {
        let m = rng.gen_range(2..=m_max);
        let n = rng.gen_range(4..=n_max);
        let mut d: Vec<u64> = (0..n - 1).map(|_| rng.gen_range(1..m)).collect();
        let last = (m - d.iter().sum::<u64>() % m) % m;
        d.push(last);
        if last != 0 && d.iter().fold(m, |g, x| g.gcd(x)) == 1 {
            return CoverFamily::new(m, d).expect("valid by construction");
        }
    }
}

fn criterion_3() -> Outcome {
    let printed = RANK_ONE_PRIMITIVE
        .iter()
        .chain(&RANK_ONE_DERIVED)
        .chain(&HIGHER_RANK_PRIMITIVE);
    for (literal, genus) in printed {
        ensure!(
            fam(literal).genus() == *genus,
            "{literal}: genus {} != {genus}",
            fam(literal).genus()
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..RANDOM_GENUS_SAMPLES {
        let f = random_family(&mut rng, 40, 9);
        ensure!(
            f.genus() == riemann_hurwitz_genus(&f),
            "{f}: {} vs {}",
            f.genus(),
            riemann_hurwitz_genus(&f)
        );
    }
    Ok(format!(
        "19 printed genera; Hodge genus = Riemann-Hurwitz on {RANDOM_GENUS_SAMPLES} random families"
    ))
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    for (n, m_max) in [(1, 30), (2, 12), (3, 12)] {
        let (report, _) = cli_json(&["classify", "--n", &n.to_string(), "--m-max", &m_max.to_string()])?;
        for row in report["result"]["rows"].as_array().ok_or("rows missing")? {
            if row["tag"] != "primitive" {
                continue;
            }
            let f = fam(row["family"].as_str().unwrap());
            let j0 = row["j0"].as_u64().ok_or("j0 missing")?;
            let profile = f.eigenspace_profile(j0).map_err(|e| e.to_string())?;
            let verdict = sint_check(&profile.local_data).map_err(|e| e.to_string())?;
            ensure!(verdict.holds(), "{f} fails SINT on j0={j0}: {verdict:?}");
            checked += 1;
        }
    }
    ensure!(checked == 16, "expected 16 primitive families, saw {checked}");
    let verdict = sint_check(&fam("5:1,1,4,4").local_data()).map_err(|e| e.to_string())?;
    ensure!(
        verdict.violation == Some((0, 1)),
        "5:1,1,4,4 witness {:?}",
        verdict.violation
    );
    let (report, _) = cli_json(&["analyze", "5:1,1,4,4"])?;
    ensure!(
        report["result"]["sint"]["witness"] == serde_json::json!([1, 2]),
        "cli witness"
    );
    Ok(format!(
        "{checked} primitive families satisfy SINT; 5:1,1,4,4 fails at slots (1,2)"
    ))
}

fn matrix(m: u64, rows: Vec<Vec<CyclotomicNumber>>) -> CycMatrix {
    CycMatrix::from_rows(m, rows).expect("square")
}

fn criterion_5() -> Outcome {
    let f = fam("12:5,1,11,7");
    let m = 12;
    let [d1, d2, d3, _] = [5i64, 1, 11, 7];
    let one = CyclotomicNumber::one(m);
    let zero = CyclotomicNumber::zero(m);
    let xi = |e: i64| cyc_root(m, e);
    for j in units(m) {
        let j_ = j as i64;
        let t12 = matrix(
            m,
            vec![
                vec![xi(j_ * (d1 + d2)), &one - &xi(j_ * d1)],
                vec![zero.clone(), one.clone()],
            ],
        );
        let t23 = matrix(
            m,
            vec![
                vec![one.clone(), zero.clone()],
                vec![&xi(j_ * d2) - &xi(j_ * (d2 + d3)), xi(j_ * (d2 + d3))],
            ],
        );
        for (ell, expected) in [(0, t12), (1, t23)] {
            let got = dehn_twist_matrix(&f, j, DehnTwist::between(ell)).map_err(|e| e.to_string())?;
            ensure!(got == expected, "j={j} twist {}: {got} != {expected}", ell + 1);
        }
        let value = intertwiner_identity(&f, j, 5).map_err(|e| e.to_string())?;
        ensure!(value.is_one(), "intertwiner j={j}, v=5 is {value}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut families = 0;
    while families < GALOIS_FAMILIES {
        let g = random_family(&mut rng, 24, 6);
        let m = g.degree();
        let full: Vec<u64> = (1..m)
            .filter(|&j| g.twisted_indices(j).iter().all(|&e| e != 0))
            .collect();
        let j = full[rng.gen_range(0..full.len())];
        for ell in 0..g.len() - 2 {
            let t = dehn_twist_matrix(&g, j, DehnTwist::between(ell)).map_err(|e| e.to_string())?;
            for v in units(m) {
                let lhs = galois_conjugate(&t, v).map_err(|e| e.to_string())?;
                let rhs = dehn_twist_matrix(&g, j * v % m, DehnTwist::between(ell)).map_err(|e| e.to_string())?;
                ensure!(lhs == rhs, "{g} j={j} v={v} twist {}", ell + 1);
            }
        }
        families += 1;
    }
    Ok(format!(
        "closed forms for 4 units x 2 twists; intertwiner = 1; Galois equivariance on {families} families"
    ))
}

fn criterion_6() -> Outcome {
    let report = exceptional_analysis(&fam("12:5,1,11,7")).map_err(|e| e.to_string())?;
    let v5 = report.record(5).ok_or("v=5 missing")?;
    ensure!(
        matches!(v5.kind, SummandKind::Complex { .. }) && (v5.t1, v5.t2) == (3, 2),
        "v=5: {v5:?}"
    );
    let v7 = report.record(7).ok_or("v=7 missing")?;
    ensure!(v7.kind == SummandKind::Separated && v7.t1 == 2, "v=7: {v7:?}");
    let both = exceptional_analysis(&fam("12:11,1,11,1")).map_err(|e| e.to_string())?;
    ensure!(both.has_complex() && both.has_separated(), "12:11,1,11,1: {both:?}");

    let mut tuples = 0u64;
    for m in 3..=48u64 {
        let involutions: Vec<u64> = nontrivial_involutions(m).collect();
        for a in 1..m {
            for b in 1..m {
                for c in 1..m {
                    let d = (3 * m - a - b - c) % m;
                    let Ok(f) = CoverFamily::new(m, vec![a, b, c, d]) else {
                        continue;
                    };
                    tuples += 1;
                    for &v in &involutions {
                        ensure!(
                            separated_closed_form(&f, v) == separated_by_pair_sums(&f, v),
                            "{f} v={v}"
                        );
                    }
                }
            }
        }
    }
    let mut involution_count = 0;
    for m in 3..=200u64 {
        for v in nontrivial_involutions(m) {
            let prod = t1(m, v) * t2(m, v);
            ensure!(prod == m || 2 * prod == m, "m={m} v={v}: t1 t2 = {prod}");
            ensure!(m % 2 == 0 || prod == m, "odd m={m} v={v}: t1 t2 = {prod}");
            ensure!(m % 4 != 2 || 2 * prod == m, "m={m} v={v}: t1 t2 = {prod}");
            involution_count += 1;
        }
    }
    Ok(format!(
        "reference kinds; separated criteria agree on {tuples} tuples; t1 t2 in {{m, m/2}} on {involution_count} involutions"
    ))
}

fn criterion_7() -> Outcome {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    for which in ["ch10", "ch11"] {
        let golden = std::fs::read_to_string(fixtures.join(format!("{which}.txt"))).map_err(|e| e.to_string())?;
        let (text, _) = cli(&["tables", which])?;
        ensure!(text == golden, "{which} differs from its golden file");
    }
    let (ch10, _) = cli_json(&["tables", "ch10"])?;
    let rows = ch10["result"]["rows"].as_array().ok_or("rows missing")?;
    ensure!(rows.len() == CH10_ROWS.len(), "ch10 has {} rows", rows.len());
    for (row, &(n, n_prime, h11, h21, zeta)) in rows.iter().zip(&CH10_ROWS) {
        let got = [&row["N"], &row["N'"], &row["h11"], &row["h21"], &row["zeta"]].map(|v| v.as_u64());
        ensure!(got == [n, n_prime, h11, h21, zeta].map(Some), "ch10 row {row}");
    }
    let (ch11, _) = cli_json(&["tables", "ch11"])?;
    let rows = ch11["result"]["rows"].as_array().ok_or("rows missing")?;
    ensure!(rows.len() == CH11_ROWS.len(), "ch11 has {} rows", rows.len());
    for (row, &(t, a, delta, n, h11, h21)) in rows.iter().zip(&CH11_ROWS) {
        let got = [&row["t"], &row["a"], &row["delta"], &row["N"], &row["h11"], &row["h21"]].map(|v| v.as_u64());
        ensure!(got == [t, a, delta, n, h11, h21].map(Some), "ch11 row {row}");
    }
    for (args, expected) in [
        (vec!["bv", "1", "3"], (13, 25)),
        (vec!["bv", "2", "4"], (17, 29)),
        (vec!["bv", "8", "0"], (51, 3)),
        (vec!["nikulin", "10", "10", "0"], (11, 11)),
        (vec!["nikulin", "20", "2", "1"], (61, 1)),
    ] {
        let (r, _) = cli_json(&args)?;
        let got = (r["result"]["h11"].as_u64(), r["result"]["h21"].as_u64());
        ensure!(got == (Some(expected.0), Some(expected.1)), "{args:?}: {got:?}");
    }
    Ok("11 + 12 rows match golden files and reference values; 5 spot values".into())
}

fn random_tree(rng: &mut impl Rng, depth: u32) -> VhsExpression {
    if depth == 0 || rng.gen_bool(0.3) {
        return VhsExpression::leaf(rng.gen_range(0..5));
    }
    let children = (0..rng.gen_range(1..4)).map(|_| random_tree(rng, depth - 1)).collect();
    if rng.gen_bool(0.5) {
        VhsExpression::Tensor(children)
    } else {
        VhsExpression::DirectSum(children)
    }
}

fn shuffled(e: &VhsExpression, rng: &mut impl Rng) -> VhsExpression {
    use rand::seq::SliceRandom;
    let mut kids: Vec<VhsExpression> = e.children().iter().map(|c| shuffled(c, rng)).collect();
    kids.shuffle(rng);
    match e {
        VhsExpression::Leaf { .. } => e.clone(),
        VhsExpression::Tensor(_) => VhsExpression::Tensor(kids),
        VhsExpression::DirectSum(_) => VhsExpression::DirectSum(kids),
    }
}

fn criterion_8() -> Outcome {
    for (expr, zeta) in [
        ("tensor(leaf 1, leaf 1)", 2),
        ("tensor(leaf 1, leaf 1, leaf 1)", 3),
        ("sum(leaf 1, tensor(leaf 1, leaf 0))", 1),
    ] {
        let (r, _) = cli_json(&["yukawa", expr])?;
        ensure!(r["result"]["zeta"] == zeta, "{expr}: {}", r["result"]["zeta"]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    for _ in 0..YUKAWA_TREES {
        let e = random_tree(&mut rng, 5);
        let z = yukawa_length(&e);
        ensure!(yukawa_length(&shuffled(&e, &mut rng)) == z, "reorder changes {e}");
        ensure!(yukawa_length(&e.flatten()) == z, "flatten changes {e}");
    }
    Ok(format!(
        "three reference lengths; reorder and flatten laws on {YUKAWA_TREES} random trees"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("classification (1,1)", criterion_1),
        ("classification (1,n), n >= 2", criterion_2),
        ("genus column", criterion_3),
        ("SINT", criterion_4),
        ("monodromy closed forms", criterion_5),
        ("exceptional analysis", criterion_6),
        ("Calabi-Yau tables", criterion_7),
        ("Yukawa calculus", criterion_8),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
