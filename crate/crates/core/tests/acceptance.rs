//! End-to-end acceptance checks for the `K ≤ 4` catalog. Runs without the
//! libtest harness so that every criterion prints one status line.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hharm6_core::build::{harmonic_dimension, harmonic_subspace, Builder, Catalog};
use hharm6_core::golden::{self, Table1Row};
use hharm6_core::matel::{self, overlap, sphere_moment, table_report, MatrixElementRow, OperatorLabel, TripleKernel};
use hharm6_core::ops;
use hharm6_core::perm::{check_permutation_law, symmetry_adapt, verify_s3_action, SymHarmonic};
use hharm6_core::{ExactCoeff, Harmonic};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const K_MAX: u32 = 4;

type Outcome = Result<String, String>;

struct Context {
    catalog: Catalog,
    build_time: Duration,
    states: Vec<SymHarmonic>,
    /// `(operator, its symmetric state, non-zero same-K rows in table units)`.
    reports: Vec<(OperatorLabel, SymHarmonic, Vec<MatrixElementRow>)>,
}

fn table_ops() -> Vec<OperatorLabel> {
    golden::golden_data().operators.iter().map(|s| OperatorLabel::parse(s).expect("operator column")).collect()
}

fn context() -> Context {
    let start = Instant::now();
    let builder = Builder::default();
    let catalog = builder.build_catalog(K_MAX).expect("catalog builds");
    let build_time = start.elapsed();
    let states = symmetry_adapt(&catalog).expect("symmetry adaptation");
    let reports = table_ops()
        .into_iter()
        .map(|op| {
            let sym = matel::operator_harmonic(&builder, op).expect("operator harmonic");
            let rows = table_report(&states, &sym, &op.table_scale()).expect("matrix elements");
            (op, sym, rows)
        })
        .collect();
    Context { catalog, build_time, states, reports }
}

fn check(ok: bool, what: impl Into<String>, detail: impl Into<String>) -> Outcome {
    if ok {
        Ok(what.into())
    } else {
        Err(detail.into())
    }
}

fn dimensions(ctx: &Context) -> Outcome {
    for k in 0..=K_MAX {
        let expected = harmonic_dimension(k);
        let kernel = harmonic_subspace(k).map_err(|e| e.to_string())?.len();
        let built = ctx.catalog.degree(k).count();
        if kernel != expected || built != expected {
            return Err(format!("K={k}: binomial {expected}, kernel rank {kernel}, catalog {built}"));
        }
    }
    Ok("1, 6, 20, 50, 105".into())
}

fn golden_reproduction(ctx: &Context) -> Outcome {
    let matches = golden::match_against_built(&ctx.catalog).map_err(|e| e.to_string())?;
    let failed: Vec<String> = matches.iter().filter(|m| !m.passed()).map(|m| format!("{} overlap {}", m.label, m.overlap)).collect();
    if matches.len() != 23 || !failed.is_empty() {
        return Err(format!("{} entries, failures: {failed:?}", matches.len()));
    }
    let reps = ctx.catalog.entries.iter().filter(|h| h.label.q >= 0 && h.label.m == h.label.l as i32).count();
    if reps != matches.len() {
        return Err(format!("catalog has {reps} Q >= 0, m = L states but the reference list has {}", matches.len()));
    }
    let secs = ctx.build_time.as_secs_f64();
    check(secs < 10.0, format!("23/23 overlaps exactly 1; build {secs:.2} s"), format!("build took {secs:.2} s"))
}

fn eigen_suite(ctx: &Context) -> Outcome {
    let failures: Vec<String> = ctx
        .catalog
        .entries
        .par_iter()
        .flat_map_iter(|h| {
            let p = &h.numerator;
            let lb = &h.label;
            let l = lb.l as i64;
            let checks: Vec<(&str, hharm6_core::Result<bool>)> = vec![
                ("Laplacian", ops::apply_laplacian(p).map(|r| r.is_zero())),
                ("Q", ops::apply_democracy(p).and_then(|r| Ok(r == p.scale(&ExactCoeff::from_int(lb.q as i64))?))),
                ("L^2", ops::apply_l_squared(p).and_then(|r| Ok(r == p.scale(&ExactCoeff::from_int(l * (l + 1)))?))),
                ("L_3", ops::apply_l3(p).and_then(|r| Ok(r == p.scale(&ExactCoeff::from_int(lb.m as i64))?))),
                ("V_LQL", ops::apply_vlql(p).and_then(|r| Ok(r == p.scale(&lb.nu)?))),
            ];
            checks.into_iter().filter(|(_, r)| !matches!(r, Ok(true))).map(move |(name, _)| format!("{name} on {lb}")).collect::<Vec<_>>()
        })
        .collect();
    check(failures.is_empty(), format!("{} states x 5 operators, zero residual", ctx.catalog.len()), format!("{failures:?}"))
}

fn gram(ctx: &Context) -> Outcome {
    let e: &[Harmonic] = &ctx.catalog.entries;
    let bad: Vec<String> = (0..e.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            (i..e.len()).filter_map(move |j| {
                let raw = overlap(&e[i].numerator, &e[j].numerator).ok()?;
                let ok = if i == j { raw == e[i].norm_sq_raw } else { raw.is_zero() };
                (!ok).then(|| format!("<{}|{}> = {raw}", e[i].label, e[j].label))
            })
        })
        .collect();
    if e.len() != 182 {
        return Err(format!("{} states instead of 182", e.len()));
    }
    check(bad.is_empty(), "182 x 182 Gram matrix is the identity", format!("{} bad entries, first {:?}", bad.len(), bad.first()))
}

fn permutation_law(ctx: &Context) -> Outcome {
    let law = check_permutation_law(&ctx.catalog).map_err(|e| e.to_string())?;
    let s3 = verify_s3_action(&ctx.states).map_err(|e| e.to_string())?;
    if !law.is_empty() || !s3.passed() {
        return Err(format!("law failures {:?}; S3 failures {:?}", law.first(), s3.failures.first()));
    }
    Ok(format!("{} states x 3 transpositions; {} mixed pairs obey P12 P23 P12 = P31", ctx.catalog.len(), s3.mixed_pairs_checked))
}

fn row_signs(row: &Table1Row) -> Vec<i8> {
    row.signs.chars().map(|c| if c == '+' { 1 } else { -1 }).collect()
}

fn row_states<'a>(ctx: &'a Context, row: &Table1Row, sign: i8) -> Vec<&'a SymHarmonic> {
    let nu = ExactCoeff::parse_real(&row.nu).expect("table ν");
    ctx.states.iter().filter(|s| s.k == row.k && s.abs_q == row.abs_q && s.l == row.l && s.nu == nu && s.sign == sign).collect()
}

fn classification(ctx: &Context) -> Outcome {
    let mut bad = Vec::new();
    for row in &golden::golden_data().table1 {
        for sign in row_signs(row) {
            let found = row_states(ctx, row, sign);
            if found.len() != 2 * row.l as usize + 1 || found.iter().any(|s| s.su6_label() != row.tag) {
                bad.push(format!("{} {}: {:?}", row.tag, sign, found.first().map(|s| s.su6_label())));
            }
        }
    }
    check(bad.is_empty(), "all 23 rows carry their SU(6) tag", format!("{bad:?}"))
}

/// `(bra row label, ket row label, m) -> value` for one operator.
fn element_map(rows: &[MatrixElementRow]) -> BTreeMap<(String, String, i32, i32), ExactCoeff> {
    rows.iter().map(|r| ((r.bra.clone(), r.ket.clone(), r.bra_m, r.ket_m), r.value.clone())).collect()
}

fn table1(ctx: &Context) -> Outcome {
    let mut bad = Vec::new();
    let mut compared = 0;
    for (col, (op, _, rows)) in ctx.reports.iter().enumerate() {
        let map = element_map(rows);
        for row in &golden::golden_data().table1 {
            let expected = ExactCoeff::parse_real(&row.values[col]).map_err(|e| e.to_string())?;
            for sign in row_signs(row) {
                let Some(s) = row_states(ctx, row, sign).into_iter().find(|s| s.m == s.l as i32) else {
                    bad.push(format!("{} missing", row.tag));
                    continue;
                };
                let got = map.get(&(s.row_label(), s.row_label(), s.m, s.m)).cloned().unwrap_or_else(ExactCoeff::zero);
                compared += 1;
                if got != expected && (got.to_f64() - expected.to_f64()).abs() > 1e-12 {
                    bad.push(format!("{} {} under {op}: got {got}, table {expected}", s.row_label(), row.tag));
                }
            }
        }
    }
    check(bad.is_empty(), format!("{compared} diagonal elements match (23 rows x 3 columns)"), format!("{bad:?}"))
}

fn tag_matches(pattern: &str, tag: &str) -> bool {
    match pattern.split_once(",L") {
        Some((family, parity)) => tag.starts_with(&format!("{family},")) && tag.ends_with(parity),
        None => pattern == tag,
    }
}

fn table2(ctx: &Context) -> Outcome {
    let mut bad = Vec::new();
    let mut compared = 0;
    for row in &golden::golden_data().table2 {
        let op = OperatorLabel::parse(&row.op).map_err(|e| e.to_string())?;
        let (_, _, rows) = ctx.reports.iter().find(|(o, _, _)| *o == op).ok_or("operator column missing")?;
        let expected = ExactCoeff::parse_real(&row.value).map_err(|e| e.to_string())?;
        if expected.is_zero() {
            // no non-zero element between the listed families
            for r in rows.iter().filter(|r| r.k == row.k && tag_matches(&row.bra, &r.bra_tag) && tag_matches(&row.ket, &r.ket_tag)) {
                bad.push(format!("{} {} -> {} should vanish, got {}", r.bra_tag, r.bra, r.ket, r.value));
            }
            compared += 1;
            continue;
        }
        let hits: Vec<&MatrixElementRow> = rows.iter().filter(|r| r.k == row.k && r.bra_tag == row.bra && r.ket_tag == row.ket).collect();
        if hits.is_empty() {
            bad.push(format!("{} -> {} missing", row.bra, row.ket));
        }
        for r in hits {
            compared += 1;
            if r.value != expected {
                bad.push(format!("{} -> {} ({} m={}): got {}, table {expected}", row.bra, row.ket, r.bra, r.bra_m, r.value));
            }
        }
    }
    check(bad.is_empty(), format!("{compared} off-diagonal checks, signed"), format!("{bad:?}"))
}

fn m_independence(ctx: &Context) -> Outcome {
    let mut bad = Vec::new();
    for (op, _, rows) in &ctx.reports {
        let mut per_row: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for r in rows.iter().filter(|r| r.bra == r.ket && r.bra_m == r.ket_m) {
            per_row.entry(r.bra.clone()).or_default().insert(r.value.to_string());
            *counts.entry(r.bra.clone()).or_default() += 1;
        }
        for (label, values) in &per_row {
            let l: i32 = label.split(',').nth(2).and_then(|x| x.parse().ok()).unwrap_or(-1);
            if values.len() != 1 || counts[label] != (2 * l + 1) as usize {
                bad.push(format!("{label} under {op}: {values:?} over {} projections", counts[label]));
            }
        }
    }
    check(bad.is_empty(), "every diagonal element is the same for all m", format!("{bad:?}"))
}

fn selection_rule(ctx: &Context) -> Outcome {
    // catalog basis: every bra, ket pair with K <= 4, against both charge components of each operator
    let builder = Builder::default();
    let mut violations = Vec::new();
    let mut nonzero = 0usize;
    for op in table_ops() {
        let reps = builder.highest_weight_harmonics(op.k, op.abs_q as i32, 0).map_err(|e| e.to_string())?;
        let mut comps = reps.clone();
        if op.abs_q != 0 {
            comps.push(hharm6_core::build::reflected_partner(&reps[0]).map_err(|e| e.to_string())?);
        }
        for o in &comps {
            for kb in 0..=K_MAX {
                for kk in 0..=K_MAX {
                    if (kb + kk + op.k) % 2 == 1 {
                        continue;
                    }
                    let kernel = TripleKernel::between(&o.numerator, kb, kk).map_err(|e| e.to_string())?;
                    let kets: Vec<&Harmonic> = ctx.catalog.degree(kk).collect();
                    let ys: Vec<Vec<ExactCoeff>> = kets.par_iter().map(|h| kernel.apply(&h.numerator)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
                    for bra in ctx.catalog.degree(kb) {
                        for (ket, y) in kets.iter().zip(&ys) {
                            let v = kernel.contract(&bra.numerator, y).map_err(|e| e.to_string())?;
                            if v.is_zero() {
                                continue;
                            }
                            nonzero += 1;
                            if bra.label.q != o.label.q + ket.label.q || bra.label.m != o.label.m + ket.label.m {
                                violations.push(format!("<{}|{}|{}>", bra.label, o.label, ket.label));
                            }
                        }
                    }
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(format!("{} selection-rule violations, first {:?}", violations.len(), violations.first()));
    }
    // symmetry-adapted basis: non-zero support equals the union of both tables
    let data = golden::golden_data();
    let mut expected: BTreeSet<(String, String, String, i32)> = BTreeSet::new();
    for (col, (op, _, _)) in ctx.reports.iter().enumerate() {
        for row in &data.table1 {
            if ExactCoeff::parse_real(&row.values[col]).map_err(|e| e.to_string())?.is_zero() {
                continue;
            }
            for sign in row_signs(row) {
                for s in row_states(ctx, row, sign) {
                    expected.insert((op.to_string(), s.row_label(), s.row_label(), s.m));
                }
            }
        }
        for row in data.table2.iter().filter(|r| OperatorLabel::parse(&r.op).ok() == Some(*op)) {
            if ExactCoeff::parse_real(&row.value).map_err(|e| e.to_string())?.is_zero() {
                continue;
            }
            for b in ctx.states.iter().filter(|s| s.k == row.k && s.su6_label() == row.bra) {
                for k in ctx.states.iter().filter(|s| s.k == row.k && s.su6_label() == row.ket && s.m == b.m && s.sign == b.sign) {
                    expected.insert((op.to_string(), b.row_label(), k.row_label(), b.m));
                }
            }
        }
    }
    let mut found: BTreeSet<(String, String, String, i32)> = BTreeSet::new();
    for (op, _, rows) in &ctx.reports {
        for r in rows {
            if r.bra_m != r.ket_m {
                return Err(format!("{} -> {} couples m={} to m={}", r.bra, r.ket, r.ket_m, r.bra_m));
            }
            found.insert((op.to_string(), r.bra.clone(), r.ket.clone(), r.bra_m));
        }
    }
    let extra: Vec<_> = found.difference(&expected).take(3).collect();
    let missing: Vec<_> = expected.difference(&found).take(3).collect();
    check(
        extra.is_empty() && missing.is_empty(),
        format!("{nonzero} non-zero catalog elements obey the rule; {} adapted elements equal the table support", found.len()),
        format!("not in tables: {extra:?}; tabulated but zero: {missing:?}"),
    )
}

/// `∫_0^π cos^a θ sin^b θ dθ` by composite Simpson.
fn angular_integral(a: u32, b: u32, upper: f64) -> f64 {
    let n = 20_000;
    let h = upper / n as f64;
    let f = |t: f64| t.cos().powi(a as i32) * t.sin().powi(b as i32);
    let mut acc = f(0.0) + f(upper);
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    acc * h / 3.0
}

/// Moment in nested polar coordinates `x1 = cos θ1`, `x2 = sin θ1 cos θ2`, ...,
/// where the integral factorises into one-dimensional quadratures.
fn quadrature_moment(a: &[u32; 6]) -> f64 {
    let mut total = 1.0;
    for j in 0..5 {
        let rest: u32 = a[j + 1..].iter().sum();
        let (upper, jac) = if j == 4 { (2.0 * std::f64::consts::PI, 0) } else { (std::f64::consts::PI, 4 - j as u32) };
        // the last angle carries cos^{a5} sin^{a6}
        let b = if j == 4 { a[5] } else { rest + jac };
        total *= angular_integral(a[j], b, upper);
    }
    total
}

fn numeric_moments(_: &Context) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let mut a = [0u32; 6];
        let budget = rng.gen_range(0..=8u32);
        for _ in 0..budget {
            a[rng.gen_range(0..6)] += 2;
        }
        let exact = sphere_moment(&a).to_f64();
        let numeric = quadrature_moment(&a);
        worst = worst.max((exact - numeric).abs() / exact.abs());
    }
    check(worst < 1e-6, format!("50 random moments, worst relative error {worst:.1e}"), format!("worst relative error {worst:e}"))
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("HHARM6_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let start = Instant::now();
    let ctx = context();
    let criteria: [(&str, fn(&Context) -> Outcome); 11] = [
        ("dimension checks", dimensions),
        ("golden reproduction", golden_reproduction),
        ("eigen-equation suite", eigen_suite),
        ("orthonormality", gram),
        ("permutation law", permutation_law),
        ("classification rule", classification),
        ("diagonal table", table1),
        ("off-diagonal table", table2),
        ("m-independence", m_independence),
        ("selection rule and support", selection_rule),
        ("numeric moment cross-check", numeric_moments),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match f(&ctx) {
            Ok(msg) => println!("criterion {:>2} {name}: PASS ({msg}) [{:.2} s]", i + 1, t.elapsed().as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.1} s", criteria.len() - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
