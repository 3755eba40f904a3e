//! `hharm6`: catalog generation, verification, evaluation and matrix-element
//! tables for the three-body O(6) hyperspherical harmonics.
//!
//! Exit status: 0 when every requested check passes, 1 on a verification
//! failure, 2 on invalid arguments.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hharm6_core::build::{eigen_failures, BuildOptions, DEFAULT_KMAX_LIMIT};
use hharm6_core::coeff::sqrt_rational;
use hharm6_core::coords::shape_coords;
use hharm6_core::golden::{self, compare_tables, match_entries, GoldenEntry};
use hharm6_core::matel::{gram_failures, operator_harmonic, table_report, MatrixElementRow, OperatorLabel};
use hharm6_core::ops::{operator_matrix, Generator};
use hharm6_core::perm::{check_permutation_law, symmetry_adapt, verify_s3_action};
use hharm6_core::poly::NVARS;
use hharm6_core::{Builder, Catalog, ExactCoeff, Harmonic, HarmonicLabel, JacobiConfig, Rational};
use serde::Serialize;
use serde_json::json;

const SCHEMA_VERSION: u32 = 1;
const VARIABLES: [&str; NVARS] = ["X1+", "X2+", "X3+", "X1-", "X2-", "X3-"];
/// Digits beyond this are noise for values computed in `f64`.
const F64_DIGITS: usize = 17;

#[derive(Parser, Debug)]
#[command(name = "hharm6", version, about = "Exact three-body O(6) hyperspherical harmonics")]
struct Cli {
    /// Decimal digits for numeric output.
    #[arg(long, global = true, default_value_t = 15, value_parser = clap::value_parser!(u32).range(6..=50))]
    precision: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build and print the labelled catalog up to degree `kmax`.
    Catalog {
        #[arg(long)]
        kmax: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Use the builder's own phase convention instead of the reference one.
        #[arg(long)]
        no_golden_phase: bool,
    },
    /// Run the eigen, orthonormality, permutation and table checks.
    Verify {
        #[arg(long)]
        kmax: u32,
        /// Write a machine-readable report of every check to this file.
        #[arg(long)]
        failure_json: Option<PathBuf>,
    },
    /// Evaluate one normalised harmonic at a configuration.
    Eval {
        /// `K,Q,L,m,nu`, e.g. `4,0,2,2,-sqrt(105)`.
        #[arg(long, allow_hyphen_values = true)]
        label: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Print the hyper-radius and the shape angles alpha, phi.
    Shape {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Same-K matrix elements of an operator harmonic between adapted states.
    Matel {
        /// `K,Q` of the operator harmonic; one of 0,0 4,0 6,6 8,0.
        #[arg(long, allow_hyphen_values = true)]
        op: String,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the exact monomial-basis matrices of this generator
        /// (`Q`, `L3`, `L2`, `V`, `Lap`, `L12`, `Q23`, ...) for every K ≤ kmax
        /// as JSON to stderr.
        #[arg(long, value_name = "GENERATOR")]
        dump_operator: Option<String>,
    },
    /// Print or check the shipped reference harmonics.
    Golden {
        /// Validate the data and compare it with a fresh build.
        #[arg(long)]
        check: bool,
        /// Read reference data from this file instead of the shipped copy.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
}

/// Bad input from the command line; reported with exit status 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = configure_threads().and_then(|()| run(&cli));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.downcast_ref::<UsageError>().is_some() { 2 } else { 1 })
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("HHARM6_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| usage(format!("HHARM6_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the worker pool")?;
    Ok(())
}

/// `Ok(false)` means a requested check failed.
fn run(cli: &Cli) -> Result<bool> {
    let digits = cli.precision as usize;
    match &cli.command {
        Command::Catalog { kmax, format, out, no_golden_phase } => {
            let builder = Builder::new(BuildOptions { golden_phase: !no_golden_phase, ..Default::default() });
            let catalog = build_catalog(&builder, *kmax)?;
            let text = render_catalog(&catalog, *format)?;
            emit(out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Verify { kmax, failure_json } => verify(*kmax, failure_json.as_deref()),
        Command::Eval { label, lambda, rho, format } => {
            eval(label, &parse_config(lambda, rho)?, *format, digits)?;
            Ok(true)
        }
        Command::Shape { lambda, rho, format } => {
            shape(&parse_config(lambda, rho)?, *format, digits)?;
            Ok(true)
        }
        Command::Matel { op, kmax, format, out, dump_operator } => {
            let op = OperatorLabel::parse(op).map_err(|e| usage(e.to_string()))?;
            let generator = dump_operator
                .as_deref()
                .map(|name| Generator::parse(name).ok_or_else(|| usage(format!("unknown generator {name:?}"))))
                .transpose()?;
            let builder = Builder::default();
            let catalog = build_catalog(&builder, *kmax)?;
            if let Some(g) = generator {
                dump_generator(g, *kmax)?;
            }
            let states = symmetry_adapt(&catalog)?;
            let sym = operator_harmonic(&builder, op)?;
            let rows = table_report(&states, &sym, &op.table_scale())?;
            let text = render_matel(op, *kmax, &rows, *format, digits)?;
            emit(out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Golden { check, file, format } => golden_cmd(*check, file.as_deref(), *format),
    }
}

fn build_catalog(builder: &Builder, kmax: u32) -> Result<Catalog> {
    let limit = builder.options().kmax_limit;
    if kmax > limit {
        return Err(usage(format!("--kmax {kmax} exceeds the supported limit {limit}")));
    }
    Ok(builder.build_catalog(kmax)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn parse_triple(name: &str, text: &str) -> Result<[f64; 3]> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| usage(format!("--{name} expects three comma-separated numbers, got {text:?}")))?;
    let arr: [f64; 3] = parts.try_into().map_err(|_| usage(format!("--{name} expects exactly three components, got {text:?}")))?;
    if arr.iter().any(|x| !x.is_finite()) {
        return Err(usage(format!("--{name} components must be finite")));
    }
    Ok(arr)
}

fn parse_config(lambda: &str, rho: &str) -> Result<(JacobiConfig, [Rational; 6])> {
    let l = parse_triple("lambda", lambda)?;
    let r = parse_triple("rho", rho)?;
    let config = JacobiConfig::new(l, r);
    if config.hyper_radius() == 0.0 {
        return Err(usage("the configuration must have a non-zero hyper-radius"));
    }
    let exact: Vec<Rational> = lambda.split(',').chain(rho.split(',')).map(|s| decimal_to_rational(s.trim())).collect::<Option<_>>().ok_or_else(|| usage("unparseable component"))?;
    Ok((config, exact.try_into().expect("six components")))
}

/// The exact rational written by a decimal literal such as `-1.25e-3`.
fn decimal_to_rational(text: &str) -> Option<Rational> {
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let scale = exp - frac.len() as i32;
    let (num, den) = if scale >= 0 { (format!("{digits}{}", "0".repeat(scale as usize)), "1".to_string()) } else { (digits, format!("1{}", "0".repeat((-scale) as usize))) };
    Rational::from_str(&format!("{sign}{num}/{den}")).ok()
}

// ---------------------------------------------------------------- catalog

#[derive(Serialize)]
struct LabelJson {
    #[serde(rename = "K")]
    k: u32,
    #[serde(rename = "Q")]
    q: i32,
    #[serde(rename = "L")]
    l: u32,
    m: i32,
    nu: String,
    parity: i8,
}

#[derive(Serialize)]
struct TermOut {
    exp: [u8; NVARS],
    coeff: String,
}

#[derive(Serialize)]
struct EntryJson {
    id: String,
    label: LabelJson,
    norm_sq_raw: String,
    prefactor: String,
    terms: Vec<TermOut>,
    polynomial: String,
}

#[derive(Serialize)]
struct CatalogJson {
    schema_version: u32,
    k_max: u32,
    count: usize,
    variables: [&'static str; NVARS],
    entries: Vec<EntryJson>,
}

fn entry_json(h: &Harmonic) -> Result<EntryJson> {
    let lb = &h.label;
    Ok(EntryJson {
        id: lb.to_string(),
        label: LabelJson { k: lb.k, q: lb.q, l: lb.l, m: lb.m, nu: lb.nu.to_string(), parity: lb.parity },
        norm_sq_raw: h.norm_sq_raw.to_string(),
        prefactor: h.prefactor()?.to_string(),
        terms: h.numerator.to_term_list().into_iter().map(|t| TermOut { exp: t.exp, coeff: t.coeff.to_string() }).collect(),
        polynomial: h.numerator.to_string(),
    })
}

fn render_catalog(catalog: &Catalog, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let entries = catalog.entries.iter().map(entry_json).collect::<Result<Vec<_>>>()?;
            let doc = CatalogJson { schema_version: SCHEMA_VERSION, k_max: catalog.k_max, count: entries.len(), variables: VARIABLES, entries };
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["K", "Q", "L", "m", "nu", "parity", "norm_sq_raw", "prefactor", "polynomial"])?;
            for h in &catalog.entries {
                let lb = &h.label;
                w.write_record([
                    lb.k.to_string(),
                    lb.q.to_string(),
                    lb.l.to_string(),
                    lb.m.to_string(),
                    lb.nu.to_string(),
                    lb.parity.to_string(),
                    h.norm_sq_raw.to_string(),
                    h.prefactor()?.to_string(),
                    h.numerator.to_string(),
                ])?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        Format::Pretty => {
            let mut s = format!("{} harmonics with K <= {}\n", catalog.len(), catalog.k_max);
            for h in &catalog.entries {
                s += &format!("{}  {} * ({}) / R^{}\n", h.label, h.prefactor()?, h.numerator, h.label.k);
            }
            Ok(s)
        }
    }
}

// ---------------------------------------------------------------- verify

#[derive(Serialize)]
struct CheckReport {
    name: &'static str,
    passed: bool,
    checked: usize,
    failures: Vec<String>,
}

impl CheckReport {
    fn new(name: &'static str, checked: usize, failures: Vec<String>) -> Self {
        CheckReport { name, passed: failures.is_empty(), checked, failures }
    }
}

fn verify(kmax: u32, failure_json: Option<&Path>) -> Result<bool> {
    let builder = Builder::default();
    let catalog = build_catalog(&builder, kmax)?;
    let mut checks = Vec::new();

    let eigen = eigen_failures(&catalog)?.into_iter().map(|(check, label)| format!("{check} for {label}")).collect();
    checks.push(CheckReport::new("Laplacian and eigen-equations", catalog.len(), eigen));

    let gram = gram_failures(&catalog.entries)?
        .into_iter()
        .map(|(i, j, raw)| format!("orthonormality <{}|{}>: raw overlap {raw}", catalog.entries[i].label, catalog.entries[j].label))
        .collect();
    checks.push(CheckReport::new("Gram identity", catalog.len() * (catalog.len() + 1) / 2, gram));

    let law = check_permutation_law(&catalog)?.into_iter().map(|f| format!("permutation law {} for {}", f.law, f.state)).collect();
    checks.push(CheckReport::new("permutation law", 3 * catalog.len(), law));

    let states = symmetry_adapt(&catalog)?;
    let s3 = verify_s3_action(&states)?;
    let s3_failures = s3.failures.iter().map(|f| format!("S3 representation {} for {}", f.law, f.state)).collect();
    checks.push(CheckReport::new("S3 representation", s3.states_checked, s3_failures));

    let reference: Vec<GoldenEntry> = golden::load_golden()?.iter().filter(|g| g.label.k <= kmax).cloned().collect();
    let matches = match_entries(&reference, &catalog)?;
    let golden_failures = matches.iter().filter(|m| !m.passed()).map(|m| format!("reference harmonic {}: overlap {}", m.label, m.overlap)).collect();
    checks.push(CheckReport::new("reference harmonics", matches.len(), golden_failures));

    if kmax >= 4 {
        let mut reports = Vec::new();
        let mut count = 0;
        for name in &golden::golden_data().operators {
            let op = OperatorLabel::parse(name)?;
            let sym = operator_harmonic(&builder, op)?;
            let rows: Vec<MatrixElementRow> = table_report(&states, &sym, &op.table_scale())?.into_iter().filter(|r| r.k <= 4).collect();
            count += rows.len();
            reports.push((op, rows));
        }
        checks.push(CheckReport::new("matrix-element tables", count, compare_tables(&states, &reports)?));
    }

    let passed = checks.iter().all(|c| c.passed);
    let mut out = io::stdout().lock();
    for c in &checks {
        writeln!(out, "{} {}: {} checked", if c.passed { "PASS" } else { "FAIL" }, c.name, c.checked)?;
        for f in &c.failures {
            writeln!(out, "  {f}")?;
        }
    }
    writeln!(out, "{}", if passed { "all checks passed" } else { "verification failed" })?;
    if let Some(path) = failure_json {
        let doc = json!({ "schema_version": SCHEMA_VERSION, "k_max": kmax, "passed": passed, "checks": checks });
        fs::write(path, serde_json::to_string_pretty(&doc)? + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(passed)
}

// ---------------------------------------------------------------- eval, shape

/// `p(X) / √⟨p,p⟩ / R^K` with rational inputs, when the surds involved combine.
fn exact_value(h: &Harmonic, x: &[Rational; 6]) -> Result<ExactCoeff> {
    let xs: [ExactCoeff; NVARS] = std::array::from_fn(|v| {
        let (axis, plus) = (v % 3, v < 3);
        let im = if plus { x[3 + axis].clone() } else { -x[3 + axis].clone() };
        ExactCoeff::gaussian(x[axis].clone(), im)
    });
    let r2: Rational = x.iter().map(|c| c * c).sum();
    let k = h.label.k;
    let mut rk = ExactCoeff::rational(num_pow(&r2, k / 2));
    if k % 2 == 1 {
        rk = rk.checked_mul(&sqrt_rational(&r2)?)?;
    }
    let scale = h.prefactor()?.checked_div(&rk)?;
    Ok(h.numerator.evaluate_exact(&xs)?.checked_mul(&scale)?)
}

fn num_pow(q: &Rational, n: u32) -> Rational {
    (0..n).fold(Rational::from_integer(1.into()), |acc, _| acc * q)
}

fn f64_string(x: f64, digits: usize) -> String {
    format!("{:.*}", digits.min(F64_DIGITS), x)
}

fn eval(label: &str, (config, exact): &(JacobiConfig, [Rational; 6]), format: Format, digits: usize) -> Result<()> {
    let label = HarmonicLabel::parse(label).map_err(|e| usage(e.to_string()))?;
    let builder = Builder::default();
    let catalog = build_catalog(&builder, label.k)?;
    let h = catalog.get(&label).ok_or_else(|| usage(format!("no harmonic with label {label}")))?;
    let (exact_text, decimal) = match exact_value(h, exact) {
        Ok(v) => (Some(v.to_string()), v.to_decimal_string(digits)),
        Err(_) => {
            let z = h.evaluate(config)?;
            let d = if z.im == 0.0 { f64_string(z.re, digits) } else { format!("{}{}{}i", f64_string(z.re, digits), if z.im < 0.0 { '-' } else { '+' }, f64_string(z.im.abs(), digits)) };
            (None, d)
        }
    };
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&json!({ "schema_version": SCHEMA_VERSION, "label": label.to_string(), "exact": exact_text, "decimal": decimal }))? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["label", "exact", "decimal"])?;
            w.write_record([label.to_string(), exact_text.unwrap_or_default(), decimal])?;
            String::from_utf8(w.into_inner()?)?
        }
        Format::Pretty => format!("{label}\nexact:   {}\ndecimal: {decimal}\n", exact_text.as_deref().unwrap_or("(not representable; decimal from floating point)")),
    };
    emit(None, &text)
}

fn shape(&(config, _): &(JacobiConfig, [Rational; 6]), format: Format, digits: usize) -> Result<()> {
    let s = shape_coords(&config)?;
    let (r, alpha) = (f64_string(s.r, digits), f64_string(s.alpha, digits));
    let phi = s.phi.map(|p| f64_string(p, digits));
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&json!({ "schema_version": SCHEMA_VERSION, "R": r, "alpha": alpha, "phi": phi }))? + "\n",
        Format::Csv => format!("R,alpha,phi\n{r},{alpha},{}\n", phi.unwrap_or_default()),
        Format::Pretty => format!("R     = {r}\nalpha = {alpha}\nphi   = {}\n", phi.as_deref().unwrap_or("undefined (pole of the shape sphere)")),
    };
    emit(None, &text)
}

// ---------------------------------------------------------------- matel

#[derive(Serialize)]
struct ElementJson {
    #[serde(rename = "K")]
    k: u32,
    bra: String,
    ket: String,
    bra_m: i32,
    ket_m: i32,
    su6_bra: String,
    su6_ket: String,
    exact: String,
    decimal: String,
}

fn render_matel(op: OperatorLabel, kmax: u32, rows: &[MatrixElementRow], format: Format, digits: usize) -> Result<String> {
    let elements: Vec<ElementJson> = rows
        .iter()
        .map(|r| ElementJson {
            k: r.k,
            bra: r.bra.clone(),
            ket: r.ket.clone(),
            bra_m: r.bra_m,
            ket_m: r.ket_m,
            su6_bra: r.bra_tag.clone(),
            su6_ket: r.ket_tag.clone(),
            exact: r.value.to_string(),
            decimal: r.value.to_decimal_string(digits),
        })
        .collect();
    let unit = op.table_scale();
    match format {
        Format::Json => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "operator": op.to_string(),
                "k_max": kmax,
                "unit": unit.to_string(),
                "count": elements.len(),
                "elements": elements,
            });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["K", "bra", "ket", "m", "su6_bra", "su6_ket", "exact", "decimal"])?;
            for e in &elements {
                w.write_record([e.k.to_string(), e.bra.clone(), e.ket.clone(), e.bra_m.to_string(), e.su6_bra.clone(), e.su6_ket.clone(), e.exact.clone(), e.decimal.clone()])?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        Format::Pretty => {
            let mut s = format!("operator {op}, K <= {kmax}, values in units of {unit}\n");
            for e in &elements {
                s += &format!("K={} m={:>2}  {} {} -> {} {}  {} = {}\n", e.k, e.bra_m, e.bra, e.su6_bra, e.ket, e.su6_ket, e.exact, e.decimal);
            }
            Ok(s)
        }
    }
}

fn dump_generator(g: Generator, kmax: u32) -> Result<()> {
    let mut mats = Vec::new();
    for k in 0..=kmax {
        let m = operator_matrix(g, k)?;
        mats.push(json!({
            "degree": m.degree,
            "columns": m.columns.iter().map(|c| c.0).collect::<Vec<_>>(),
            "rows": m.rows.iter().map(|r| r.0).collect::<Vec<_>>(),
            "entries": m.entries.iter().map(|row| row.iter().map(ExactCoeff::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }));
    }
    let doc = json!({ "schema_version": SCHEMA_VERSION, "generator": format!("{g:?}"), "variables": VARIABLES, "matrices": mats });
    writeln!(io::stderr().lock(), "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

// ---------------------------------------------------------------- golden

fn golden_cmd(check: bool, file: Option<&Path>, format: Format) -> Result<bool> {
    let json_text = match file {
        Some(path) => fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?,
        None => golden::GOLDEN_JSON.to_string(),
    };
    let entries = match golden::load_from_str(&json_text) {
        Ok(entries) => entries,
        Err(e) if check => {
            println!("FAIL reference data: {e}");
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    if !check {
        let text = match format {
            Format::Json => {
                let list: Vec<_> = entries
                    .iter()
                    .map(|g| -> Result<_> { Ok(json!({ "label": g.label.to_string(), "prefactor": g.prefactor()?.to_string(), "compact": g.compact, "polynomial": g.body.to_string() })) })
                    .collect::<Result<_>>()?;
                serde_json::to_string_pretty(&json!({ "schema_version": SCHEMA_VERSION, "count": list.len(), "harmonics": list }))? + "\n"
            }
            _ => entries.iter().map(|g| Ok(format!("{}  {} * {}\n", g.label, g.prefactor()?, g.compact))).collect::<Result<String>>()?,
        };
        emit(None, &text)?;
        return Ok(true);
    }
    let kmax = entries.iter().map(|g| g.label.k).max().unwrap_or(0).min(DEFAULT_KMAX_LIMIT);
    let catalog = Builder::new(BuildOptions { golden_phase: false, ..Default::default() }).build_catalog(kmax)?;
    let matches = match_entries(&entries, &catalog)?;
    let mut passed = true;
    let mut out = io::stdout().lock();
    writeln!(out, "PASS {} reference harmonics validate (Laplacian, norm, eigen-equations)", entries.len())?;
    for m in &matches {
        passed &= m.passed();
        if !m.passed() {
            writeln!(out, "FAIL reference harmonic {}: overlap with the built state {}", m.label, m.overlap)?;
        }
    }
    if passed {
        writeln!(out, "PASS every reference harmonic has unit overlap with an independent build")?;
    }
    Ok(passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(decimal_to_rational("1.25").unwrap(), Rational::new(5.into(), 4.into()));
        assert_eq!(decimal_to_rational("-0.5e-2").unwrap(), Rational::new((-1).into(), 200.into()));
        assert_eq!(decimal_to_rational("3e2").unwrap(), Rational::from_integer(300.into()));
        assert_eq!(decimal_to_rational("0").unwrap(), Rational::from_integer(0.into()));
        assert!(decimal_to_rational("1.2.3").is_none());
        assert!(decimal_to_rational("").is_none());
    }
}
