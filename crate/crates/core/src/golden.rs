//! Reference harmonics for `K ≤ 4` and the diagonal/off-diagonal
//! matrix-element tables, shipped as `data/golden_k4.json`.
//!
//! Each harmonic is stored as a body `p` in the compact factors `Y_{+,-,0}^±`,
//! `|Y^±|²` and `R²` with `prefactor_sq = c²`, so that the normalised function is
//! `c π^{-3/2} p / R^K`. Entries are validated when loaded.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::build::{scalar_ratio, Catalog, HarmonicLabel};
use crate::coeff::{ExactCoeff, Rational};
use crate::error::{Error, Result};
use crate::matel::{inner_product, MatrixElementRow, OperatorLabel};
use crate::perm::SymHarmonic;
use crate::ops;
use crate::poly::{r_squared, HomoPoly, Var};

pub const GOLDEN_JSON: &str = include_str!("../data/golden_k4.json");
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct TermData {
    pub coeff: String,
    pub factors: Vec<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct HarmonicData {
    pub label: String,
    pub prefactor_sq: String,
    pub compact: String,
    pub terms: Vec<TermData>,
}

/// A diagonal row: one `(K, |Q|, L, ν)` multiplet with the signs it covers.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct Table1Row {
    pub k: u32,
    pub abs_q: u32,
    pub l: u32,
    pub nu: String,
    /// `"+"`, `"-"` or `"+-"`.
    pub signs: String,
    pub tag: String,
    /// One value per entry of [`GoldenData::operators`], in table units.
    pub values: Vec<String>,
}

/// An off-diagonal element between SU(6) tags; `L` in a tag matches any `L`.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct Table2Row {
    pub k: u32,
    pub op: String,
    pub bra: String,
    pub ket: String,
    pub value: String,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct GoldenData {
    pub schema_version: u32,
    pub harmonics: Vec<HarmonicData>,
    /// Operator columns of the diagonal table, as `K,Q`.
    pub operators: Vec<String>,
    pub table1: Vec<Table1Row>,
    pub table2: Vec<Table2Row>,
}

#[derive(Clone, Debug)]
pub struct GoldenEntry {
    pub label: HarmonicLabel,
    pub body: HomoPoly,
    pub prefactor_sq: Rational,
    pub compact: String,
}

impl GoldenEntry {
    /// `√prefactor_sq · π^{-3/2}`.
    pub fn prefactor(&self) -> Result<ExactCoeff> {
        Ok(ExactCoeff::rational(self.prefactor_sq.clone()).sqrt_positive()?.times_pi_half_power(-3))
    }

    /// The normalised numerator `prefactor · body`.
    pub fn normalised(&self) -> Result<HomoPoly> {
        self.body.scale(&self.prefactor()?)
    }
}

fn sum(polys: impl IntoIterator<Item = HomoPoly>, degree: u32) -> HomoPoly {
    polys.into_iter().fold(HomoPoly::zero(degree), |acc, p| acc.add(&p).expect("same degree"))
}

/// `Y_±^σ = X_1^σ ± i X_2^σ`, `Y_0^σ = X_3^σ`.
fn spherical(m: i32, plus: bool) -> HomoPoly {
    let x = |axis| HomoPoly::var(if plus { Var::plus(axis) } else { Var::minus(axis) });
    match m {
        0 => x(2),
        _ => {
            let i = ExactCoeff::i();
            let iy = x(1).scale(&if m > 0 { i } else { i.neg() }).expect("no π");
            x(0).add(&iy).expect("degree 1")
        }
    }
}

fn squared_length(plus: bool) -> HomoPoly {
    sum(
        (0..3).map(|a| {
            let v = HomoPoly::var(if plus { Var::plus(a) } else { Var::minus(a) });
            v.mul(&v).expect("no π")
        }),
        2,
    )
}

/// Factor names: `Y++ Y-+ Y0+ Y+- Y-- Y0-` (projection then charge),
/// `|Y+|2 |Y-|2 R2`.
pub fn factor(name: &str) -> Result<HomoPoly> {
    Ok(match name {
        "Y++" => spherical(1, true),
        "Y-+" => spherical(-1, true),
        "Y0+" => spherical(0, true),
        "Y+-" => spherical(1, false),
        "Y--" => spherical(-1, false),
        "Y0-" => spherical(0, false),
        "|Y+|2" => squared_length(true),
        "|Y-|2" => squared_length(false),
        "R2" => r_squared(),
        other => return Err(Error::Data(format!("unknown factor {other:?}"))),
    })
}

fn body_of(h: &HarmonicData, k: u32) -> Result<HomoPoly> {
    let mut body = HomoPoly::zero(k);
    for t in &h.terms {
        let c = ExactCoeff::parse_real(&t.coeff)?;
        let mut p = HomoPoly::constant(c);
        for f in &t.factors {
            p = p.mul(&factor(f)?)?;
        }
        if p.degree() != k {
            return Err(Error::GoldenValidation { label: h.label.clone(), check: format!("term of degree {} in a degree-{k} entry", p.degree()) });
        }
        body = body.add(&p)?;
    }
    Ok(body)
}

pub fn parse_data(json: &str) -> Result<GoldenData> {
    let data: GoldenData = serde_json::from_str(json).map_err(|e| Error::Data(format!("reference data: {e}")))?;
    if data.schema_version != SCHEMA_VERSION {
        return Err(Error::Data(format!("reference data schema {} (expected {SCHEMA_VERSION})", data.schema_version)));
    }
    Ok(data)
}

/// Checks `Δp = 0`, unit norm, and the `Q`, `L²`, `L_3`, `V_LQL` eigen-equations.
pub fn validate(entry: &GoldenEntry) -> Result<()> {
    let fail = |check: &str| Error::GoldenValidation { label: entry.label.to_string(), check: check.to_string() };
    let p = &entry.body;
    if p.is_zero() {
        return Err(fail("zero body"));
    }
    if !ops::apply_laplacian(p)?.is_zero() {
        return Err(fail("Laplacian"));
    }
    let norm = inner_product(p, p)?.scale(&entry.prefactor_sq);
    if norm != ExactCoeff::one().times_pi_half_power(6) {
        return Err(fail(&format!("unit norm (got {})", norm.times_pi_half_power(-6))));
    }
    let lb = &entry.label;
    let l = lb.l as i64;
    let checks: [(&str, HomoPoly, ExactCoeff); 4] = [
        ("Q eigenvalue", ops::apply_democracy(p)?, ExactCoeff::from_int(lb.q as i64)),
        ("L^2 eigenvalue", ops::apply_l_squared(p)?, ExactCoeff::from_int(l * (l + 1))),
        ("L_3 eigenvalue", ops::apply_l3(p)?, ExactCoeff::from_int(lb.m as i64)),
        ("V_LQL eigenvalue", ops::apply_vlql(p)?, lb.nu.clone()),
    ];
    for (name, image, value) in checks {
        if image != p.scale(&value)? {
            return Err(fail(name));
        }
    }
    Ok(())
}

/// Parses and validates every reference harmonic in `json`.
pub fn load_from_str(json: &str) -> Result<Vec<GoldenEntry>> {
    let data = parse_data(json)?;
    data.harmonics
        .iter()
        .map(|h| {
            let label = HarmonicLabel::parse(&h.label)?;
            let prefactor_sq = ExactCoeff::parse_real(&h.prefactor_sq)?
                .as_rational()
                .cloned()
                .ok_or_else(|| Error::GoldenValidation { label: h.label.clone(), check: "prefactor_sq must be rational".into() })?;
            let entry = GoldenEntry { body: body_of(h, label.k)?, label, prefactor_sq, compact: h.compact.clone() };
            validate(&entry)?;
            Ok(entry)
        })
        .collect()
}

/// The shipped reference harmonics, validated once.
pub fn load_golden() -> Result<&'static [GoldenEntry]> {
    static CACHE: OnceLock<Vec<GoldenEntry>> = OnceLock::new();
    if let Some(v) = CACHE.get() {
        return Ok(v);
    }
    let entries = load_from_str(GOLDEN_JSON)?;
    Ok(CACHE.get_or_init(|| entries))
}

/// The shipped tables.
pub fn golden_data() -> &'static GoldenData {
    static DATA: OnceLock<GoldenData> = OnceLock::new();
    DATA.get_or_init(|| parse_data(GOLDEN_JSON).expect("shipped reference data parses"))
}

#[derive(Clone, Debug, Serialize)]
pub struct GoldenMatch {
    pub label: String,
    /// `|⟨g, b⟩|² / (⟨g, g⟩⟨b, b⟩)`; exactly 1 when the built state is the same function.
    pub overlap: ExactCoeff,
    /// The built numerator equals the reference body term by term.
    pub identical: bool,
}

impl GoldenMatch {
    pub fn passed(&self) -> bool {
        self.overlap.is_one()
    }
}

/// Overlaps of `entries` with the same-label states of `catalog`.
pub fn match_entries(entries: &[GoldenEntry], catalog: &Catalog) -> Result<Vec<GoldenMatch>> {
    entries
        .iter()
        .map(|g| {
            let built = catalog.get(&g.label).ok_or_else(|| Error::MissingLabel(g.label.to_string()))?;
            let gb = inner_product(&g.body, &built.numerator)?;
            let gg = inner_product(&g.body, &g.body)?;
            let overlap = gb.mod_sq().checked_div(&gg.checked_mul(&built.norm_sq_raw)?)?;
            let identical = scalar_ratio(&built.numerator, &g.body)?.is_some_and(|r| r.is_one());
            Ok(GoldenMatch { label: g.label.to_string(), overlap, identical })
        })
        .collect()
}

pub fn match_against_built(catalog: &Catalog) -> Result<Vec<GoldenMatch>> {
    match_entries(load_golden()?, catalog)
}

/// True when a table-2 family pattern such as `[20,L+]` covers `tag`.
pub fn tag_matches(pattern: &str, tag: &str) -> bool {
    match pattern.split_once(",L") {
        Some((family, parity)) => tag.starts_with(&format!("{family},")) && tag.ends_with(parity),
        None => pattern == tag,
    }
}

/// Compares computed elements with both shipped tables. `reports` holds, per
/// operator, every non-zero same-`K` element in table units. Each returned
/// string names the table row and operator column that disagree.
pub fn compare_tables(states: &[SymHarmonic], reports: &[(OperatorLabel, Vec<MatrixElementRow>)]) -> Result<Vec<String>> {
    let data = golden_data();
    let mut bad = Vec::new();
    for (col, name) in data.operators.iter().enumerate() {
        let op = OperatorLabel::parse(name)?;
        let Some((_, rows)) = reports.iter().find(|(o, _)| *o == op) else {
            continue;
        };
        for row in &data.table1 {
            let expected = ExactCoeff::parse_real(&row.values[col])?;
            let nu = ExactCoeff::parse_real(&row.nu)?;
            for sign in row.signs.chars().map(|c| if c == '+' { 1i8 } else { -1 }) {
                let anchor = format!("diagonal table row {} ({},|{}|,{},{},{}) column {op}", row.tag, row.k, row.abs_q, row.l, row.nu, if sign > 0 { '+' } else { '-' });
                let Some(s) = states.iter().find(|s| s.k == row.k && s.abs_q == row.abs_q && s.l == row.l && s.nu == nu && s.sign == sign && s.m == s.l as i32) else {
                    bad.push(format!("{anchor}: state missing"));
                    continue;
                };
                let label = s.row_label();
                let got = rows
                    .iter()
                    .find(|r| r.bra == label && r.ket == label && r.bra_m == s.m && r.ket_m == s.m)
                    .map(|r| r.value.clone())
                    .unwrap_or_else(ExactCoeff::zero);
                if got != expected {
                    bad.push(format!("{anchor}: computed {got}, table {expected}"));
                }
            }
        }
    }
    for row in &data.table2 {
        let op = OperatorLabel::parse(&row.op)?;
        let Some((_, rows)) = reports.iter().find(|(o, _)| *o == op) else {
            continue;
        };
        let anchor = format!("off-diagonal table row {} -> {} (K={}) column {op}", row.bra, row.ket, row.k);
        let expected = ExactCoeff::parse_real(&row.value)?;
        if expected.is_zero() {
            for r in rows.iter().filter(|r| r.k == row.k && tag_matches(&row.bra, &r.bra_tag) && tag_matches(&row.ket, &r.ket_tag)) {
                bad.push(format!("{anchor}: {} -> {} m={} should vanish, computed {}", r.bra, r.ket, r.bra_m, r.value));
            }
            continue;
        }
        let hits: Vec<&MatrixElementRow> = rows.iter().filter(|r| r.k == row.k && r.bra_tag == row.bra && r.ket_tag == row.ket).collect();
        if hits.is_empty() {
            bad.push(format!("{anchor}: no computed element"));
        }
        for r in hits.into_iter().filter(|r| r.value != expected) {
            bad.push(format!("{anchor}: {} m={} computed {}, table {expected}", r.bra, r.bra_m, r.value));
        }
    }
    Ok(bad)
}
