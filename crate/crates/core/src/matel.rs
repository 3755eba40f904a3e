//! Integration over the unit five-sphere.
//!
//! Real moments use `∫ Π x_i^{a_i} dΩ = 2 Π Γ((a_i+1)/2) / Γ((Σa_i+6)/2)`,
//! zero when any exponent is odd. In the complex coordinates the same
//! integral collapses to
//! `∫ Π (X_i^+)^{a_i} (X_i^-)^{b_i} dΩ = Π δ_{a_i b_i} · 2π³ Π a_i! / (n+2)!`
//! with `n = Σ a_i`, which is what inner products and matrix elements use.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::build::{Builder, Harmonic};
use crate::coeff::{ExactCoeff, Rational};
use crate::error::{Error, Result};
use crate::perm::{symmetry_adapt, SymHarmonic};
use crate::poly::{monomials, HomoPoly, Monomial, NVARS};

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `Γ(n/2)` for `n ≥ 1`, as rational times `π^{1/2}` when `n` is odd.
pub fn gamma_half(n: u32) -> ExactCoeff {
    assert!(n >= 1, "Γ(0) is a pole");
    if n % 2 == 0 {
        return ExactCoeff::rational(Rational::from_integer(factorial(n / 2 - 1)));
    }
    // Γ(x + 1) = x Γ(x) from Γ(1/2) = √π
    let mut acc = Rational::one();
    let mut twice_x = 1u32;
    while twice_x < n {
        acc *= Rational::new(BigInt::from(twice_x), BigInt::from(2));
        twice_x += 2;
    }
    ExactCoeff::rational(acc).times_pi_half_power(1)
}

fn moment_cache() -> &'static RwLock<HashMap<[u32; NVARS], ExactCoeff>> {
    static CACHE: OnceLock<RwLock<HashMap<[u32; NVARS], ExactCoeff>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `∫_{S^5} λ1^{a1} λ2^{a2} λ3^{a3} ρ1^{a4} ρ2^{a5} ρ3^{a6} dΩ`, exact.
pub fn sphere_moment(a: &[u32; NVARS]) -> ExactCoeff {
    if a.iter().any(|e| e % 2 == 1) {
        return ExactCoeff::zero();
    }
    if let Some(v) = moment_cache().read().expect("moment cache poisoned").get(a) {
        return v.clone();
    }
    let mut num = ExactCoeff::from_int(2);
    for &e in a {
        num = num.checked_mul(&gamma_half(e + 1)).expect("rational times powers of π");
    }
    let total: u32 = a.iter().sum();
    let value = num.checked_div(&gamma_half(total + 6)).expect("non-zero Γ");
    moment_cache().write().expect("moment cache poisoned").insert(*a, value.clone());
    value
}

/// Integral of one monomial in `X_i^±` over the sphere.
pub fn complex_moment(m: &Monomial) -> ExactCoeff {
    if m.axis_charge() != [0, 0, 0] {
        return ExactCoeff::zero();
    }
    let n: u32 = m.0[..3].iter().map(|&e| e as u32).sum();
    let mut num = BigInt::from(2);
    for &e in &m.0[..3] {
        num *= factorial(e as u32);
    }
    ExactCoeff::rational(Rational::new(num, factorial(n + 2))).times_pi_half_power(6)
}

/// `∫ p dΩ`.
pub fn integrate(p: &HomoPoly) -> Result<ExactCoeff> {
    let mut acc = ExactCoeff::zero();
    for (m, c) in p.terms() {
        let mom = complex_moment(m);
        if !mom.is_zero() {
            acc = acc.checked_add(&c.checked_mul(&mom)?)?;
        }
    }
    Ok(acc)
}

/// `∫ p dΩ` through the expansion in real coordinates; an independent route
/// used to cross-check [`integrate`].
pub fn integrate_real(p: &HomoPoly) -> Result<ExactCoeff> {
    let mut acc = ExactCoeff::zero();
    for (e, c) in p.to_real_terms()? {
        let mom = sphere_moment(&e.map(u32::from));
        if !mom.is_zero() {
            acc = acc.checked_add(&c.checked_mul(&mom)?)?;
        }
    }
    Ok(acc)
}

fn by_axis_charge(p: &HomoPoly) -> HashMap<[i32; 3], Vec<(Monomial, ExactCoeff)>> {
    let mut map: HashMap<[i32; 3], Vec<(Monomial, ExactCoeff)>> = HashMap::new();
    for (m, c) in p.terms() {
        map.entry(m.axis_charge()).or_default().push((*m, c.clone()));
    }
    map
}

/// `⟨p, q⟩ = ∫ conj(p) q dΩ`.
pub fn inner_product(p: &HomoPoly, q: &HomoPoly) -> Result<ExactCoeff> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch(p.degree(), q.degree()));
    }
    overlap(p, q)
}

/// `∫ conj(p) q dΩ` for polynomials of any degrees.
pub fn overlap(p: &HomoPoly, q: &HomoPoly) -> Result<ExactCoeff> {
    let qs = by_axis_charge(q);
    let mut acc = ExactCoeff::zero();
    for (s, cs) in p.terms() {
        // conj(X^s) X^t integrates to non-zero only when the axis charges agree
        let Some(list) = qs.get(&s.axis_charge()) else { continue };
        let cs = cs.conj();
        let sbar = s.conjugate();
        for (t, ct) in list {
            acc = acc.checked_add(&cs.checked_mul(ct)?.checked_mul(&complex_moment(&sbar.mul(t)))?)?;
        }
    }
    Ok(acc)
}

/// `⟨p, q⟩` through real coordinates.
pub fn inner_product_real(p: &HomoPoly, q: &HomoPoly) -> Result<ExactCoeff> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch(p.degree(), q.degree()));
    }
    integrate_real(&p.conjugate().mul(q)?)
}

/// Pairs `(i, j)`, `i ≤ j`, where the normalised Gram matrix of `entries`
/// differs from the identity, with the offending raw overlap.
pub fn gram_failures(entries: &[Harmonic]) -> Result<Vec<(usize, usize, ExactCoeff)>> {
    let rows: Vec<Vec<(usize, usize, ExactCoeff)>> = (0..entries.len())
        .into_par_iter()
        .map(|i| -> Result<Vec<(usize, usize, ExactCoeff)>> {
            let mut bad = Vec::new();
            for j in i..entries.len() {
                let raw = overlap(&entries[i].numerator, &entries[j].numerator)?;
                let ok = if i == j { raw == entries[i].norm_sq_raw } else { raw.is_zero() };
                if !ok {
                    bad.push((i, j, raw));
                }
            }
            Ok(bad)
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// `∫ conj(bra) · op · ket dΩ` on raw numerators.
pub fn triple_integral(bra: &HomoPoly, op: &HomoPoly, ket: &HomoPoly) -> Result<ExactCoeff> {
    integrate(&bra.conjugate().mul(op)?.mul(ket)?)
}

/// `value / √denominator_sq` for a positive `denominator_sq` that is rational
/// times an integer power of `π`.
pub fn divide_by_root(value: &ExactCoeff, denominator_sq: &ExactCoeff) -> Result<ExactCoeff> {
    if value.is_zero() {
        return Ok(ExactCoeff::zero());
    }
    let root = denominator_sq.sqrt_positive()?;
    match value.checked_div(&root) {
        Ok(v) => Ok(v),
        Err(_) => {
            // two distinct surds: go through the square, which must be rational
            let sign = value.real_sign()?;
            let sq = value.checked_mul(value)?.checked_div(denominator_sq)?;
            let bare = sq.without_pi();
            let r = bare.as_rational().ok_or_else(|| Error::Data(format!("{value} / sqrt({denominator_sq}) leaves two surds")))?;
            let root = crate::coeff::sqrt_rational(r)?.times_pi_half_power(sq.pi_half_power() / 2);
            Ok(if sign == std::cmp::Ordering::Less { root.neg() } else { root })
        }
    }
}

/// Normalised triple element `∫ conj(b) o k / √(N_b N_o N_k)`.
pub fn triple_element(bra: &SymHarmonic, op: &SymHarmonic, ket: &SymHarmonic) -> Result<ExactCoeff> {
    let raw = triple_integral(&bra.numerator, &op.numerator, &ket.numerator)?;
    let den = bra.norm_sq_raw.checked_mul(&op.norm_sq_raw)?.checked_mul(&ket.norm_sq_raw)?;
    divide_by_root(&raw, &den)
}

/// The scalar operator harmonics that a permutation-symmetric, rotation
/// invariant potential can contain at low order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OperatorLabel {
    pub k: u32,
    pub abs_q: u32,
}

impl OperatorLabel {
    pub const ALLOWED: [OperatorLabel; 4] =
        [OperatorLabel { k: 0, abs_q: 0 }, OperatorLabel { k: 4, abs_q: 0 }, OperatorLabel { k: 6, abs_q: 6 }, OperatorLabel { k: 8, abs_q: 0 }];

    pub fn new(k: u32, abs_q: u32) -> Result<Self> {
        let op = OperatorLabel { k, abs_q };
        if Self::ALLOWED.contains(&op) {
            Ok(op)
        } else {
            Err(Error::UnknownOperator(k, abs_q))
        }
    }

    /// Parses `K,Q` (the sign of `Q` is ignored).
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Data(format!("operator {text:?} is not of the form K,Q"));
        let (k, q) = text.split_once(',').ok_or_else(bad)?;
        let k: u32 = k.trim().parse().map_err(|_| bad())?;
        let q: i32 = q.trim().trim_start_matches('|').trim_end_matches('|').parse().map_err(|_| bad())?;
        Self::new(k, q.unsigned_abs())
    }

    /// Column normalisation of the printed tables: `π√π`, or `π√(2π)` for `(6,|6|)`.
    pub fn table_scale(self) -> ExactCoeff {
        let base = ExactCoeff::one().times_pi_half_power(3);
        if self.abs_q == 6 {
            base.checked_mul(&crate::coeff::sqrt_rational(&Rational::from_integer(2.into())).expect("positive")).expect("single surd")
        } else {
            base
        }
    }
}

impl std::fmt::Display for OperatorLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},|{}|)", self.k, self.abs_q)
    }
}

/// The symmetric `L = m = ν = 0`, `+` state of an operator label.
pub fn operator_harmonic(builder: &Builder, op: OperatorLabel) -> Result<SymHarmonic> {
    let reps = builder.highest_weight_harmonics(op.k, op.abs_q as i32, 0)?;
    let [rep] = reps.as_slice() else {
        return Err(Error::Data(format!("operator block {op} has {} states", reps.len())));
    };
    let mut entries = vec![rep.clone()];
    if op.abs_q != 0 {
        entries.push(crate::build::reflected_partner(rep)?);
    }
    let catalog = crate::build::Catalog::from_entries(op.k, entries);
    symmetry_adapt(&catalog)?
        .into_iter()
        .find(|s| s.sign > 0)
        .ok_or_else(|| Error::Data(format!("operator {op} has no symmetric combination")))
}

/// `A[s][t] = ∫ conj(X^s) · op · X^t dΩ` between the monomial bases of the
/// bra and ket degrees, stored sparsely by row.
pub struct TripleKernel {
    bra_index: HashMap<Monomial, usize>,
    ket_index: HashMap<Monomial, usize>,
    ket_len: usize,
    rows: Vec<Vec<(usize, ExactCoeff)>>,
}

impl TripleKernel {
    pub fn new(op: &HomoPoly, k: u32) -> Result<Self> {
        Self::between(op, k, k)
    }

    pub fn between(op: &HomoPoly, bra_k: u32, ket_k: u32) -> Result<Self> {
        let bra_basis = monomials(bra_k);
        let ket_basis = monomials(ket_k);
        let mut by_charge: HashMap<[i32; 3], Vec<usize>> = HashMap::new();
        for (i, m) in ket_basis.iter().enumerate() {
            by_charge.entry(m.axis_charge()).or_default().push(i);
        }
        let op_terms: Vec<(Monomial, ExactCoeff)> = op.terms().map(|(m, c)| (*m, c.clone())).collect();
        let rows = bra_basis
            .par_iter()
            .map(|s| -> Result<Vec<(usize, ExactCoeff)>> {
                let sbar = s.conjugate();
                let target = s.axis_charge();
                let mut acc: HashMap<usize, ExactCoeff> = HashMap::new();
                for (v, cv) in &op_terms {
                    let vc = v.axis_charge();
                    let need = [target[0] - vc[0], target[1] - vc[1], target[2] - vc[2]];
                    let Some(ts) = by_charge.get(&need) else { continue };
                    let sv = sbar.mul(v);
                    for &t in ts {
                        let mom = complex_moment(&sv.mul(&ket_basis[t]));
                        let slot = acc.entry(t).or_insert_with(ExactCoeff::zero);
                        *slot = slot.checked_add(&cv.checked_mul(&mom)?)?;
                    }
                }
                let mut row: Vec<(usize, ExactCoeff)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                row.sort_by_key(|(t, _)| *t);
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let index = |b: &[Monomial]| b.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        Ok(TripleKernel { bra_index: index(&bra_basis), ket_index: index(&ket_basis), ket_len: ket_basis.len(), rows })
    }

    /// `y = A k`.
    pub fn apply(&self, ket: &HomoPoly) -> Result<Vec<ExactCoeff>> {
        let mut k = vec![ExactCoeff::zero(); self.ket_len];
        for (m, c) in ket.terms() {
            let i = *self.ket_index.get(m).ok_or(Error::DegreeMismatch(m.degree(), ket.degree()))?;
            k[i] = c.clone();
        }
        self.rows
            .iter()
            .map(|row| {
                let mut acc = ExactCoeff::zero();
                for (t, a) in row {
                    if !k[*t].is_zero() {
                        acc = acc.checked_add(&a.checked_mul(&k[*t])?)?;
                    }
                }
                Ok(acc)
            })
            .collect()
    }

    /// `b† y`.
    pub fn contract(&self, bra: &HomoPoly, y: &[ExactCoeff]) -> Result<ExactCoeff> {
        let mut acc = ExactCoeff::zero();
        for (m, c) in bra.terms() {
            let i = *self.bra_index.get(m).ok_or(Error::DegreeMismatch(m.degree(), bra.degree()))?;
            if !y[i].is_zero() {
                acc = acc.checked_add(&c.conj().checked_mul(&y[i])?)?;
            }
        }
        Ok(acc)
    }
}

/// One non-zero element in table units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixElementRow {
    pub k: u32,
    pub bra: String,
    pub ket: String,
    pub bra_tag: String,
    pub ket_tag: String,
    pub bra_m: i32,
    pub ket_m: i32,
    /// Element times the column scale of [`OperatorLabel::table_scale`].
    pub value: ExactCoeff,
}

/// Every non-zero same-`K` element `⟨bra| op |ket⟩` among `states`, in
/// table units, in the order of `states`.
pub fn table_report(states: &[SymHarmonic], op: &SymHarmonic, scale: &ExactCoeff) -> Result<Vec<MatrixElementRow>> {
    let mut rows = Vec::new();
    let mut ks: Vec<u32> = states.iter().map(|s| s.k).collect();
    ks.dedup();
    for k in ks {
        let group: Vec<&SymHarmonic> = states.iter().filter(|s| s.k == k).collect();
        let kernel = TripleKernel::new(&op.numerator, k)?;
        let ys: Vec<Vec<ExactCoeff>> = group.par_iter().map(|s| kernel.apply(&s.numerator)).collect::<Result<_>>()?;
        let found: Vec<Vec<MatrixElementRow>> = group
            .par_iter()
            .map(|bra| -> Result<Vec<MatrixElementRow>> {
                let mut out = Vec::new();
                for (ket, y) in group.iter().zip(&ys) {
                    let raw = kernel.contract(&bra.numerator, y)?;
                    if raw.is_zero() {
                        continue;
                    }
                    let den = bra.norm_sq_raw.checked_mul(&op.norm_sq_raw)?.checked_mul(&ket.norm_sq_raw)?;
                    let value = divide_by_root(&raw, &den)?.checked_mul(scale)?;
                    out.push(MatrixElementRow {
                        k,
                        bra: bra.row_label(),
                        ket: ket.row_label(),
                        bra_tag: bra.su6_label(),
                        ket_tag: ket.su6_label(),
                        bra_m: bra.m,
                        ket_m: ket.m,
                        value,
                    });
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        rows.extend(found.into_iter().flatten());
    }
    Ok(rows)
}
