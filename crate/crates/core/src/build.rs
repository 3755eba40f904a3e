//! The labelled catalog of harmonics.
//!
//! For each `(K, Q, L)` the highest-weight states (`m = L`) span the kernel of
//! `[Δ; L_+]` on the spherical monomials of charge `Q` and projection `L`.
//! `V_LQL` is diagonalised exactly inside that kernel. Representatives with
//! `Q > 0`, or `Q = 0` and `ν ≥ 0`, are phased and normalised; lower `m`
//! follow from `L_-`; the remaining states are reflections
//! `Y^{K,-Q,-ν}_{L,m}(X) = (-1)^{K-L} Y^{K,Q,ν}_{L,m}(X^+ ↔ X^-)`.
//!
//! A [`Harmonic`] keeps an unnormalised numerator `p` together with
//! `⟨p, p⟩`; the function on the sphere is `p / √⟨p, p⟩ / R^K`. This keeps
//! every coefficient inside a single quadratic field even when the
//! normalisation constant would need a second surd.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::{sqrt_rational, ExactCoeff, Rational};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matel::inner_product;
use crate::ops;
use crate::perm::Transposition;
use crate::poly::{monomials, HomoPoly, JacobiConfig, Monomial, NVARS};

/// Default ceiling on `k_max`; the catalog grows like `K^5`.
pub const DEFAULT_KMAX_LIMIT: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HarmonicLabel {
    pub k: u32,
    pub q: i32,
    pub l: u32,
    pub m: i32,
    pub nu: ExactCoeff,
    /// `(-1)^K`.
    pub parity: i8,
}

impl HarmonicLabel {
    pub fn new(k: u32, q: i32, l: u32, m: i32, nu: ExactCoeff) -> Self {
        HarmonicLabel { k, q, l, m, nu, parity: if k % 2 == 0 { 1 } else { -1 } }
    }

    /// Label of the reflection partner `(K, -Q, L, m, -ν)`.
    pub fn partner(&self) -> HarmonicLabel {
        HarmonicLabel::new(self.k, -self.q, self.l, self.m, self.nu.neg())
    }

    pub fn key(&self) -> LabelKey {
        LabelKey { k: self.k, q: self.q, l: self.l, m: self.m, nu: self.nu.to_string() }
    }

    /// Parses `K,Q,L,m,nu`, e.g. `4,0,2,2,-sqrt(105)`.
    pub fn parse(text: &str) -> Result<HarmonicLabel> {
        let parts: Vec<&str> = text.splitn(5, ',').map(str::trim).collect();
        let bad = || Error::Data(format!("label {text:?} is not of the form K,Q,L,m,nu"));
        if parts.len() != 5 {
            return Err(bad());
        }
        let k = parts[0].parse().map_err(|_| bad())?;
        let q = parts[1].parse().map_err(|_| bad())?;
        let l = parts[2].parse().map_err(|_| bad())?;
        let m = parts[3].parse().map_err(|_| bad())?;
        let nu = ExactCoeff::parse_real(parts[4])?;
        Ok(HarmonicLabel::new(k, q, l, m, nu))
    }
}

impl fmt::Display for HarmonicLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.k, self.q, self.l, self.m, self.nu)
    }
}

/// Hashable identity of a label (ν in canonical string form).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelKey {
    pub k: u32,
    pub q: i32,
    pub l: u32,
    pub m: i32,
    pub nu: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Harmonic {
    pub label: HarmonicLabel,
    pub numerator: HomoPoly,
    /// `⟨p, p⟩` over the unit sphere, a rational multiple of `π³`.
    pub norm_sq_raw: ExactCoeff,
}

impl Harmonic {
    /// `1/√⟨p, p⟩` when the norm is rational times `π³`.
    pub fn prefactor(&self) -> Result<ExactCoeff> {
        Ok(self.norm_sq_raw.sqrt_positive()?.inv()?)
    }

    /// Value of the normalised harmonic `p / √⟨p,p⟩ / R^K`.
    pub fn evaluate(&self, at: &JacobiConfig) -> Result<Complex64> {
        let r = at.hyper_radius();
        if r == 0.0 {
            return Err(Error::Data("harmonics are undefined at zero hyper-radius".into()));
        }
        let n = self.norm_sq_raw.to_f64();
        Ok(self.numerator.evaluate(at) / n.sqrt() / r.powi(self.label.k as i32))
    }
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub kmax_limit: u32,
    /// Match representative phases to the reference list where it has the label.
    pub golden_phase: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { kmax_limit: DEFAULT_KMAX_LIMIT, golden_phase: true }
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub k_max: u32,
    pub entries: Vec<Harmonic>,
    index: HashMap<LabelKey, usize>,
}

impl Catalog {
    /// Catalog over the given entries, sorted into catalog order.
    pub fn from_entries(k_max: u32, mut entries: Vec<Harmonic>) -> Self {
        entries.sort_by(|a, b| catalog_order(&a.label, &b.label));
        let index = entries.iter().enumerate().map(|(i, h)| (h.label.key(), i)).collect();
        Catalog { k_max, entries, index }
    }

    pub fn get(&self, label: &HarmonicLabel) -> Option<&Harmonic> {
        self.index.get(&label.key()).map(|&i| &self.entries[i])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn degree(&self, k: u32) -> impl Iterator<Item = &Harmonic> {
        self.entries.iter().filter(move |h| h.label.k == k)
    }
}

/// `K` ascending, `Q` descending, `L` ascending, `m` ascending, `ν` descending.
pub fn catalog_order(a: &HarmonicLabel, b: &HarmonicLabel) -> Ordering {
    a.k.cmp(&b.k)
        .then(b.q.cmp(&a.q))
        .then(a.l.cmp(&b.l))
        .then(a.m.cmp(&b.m))
        .then_with(|| nu_cmp(&b.nu, &a.nu))
}

fn nu_cmp(a: &ExactCoeff, b: &ExactCoeff) -> Ordering {
    a.checked_sub(b).and_then(|d| d.real_sign()).unwrap_or(Ordering::Equal)
}

/// `dim H_K(R^6) = C(K+5, 5) - C(K+3, 5)`.
pub fn harmonic_dimension(k: u32) -> usize {
    let c5 = |n: u32| -> usize {
        if n < 5 {
            0
        } else {
            (0..5).fold(1usize, |acc, j| acc * (n - j) as usize / (j + 1) as usize)
        }
    };
    c5(k + 5) - c5(k + 3)
}

fn poly_vectors(polys: &[HomoPoly]) -> (Vec<Monomial>, Vec<Vec<ExactCoeff>>) {
    let mut support: Vec<Monomial> = polys.iter().flat_map(|p| p.terms().map(|(m, _)| *m)).collect();
    support.sort();
    support.dedup();
    let index: HashMap<Monomial, usize> = support.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let vectors = polys
        .iter()
        .map(|p| {
            let mut v = vec![ExactCoeff::zero(); support.len()];
            for (m, c) in p.terms() {
                v[index[m]] = c.clone();
            }
            v
        })
        .collect();
    (support, vectors)
}

fn combine(polys: &[HomoPoly], coeffs: &[ExactCoeff], degree: u32) -> Result<HomoPoly> {
    let mut acc = HomoPoly::zero(degree);
    for (p, c) in polys.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = acc.add(&p.scale(c)?)?;
        }
    }
    Ok(acc)
}

/// Kernel of a family of linear maps evaluated on `polys`: the combinations
/// `Σ c_j polys[j]` with every `images[r][j]` summing to zero.
fn kernel_of_images(polys: &[HomoPoly], images: &[Vec<HomoPoly>], degree: u32) -> Result<Vec<HomoPoly>> {
    let mut rows: linalg::Matrix = Vec::new();
    for family in images {
        let (_, vecs) = poly_vectors(family);
        let height = vecs.first().map_or(0, |v| v.len());
        for r in 0..height {
            rows.push(vecs.iter().map(|v| v[r].clone()).collect());
        }
    }
    let null = linalg::nullspace(rows, polys.len())?;
    null.iter().map(|c| combine(polys, c, degree)).collect()
}

/// Exact basis of the degree-`K` harmonic polynomials, one charge sector at a time.
pub fn harmonic_subspace(k: u32) -> Result<Vec<HomoPoly>> {
    let all = monomials(k);
    let mut basis = Vec::new();
    let mut q = k as i32;
    while q >= -(k as i32) {
        let polys: Vec<HomoPoly> = all
            .iter()
            .filter(|m| m.democracy_charge() == q)
            .map(|m| HomoPoly::monomial(*m, ExactCoeff::one()))
            .collect();
        let lap: Vec<HomoPoly> = polys.iter().map(ops::apply_laplacian).collect::<Result<_>>()?;
        basis.extend(kernel_of_images(&polys, &[lap], k)?);
        q -= 2;
    }
    Ok(basis)
}

/// Highest-weight block `(K, Q, L)` with its basis of `m = L` states.
#[derive(Clone, Debug)]
pub struct LabelBlock {
    pub k: u32,
    pub q: i32,
    pub l: u32,
    pub basis: Vec<HomoPoly>,
}

/// Splits a harmonic subspace into simultaneous eigenspaces of `Q`, `L²`
/// and `L_3`, returning the highest-weight (`m = L`) block of each `(Q, L)`.
pub fn split_by_labels(subspace: &[HomoPoly], k: u32) -> Result<Vec<LabelBlock>> {
    let mut blocks = Vec::new();
    let mut q = k as i32;
    while q >= -(k as i32) {
        let projected: Vec<HomoPoly> =
            subspace.iter().map(|p| p.filter_terms(|m| m.democracy_charge() == q)).filter(|p| !p.is_zero()).collect();
        // independent spanning set of the projection
        let (_, vecs) = poly_vectors(&projected);
        let cols = vecs.first().map_or(0, |v| v.len());
        let (reduced, _) = linalg::rref(vecs, cols)?;
        let (support, _) = poly_vectors(&projected);
        let sector: Vec<HomoPoly> = reduced
            .iter()
            .map(|row| HomoPoly::from_terms(k, support.iter().zip(row).map(|(m, c)| (*m, c.clone()))))
            .collect::<Result<_>>()?;
        let mut total = 0usize;
        for l in 0..=k {
            let shifted: Vec<HomoPoly> = sector
                .iter()
                .map(|p| Ok(ops::apply_l3(p)?.sub(&p.scale_rational(&Rational::from_integer(l.into())))?))
                .collect::<Result<_>>()?;
            let raised: Vec<HomoPoly> = sector.iter().map(|p| ops::apply_ladder(p, ops::Ladder::Raise)).collect::<Result<_>>()?;
            let hw = kernel_of_images(&sector, &[shifted, raised], k)?;
            total += hw.len() * (2 * l as usize + 1);
            if !hw.is_empty() {
                blocks.push(LabelBlock { k, q, l, basis: hw });
            }
        }
        if total != sector.len() {
            return Err(Error::Multiplicity {
                k,
                q,
                l: 0,
                reason: format!("angular momentum multiplets cover {total} of {} states", sector.len()),
            });
        }
        q -= 2;
    }
    Ok(blocks)
}

/// Spherical slots `(Y_+^+, Y_-^+, Y_0^+, Y_+^-, Y_-^-, Y_0^-)` with charge `q` and projection `m`.
fn spherical_candidates(k: u32, q: i32, m: i32) -> Vec<Monomial> {
    const M_CHARGE: [i32; NVARS] = [1, -1, 0, 1, -1, 0];
    monomials(k)
        .into_iter()
        .filter(|e| e.democracy_charge() == q)
        .filter(|e| e.0.iter().zip(M_CHARGE).map(|(&x, c)| x as i32 * c).sum::<i32>() == m)
        .collect()
}

/// Basis of the highest-weight states of `(K, Q, L)`: harmonic, `L_3 = L`,
/// annihilated by `L_+`.
pub fn highest_weight_block(k: u32, q: i32, l: u32) -> Result<Vec<HomoPoly>> {
    let cands: Vec<HomoPoly> = spherical_candidates(k, q, l as i32)
        .into_iter()
        .map(|e| crate::poly::from_spherical(&HomoPoly::monomial(e, ExactCoeff::one())))
        .collect::<Result<_>>()?;
    if cands.is_empty() {
        return Ok(Vec::new());
    }
    let lap: Vec<HomoPoly> = cands.iter().map(ops::apply_laplacian).collect::<Result<_>>()?;
    let raised: Vec<HomoPoly> = cands.iter().map(|p| ops::apply_ladder(p, ops::Ladder::Raise)).collect::<Result<_>>()?;
    kernel_of_images(&cands, &[lap, raised], k)
}

fn rational_of(c: &ExactCoeff, what: &str, k: u32, q: i32, l: u32) -> Result<Rational> {
    c.as_rational().cloned().ok_or_else(|| Error::Multiplicity { k, q, l, reason: format!("{what} {c} is not rational") })
}

fn horner(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Divides by `(x - r)`; coefficients ascending.
fn deflate(coeffs: &[Rational], r: &Rational) -> Vec<Rational> {
    let n = coeffs.len() - 1;
    let mut out = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for i in (0..n).rev() {
        carry = &coeffs[i + 1] + &carry * r;
        out[i] = carry.clone();
    }
    out
}

fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c / lead);
    let seed = Complex64::new(0.4, 0.9);
    let scale = 1.0 + coeffs.iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let mut roots: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32) * scale).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 * scale {
            break;
        }
    }
    roots
}

/// Exact real roots of a rational polynomial whose roots are rational except
/// for at most one conjugate quadratic pair.
fn exact_roots(coeffs: Vec<Rational>, k: u32, q: i32, l: u32) -> Result<Vec<ExactCoeff>> {
    let mut rest = coeffs;
    let mut roots = Vec::new();
    while rest.len() > 3 {
        let approx = durand_kerner(&rest.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect::<Vec<_>>());
        let mut found = None;
        'search: for z in approx {
            if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
                continue;
            }
            for den in 1..=720i64 {
                let num = (z.re * den as f64).round() as i64;
                let r = Rational::new(num.into(), den.into());
                if horner(&rest, &r).is_zero() {
                    found = Some(r);
                    break 'search;
                }
            }
        }
        let Some(r) = found else {
            return Err(Error::Multiplicity { k, q, l, reason: format!("no exact eigenvalue found for a degree-{} factor", rest.len() - 1) });
        };
        rest = deflate(&rest, &r);
        roots.push(ExactCoeff::rational(r));
    }
    match rest.len() {
        2 => roots.push(ExactCoeff::rational(-&rest[0] / &rest[1])),
        3 => {
            let (c, b, a) = (&rest[0], &rest[1], &rest[2]);
            let disc = b * b - Rational::from_integer(4.into()) * a * c;
            if disc.is_negative() {
                return Err(Error::Multiplicity { k, q, l, reason: "complex eigenvalues".into() });
            }
            let two_a = a * Rational::from_integer(2.into());
            let centre = ExactCoeff::rational(-b / &two_a);
            let half_width = if disc.is_zero() { ExactCoeff::zero() } else { sqrt_rational(&disc)?.scale(&two_a.recip()) };
            roots.push(centre.checked_add(&half_width)?);
            roots.push(centre.checked_sub(&half_width)?);
        }
        _ => {}
    }
    Ok(roots)
}

/// Exact eigen-decomposition of `V_LQL` on a highest-weight block, ordered by
/// decreasing `ν`. Degenerate eigenvalues are an error.
pub fn split_multiplicity(block: &LabelBlock) -> Result<Vec<(ExactCoeff, HomoPoly)>> {
    let (k, q, l) = (block.k, block.q, block.l);
    let n = block.basis.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let images: Vec<HomoPoly> = block.basis.iter().map(ops::apply_vlql).collect::<Result<_>>()?;
    let mut all = block.basis.clone();
    all.extend(images.iter().cloned());
    let (_, vecs) = poly_vectors(&all);
    let (basis_vecs, image_vecs) = vecs.split_at(n);
    // m[i][j]: coefficient of basis_i in V basis_j
    let mut m = vec![vec![ExactCoeff::zero(); n]; n];
    for (j, img) in image_vecs.iter().enumerate() {
        let c = linalg::solve_in_span(basis_vecs, img)?
            .ok_or_else(|| Error::Multiplicity { k, q, l, reason: "block is not invariant under V_LQL".into() })?;
        for (i, x) in c.into_iter().enumerate() {
            m[i][j] = x;
        }
    }
    let cp = linalg::char_poly(&m)?;
    let cp: Vec<Rational> = cp.iter().map(|c| rational_of(c, "characteristic coefficient", k, q, l)).collect::<Result<_>>()?;
    let mut nus = exact_roots(cp, k, q, l)?;
    nus.sort_by(|a, b| nu_cmp(b, a));
    for w in nus.windows(2) {
        if w[0] == w[1] {
            return Err(Error::Multiplicity { k, q, l, reason: format!("degenerate eigenvalue {}", w[0]) });
        }
    }
    let mut out = Vec::with_capacity(n);
    for nu in nus {
        let shifted: linalg::Matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { m[i][j].checked_sub(&nu) } else { Ok(m[i][j].clone()) }).collect())
            .collect::<std::result::Result<_, _>>()?;
        let null = linalg::nullspace(shifted, n)?;
        if null.len() != 1 {
            return Err(Error::Multiplicity { k, q, l, reason: format!("eigenspace of {nu} has dimension {}", null.len()) });
        }
        let v = combine(&block.basis, &null[0], k)?;
        let check = ops::apply_vlql(&v)?.sub(&v.scale(&nu)?)?;
        if !check.is_zero() {
            return Err(Error::Multiplicity { k, q, l, reason: format!("eigenvector of {nu} fails verification") });
        }
        out.push((nu, v));
    }
    Ok(out)
}

/// Exact `a` with `lhs = a · rhs`, if it exists.
pub fn scalar_ratio(lhs: &HomoPoly, rhs: &HomoPoly) -> Result<Option<ExactCoeff>> {
    if lhs.degree() != rhs.degree() || lhs.len() != rhs.len() {
        return Ok(None);
    }
    let Some((m, c)) = rhs.leading() else {
        return Ok(if lhs.is_zero() { Some(ExactCoeff::zero()) } else { None });
    };
    let Some(lc) = lhs.coeff(m) else { return Ok(None) };
    let a = lc.checked_div(c)?;
    Ok((rhs.scale(&a)? == *lhs).then_some(a))
}

/// Rescales `p` so that `⟨p, p⟩` is rational times `π³`, given
/// `⟨p, p⟩ = (A + B√d) π³` with `A² - d B²` a rational square.
fn rationalize_norm(p: HomoPoly) -> Result<(HomoPoly, ExactCoeff)> {
    let n = inner_product(&p, &p)?;
    if n.surd() == 1 {
        return Ok((p, n));
    }
    let bare = n.without_pi();
    let conj_prod = bare.re_a() * bare.re_a() - bare.re_b() * bare.re_b() * Rational::from_integer(bare.surd().into());
    let root = sqrt_rational(&conj_prod)?;
    let root = root.as_rational().cloned().ok_or_else(|| Error::Data(format!("norm {n} cannot be rationalised")))?;
    let u = bare.checked_add(&ExactCoeff::rational(root))?;
    let scaled = p.scale(&u.inv()?)?;
    let n2 = inner_product(&scaled, &scaled)?;
    if n2.surd() != 1 {
        return Err(Error::Data(format!("norm {n2} is not rational after rescaling")));
    }
    Ok((scaled, n2))
}

pub struct Builder {
    options: BuildOptions,
    golden: HashMap<LabelKey, HomoPoly>,
}

impl Default for Builder {
    fn default() -> Self {
        Self::new(BuildOptions::default())
    }
}

impl Builder {
    pub fn new(options: BuildOptions) -> Self {
        let golden = if options.golden_phase {
            crate::golden::load_golden()
                .map(|entries| entries.iter().map(|g| (g.label.key(), g.body.clone())).collect())
                .unwrap_or_default()
        } else {
            HashMap::new()
        };
        Builder { options, golden }
    }

    pub fn options(&self) -> &BuildOptions {
        &self.options
    }

    /// Representative `(m = L)` phase and normalisation.
    fn phase(&self, label: &HarmonicLabel, v: HomoPoly) -> Result<Harmonic> {
        if let Some(g) = self.golden.get(&label.key()) {
            if scalar_ratio(g, &v)?.is_none() {
                return Err(Error::GoldenMismatch { label: label.to_string(), reason: "not proportional to the computed eigenvector".into() });
            }
            let norm = inner_product(g, g)?;
            return Ok(Harmonic { label: label.clone(), numerator: g.clone(), norm_sq_raw: norm });
        }
        let lead = v.leading().ok_or(Error::ZeroVector)?.1.clone();
        let unit_lead = v.scale(&lead.inv()?)?;
        let (numerator, norm) = rationalize_norm(unit_lead)?;
        Ok(Harmonic { label: label.clone(), numerator, norm_sq_raw: norm })
    }

    /// The `m = L` representatives of a block, phased and normalised, one per
    /// `ν` (all of them, including `Q = 0, ν < 0`).
    pub fn highest_weight_harmonics(&self, k: u32, q: i32, l: u32) -> Result<Vec<Harmonic>> {
        let block = LabelBlock { k, q, l, basis: highest_weight_block(k, q, l)? };
        let eig = split_multiplicity(&block)?;
        eig.into_iter().map(|(nu, v)| self.phase(&HarmonicLabel::new(k, q, l, l as i32, nu), v)).collect()
    }

    /// All `2L+1` members of the multiplet of `rep` (an `m = L` state).
    pub fn lower_multiplet(rep: &Harmonic) -> Result<Vec<Harmonic>> {
        let l = rep.label.l as i64;
        let mut out = vec![rep.clone()];
        let mut cur = rep.clone();
        for m in ((-l + 1)..=l).rev() {
            let factor = Rational::from_integer((l * (l + 1) - m * (m - 1)).into());
            let numerator = ops::apply_ladder(&cur.numerator, ops::Ladder::Lower)?;
            let mut label = cur.label.clone();
            label.m = (m - 1) as i32;
            let next = Harmonic { label, numerator, norm_sq_raw: cur.norm_sq_raw.scale(&factor) };
            out.push(next.clone());
            cur = next;
        }
        Ok(out)
    }

    fn block_entries(&self, k: u32, q: i32, l: u32) -> Result<Vec<Harmonic>> {
        let reps = self.highest_weight_harmonics(k, q, l)?;
        let mut out = Vec::new();
        let positive: Vec<&Harmonic> = reps.iter().filter(|h| q > 0 || h.label.nu.real_sign().ok() != Some(Ordering::Less)).collect();
        for h in &reps {
            if q == 0 && h.label.nu.real_sign()? == Ordering::Less {
                let partner = h.label.partner();
                if !reps.iter().any(|r| r.label == partner) {
                    return Err(Error::MissingPartner(h.label.to_string()));
                }
            }
        }
        for rep in positive {
            let multiplet = Self::lower_multiplet(rep)?;
            let self_partner = q == 0 && rep.label.nu.is_zero();
            if !self_partner {
                for h in &multiplet {
                    out.push(reflected_partner(h)?);
                }
            }
            out.extend(multiplet);
        }
        Ok(out)
    }

    pub fn build_catalog(&self, k_max: u32) -> Result<Catalog> {
        if k_max > self.options.kmax_limit {
            return Err(Error::KmaxTooLarge { requested: k_max, limit: self.options.kmax_limit });
        }
        let mut jobs = Vec::new();
        for k in 0..=k_max {
            for q in (0..=k as i32).rev().filter(|q| (k as i32 - q) % 2 == 0) {
                for l in 0..=k {
                    jobs.push((k, q, l));
                }
            }
        }
        let parts: Vec<Vec<Harmonic>> = jobs.par_iter().map(|&(k, q, l)| self.block_entries(k, q, l)).collect::<Result<_>>()?;
        let catalog = Catalog::from_entries(k_max, parts.into_iter().flatten().collect());
        for k in 0..=k_max {
            let n = catalog.degree(k).count();
            if n != harmonic_dimension(k) {
                return Err(Error::Data(format!("degree {k} has {n} states, expected {}", harmonic_dimension(k))));
            }
        }
        Ok(catalog)
    }
}

/// Entries violating `Δp = 0` or one of the `Q`, `L²`, `L_3`, `V_LQL`
/// eigen-equations, as `(check, label)`.
pub fn eigen_failures(catalog: &Catalog) -> Result<Vec<(String, String)>> {
    let per_entry: Vec<Vec<(String, String)>> = catalog
        .entries
        .par_iter()
        .map(|h| -> Result<Vec<(String, String)>> {
            let p = &h.numerator;
            let lb = &h.label;
            let l = lb.l as i64;
            let mut out = Vec::new();
            if !ops::apply_laplacian(p)?.is_zero() {
                out.push(("Laplacian".to_string(), lb.to_string()));
            }
            let checks = [
                ("Q", ops::apply_democracy(p)?, ExactCoeff::from_int(lb.q as i64)),
                ("L^2", ops::apply_l_squared(p)?, ExactCoeff::from_int(l * (l + 1))),
                ("L_3", ops::apply_l3(p)?, ExactCoeff::from_int(lb.m as i64)),
                ("V_LQL", ops::apply_vlql(p)?, lb.nu.clone()),
            ];
            for (name, image, value) in checks {
                if image != p.scale(&value)? {
                    out.push((format!("{name} eigenvalue"), lb.to_string()));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(per_entry.into_iter().flatten().collect())
}

/// `(-1)^{K-L} p(X^+ ↔ X^-)` with the label `(K, -Q, L, m, -ν)`.
pub fn reflected_partner(h: &Harmonic) -> Result<Harmonic> {
    let mut numerator = Transposition::P12.apply(&h.numerator)?;
    if (h.label.k - h.label.l) % 2 == 1 {
        numerator = numerator.neg();
    }
    Ok(Harmonic { label: h.label.partner(), numerator, norm_sq_raw: h.norm_sq_raw.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu(n: i64) -> ExactCoeff {
        ExactCoeff::from_int(n)
    }

    #[test]
    fn dimensions_match_the_binomial_formula() {
        let expected = [1, 6, 20, 50, 105];
        for (k, &d) in expected.iter().enumerate() {
            assert_eq!(harmonic_dimension(k as u32), d);
        }
        for k in 0..=3 {
            assert_eq!(harmonic_subspace(k).unwrap().len(), expected[k as usize]);
        }
    }

    #[test]
    fn generic_split_agrees_with_highest_weight_route() {
        for k in 0..=3u32 {
            let sub = harmonic_subspace(k).unwrap();
            let blocks = split_by_labels(&sub, k).unwrap();
            for b in &blocks {
                let fast = highest_weight_block(b.k, b.q, b.l).unwrap();
                assert_eq!(fast.len(), b.basis.len(), "block ({}, {}, {})", b.k, b.q, b.l);
            }
            let covered: usize = blocks.iter().map(|b| b.basis.len() * (2 * b.l as usize + 1)).sum();
            assert_eq!(covered, harmonic_dimension(k));
        }
    }

    #[test]
    fn degree_one_blocks() {
        let sub = harmonic_subspace(1).unwrap();
        let blocks = split_by_labels(&sub, 1).unwrap();
        let labels: Vec<(i32, u32, usize)> = blocks.iter().map(|b| (b.q, b.l, b.basis.len())).collect();
        assert_eq!(labels, vec![(1, 1, 1), (-1, 1, 1)]);
        assert!(highest_weight_block(2, 0, 0).unwrap().is_empty());
        assert_eq!(split_by_labels(&harmonic_subspace(0).unwrap(), 0).unwrap().len(), 1);
    }

    #[test]
    fn multiplicity_eigenvalues() {
        let b = LabelBlock { k: 1, q: 1, l: 1, basis: highest_weight_block(1, 1, 1).unwrap() };
        assert_eq!(split_multiplicity(&b).unwrap()[0].0, nu(-1));
        let b = LabelBlock { k: 3, q: 1, l: 1, basis: highest_weight_block(3, 1, 1).unwrap() };
        assert_eq!(split_multiplicity(&b).unwrap()[0].0, nu(3));
        let b = LabelBlock { k: 4, q: 0, l: 2, basis: highest_weight_block(4, 0, 2).unwrap() };
        let nus: Vec<ExactCoeff> = split_multiplicity(&b).unwrap().into_iter().map(|(n, _)| n).collect();
        let r105 = sqrt_rational(&Rational::from_integer(105.into())).unwrap();
        assert_eq!(nus, vec![r105.clone(), r105.neg()]);
    }

    #[test]
    fn normalisation_examples() {
        let b = Builder::new(BuildOptions { golden_phase: false, ..Default::default() });
        let c = b.highest_weight_harmonics(0, 0, 0).unwrap();
        assert_eq!(c[0].prefactor().unwrap().to_string(), "pi^(-3/2)");
        let h = &b.highest_weight_harmonics(1, 1, 1).unwrap()[0];
        assert_eq!(h.prefactor().unwrap().to_string(), "sqrt(6)/2*pi^(-3/2)");
        let h = &b.highest_weight_harmonics(4, 4, 4).unwrap()[0];
        assert_eq!(h.prefactor().unwrap().to_string(), "sqrt(15)/4*pi^(-3/2)");
        assert_eq!(h.label.nu, nu(-10));
    }

    #[test]
    fn small_catalogs() {
        let b = Builder::default();
        assert_eq!(b.build_catalog(0).unwrap().len(), 1);
        let c = b.build_catalog(2).unwrap();
        assert_eq!(c.len(), 27);
        let first = &c.entries[1].label;
        assert_eq!((first.k, first.q, first.l, first.m), (1, 1, 1, -1));
        assert!(matches!(b.build_catalog(9), Err(Error::KmaxTooLarge { requested: 9, limit: 8 })));
    }

    #[test]
    fn label_parsing() {
        let l = HarmonicLabel::parse("4,0,2,2,-sqrt(105)").unwrap();
        assert_eq!(l.to_string(), "(4,0,2,2,-sqrt(105))");
        assert_eq!(l.parity, 1);
        assert!(HarmonicLabel::parse("1,1,1").is_err());
    }
}
