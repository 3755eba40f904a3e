//! Sparse homogeneous polynomials in the complex Jacobi coordinates
//! `X_i^± = λ_i ± iρ_i`.
//!
//! Variable slots are ordered `X_1^+, X_2^+, X_3^+, X_1^-, X_2^-, X_3^-`.
//! Terms are kept in graded-lexicographic order with the leading monomial
//! first, and zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeff::{ExactCoeff, Rational};
use crate::error::{Error, Result};
use crate::linalg;

pub const NVARS: usize = 6;

/// One of the six complex coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Plus1,
    Plus2,
    Plus3,
    Minus1,
    Minus2,
    Minus3,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::Plus1, Var::Plus2, Var::Plus3, Var::Minus1, Var::Minus2, Var::Minus3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        Self::ALL[i]
    }

    /// `X_{axis+1}^+` for `axis` in `0..3`.
    pub fn plus(axis: usize) -> Var {
        Self::ALL[axis]
    }

    /// `X_{axis+1}^-` for `axis` in `0..3`.
    pub fn minus(axis: usize) -> Var {
        Self::ALL[axis + 3]
    }

    pub fn axis(self) -> usize {
        self.index() % 3
    }

    pub fn is_plus(self) -> bool {
        self.index() < 3
    }

    /// The complex-conjugate coordinate (`X^+ ↔ X^-`).
    pub fn conjugate(self) -> Var {
        Self::ALL[(self.index() + 3) % NVARS]
    }
}

/// Exponent vector over the six coordinates.
///
/// Ordering is graded-lex *descending*: iterating a sorted collection of
/// monomials yields the leading one first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial(pub [u8; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exponent(&self, v: Var) -> u8 {
        self.0[v.index()]
    }

    /// Number of `X^+` factors minus number of `X^-` factors.
    pub fn democracy_charge(&self) -> i32 {
        let plus: i32 = self.0[..3].iter().map(|&e| e as i32).sum();
        let minus: i32 = self.0[3..].iter().map(|&e| e as i32).sum();
        plus - minus
    }

    /// Per-axis charge `a_i^+ - a_i^-`; a product of monomials integrates to
    /// a non-zero value on the sphere only if every component vanishes.
    pub fn axis_charge(&self) -> [i32; 3] {
        [0, 1, 2].map(|i| self.0[i] as i32 - self.0[i + 3] as i32)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        Monomial(e)
    }

    /// Exponents with the `+` and `-` halves swapped.
    pub fn conjugate(&self) -> Monomial {
        let e = self.0;
        Monomial([e[3], e[4], e[5], e[0], e[1], e[2]])
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All degree-`k` monomials, leading first. There are `C(k+5, 5)` of them.
pub fn monomials(k: u32) -> Vec<Monomial> {
    fn rec(slot: usize, left: u32, cur: &mut [u8; NVARS], out: &mut Vec<Monomial>) {
        if slot == NVARS - 1 {
            cur[slot] = left as u8;
            out.push(Monomial(*cur));
            return;
        }
        for e in (0..=left).rev() {
            cur[slot] = e as u8;
            rec(slot + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, k, &mut [0; NVARS], &mut out);
    out.sort();
    out
}

/// A Jacobi configuration `(λ, ρ)` in desk units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobiConfig {
    pub lambda: [f64; 3],
    pub rho: [f64; 3],
}

impl JacobiConfig {
    pub fn new(lambda: [f64; 3], rho: [f64; 3]) -> Self {
        JacobiConfig { lambda, rho }
    }

    pub fn hyper_radius(&self) -> f64 {
        let s: f64 = self.lambda.iter().chain(self.rho.iter()).map(|x| x * x).sum();
        s.sqrt()
    }

    /// Values of the six complex coordinates.
    pub fn x_values(&self) -> [Complex64; NVARS] {
        let mut out = [Complex64::new(0.0, 0.0); NVARS];
        for i in 0..3 {
            out[i] = Complex64::new(self.lambda[i], self.rho[i]);
            out[i + 3] = Complex64::new(self.lambda[i], -self.rho[i]);
        }
        out
    }

    pub fn scaled(&self, t: f64) -> Self {
        JacobiConfig { lambda: self.lambda.map(|x| x * t), rho: self.rho.map(|x| x * t) }
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, ExactCoeff>, m: Monomial, c: ExactCoeff) -> Result<()> {
    if c.is_zero() {
        return Ok(());
    }
    match terms.get_mut(&m) {
        Some(existing) => {
            let sum = existing.checked_add(&c)?;
            if sum.is_zero() {
                terms.remove(&m);
            } else {
                *existing = sum;
            }
        }
        None => {
            terms.insert(m, c);
        }
    }
    Ok(())
}

/// Homogeneous polynomial of fixed degree in `X_i^±`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomoPoly {
    degree: u32,
    terms: BTreeMap<Monomial, ExactCoeff>,
}

impl HomoPoly {
    pub fn zero(degree: u32) -> Self {
        HomoPoly { degree, terms: BTreeMap::new() }
    }

    pub fn constant(c: ExactCoeff) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v), ExactCoeff::one())
    }

    pub fn monomial(m: Monomial, c: ExactCoeff) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        HomoPoly { degree: m.degree(), terms }
    }

    pub fn from_terms<I>(degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, ExactCoeff)>,
    {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            if m.degree() != degree {
                return Err(Error::InhomogeneousTerm { expected: degree, found: m.degree() });
            }
            add_term(&mut map, m, c)?;
        }
        Ok(HomoPoly { degree, terms: map })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order, leading monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactCoeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&ExactCoeff> {
        self.terms.get(m)
    }

    pub fn leading(&self) -> Option<(&Monomial, &ExactCoeff)> {
        self.terms.iter().next()
    }

    pub fn add(&self, other: &HomoPoly) -> Result<HomoPoly> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, *m, c.clone())?;
        }
        Ok(HomoPoly { degree: self.degree, terms })
    }

    pub fn sub(&self, other: &HomoPoly) -> Result<HomoPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HomoPoly {
        HomoPoly { degree: self.degree, terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn scale(&self, s: &ExactCoeff) -> Result<HomoPoly> {
        if s.is_zero() {
            return Ok(HomoPoly::zero(self.degree));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(*m, c.checked_mul(s)?);
        }
        Ok(HomoPoly { degree: self.degree, terms })
    }

    pub fn scale_rational(&self, q: &Rational) -> HomoPoly {
        if num_traits::Zero::is_zero(q) {
            return HomoPoly::zero(self.degree);
        }
        HomoPoly { degree: self.degree, terms: self.terms.iter().map(|(m, c)| (*m, c.scale(q))).collect() }
    }

    pub fn mul(&self, other: &HomoPoly) -> Result<HomoPoly> {
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                add_term(&mut terms, m1.mul(m2), c1.checked_mul(c2)?)?;
            }
        }
        Ok(HomoPoly { degree: self.degree + other.degree, terms })
    }

    pub fn pow(&self, n: u32) -> Result<HomoPoly> {
        let mut acc = HomoPoly::constant(ExactCoeff::one());
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `∂p/∂v`; the result has degree `K-1` (degree 0 when `K = 0`).
    pub fn differentiate(&self, v: Var) -> HomoPoly {
        let degree = self.degree.saturating_sub(1);
        let i = v.index();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut n = m.0;
            n[i] -= 1;
            terms.insert(Monomial(n), c.scale(&Rational::from_integer(e.into())));
        }
        HomoPoly { degree, terms }
    }

    /// `X_a ∂/∂X_b`, the degree-preserving building block of every generator.
    pub fn shift(&self, a: Var, b: Var) -> HomoPoly {
        let (ia, ib) = (a.index(), b.index());
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[ib];
            if e == 0 {
                continue;
            }
            let mut n = m.0;
            n[ib] -= 1;
            n[ia] += 1;
            // distinct source monomials map to distinct targets
            terms.insert(Monomial(n), c.scale(&Rational::from_integer(e.into())));
        }
        HomoPoly { degree: self.degree, terms }
    }

    /// Complex conjugate for real `(λ, ρ)`: coefficients conjugated and
    /// `X^+ ↔ X^-` swapped.
    pub fn conjugate(&self) -> HomoPoly {
        HomoPoly { degree: self.degree, terms: self.terms.iter().map(|(m, c)| (m.conjugate(), c.conj())).collect() }
    }

    /// Keeps only the terms whose monomials satisfy `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> HomoPoly {
        HomoPoly {
            degree: self.degree,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// `p ∘ M`: every variable `v` is replaced by its image under `map`.
    pub fn substitute_linear(&self, map: &LinearMap) -> Result<HomoPoly> {
        if !map.is_invertible()? {
            return Err(Error::SingularMap);
        }
        self.substitute_unchecked(map)
    }

    pub(crate) fn substitute_unchecked(&self, map: &LinearMap) -> Result<HomoPoly> {
        let images: Vec<HomoPoly> = (0..NVARS).map(|v| map.image(Var::from_index(v))).collect::<Result<_>>()?;
        // powers[v][e] = image_v^e
        let mut powers: Vec<Vec<HomoPoly>> = images.iter().map(|img| vec![HomoPoly::constant(ExactCoeff::one()), img.clone()]).collect();
        let mut out = HomoPoly::zero(self.degree);
        for (m, c) in &self.terms {
            let mut prod = HomoPoly::constant(c.clone());
            for v in 0..NVARS {
                let e = m.0[v] as usize;
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e {
                    let next = powers[v].last().expect("non-empty").mul(&images[v])?;
                    powers[v].push(next);
                }
                prod = prod.mul(&powers[v][e])?;
            }
            for (pm, pc) in prod.terms {
                add_term(&mut out.terms, pm, pc)?;
            }
        }
        Ok(out)
    }

    /// Floating-point value at a Jacobi configuration (no division by `R^K`).
    pub fn evaluate(&self, at: &JacobiConfig) -> Complex64 {
        let x = at.x_values();
        let mut sum = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex64();
            for v in 0..NVARS {
                let e = m.0[v] as i32;
                if e > 0 {
                    t *= x[v].powi(e);
                }
            }
            sum += t;
        }
        sum
    }

    /// Exact value at given exact values of the six coordinates.
    pub fn evaluate_exact(&self, x: &[ExactCoeff; NVARS]) -> Result<ExactCoeff> {
        let mut sum = ExactCoeff::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in 0..NVARS {
                t = t.checked_mul(&x[v].pow(m.0[v] as u32)?)?;
            }
            sum = sum.checked_add(&t)?;
        }
        Ok(sum)
    }

    /// Expansion in real Jacobi coordinates, keyed by exponents of
    /// `(λ1, λ2, λ3, ρ1, ρ2, ρ3)`.
    pub fn to_real_terms(&self) -> Result<BTreeMap<[u8; NVARS], ExactCoeff>> {
        let mut out: BTreeMap<[u8; NVARS], ExactCoeff> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut partial: Vec<([u8; NVARS], ExactCoeff)> = vec![([0; NVARS], c.clone())];
            for axis in 0..3 {
                let factor = axis_real_expansion(m.0[axis] as u32, m.0[axis + 3] as u32);
                let mut next = Vec::with_capacity(partial.len() * factor.len());
                for (e, pc) in &partial {
                    for (u, v, fc) in &factor {
                        let mut ne = *e;
                        ne[axis] = *u as u8;
                        ne[axis + 3] = *v as u8;
                        next.push((ne, pc.checked_mul(fc)?));
                    }
                }
                partial = next;
            }
            for (e, pc) in partial {
                let slot = out.entry(e).or_insert_with(ExactCoeff::zero);
                *slot = slot.checked_add(&pc)?;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }
}

/// `(λ + iρ)^a (λ - iρ)^b = Σ c_uv λ^u ρ^v`, as `(u, v, c_uv)` with zero terms dropped.
pub fn axis_real_expansion(a: u32, b: u32) -> Vec<(u32, u32, ExactCoeff)> {
    use num_bigint::BigInt;
    let binom = |n: u32, k: u32| -> BigInt {
        let mut r = BigInt::from(1);
        for j in 0..k {
            r = r * BigInt::from(n - j) / BigInt::from(j + 1);
        }
        r
    };
    let n = a + b;
    // coefficient of ρ^v, as a Gaussian integer (re, im)
    let mut acc: Vec<(BigInt, BigInt)> = vec![(BigInt::from(0), BigInt::from(0)); (n + 1) as usize];
    for j in 0..=a {
        for k in 0..=b {
            let mag = binom(a, j) * binom(b, k);
            // i^j (-i)^k = i^{j+3k}
            let (re, im) = match (j + 3 * k) % 4 {
                0 => (mag.clone(), BigInt::from(0)),
                1 => (BigInt::from(0), mag.clone()),
                2 => (-mag.clone(), BigInt::from(0)),
                _ => (BigInt::from(0), -mag.clone()),
            };
            let slot = &mut acc[(j + k) as usize];
            slot.0 += re;
            slot.1 += im;
        }
    }
    acc.into_iter()
        .enumerate()
        .filter_map(|(v, (re, im))| {
            let c = ExactCoeff::gaussian(Rational::from_integer(re), Rational::from_integer(im));
            (!c.is_zero()).then(|| (n - v as u32, v as u32, c))
        })
        .collect()
}

impl fmt::Display for HomoPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; NVARS] = ["X1+", "X2+", "X3+", "X1-", "X2-", "X3-"];
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for (v, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", NAMES[v])?,
                    _ => write!(f, "*{}^{}", NAMES[v], e)?,
                }
            }
        }
        Ok(())
    }
}

/// Serialised term: `{exp: [a1..a6], coeff}` with the variable order of [`Var::ALL`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub exp: [u8; NVARS],
    pub coeff: ExactCoeff,
}

impl HomoPoly {
    pub fn to_term_list(&self) -> Vec<TermJson> {
        self.terms.iter().map(|(m, c)| TermJson { exp: m.0, coeff: c.clone() }).collect()
    }

    pub fn from_term_list(degree: u32, terms: &[TermJson]) -> Result<HomoPoly> {
        HomoPoly::from_terms(degree, terms.iter().map(|t| (Monomial(t.exp), t.coeff.clone())))
    }
}

/// Linear change of the six coordinates: variable `v` maps to
/// `Σ_w rows[v][w] X_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    rows: Vec<Vec<ExactCoeff>>,
}

impl LinearMap {
    pub fn from_rows(rows: Vec<Vec<ExactCoeff>>) -> Result<Self> {
        if rows.len() != NVARS || rows.iter().any(|r| r.len() != NVARS) {
            return Err(Error::Data("linear map must be 6x6".into()));
        }
        Ok(LinearMap { rows })
    }

    pub fn identity() -> Self {
        let rows = (0..NVARS)
            .map(|i| (0..NVARS).map(|j| if i == j { ExactCoeff::one() } else { ExactCoeff::zero() }).collect())
            .collect();
        LinearMap { rows }
    }

    /// Scaled swap `X_i^± → c_± X_i^∓`.
    pub fn swap_signs(c_plus: ExactCoeff, c_minus: ExactCoeff) -> Self {
        let mut m = Self::zeros();
        for axis in 0..3 {
            m.rows[Var::plus(axis).index()][Var::minus(axis).index()] = c_plus.clone();
            m.rows[Var::minus(axis).index()][Var::plus(axis).index()] = c_minus.clone();
        }
        m
    }

    fn zeros() -> Self {
        LinearMap { rows: vec![vec![ExactCoeff::zero(); NVARS]; NVARS] }
    }

    /// Interprets slots as `(Y_+^+, Y_-^+, Y_0^+, Y_+^-, Y_-^-, Y_0^-)` and maps
    /// them to `Y_±^σ = X_1^σ ± i X_2^σ`, `Y_0^σ = X_3^σ`.
    pub fn spherical_to_cartesian() -> Self {
        let mut m = Self::zeros();
        for (base, sign_off) in [(0usize, 0usize), (3, 3)] {
            let _ = sign_off;
            m.rows[base][base] = ExactCoeff::one();
            m.rows[base][base + 1] = ExactCoeff::i();
            m.rows[base + 1][base] = ExactCoeff::one();
            m.rows[base + 1][base + 1] = ExactCoeff::i().neg();
            m.rows[base + 2][base + 2] = ExactCoeff::one();
        }
        m
    }

    /// Inverse of [`LinearMap::spherical_to_cartesian`].
    pub fn cartesian_to_spherical() -> Self {
        let half = ExactCoeff::ratio(1, 2);
        let half_i = ExactCoeff::gaussian(Rational::from_integer(0.into()), Rational::new(1.into(), 2.into()));
        let mut m = Self::zeros();
        for base in [0usize, 3] {
            m.rows[base][base] = half.clone();
            m.rows[base][base + 1] = half.clone();
            m.rows[base + 1][base] = half_i.neg();
            m.rows[base + 1][base + 1] = half_i.clone();
            m.rows[base + 2][base + 2] = ExactCoeff::one();
        }
        m
    }

    pub fn entry(&self, v: usize, w: usize) -> &ExactCoeff {
        &self.rows[v][w]
    }

    pub fn image(&self, v: Var) -> Result<HomoPoly> {
        HomoPoly::from_terms(1, (0..NVARS).map(|w| (Monomial::var(Var::from_index(w)), self.rows[v.index()][w].clone())))
    }

    pub fn is_invertible(&self) -> Result<bool> {
        Ok(linalg::rank(self.rows.clone())? == NVARS)
    }

    /// `y_v = Σ_w rows[v][w] x_w`, so that `(p ∘ M)(x) = p(M·x)`.
    pub fn apply(&self, x: &[ExactCoeff; NVARS]) -> Result<[ExactCoeff; NVARS]> {
        let mut out: [ExactCoeff; NVARS] = std::array::from_fn(|_| ExactCoeff::zero());
        for v in 0..NVARS {
            let mut acc = ExactCoeff::zero();
            for w in 0..NVARS {
                acc = acc.checked_add(&self.rows[v][w].checked_mul(&x[w])?)?;
            }
            out[v] = acc;
        }
        Ok(out)
    }
}

/// Builds a polynomial from spherical-variable exponents
/// `(Y_+^+, Y_-^+, Y_0^+, Y_+^-, Y_-^-, Y_0^-)`.
pub fn from_spherical(p: &HomoPoly) -> Result<HomoPoly> {
    p.substitute_unchecked(&LinearMap::spherical_to_cartesian())
}

/// Rewrites an X-polynomial in spherical-variable exponents.
pub fn to_spherical(p: &HomoPoly) -> Result<HomoPoly> {
    p.substitute_unchecked(&LinearMap::cartesian_to_spherical())
}

/// `R² = Σ_i X_i^+ X_i^-`.
pub fn r_squared() -> HomoPoly {
    HomoPoly::from_terms(
        2,
        (0..3).map(|i| (Monomial::var(Var::plus(i)).mul(&Monomial::var(Var::minus(i))), ExactCoeff::one())),
    )
    .expect("degree 2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Transposition;
    use proptest::prelude::*;

    fn x(v: Var) -> HomoPoly {
        HomoPoly::var(v)
    }

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn y_plus(sign: bool) -> HomoPoly {
        // Y_+^± = X_1^± + i X_2^±
        let (a, b) = if sign { (Var::Plus1, Var::Plus2) } else { (Var::Minus1, Var::Minus2) };
        x(a).add(&x(b).scale(&ExactCoeff::i()).unwrap()).unwrap()
    }

    fn abs_y_sq(sign: bool) -> HomoPoly {
        let vars: Vec<Var> = if sign { (0..3).map(Var::plus).collect() } else { (0..3).map(Var::minus).collect() };
        let mut acc = HomoPoly::zero(2);
        for v in vars {
            acc = acc.add(&x(v).mul(&x(v)).unwrap()).unwrap();
        }
        acc
    }

    #[test]
    fn product_of_conjugate_coordinates() {
        let p = x(Var::Plus1).mul(&x(Var::Minus1)).unwrap();
        assert_eq!(p.degree(), 2);
        let real = p.to_real_terms().unwrap();
        // λ1² + ρ1²
        assert_eq!(real.len(), 2);
        assert_eq!(real[&[2, 0, 0, 0, 0, 0]], ExactCoeff::one());
        assert_eq!(real[&[0, 0, 0, 2, 0, 0]], ExactCoeff::one());
    }

    #[test]
    fn cancellation_yields_zero_of_same_degree() {
        let p = x(Var::Plus2).mul(&x(Var::Minus3)).unwrap();
        let z = p.add(&p.neg()).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), 2);
        assert!(matches!(p.add(&x(Var::Plus1)), Err(Error::DegreeMismatch(2, 1))));
    }

    #[test]
    fn abs_y_plus_squared_in_real_coordinates() {
        // Y_+^+ Y_-^+ + (Y_0^+)^2 = λ² - ρ² + 2iλ·ρ
        let real = abs_y_sq(true).to_real_terms().unwrap();
        for axis in 0..3 {
            let mut l2 = [0u8; 6];
            l2[axis] = 2;
            let mut r2 = [0u8; 6];
            r2[axis + 3] = 2;
            let mut lr = [0u8; 6];
            lr[axis] = 1;
            lr[axis + 3] = 1;
            assert_eq!(real[&l2], ExactCoeff::one());
            assert_eq!(real[&r2], ExactCoeff::from_int(-1));
            assert_eq!(real[&lr], ExactCoeff::gaussian(q(0, 1), q(2, 1)));
        }
        assert_eq!(real.len(), 9);
        // the spherical form agrees
        let ypp = y_plus(true);
        let ymp = x(Var::Plus1).sub(&x(Var::Plus2).scale(&ExactCoeff::i()).unwrap()).unwrap();
        let alt = ypp.mul(&ymp).unwrap().add(&x(Var::Plus3).mul(&x(Var::Plus3)).unwrap()).unwrap();
        assert_eq!(alt, abs_y_sq(true));
    }

    #[test]
    fn transposition_maps() {
        let p12 = Transposition::P12.linear_map();
        assert_eq!(x(Var::Plus1).substitute_linear(&p12).unwrap(), x(Var::Minus1));
        let p23 = Transposition::P23.linear_map();
        let w = ExactCoeff::cube_root_of_unity(1);
        assert_eq!(w, ExactCoeff::real_surd(q(-1, 2), q(0, 1), 1).unwrap().checked_add(&ExactCoeff::i().checked_mul(&crate::coeff::sqrt_rational(&q(3, 4)).unwrap()).unwrap()).unwrap());
        assert_eq!(x(Var::Plus1).substitute_linear(&p23).unwrap(), x(Var::Minus1).scale(&w).unwrap());
        let p = abs_y_sq(true).mul(&x(Var::Minus2)).unwrap();
        assert_eq!(p.substitute_linear(&LinearMap::identity()).unwrap(), p);
    }

    #[test]
    fn singular_map_rejected() {
        let mut rows = vec![vec![ExactCoeff::zero(); 6]; 6];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i.min(4)] = ExactCoeff::one();
        }
        let m = LinearMap::from_rows(rows).unwrap();
        assert!(matches!(x(Var::Plus1).substitute_linear(&m), Err(Error::SingularMap)));
    }

    #[test]
    fn derivatives() {
        let sq = x(Var::Plus1).mul(&x(Var::Plus1)).unwrap();
        assert_eq!(sq.differentiate(Var::Plus1), x(Var::Plus1).scale_rational(&q(2, 1)));
        let d = sq.differentiate(Var::Minus1);
        assert!(d.is_zero());
        assert_eq!(d.degree(), 1);
        let p = x(Var::Plus1).mul(&x(Var::Plus2)).unwrap().mul(&x(Var::Minus3)).unwrap();
        assert_eq!(p.differentiate(Var::Plus2), x(Var::Plus1).mul(&x(Var::Minus3)).unwrap());
        assert!(HomoPoly::constant(ExactCoeff::one()).differentiate(Var::Plus1).is_zero());
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(x(Var::Plus1).conjugate(), x(Var::Minus1));
        let p = x(Var::Plus1).mul(&x(Var::Minus2)).unwrap().scale(&ExactCoeff::i()).unwrap();
        let expect = x(Var::Minus1).mul(&x(Var::Plus2)).unwrap().scale(&ExactCoeff::i().neg()).unwrap();
        assert_eq!(p.conjugate(), expect);
        // conj(|Y+|^2) = |Y-|^2, checked through the real-coordinate expansions
        let lhs = abs_y_sq(true).conjugate().to_real_terms().unwrap();
        let rhs = abs_y_sq(false).to_real_terms().unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_examples() {
        // √(3/2)/π^{3/2} · Y_+^+ at λ = e1, ρ = 0
        let c = ExactCoeff::parse_real("sqrt(3/2)*pi^(-3/2)").unwrap();
        let num = y_plus(true).scale(&c).unwrap();
        let v = num.evaluate(&JacobiConfig::new([1.0, 0.0, 0.0], [0.0; 3]));
        let expected = (1.5f64).sqrt() / std::f64::consts::PI.powf(1.5);
        assert!((v.re - expected).abs() < 1e-13 * expected && v.im.abs() < 1e-15);
        assert!((v.re - 0.219948).abs() < 1e-6);

        // √3 (Y_+^- Y_0^+ - Y_+^+ Y_0^-) at λ=(0,0,1), ρ=(1,0,0): printed Jacobi form gives
        // 2√3(λ3(ρ2 - iρ1) + i(λ1 + iλ2)ρ3) = 2√3·(−i)… evaluate both
        let c3 = ExactCoeff::parse_real("sqrt(3)*pi^(-3/2)").unwrap();
        let num = y_plus(false).mul(&x(Var::Plus3)).unwrap().sub(&y_plus(true).mul(&x(Var::Minus3)).unwrap()).unwrap().scale(&c3).unwrap();
        let at = JacobiConfig::new([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]);
        let v = num.evaluate(&at);
        let (l, r) = (at.lambda, at.rho);
        let printed = num_complex::Complex64::new(0.0, 0.0)
            + num_complex::Complex64::new(l[2], 0.0) * num_complex::Complex64::new(r[1], -r[0])
            + num_complex::Complex64::new(0.0, 1.0) * num_complex::Complex64::new(l[0], l[1]) * r[2];
        let printed = printed * 2.0 * 3f64.sqrt() / std::f64::consts::PI.powf(1.5);
        assert!((v - printed).norm() < 1e-13);

        let k2 = abs_y_sq(true);
        assert_eq!(k2.evaluate(&JacobiConfig::new([0.0; 3], [0.0; 3])).norm(), 0.0);
    }

    #[test]
    fn monomial_count_and_order() {
        assert_eq!(monomials(4).len(), 126);
        assert_eq!(monomials(2).len(), 21);
        let m = monomials(3);
        assert_eq!(m[0], Monomial([3, 0, 0, 0, 0, 0]));
        assert_eq!(*m.last().unwrap(), Monomial([0, 0, 0, 0, 0, 3]));
    }

    #[test]
    fn spherical_maps_are_inverse() {
        let p = abs_y_sq(true).mul(&x(Var::Minus2)).unwrap();
        let there = to_spherical(&p).unwrap();
        assert_eq!(from_spherical(&there).unwrap(), p);
    }

    fn arb_coeff() -> impl Strategy<Value = ExactCoeff> {
        (-6i64..6, 1i64..4, -6i64..6).prop_map(|(a, d, b)| ExactCoeff::gaussian(q(a, d), q(b, 1)))
    }

    fn arb_poly(deg: u32) -> impl Strategy<Value = HomoPoly> {
        let ms = monomials(deg);
        let n = ms.len();
        proptest::collection::vec((0..n, arb_coeff()), 1..5)
            .prop_map(move |ts| HomoPoly::from_terms(deg, ts.into_iter().map(|(i, c)| (ms[i], c))).unwrap())
    }

    fn arb_point() -> impl Strategy<Value = [ExactCoeff; 6]> {
        proptest::collection::vec(arb_coeff(), 6).prop_map(|v| std::array::from_fn(|i| v[i].clone()))
    }

    fn arb_map() -> impl Strategy<Value = LinearMap> {
        prop_oneof![
            Just(Transposition::P12.linear_map()),
            Just(Transposition::P23.linear_map()),
            Just(Transposition::P31.linear_map()),
            Just(LinearMap::spherical_to_cartesian()),
            proptest::collection::vec(-2i64..3, 36).prop_map(|v| {
                let rows = (0..6)
                    .map(|i| (0..6).map(|j| ExactCoeff::from_int(v[i * 6 + j] + if i == j { 7 } else { 0 })).collect())
                    .collect();
                LinearMap::from_rows(rows).unwrap()
            }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn substitution_is_multiplicative(p in arb_poly(2), r in arb_poly(1), m in arb_map()) {
            let lhs = p.mul(&r).unwrap().substitute_linear(&m).unwrap();
            let rhs = p.substitute_linear(&m).unwrap().mul(&r.substitute_linear(&m).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn substitution_commutes_with_evaluation(p in arb_poly(2), m in arb_map(), pt in arb_point()) {
            let lhs = p.substitute_linear(&m).unwrap().evaluate_exact(&pt).unwrap();
            let rhs = p.evaluate_exact(&m.apply(&pt).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn conjugation_is_an_involution(p in arb_poly(3), l in proptest::array::uniform3(-2.0f64..2.0), r in proptest::array::uniform3(-2.0f64..2.0)) {
            prop_assert_eq!(p.conjugate().conjugate(), p.clone());
            let at = JacobiConfig::new(l, r);
            let a = p.conjugate().evaluate(&at);
            let b = p.evaluate(&at).conj();
            prop_assert!((a - b).norm() <= 1e-9 * (1.0 + b.norm()));
        }

        #[test]
        fn homogeneity(p in arb_poly(3), pt in arb_point(), t in (-5i64..5, 1i64..4)) {
            let t = ExactCoeff::ratio(t.0, t.1);
            let scaled: [ExactCoeff; 6] = std::array::from_fn(|i| pt[i].checked_mul(&t).unwrap());
            let lhs = p.evaluate_exact(&scaled).unwrap();
            let rhs = p.evaluate_exact(&pt).unwrap().checked_mul(&t.pow(3).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
