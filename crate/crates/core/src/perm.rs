//! Particle transpositions and the permutation-adapted basis.
//!
//! On the complex coordinates `P12: X^± → X^∓`, `P23: X^± → ω^{±1} X^∓`,
//! `P31: X^± → ω^{∓1} X^∓` with `ω = e^{2πi/3}`. A harmonic of charge `Q`
//! therefore satisfies `P23 p = ω^Q P12 p` and `P31 p = ω^{-Q} P12 p`.
//!
//! The adapted states are `p ± (-1)^{K-L} p'` where `p'` is the
//! `(K, -Q, L, m, -ν)` partner; `+` is even under `P12`. For `|Q| ≢ 0 (mod 3)`
//! the pair is mixed (`+` ↔ `M_λ`, `-` ↔ `M_ρ`, the latter negated for
//! `|Q| ≡ 2 (mod 3)`), otherwise `+` is symmetric and `-` antisymmetric.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::build::{scalar_ratio, Catalog, Harmonic};
use crate::coeff::{ExactCoeff, Rational};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::poly::{HomoPoly, JacobiConfig, LinearMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Transposition {
    P12,
    P23,
    P31,
}

impl Transposition {
    pub const ALL: [Transposition; 3] = [Transposition::P12, Transposition::P23, Transposition::P31];

    /// Powers `(a, b)` with `X^+ → ω^a X^-`, `X^- → ω^b X^+`.
    fn omega_powers(self) -> (i64, i64) {
        match self {
            Transposition::P12 => (0, 0),
            Transposition::P23 => (1, -1),
            Transposition::P31 => (-1, 1),
        }
    }

    pub fn linear_map(self) -> LinearMap {
        let (a, b) = self.omega_powers();
        LinearMap::swap_signs(ExactCoeff::cube_root_of_unity(a), ExactCoeff::cube_root_of_unity(b))
    }

    /// `p ∘ P_t`. Each monomial of charge `Q_m` maps to `ω^{a Q_m}` times its
    /// conjugate, so no coefficient leaves the field of `p` unless `Q_m ≢ 0 (mod 3)`.
    pub fn apply(self, p: &HomoPoly) -> Result<HomoPoly> {
        let (a, _) = self.omega_powers();
        let terms = p
            .terms()
            .map(|(m, c)| Ok((m.conjugate(), c.checked_mul(&ExactCoeff::cube_root_of_unity(a * m.democracy_charge() as i64))?)))
            .collect::<Result<Vec<_>>>()?;
        HomoPoly::from_terms(p.degree(), terms)
    }

    /// `p ∘ P_t` by generic linear substitution.
    pub fn apply_by_substitution(self, p: &HomoPoly) -> Result<HomoPoly> {
        p.substitute_linear(&self.linear_map())
    }

    /// Phase `e^{±2πiQ/3}` picked up by a charge-`Q` harmonic (1 for `P12`).
    pub fn phase(self, q: i32) -> ExactCoeff {
        ExactCoeff::cube_root_of_unity(self.omega_powers().0 * q as i64)
    }

    /// The real-space action on `(λ, ρ)`.
    pub fn apply_config(self, c: &JacobiConfig) -> JacobiConfig {
        let h = 3f64.sqrt() / 2.0;
        let (l, r) = (c.lambda, c.rho);
        match self {
            Transposition::P12 => JacobiConfig::new(l, r.map(|x| -x)),
            Transposition::P23 => JacobiConfig::new(
                std::array::from_fn(|i| -0.5 * l[i] + h * r[i]),
                std::array::from_fn(|i| 0.5 * r[i] + h * l[i]),
            ),
            Transposition::P31 => JacobiConfig::new(
                std::array::from_fn(|i| -0.5 * l[i] - h * r[i]),
                std::array::from_fn(|i| 0.5 * r[i] - h * l[i]),
            ),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Transposition::P12 => "P12",
            Transposition::P23 => "P23",
            Transposition::P31 => "P31",
        }
    }
}

/// `P_t` applied to a catalog numerator.
pub fn transpose(h: &Harmonic, t: Transposition) -> Result<HomoPoly> {
    t.apply(&h.numerator)
}

fn sign_power(k: u32, l: u32) -> i64 {
    if (k - l) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// True when `a/√na = phase · b/√nb` exactly.
fn normalised_equal(a: &HomoPoly, na: &ExactCoeff, b: &HomoPoly, nb: &ExactCoeff, phase: &ExactCoeff) -> Result<bool> {
    if na == nb {
        return Ok(*a == b.scale(phase)?);
    }
    let Some(r) = scalar_ratio(a, b)? else { return Ok(false) };
    // r = phase · √(na/nb) with the root positive
    let t = r.checked_div(phase)?;
    if !t.is_real() || t.real_sign()? != std::cmp::Ordering::Greater {
        return Ok(false);
    }
    Ok(t.checked_mul(&t)? == na.checked_div(nb)?)
}

/// One failed check, named after the law it contradicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawFailure {
    pub law: String,
    pub state: String,
}

/// Checks `P_t Y^{K,Q,ν}_{L,m} = (-1)^{K-L} e^{±2πiQ/3} Y^{K,-Q,-ν}_{L,m}` for
/// every catalog entry and transposition, and that `P12` is an involution.
pub fn check_permutation_law(catalog: &Catalog) -> Result<Vec<LawFailure>> {
    use rayon::prelude::*;
    let failures: Vec<Vec<LawFailure>> = catalog
        .entries
        .par_iter()
        .map(|h| -> Result<Vec<LawFailure>> {
            let mut out = Vec::new();
            let partner = catalog.get(&h.label.partner()).ok_or_else(|| Error::MissingPartner(h.label.to_string()))?;
            let s = ExactCoeff::from_int(sign_power(h.label.k, h.label.l));
            for t in Transposition::ALL {
                let image = transpose(h, t)?;
                let phase = s.checked_mul(&t.phase(h.label.q))?;
                if !normalised_equal(&image, &h.norm_sq_raw, &partner.numerator, &partner.norm_sq_raw, &phase)? {
                    out.push(LawFailure { law: format!("transposition law {}", t.name()), state: h.label.to_string() });
                }
            }
            if Transposition::P12.apply(&transpose(h, Transposition::P12)?)? != h.numerator {
                out.push(LawFailure { law: "P12 involution".into(), state: h.label.to_string() });
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(failures.into_iter().flatten().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SymClass {
    S,
    A,
    MRho,
    MLambda,
}

impl SymClass {
    pub fn from_rule(abs_q: u32, sign: i8) -> SymClass {
        match (abs_q % 3 == 0, sign > 0) {
            (false, true) => SymClass::MLambda,
            (false, false) => SymClass::MRho,
            (true, true) => SymClass::S,
            (true, false) => SymClass::A,
        }
    }

    pub fn is_mixed(self) -> bool {
        matches!(self, SymClass::MRho | SymClass::MLambda)
    }

    /// `56`, `20` or `70`.
    pub fn su6(self) -> &'static str {
        match self {
            SymClass::S => "56",
            SymClass::A => "20",
            _ => "70",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymHarmonic {
    pub k: u32,
    pub abs_q: u32,
    pub l: u32,
    pub m: i32,
    /// `ν` of the `Q ≥ 0` (for `Q = 0`: `ν ≥ 0`) member.
    pub nu: ExactCoeff,
    pub sign: i8,
    pub class: SymClass,
    /// SU(6) tag such as `70'`.
    pub su6: String,
    #[serde(skip)]
    pub numerator: HomoPoly,
    pub norm_sq_raw: ExactCoeff,
}

impl SymHarmonic {
    /// `(K,|Q|,L,ν,±)`.
    pub fn row_label(&self) -> String {
        format!("({},|{}|,{},{},{})", self.k, self.abs_q, self.l, self.nu, if self.sign > 0 { '+' } else { '-' })
    }

    /// `[70',2+]`.
    pub fn su6_label(&self) -> String {
        format!("[{},{}{}]", self.su6, self.l, if self.k % 2 == 0 { '+' } else { '-' })
    }

    pub fn multiplet_key(&self) -> (u32, u32, u32, String, i8) {
        (self.k, self.abs_q, self.l, self.nu.to_string(), self.sign)
    }
}

impl fmt::Display for SymHarmonic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} m={} {}", self.row_label(), self.m, self.su6_label())
    }
}

/// Builds the S/A/M adapted states from a catalog.
pub fn symmetry_adapt(catalog: &Catalog) -> Result<Vec<SymHarmonic>> {
    let mut out = Vec::new();
    for h in &catalog.entries {
        let lb = &h.label;
        let base = lb.q > 0 || (lb.q == 0 && lb.nu.real_sign()? != std::cmp::Ordering::Less);
        if !base {
            continue;
        }
        let s = sign_power(lb.k, lb.l);
        let abs_q = lb.q.unsigned_abs();
        let mk = |sign: i8, numerator: HomoPoly, norm: ExactCoeff| SymHarmonic {
            k: lb.k,
            abs_q,
            l: lb.l,
            m: lb.m,
            nu: lb.nu.clone(),
            sign,
            class: SymClass::from_rule(abs_q, sign),
            su6: String::new(),
            numerator,
            norm_sq_raw: norm,
        };
        if lb.q == 0 && lb.nu.is_zero() {
            // self-partnered: only the P12 eigen-combination survives
            let image = Transposition::P12.apply(&h.numerator)?;
            let sign = if image == h.numerator {
                1
            } else if image == h.numerator.neg() {
                -1
            } else {
                return Err(Error::Data(format!("{lb} is not a P12 eigenstate")));
            };
            out.push(mk(sign, h.numerator.clone(), h.norm_sq_raw.clone()));
            continue;
        }
        let partner = catalog.get(&lb.partner()).ok_or_else(|| Error::MissingPartner(lb.to_string()))?;
        if partner.norm_sq_raw != h.norm_sq_raw {
            return Err(Error::Data(format!("{lb} and its partner carry different norms")));
        }
        let signed = partner.numerator.scale(&ExactCoeff::from_int(s))?;
        let two = Rational::from_integer(2.into());
        out.push(mk(1, h.numerator.add(&signed)?, h.norm_sq_raw.scale(&two)));
        let minus = h.numerator.sub(&signed)?.scale(&ExactCoeff::from_int(rho_sign(abs_q)))?;
        out.push(mk(-1, minus, h.norm_sq_raw.scale(&two)));
    }
    assign_su6_tags(&mut out);
    Ok(out)
}

/// Sign of `M_ρ = ±(p - s q)`. Flipping it for `|Q| ≡ 2 (mod 3)` makes every
/// mixed pair transform with the same matrices as the `(λ, ρ)` pair at `K = 1`.
fn rho_sign(abs_q: u32) -> i64 {
    if abs_q % 3 == 2 {
        -1
    } else {
        1
    }
}

/// `70` for the first mixed multiplet of each `(K, L)` by increasing `|Q|`
/// (then decreasing `ν`), `70'`, `70''`, ... for later ones.
fn assign_su6_tags(states: &mut [SymHarmonic]) {
    let mut mixed: BTreeMap<(u32, u32), Vec<(u32, ExactCoeff)>> = BTreeMap::new();
    for s in states.iter().filter(|s| s.class.is_mixed()) {
        let list = mixed.entry((s.k, s.l)).or_default();
        if !list.iter().any(|(q, nu)| *q == s.abs_q && *nu == s.nu) {
            list.push((s.abs_q, s.nu.clone()));
        }
    }
    for list in mixed.values_mut() {
        list.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.checked_sub(&a.1).and_then(|d| d.real_sign()).unwrap_or(std::cmp::Ordering::Equal)));
    }
    for s in states.iter_mut() {
        s.su6 = if s.class.is_mixed() {
            let pos = mixed[&(s.k, s.l)].iter().position(|(q, nu)| *q == s.abs_q && *nu == s.nu).unwrap_or(0);
            format!("70{}", "'".repeat(pos))
        } else {
            s.class.su6().to_string()
        };
    }
}

/// Outcome of the S3 representation checks.
#[derive(Clone, Debug, Default, Serialize)]
pub struct S3Report {
    pub states_checked: usize,
    pub mixed_pairs_checked: usize,
    pub failures: Vec<LawFailure>,
}

impl S3Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Coefficients `(x, y)` of `image = x·plus + y·minus`, where
/// `plus = p + s q` and `minus = σ(p - s q)` with `p` the positive-charge part.
fn pair_coordinates(image: &HomoPoly, p: &HomoPoly, sq: &HomoPoly, sigma: i64) -> Result<Option<(ExactCoeff, ExactCoeff)>> {
    let img_pos = image.filter_terms(|m| m.democracy_charge() > 0);
    let img_neg = image.filter_terms(|m| m.democracy_charge() < 0);
    let (Some(alpha), Some(beta)) = (scalar_ratio(&img_pos, p)?, scalar_ratio(&img_neg, sq)?) else {
        return Ok(None);
    };
    let half = Rational::new(1.into(), 2.into());
    let x = alpha.checked_add(&beta)?.scale(&half);
    let y = alpha.checked_sub(&beta)?.scale(&(half * Rational::from_integer(sigma.into())));
    Ok(Some((x, y)))
}

/// `D(P12), D(P23), D(P31)` of a mixed pair, or `None` if some image leaves
/// the span.
fn pair_matrices(plus: &SymHarmonic, minus: &SymHarmonic) -> Result<Option<Vec<Matrix>>> {
    let half = Rational::new(1.into(), 2.into());
    let sigma = rho_sign(plus.abs_q);
    let unsigned_minus = minus.numerator.scale(&ExactCoeff::from_int(sigma))?;
    let p = plus.numerator.add(&unsigned_minus)?.scale_rational(&half);
    let sq = plus.numerator.sub(&unsigned_minus)?.scale_rational(&half);
    let mut mats = Vec::new();
    for t in Transposition::ALL {
        let mut d = vec![vec![ExactCoeff::zero(); 2]; 2];
        for (j, st) in [plus, minus].iter().enumerate() {
            let Some((x, y)) = pair_coordinates(&t.apply(&st.numerator)?, &p, &sq, sigma)? else { return Ok(None) };
            d[0][j] = x;
            d[1][j] = y;
        }
        mats.push(d);
    }
    Ok(Some(mats))
}

fn conj_transpose(m: &Matrix) -> Matrix {
    (0..m[0].len()).map(|i| (0..m.len()).map(|j| m[j][i].conj()).collect()).collect()
}

/// Checks that S states are invariant, A states flip sign, and each mixed
/// pair carries a two-dimensional representation: unitary matrices that are
/// real orthogonal reflections once `M_ρ` is rephased by `i`, obeying
/// `D(P12) D(P23) D(P12) = D(P31)` and identical for every pair.
pub fn verify_s3_action(states: &[SymHarmonic]) -> Result<S3Report> {
    let mut report = S3Report::default();
    let mut pairs: BTreeMap<(u32, u32, u32, i32, String), [Option<&SymHarmonic>; 2]> = BTreeMap::new();
    for s in states {
        report.states_checked += 1;
        match s.class {
            SymClass::S | SymClass::A => {
                let sign = if s.class == SymClass::S { 1 } else { -1 };
                let expect = s.numerator.scale(&ExactCoeff::from_int(sign))?;
                for t in Transposition::ALL {
                    if t.apply(&s.numerator)? != expect {
                        report.failures.push(LawFailure {
                            law: format!("{} state under {}", if sign > 0 { "symmetric" } else { "antisymmetric" }, t.name()),
                            state: s.to_string(),
                        });
                    }
                }
            }
            SymClass::MLambda | SymClass::MRho => {
                let slot = usize::from(s.class == SymClass::MRho);
                pairs.entry((s.k, s.abs_q, s.l, s.m, s.nu.to_string())).or_default()[slot] = Some(s);
            }
        }
    }
    let mut reference: Option<Vec<Matrix>> = None;
    for pair in pairs.values() {
        let [Some(plus), Some(minus)] = pair else {
            let s = pair.iter().flatten().next().expect("non-empty entry");
            report.failures.push(LawFailure { law: "mixed pair completeness".into(), state: s.to_string() });
            continue;
        };
        report.mixed_pairs_checked += 1;
        let label = plus.to_string();
        let Some(mats) = pair_matrices(plus, minus)? else {
            report.failures.push(LawFailure { law: "mixed pair closure under transpositions".into(), state: label });
            continue;
        };
        for (t, d) in Transposition::ALL.iter().zip(&mats) {
            if linalg::mat_mul(d, &conj_transpose(d))? != linalg::identity(2) {
                report.failures.push(LawFailure { law: format!("unitarity of {}", t.name()), state: label.clone() });
            }
            // rephase M_ρ → i M_ρ
            let i = ExactCoeff::i();
            let r = vec![
                vec![d[0][0].clone(), d[0][1].checked_mul(&i)?],
                vec![d[1][0].checked_mul(&i.neg())?, d[1][1].clone()],
            ];
            let real = r.iter().flatten().all(|x| x.is_real());
            let det = r[0][0].checked_mul(&r[1][1])?.checked_sub(&r[0][1].checked_mul(&r[1][0])?)?;
            let rt: Matrix = (0..2).map(|a| (0..2).map(|b| r[b][a].clone()).collect()).collect();
            if !real || linalg::mat_mul(&r, &rt)? != linalg::identity(2) || det != ExactCoeff::from_int(-1) {
                report.failures.push(LawFailure { law: format!("orthogonal reflection for {}", t.name()), state: label.clone() });
            }
        }
        let composed = linalg::mat_mul(&linalg::mat_mul(&mats[0], &mats[1])?, &mats[0])?;
        if composed != mats[2] {
            report.failures.push(LawFailure { law: "group relation P12 P23 P12 = P31".into(), state: label.clone() });
        }
        match &reference {
            None => reference = Some(mats),
            Some(r) if *r != mats => report.failures.push(LawFailure { law: "same matrices as every other mixed pair".into(), state: label }),
            Some(_) => {}
        }
    }
    Ok(report)
}

/// Exact 2×2 matrices `D(P12), D(P23), D(P31)` of a mixed pair, columns being
/// the images of `(M_λ, M_ρ)`.
pub fn mixed_pair_matrices(plus: &SymHarmonic, minus: &SymHarmonic) -> Result<Vec<Matrix>> {
    pair_matrices(plus, minus)?.ok_or_else(|| Error::Data(format!("{plus} is not closed under the transpositions")))
}
