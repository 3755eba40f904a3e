//! Exact scalars.
//!
//! An [`ExactCoeff`] is a complex number whose real and imaginary parts live
//! in a single quadratic extension `Q(√d)`, times an explicit power `π^{k/2}`.
//! Every value the harmonic pipeline produces (normalisation constants,
//! sphere moments, multiplicity eigenvalues such as `±√105`, the cube roots of
//! unity that appear under transpositions) fits this shape, so nothing is
//! ever rounded.
//!
//! Arithmetic between two values carrying different non-trivial surds is
//! rejected instead of being approximated.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::CoeffError;

pub type Rational = BigRational;

/// `((re_a + re_b√d) + i(im_a + im_b√d)) · π^{pi_half_power/2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "CoeffJson", try_from = "CoeffJson")]
pub struct ExactCoeff {
    re_a: Rational,
    re_b: Rational,
    im_a: Rational,
    im_b: Rational,
    surd: u64,
    pi_half_power: i32,
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn compatible_surd(d1: u64, d2: u64) -> Result<u64, CoeffError> {
    if d1 == d2 || d2 == 1 {
        Ok(d1)
    } else if d1 == 1 {
        Ok(d2)
    } else {
        Err(CoeffError::IncompatibleSurd(d1, d2))
    }
}

// (a1 + b1√d)(a2 + b2√d)
fn qmul(a1: &Rational, b1: &Rational, a2: &Rational, b2: &Rational, d: u64) -> (Rational, Rational) {
    let dd = rat(d as i64);
    (a1 * a2 + b1 * b2 * dd, a1 * b2 + b1 * a2)
}

/// Sign of `a + b√d` for square-free `d`.
fn surd_sign(a: &Rational, b: &Rational, d: u64) -> Ordering {
    let sa = a.cmp(&Rational::zero());
    let sb = b.cmp(&Rational::zero());
    if sb == Ordering::Equal || d == 0 {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    let lhs = a * a;
    let rhs = b * b * rat(d as i64);
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

impl ExactCoeff {
    fn raw(re_a: Rational, re_b: Rational, im_a: Rational, im_b: Rational, surd: u64, pi_half_power: i32) -> Self {
        ExactCoeff { re_a, re_b, im_a, im_b, surd, pi_half_power }.canonical()
    }

    fn canonical(mut self) -> Self {
        if self.surd == 0 {
            self.re_b = Rational::zero();
            self.im_b = Rational::zero();
        } else if self.surd == 1 {
            let rb = std::mem::replace(&mut self.re_b, Rational::zero());
            let ib = std::mem::replace(&mut self.im_b, Rational::zero());
            self.re_a += rb;
            self.im_a += ib;
        }
        if self.re_b.is_zero() && self.im_b.is_zero() {
            self.surd = 1;
        }
        if self.re_a.is_zero() && self.im_a.is_zero() && self.surd == 1 {
            self.pi_half_power = 0;
        }
        self
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(rat(n))
    }

    pub fn rational(q: Rational) -> Self {
        Self::raw(q, Rational::zero(), Rational::zero(), Rational::zero(), 1, 0)
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn gaussian(re: Rational, im: Rational) -> Self {
        Self::raw(re, Rational::zero(), im, Rational::zero(), 1, 0)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::gaussian(Rational::zero(), Rational::one())
    }

    /// `a + b√d` with `d` square-free.
    pub fn real_surd(a: Rational, b: Rational, d: u64) -> Result<Self, CoeffError> {
        Self::from_parts(a, b, Rational::zero(), Rational::zero(), d, 0)
    }

    pub fn from_parts(
        re_a: Rational,
        re_b: Rational,
        im_a: Rational,
        im_b: Rational,
        surd: u64,
        pi_half_power: i32,
    ) -> Result<Self, CoeffError> {
        if surd > 1 && !is_square_free(surd) {
            return Err(CoeffError::NotSquareFree(surd));
        }
        Ok(Self::raw(re_a, re_b, im_a, im_b, surd, pi_half_power))
    }

    /// `e^{2πi n/3}`, exact.
    pub fn cube_root_of_unity(n: i64) -> Self {
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        match n.rem_euclid(3) {
            0 => Self::one(),
            1 => Self::raw(-half.clone(), Rational::zero(), Rational::zero(), half, 3, 0),
            _ => Self::raw(-half.clone(), Rational::zero(), Rational::zero(), -half, 3, 0),
        }
    }

    /// Multiplies by `π^{k/2}`.
    pub fn times_pi_half_power(mut self, k: i32) -> Self {
        if !self.is_zero() {
            self.pi_half_power += k;
        }
        self
    }

    pub fn re_a(&self) -> &Rational {
        &self.re_a
    }
    pub fn re_b(&self) -> &Rational {
        &self.re_b
    }
    pub fn im_a(&self) -> &Rational {
        &self.im_a
    }
    pub fn im_b(&self) -> &Rational {
        &self.im_b
    }
    pub fn surd(&self) -> u64 {
        self.surd
    }
    pub fn pi_half_power(&self) -> i32 {
        self.pi_half_power
    }

    pub fn is_zero(&self) -> bool {
        self.re_a.is_zero() && self.im_a.is_zero() && self.re_b.is_zero() && self.im_b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn is_real(&self) -> bool {
        self.im_a.is_zero() && self.im_b.is_zero()
    }

    /// True when the value is a plain rational number (no surd, no π, no i).
    pub fn is_rational(&self) -> bool {
        self.is_real() && self.surd == 1 && self.pi_half_power == 0
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.re_a)
    }

    /// Integer value, if this is a rational integer.
    pub fn as_integer(&self) -> Option<i64> {
        self.as_rational().filter(|q| q.is_integer()).and_then(|q| q.to_integer().to_i64())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CoeffError> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.pi_half_power != other.pi_half_power {
            return Err(CoeffError::PiPowerMismatch(self.pi_half_power, other.pi_half_power));
        }
        let d = compatible_surd(self.surd, other.surd)?;
        Ok(Self::raw(
            &self.re_a + &other.re_a,
            &self.re_b + &other.re_b,
            &self.im_a + &other.im_a,
            &self.im_b + &other.im_b,
            d,
            self.pi_half_power,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CoeffError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CoeffError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        if self.is_pure_surd() && other.is_pure_surd() && self.surd != other.surd {
            return self.mul_pure_surds(other);
        }
        let d = compatible_surd(self.surd, other.surd)?;
        let (rr_a, rr_b) = qmul(&self.re_a, &self.re_b, &other.re_a, &other.re_b, d);
        let (ii_a, ii_b) = qmul(&self.im_a, &self.im_b, &other.im_a, &other.im_b, d);
        let (ri_a, ri_b) = qmul(&self.re_a, &self.re_b, &other.im_a, &other.im_b, d);
        let (ir_a, ir_b) = qmul(&self.im_a, &self.im_b, &other.re_a, &other.re_b, d);
        Ok(Self::raw(
            rr_a - ii_a,
            rr_b - ii_b,
            ri_a + ir_a,
            ri_b + ir_b,
            d,
            self.pi_half_power + other.pi_half_power,
        ))
    }

    /// `(x + iy)√d` with `d > 1`.
    fn is_pure_surd(&self) -> bool {
        self.surd > 1 && self.re_a.is_zero() && self.im_a.is_zero()
    }

    /// `(z√d)(w√e) = zw·g·√(de/g²)` with `g = gcd(d, e)`.
    fn mul_pure_surds(&self, other: &Self) -> Result<Self, CoeffError> {
        let g = self.surd.gcd(&other.surd);
        let d = (self.surd / g)
            .checked_mul(other.surd / g)
            .ok_or_else(|| CoeffError::SurdTooLarge(format!("{} * {}", self.surd, other.surd)))?;
        let g = rat(g as i64);
        let re = (&self.re_b * &other.re_b - &self.im_b * &other.im_b) * &g;
        let im = (&self.re_b * &other.im_b + &self.im_b * &other.re_b) * &g;
        let pi = self.pi_half_power + other.pi_half_power;
        Ok(if d == 1 {
            Self::raw(re, Rational::zero(), im, Rational::zero(), 1, pi)
        } else {
            Self::raw(Rational::zero(), re, Rational::zero(), im, d, pi)
        })
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::raw(
            &self.re_a * q,
            &self.re_b * q,
            &self.im_a * q,
            &self.im_b * q,
            self.surd,
            self.pi_half_power,
        )
    }

    pub fn neg(&self) -> Self {
        Self::raw(
            -self.re_a.clone(),
            -self.re_b.clone(),
            -self.im_a.clone(),
            -self.im_b.clone(),
            self.surd,
            self.pi_half_power,
        )
    }

    pub fn conj(&self) -> Self {
        Self::raw(
            self.re_a.clone(),
            self.re_b.clone(),
            -self.im_a.clone(),
            -self.im_b.clone(),
            self.surd,
            self.pi_half_power,
        )
    }

    /// Squared modulus `x · conj(x)`, a real value in the same extension.
    pub fn mod_sq(&self) -> Self {
        self.checked_mul(&self.conj()).expect("a value is always compatible with its conjugate")
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        let n = self.mod_sq();
        let d = n.surd;
        let a = &n.re_a;
        let b = &n.re_b;
        let den = a * a - b * b * rat(d as i64);
        let inv_n = Self::raw(a / &den, -(b / &den), Rational::zero(), Rational::zero(), d, -n.pi_half_power);
        self.conj().checked_mul(&inv_n)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CoeffError> {
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, n: u32) -> Result<Self, CoeffError> {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Sign of a real value.
    pub fn real_sign(&self) -> Result<Ordering, CoeffError> {
        if !self.is_real() {
            return Err(CoeffError::NotReal(self.to_string()));
        }
        Ok(surd_sign(&self.re_a, &self.re_b, self.surd))
    }

    /// Square root of a positive value of the form `q · π^{k/2}` with `k` even.
    pub fn sqrt_positive(&self) -> Result<Self, CoeffError> {
        if !self.is_real() || self.surd != 1 || self.pi_half_power % 2 != 0 {
            return Err(CoeffError::UnsupportedSqrt(self.to_string()));
        }
        Ok(sqrt_rational(&self.re_a)?.times_pi_half_power(self.pi_half_power / 2))
    }

    /// The value with the π factor stripped.
    pub fn without_pi(&self) -> Self {
        let mut c = self.clone();
        c.pi_half_power = 0;
        c
    }

    fn pi_factor(&self) -> f64 {
        std::f64::consts::PI.powf(self.pi_half_power as f64 / 2.0)
    }

    pub fn to_complex64(&self) -> Complex64 {
        let s = (self.surd as f64).sqrt();
        let f = |q: &Rational| q.to_f64().unwrap_or(f64::NAN);
        let re = f(&self.re_a) + f(&self.re_b) * s;
        let im = f(&self.im_a) + f(&self.im_b) * s;
        Complex64::new(re, im) * self.pi_factor()
    }

    /// Real part as a float.
    pub fn to_f64(&self) -> f64 {
        self.to_complex64().re
    }

    /// Fixed-point decimal rendering with `digits` places after the point.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let guard = digits + 25;
        let sqrt_d = approx_sqrt(&rat(self.surd as i64), guard);
        let pi_f = approx_pi_power(self.pi_half_power, guard);
        let re = (&self.re_a + &self.re_b * &sqrt_d) * &pi_f;
        let im = (&self.im_a + &self.im_b * &sqrt_d) * &pi_f;
        let re_s = format_fixed(&re, digits);
        if self.is_real() {
            return re_s;
        }
        let im_s = format_fixed(&im.abs(), digits);
        let sign = if im.is_negative() { '-' } else { '+' };
        format!("{re_s}{sign}{im_s}i")
    }

    /// Parses real surd expressions such as `-12*sqrt(3)/35`, `15/2 - sqrt(105)/2`
    /// or `sqrt(3/2)`; an optional trailing `*pi^(k/2)` sets the π power.
    pub fn parse_real(text: &str) -> Result<Self, CoeffError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(CoeffError::Parse(text.to_string()));
        }
        let (body, pi_half) = match s.find("pi^(") {
            Some(pos) => {
                let tail = &s[pos + 4..];
                let inner = tail.strip_suffix(')').ok_or_else(|| CoeffError::Parse(text.to_string()))?;
                let k = match inner.split_once('/') {
                    Some((num, "2")) => num.parse::<i32>().map_err(|_| CoeffError::Parse(text.to_string()))?,
                    None => 2 * inner.parse::<i32>().map_err(|_| CoeffError::Parse(text.to_string()))?,
                    _ => return Err(CoeffError::Parse(text.to_string())),
                };
                let head = &s[..pos];
                let head = match head.strip_suffix('*') {
                    Some(h) => h,
                    None if head.is_empty() => "1",
                    None if head == "-" => "-1",
                    None => return Err(CoeffError::Parse(text.to_string())),
                };
                let head = head.strip_prefix('(').and_then(|h| h.strip_suffix(')')).unwrap_or(head);
                (head, k)
            }
            None => (s.as_str(), 0),
        };
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = body.as_bytes();
        let mut depth = 0;
        for (idx, &ch) in bytes.iter().enumerate() {
            match ch {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && idx > 0 && bytes[idx - 1] != b'*' && bytes[idx - 1] != b'/' => {
                    terms.push(&body[start..idx]);
                    start = idx;
                }
                _ => {}
            }
        }
        terms.push(&body[start..]);
        let mut acc = Self::zero();
        for t in terms {
            acc = acc.checked_add(&parse_term(t).map_err(|_| CoeffError::Parse(text.to_string()))?)?;
        }
        Ok(acc.times_pi_half_power(pi_half))
    }
}

fn parse_rational(s: &str) -> Result<Rational, CoeffError> {
    let err = || CoeffError::Parse(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p).map_err(|_| err())?;
            let q = BigInt::from_str(q).map_err(|_| err())?;
            if q.is_zero() {
                return Err(CoeffError::DivisionByZero);
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| err())?)),
    }
}

fn parse_term(term: &str) -> Result<ExactCoeff, CoeffError> {
    let (neg, t) = match term.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, term.strip_prefix('+').unwrap_or(term)),
    };
    let value = match t.find("sqrt(") {
        None => ExactCoeff::rational(parse_rational(t)?),
        Some(pos) => {
            let mut before = t[..pos].trim_end_matches('*');
            let divide = before.ends_with('/');
            if divide {
                before = &before[..before.len() - 1];
            }
            let close = t[pos..].find(')').ok_or_else(|| CoeffError::Parse(term.to_string()))? + pos;
            let radicand = parse_rational(&t[pos + 5..close])?;
            let after = &t[close + 1..];
            let mut factor = if before.is_empty() { Rational::one() } else { parse_rational(before)? };
            if let Some(den) = after.strip_prefix('/') {
                factor /= parse_rational(den)?;
            } else if !after.is_empty() {
                return Err(CoeffError::Parse(term.to_string()));
            }
            let root = sqrt_rational(&radicand)?;
            if divide {
                root.inv()?.scale(&factor)
            } else {
                root.scale(&factor)
            }
        }
    };
    Ok(if neg { value.neg() } else { value })
}

impl FromStr for ExactCoeff {
    type Err = CoeffError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_real(s)
    }
}

/// True when no square of a prime divides `n`.
pub fn is_square_free(n: u64) -> bool {
    let (s, _) = square_free_split(&BigUint::from(n));
    s.is_one()
}

/// Writes `n = s² · d` with `d` square-free.
pub fn square_free_split(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::one(), BigUint::zero());
    }
    let mut rest = n.clone();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    let mut p = 2u64;
    loop {
        let pb = BigUint::from(p);
        if &pb * &pb * &pb > rest {
            break;
        }
        let mut count = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            count += 1;
        }
        for _ in 0..count / 2 {
            square *= &pb;
        }
        if count % 2 == 1 {
            free *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // What remains has at most two prime factors, both larger than the cube root.
    let r = rest.sqrt();
    if &r * &r == rest && !rest.is_one() {
        square *= r;
    } else {
        free *= rest;
    }
    (square, free)
}

/// `√q` for a positive rational, as `a·√d` with `d` square-free.
pub fn sqrt_rational(q: &Rational) -> Result<ExactCoeff, CoeffError> {
    if !q.is_positive() {
        return Err(CoeffError::NonPositiveSqrt(q.to_string()));
    }
    let num = q.numer().to_biguint().expect("positive");
    let den = q.denom().to_biguint().expect("positive");
    let (s, d) = square_free_split(&(num * &den));
    let coeff = Rational::new(BigInt::from(s), BigInt::from(den));
    let d = d.to_u64().ok_or_else(|| CoeffError::SurdTooLarge(d.to_string()))?;
    if d == 1 {
        Ok(ExactCoeff::rational(coeff))
    } else {
        Ok(ExactCoeff::raw(Rational::zero(), coeff, Rational::zero(), Rational::zero(), d, 0))
    }
}

const PI_DIGITS: &str = "3141592653589793238462643383279502884197169399375105820974944592307816406286208998628034825342117067982148086513282306647093844609550582231725359408128";

fn pow10(n: usize) -> BigInt {
    num_traits::pow(BigInt::from(10), n)
}

fn approx_pi(digits: usize) -> Rational {
    let digits = digits.min(PI_DIGITS.len() - 1);
    let n = BigInt::from_str(&PI_DIGITS[..digits + 1]).expect("digits");
    Rational::new(n, pow10(digits))
}

fn approx_sqrt(q: &Rational, digits: usize) -> Rational {
    let scale = pow10(digits);
    let scaled = (q * Rational::from_integer(&scale * &scale)).to_integer();
    Rational::new(scaled.sqrt(), scale)
}

fn approx_pi_power(k: i32, digits: usize) -> Rational {
    if k == 0 {
        return Rational::one();
    }
    let pi = approx_pi(digits + 10);
    let sqrt_pi = approx_sqrt(&pi, digits + 10);
    let mut acc = Rational::one();
    for _ in 0..(k.unsigned_abs() / 2) {
        acc *= &pi;
    }
    if k.unsigned_abs() % 2 == 1 {
        acc *= &sqrt_pi;
    }
    if k < 0 {
        acc.recip()
    } else {
        acc
    }
}

fn format_fixed(q: &Rational, digits: usize) -> String {
    let scale = pow10(digits);
    let scaled = (q.abs() * Rational::from_integer(scale.clone())).round().to_integer();
    let (int, frac) = scaled.div_rem(&scale);
    let sign = if q.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
    }
}

fn fmt_surd_part(f: &mut String, a: &Rational, b: &Rational, d: u64) {
    let mut pieces: Vec<(bool, String)> = Vec::new();
    if !a.is_zero() {
        pieces.push((a.is_negative(), a.abs().to_string()));
    }
    if !b.is_zero() {
        let p = b.numer().abs();
        let q = b.denom();
        let mut s = String::new();
        if !p.is_one() {
            s.push_str(&format!("{p}*"));
        }
        s.push_str(&format!("sqrt({d})"));
        if !q.is_one() {
            s.push_str(&format!("/{q}"));
        }
        pieces.push((b.is_negative(), s));
    }
    for (idx, (neg, s)) in pieces.iter().enumerate() {
        match (idx, neg) {
            (0, true) => f.push('-'),
            (0, false) => {}
            (_, true) => f.push_str(" - "),
            (_, false) => f.push_str(" + "),
        }
        f.push_str(s);
    }
}

impl fmt::Display for ExactCoeff {
    /// Canonical surd string, e.g. `sqrt(3)/3`, `15/2 - sqrt(105)/2`,
    /// `(1/2) + (1/2)*i`, `sqrt(6)/2*pi^(-3/2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut re = String::new();
        fmt_surd_part(&mut re, &self.re_a, &self.re_b, self.surd);
        let mut im = String::new();
        fmt_surd_part(&mut im, &self.im_a, &self.im_b, self.surd);
        let compound = |s: &str| s.contains(' ') || s.contains('/') || s.contains('*');
        let mut out = match (re.is_empty(), im.is_empty()) {
            (false, true) => re,
            (true, false) => {
                if im == "1" {
                    "i".to_string()
                } else if im == "-1" {
                    "-i".to_string()
                } else if compound(&im) {
                    format!("({im})*i")
                } else {
                    format!("{im}*i")
                }
            }
            _ => format!("({re}) + ({im})*i"),
        };
        if self.pi_half_power != 0 {
            if compound(&out) && out.contains(' ') {
                out = format!("({out})");
            }
            match out.as_str() {
                "1" => out.clear(),
                "-1" => out = "-".to_string(),
                _ => out.push('*'),
            }
            if self.pi_half_power % 2 == 0 {
                out.push_str(&format!("pi^({})", self.pi_half_power / 2));
            } else {
                out.push_str(&format!("pi^({}/2)", self.pi_half_power));
            }
        }
        f.write_str(&out)
    }
}

/// JSON form: rationals as `"p/q"` strings.
#[derive(Serialize, Deserialize)]
struct CoeffJson {
    re_a: String,
    re_b: String,
    im_a: String,
    im_b: String,
    surd: u64,
    pi_half_power: i32,
}

impl From<ExactCoeff> for CoeffJson {
    fn from(c: ExactCoeff) -> Self {
        CoeffJson {
            re_a: c.re_a.to_string(),
            re_b: c.re_b.to_string(),
            im_a: c.im_a.to_string(),
            im_b: c.im_b.to_string(),
            surd: c.surd,
            pi_half_power: c.pi_half_power,
        }
    }
}

impl TryFrom<CoeffJson> for ExactCoeff {
    type Error = CoeffError;
    fn try_from(j: CoeffJson) -> Result<Self, Self::Error> {
        ExactCoeff::from_parts(
            parse_rational(&j.re_a)?,
            parse_rational(&j.re_b)?,
            parse_rational(&j.im_a)?,
            parse_rational(&j.im_b)?,
            j.surd,
            j.pi_half_power,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn half_times_two_root_three_is_root_three() {
        let a = ExactCoeff::ratio(1, 2);
        let b = ExactCoeff::real_surd(q(0, 1), q(2, 1), 3).unwrap();
        let c = a.checked_mul(&b).unwrap();
        assert_eq!(c, ExactCoeff::real_surd(q(0, 1), q(1, 1), 3).unwrap());
        assert_eq!(c.to_string(), "sqrt(3)");
    }

    #[test]
    fn pure_surds_from_different_fields_multiply() {
        let a = ExactCoeff::parse_real("sqrt(15)").unwrap();
        let b = ExactCoeff::parse_real("sqrt(6)/2").unwrap();
        assert_eq!(a.checked_mul(&b).unwrap().to_string(), "3*sqrt(10)/2");
        let c = ExactCoeff::parse_real("1+sqrt(2)").unwrap();
        assert_eq!(a.checked_mul(&c), Err(CoeffError::IncompatibleSurd(15, 2)));
    }

    #[test]
    fn conjugation_flips_imaginary_part() {
        let a = ExactCoeff::gaussian(q(3, 4), q(-5, 7));
        assert_eq!(a.conj(), ExactCoeff::gaussian(q(3, 4), q(5, 7)));
    }

    #[test]
    fn stored_normalisation_constant_squares_to_three_over_two_pi_cubed() {
        let c = ExactCoeff::from_parts(q(0, 1), q(1, 2), q(0, 1), q(0, 1), 6, -3).unwrap();
        let sq = c.mod_sq();
        // independent check: (1/2)^2 * 6 = 3/2 with pi^-3
        let expected = Rational::new(BigInt::from(1), BigInt::from(4)) * Rational::from_integer(BigInt::from(6));
        assert_eq!(sq.as_rational(), None);
        assert_eq!(sq.pi_half_power(), -6);
        assert_eq!(sq.without_pi().as_rational(), Some(&expected));
        assert_eq!(expected, q(3, 2));
    }

    #[test]
    fn sqrt_rational_examples() {
        assert_eq!(sqrt_rational(&q(9, 4)).unwrap(), ExactCoeff::ratio(3, 2));
        let s = sqrt_rational(&q(3, 2)).unwrap();
        assert_eq!(s.surd(), 6);
        assert_eq!(s.re_b(), &q(1, 2));
        let s = sqrt_rational(&q(105, 1)).unwrap();
        assert_eq!((s.surd(), s.re_b().clone()), (105, q(1, 1)));
        assert!(matches!(sqrt_rational(&q(0, 1)), Err(CoeffError::NonPositiveSqrt(_))));
        assert!(matches!(sqrt_rational(&q(-2, 1)), Err(CoeffError::NonPositiveSqrt(_))));
    }

    #[test]
    fn square_free_split_handles_large_prime_squares() {
        let n = BigUint::from(1_000_003u64) * BigUint::from(1_000_003u64) * BigUint::from(6u64);
        let (s, d) = square_free_split(&n);
        assert_eq!(s, BigUint::from(1_000_003u64));
        assert_eq!(d, BigUint::from(6u64));
        assert!(!is_square_free(12));
        assert!(is_square_free(105));
    }

    #[test]
    fn errors() {
        let r2 = sqrt_rational(&q(2, 1)).unwrap();
        let r3 = sqrt_rational(&q(3, 1)).unwrap();
        assert!(matches!(r2.checked_add(&r3), Err(CoeffError::IncompatibleSurd(2, 3))));
        let mixed = r2.checked_add(&ExactCoeff::one()).unwrap();
        assert!(matches!(mixed.checked_mul(&r3), Err(CoeffError::IncompatibleSurd(2, 3))));
        assert!(matches!(r2.checked_div(&ExactCoeff::zero()), Err(CoeffError::DivisionByZero)));
        let pi = ExactCoeff::one().times_pi_half_power(2);
        assert!(matches!(pi.checked_add(&ExactCoeff::one()), Err(CoeffError::PiPowerMismatch(2, 0))));
        assert!(matches!(ExactCoeff::real_surd(q(1, 1), q(1, 1), 12), Err(CoeffError::NotSquareFree(12))));
    }

    #[test]
    fn product_of_conjugate_surds_collapses_to_rational() {
        // sqrt(3)*sqrt(3) = 3, then compatible with any other surd.
        let r3 = sqrt_rational(&q(3, 1)).unwrap();
        let three = r3.checked_mul(&r3).unwrap();
        assert_eq!(three, ExactCoeff::from_int(3));
        let r105 = sqrt_rational(&q(105, 1)).unwrap();
        assert!(three.checked_mul(&r105).is_ok());
    }

    #[test]
    fn cube_roots_of_unity() {
        let w = ExactCoeff::cube_root_of_unity(1);
        assert_eq!(w.pow(3).unwrap(), ExactCoeff::one());
        assert_eq!(w.conj(), ExactCoeff::cube_root_of_unity(2));
        let sum = w.checked_add(&w.conj()).unwrap().checked_add(&ExactCoeff::one()).unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn display_and_parse() {
        let c = ExactCoeff::parse_real("1/sqrt(3)").unwrap();
        assert_eq!(c.to_string(), "sqrt(3)/3");
        for s in ["-12*sqrt(3)/35", "15/2 - sqrt(105)/2", "sqrt(105)", "-1", "2/7", "6*sqrt(30)/35"] {
            let c = ExactCoeff::parse_real(s).unwrap();
            assert_eq!(c.to_string(), s);
        }
        let c = ExactCoeff::parse_real("sqrt(3/2)*pi^(-3/2)").unwrap();
        assert_eq!(c.to_string(), "sqrt(6)/2*pi^(-3/2)");
        assert_eq!(ExactCoeff::i().to_string(), "i");
        assert_eq!(ExactCoeff::cube_root_of_unity(1).to_string(), "(-1/2) + (sqrt(3)/2)*i");
    }

    #[test]
    fn decimal_rendering() {
        let c = ExactCoeff::parse_real("sqrt(3/2)*pi^(-3/2)").unwrap();
        assert_eq!(c.to_decimal_string(6), "0.219948");
        let long = ExactCoeff::one().times_pi_half_power(2).to_decimal_string(40);
        assert_eq!(long, "3.1415926535897932384626433832795028841972");
        assert_eq!(ExactCoeff::ratio(-1, 3).to_decimal_string(3), "-0.333");
    }

    #[test]
    fn json_round_trip() {
        let c = ExactCoeff::from_parts(q(1, 2), q(-3, 7), q(0, 1), q(5, 1), 105, -3).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"re_b\":\"-3/7\""));
        let back: ExactCoeff = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn real_sign_of_surd_values() {
        let v = ExactCoeff::parse_real("11 - sqrt(105)").unwrap();
        assert_eq!(v.real_sign().unwrap(), Ordering::Greater);
        let v = ExactCoeff::parse_real("10 - sqrt(105)").unwrap();
        assert_eq!(v.real_sign().unwrap(), Ordering::Less);
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(p, d)| q(p, d))
    }

    fn arb_coeff(d: u64) -> impl Strategy<Value = ExactCoeff> {
        (arb_rational(), arb_rational(), arb_rational(), arb_rational())
            .prop_map(move |(a, b, c, e)| ExactCoeff::from_parts(a, b, c, e, d, 0).unwrap())
    }

    proptest! {
        #[test]
        fn field_axioms_hold(a in arb_coeff(7), b in arb_coeff(7), c in arb_coeff(7)) {
            let ab_c = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
            let a_bc = a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let lhs = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
            let rhs = a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(a.checked_add(&b).unwrap(), b.checked_add(&a).unwrap());
            if !a.is_zero() {
                prop_assert_eq!(a.checked_mul(&a.inv().unwrap()).unwrap(), ExactCoeff::one());
            }
        }

        #[test]
        fn modulus_matches_components(a in arb_coeff(5)) {
            let m = a.mod_sq();
            let f = a.to_complex64();
            prop_assert!(m.is_real());
            prop_assert!((m.to_f64() - f.norm_sqr()).abs() <= 1e-9 * (1.0 + f.norm_sqr()));
        }

        #[test]
        fn float_round_trip(p in -(1i64 << 40)..(1i64 << 40), d in 1i64..(1i64 << 40)) {
            let c = ExactCoeff::ratio(p, d);
            let x = c.to_f64();
            let back = Rational::from_float(x).unwrap();
            let orig = q(p, d);
            let rel = ((back - &orig).abs() / orig.abs().max(Rational::new(BigInt::from(1), BigInt::from(1i64 << 40)))).to_f64().unwrap();
            prop_assert!(rel <= 1e-14);
        }
    }
}
