//! The `U(3)` generators acting on polynomials in `X_i^±`, the multiplicity
//! operator `V_LQL` and the six-dimensional Laplacian.
//!
//! With `S(a, b) = X_a ∂/∂X_b`:
//!
//! * `i L_ij = S(i+, j+) + S(i-, j-) - S(j+, i+) - S(j-, i-)`
//! * `2 Q_ij = S(i+, j+) - S(i-, j-) + S(j+, i+) - S(j-, i-)`
//! * `L_1 = L_23`, `L_2 = L_31`, `L_3 = L_12`, `L_± = L_1 ± i L_2`
//! * `V_LQL = Σ_ij L_i Q_ij L_j`
//! * `Δ = 4 Σ_i ∂²/∂X_i^+ ∂X_i^-`

use serde::Serialize;

use crate::coeff::{ExactCoeff, Rational};
use crate::error::{Error, Result};
use crate::poly::{monomials, HomoPoly, Monomial, Var};

fn check_axis(i: usize) -> Result<()> {
    if i < 3 {
        Ok(())
    } else {
        Err(Error::AxisOutOfRange(i))
    }
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

/// `L_ij` for distinct axes `i, j` in `0..3`.
pub fn apply_l(i: usize, j: usize, p: &HomoPoly) -> Result<HomoPoly> {
    check_axis(i)?;
    check_axis(j)?;
    if i == j {
        return Err(Error::RepeatedAxis(i));
    }
    let (ip, im, jp, jm) = (Var::plus(i), Var::minus(i), Var::plus(j), Var::minus(j));
    let il = p.shift(ip, jp).add(&p.shift(im, jm))?.sub(&p.shift(jp, ip))?.sub(&p.shift(jm, im))?;
    il.scale(&ExactCoeff::i().neg())
}

/// `Q_ij`; symmetric, `i = j` allowed.
pub fn apply_q(i: usize, j: usize, p: &HomoPoly) -> Result<HomoPoly> {
    check_axis(i)?;
    check_axis(j)?;
    let (ip, im, jp, jm) = (Var::plus(i), Var::minus(i), Var::plus(j), Var::minus(j));
    let two_q = p.shift(ip, jp).sub(&p.shift(im, jm))?.add(&p.shift(jp, ip))?.sub(&p.shift(jm, im))?;
    Ok(two_q.scale_rational(&half()))
}

/// The democracy generator `Q = Σ_i Q_ii`.
pub fn apply_democracy(p: &HomoPoly) -> Result<HomoPoly> {
    let mut acc = HomoPoly::zero(p.degree());
    for i in 0..3 {
        acc = acc.add(&apply_q(i, i, p)?)?;
    }
    Ok(acc)
}

/// Vector component `L_i` (`i` in `0..3`), `L_i = ½ ε_ijk L_jk`.
pub fn apply_l_component(i: usize, p: &HomoPoly) -> Result<HomoPoly> {
    check_axis(i)?;
    apply_l((i + 1) % 3, (i + 2) % 3, p)
}

pub fn apply_l3(p: &HomoPoly) -> Result<HomoPoly> {
    apply_l_component(2, p)
}

pub fn apply_l_squared(p: &HomoPoly) -> Result<HomoPoly> {
    let mut acc = HomoPoly::zero(p.degree());
    for i in 0..3 {
        acc = acc.add(&apply_l_component(i, &apply_l_component(i, p)?)?)?;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Raise,
    Lower,
}

/// `L_± = L_1 ± i L_2`.
pub fn apply_ladder(p: &HomoPoly, direction: Ladder) -> Result<HomoPoly> {
    let l1 = apply_l_component(0, p)?;
    let il2 = apply_l_component(1, p)?.scale(&ExactCoeff::i())?;
    match direction {
        Ladder::Raise => l1.add(&il2),
        Ladder::Lower => l1.sub(&il2),
    }
}

/// `V_LQL = Σ_ij L_i Q_ij L_j`.
pub fn apply_vlql(p: &HomoPoly) -> Result<HomoPoly> {
    let lj: Vec<HomoPoly> = (0..3).map(|j| apply_l_component(j, p)).collect::<Result<_>>()?;
    let mut acc = HomoPoly::zero(p.degree());
    for i in 0..3 {
        let mut inner = HomoPoly::zero(p.degree());
        for (j, lp) in lj.iter().enumerate() {
            inner = inner.add(&apply_q(i, j, lp)?)?;
        }
        acc = acc.add(&apply_l_component(i, &inner)?)?;
    }
    Ok(acc)
}

/// `Δ = 4 Σ_i ∂²/∂X_i^+ ∂X_i^-`; the result has degree `K - 2`.
pub fn apply_laplacian(p: &HomoPoly) -> Result<HomoPoly> {
    let degree = p.degree().saturating_sub(2);
    let mut acc = HomoPoly::zero(degree);
    if p.degree() < 2 {
        return Ok(acc);
    }
    for i in 0..3 {
        acc = acc.add(&p.differentiate(Var::plus(i)).differentiate(Var::minus(i)))?;
    }
    Ok(acc.scale_rational(&Rational::from_integer(4.into())))
}

/// Operators that can be tabulated on a monomial basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Generator {
    /// `L_ij` with axes in `0..3`.
    L(usize, usize),
    /// `Q_ij` with axes in `0..3`.
    Q(usize, usize),
    /// Vector component `L_i`.
    LComponent(usize),
    Democracy,
    L3,
    LSquared,
    Raise,
    Lower,
    Vlql,
    Laplacian,
}

impl Generator {
    pub fn apply(self, p: &HomoPoly) -> Result<HomoPoly> {
        match self {
            Generator::L(i, j) => apply_l(i, j, p),
            Generator::Q(i, j) => apply_q(i, j, p),
            Generator::LComponent(i) => apply_l_component(i, p),
            Generator::Democracy => apply_democracy(p),
            Generator::L3 => apply_l3(p),
            Generator::LSquared => apply_l_squared(p),
            Generator::Raise => apply_ladder(p, Ladder::Raise),
            Generator::Lower => apply_ladder(p, Ladder::Lower),
            Generator::Vlql => apply_vlql(p),
            Generator::Laplacian => apply_laplacian(p),
        }
    }

    /// Parses `Q`, `L3`, `L2`, `V`, `Lap`, `L+`, `L-`, `L12`, `Q23`, `L_1`, ...
    /// with one-based axes.
    pub fn parse(name: &str) -> Option<Generator> {
        let axis = |c: u8| -> Option<usize> { (b'1'..=b'3').contains(&c).then(|| (c - b'1') as usize) };
        match name {
            "Q" => Some(Generator::Democracy),
            "L3" => Some(Generator::L3),
            "L2" | "Lsq" => Some(Generator::LSquared),
            "L+" => Some(Generator::Raise),
            "L-" => Some(Generator::Lower),
            "V" | "VLQL" => Some(Generator::Vlql),
            "Lap" | "Delta" => Some(Generator::Laplacian),
            _ => {
                let b = name.as_bytes();
                match b {
                    [b'L', b'_', i] => Some(Generator::LComponent(axis(*i)?)),
                    [b'L', i, j] if i != j => Some(Generator::L(axis(*i)?, axis(*j)?)),
                    [b'Q', i, j] => Some(Generator::Q(axis(*i)?, axis(*j)?)),
                    _ => None,
                }
            }
        }
    }

    fn output_degree(self, k: u32) -> u32 {
        match self {
            Generator::Laplacian => k.saturating_sub(2),
            _ => k,
        }
    }
}

/// Exact matrix of an operator: column `j` is the image of `columns[j]`
/// expanded in `rows`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperatorMatrix {
    pub degree: u32,
    pub columns: Vec<Monomial>,
    pub rows: Vec<Monomial>,
    pub entries: Vec<Vec<ExactCoeff>>,
}

pub fn operator_matrix(op: Generator, k: u32) -> Result<OperatorMatrix> {
    let columns = monomials(k);
    let rows = if op == Generator::Laplacian && k < 2 { Vec::new() } else { monomials(op.output_degree(k)) };
    let index: std::collections::HashMap<Monomial, usize> = rows.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut entries = vec![vec![ExactCoeff::zero(); columns.len()]; rows.len()];
    for (j, m) in columns.iter().enumerate() {
        let image = op.apply(&HomoPoly::monomial(*m, ExactCoeff::one()))?;
        for (mono, c) in image.terms() {
            entries[index[mono]][j] = c.clone();
        }
    }
    Ok(OperatorMatrix { degree: k, columns, rows, entries })
}

impl OperatorMatrix {
    pub fn is_square(&self) -> bool {
        self.rows == self.columns
    }

    pub fn mul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.columns != other.rows {
            return Err(Error::Data("operator matrix shapes do not compose".into()));
        }
        Ok(OperatorMatrix {
            degree: other.degree,
            columns: other.columns.clone(),
            rows: self.rows.clone(),
            entries: crate::linalg::mat_mul(&self.entries, &other.entries)?,
        })
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.rows != other.rows || self.columns != other.columns {
            return Err(Error::Data("operator matrix shapes differ".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.checked_sub(y).map_err(Error::from)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(OperatorMatrix { entries, ..self.clone() })
    }

    pub fn scale(&self, c: &ExactCoeff) -> Result<OperatorMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| x.checked_mul(c).map_err(Error::from)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(OperatorMatrix { entries, ..self.clone() })
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(ExactCoeff::is_zero))
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| i == j || x.is_zero()))
    }

    pub fn diagonal(&self) -> Vec<ExactCoeff> {
        (0..self.entries.len().min(self.columns.len())).map(|i| self.entries[i][i].clone()).collect()
    }
}
