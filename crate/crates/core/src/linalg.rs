//! Exact dense linear algebra over [`ExactCoeff`].
//!
//! Elimination runs over the field directly; entries stay reduced because
//! every rational is kept in lowest terms.

use crate::coeff::ExactCoeff;
use crate::error::Result;

pub type Matrix = Vec<Vec<ExactCoeff>>;

/// Reduced row-echelon form; returns the reduced rows and the pivot columns.
pub fn rref(mut rows: Matrix, ncols: usize) -> Result<(Matrix, Vec<usize>)> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv()?;
        if !inv.is_one() {
            for x in rows[r].iter_mut().skip(c) {
                *x = x.checked_mul(&inv)?;
            }
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..ncols {
                if rows[r][j].is_zero() {
                    continue;
                }
                let t = rows[r][j].checked_mul(&f)?;
                rows[i][j] = rows[i][j].checked_sub(&t)?;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Ok((rows, pivots))
}

pub fn rank(rows: Matrix) -> Result<usize> {
    let n = rows.first().map_or(0, |r| r.len());
    Ok(rref(rows, n)?.1.len())
}

/// Basis of `{x : A x = 0}`; each vector has a single unit entry among the
/// free columns.
pub fn nullspace(rows: Matrix, ncols: usize) -> Result<Vec<Vec<ExactCoeff>>> {
    let (reduced, pivots) = rref(rows, ncols)?;
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![ExactCoeff::zero(); ncols];
        v[free] = ExactCoeff::one();
        for (row, &p) in reduced.iter().zip(&pivots) {
            v[p] = row[free].neg();
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Coefficients `c` with `Σ c_j columns[j] = target`, or `None` when the
/// target is outside the span. Columns must be linearly independent.
pub fn solve_in_span(columns: &[Vec<ExactCoeff>], target: &[ExactCoeff]) -> Result<Option<Vec<ExactCoeff>>> {
    let n = columns.len();
    let rows: Matrix = (0..target.len())
        .map(|i| {
            let mut row: Vec<ExactCoeff> = columns.iter().map(|col| col[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let (reduced, pivots) = rref(rows, n + 1)?;
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![ExactCoeff::zero(); n];
    for (row, &p) in reduced.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    Ok(Some(x))
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![ExactCoeff::zero(); cols]; a.len()];
    for (i, row) in a.iter().enumerate() {
        for k in 0..inner {
            if row[k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].checked_add(&row[k].checked_mul(&b[k][j])?)?;
            }
        }
    }
    Ok(out)
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { ExactCoeff::one() } else { ExactCoeff::zero() }).collect()).collect()
}

/// Coefficients `c_0..c_n` (ascending powers, monic) of `det(x I - M)`,
/// by the Faddeev–LeVerrier recursion.
pub fn char_poly(m: &Matrix) -> Result<Vec<ExactCoeff>> {
    let n = m.len();
    let mut coeffs = vec![ExactCoeff::zero(); n + 1];
    coeffs[n] = ExactCoeff::one();
    let mut mk = vec![vec![ExactCoeff::zero(); n]; n];
    for k in 1..=n {
        // M_k = M·M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(m, &mk)?;
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].checked_add(&coeffs[n - k + 1])?;
        }
        mk = next;
        let am = mat_mul(m, &mk)?;
        let mut tr = ExactCoeff::zero();
        for (i, row) in am.iter().enumerate() {
            tr = tr.checked_add(&row[i])?;
        }
        coeffs[n - k] = tr.scale(&crate::coeff::Rational::new((-1).into(), (k as i64).into()));
    }
    Ok(coeffs)
}
