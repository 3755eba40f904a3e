//! Hyper-radius and Iwai shape angles of a Jacobi configuration.
//!
//! `R² = ρ² + λ²`, `sin α = |λ² - ρ² + 2iλ·ρ| / R²` and
//! `φ = atan2(2ρ·λ, ρ² - λ²)`. The angle `α` is permutation invariant; the
//! transpositions act on `φ` as reflections:
//! `P12: φ → -φ`, `P23: φ → 2π/3 - φ`, `P31: φ → -2π/3 - φ` (mod 2π).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::JacobiConfig;

/// Below this value of `sin α` the angle `φ` is reported as undefined.
pub const POLE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShapeCoords {
    pub r: f64,
    /// In `[0, π/2]`.
    pub alpha: f64,
    /// In `(-π, π]`; `None` on the poles of the shape sphere (`sin α = 0`).
    pub phi: Option<f64>,
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn hyper_radius(c: &JacobiConfig) -> f64 {
    c.hyper_radius()
}

pub fn shape_coords(c: &JacobiConfig) -> Result<ShapeCoords> {
    let (l, r) = (&c.lambda, &c.rho);
    let r2 = dot(l, l) + dot(r, r);
    if r2 == 0.0 || !r2.is_finite() {
        return Err(Error::Data("shape coordinates need a non-zero hyper-radius".into()));
    }
    let x = cross(r, l);
    let t = 2.0 * dot(&x, &x).sqrt() / r2;
    let sin2 = (1.0 - t * t).clamp(0.0, 1.0);
    let sin_alpha = sin2.sqrt();
    let alpha = sin_alpha.asin();
    let phi = (sin_alpha > POLE_TOLERANCE).then(|| {
        let p = (2.0 * dot(r, l)).atan2(dot(r, r) - dot(l, l));
        // atan2 returns -π for a negative zero numerator; fold onto (-π, π]
        if p <= -std::f64::consts::PI {
            p + 2.0 * std::f64::consts::PI
        } else {
            p
        }
    });
    Ok(ShapeCoords { r: r2.sqrt(), alpha, phi })
}

/// `x` reduced to `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::PI;
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}
