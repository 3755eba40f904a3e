//! Exact construction, labelling, permutation adaptation and integration of
//! three-body O(6) hyperspherical harmonics.
//!
//! Harmonics are homogeneous harmonic polynomials in the six complex Jacobi
//! coordinates `X_i^± = λ_i ± iρ_i`, divided by `R^K`. They are labelled by
//! `(K, Q, L, m, ν)`: degree, democracy charge, orbital angular momentum and
//! projection, and the eigenvalue of `V_LQL = Σ L_i Q_ij L_j` that resolves
//! the remaining multiplicity. All arithmetic is exact.
//!
//! Module map:
//!
//! * [`coeff`]: exact scalars `Q(√d)(i) · π^{k/2}`
//! * [`poly`]: sparse homogeneous polynomials in `X_i^±`
//! * [`coords`]: hyper-radius and shape angles
//! * [`ops`]: the `U(3)` generators, `V_LQL` and the Laplacian
//! * [`build`]: the labelled catalog
//! * [`perm`]: transpositions and the S/A/M adapted basis
//! * [`matel`]: sphere moments, inner products, triple matrix elements
//! * [`golden`]: transcribed reference harmonics and matrix-element tables

pub mod build;
pub mod coeff;
pub mod coords;
pub mod error;
pub mod golden;
pub mod linalg;
pub mod matel;
pub mod ops;
pub mod perm;
pub mod poly;

pub use build::{Builder, BuildOptions, Catalog, Harmonic, HarmonicLabel};
pub use coeff::{ExactCoeff, Rational};
pub use error::{CoeffError, Error, Result};
pub use poly::{HomoPoly, JacobiConfig, Monomial, Var};
