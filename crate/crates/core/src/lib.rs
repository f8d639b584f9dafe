//! Numerical laboratory for the Dirichlet eigenproblem
//!
//! ```text
//! (-Δ)^{s1} u = λ ((-Δ)^{s2} u + μ u)   in Ω,     u = 0 outside Ω,
//! ```
//!
//! with `0 < s2 < s1 < 1` and the restricted (integral) fractional Laplacian.
//!
//! The crate is organised bottom-up:
//!
//! - [`special`], [`params`], [`matrix`]: special functions, validated problem
//!   data, and the dense symmetric matrix type shared by everything else.
//! - [`bounds`]: closed-form constants and both sides of every eigenvalue
//!   inequality (Berezin–Li–Yau type lower bounds, the leading upper-bound
//!   term, the moment majorant, the bracketed root).
//! - [`operator`]: conforming P1 Galerkin matrices on an interval, a pointwise
//!   principal-value evaluator, the boundary cutoff `w_σ`, the commutator
//!   remainder `L^s_z`, and the pointwise bounds on both.
//! - [`eigen`]: dense symmetric-definite generalized eigensolver.
//! - [`harness`]: experiment configuration, verification suites, reports and
//!   the command-line front end.
//!
//! Data-parallel loops (matrix fill, parameter sweeps, randomized trials,
//! sampled pointwise evaluations) go through [`par`]; building without the
//! default `parallel` feature swaps rayon for plain iterators.

pub mod bounds;
pub mod eigen;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod operator;
pub mod par;
pub mod params;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
pub use matrix::{MatrixLabel, SymmetricMatrix};
pub use params::{Domain1D, FormulaDomain, ProblemParams};
