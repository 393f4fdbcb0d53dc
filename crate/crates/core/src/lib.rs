//! Nonnegative cosine polynomials and the constants they produce for the
//! asymptotic zero-free region of the Riemann zeta-function.
//!
//! The crate is organised bottom-up:
//!
//! * [`trigpoly`] represents `p(θ) = Σ b_j cos(jθ)`, expands manifestly
//!   nonnegative product forms and verifies nonnegativity on a grid.
//! * [`mollifier`] solves the θ-equation and evaluates the compactly
//!   supported weights `g`, `w = g∗g`, `f` and their Laplace transforms.
//! * [`asymptotics`] turns a polynomial into the constants `M`, `C`, `η`, `λ`
//!   and region tables.
//! * [`optimizer`] searches product forms for the largest `M`.
//! * [`zetanum`] holds the zeta-side numerics (sieve, Dirichlet series,
//!   Euler–Maclaurin) and the identity checks built on them.
//!
//! Data-parallel loops go through [`par`], which falls back to plain
//! iterators when the `parallel` feature is disabled.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod mollifier;
pub mod optimizer;
pub mod par;
pub mod quad;
pub mod roots;
pub mod trigpoly;
pub mod zetanum;

pub use error::{Error, Result};
pub use par::Execution;
