//! Zeta-side numerics to the right of `Re s = 1`.
//!
//! [`sieve`] tabulates the von Mangoldt function, [`dirichlet`] sums
//! `−ζ′/ζ` as a truncated Dirichlet series with an explicit tail bound,
//! [`zeta`] evaluates ζ and ζ′ by Euler–Maclaurin, and [`verify`] compares
//! two independent evaluations of each identity.

pub mod cot;
pub mod dirichlet;
pub mod sieve;
pub mod verify;
pub mod zeta;

pub use cot::re_cot;
pub use dirichlet::{neg_zeta_logderiv, neg_zeta_logderiv_truncated, tail_bound, Truncated};
pub use sieve::{shared_table, von_mangoldt, VonMangoldtTable, DEFAULT_SIEVE_LIMIT};
pub use verify::{
    applied_trig_sum, lemma_check, lemma_lhs, lemma_rhs, midpoint_bound_check, Bounded,
    LogDerivMethod, Relation, TrigSumOptions, VerificationReport, DEFAULT_TRIG_MAX_TERMS,
};
pub use zeta::{neg_log_derivative_em, zeta_em, zeta_with_derivative};
