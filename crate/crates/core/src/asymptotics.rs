//! Region constants derived from a nonnegative cosine polynomial.
//!
//! With `S₀ = Σ_{j≥0} b_j` and `S₁ = Σ_{j≥1} b_j`:
//!
//! * `M = b₀ cos²θ / ((3/4) S₁ S₀^{1/2})^{2/3}`
//! * `C = (4 S₀ / (3 B S₁))^{2/3}`
//! * `η = C (log log t / log t)^{2/3}`
//! * `λ = M / ((B log t)^{2/3} (log log t)^{1/3})`
//!
//! A region row asserts no zero with `β ≥ 1 − λ` at height `t`.

use crate::error::{Error, Result};
use crate::mollifier::solve_theta;
use crate::par::{self, Execution};
use crate::trigpoly::{verify_nonneg, CosinePolynomial, NonnegOptions, Nonnegativity};
use serde::Serialize;

/// Korobov–Vinogradov amplitude used when none is given.
pub const DEFAULT_A: f64 = 76.2;
/// Korobov–Vinogradov exponent constant used when none is given.
pub const DEFAULT_B: f64 = 4.45;
/// Smallest height accepted by [`region_table`].
pub const MIN_T: f64 = 100.0;
/// Rows at or below this height are flagged.
pub const SMALL_T: f64 = 10_000.0;
/// Rows with `λ ≥ η / LAMBDA_ETA_RATIO` are flagged.
pub const LAMBDA_ETA_RATIO: f64 = 250.0;

/// `M` for a given θ, without any validation. The optimizer calls this
/// directly because product forms are nonnegative by construction.
pub fn m_from_theta(p: &CosinePolynomial, theta: f64) -> f64 {
    let b = p.coeffs();
    let denom = (0.75 * p.sum_tail() * p.sum_all().sqrt()).powf(2.0 / 3.0);
    b[0] * theta.cos().powi(2) / denom
}

/// θ and `M` for a validated polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MValue {
    pub theta: f64,
    #[serde(rename = "M")]
    pub m: f64,
}

/// `M` with the θ of `(b₀, b₁)`; the polynomial must pass
/// [`verify_nonneg`] with the given options.
pub fn compute_m_with(p: &CosinePolynomial, nonneg: NonnegOptions) -> Result<MValue> {
    p.check_objective()?;
    let b = p.coeffs();
    let theta = solve_theta(b[0], b[1])?;
    if let Nonnegativity::Violation { theta, value } = verify_nonneg(p, nonneg) {
        return Err(Error::NonnegativityFailure { theta, value });
    }
    Ok(MValue {
        theta,
        m: m_from_theta(p, theta),
    })
}

pub fn compute_m(p: &CosinePolynomial) -> Result<f64> {
    compute_m_with(p, NonnegOptions::default()).map(|v| v.m)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} = {v} must be positive and finite"
        )))
    }
}

pub fn compute_c(p: &CosinePolynomial, b: f64) -> Result<f64> {
    p.check_objective()?;
    check_positive("B", b)?;
    Ok((4.0 * p.sum_all() / (3.0 * b * p.sum_tail())).powf(2.0 / 3.0))
}

fn log_logs(t: f64) -> Result<(f64, f64)> {
    if !(t > std::f64::consts::E && t.is_finite()) {
        return Err(Error::Domain(format!("t = {t} must exceed e")));
    }
    let lt = t.ln();
    Ok((lt, lt.ln()))
}

/// `η = C (log log t / log t)^{2/3}`.
pub fn eta_of(t: f64, c: f64) -> Result<f64> {
    check_positive("C", c)?;
    let (lt, llt) = log_logs(t)?;
    Ok(c * (llt / lt).powf(2.0 / 3.0))
}

/// `λ = M / ((B log t)^{2/3} (log log t)^{1/3})`.
pub fn lambda_of(t: f64, b: f64, m: f64) -> Result<f64> {
    check_positive("B", b)?;
    check_positive("M", m)?;
    let (lt, llt) = log_logs(t)?;
    Ok(m / ((b * lt).powf(2.0 / 3.0) * llt.cbrt()))
}

/// Everything needed to state the region at one height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticParams {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub t: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub eta: f64,
    pub lambda: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub theta: f64,
    /// `λ < η/250`, one of the hypotheses under which the region holds.
    pub lambda_small: bool,
}

impl AsymptoticParams {
    pub fn new(p: &CosinePolynomial, a: f64, b: f64, t: f64) -> Result<Self> {
        let mv = compute_m_with(p, NonnegOptions::default())?;
        Self::from_m(p, mv, a, b, t)
    }

    fn from_m(p: &CosinePolynomial, mv: MValue, a: f64, b: f64, t: f64) -> Result<Self> {
        check_positive("A", a)?;
        let c = compute_c(p, b)?;
        let eta = eta_of(t, c)?;
        let lambda = lambda_of(t, b, mv.m)?;
        Ok(AsymptoticParams {
            a,
            b,
            t,
            c,
            eta,
            lambda,
            m: mv.m,
            theta: mv.theta,
            lambda_small: lambda < eta / LAMBDA_ETA_RATIO,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub struct RegionFlags {
    /// `t ≤ 10000`.
    pub small_t: bool,
    /// `λ ≥ η/250`.
    pub lambda_not_small: bool,
}

impl RegionFlags {
    pub fn any(&self) -> bool {
        self.small_t || self.lambda_not_small
    }

    /// `;`-separated names of the raised flags, empty when none are.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.small_t {
            parts.push("small_t");
        }
        if self.lambda_not_small {
            parts.push("lambda_not_small");
        }
        parts.join(";")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionRow {
    pub t: f64,
    pub eta: f64,
    pub lambda: f64,
    /// Upper bound `1 − λ` on the real part of a zero at this height.
    pub beta_bound: f64,
    pub flags: RegionFlags,
}

/// One row per height. Heights must exceed 100; the hypotheses `t > 10000`
/// and `λ < η/250` are reported as flags rather than errors.
pub fn region_table(
    p: &CosinePolynomial,
    a: f64,
    b: f64,
    t_values: &[f64],
    exec: Execution,
) -> Result<Vec<RegionRow>> {
    if let Some(t) = t_values.iter().find(|t| !(**t > MIN_T && t.is_finite())) {
        return Err(Error::Domain(format!("t = {t} must exceed {MIN_T}")));
    }
    let mv = compute_m_with(p, NonnegOptions::default())?;
    par::map(exec, t_values, |&t| {
        let params = AsymptoticParams::from_m(p, mv, a, b, t)?;
        Ok(RegionRow {
            t,
            eta: params.eta,
            lambda: params.lambda,
            beta_bound: 1.0 - params.lambda,
            flags: RegionFlags {
                small_t: t <= SMALL_T,
                lambda_not_small: !params.lambda_small,
            },
        })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    fn poly(b: &[f64]) -> CosinePolynomial {
        CosinePolynomial::new(b.to_vec()).unwrap()
    }

    #[test]
    fn m_is_scale_invariant_for_classical_polynomial() {
        let a = compute_m(&poly(&[3.0, 4.0, 1.0])).unwrap();
        let b = compute_m(&poly(&[6.0, 8.0, 2.0])).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
        assert!(a > 0.0);
    }

    #[test]
    fn m_rejects_negative_polynomials() {
        // ratio 1.9 is admissible, but the polynomial dips below zero
        assert!(matches!(
            compute_m(&poly(&[1.0, 1.9, 1.5])),
            Err(Error::NonnegativityFailure { .. })
        ));
        assert!(matches!(
            compute_m(&poly(&[1.0, 0.5])),
            Err(Error::RatioOutOfRange { .. })
        ));
    }

    #[test]
    fn c_examples() {
        let p = poly(&[3.0, 4.0, 1.0]);
        // sums 8 and 5: (32 / 66.75)^{2/3}
        assert_relative_eq!(
            compute_c(&p, 4.45).unwrap(),
            0.612_537_204_528_630_1,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            compute_c(&p, 4.45).unwrap(),
            compute_c(&p, 1.0).unwrap() * 4.45f64.powf(-2.0 / 3.0),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            compute_c(&p.scaled(7.0), 4.45).unwrap(),
            compute_c(&p, 4.45).unwrap(),
            max_relative = 1e-14
        );
        assert!(compute_c(&p, 0.0).is_err());
    }

    #[test]
    fn eta_lambda_at_e_to_the_e() {
        let t = E.powf(E);
        assert_relative_eq!(
            eta_of(t, 0.7).unwrap(),
            0.7 * (1.0 / E).powf(2.0 / 3.0),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            lambda_of(t, 4.45, 0.05).unwrap(),
            0.05 / (4.45 * E).powf(2.0 / 3.0),
            max_relative = 1e-13
        );
        assert!(eta_of(E, 1.0).is_err());
        assert!(lambda_of(2.0, 4.45, 0.05).is_err());
    }

    #[test]
    fn lambda_reference_value() {
        // 40-digit evaluation at t = 3·10^12
        assert_relative_eq!(
            lambda_of(3e12, 4.45, 0.055127).unwrap(),
            0.001_450_598_155_019_797_7,
            max_relative = 1e-13
        );
    }

    #[test]
    fn lambda_decreases_beyond_e_to_the_e() {
        let mut prev = f64::INFINITY;
        for k in 0..60 {
            let t = E.powf(E) * 1.5f64.powi(k + 1);
            let l = lambda_of(t, 4.45, 0.055).unwrap();
            assert!(l < prev);
            prev = l;
        }
    }

    #[test]
    fn table_flags_and_domain() {
        let p = poly(&[3.0, 4.0, 1.0]);
        let rows = region_table(
            &p,
            DEFAULT_A,
            DEFAULT_B,
            &[101.0, 1e30],
            Execution::Sequential,
        )
        .unwrap();
        assert!(rows[0].flags.small_t);
        assert!(!rows[1].flags.small_t);
        assert_eq!(rows[1].beta_bound, 1.0 - rows[1].lambda);
        assert!(region_table(&p, DEFAULT_A, DEFAULT_B, &[100.0], Execution::Sequential).is_err());
        assert_eq!(
            RegionFlags {
                small_t: true,
                lambda_not_small: true
            }
            .label(),
            "small_t;lambda_not_small"
        );
    }
}
