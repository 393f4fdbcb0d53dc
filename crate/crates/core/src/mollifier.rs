//! The mollifier family built from the first two polynomial coefficients.
//!
//! θ solves `sin²θ = (b₁/b₀)(1 − θ cot θ)` on `(0, π/2)`. From it:
//!
//! * `g(u) = (cos(u tan θ) − cos θ) sec²θ` for `|u| < θ/tan θ`, else 0;
//! * `w = g∗g`, supported on `|u| < 2θ/tan θ`;
//! * `f(y) = λ e^{λy} w(λy)` for `y ≥ 0`;
//! * `W(s) = ∫₀^∞ w(u) e^{−su} du` and `F(z) = ∫₀^∞ f(y) e^{−zy} dy = W(z/λ − 1)`;
//! * `F₀(z) = F(z) − f(0)/z`.

use crate::error::{Error, Result};
use crate::quad::{integrate, Tolerance};
use crate::roots::{bisect, newton_polish};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

const THETA_SCAN_POINTS: usize = 512;

/// `1 − θ cot θ`, with a series near zero where the subtraction cancels.
fn one_minus_theta_cot(theta: f64) -> f64 {
    if theta.abs() < 1e-2 {
        let t2 = theta * theta;
        t2 / 3.0 + t2 * t2 / 45.0 + 2.0 * t2 * t2 * t2 / 945.0
    } else {
        1.0 - theta / theta.tan()
    }
}

fn theta_equation(theta: f64, ratio: f64) -> f64 {
    theta.sin().powi(2) - ratio * one_minus_theta_cot(theta)
}

fn theta_equation_derivative(theta: f64, ratio: f64) -> f64 {
    let s = theta.sin();
    (2.0 * theta).sin() - ratio * (theta / (s * s) - theta.cos() / s)
}

/// `sin²θ − (b₁/b₀)(1 − θ cot θ)`.
pub fn theta_residual(b0: f64, b1: f64, theta: f64) -> f64 {
    theta_equation(theta, b1 / b0)
}

/// Solves the θ-equation for `b₁/b₀ ∈ (1, 3)`.
///
/// The left limit of the equation is `θ²(1 − r/3) > 0` and its value at
/// `π/2` is `1 − r < 0`. A scan over the interval confirms there is exactly
/// one sign change before bisection and a Newton polish.
pub fn solve_theta(b0: f64, b1: f64) -> Result<f64> {
    if !(b0 > 0.0 && b1 > 0.0 && b0.is_finite() && b1.is_finite()) {
        return Err(Error::Domain(format!(
            "b0 = {b0} and b1 = {b1} must be positive and finite"
        )));
    }
    let ratio = b1 / b0;
    if !(ratio > 1.0 && ratio < 3.0) {
        return Err(Error::RatioOutOfRange { ratio });
    }
    let h = |t: f64| theta_equation(t, ratio);

    // Endpoint signs are known analytically: + at 0⁺, − at π/2.
    let step = FRAC_PI_2 / THETA_SCAN_POINTS as f64;
    let mut prev_positive = true;
    let mut prev_t = 0.0;
    let mut bracket = None;
    let mut changes = 0;
    for i in 1..=THETA_SCAN_POINTS {
        let t = i as f64 * step;
        let positive = if i == THETA_SCAN_POINTS {
            false
        } else {
            h(t) > 0.0
        };
        if positive != prev_positive {
            changes += 1;
            bracket.get_or_insert((prev_t, t));
        }
        prev_positive = positive;
        prev_t = t;
    }
    if changes != 1 {
        return Err(Error::NonUniqueTheta {
            ratio,
            count: changes,
        });
    }
    let (lo, hi) = bracket.expect("one sign change");
    let lo = lo.max(f64::MIN_POSITIVE);
    let rough = bisect(h, lo, hi, 1e-14);
    Ok(newton_polish(
        h,
        |t| theta_equation_derivative(t, ratio),
        rough,
        lo,
        hi,
        8,
    ))
}

/// Ratio `b₁/b₀` whose θ-equation is solved by the given `θ`.
pub fn ratio_for_theta(theta: f64) -> f64 {
    theta.sin().powi(2) / one_minus_theta_cot(theta)
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::Domain(format!("θ = {theta} must lie in (0, π/2)")))
    }
}

/// Half-width `θ/tan θ` of the support of `g`.
pub fn g_support(theta: f64) -> f64 {
    theta / theta.tan()
}

pub fn g_eval(theta: f64, u: f64) -> f64 {
    let half = g_support(theta);
    if u.abs() >= half {
        return 0.0;
    }
    let c = theta.cos();
    ((u * theta.tan()).cos() - c) / (c * c)
}

fn w_tolerance() -> Tolerance {
    Tolerance::new(1e-12, 1e-14)
}

/// `(g∗g)(u) = ∫ g(v) g(u − v) dv` over the overlap of the two supports.
pub fn w_eval(theta: f64, u: f64) -> f64 {
    let half = g_support(theta);
    if u.abs() >= 2.0 * half {
        return 0.0;
    }
    let (lo, hi) = if u >= 0.0 {
        (u - half, half)
    } else {
        (-half, u + half)
    };
    integrate(
        |v| g_eval(theta, v) * g_eval(theta, u - v),
        lo,
        hi,
        w_tolerance(),
    )
    .value
}

/// `w(0) = sec²θ (θ tan θ + 3θ cot θ − 3)`.
pub fn w0_closed(theta: f64) -> f64 {
    let (t, c) = (theta.tan(), theta.cos());
    (theta * t + 3.0 * theta / t - 3.0) / (c * c)
}

/// `F(0) = 2 tan²θ + 3 − 3θ(tan θ + cot θ)`.
pub fn f0_closed(theta: f64) -> f64 {
    let t = theta.tan();
    2.0 * t * t + 3.0 - 3.0 * theta * (t + 1.0 / t)
}

/// `−W′(0) = (1/3) csc θ ((15 − 12θ² + θ(4θ² − 15) cot θ) csc θ + 3θ sec θ)`.
pub fn neg_w_prime0_closed(theta: f64) -> f64 {
    let csc = 1.0 / theta.sin();
    let cot = 1.0 / theta.tan();
    let sec = 1.0 / theta.cos();
    let t2 = theta * theta;
    csc * ((15.0 - 12.0 * t2 + theta * (4.0 * t2 - 15.0) * cot) * csc + 3.0 * theta * sec) / 3.0
}

/// Laplace transform `W(s) = ∫₀^{2θ/tan θ} w(u) e^{−su} du`.
pub fn w_laplace(theta: f64, s: Complex64) -> Complex64 {
    let end = 2.0 * g_support(theta);
    integrate(
        |u| (-s * u).exp() * w_eval(theta, u),
        0.0,
        end,
        Tolerance::new(1e-11, 1e-13),
    )
    .value
}

/// θ together with the closed-form constants that enter `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MollifierShape {
    pub theta: f64,
    pub b0: f64,
    pub b1: f64,
    pub lambda: Option<f64>,
    pub g_support: f64,
    pub w_support: f64,
    pub w0: f64,
    #[serde(rename = "F0")]
    pub f0: f64,
    pub neg_w_prime0: f64,
}

impl MollifierShape {
    pub fn from_coefficients(b0: f64, b1: f64) -> Result<Self> {
        let theta = solve_theta(b0, b1)?;
        Ok(Self::build(theta, b0, b1))
    }

    /// Shape for a given θ, with `b₀ = 1` and `b₁` the ratio it implies.
    pub fn from_theta(theta: f64) -> Result<Self> {
        check_theta(theta)?;
        Ok(Self::build(theta, 1.0, ratio_for_theta(theta)))
    }

    fn build(theta: f64, b0: f64, b1: f64) -> Self {
        let half = g_support(theta);
        MollifierShape {
            theta,
            b0,
            b1,
            lambda: None,
            g_support: half,
            w_support: 2.0 * half,
            w0: w0_closed(theta),
            f0: f0_closed(theta),
            neg_w_prime0: neg_w_prime0_closed(theta),
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!("λ = {lambda} must be positive")));
        }
        self.lambda = Some(lambda);
        Ok(self)
    }

    fn lambda(&self) -> Result<f64> {
        self.lambda
            .ok_or_else(|| Error::Domain("λ has not been attached to the shape".into()))
    }

    /// `f(0) = λ w(0)`.
    pub fn f_at_zero(&self) -> Result<f64> {
        Ok(self.lambda()? * self.w0)
    }

    /// `f(y) = λ e^{λy} w(λy)` for `y ≥ 0`, zero for `y < 0`.
    pub fn f_eval(&self, y: f64) -> Result<f64> {
        let lambda = self.lambda()?;
        if y < 0.0 {
            return Ok(0.0);
        }
        if y == 0.0 {
            return self.f_at_zero();
        }
        Ok(lambda * (lambda * y).exp() * w_eval(self.theta, lambda * y))
    }

    /// `F(z) = W(z/λ − 1)`.
    pub fn big_f(&self, z: Complex64) -> Result<Complex64> {
        let lambda = self.lambda()?;
        Ok(w_laplace(self.theta, z / lambda - 1.0))
    }

    /// `F₀(z) = F(z) − f(0)/z`.
    pub fn big_f0(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::DivisionByZero("F₀ is undefined at z = 0"));
        }
        Ok(self.big_f(z)? - self.f_at_zero()? / z)
    }
}

/// Free-function form of [`MollifierShape::big_f`].
pub fn f_transform(shape: &MollifierShape, z: Complex64) -> Result<Complex64> {
    shape.big_f(z)
}

/// Free-function form of [`MollifierShape::big_f0`].
pub fn f0_transform(shape: &MollifierShape, z: Complex64) -> Result<Complex64> {
    shape.big_f0(z)
}
