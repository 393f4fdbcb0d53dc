//! ζ(s) and ζ′(s) for `Re s > 1` by Euler–Maclaurin summation.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Largest |Im s| accepted by [`zeta_em`].
pub const MAX_IMAG: f64 = 1e4;

// B_{2k} / (2k)! for k = 1..=15.
const BERNOULLI_OVER_FACTORIAL: [f64; 15] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
    43_867.0 / 798.0 / 6_402_373_705_728_000.0,
    -174_611.0 / 330.0 / 2_432_902_008_176_640_000.0,
    854_513.0 / 138.0 / 1.124_000_727_777_607_7e21,
    -236_364_091.0 / 2730.0 / 6.204_484_017_332_394e23,
    8_553_103.0 / 6.0 / 4.032_914_611_266_056_3e26,
    -23_749_461_029.0 / 870.0 / 3.048_883_446_117_138_5e29,
    8_615_841_276_005.0 / 14_322.0 / 2.652_528_598_121_910_6e32,
];

/// ζ(s), ζ′(s) and estimates of their absolute errors.
#[derive(Debug, Clone, Copy)]
pub struct ZetaEval {
    pub zeta: Complex64,
    pub zeta_err: f64,
    pub dzeta: Complex64,
    pub dzeta_err: f64,
}

fn check_window(s: Complex64) -> Result<()> {
    if !(s.re > 1.0) || !s.re.is_finite() || !(s.im.abs() <= MAX_IMAG) {
        return Err(Error::Domain(format!(
            "ζ is evaluated for Re s > 1 and |Im s| ≤ {MAX_IMAG}, got {s}"
        )));
    }
    Ok(())
}

/// ζ(s) and ζ′(s) together.
///
/// With cutoff `N ≈ |s| + 10` successive correction terms shrink by about
/// `|s + 2k|² / (2πN)²`, so a handful of Bernoulli terms reach double
/// precision. The error estimate is the first omitted term scaled by
/// `|s + 2m + 1| / (σ + 2m + 1)`.
pub fn zeta_with_derivative(s: Complex64) -> Result<ZetaEval> {
    check_window(s)?;
    let cutoff = (s.norm().ceil() as u64 + 10).max(16);
    let nf = cutoff as f64;
    let ln_n = nf.ln();

    let mut zeta = Complex64::new(0.0, 0.0);
    let mut dzeta = Complex64::new(0.0, 0.0);
    for n in 1..cutoff {
        let ln = (n as f64).ln();
        let term = (-s * ln).exp();
        zeta += term;
        dzeta -= term * ln;
    }

    let n_pow = (-s * ln_n).exp(); // N^{-s}
    let s1 = s - 1.0;
    let tail = n_pow * nf / s1;
    zeta += tail + n_pow * 0.5;
    dzeta += -tail * ln_n - tail / s1 - n_pow * (0.5 * ln_n);

    // T_k = c_k · P_k(s) · N^{-s-2k+1}, P_k = s(s+1)…(s+2k−2)
    let mut poly = s; // P_1
    let mut dpoly_over_poly = 1.0 / s; // P_k'/P_k
    let mut npow_k = n_pow / nf; // N^{-s-1}
    let mut zeta_err = f64::INFINITY;
    let mut dzeta_err = f64::INFINITY;
    let mut last = (f64::INFINITY, f64::INFINITY);
    for (k, &c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = poly * npow_k * c;
        let dterm = term * (dpoly_over_poly - ln_n);
        let scale = (s + (2 * k + 3) as f64).norm() / (s.re + (2 * k + 3) as f64);
        let small = term.norm() * scale <= 1e-17 * zeta.norm()
            && dterm.norm() * scale <= 1e-17 * dzeta.norm().max(1e-300);
        if small {
            zeta_err = term.norm() * scale;
            dzeta_err = dterm.norm() * scale;
            break;
        }
        zeta += term;
        dzeta += dterm;
        last = (term.norm() * scale, dterm.norm() * scale);
        let a = s + (2 * k + 1) as f64;
        let b = s + (2 * k + 2) as f64;
        poly = poly * a * b;
        dpoly_over_poly += 1.0 / a + 1.0 / b;
        npow_k /= nf * nf;
    }
    if zeta_err.is_infinite() {
        // Series not exhausted; the last included term bounds the remainder.
        (zeta_err, dzeta_err) = last;
    }
    // Rounding in the direct sum, roughly N·ε relative.
    let rounding = 4.0 * f64::EPSILON * (cutoff as f64).sqrt();
    Ok(ZetaEval {
        zeta,
        zeta_err: zeta_err + rounding * zeta.norm(),
        dzeta,
        dzeta_err: dzeta_err + rounding * dzeta.norm() * ln_n,
    })
}

/// ζ(s) for `Re s > 1`, `|Im s| ≤ 10⁴`.
pub fn zeta_em(s: Complex64) -> Result<Complex64> {
    zeta_with_derivative(s).map(|z| z.zeta)
}

/// `−ζ′(s)/ζ(s)` with a first-order propagated error estimate.
pub fn neg_log_derivative_em(s: Complex64) -> Result<(Complex64, f64)> {
    let z = zeta_with_derivative(s)?;
    let value = -z.dzeta / z.zeta;
    let zn = z.zeta.norm();
    let err = z.dzeta_err / zn + value.norm() * z.zeta_err / zn;
    Ok((value, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zeta_two_and_four() {
        let z2 = zeta_em(c(2.0, 0.0)).unwrap();
        assert!((z2.re - PI * PI / 6.0).abs() <= 1e-12 * PI * PI / 6.0);
        assert!(z2.im.abs() < 1e-16);
        let z4 = zeta_em(c(4.0, 0.0)).unwrap();
        assert!((z4.re - PI.powi(4) / 90.0).abs() <= 1e-14);
    }

    #[test]
    fn zeta_reference_off_axis() {
        // 40-digit reference for ζ(1.5 + 10i)
        let want = c(1.278_391_166_434_759_7, -0.095_724_055_986_708_85);
        let got = zeta_em(c(1.5, 10.0)).unwrap();
        assert!((got - want).norm() <= 1e-12 * want.norm());
    }

    #[test]
    fn zeta_real_axis_is_decreasing_and_above_one() {
        let mut prev = f64::INFINITY;
        for k in 0..40 {
            let v = zeta_em(c(1.05 + 0.25 * k as f64, 0.0)).unwrap().re;
            assert!(v > 1.0 && v < prev);
            prev = v;
        }
    }

    #[test]
    fn log_derivative_at_two() {
        let (v, err) = neg_log_derivative_em(c(2.0, 0.0)).unwrap();
        assert!((v.re - 0.569_960_993_094_532_8).abs() < 1e-13);
        assert!(err < 1e-13);
    }

    #[test]
    fn window() {
        assert!(zeta_em(c(1.0, 5.0)).is_err());
        assert!(zeta_em(c(2.0, 2e4)).is_err());
        assert!(zeta_em(c(1.1, 9999.0)).is_ok());
    }

    #[test]
    fn large_height_against_reflected_conjugate() {
        let a = zeta_em(c(1.3, 5000.0)).unwrap();
        let b = zeta_em(c(1.3, -5000.0)).unwrap();
        assert!((a - b.conj()).norm() < 1e-12 * a.norm());
    }
}
