//! `−ζ′/ζ(s) = Σ Λ(n) n^{−s}` by truncation with an explicit tail bound.

use super::sieve::{shared_table, VonMangoldtTable, DEFAULT_SIEVE_LIMIT};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use num_complex::Complex64;
use serde::Serialize;

/// Smallest real part accepted by the truncated Dirichlet series.
pub const MIN_SIGMA: f64 = 1.1;

const CHUNK: usize = 1 << 15;

/// `Σ_{n>N} log n · n^{−σ} ≤ ∫_N^∞ log x · x^{−σ} dx
///  = N^{1−σ} (log N/(σ−1) + 1/(σ−1)²)`, valid for `N ≥ 3`, `σ > 1`.
/// Since `Λ(n) ≤ log n` this bounds the tail of the series for any
/// `Im s`.
pub fn tail_bound(n: u64, sigma: f64) -> f64 {
    let nf = (n.max(3)) as f64;
    let d = sigma - 1.0;
    nf.powf(-d) * (nf.ln() / d + 1.0 / (d * d))
}

/// Smallest `N ≥ 3` with `tail_bound(N, σ) ≤ tol`, if it is at most `cap`.
pub fn required_terms(sigma: f64, tol: f64, cap: u64) -> Result<u64> {
    if tail_bound(3, sigma) <= tol {
        return Ok(3);
    }
    // The bound decreases in N; bisect on log N.
    let mut lo = 3f64.ln();
    let mut hi = lo;
    let bound_at = |ln_n: f64| {
        let d = sigma - 1.0;
        (-d * ln_n).exp() * (ln_n / d + 1.0 / (d * d))
    };
    while bound_at(hi) > tol {
        hi *= 2.0;
        if hi > 700.0 {
            break;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bound_at(mid) > tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let needed = hi.exp().ceil();
    if needed > cap as f64 {
        return Err(Error::Capacity {
            needed: needed.min(u64::MAX as f64) as u64,
            limit: cap,
        });
    }
    let mut n = needed as u64;
    // Repair rounding so that the bound provably holds at n.
    while tail_bound(n, sigma) > tol {
        n += 1;
    }
    Ok(n)
}

/// A value with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncated<T> {
    pub value: T,
    pub tail_bound: f64,
    pub terms: u64,
}

/// `Σ_{n≤N} Λ(n) n^{−s}` over a given table. Chunk partial sums are
/// combined in a fixed order, so the result does not depend on `exec`.
pub fn dirichlet_sum(table: &VonMangoldtTable, s: Complex64, n: u64, exec: Execution) -> Complex64 {
    let entries = table.up_to(n);
    let chunks: Vec<&[(u64, f64)]> = entries.chunks(CHUNK).collect();
    par::map(exec, &chunks, |chunk| {
        chunk
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &(m, lam)| {
                let ln = (m as f64).ln();
                let mag = lam * (-s.re * ln).exp();
                let (sin, cos) = (s.im * ln).sin_cos();
                acc + Complex64::new(mag * cos, -mag * sin)
            })
    })
    .into_iter()
    .fold(Complex64::new(0.0, 0.0), |a, b| a + b)
}

fn check_sigma(s: Complex64) -> Result<()> {
    if !(s.re >= MIN_SIGMA) || !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::Domain(format!(
            "the truncated Dirichlet series needs Re s ≥ {MIN_SIGMA}, got {s}"
        )));
    }
    Ok(())
}

/// `Σ_{n≤N} Λ(n) n^{−s}` with the tail bound at `N`.
pub fn neg_zeta_logderiv_truncated(
    s: Complex64,
    n: u64,
    exec: Execution,
) -> Result<Truncated<Complex64>> {
    check_sigma(s)?;
    let n = n.max(3);
    let table = shared_table(n)?;
    Ok(Truncated {
        value: dirichlet_sum(&table, s, n, exec),
        tail_bound: tail_bound(n, s.re),
        terms: n,
    })
}

/// `−ζ′(s)/ζ(s)` with truncation chosen so the tail bound is at most `tol`.
pub fn neg_zeta_logderiv(s: Complex64, tol: f64) -> Result<Truncated<Complex64>> {
    neg_zeta_logderiv_with(s, tol, DEFAULT_SIEVE_LIMIT, Execution::default())
}

pub fn neg_zeta_logderiv_with(
    s: Complex64,
    tol: f64,
    cap: u64,
    exec: Execution,
) -> Result<Truncated<Complex64>> {
    check_sigma(s)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    let n = required_terms(s.re, tol, cap.min(DEFAULT_SIEVE_LIMIT))?;
    neg_zeta_logderiv_truncated(s, n, exec)
}

/// Upper bound for `Σ_{n≥2} log n · n^{−σ}`, hence for `|ζ′/ζ(s)|` on
/// `Re s = σ`: the `n = 2, 3` terms plus `∫_3^∞ log x · x^{−σ} dx`.
///
/// `majorant(σ) · 2^σ` is decreasing in σ, which gives the geometric tail
/// estimates used for sums over shifted arguments.
pub fn majorant(sigma: f64) -> f64 {
    let d = sigma - 1.0;
    let ln2 = std::f64::consts::LN_2;
    let ln3 = 3f64.ln();
    ln2 * (-sigma * ln2).exp()
        + ln3 * (-sigma * ln3).exp()
        + (-d * ln3).exp() * (ln3 / d + 1.0 / (d * d))
}
