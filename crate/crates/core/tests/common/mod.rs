//! Reference routines that share no code with the library.

#![allow(dead_code)]

// 5-point Gauss–Legendre nodes and weights on [-1, 1].
const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_08),
    (0.906_179_845_938_664, 0.236_926_885_056_189_08),
];

/// Composite 5-point Gauss–Legendre with `panels` equal panels.
pub fn gauss_composite(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        let half = 0.5 * h;
        total += GL5.iter().map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half;
    }
    total
}

/// `g(u) = (cos(u tan θ) − cos θ)/cos²θ` on `|u| < θ/tan θ`.
pub fn g_ref(theta: f64, u: f64) -> f64 {
    let half = theta / theta.tan();
    if u.abs() >= half {
        0.0
    } else {
        ((u * theta.tan()).cos() - theta.cos()) / theta.cos().powi(2)
    }
}

/// `(g∗g)(u)` for `u ≥ 0` by composite Gauss over the overlap.
pub fn w_ref(theta: f64, u: f64, panels: usize) -> f64 {
    let half = theta / theta.tan();
    if u >= 2.0 * half {
        return 0.0;
    }
    gauss_composite(
        |v| g_ref(theta, v) * g_ref(theta, u - v),
        u - half,
        half,
        panels,
    )
}

/// Plain bisection for `sin²θ = r(1 − θ cot θ)` on `(0, π/2)`.
pub fn theta_by_bisection(r: f64) -> f64 {
    let h = |t: f64| t.sin().powi(2) - r * (1.0 - t / t.tan());
    let (mut lo, mut hi) = (1e-3, std::f64::consts::FRAC_PI_2 - 1e-15);
    assert!(h(lo) > 0.0 && h(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
