//! Scalar root bracketing and one-dimensional minimisation.

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs.
/// Stops when the bracket is narrower than `xtol` or cannot shrink further.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= xtol || mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Newton polish of a bracketed root. Steps leaving `[lo, hi]` are
/// rejected and the best iterate by `|f|` is returned.
pub fn newton_polish<F, D>(f: F, df: D, x0: f64, lo: f64, hi: f64, iters: usize) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = x0;
    let mut best = (f(x0).abs(), x0);
    for _ in 0..iters {
        let fx = f(x);
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - fx / d;
        if !(next > lo && next < hi) {
            break;
        }
        let r = f(next).abs();
        if r < best.0 {
            best = (r, next);
        }
        if next == x {
            break;
        }
        x = next;
    }
    best.1
}

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`.
/// Returns `(argmin, min)` once the bracket is narrower than `width`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, width: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > width {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15);
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn newton_improves_rough_root() {
        let r = newton_polish(|x| x.cos() - x, |x| -x.sin() - 1.0, 0.7, 0.0, 1.0, 20);
        assert!((r.cos() - r).abs() < 1e-15);
    }

    #[test]
    fn golden_section_quadratic() {
        let (x, v) = golden_section(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-14);
    }
}
