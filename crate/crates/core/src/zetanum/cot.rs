use crate::error::{Error, Result};
use std::f64::consts::PI;

/// `Re cot(x + iy) = sin 2x / (cosh 2y − cos 2x)`.
///
/// The denominator is evaluated as `2(sinh²y + sin²x)`, which avoids the
/// cancellation of the textbook form near the poles.
pub fn re_cot(x: f64, y: f64) -> Result<f64> {
    let k = (x / PI).round();
    if y == 0.0 && (x - k * PI).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
        return Err(Error::Pole { x, y });
    }
    let (sx, sy) = (x.sin(), y.sinh());
    let denom = 2.0 * (sy * sy + sx * sx);
    if denom.is_infinite() {
        return Ok(0.0);
    }
    Ok((2.0 * x).sin() / denom)
}
