//! Cosine polynomials `p(θ) = Σ_{j=0}^{d} b_j cos(jθ)` and manifestly
//! nonnegative product forms `scale·(1+cos θ)^e·∏(a_i + cos θ)^{2k}`.

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::roots::golden_section;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest degree accepted by [`expand_product`] unless overridden.
pub const MAX_DEGREE: usize = 32;

/// Coefficients `b_0 … b_d` of a cosine polynomial. Serialises as a bare
/// JSON array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CosinePolynomial {
    coeffs: Vec<f64>,
}

impl CosinePolynomial {
    /// Builds a polynomial from `b_0 … b_d`. A lone constant is accepted so
    /// that degenerate cases can still be evaluated; objective functions
    /// apply the stricter [`CosinePolynomial::check_objective`].
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidPolynomial("no coefficients".into()));
        }
        if let Some(j) = coeffs.iter().position(|b| !b.is_finite()) {
            return Err(Error::InvalidPolynomial(format!("b_{j} is not finite")));
        }
        Ok(CosinePolynomial { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `Σ_{j≥0} b_j`, which is also `p(0)`.
    pub fn sum_all(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    /// `Σ_{j≥1} b_j`.
    pub fn sum_tail(&self) -> f64 {
        self.coeffs[1..].iter().sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        CosinePolynomial {
            coeffs: self.coeffs.iter().map(|b| b * c).collect(),
        }
    }

    /// Requirements for feeding the polynomial into `M`, `C` and θ:
    /// degree at least one with `b_0 > 0` and `b_1 > 0`.
    pub fn check_objective(&self) -> Result<()> {
        if self.degree() < 1 {
            return Err(Error::InvalidPolynomial("degree must be at least 1".into()));
        }
        if self.coeffs[0] <= 0.0 || self.coeffs[1] <= 0.0 {
            return Err(Error::InvalidPolynomial(format!(
                "b_0 = {} and b_1 = {} must both be positive",
                self.coeffs[0], self.coeffs[1]
            )));
        }
        Ok(())
    }

    /// Indices `j ≥ 2` whose coefficient is not strictly positive. These are
    /// admitted but reported, since the downstream inequalities are stated
    /// for positive coefficients.
    pub fn nonpositive_interior(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(2)
            .filter(|(_, b)| **b <= 0.0)
            .map(|(j, _)| j)
            .collect()
    }

    /// `Σ b_j cos(jθ)` by Clenshaw's recurrence in `c = cos θ`.
    pub fn eval(&self, theta: f64) -> f64 {
        clenshaw(&self.coeffs, theta.cos())
    }
}

impl TryFrom<Vec<f64>> for CosinePolynomial {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        CosinePolynomial::new(v)
    }
}

impl From<CosinePolynomial> for Vec<f64> {
    fn from(p: CosinePolynomial) -> Self {
        p.coeffs
    }
}

/// Free-function form of [`CosinePolynomial::eval`].
pub fn eval_poly(p: &CosinePolynomial, theta: f64) -> f64 {
    p.eval(theta)
}

fn clenshaw(b: &[f64], c: f64) -> f64 {
    let mut next = 0.0;
    let mut next2 = 0.0;
    for &bj in b.iter().skip(1).rev() {
        let cur = bj + 2.0 * c * next - next2;
        next2 = next;
        next = cur;
    }
    b[0] + c * next - next2
}

fn default_multiplicity() -> u32 {
    2
}

fn is_default_multiplicity(m: &u32) -> bool {
    *m == 2
}

/// `scale·(1+cos θ)^{[half_angle_factor]}·∏ (a_i + cos θ)^{multiplicity}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductForm {
    pub scale: f64,
    pub half_angle_factor: bool,
    pub roots: Vec<f64>,
    /// Exponent of every root factor; always even. Omitted from JSON when 2.
    #[serde(
        default = "default_multiplicity",
        skip_serializing_if = "is_default_multiplicity"
    )]
    pub multiplicity: u32,
}

impl ProductForm {
    pub fn new(scale: f64, half_angle_factor: bool, roots: Vec<f64>) -> Result<Self> {
        let form = ProductForm {
            scale,
            half_angle_factor,
            roots,
            multiplicity: 2,
        };
        form.validate()?;
        Ok(form)
    }

    pub fn with_multiplicity(mut self, multiplicity: u32) -> Result<Self> {
        self.multiplicity = multiplicity;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidProductForm(format!(
                "scale {} must be positive",
                self.scale
            )));
        }
        if let Some(a) = self.roots.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidProductForm(format!(
                "root {a} must be positive"
            )));
        }
        if self.multiplicity == 0 || !self.multiplicity.is_multiple_of(2) {
            return Err(Error::InvalidProductForm(format!(
                "multiplicity {} must be a positive even number",
                self.multiplicity
            )));
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.multiplicity as usize * self.roots.len() + usize::from(self.half_angle_factor)
    }

    /// Direct evaluation of the factored product.
    pub fn eval(&self, theta: f64) -> f64 {
        let c = theta.cos();
        let mut v = self.scale;
        if self.half_angle_factor {
            v *= 1.0 + c;
        }
        for a in &self.roots {
            v *= (a + c).powi(self.multiplicity as i32);
        }
        v
    }
}

/// Power-basis coefficients `p_i` of a polynomial in `c = cos θ` to cosine
/// coefficients `b_j` with `Σ p_i c^i = Σ b_j cos(jθ)`.
///
/// Works by carrying the Chebyshev expansion of `c^i` upward with
/// `c·T_0 = T_1` and `c·T_j = (T_{j−1} + T_{j+1})/2`.
pub fn power_to_cosine(power: &[f64]) -> Vec<f64> {
    if power.is_empty() {
        return vec![0.0];
    }
    let n = power.len();
    let mut out = vec![0.0; n];
    let mut monomial = vec![0.0; n];
    monomial[0] = 1.0;
    for (i, &pi) in power.iter().enumerate() {
        if i > 0 {
            let mut next = vec![0.0; n];
            for (j, &m) in monomial.iter().enumerate().take(i) {
                if m == 0.0 {
                    continue;
                }
                if j == 0 {
                    next[1] += m;
                } else {
                    next[j - 1] += 0.5 * m;
                    next[j + 1] += 0.5 * m;
                }
            }
            monomial = next;
        }
        if pi != 0.0 {
            for (o, m) in out.iter_mut().zip(&monomial) {
                *o += pi * m;
            }
        }
    }
    out
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Expands a product form into cosine coefficients, capped at [`MAX_DEGREE`].
pub fn expand_product(form: &ProductForm) -> Result<CosinePolynomial> {
    expand_product_capped(form, MAX_DEGREE)
}

pub fn expand_product_capped(form: &ProductForm, max_degree: usize) -> Result<CosinePolynomial> {
    form.validate()?;
    let degree = form.degree();
    if degree > max_degree {
        return Err(Error::DegreeOverflow {
            degree,
            max: max_degree,
        });
    }
    let mut power = vec![form.scale];
    if form.half_angle_factor {
        power = poly_mul(&power, &[1.0, 1.0]);
    }
    for &a in &form.roots {
        for _ in 0..form.multiplicity {
            power = poly_mul(&power, &[a, 1.0]);
        }
    }
    CosinePolynomial::new(power_to_cosine(&power))
}

/// Grid and tolerance for [`verify_nonneg`].
#[derive(Debug, Clone, Copy)]
pub struct NonnegOptions {
    /// Number of equally spaced samples on `[0, π]`, endpoints included.
    pub grid_points: usize,
    /// Minima at or above `−tol` count as nonnegative. The threshold is never
    /// tighter than the rounding noise `16ε Σ|b_j|` of the evaluation.
    pub tol: f64,
    pub exec: Execution,
}

impl Default for NonnegOptions {
    fn default() -> Self {
        NonnegOptions {
            grid_points: 200_001,
            tol: 1e-12,
            exec: Execution::default(),
        }
    }
}

impl NonnegOptions {
    pub fn with_tol(tol: f64) -> Self {
        NonnegOptions {
            tol,
            ..Default::default()
        }
    }
}

/// Outcome of a nonnegativity check: the located global minimum on `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Nonnegativity {
    Certificate { theta: f64, min_value: f64 },
    Violation { theta: f64, value: f64 },
}

impl Nonnegativity {
    pub fn is_certificate(&self) -> bool {
        matches!(self, Nonnegativity::Certificate { .. })
    }

    pub fn argmin(&self) -> f64 {
        match *self {
            Nonnegativity::Certificate { theta, .. } | Nonnegativity::Violation { theta, .. } => {
                theta
            }
        }
    }

    pub fn min_value(&self) -> f64 {
        match *self {
            Nonnegativity::Certificate { min_value, .. } => min_value,
            Nonnegativity::Violation { value, .. } => value,
        }
    }
}

// Only the lowest candidates are refined; noisy plateaus can otherwise
// produce thousands of spurious grid minima.
const MAX_REFINED_MINIMA: usize = 64;
const CHUNK: usize = 4096;

/// Samples `p` on a uniform grid over `[0, π]` (p is even and 2π-periodic),
/// refines the lowest local minima by golden-section search to width 1e-12
/// and classifies the global minimum against `−tol`.
pub fn verify_nonneg(p: &CosinePolynomial, opts: NonnegOptions) -> Nonnegativity {
    let n = opts.grid_points.max(3);
    let h = PI / (n - 1) as f64;
    let at = |i: usize| if i == n - 1 { PI } else { i as f64 * h };

    let chunks = n.div_ceil(CHUNK);
    let values: Vec<f64> = par::map_range(opts.exec, chunks, |c| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(n);
        (lo..hi).map(|i| p.eval(at(i))).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();

    let mut minima: Vec<usize> = (0..n)
        .filter(|&i| {
            let left = i == 0 || values[i] <= values[i - 1];
            let right = i == n - 1 || values[i] <= values[i + 1];
            left && right
        })
        .collect();
    minima.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    minima.truncate(MAX_REFINED_MINIMA);

    // Differences below this are rounding noise of the Clenshaw sum.
    let noise = 16.0 * f64::EPSILON * p.coeffs().iter().map(|b| b.abs()).sum::<f64>();

    let (mut best_theta, mut best_value) = (at(minima[0]), values[minima[0]]);
    for &i in &minima {
        let lo = at(i.saturating_sub(1));
        let hi = at((i + 1).min(n - 1));
        let (mut theta, mut value) = golden_section(|t| p.eval(t), lo, hi, 1e-12);
        if values[i] <= value + noise {
            theta = at(i);
            value = values[i];
        }
        if value < best_value - noise {
            best_theta = theta;
            best_value = value;
        }
    }

    // A minimum flatter than the noise floor is a plateau of grid values;
    // take its centre, reflecting across 0 and π where cosine sums are even.
    let k = ((best_theta / h).round() as usize).min(n - 1);
    if values[k] <= best_value + noise {
        let (mut l, mut r) = (k, k);
        while l > 0 && values[l - 1] <= best_value + noise {
            l -= 1;
        }
        while r < n - 1 && values[r + 1] <= best_value + noise {
            r += 1;
        }
        if r > l + 1 {
            let centre = if r == n - 1 && l == 0 {
                best_theta
            } else if r == n - 1 {
                PI
            } else if l == 0 {
                0.0
            } else {
                0.5 * (at(l) + at(r))
            };
            let v = p.eval(centre);
            if v <= best_value + noise {
                best_theta = centre;
                best_value = v;
            }
        }
    }

    if best_value >= -opts.tol.max(noise) {
        Nonnegativity::Certificate {
            theta: best_theta,
            min_value: best_value,
        }
    } else {
        Nonnegativity::Violation {
            theta: best_theta,
            value: best_value,
        }
    }
}
