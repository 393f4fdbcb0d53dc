//! Multistart Nelder–Mead search over product forms for the largest `M`.
//!
//! Roots live in `(0.01, 3]` and are optimised in log coordinates. Starts
//! come from a Halton sequence shifted by a seed-derived offset, so start
//! `i` is the same point for every run with the same seed and a run with
//! more starts explores a superset of the points of a smaller run.

use crate::asymptotics::m_from_theta;
use crate::error::{Error, Result};
use crate::mollifier::solve_theta;
use crate::par::{self, Execution};
use crate::trigpoly::{expand_product, CosinePolynomial, ProductForm, MAX_DEGREE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::cmp::Ordering;

pub const ROOT_MIN: f64 = 0.01;
pub const ROOT_MAX: f64 = 3.0;

/// Roots of the degree-5 optimum with the `(1 + cos θ)` factor, as
/// published to seven decimals.
pub const PUBLISHED_D5_ROOTS: [f64; 2] = [0.865_255_9, 0.197_447_6];

/// Coefficients in `[−CLAMP_TOL, 0)` are set to zero and reported.
pub const CLAMP_TOL: f64 = 1e-12;

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Rejection {
    OutOfBox { root: f64 },
    DegreeOverflow { degree: usize },
    NonPositiveB0 { b0: f64 },
    NonPositiveB1 { b1: f64 },
    Ratio { ratio: f64 },
    NegativeCoefficient { index: usize, value: f64 },
}

/// A feasible product form with its expansion, θ and `M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub poly: CosinePolynomial,
    pub theta: f64,
    #[serde(rename = "M")]
    pub m: f64,
    /// Coefficients that were within rounding of zero and clamped.
    pub clamped: Vec<usize>,
}

/// Expands `form`, checks feasibility and computes `M`. Nonnegativity
/// follows from the product structure and is not re-verified here.
pub fn evaluate_candidate(form: &ProductForm) -> std::result::Result<Candidate, Rejection> {
    if let Some(&root) = form
        .roots
        .iter()
        .find(|a| !(**a > ROOT_MIN * 0.999_999 && **a <= ROOT_MAX * 1.000_001))
    {
        return Err(Rejection::OutOfBox { root });
    }
    let poly = expand_product(form).map_err(|_| Rejection::DegreeOverflow {
        degree: form.degree(),
    })?;
    let mut coeffs = poly.coeffs().to_vec();
    let mut clamped = Vec::new();
    for (j, b) in coeffs.iter_mut().enumerate().skip(2) {
        if *b < -CLAMP_TOL {
            return Err(Rejection::NegativeCoefficient {
                index: j,
                value: *b,
            });
        }
        if *b < 0.0 {
            *b = 0.0;
            clamped.push(j);
        }
    }
    if coeffs[0] <= 0.0 {
        return Err(Rejection::NonPositiveB0 { b0: coeffs[0] });
    }
    if coeffs.len() < 2 || coeffs[1] <= 0.0 {
        return Err(Rejection::NonPositiveB1 {
            b1: coeffs.get(1).copied().unwrap_or(0.0),
        });
    }
    let theta = solve_theta(coeffs[0], coeffs[1]).map_err(|_| Rejection::Ratio {
        ratio: coeffs[1] / coeffs[0],
    })?;
    let poly = CosinePolynomial::new(coeffs).expect("finite coefficients");
    let m = m_from_theta(&poly, theta);
    Ok(Candidate {
        poly,
        theta,
        m,
        clamped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    pub degree: usize,
    pub half_angle_factor: bool,
    pub starts: usize,
    pub seed: u64,
    /// Simplex diameter (log-root coordinates) at which a start stops.
    pub tol: f64,
    /// Adds the published degree-5 roots as an extra, labelled start.
    pub inject_published: bool,
    /// Exponent of each root factor; even, 2 by default.
    pub multiplicity: u32,
    pub max_iterations: usize,
    pub exec: Execution,
}

impl OptimizeOptions {
    pub fn new(degree: usize, half_angle_factor: bool) -> Self {
        OptimizeOptions {
            degree,
            half_angle_factor,
            starts: 64,
            seed: 0,
            tol: 1e-10,
            inject_published: true,
            multiplicity: 2,
            max_iterations: 20_000,
            exec: Execution::default(),
        }
    }

    /// Number of root factors implied by degree, parity and multiplicity.
    pub fn root_count(&self) -> Result<usize> {
        if !(2..=MAX_DEGREE).contains(&self.degree) {
            return Err(Error::InvalidSettings(format!(
                "degree {} must lie in 2..={MAX_DEGREE}",
                self.degree
            )));
        }
        if self.multiplicity == 0 || !self.multiplicity.is_multiple_of(2) {
            return Err(Error::InvalidSettings(format!(
                "multiplicity {} must be a positive even number",
                self.multiplicity
            )));
        }
        let rest = self.degree - usize::from(self.half_angle_factor);
        let mult = self.multiplicity as usize;
        if rest == 0 || !rest.is_multiple_of(mult) {
            return Err(Error::InvalidSettings(format!(
                "degree {} with half_angle_factor = {} is not {}·m{} for m ≥ 1",
                self.degree,
                self.half_angle_factor,
                mult,
                if self.half_angle_factor { " + 1" } else { "" }
            )));
        }
        if self.starts == 0 {
            return Err(Error::InvalidSettings("starts must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidSettings("tol must be positive".into()));
        }
        Ok(rest / mult)
    }

    fn publishes_start(&self) -> bool {
        self.inject_published
            && self.degree == 5
            && self.half_angle_factor
            && self.multiplicity == 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub iteration: usize,
    #[serde(rename = "M")]
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub best_form: ProductForm,
    pub best_poly: CosinePolynomial,
    pub theta: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub starts_used: usize,
    pub feasible_starts: usize,
    /// `"halton:<i>"` or `"published"` for the injected degree-5 start.
    pub best_start: String,
    pub published_start_injected: bool,
    /// Best `M` after each improving iteration of the winning start.
    pub trace: Vec<TracePoint>,
    pub clamped: Vec<usize>,
}

struct StartOutcome {
    label: String,
    roots: Vec<f64>,
    m: f64,
    trace: Vec<TracePoint>,
}

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % b) as f64 * f;
        i /= b;
        f *= inv;
    }
    r
}

/// Start `index` in log-root coordinates.
fn halton_start(index: usize, shift: &[f64]) -> Vec<f64> {
    let (lo, hi) = (ROOT_MIN.ln(), ROOT_MAX.ln());
    shift
        .iter()
        .enumerate()
        .map(|(d, s)| {
            let u = (radical_inverse(index as u64 + 1, PRIMES[d]) + s).fract();
            // keep strictly inside the box
            let u = u.clamp(1e-6, 1.0 - 1e-6);
            lo + u * (hi - lo)
        })
        .collect()
}

struct Objective {
    half_angle_factor: bool,
    multiplicity: u32,
}

impl Objective {
    fn form(&self, x: &[f64]) -> ProductForm {
        let mut roots: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        roots.sort_by(|a, b| b.total_cmp(a));
        ProductForm {
            scale: 1.0,
            half_angle_factor: self.half_angle_factor,
            roots,
            multiplicity: self.multiplicity,
        }
    }

    /// `−M`, or `+∞` outside the feasible set.
    fn cost(&self, x: &[f64]) -> f64 {
        let (lo, hi) = (ROOT_MIN.ln(), ROOT_MAX.ln());
        if x.iter().any(|v| !(*v > lo && *v <= hi)) {
            return f64::INFINITY;
        }
        match evaluate_candidate(&self.form(x)) {
            Ok(c) => -c.m,
            Err(_) => f64::INFINITY,
        }
    }
}

/// Nelder–Mead with reflection 1, expansion 2, contraction 1/2, shrink 1/2.
fn nelder_mead(
    obj: &Objective,
    start: Vec<f64>,
    tol: f64,
    max_iterations: usize,
) -> Option<(Vec<f64>, f64, Vec<TracePoint>)> {
    let n = start.len();
    let (lo, hi) = (ROOT_MIN.ln(), ROOT_MAX.ln());
    let step = 0.05 * (hi - lo);
    let mut simplex: Vec<Vec<f64>> = vec![start.clone()];
    for i in 0..n {
        let mut v = start.clone();
        v[i] = if v[i] + step <= hi {
            v[i] + step
        } else {
            v[i] - step
        };
        simplex.push(v);
    }
    let mut costs: Vec<f64> = simplex.iter().map(|v| obj.cost(v)).collect();
    if costs.iter().all(|c| c.is_infinite()) {
        return None;
    }

    let mut trace = Vec::new();
    let mut best_seen = f64::INFINITY;
    for iteration in 0..max_iterations {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        costs = order.iter().map(|&i| costs[i]).collect();

        if costs[0] < best_seen {
            best_seen = costs[0];
            trace.push(TracePoint {
                iteration,
                m: -costs[0],
            });
        }

        let diameter = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < tol && costs[0].is_finite() {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|d| simplex[..n].iter().map(|v| v[d]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = along(1.0);
        let fr = obj.cost(&reflected);
        if fr < costs[0] {
            let expanded = along(2.0);
            let fe = obj.cost(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                costs[n] = fe;
            } else {
                simplex[n] = reflected;
                costs[n] = fr;
            }
            continue;
        }
        if fr < costs[n - 1] {
            simplex[n] = reflected;
            costs[n] = fr;
            continue;
        }
        let (contracted, fc) = if fr < costs[n] {
            let p = along(0.5);
            let f = obj.cost(&p);
            (p, f)
        } else {
            let p = along(-0.5);
            let f = obj.cost(&p);
            (p, f)
        };
        if fc < costs[n].min(fr) {
            simplex[n] = contracted;
            costs[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            let v: Vec<f64> = simplex[i]
                .iter()
                .zip(&best)
                .map(|(x, b)| b + 0.5 * (x - b))
                .collect();
            costs[i] = obj.cost(&v);
            simplex[i] = v;
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)))
        .expect("nonempty simplex");
    if costs[best].is_finite() {
        Some((simplex[best].clone(), costs[best], trace))
    } else {
        None
    }
}

fn run_start(
    obj: &Objective,
    label: String,
    x0: Vec<f64>,
    opts: &OptimizeOptions,
) -> Option<StartOutcome> {
    let (x, _, mut trace) = nelder_mead(obj, x0, opts.tol, opts.max_iterations)?;
    // One restart from the converged point guards against a collapsed simplex.
    let (x, cost, more) = nelder_mead(obj, x, opts.tol, opts.max_iterations)?;
    let offset = trace.last().map_or(0, |t| t.iteration + 1);
    let best_before = trace.last().map_or(f64::NEG_INFINITY, |t| t.m);
    trace.extend(
        more.into_iter()
            .filter(|t| t.m > best_before)
            .map(|t| TracePoint {
                iteration: t.iteration + offset,
                m: t.m,
            }),
    );
    Some(StartOutcome {
        label,
        roots: obj.form(&x).roots,
        m: -cost,
        trace,
    })
}

fn better(a: &StartOutcome, b: &StartOutcome) -> bool {
    match a.m.total_cmp(&b.m) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => {
            a.roots
                .iter()
                .zip(&b.roots)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| *o != Ordering::Equal)
                == Some(Ordering::Less)
        }
    }
}

/// Maximises `M` over product forms of the requested shape.
pub fn optimize(opts: &OptimizeOptions) -> Result<OptimizationResult> {
    let roots = opts.root_count()?;
    if roots > PRIMES.len() {
        return Err(Error::InvalidSettings(format!(
            "at most {} root factors are supported",
            PRIMES.len()
        )));
    }
    let obj = Objective {
        half_angle_factor: opts.half_angle_factor,
        multiplicity: opts.multiplicity,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let shift: Vec<f64> = (0..roots).map(|_| rng.gen::<f64>()).collect();

    let mut jobs: Vec<(String, Vec<f64>)> = (0..opts.starts)
        .map(|i| (format!("halton:{i}"), halton_start(i, &shift)))
        .collect();
    let injected = opts.publishes_start();
    if injected {
        jobs.push((
            "published".to_string(),
            PUBLISHED_D5_ROOTS.iter().map(|r| r.ln()).collect(),
        ));
    }
    let starts_used = jobs.len();

    let outcomes = par::map(opts.exec, &jobs, |(label, x0)| {
        run_start(&obj, label.clone(), x0.clone(), opts)
    });
    let feasible: Vec<StartOutcome> = outcomes.into_iter().flatten().collect();
    let feasible_starts = feasible.len();
    let best = feasible
        .into_iter()
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .ok_or(Error::NoFeasiblePoint {
            starts: starts_used,
        })?;

    let form = ProductForm {
        scale: 1.0,
        half_angle_factor: opts.half_angle_factor,
        roots: best.roots,
        multiplicity: opts.multiplicity,
    };
    let cand = evaluate_candidate(&form)
        .map_err(|r| Error::InvalidProductForm(format!("best form became infeasible: {r:?}")))?;
    Ok(OptimizationResult {
        best_form: form,
        best_poly: cand.poly,
        theta: cand.theta,
        m: cand.m,
        starts_used,
        feasible_starts,
        best_start: best.label,
        published_start_injected: injected,
        trace: best.trace,
        clamped: cand.clamped,
    })
}
