//! One function per subcommand: read parameters, call the library, build
//! the JSON result and the CSV view.

use crate::config::Params;
use crate::output::{csv_list, fmt17, Csv};
use anyhow::{bail, Result};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::path::PathBuf;
use trigzeta::asymptotics::{
    compute_c, compute_m_with, region_table, AsymptoticParams, DEFAULT_A, DEFAULT_B,
};
use trigzeta::mollifier::{g_eval, w_eval, MollifierShape};
use trigzeta::optimizer::{optimize, OptimizeOptions};
use trigzeta::trigpoly::{
    expand_product, verify_nonneg, CosinePolynomial, NonnegOptions, ProductForm,
};
use trigzeta::zetanum::{
    applied_trig_sum, lemma_check, midpoint_bound_check, LogDerivMethod, TrigSumOptions,
    VerificationReport,
};
use trigzeta::Execution;

pub struct Outcome {
    pub result: Value,
    pub csv: Csv,
    /// Set when a verification report did not pass.
    pub failed: bool,
    /// Additional files requested by the command (path, contents).
    pub side_files: Vec<(PathBuf, String)>,
}

pub const OPTIMIZE_KEYS: &[&str] = &[
    "degree",
    "half_angle_factor",
    "starts",
    "seed",
    "tol",
    "multiplicity",
    "published_start",
    "max_iterations",
    "trace_csv",
];
pub const POLY_KEYS: &[&str] = &[
    "coeffs",
    "roots",
    "scale",
    "half_angle_factor",
    "multiplicity",
];
pub const EVAL_KEYS: &[&str] = &["A", "B", "t"];
pub const LEMMA_KEYS: &[&str] = &["sigma", "t", "eta", "tol", "method", "max_terms", "check"];
pub const TRIG_KEYS: &[&str] = &["x", "y", "tol", "max_terms"];
pub const REGION_KEYS: &[&str] = &["A", "B", "t"];
pub const TABLE_KEYS: &[&str] = &["theta", "lambda", "step"];

const DEFAULT_REGION_HEIGHTS: [f64; 8] = [1e4, 1e5, 1e6, 1e8, 1e10, 1e12, 1e20, 1e30];

fn exec_of(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

pub fn optimize_cmd(p: &mut Params, sequential: bool) -> Result<Outcome> {
    let degree = p.require_u64("degree")? as usize;
    let multiplicity = p.u64_or("multiplicity", 2)?;
    let half_angle_factor = match p.opt_bool("half_angle_factor")? {
        Some(v) => v,
        None => {
            // Only one parity is possible for a given degree and multiplicity.
            let inferred = multiplicity > 0 && degree % multiplicity as usize == 1;
            p.set_resolved("half_angle_factor", json!(inferred));
            inferred
        }
    };
    let mut opts = OptimizeOptions::new(degree, half_angle_factor);
    opts.multiplicity = u32::try_from(multiplicity)?;
    opts.starts = p.u64_or("starts", 64)? as usize;
    opts.seed = p.u64_or("seed", 0)?;
    opts.tol = p.f64_or("tol", 1e-10)?;
    opts.inject_published = p.bool_or("published_start", true)?;
    opts.max_iterations = p.u64_or("max_iterations", opts.max_iterations as u64)? as usize;
    opts.exec = exec_of(sequential);
    let trace_path = p.opt_str("trace_csv")?;
    opts.root_count()?;

    let r = optimize(&opts)?;
    let nonneg = verify_nonneg(&r.best_poly, NonnegOptions::default());
    let result = json!({
        "M": r.m,
        "theta": r.theta,
        "roots": r.best_form.roots,
        "scale": r.best_form.scale,
        "half_angle_factor": r.best_form.half_angle_factor,
        "multiplicity": r.best_form.multiplicity,
        "coefficients": r.best_poly.coeffs(),
        "best_start": r.best_start,
        "starts_used": r.starts_used,
        "feasible_starts": r.feasible_starts,
        "published_start_injected": r.published_start_injected,
        "clamped_coefficients": r.clamped,
        "nonnegativity": nonneg,
        "iterations": r.trace.last().map_or(0, |t| t.iteration),
    });

    let mut csv = Csv::new(&[
        "degree",
        "half_angle_factor",
        "M",
        "theta",
        "roots",
        "coefficients",
        "best_start",
    ]);
    csv.row(vec![
        degree.to_string(),
        half_angle_factor.to_string(),
        fmt17(r.m),
        fmt17(r.theta),
        csv_list(&r.best_form.roots),
        csv_list(r.best_poly.coeffs()),
        r.best_start.clone(),
    ]);

    let mut side_files = Vec::new();
    if let Some(path) = trace_path {
        let mut trace = Csv::new(&["iteration", "M"]);
        trace.comment(format!("best start: {}", r.best_start));
        for t in &r.trace {
            trace.row(vec![t.iteration.to_string(), fmt17(t.m)]);
        }
        side_files.push((PathBuf::from(path), trace.render()));
    }
    Ok(Outcome {
        result,
        csv,
        failed: false,
        side_files,
    })
}

/// The polynomial given by `coeffs`, or by `roots` (with `scale`,
/// `half_angle_factor`, `multiplicity`) as a product form.
fn polynomial(
    p: &mut Params,
    default_coeffs: Option<&[f64]>,
) -> Result<(CosinePolynomial, Option<ProductForm>)> {
    let coeffs = p.opt_list("coeffs")?;
    let roots = p.opt_list("roots")?;
    match (coeffs, roots) {
        (Some(_), Some(_)) => bail!("give either `coeffs` or `roots`, not both"),
        (Some(c), None) => {
            if p.has("scale") || p.has("half_angle_factor") || p.has("multiplicity") {
                bail!("`scale`, `half_angle_factor` and `multiplicity` apply only with `roots`");
            }
            Ok((CosinePolynomial::new(c)?, None))
        }
        (None, Some(r)) => {
            let scale = p.f64_or("scale", 1.0)?;
            let half = p.bool_or("half_angle_factor", false)?;
            let mult = p.u64_or("multiplicity", 2)?;
            let form = ProductForm::new(scale, half, r)?.with_multiplicity(u32::try_from(mult)?)?;
            Ok((expand_product(&form)?, Some(form)))
        }
        (None, None) => match default_coeffs {
            Some(c) => {
                p.set_resolved("coeffs", json!(c));
                Ok((CosinePolynomial::new(c.to_vec())?, None))
            }
            None => bail!(
                "missing required parameter `coeffs` (or `roots`) for `{}`",
                p.command()
            ),
        },
    }
}

pub fn eval_poly_cmd(p: &mut Params, sequential: bool) -> Result<Outcome> {
    let (poly, form) = polynomial(p, None)?;
    let a = p.f64_or("A", DEFAULT_A)?;
    let b = p.f64_or("B", DEFAULT_B)?;
    let t = p.opt_f64("t")?;
    let nonneg_opts = NonnegOptions {
        exec: exec_of(sequential),
        ..Default::default()
    };
    let nonneg = verify_nonneg(&poly, nonneg_opts);
    let mv = compute_m_with(&poly, nonneg_opts)?;
    let c = compute_c(&poly, b)?;
    let co = poly.coeffs();
    let shape = MollifierShape::from_coefficients(co[0], co[1])?;

    let mut result = json!({
        "coefficients": co,
        "degree": poly.degree(),
        "ratio": co[1] / co[0],
        "theta": mv.theta,
        "M": mv.m,
        "C": c,
        "A": a,
        "B": b,
        "nonnegativity": nonneg,
        "nonpositive_interior": poly.nonpositive_interior(),
        "mollifier": shape,
    });
    if let Some(form) = &form {
        result["product_form"] = json!(form);
    }
    let mut row = vec![
        csv_list(co),
        fmt17(mv.theta),
        fmt17(mv.m),
        fmt17(c),
        fmt17(co[1] / co[0]),
        fmt17(nonneg.min_value()),
        fmt17(nonneg.argmin()),
    ];
    if let Some(t) = t {
        let ap = AsymptoticParams::new(&poly, a, b, t)?;
        result["asymptotics"] = json!(ap);
        row.extend([fmt17(t), fmt17(ap.eta), fmt17(ap.lambda)]);
    } else {
        row.extend([String::new(), String::new(), String::new()]);
    }
    let mut csv = Csv::new(&[
        "coefficients",
        "theta",
        "M",
        "C",
        "ratio",
        "min_value",
        "argmin",
        "t",
        "eta",
        "lambda",
    ]);
    csv.row(row);
    Ok(Outcome {
        result,
        csv,
        failed: false,
        side_files: Vec::new(),
    })
}

fn report_csv(reports: &[&VerificationReport]) -> Csv {
    let mut csv = Csv::new(&[
        "check",
        "lhs",
        "rhs",
        "abs_diff",
        "lhs_error_bound",
        "rhs_error_bound",
        "margin",
        "pass",
    ]);
    for r in reports {
        csv.row(vec![
            r.check.clone(),
            fmt17(r.lhs),
            fmt17(r.rhs),
            fmt17(r.abs_diff),
            fmt17(r.lhs_error_bound),
            fmt17(r.rhs_error_bound),
            fmt17(r.margin),
            r.pass.to_string(),
        ]);
    }
    csv
}

fn report_outcome(report: VerificationReport) -> Outcome {
    let csv = report_csv(&[&report]);
    Outcome {
        failed: !report.pass,
        result: json!(report),
        csv,
        side_files: Vec::new(),
    }
}

pub fn verify_lemma_cmd(p: &mut Params, _sequential: bool) -> Result<Outcome> {
    let check = p.str_or("check", "lemma")?;
    let sigma = p.require_f64("sigma")?;
    let eta = p.require_f64("eta")?;
    let tol = p.f64_or("tol", 1e-6)?;
    let method = match p.str_or("method", "euler-maclaurin")?.as_str() {
        "euler-maclaurin" => {
            if p.has("max_terms") {
                bail!("`max_terms` applies only with method = dirichlet");
            }
            LogDerivMethod::EulerMaclaurin
        }
        "dirichlet" => LogDerivMethod::Dirichlet {
            max_terms: p.u64_or("max_terms", trigzeta::zetanum::DEFAULT_SIEVE_LIMIT)?,
        },
        other => bail!("config key `method`: expected euler-maclaurin or dirichlet, got `{other}`"),
    };
    let report = match check.as_str() {
        "lemma" => {
            let t = p.f64_or("t", 0.0)?;
            lemma_check(Complex64::new(sigma, t), eta, tol, method)?
        }
        "midpoint" => {
            if p.has("t") {
                bail!("`t` does not apply to the midpoint check, which runs on the real axis");
            }
            midpoint_bound_check(sigma, eta, tol, method)?
        }
        other => bail!("config key `check`: expected lemma or midpoint, got `{other}`"),
    };
    Ok(report_outcome(report))
}

pub fn verify_trig_cmd(p: &mut Params, sequential: bool) -> Result<Outcome> {
    let (poly, _) = polynomial(p, Some(&[3.0, 4.0, 1.0]))?;
    let x = p.require_f64("x")?;
    let y = p.require_f64("y")?;
    let tol = p.f64_or("tol", 1e-6)?;
    let opts = TrigSumOptions {
        max_terms: p.u64_or("max_terms", trigzeta::zetanum::DEFAULT_TRIG_MAX_TERMS)?,
        exec: exec_of(sequential),
        ..Default::default()
    };
    let report = applied_trig_sum(&poly, x, y, tol, opts)?;
    Ok(report_outcome(report))
}

pub fn region_cmd(p: &mut Params, sequential: bool) -> Result<Outcome> {
    let (poly, _) = polynomial(p, Some(&[3.0, 4.0, 1.0]))?;
    let a = p.f64_or("A", DEFAULT_A)?;
    let b = p.f64_or("B", DEFAULT_B)?;
    let heights = match p.opt_list("t")? {
        Some(t) => t,
        None => {
            p.set_resolved("t", json!(DEFAULT_REGION_HEIGHTS));
            DEFAULT_REGION_HEIGHTS.to_vec()
        }
    };
    let rows = region_table(&poly, a, b, &heights, exec_of(sequential))?;
    let mv = compute_m_with(&poly, NonnegOptions::default())?;
    let c = compute_c(&poly, b)?;
    let mut csv = Csv::new(&["t", "eta", "lambda", "beta_bound", "flags"]);
    for r in &rows {
        csv.row(vec![
            fmt17(r.t),
            fmt17(r.eta),
            fmt17(r.lambda),
            fmt17(r.beta_bound),
            r.flags.label(),
        ]);
    }
    Ok(Outcome {
        result: json!({
            "coefficients": poly.coeffs(),
            "M": mv.m,
            "theta": mv.theta,
            "C": c,
            "A": a,
            "B": b,
            "rows": rows,
        }),
        csv,
        failed: false,
        side_files: Vec::new(),
    })
}

pub fn mollifier_table_cmd(p: &mut Params, _sequential: bool) -> Result<Outcome> {
    let shape = match p.opt_f64("theta")? {
        Some(theta) => {
            if p.has("coeffs") || p.has("roots") {
                bail!("give either `theta` or a polynomial, not both");
            }
            MollifierShape::from_theta(theta)?
        }
        None => {
            let (poly, _) = polynomial(p, Some(&[3.0, 4.0, 1.0]))?;
            let co = poly.coeffs();
            if co.len() < 2 {
                bail!("the polynomial needs degree at least 1 to fix θ");
            }
            MollifierShape::from_coefficients(co[0], co[1])?
        }
    };
    let lambda = p.f64_or("lambda", 1.0)?;
    let shape = shape.with_lambda(lambda)?;
    let step = p.f64_or("step", 0.01)?;
    if step <= 0.0 {
        bail!("config key `step`: must be positive");
    }
    // f vanishes beyond w_support/λ, g beyond g_support.
    let end = shape.w_support.max(shape.w_support / lambda);
    let count = (end / step).ceil() as usize + 1;
    if count > 1_000_000 {
        bail!("config key `step`: {count} rows requested, at most 1000000 are allowed");
    }
    let mut csv = Csv::new(&["u", "g(u)", "w(u)", "f(u)"]);
    let mut rows = Vec::with_capacity(count);
    for i in 0..count {
        let u = i as f64 * step;
        let (g, w, f) = (
            g_eval(shape.theta, u),
            w_eval(shape.theta, u),
            shape.f_eval(u)?,
        );
        csv.row(vec![fmt17(u), fmt17(g), fmt17(w), fmt17(f)]);
        rows.push(json!({"u": u, "g": g, "w": w, "f": f}));
    }
    Ok(Outcome {
        result: json!({"shape": shape, "rows": rows}),
        csv,
        failed: false,
        side_files: Vec::new(),
    })
}
