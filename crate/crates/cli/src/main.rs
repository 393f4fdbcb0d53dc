//! `trigzeta` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 a verification
//! report that did not pass.

mod commands;
mod config;
mod output;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use commands::Outcome;
use config::Params;
use output::Format;
use serde_json::json;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use toml::Value;

#[derive(Parser)]
#[command(
    name = "trigzeta",
    version,
    about = "Nonnegative cosine polynomials and zero-free region constants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Common {
    /// Flat TOML file of `key = value` defaults; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// json, csv or text
    #[arg(long)]
    format: Option<String>,
    /// Write the result here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print floats with 17 significant digits in text output
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    full_precision: Option<bool>,
    /// Run without the thread pool
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    sequential: Option<bool>,
}

#[derive(Args)]
struct PolyArgs {
    /// Cosine coefficients b0,b1,...
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Roots a_i of a product form scale·(1+cos)^e·∏(a_i+cos)^m
    #[arg(long)]
    roots: Option<String>,
    #[arg(long)]
    scale: Option<f64>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    half_angle_factor: Option<bool>,
    #[arg(long)]
    multiplicity: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Multistart search for the product form with the largest M
    Optimize {
        #[arg(long)]
        degree: Option<u64>,
        /// Include the (1 + cos θ) factor; inferred from the degree when omitted
        #[arg(long, num_args = 0..=1, default_missing_value = "true")]
        half_angle_factor: Option<bool>,
        #[arg(long)]
        starts: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Simplex diameter in log-root coordinates at which a start stops
        #[arg(long)]
        tol: Option<f64>,
        /// Even exponent of each root factor
        #[arg(long)]
        multiplicity: Option<u64>,
        /// Add the published degree-5 roots as a labelled start
        #[arg(long, num_args = 0..=1, default_missing_value = "true")]
        published_start: Option<bool>,
        #[arg(long)]
        max_iterations: Option<u64>,
        /// Write the best-so-far trace of the winning start as CSV
        #[arg(long)]
        trace_csv: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// θ, M, C and the mollifier constants of one polynomial
    EvalPoly {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long = "A")]
        a: Option<f64>,
        #[arg(long = "B")]
        b: Option<f64>,
        /// Height for η and λ
        #[arg(long)]
        t: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Both sides of the telescoping lemma, or the midpoint inequality
    VerifyLemma {
        /// lemma or midpoint
        #[arg(long)]
        check: Option<String>,
        #[arg(long)]
        sigma: Option<f64>,
        /// Imaginary part of z
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        /// euler-maclaurin or dirichlet
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        max_terms: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Dirichlet-side against sieve-side evaluation of Σ b_j (−ζ'/ζ)(x + ijy)
    VerifyTrig {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_terms: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// η, λ and 1 − λ over a list of heights
    Region {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long = "A")]
        a: Option<f64>,
        #[arg(long = "B")]
        b: Option<f64>,
        /// Comma-separated heights
        #[arg(long)]
        t: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Samples of g, w and f on a uniform grid
    MollifierTable {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Default)]
struct Flags(BTreeMap<String, Value>);

impl Flags {
    fn f(&mut self, key: &str, v: Option<f64>) -> &mut Self {
        if let Some(v) = v {
            self.0.insert(key.into(), Value::Float(v));
        }
        self
    }
    fn u(&mut self, key: &str, v: Option<u64>) -> &mut Self {
        if let Some(v) = v {
            self.0
                .insert(key.into(), Value::Integer(v.min(i64::MAX as u64) as i64));
        }
        self
    }
    fn b(&mut self, key: &str, v: Option<bool>) -> &mut Self {
        if let Some(v) = v {
            self.0.insert(key.into(), Value::Boolean(v));
        }
        self
    }
    fn s(&mut self, key: &str, v: Option<String>) -> &mut Self {
        if let Some(v) = v {
            self.0.insert(key.into(), Value::String(v));
        }
        self
    }
    fn poly(&mut self, p: PolyArgs) -> &mut Self {
        self.s("coeffs", p.coeffs)
            .s("roots", p.roots)
            .f("scale", p.scale)
            .b("half_angle_factor", p.half_angle_factor)
            .u("multiplicity", p.multiplicity)
    }
    fn common(&mut self, c: &Common) -> &mut Self {
        self.s("format", c.format.clone())
            .s("output", c.output.as_ref().map(|p| p.display().to_string()))
            .b("full_precision", c.full_precision)
            .b("sequential", c.sequential)
    }
}

type Runner = fn(&mut Params, bool) -> Result<Outcome>;

struct Plan {
    name: &'static str,
    keys: Vec<&'static str>,
    flags: BTreeMap<String, Value>,
    config: Option<PathBuf>,
    run: Runner,
}

fn plan(cmd: Command) -> Plan {
    use commands::*;
    let mut f = Flags::default();
    let (name, keys, config, run): (&'static str, Vec<&'static str>, Option<PathBuf>, Runner) =
        match cmd {
            Command::Optimize {
                degree,
                half_angle_factor,
                starts,
                seed,
                tol,
                multiplicity,
                published_start,
                max_iterations,
                trace_csv,
                common,
            } => {
                f.u("degree", degree)
                    .b("half_angle_factor", half_angle_factor)
                    .u("starts", starts)
                    .u("seed", seed)
                    .f("tol", tol)
                    .u("multiplicity", multiplicity)
                    .b("published_start", published_start)
                    .u("max_iterations", max_iterations)
                    .s("trace_csv", trace_csv)
                    .common(&common);
                (
                    "optimize",
                    OPTIMIZE_KEYS.to_vec(),
                    common.config,
                    optimize_cmd,
                )
            }
            Command::EvalPoly {
                poly,
                a,
                b,
                t,
                common,
            } => {
                f.poly(poly).f("A", a).f("B", b).f("t", t).common(&common);
                (
                    "eval-poly",
                    [POLY_KEYS, EVAL_KEYS].concat(),
                    common.config,
                    eval_poly_cmd,
                )
            }
            Command::VerifyLemma {
                check,
                sigma,
                t,
                eta,
                tol,
                method,
                max_terms,
                common,
            } => {
                f.s("check", check)
                    .f("sigma", sigma)
                    .f("t", t)
                    .f("eta", eta)
                    .f("tol", tol)
                    .s("method", method)
                    .u("max_terms", max_terms)
                    .common(&common);
                (
                    "verify-lemma",
                    LEMMA_KEYS.to_vec(),
                    common.config,
                    verify_lemma_cmd,
                )
            }
            Command::VerifyTrig {
                poly,
                x,
                y,
                tol,
                max_terms,
                common,
            } => {
                f.poly(poly)
                    .f("x", x)
                    .f("y", y)
                    .f("tol", tol)
                    .u("max_terms", max_terms)
                    .common(&common);
                (
                    "verify-trig",
                    [POLY_KEYS, TRIG_KEYS].concat(),
                    common.config,
                    verify_trig_cmd,
                )
            }
            Command::Region {
                poly,
                a,
                b,
                t,
                common,
            } => {
                f.poly(poly).f("A", a).f("B", b).s("t", t).common(&common);
                (
                    "region",
                    [POLY_KEYS, REGION_KEYS].concat(),
                    common.config,
                    region_cmd,
                )
            }
            Command::MollifierTable {
                poly,
                theta,
                lambda,
                step,
                common,
            } => {
                f.poly(poly)
                    .f("theta", theta)
                    .f("lambda", lambda)
                    .f("step", step)
                    .common(&common);
                (
                    "mollifier-table",
                    [POLY_KEYS, TABLE_KEYS].concat(),
                    common.config,
                    mollifier_table_cmd,
                )
            }
        };
    Plan {
        name,
        keys,
        flags: f.0,
        config,
        run,
    }
}

fn execute(plan: Plan) -> Result<bool> {
    let file = match &plan.config {
        Some(path) => config::load_file(path)?,
        None => BTreeMap::new(),
    };
    let mut params = Params::merge(plan.name, &plan.keys, file, plan.flags)?;
    let format = Format::parse(&params.str_or("format", "json")?)?;
    let output = params.opt_str("output")?;
    let full = params.bool_or("full_precision", false)?;
    let sequential = params.bool_or("sequential", false)?;

    let outcome = (plan.run)(&mut params, sequential)?;

    let version = env!("CARGO_PKG_VERSION");
    let resolved = params.resolved();
    let doc = match format {
        Format::Json => output::to_json(&json!({
            "command": plan.name,
            "version": version,
            "config": resolved,
            "result": outcome.result,
        })),
        Format::Text => {
            let mut s = format!("# trigzeta {version} {}\n", plan.name);
            s.push_str(&output::to_text(&json!({ "config": resolved }), full));
            s.push_str(&output::to_text(&outcome.result, full));
            s
        }
        Format::Csv => {
            let mut csv = outcome.csv;
            let cfg: Vec<String> = resolved
                .iter()
                .map(|(k, v)| format!("{k}={}", v.to_string().replace('"', "")))
                .collect();
            csv.comment(format!(
                "trigzeta {version} {} {}",
                plan.name,
                cfg.join(" ")
            ));
            csv.render()
        }
    };

    for (path, contents) in &outcome.side_files {
        output::write_atomic(path, contents)?;
    }
    match output {
        Some(path) => output::write_atomic(std::path::Path::new(&path), &doc)?,
        None => print!("{doc}"),
    }
    if outcome.failed {
        eprintln!("verification failed: see the report for the failing relation");
    }
    Ok(!outcome.failed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(plan(cli.command)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
