//! `fbm-lab`: command-line driver for the fBm experiments.
//!
//! Every subcommand prints one JSON document on stdout. Exit codes: 0 on
//! success, 2 when the input is rejected by the library, 3 when `--assert`
//! is given and the run misses its target, 64 on a usage error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fbm_lab::harness::{
    residual_second_moment_target, run_experiment, ExperimentSpec, ExperimentSummary, LimitLaw, RateQuantity,
};
use fbm_lab::kernels::{kernel_sum_rate_fit, KernelSum};
use fbm_lab::stats::rate_regression;
use fbm_lab::{catalog_get, sigma_h, Algorithm, Error, GridSpec, HurstIndex, PathSampler, Regime, SeedSpec};
use serde::Serialize;
use serde_json::{json, Value};

const EXIT_VALIDATION: u8 = 2;
const EXIT_ASSERTION: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Significance level of every KS verdict.
const ALPHA: f64 = 0.01;
/// Relative tolerance on a limiting variance.
const VARIANCE_TOL: f64 = 0.05;
/// Relative tolerance on the residual second moment.
const SECOND_MOMENT_TOL: f64 = 0.10;

#[derive(Parser)]
#[command(name = "fbm-lab", version, about = "Monte Carlo experiments on planar fractional Brownian motion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Breuer–Major constant sigma_H with its truncation certificate.
    Sigma {
        #[arg(long)]
        hurst: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Sample one planar path and write it as CSV.
    Synth {
        #[arg(long)]
        hurst: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        rep: u64,
        #[arg(long, default_value = "circulant")]
        algo: Algorithm,
        #[arg(long)]
        out: PathBuf,
    },
    /// Deterministic kernel sums and their growth rate in n.
    Lemma31 {
        /// ii, iii:R, iv or v.
        #[arg(long)]
        part: KernelSum,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 0.25)]
        hurst: f64,
        /// Tolerance on the fitted exponent used by --assert.
        #[arg(long, default_value_t = 0.1)]
        slope_tol: f64,
        #[arg(long)]
        assert: bool,
    },
    /// Limit law of a normalised statistic at a single grid size.
    Clt {
        /// qv, bm2, mixed, gn or vn.
        #[arg(long)]
        stat: String,
        #[arg(long)]
        hurst: f64,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Change-of-variable residual f(B_t) - f(0) - I_n(t).
    Cov {
        #[arg(long)]
        f: String,
        #[arg(long)]
        hurst: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Log-log growth rate of any estimator across grid sizes.
    Rates {
        #[arg(long)]
        estimator: String,
        #[arg(long, default_value_t = 0.25)]
        hurst: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value = "mean_square")]
        quantity: RateQuantity,
        /// Expected exponent, checked by --assert.
        #[arg(long, allow_negative_numbers = true)]
        expect: Option<f64>,
        #[arg(long, default_value_t = 0.15)]
        slope_tol: f64,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 1000)]
    reps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Estimator parameters as comma-separated key=value pairs, e.g. `q=3,alpha=1`.
    #[arg(long = "params", default_value = "")]
    params: String,
    #[arg(long)]
    algo: Option<Algorithm>,
    /// Write all samples as CSV `n,rep,value`.
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Exit with status 3 when the run misses its target.
    #[arg(long)]
    assert: bool,
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    pass: bool,
    detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Self { name: name.into(), pass, detail }
    }
}

enum Failure {
    Library(Error),
    Assertion(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

fn parse_params(text: &str) -> Result<BTreeMap<String, String>, Error> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| match kv.split_once('=') {
            Some((k, v)) => Ok((k.trim().to_string(), v.trim().to_string())),
            None => Err(Error::Domain(format!("parameter `{kv}` is not of the form key=value"))),
        })
        .collect()
}

fn spec_from(estimator: &str, hurst: HurstIndex, n_list: Vec<usize>, run: &RunArgs) -> Result<ExperimentSpec, Error> {
    let mut spec = ExperimentSpec::new(estimator, hurst, n_list, run.reps, run.seed);
    spec.params = parse_params(&run.params)?;
    spec.algorithm = run.algo;
    spec.dump = run.dump.clone();
    Ok(spec)
}

fn with_checks(summary: &ExperimentSummary, checks: &[Check]) -> Value {
    let mut v = serde_json::to_value(summary).expect("summary serialises");
    v["checks"] = serde_json::to_value(checks).expect("checks serialise");
    v
}

fn finish(doc: Value, checks: &[Check], assert: bool) -> Result<Value, Failure> {
    if assert && (checks.is_empty() || checks.iter().any(|c| !c.pass)) {
        Err(Failure::Assertion(doc))
    } else {
        Ok(doc)
    }
}

/// KS and variance checks against a centred normal law at the last grid size.
fn normal_checks(summary: &ExperimentSummary) -> Vec<Check> {
    let mut checks = Vec::new();
    let last = summary.per_n.last().expect("at least one size");
    if let Some(LimitLaw::CenteredNormal { variance }) = &summary.constants.law {
        let rel = (last.var - variance).abs() / variance;
        checks.push(Check::new(
            "variance",
            rel < VARIANCE_TOL,
            format!("sample variance {} vs {variance} (relative error {rel:.4}, tolerance {VARIANCE_TOL})", last.var),
        ));
        if let Some(p) = last.p {
            checks.push(Check::new("ks", p > ALPHA, format!("KS p-value {p:.4} vs alpha {ALPHA}")));
        }
    }
    checks
}

fn run(cli: Cli) -> Result<Value, Failure> {
    match cli.command {
        Command::Sigma { hurst, tol } => {
            let cert = sigma_h(HurstIndex::new(hurst)?, tol)?;
            Ok(json!({ "sigma": cert.value, "certificate": cert }))
        }
        Command::Synth { hurst, n, seed, rep, algo, out } => {
            let h = HurstIndex::new(hurst)?;
            let grid = GridSpec::unit(n)?;
            let seed = SeedSpec::new(seed, rep);
            let path = PathSampler::new(algo, h, grid)?.sample_2d(&seed);
            let file = std::fs::File::create(&out).map_err(Error::from)?;
            path.write_csv(std::io::BufWriter::new(file))?;
            Ok(json!({
                "hurst": hurst, "n": n, "seed": seed, "algorithm": algo, "out": out,
                "b1_terminal": path.first().terminal(), "b2_terminal": path.second().terminal(),
            }))
        }
        Command::Lemma31 { part, n_list, hurst, slope_tol, assert } => {
            let h = HurstIndex::new(hurst)?;
            let values = n_list
                .iter()
                .map(|&n| fbm_lab::kernels::kernel_sum(part, h, n))
                .collect::<Result<Vec<_>, _>>()?;
            let mut doc = json!({
                "part": part.label(), "hurst": hurst, "n_list": n_list, "values": values,
                "expected_exponent": part.expected_exponent(),
            });
            let mut checks = Vec::new();
            if n_list.len() >= 4 {
                let report = kernel_sum_rate_fit(part, h, &n_list)?;
                checks.push(Check::new(
                    "rate",
                    report.matches(slope_tol),
                    format!("slope {} vs exponent {}", report.fit.slope, report.expected_exponent),
                ));
                doc["rate_fit"] = serde_json::to_value(report.fit).expect("fit serialises");
                doc["max_min_ratio"] = json!(report.max_min_ratio);
            }
            doc["checks"] = serde_json::to_value(&checks).expect("checks serialise");
            finish(doc, &checks, assert)
        }
        Command::Clt { stat, hurst, n, run } => {
            let h = HurstIndex::new(hurst)?;
            let estimator = match stat.as_str() {
                "qv" | "bm2" | "mixed" | "gn" | "vn" => stat.as_str(),
                other => return Err(Error::Domain(format!("unknown statistic `{other}`; expected qv, bm2, mixed, gn or vn")).into()),
            };
            let mut spec = spec_from(estimator, h, vec![n], &run)?;
            if estimator == "qv" {
                spec.law = Some(LimitLaw::Degenerate { value: 1.0 });
            }
            let (summary, _) = run_experiment(&spec)?;
            let last = summary.per_n.last().expect("one size");
            let checks = match &summary.constants.law {
                Some(LimitLaw::Degenerate { value }) => vec![Check::new(
                    "mean",
                    (last.mean - value).abs() < 3.0 * last.se,
                    format!("mean {} vs {value} (3 se = {})", last.mean, 3.0 * last.se),
                )],
                _ => normal_checks(&summary),
            };
            finish(with_checks(&summary, &checks), &checks, run.assert)
        }
        Command::Cov { f, hurst, n_list, t, run } => {
            let h = HurstIndex::new(hurst)?;
            let field = catalog_get(&f)?;
            let spec = spec_from("residual", h, n_list, &run)?.with_param("f", &f).with_param("t", t);
            let (summary, _) = run_experiment(&spec)?;
            let last = summary.per_n.last().expect("one size");
            let mut checks = Vec::new();
            let mut target = None;
            match h.regime() {
                Regime::Smooth => {
                    if let Some(fit) = summary.rate_fit {
                        checks.push(Check::new("decay", fit.slope < 0.0, format!("mean-square slope {}", fit.slope)));
                    }
                }
                Regime::Critical if t == 1.0 => {
                    let est = residual_second_moment_target(&field, last.n, run.reps, run.seed.wrapping_add(1))?;
                    let rel = (last.second_moment - est.value).abs() / est.value;
                    checks.push(Check::new(
                        "second_moment",
                        rel < SECOND_MOMENT_TOL,
                        format!("second moment {} vs target {} +- {} (relative error {rel:.4})", last.second_moment, est.value, est.se),
                    ));
                    target = Some(est);
                    checks.extend(normal_checks(&summary));
                }
                _ => {}
            }
            let mut doc = with_checks(&summary, &checks);
            if let Some(est) = target {
                doc["constants"]["second_moment_target"] = serde_json::to_value(est).expect("estimate serialises");
            }
            finish(doc, &checks, run.assert)
        }
        Command::Rates { estimator, hurst, n_list, quantity, expect, slope_tol, run } => {
            let h = HurstIndex::new(hurst)?;
            let mut spec = spec_from(&estimator, h, n_list, &run)?;
            spec.rate_quantity = quantity;
            let (summary, _) = run_experiment(&spec)?;
            let fit = match summary.rate_fit {
                Some(fit) => fit,
                None => rate_regression(&summary.per_n.iter().map(|p| (p.n as f64, p.slope_contrib)).collect::<Vec<_>>())?,
            };
            let checks: Vec<Check> = expect
                .map(|e| {
                    Check::new(
                        "rate",
                        (fit.slope - e).abs() <= slope_tol,
                        format!("slope {} vs expected {e} (tolerance {slope_tol})", fit.slope),
                    )
                })
                .into_iter()
                .collect();
            finish(with_checks(&summary, &checks), &checks, run.assert)
        }
    }
}

/// Print to stdout, tolerating a closed pipe.
fn emit(doc: &Value) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(doc).expect("json"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(doc) => {
            emit(&doc);
            ExitCode::SUCCESS
        }
        Err(Failure::Assertion(doc)) => {
            emit(&doc);
            eprintln!("fbm-lab: assertion failed");
            ExitCode::from(EXIT_ASSERTION)
        }
        Err(Failure::Library(e)) => {
            eprintln!("fbm-lab: {e}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
