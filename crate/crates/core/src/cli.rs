//! Command-line front end: `metric`, `sweep` and `validate`.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure,
//! 3 failed validation. Every failure prints exactly one diagnostic line on
//! standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::colluding::{pnz_colluding, sop_lower_bound_colluding};
use crate::config::{check_method, Metric, Scenario, SweepSpec};
use crate::error::{Error, Result};
use crate::montecarlo::{
    mc_asc_decomposition, mc_asc_positive_part, mc_pnz, mc_sop, mc_sop_lower_bound, McEstimate,
};
use crate::secrecy::{
    asc_asymptotic, asc_exact, pnz_asymptotic, pnz_exact, sop_asymptotic, sop_exact, sop_lower_bound,
    table2_metrics, Method, MetricResult,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VALIDATE: i32 = 3;

/// Threshold on |z| for a passing comparison.
pub const Z_LIMIT: f64 = 3.0;

#[derive(Debug, Parser)]
#[command(name = "foxsec", version, about = "Secrecy metrics over H-function fading channels")]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, env = "FOXSEC_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// JSON scenario (or sweep) file.
    #[arg(long)]
    config: PathBuf,
    /// Multiply every normalizing constant by this factor (test only).
    #[arg(long, value_name = "FACTOR")]
    debug_scale_kappa: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one metric with one method.
    Metric {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        metric: Metric,
        #[arg(long, default_value = "exact")]
        method: Method,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Evaluate a grid and write CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Output CSV (standard output when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the sweep file's sample count.
        #[arg(long)]
        samples: Option<usize>,
        /// Overrides the sweep file's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare every analytic metric with Monte-Carlo.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_CONFIG };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn config_failure(message: String) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message,
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Evaluates `metric` by `method`. Monte-Carlo results carry the standard
/// error in `err_estimate`.
pub fn evaluate(s: &Scenario, metric: Metric, method: Method, samples: usize, seed: u64) -> Result<MetricResult> {
    check_method(s, metric, method)?;
    if method == Method::MonteCarlo {
        let e = match metric {
            Metric::Sop => mc_sop(s.clone(), samples, seed)?,
            Metric::Pnz => mc_pnz(s.clone(), samples, seed)?,
            Metric::Asc => mc_asc_positive_part(s.clone(), samples, seed)?,
        };
        return Ok(MetricResult::new(e.value, Method::MonteCarlo, e.std_err));
    }
    match s {
        Scenario::Single(c) => match (metric, method) {
            (Metric::Sop, Method::Exact) => sop_exact(c),
            (Metric::Sop, Method::LowerBound) => sop_lower_bound(c),
            (Metric::Sop, Method::Asymptotic) => Ok(sop_asymptotic(c)?.0),
            (Metric::Pnz, Method::Exact) => pnz_exact(c),
            (Metric::Pnz, Method::Asymptotic) => Ok(pnz_asymptotic(c)?.0),
            (Metric::Asc, Method::Exact) => asc_exact(c),
            (Metric::Asc, Method::Asymptotic) => asc_asymptotic(c),
            (m, Method::Table2) => {
                let t = table2_metrics(c)?;
                Ok(match m {
                    Metric::Sop => t.sop,
                    Metric::Pnz => t.pnz,
                    Metric::Asc => t.asc,
                })
            }
            _ => unreachable!("rejected by check_method"),
        },
        Scenario::Colluding(c) => match (metric, method) {
            (Metric::Pnz, Method::Exact) => pnz_colluding(c),
            (Metric::Sop, Method::LowerBound) => sop_lower_bound_colluding(c),
            _ => unreachable!("rejected by check_method"),
        },
    }
}

/// Shortest fixed or scientific rendering with six significant decimals.
pub fn format_value(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 1e-3 && v.abs() < 1e6) {
        format!("{v:.6}")
    } else {
        format!("{v:.6e}")
    }
}

/// Smallest power of ten strictly above `err`, floored at `1e-9`.
pub fn error_bound(err: f64) -> String {
    let mut k = if err > 0.0 { err.log10().ceil() as i32 } else { -9 };
    if err > 0.0 && 10f64.powi(k) <= err {
        k += 1;
    }
    format!("1e{}", k.max(-9))
}

/// The single result line of `metric`.
pub fn format_result(metric: Metric, r: &MetricResult, samples: usize, seed: u64) -> String {
    if r.method == Method::MonteCarlo {
        format!(
            "{metric} {} {} se={:.2e} n={samples} seed={seed}",
            r.method,
            format_value(r.value),
            r.err_estimate
        )
    } else {
        format!("{metric} {} {} err<{}", r.method, format_value(r.value), error_bound(r.err_estimate))
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| config_failure(format!("cannot read {}: {e}", path.display())))
}

fn load_scenario(c: &Common) -> std::result::Result<Scenario, Failure> {
    let s = Scenario::from_json(&read(&c.config)?)?;
    Ok(apply_kappa(s, c.debug_scale_kappa)?)
}

fn apply_kappa(s: Scenario, k: Option<f64>) -> Result<Scenario> {
    match k {
        None => Ok(s),
        Some(k) if k > 0.0 && k.is_finite() => Ok(s.with_kappa_scale(k)),
        Some(k) => Err(Error::InvalidParams(format!("debug-scale-kappa must be > 0, got {k}"))),
    }
}

/// One analytic-versus-sampled comparison.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub metric: Metric,
    pub method: Method,
    pub analytic: f64,
    pub mc: McEstimate,
}

impl Comparison {
    /// Proportion test for probabilities, sample standard error for ASC.
    pub fn z(&self) -> f64 {
        match self.metric {
            Metric::Asc => self.mc.z_score(self.analytic),
            _ => self.mc.z_score_probability(self.analytic),
        }
    }

    pub fn passed(&self) -> bool {
        self.z().abs() < Z_LIMIT
    }
}

/// Every analytic metric available for the scenario, each against the
/// Monte-Carlo estimator of the same event.
pub fn validate_scenario(s: &Scenario, samples: usize, seed: u64) -> Result<Vec<Comparison>> {
    let mut jobs: Vec<(Metric, Method)> = match s {
        Scenario::Single(_) => vec![
            (Metric::Pnz, Method::Exact),
            (Metric::Sop, Method::Exact),
            (Metric::Sop, Method::LowerBound),
            (Metric::Asc, Method::Exact),
        ],
        Scenario::Colluding(_) => vec![(Metric::Pnz, Method::Exact), (Metric::Sop, Method::LowerBound)],
    };
    if let Scenario::Single(c) = s {
        if c.main.family() == c.eve.family() {
            jobs.extend([Metric::Pnz, Metric::Sop, Metric::Asc].map(|m| (m, Method::Table2)));
        }
    }
    jobs.par_iter()
        .map(|&(metric, method)| {
            // an impossible probability is a failed comparison, not a crash
            let analytic = match evaluate(s, metric, method, samples, seed) {
                Ok(r) => r.value,
                Err(Error::ProbabilityRange { value, .. }) => value,
                Err(e) => return Err(e),
            };
            let mc = match (metric, method) {
                (Metric::Pnz, _) => mc_pnz(s.clone(), samples, seed)?,
                (Metric::Sop, Method::LowerBound) => mc_sop_lower_bound(s.clone(), samples, seed)?,
                (Metric::Sop, _) => mc_sop(s.clone(), samples, seed)?,
                (Metric::Asc, _) => mc_asc_decomposition(s.clone(), samples, seed)?,
            };
            Ok(Comparison {
                metric,
                method,
                analytic,
                mc,
            })
        })
        .collect()
}

/// One CSV row of a sweep; `value` is `None` for a failed point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub axis: f64,
    pub metric: Metric,
    pub method: Method,
    pub value: Option<f64>,
    pub err: Option<f64>,
    pub note: String,
}

pub const CSV_HEADER: &str = "axis,metric,method,value,err,note";

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{}",
            self.axis,
            self.metric,
            self.method,
            opt(self.value),
            opt(self.err),
            self.note.replace([',', '\n', '\r'], ";")
        )
    }
}

/// Rows in grid order, then metric order, then method order.
pub fn run_sweep(text: &str, kappa: Option<f64>, samples: Option<usize>, seed: Option<u64>) -> Result<Vec<SweepRow>> {
    let mut sweep = SweepSpec::from_json(text)?;
    sweep.base = apply_kappa(sweep.base, kappa)?;
    if let Some(n) = samples {
        sweep.spec.samples = n;
    }
    if let Some(s) = seed {
        sweep.spec.seed = s;
    }
    let spec = &sweep.spec;
    let rows = sweep
        .grid
        .par_iter()
        .map(|&x| {
            let point = sweep.scenario_at(x);
            let mut out = Vec::new();
            for &metric in &spec.metrics {
                for &method in &spec.methods {
                    let r = point
                        .as_ref()
                        .map_err(Clone::clone)
                        .and_then(|s| evaluate(s, metric, method, spec.samples, spec.seed));
                    out.push(match r {
                        Ok(r) => SweepRow {
                            axis: x,
                            metric,
                            method,
                            value: Some(r.value),
                            err: Some(r.err_estimate),
                            note: String::new(),
                        },
                        Err(e) => SweepRow {
                            axis: x,
                            metric,
                            method,
                            value: None,
                            err: None,
                            note: e.to_string(),
                        },
                    });
                }
            }
            out
        })
        .collect::<Vec<_>>();
    Ok(rows.into_iter().flatten().collect())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let io = |e: std::io::Error| config_failure(format!("write failed: {e}"));
    match cli.command {
        Command::Metric {
            common,
            metric,
            method,
            samples,
            seed,
        } => {
            let s = load_scenario(&common)?;
            let r = evaluate(&s, metric, method, samples, seed)?;
            writeln!(out, "{}", format_result(metric, &r, samples, seed)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Sweep {
            common,
            out: path,
            samples,
            seed,
        } => {
            let rows = run_sweep(&read(&common.config)?, common.debug_scale_kappa, samples, seed)?;
            let mut csv = String::from(CSV_HEADER);
            csv.push('\n');
            for r in &rows {
                csv.push_str(&r.to_csv());
                csv.push('\n');
            }
            match path {
                Some(p) => std::fs::write(&p, csv)
                    .map_err(|e| config_failure(format!("cannot write {}: {e}", p.display())))?,
                None => out.write_all(csv.as_bytes()).map_err(io)?,
            }
            if !rows.is_empty() && rows.iter().all(|r| r.value.is_none()) {
                return Err(Failure {
                    code: EXIT_NUMERICAL,
                    message: format!("every sweep point failed, first: {}", rows[0].note),
                });
            }
            Ok(EXIT_OK)
        }
        Command::Validate { common, samples, seed } => {
            let s = load_scenario(&common)?;
            let cmp = validate_scenario(&s, samples, seed)?;
            let mut failed = 0;
            for c in &cmp {
                let pass = c.passed();
                failed += usize::from(!pass);
                writeln!(
                    out,
                    "{} {} analytic={} mc={} se={:.2e} z={:+.2} {}",
                    c.metric,
                    c.method,
                    format_value(c.analytic),
                    format_value(c.mc.value),
                    c.mc.std_err,
                    c.z(),
                    if pass { "PASS" } else { "FAIL" }
                )
                .map_err(io)?;
            }
            let total = cmp.len();
            if failed == 0 {
                writeln!(out, "validate PASS {total}/{total} n={samples} seed={seed}").map_err(io)?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "validate FAIL {}/{total} n={samples} seed={seed}", total - failed).map_err(io)?;
                Err(Failure {
                    code: EXIT_VALIDATE,
                    message: format!("{failed} of {total} comparisons have |z| >= {Z_LIMIT}"),
                })
            }
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code. Diagnostics go to `err` as `foxsec: error: ...`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let text = e.render().to_string();
            let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            let msg = one_line(first.trim_start_matches("error:"));
            let _ = writeln!(err, "foxsec: error: {msg}");
            return EXIT_CONFIG;
        }
    };
    if let Some(n) = cli.threads {
        // a pool may already exist when run is called repeatedly in-process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "foxsec: error: {}", one_line(&f.message));
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert_eq!(error_bound(0.0), "1e-9");
        assert_eq!(error_bound(3e-12), "1e-9");
        assert_eq!(error_bound(2.5e-7), "1e-6");
        assert_eq!(error_bound(1e-4), "1e-3");
    }

    #[test]
    fn values() {
        assert_eq!(format_value(2.0 / 3.0), "0.666667");
        assert_eq!(format_value(2.5e-11), "2.500000e-11");
    }

    #[test]
    fn parse_errors_are_config_errors() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(["foxsec", "metric", "--metric", "bogus", "--config", "x"], &mut o, &mut e);
        assert_eq!(code, EXIT_CONFIG);
        let msg = String::from_utf8(e).unwrap();
        assert_eq!(msg.lines().count(), 1, "{msg}");
    }
}
