//! Command-line front end: JSON job configuration in, JSON or CSV out.
//!
//! Exit codes: 0 success, 1 invalid input, 2 computation error, 3 failed
//! invariant check.

mod check;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cartan::{Gcm, GcmSpec, Weight};
use crate::cone::{self, CorootSpacePoint, DEFAULT_DESCENT_CAP};
use crate::eisenstein::{self, SpectralParam, SumOptions};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::scalar::Precision;
use crate::torus::{TorusPoint, TorusSpec};
use crate::weyl::{self, EnumOptions, ShellReport};
use crate::zeta::{CurveSpec, CurveZeta};

pub use check::{run_check, CheckReport, CheckResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "kmeis",
    version,
    about = "Kac-Moody Eisenstein constant terms over function fields"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct GlobalArgs {
    /// JSON job configuration; missing fields take their defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Mantissa bits; 53 or less means native doubles.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Maximal word length enumerated.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Convergence tolerance on shell moduli and the tail estimate.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Size of the worker pool; does not affect any output.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate the Weyl group by length.
    Weyl {
        /// Include the canonical reduced word of every element.
        #[arg(long)]
        words: bool,
    },
    /// Tits cone membership of coroot-space points.
    Cone {
        /// Point as comma-separated rationals, e.g. "1/2,-3". Repeatable.
        #[arg(long = "x", allow_hyphen_values = true)]
        x: Vec<String>,
        /// Maximal number of reflections during descent.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Evaluate the curve zeta function and its ratios.
    Zeta {
        /// Argument as "re" or "re:im". Repeatable.
        #[arg(long = "s", allow_hyphen_values = true)]
        s: Vec<String>,
    },
    /// Shell partial sums of the constant term, as CSV.
    Cterm {
        /// Spectral parameter as comma-separated "re" or "re:im" entries.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Torus exponents as comma-separated integers.
        #[arg(long, allow_hyphen_values = true)]
        exps: Option<String>,
    },
    /// Run the built-in invariant suite.
    Check,
}

/// Everything a job needs. Defaults are filled in by [`JobConfig::resolve`]
/// and the resolved form is embedded in every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default)]
    pub gcm: Option<GcmSpec>,
    #[serde(default)]
    pub curve: Option<CurveSpec>,
    /// Spectral parameters, each a list of `[re, im]` pairs.
    #[serde(default)]
    pub lambdas: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default)]
    pub torus_points: Option<Vec<TorusSpec>>,
    /// Coroot-space points for `cone`, e.g. `"1/2,-3"`.
    #[serde(default)]
    pub points: Option<Vec<String>>,
    /// Zeta arguments as `[re, im]`.
    #[serde(default)]
    pub s_values: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub options: JobOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobOptions {
    pub depth: usize,
    pub tol: f64,
    pub k_consec: usize,
    /// Growth constant of the dominating series.
    pub m: f64,
    pub cap: usize,
    pub shell_cap: usize,
    pub precision: u32,
    pub n_max: usize,
    pub words: bool,
}

impl Default for JobOptions {
    fn default() -> Self {
        JobOptions {
            depth: 20,
            tol: eisenstein::DEFAULT_TOL,
            k_consec: eisenstein::DEFAULT_K_CONSEC,
            m: 1.5,
            cap: DEFAULT_DESCENT_CAP,
            shell_cap: weyl::DEFAULT_SHELL_CAP,
            precision: 53,
            n_max: 40,
            words: false,
        }
    }
}

/// A validated configuration with every field filled in.
pub struct Job {
    pub config: JobConfig,
    pub gcm: Gcm,
    pub curve: CurveZeta,
    pub lambdas: Vec<SpectralParam>,
    pub torus_points: Vec<TorusPoint>,
    pub points: Vec<CorootSpacePoint>,
    pub s_values: Vec<Complex64>,
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    /// Fills defaults and validates every input before any computation.
    pub fn resolve(mut self) -> Result<Job> {
        let gcm_spec = self.gcm.get_or_insert_with(|| GcmSpec {
            cartan: fixtures::hyperbolic_rows(),
        });
        let gcm = Gcm::from_spec(gcm_spec)?;
        let n = gcm.rank();
        let curve_spec = self.curve.get_or_insert(CurveSpec {
            q: 2,
            genus: 0,
            counts: None,
            coefficients: None,
        });
        let curve = CurveZeta::from_spec(curve_spec)?;

        let lambdas = self
            .lambdas
            .get_or_insert_with(|| vec![vec![[3.0, 0.0]; n]])
            .iter()
            .map(|l| {
                gcm.check_rank(l.len())?;
                let w = Weight::new(l.iter().map(|&[re, im]| Complex64::new(re, im)).collect());
                if !w.is_finite() {
                    return Err(Error::InvalidArgument("non-finite lambda".into()));
                }
                Ok(SpectralParam::new(w))
            })
            .collect::<Result<Vec<_>>>()?;
        let torus_points = self
            .torus_points
            .get_or_insert_with(|| vec![TorusSpec { exps: vec![-1; n] }])
            .iter()
            .map(|t| {
                gcm.check_rank(t.exps.len())?;
                TorusPoint::new(curve.q(), t.exps.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        let points = self
            .points
            .get_or_insert_with(|| vec![vec!["0"; n].join(",")])
            .iter()
            .map(|p| {
                let x: CorootSpacePoint = p.parse()?;
                gcm.check_rank(x.rank())?;
                Ok(x)
            })
            .collect::<Result<Vec<_>>>()?;
        let s_values = self
            .s_values
            .get_or_insert_with(|| vec![[2.0, 0.0], [3.0, 0.0], [3.0, 1.0], [20.0, 0.0]])
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect::<Vec<_>>();
        if s_values
            .iter()
            .any(|s| !(s.re.is_finite() && s.im.is_finite()))
        {
            return Err(Error::InvalidArgument("non-finite s".into()));
        }

        let o = &self.options;
        if !(o.tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tol must be positive, got {}",
                o.tol
            )));
        }
        if !(o.m > 1.0) || !o.m.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "m must exceed 1, got {}",
                o.m
            )));
        }
        if o.k_consec == 0 || o.cap == 0 || o.shell_cap == 0 || o.n_max == 0 {
            return Err(Error::InvalidArgument(
                "k_consec, cap, shell_cap and n_max must be positive".into(),
            ));
        }
        Ok(Job {
            config: self,
            gcm,
            curve,
            lambdas,
            torus_points,
            points,
            s_values,
        })
    }
}

impl Job {
    pub fn sum_options(&self) -> SumOptions {
        let o = &self.config.options;
        SumOptions {
            depth: o.depth,
            tol: o.tol,
            k_consec: o.k_consec,
            shell_cap: o.shell_cap,
            precision: Precision::from_bits(o.precision),
        }
    }

    fn config_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.config).expect("config serializes")
    }
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("bad complex number {s:?}"));
    let (re, im) = s.trim().split_once(':').unwrap_or((s.trim(), "0"));
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

fn to_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

pub fn run_weyl(job: &Job) -> Result<String> {
    let o = &job.config.options;
    let shells = weyl::enumerate_shells(
        &job.gcm,
        EnumOptions {
            max_length: o.depth,
            shell_cap: o.shell_cap,
        },
    )?;
    let reports: Vec<ShellReport> = shells
        .iter()
        .map(|s| ShellReport::from_shell(s, o.words))
        .collect();
    Ok(pretty(&json!({
        "command": "weyl",
        "config": job.config_json(),
        "shells": reports,
    })))
}

pub fn run_cone(job: &Job) -> Result<String> {
    let mut results = Vec::new();
    for x in &job.points {
        let verdict = cone::descend(&job.gcm, x, job.config.options.cap)?;
        let certificate = match cone::rank2_certificate(&job.gcm, x) {
            Ok(r) => Some(r),
            Err(Error::RankNot2(_)) | Err(Error::NotIndefinite) => None,
            Err(e) => return Err(e),
        };
        results.push(json!({
            "x": x.to_string(),
            "verdict": verdict.report(),
            "rank2_certificate": certificate,
        }));
    }
    Ok(pretty(&json!({
        "command": "cone",
        "config": job.config_json(),
        "results": results,
    })))
}

pub fn run_zeta(job: &Job) -> Result<String> {
    let z = &job.curve;
    let mut results = Vec::new();
    for &s in &job.s_values {
        let value = z.eval(&s)?;
        let ratio = z.gk_ratio(&s)?;
        let euler = if s.re > 1.0 {
            Some(z.euler_truncated(s, job.config.options.n_max)?)
        } else {
            None
        };
        results.push(json!({
            "s": to_pair(s),
            "value": to_pair(value),
            "gk_ratio": to_pair(ratio),
            "euler_truncated": euler.map(to_pair),
            "euler_residual": euler.map(|e| (e - value).norm()),
        }));
    }
    // functional equation on a fixed circle |T| = 0.3
    let fe = (0..8)
        .map(|k| {
            let t = Complex64::from_polar(0.3, std::f64::consts::TAU * k as f64 / 8.0);
            z.functional_equation_residual(t)
        })
        .fold(0f64, f64::max);
    let coeffs: Vec<String> = z.coefficients().iter().map(ToString::to_string).collect();
    Ok(pretty(&json!({
        "command": "zeta",
        "config": job.config_json(),
        "numerator": coeffs,
        "weil_bound": z.satisfies_weil_bound(),
        "functional_equation_residual": fe,
        "ratio_bound": z.ratio_bound_s(job.config.options.m)?,
        "results": results,
    })))
}

pub fn run_cterm(job: &Job) -> Result<String> {
    let opts = job.sum_options();
    let mut out = String::new();
    for lambda in &job.lambdas {
        for h in &job.torus_points {
            let r = eisenstein::constant_term(lambda, h, &job.curve, &job.gcm, &opts)?;
            out.push_str("length,count,shell_abs,shell_re,shell_im,cumulative_re,cumulative_im\n");
            for k in 0..r.shell_counts.len() {
                writeln!(
                    out,
                    "{},{},{:e},{:e},{:e},{:e},{:e}",
                    k,
                    r.shell_counts[k],
                    r.shell_abs[k],
                    r.shell_sums[k].re,
                    r.shell_sums[k].im,
                    r.cumulative[k].re,
                    r.cumulative[k].im
                )
                .expect("write to string");
            }
            let trailer = json!({
                "lambda": lambda.lambda.coords.iter().map(|&z| to_pair(z)).collect::<Vec<_>>(),
                "exps": h.exps(),
                "verdict": r.verdict,
                "tail_estimate": r.tail_estimate,
                "total": to_pair(r.total()),
                "shell_abs_ln": r.shell_abs_ln,
                "godement": r.godement,
                "h_status": r.h_status,
                "outside_stated_range": r.outside_stated_range,
                "config": job.config_json(),
            });
            writeln!(out, "# {}", serde_json::to_string(&trailer).expect("json"))
                .expect("write to string");
        }
    }
    Ok(out)
}

fn load_config(global: &GlobalArgs, command: &Command) -> Result<JobConfig> {
    let mut config = match &global.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            JobConfig::from_json(&text)?
        }
        None => JobConfig {
            gcm: None,
            curve: None,
            lambdas: None,
            torus_points: None,
            points: None,
            s_values: None,
            options: JobOptions::default(),
        },
    };
    let o = &mut config.options;
    if let Some(p) = global.precision {
        o.precision = p;
    }
    if let Some(d) = global.depth {
        o.depth = d;
    }
    if let Some(t) = global.tol {
        o.tol = t;
    }
    match command {
        Command::Weyl { words } => o.words |= *words,
        Command::Cone { x, cap } => {
            if let Some(c) = cap {
                o.cap = *c;
            }
            if !x.is_empty() {
                config.points = Some(x.clone());
            }
        }
        Command::Zeta { s } => {
            if !s.is_empty() {
                config.s_values = Some(
                    s.iter()
                        .map(|v| parse_complex(v).map(to_pair))
                        .collect::<Result<_>>()?,
                );
            }
        }
        Command::Cterm { lambda, exps } => {
            if let Some(l) = lambda {
                let coords = l
                    .split(',')
                    .map(|v| parse_complex(v).map(to_pair))
                    .collect::<Result<_>>()?;
                config.lambdas = Some(vec![coords]);
            }
            if let Some(e) = exps {
                let exps = e
                    .split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<i64>()
                            .map_err(|_| Error::Parse(format!("bad exponent {v:?}")))
                    })
                    .collect::<Result<_>>()?;
                config.torus_points = Some(vec![TorusSpec { exps }]);
            }
        }
        Command::Check => {}
    }
    Ok(config)
}

fn error_json(e: &Error) -> String {
    json!({"error": e.code(), "message": e.to_string()}).to_string()
}

/// Runs the parsed command and returns the report text and exit code.
pub fn execute(cli: &Cli) -> (String, i32) {
    let config = match load_config(&cli.global, &cli.command) {
        Ok(c) => c,
        Err(e) => return (error_json(&e), EXIT_VALIDATION),
    };
    let job = match config.resolve() {
        Ok(j) => j,
        Err(e) => return (error_json(&e), EXIT_VALIDATION),
    };
    let result = match &cli.command {
        Command::Weyl { .. } => run_weyl(&job),
        Command::Cone { .. } => run_cone(&job),
        Command::Zeta { .. } => run_zeta(&job),
        Command::Cterm { .. } => run_cterm(&job),
        Command::Check => {
            let report = run_check(&job);
            let code = if report.passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            };
            let mut text = serde_json::to_string_pretty(&report).expect("json");
            text.push('\n');
            return (text, code);
        }
    };
    match result {
        Ok(text) => (text, EXIT_OK),
        Err(e) if e.is_validation() => (error_json(&e), EXIT_VALIDATION),
        Err(e) => (error_json(&e), EXIT_COMPUTATION),
    }
}

/// Entry point of the `kmeis` binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli.global.threads.unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}", error_json(&Error::InvalidArgument(e.to_string())));
            return EXIT_VALIDATION;
        }
    };
    let (text, code) = pool.install(|| execute(&cli));
    if code == EXIT_VALIDATION || code == EXIT_COMPUTATION {
        eprintln!("{text}");
        return code;
    }
    match &cli.global.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!(
                    "{}",
                    error_json(&Error::InvalidArgument(format!("{}: {e}", path.display())))
                );
                return EXIT_VALIDATION;
            }
        }
        None => print!("{text}"),
    }
    code
}
