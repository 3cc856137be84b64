//! Command-line front end.
//!
//! ```text
//! bargmann classify problem.json
//! bargmann validate problem.json --degree 12 --samples 20
//! bargmann diag --preset paper-counterexample --horizon 1000
//! ```
//!
//! Exit codes: 0 on success (unbounded verdicts included), 2 on invalid
//! input, 3 when an internal cross-check or oracle disagrees.

mod problem;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use problem::{ProblemFile, ProblemOptions, MAX_DIM, MAX_ENTRY};
pub use report::{
    DiagSection, NormSection, OracleSection, PsdSection, Report, SumCheckpoint, TruncatedEntry, Verdicts,
};

use crate::affine::{classify_structure, cms_condition_check, composition_norm, CROSS_CHECK_TOL};
use crate::diag::{counterexample_gap, diag_norm, series_criterion, DiagonalModel, Sequence, DEFAULT_HORIZON};
use crate::error::{Error, Result};
use crate::fock::truncated_norms;
use crate::kernel::{norm_lower_bound, psd_certify, SamplePlan, DEFAULT_RADIUS};
use crate::numerics::{Tolerances, C64};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CROSS_CHECK: i32 = 3;

pub const DEFAULT_SAMPLES: usize = 16;
pub const BISECT_TOL: f64 = 1e-9;
/// Relative slack for `truncated_norm` monotonicity and `≤ ‖C_φ‖`.
pub const TRUNCATION_TOL: f64 = 1e-9;
/// Relative agreement required of the PSD bisection with the closed form.
pub const PSD_AGREEMENT_TOL: f64 = 1e-6;
/// Gaps are tabulated for `m ≤ min(N, GAP_ROWS)`.
pub const GAP_ROWS: usize = 50;

#[derive(Parser, Debug)]
#[command(name = "bargmann", version, about = "Affine composition operators on the Segal-Bargmann space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Boundedness, norm and structure of C_φ for a problem file.
    Classify {
        path: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Classify, then cross-check the norm against Galerkin truncations and
    /// PSD kernel bisection.
    Validate {
        path: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
        /// Truncation degree (default depends on dim).
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Run the oracles even when C_φ is unbounded.
        #[arg(long)]
        force: bool,
    },
    /// Boundedness series and gap table for a diagonal sequence model.
    Diag {
        #[arg(long, value_enum)]
        preset: Preset,
        /// α for `constant`, r for `geometric`.
        #[arg(long)]
        param: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
        /// Comma-separated α_m for `explicit`; entries are `re` or `re:im`.
        #[arg(long)]
        alpha: Option<String>,
        /// Comma-separated b_m for `explicit`.
        #[arg(long = "b")]
        bcoef: Option<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
}

#[derive(Args, Debug, Clone)]
pub struct CommonFlags {
    #[arg(long)]
    pub tol_rank: Option<f64>,
    #[arg(long)]
    pub tol_psd: Option<f64>,
    #[arg(long)]
    pub tol_boundary: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// α_m² = 1 − m⁻³/2, b_m = 1/m.
    #[value(name = "paper-counterexample")]
    Counterexample,
    /// α_m = param (default 0.5), b_m = 1/m.
    Constant,
    /// α_m = param^m (default 0.5), b_m = 1/m.
    Geometric,
    /// α and b from --alpha and --b.
    Explicit,
}

impl Preset {
    fn name(self) -> &'static str {
        match self {
            Self::Counterexample => "paper-counterexample",
            Self::Constant => "constant",
            Self::Geometric => "geometric",
            Self::Explicit => "explicit",
        }
    }
}

/// What a run produced. `stdout` holds the report whenever one was built,
/// including runs that end in a cross-check failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CrossCheck(_) => EXIT_CROSS_CHECK,
        _ => EXIT_INPUT,
    }
}

/// Parse `argv` (program name first) and run the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let (format, result) = dispatch(&cli.command);
    match result {
        Ok((report, failure)) => {
            let stdout = match format {
                OutputFormat::Json => report.to_json() + "\n",
                OutputFormat::Text => report.to_text(),
            };
            match failure {
                None => Outcome { code: EXIT_OK, stdout, stderr: String::new() },
                Some(e) => Outcome {
                    code: exit_code(&e),
                    stdout,
                    stderr: format!("error: {e}\n"),
                },
            }
        }
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

type Run = Result<(Report, Option<Error>)>;

fn dispatch(cmd: &Command) -> (OutputFormat, Run) {
    match cmd {
        Command::Classify { path, common } => (common.output, cmd_classify(path, common)),
        Command::Validate {
            path,
            common,
            degree,
            samples,
            radius,
            seed,
            force,
        } => {
            let opts = ValidateOptions {
                degree: *degree,
                samples: *samples,
                radius: *radius,
                seed: *seed,
                force: *force,
            };
            (common.output, cmd_validate(path, common, &opts))
        }
        Command::Diag {
            preset,
            param,
            horizon,
            alpha,
            bcoef,
            output,
        } => (
            *output,
            cmd_diag(*preset, *param, *horizon, alpha.as_deref(), bcoef.as_deref()).map(|r| (r, None)),
        ),
    }
}

fn load(path: &PathBuf) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    ProblemFile::parse(&text)
}

fn tolerances(n: usize, file: &ProblemOptions, flags: &CommonFlags) -> Result<Tolerances> {
    let mut tol = Tolerances::for_dim(n);
    if let Some(x) = flags.tol_rank.or(file.rank_tol) {
        tol.rank_tol = x;
    }
    if let Some(x) = flags.tol_psd.or(file.psd_tol) {
        tol.psd_tol = x;
    }
    if let Some(x) = flags.tol_boundary.or(file.boundary_tol) {
        tol.boundary_tol = x;
    }
    tol.validate()?;
    Ok(tol)
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// The classification part shared by `classify` and `validate`.
fn classify_problem(problem: &ProblemFile, tol: &Tolerances) -> Result<Report> {
    let phi = &problem.map;
    let cert = composition_norm(phi, tol)?;
    let structure = classify_structure(phi, tol)?;
    let cms = if cert.a_norm <= 1.0 + tol.boundary_tol {
        Some(cms_condition_check(phi, tol)?)
    } else {
        None
    };
    if let Some(c) = cms {
        if c != cert.bounded {
            return Err(Error::CrossCheck(format!(
                "range membership says bounded = {} but the orthogonality condition says {c}",
                cert.bounded
            )));
        }
    }
    let mut report = Report::new("classify");
    report.tolerances = Some(*tol);
    report.dim = Some(phi.dim());
    report.verdicts = Some(Verdicts {
        bounded: cert.bounded,
        compact: structure.compact,
        normal: structure.normal,
        isometric: structure.isometric,
        coisometric: structure.coisometric,
        unitary: structure.unitary,
        boundary: cert.boundary,
        cms_condition: cms,
    });
    let log_norm = cert
        .v
        .as_ref()
        .map(|v| 0.5 * (v.norm_sqr() + phi.b().norm_sqr()));
    report.norm = Some(NormSection {
        norm: cert.norm.and_then(finite),
        log_norm,
        cms_norm: cert.cms_norm.and_then(finite),
        a_norm: cert.a_norm,
        v: cert.v,
        w0: cert.w0,
        membership_residual: cert.membership_residual,
        kernel_projection: cert.kernel_projection,
        kernel_dim: cert.kernel_dim,
        cross_check_tol: CROSS_CHECK_TOL,
    });
    Ok(report)
}

pub fn cmd_classify(path: &PathBuf, flags: &CommonFlags) -> Run {
    let problem = load(path)?;
    let tol = tolerances(problem.map.dim(), &problem.options, flags)?;
    Ok((classify_problem(&problem, &tol)?, None))
}

#[derive(Clone, Debug, Default)]
pub struct ValidateOptions {
    pub degree: Option<usize>,
    pub samples: Option<usize>,
    pub radius: Option<f64>,
    pub seed: Option<u64>,
    pub force: bool,
}

/// Default truncation degree for dimension `n`.
pub fn default_degree(n: usize) -> usize {
    match n {
        1 => 16,
        2 => 10,
        3 => 6,
        4 => 4,
        5 => 3,
        _ => 2,
    }
}

pub fn cmd_validate(path: &PathBuf, flags: &CommonFlags, opts: &ValidateOptions) -> Run {
    let problem = load(path)?;
    let file = &problem.options;
    let phi = &problem.map;
    let n = phi.dim();
    let tol = tolerances(n, file, flags)?;
    let degree = opts.degree.or(file.degree).unwrap_or_else(|| default_degree(n));
    let samples = opts.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
    let radius = opts.radius.or(file.radius).unwrap_or(DEFAULT_RADIUS);
    let seed = opts.seed.or(file.seed).unwrap_or(0);

    let mut report = classify_problem(&problem, &tol)?;
    report.command = "validate".into();
    report.seed = Some(seed);
    let bounded = report.verdicts.is_some_and(|v| v.bounded);
    let norm_section = report.norm.clone().expect("classification fills the norm section");
    if !bounded && !opts.force {
        let why = match norm_section.membership_residual {
            Some(r) => format!("A*b is not in the range of (I - A*A)^(1/2) (membership residual {r})"),
            None => format!("‖A‖ = {} exceeds 1", norm_section.a_norm),
        };
        return Err(Error::Unbounded(format!("{why}; pass --force to run the oracles anyway")));
    }

    let mut failures = Vec::new();
    let norm = norm_section.norm;

    let truncated = truncated_norms(phi, degree)?;
    let monotone = truncated.windows(2).all(|w| w[1] >= w[0] * (1.0 - TRUNCATION_TOL));
    if !monotone {
        failures.push("truncated norms are not monotone in the degree".to_string());
    }
    let below_norm = norm.map(|m| truncated.iter().all(|&t| t <= m * (1.0 + TRUNCATION_TOL)));
    if below_norm == Some(false) {
        failures.push("a truncated norm exceeds the closed-form norm".to_string());
    }

    let cert = composition_norm(phi, &tol)?;
    let plan = SamplePlan::structured(phi, &cert, samples, radius, seed)?;
    let (lower_bound, lower_bound_error) = match norm_lower_bound(phi, &plan, BISECT_TOL, &tol) {
        Ok(x) => (finite(x), None),
        Err(e @ Error::CrossCheck(_)) => return Err(e),
        Err(e) => (None, Some(e.to_string())),
    };
    let agrees = match (norm, lower_bound) {
        (Some(m), Some(lb)) => Some((lb / m - 1.0).abs() <= PSD_AGREEMENT_TOL),
        _ => None,
    };
    if agrees == Some(false) {
        failures.push("PSD bisection disagrees with the closed-form norm".to_string());
    }
    if norm.is_some() && lower_bound.is_none() {
        failures.push("PSD bisection produced no bound".to_string());
    }
    let certify_at = norm.map(|m| m * (1.0 + 1e-8));
    let certify = match certify_at {
        Some(m) => Some(psd_certify(phi, m, &plan, &tol)?),
        None => None,
    };
    if certify.is_some_and(|c| !c.psd) {
        failures.push("Gram matrix is not PSD just above the closed-form norm".to_string());
    }

    let pass = failures.is_empty();
    report.oracles = Some(OracleSection {
        degree,
        truncation_tol: TRUNCATION_TOL,
        truncated_norms: truncated
            .iter()
            .enumerate()
            .skip(1)
            .map(|(degree, &norm)| TruncatedEntry { degree, norm })
            .collect(),
        monotone,
        below_norm,
        psd: PsdSection {
            plan_size: plan.len(),
            samples,
            radius: plan.radius(),
            bisect_tol: BISECT_TOL,
            lower_bound,
            lower_bound_error,
            agrees,
            agreement_tol: PSD_AGREEMENT_TOL,
            certify_at,
            certify,
        },
        pass,
        failures: failures.clone(),
    });
    let failure = (!pass).then(|| Error::CrossCheck(format!("oracle disagreement: {}", failures.join("; "))));
    Ok((report, failure))
}

fn parse_list(text: &str, what: &str) -> Result<Vec<C64>> {
    text.split(',')
        .enumerate()
        .map(|(i, item)| {
            let bad = || Error::Input(format!("{what}[{i}]: expected `re` or `re:im`, got {item:?}"));
            let mut parts = item.trim().splitn(2, ':');
            let re: f64 = parts.next().unwrap_or("").trim().parse().map_err(|_| bad())?;
            let im: f64 = match parts.next() {
                Some(s) => s.trim().parse().map_err(|_| bad())?,
                None => 0.0,
            };
            if !re.is_finite() || !im.is_finite() {
                return Err(bad());
            }
            Ok(C64::new(re, im))
        })
        .collect()
}

fn checkpoints(sums: &[f64]) -> Vec<SumCheckpoint> {
    let mut marks = Vec::new();
    let mut decade = 1;
    while decade <= sums.len() {
        for k in [1, 2, 5] {
            let m = k * decade;
            if m <= sums.len() {
                marks.push(m);
            }
        }
        decade *= 10;
    }
    if marks.last() != Some(&sums.len()) && !sums.is_empty() {
        marks.push(sums.len());
    }
    marks.into_iter().map(|m| SumCheckpoint { m, sum: sums[m - 1] }).collect()
}

pub fn cmd_diag(
    preset: Preset,
    param: Option<f64>,
    horizon: usize,
    alpha: Option<&str>,
    bcoef: Option<&str>,
) -> Result<Report> {
    if preset != Preset::Explicit && (alpha.is_some() || bcoef.is_some()) {
        return Err(Error::Input("--alpha and --b apply only to the explicit preset".into()));
    }
    if let Some(p) = param {
        if !p.is_finite() {
            return Err(Error::Input("--param must be finite".into()));
        }
    }
    let real = |x: f64| C64::new(x, 0.0);
    let (a_seq, b_seq, parameter) = match preset {
        Preset::Counterexample => {
            if param.is_some() {
                return Err(Error::Input("paper-counterexample takes no --param".into()));
            }
            (Sequence::Counterexample, Sequence::harmonic(), None)
        }
        Preset::Constant => {
            let a = param.unwrap_or(0.5);
            (Sequence::Constant { value: real(a) }, Sequence::harmonic(), Some(a))
        }
        Preset::Geometric => {
            let r = param.unwrap_or(0.5);
            (Sequence::Geometric { ratio: real(r) }, Sequence::harmonic(), Some(r))
        }
        Preset::Explicit => {
            if param.is_some() {
                return Err(Error::Input("explicit takes --alpha and --b, not --param".into()));
            }
            let a = parse_list(alpha.ok_or_else(|| Error::Input("explicit needs --alpha".into()))?, "alpha")?;
            let b = parse_list(bcoef.ok_or_else(|| Error::Input("explicit needs --b".into()))?, "b")?;
            (Sequence::Explicit { values: a }, Sequence::Explicit { values: b }, None)
        }
    };
    let model = DiagonalModel::new(a_seq, b_seq, horizon)?;
    let series = series_criterion(&model, horizon)?;
    let gaps = (1..=horizon.min(GAP_ROWS))
        .filter(|&m| model.alpha.defect(m) > 0.0)
        .map(|m| counterexample_gap(&model, m))
        .collect::<Result<Vec<_>>>()?;
    let (norm, log_norm, b_norm_sqr, norm_error) = match diag_norm(&model, horizon) {
        Ok(d) => {
            let log = 0.5 * (d.series_sum + d.b_norm_sqr);
            (finite(d.norm), Some(log), Some(d.b_norm_sqr), None)
        }
        Err(e @ (Error::Unbounded(_) | Error::Inconclusive(_))) => (None, None, None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let mut report = Report::new("diag");
    report.diag = Some(DiagSection {
        preset: preset.name().into(),
        parameter,
        horizon,
        partial_sums: checkpoints(&series.partial_sums),
        verdict: series.verdict,
        evidence: series.evidence,
        tail_bound: series.tail_bound,
        trivial_kernel: model.unit_modulus_indices(horizon).is_empty(),
        dropped: series.dropped,
        alpha: model.alpha,
        b: model.b,
        gaps,
        norm,
        log_norm,
        b_norm_sqr,
        norm_error,
    });
    Ok(report)
}
