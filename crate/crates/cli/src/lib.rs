//! Command-line front end for `hyperq-core`: argument parsing, configuration files
//! and report rendering. The binary is a thin wrapper around [`run`].

pub mod config;
pub mod format;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use hyperq_core::accountant::{
    amplify_failure_depolarizing, amplify_gad, amplify_gd_equatorial, amplify_loss_depolarizing,
    certify_robustness, eta_threshold, AmplifiedBudget, PrivacyBudget,
};
use hyperq_core::calibrate::{
    hybrid_calibrate, noise_reduction_scan, CalibrationRequest, GaussianMechanism,
};
use hyperq_core::mechanism::{
    default_eta_grid, default_sigma_grid, tightness_ratio, utility_bound, InputSampler,
    MechanismConfig, TightnessCell,
};
use hyperq_core::verify::{run_lemma, HarnessOptions, LemmaId, TrialReport, Verdict};
use hyperq_core::Error as CoreError;

use config::ConfigFile;
use format::{document, num, opt_num, opt_text, render_json, text, Format};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hyperq",
    version,
    about = "Privacy amplification by quantum noise in hybrid classical-quantum models"
)]
pub struct Cli {
    /// Output format; defaults to csv for `scan` and json elsewhere.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Master seed for every randomized computation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Amplified (ε′, δ′) after a noise channel.
    Amplify(AmplifyArgs),
    /// Classical Gaussian scale for a target end-to-end budget.
    Calibrate(CalibrateArgs),
    /// Robustness certificate from class scores.
    Certify(CertifyArgs),
    /// Noise-variance reduction over (η, qubit count).
    Scan(ScanArgs),
    /// Utility bound for a mechanism configuration, with optional tightness grid.
    Utility(UtilityArgs),
    /// Randomized checks of the divergence inequalities.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    DepFailure,
    DepLoss,
    Gad,
    Gd,
}

impl Rule {
    fn name(self) -> &'static str {
        match self {
            Rule::DepFailure => "dep-failure",
            Rule::DepLoss => "dep-loss",
            Rule::Gad => "gad",
            Rule::Gd => "gd",
        }
    }
}

#[derive(Debug, Args)]
pub struct AmplifyArgs {
    #[arg(long, value_enum)]
    pub rule: Rule,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub delta: f64,
    #[arg(long)]
    pub eta: f64,
    /// Hilbert-space dimension (dep-failure).
    #[arg(long)]
    pub d: Option<u64>,
    /// Smallest normalized POVM trace (dep-loss).
    #[arg(long)]
    pub phi: Option<f64>,
    /// Number of equal-trace classes (dep-loss); also enables the η threshold.
    #[arg(long)]
    pub k: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MechanismName {
    Basic,
    Analytic,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub delta: f64,
    /// ℓ₂ sensitivity of the classical layer.
    #[arg(long, default_value_t = 1.0)]
    pub l: f64,
    #[arg(long, default_value_t = 0.0)]
    pub eta: f64,
    #[arg(long, default_value_t = 2)]
    pub d: u64,
    #[arg(long, value_enum, default_value_t = MechanismName::Analytic)]
    pub mechanism: MechanismName,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Comma-separated class scores in [0, 1].
    #[arg(long, value_delimiter = ',', required = true)]
    pub scores: Vec<f64>,
    #[arg(long)]
    pub class: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub delta_prime: f64,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub l: f64,
    #[arg(long, value_delimiter = ',', default_value = "0,0.05,0.1,0.2,0.3,0.4")]
    pub etas: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub n_min: u32,
    #[arg(long, default_value_t = 30)]
    pub n_max: u32,
}

#[derive(Debug, Args)]
pub struct UtilityArgs {
    /// Mechanism configuration (JSON); the one-qubit reference model when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the configuration's σ.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Overrides the configuration's η.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Failure probability of the bound.
    #[arg(long, default_value_t = 0.01)]
    pub p: f64,
    /// Monte-Carlo samples per (σ, η) point.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Also sweep the (σ, η) grid and report max deviation / bound per cell.
    #[arg(long)]
    pub tightness: bool,
    #[arg(long, value_delimiter = ',')]
    pub sigmas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub etas: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// One of b4, b5, b6, b7, b8, b9, b11, t41.
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    pub lemma: Option<String>,
    #[arg(long)]
    pub all: bool,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Hilbert-space dimensions (support sizes for b6).
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Noise levels (a range for b5/b7, a grid elsewhere).
    #[arg(long, value_delimiter = ',')]
    pub eta: Option<Vec<f64>>,
}

/// Rendered report plus exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    pub code: u8,
    /// Diagnostic for stderr.
    pub note: Option<String>,
}

/// Invalid input; the binary prints the message and exits with [`EXIT_USAGE`].
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

/// Errors that mean the mathematics has no answer, as opposed to bad input.
fn is_infeasible(e: &CoreError) -> bool {
    matches!(
        e,
        CoreError::Infeasible { .. }
            | CoreError::Undefined { .. }
            | CoreError::NoBracket { .. }
            | CoreError::NoConvergence { .. }
    )
}

fn error_kind(e: &CoreError) -> &'static str {
    match e {
        CoreError::Infeasible { .. } => "infeasible",
        CoreError::Undefined { .. } => "undefined",
        CoreError::NoBracket { .. } => "no_bracket",
        CoreError::NoConvergence { .. } => "no_convergence",
        _ => "invalid_input",
    }
}

/// Turns a core error into either an infeasibility report or a usage error.
fn failure(command: &str, fmt: Format, e: CoreError) -> Result<Outcome, UsageError> {
    if !is_infeasible(&e) {
        return Err(usage(e.to_string()));
    }
    let body = match fmt {
        Format::Json => {
            let mut m = Map::new();
            m.insert(
                "error".into(),
                json!({ "kind": error_kind(&e), "message": e.to_string() }),
            );
            render_json(&document(command, m))
        }
        Format::Csv | Format::Human => String::new(),
    };
    Ok(Outcome {
        body,
        code: EXIT_INFEASIBLE,
        note: Some(e.to_string()),
    })
}

fn ok(body: String) -> Result<Outcome, UsageError> {
    Ok(Outcome {
        body,
        code: EXIT_OK,
        note: None,
    })
}

pub fn run(cli: &Cli) -> Result<Outcome, UsageError> {
    let fmt = cli.format.unwrap_or(match cli.command {
        Command::Scan(_) => Format::Csv,
        _ => Format::Json,
    });
    match &cli.command {
        Command::Amplify(a) => cmd_amplify(a, fmt),
        Command::Calibrate(a) => cmd_calibrate(a, fmt),
        Command::Certify(a) => cmd_certify(a, fmt),
        Command::Scan(a) => cmd_scan(a, fmt),
        Command::Utility(a) => cmd_utility(a, fmt, cli.seed),
        Command::Verify(a) => cmd_verify(a, fmt, cli.seed),
    }
}

fn key_values(pairs: &[(&str, String)]) -> String {
    let width = pairs
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    let mut s = String::new();
    for (k, v) in pairs {
        let _ = writeln!(s, "{k:<width$}  {v}");
    }
    s
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

pub fn cmd_amplify(a: &AmplifyArgs, fmt: Format) -> Result<Outcome, UsageError> {
    const CMD: &str = "amplify";
    let b = PrivacyBudget::new(a.eps, a.delta).map_err(|e| usage(e.to_string()))?;
    let mut threshold: Option<Result<hyperq_core::accountant::EtaThreshold, CoreError>> = None;
    let mut phi_used = None;
    let res: Result<AmplifiedBudget, CoreError> = match a.rule {
        Rule::DepFailure => {
            let d =
                a.d.ok_or_else(|| usage("--d is required for --rule dep-failure"))?;
            amplify_failure_depolarizing(&b, a.eta, d)
        }
        Rule::DepLoss => {
            let phi = match (a.phi, a.k) {
                (Some(p), _) => p,
                (None, Some(0)) => return Err(usage("--k must be positive")),
                (None, Some(k)) => 1.0 / k as f64,
                (None, None) => return Err(usage("--rule dep-loss needs --phi or --k")),
            };
            phi_used = Some(phi);
            if let Some(k) = a.k {
                threshold = Some(eta_threshold(&b, k));
            }
            amplify_loss_depolarizing(&b, a.eta, phi)
        }
        Rule::Gad => amplify_gad(&b, a.eta),
        Rule::Gd => amplify_gd_equatorial(&b, a.eta),
    };
    let out = match res {
        Ok(o) => o,
        Err(e) => return failure(CMD, fmt, e),
    };
    let (thr, thr_err) = match &threshold {
        Some(Ok(t)) => (Some(t.threshold), None),
        Some(Err(e)) if is_infeasible(e) => (None, Some(e.to_string())),
        Some(Err(e)) => return Err(usage(e.to_string())),
        None => (None, None),
    };
    let body = match fmt {
        Format::Json => {
            let mut m = Map::new();
            m.insert("rule".into(), json!(a.rule.name()));
            m.insert(
                "input".into(),
                json!({
                    "epsilon": num(a.eps), "delta": num(a.delta), "eta": num(a.eta),
                    "d": a.d, "phi": opt_num(phi_used), "k": a.k,
                }),
            );
            m.insert("epsilon_prime".into(), num(out.epsilon_prime));
            m.insert("delta_prime".into(), num(out.delta_prime));
            if a.rule == Rule::DepLoss {
                m.insert("eta_threshold".into(), opt_num(thr));
            }
            render_json(&document(CMD, m))
        }
        Format::Csv => csv(
            &["rule", "epsilon_prime", "delta_prime", "eta_threshold"],
            &[vec![
                a.rule.name().into(),
                text(out.epsilon_prime),
                text(out.delta_prime),
                opt_text(thr),
            ]],
        ),
        Format::Human => {
            let mut pairs = vec![
                ("rule", a.rule.name().to_string()),
                ("epsilon'", text(out.epsilon_prime)),
                ("delta'", text(out.delta_prime)),
            ];
            if a.rule == Rule::DepLoss {
                pairs.push((
                    "eta threshold",
                    thr.map_or_else(|| "undefined".into(), text),
                ));
            }
            key_values(&pairs)
        }
    };
    Ok(Outcome {
        body,
        code: if thr_err.is_some() {
            EXIT_INFEASIBLE
        } else {
            EXIT_OK
        },
        note: thr_err,
    })
}

pub fn cmd_calibrate(a: &CalibrateArgs, fmt: Format) -> Result<Outcome, UsageError> {
    const CMD: &str = "calibrate";
    let mechanism = match a.mechanism {
        MechanismName::Basic => GaussianMechanism::Basic,
        MechanismName::Analytic => GaussianMechanism::Analytic,
    };
    let req = CalibrationRequest {
        target_epsilon: a.eps,
        target_delta: a.delta,
        sensitivity: a.l,
        eta: a.eta,
        d: a.d,
        mechanism,
    };
    let r = match hybrid_calibrate(&req) {
        Ok(r) => r,
        Err(e) => return failure(CMD, fmt, e),
    };
    let gaussian = (mechanism == GaussianMechanism::Analytic).then(|| r.gaussian_residual(&req));
    let amplification = r
        .amplification_residual(&req)
        .map_err(|e| usage(e.to_string()))?;
    let name = match mechanism {
        GaussianMechanism::Basic => "basic",
        GaussianMechanism::Analytic => "analytic",
    };
    let body = match fmt {
        Format::Json => {
            let mut m = Map::new();
            m.insert(
                "input".into(),
                json!({
                    "epsilon_prime": num(a.eps), "delta_prime": num(a.delta), "l": num(a.l),
                    "eta": num(a.eta), "d": a.d,
                }),
            );
            m.insert("mechanism".into(), json!(name));
            m.insert("relaxed_delta".into(), num(r.relaxed_delta));
            m.insert("sigma".into(), num(r.sigma));
            m.insert(
                "residuals".into(),
                json!({ "gaussian": opt_num(gaussian), "amplification": num(amplification) }),
            );
            render_json(&document(CMD, m))
        }
        Format::Csv => csv(
            &[
                "mechanism",
                "relaxed_delta",
                "sigma",
                "gaussian_residual",
                "amplification_residual",
            ],
            &[vec![
                name.into(),
                text(r.relaxed_delta),
                text(r.sigma),
                opt_text(gaussian),
                text(amplification),
            ]],
        ),
        Format::Human => key_values(&[
            ("mechanism", name.into()),
            ("relaxed delta", text(r.relaxed_delta)),
            ("sigma", text(r.sigma)),
            (
                "gaussian residual",
                gaussian.map_or_else(|| "n/a".into(), text),
            ),
            ("amplification residual", text(amplification)),
        ]),
    };
    ok(body)
}

pub fn cmd_certify(a: &CertifyArgs, fmt: Format) -> Result<Outcome, UsageError> {
    const CMD: &str = "certify";
    let c = match certify_robustness(&a.scores, a.class, a.eps, a.delta_prime) {
        Ok(c) => c,
        Err(e) => return failure(CMD, fmt, e),
    };
    let body = match fmt {
        Format::Json => {
            let mut m = Map::new();
            m.insert(
                "input".into(),
                json!({
                    "scores": a.scores.iter().map(|&s| num(s)).collect::<Vec<_>>(),
                    "class": a.class, "epsilon": num(a.eps), "delta_prime": num(a.delta_prime),
                }),
            );
            m.insert("certified".into(), json!(c.certified));
            m.insert("margin".into(), num(c.margin));
            render_json(&document(CMD, m))
        }
        Format::Csv => csv(
            &["certified", "margin"],
            &[vec![c.certified.to_string(), text(c.margin)]],
        ),
        Format::Human => key_values(&[
            ("certified", c.certified.to_string()),
            ("margin", text(c.margin)),
        ]),
    };
    ok(body)
}

pub fn cmd_scan(a: &ScanArgs, fmt: Format) -> Result<Outcome, UsageError> {
    const CMD: &str = "scan";
    if a.n_min > a.n_max {
        return Err(usage("--n-min exceeds --n-max"));
    }
    let rows = match noise_reduction_scan(a.eps, a.delta, a.l, &a.etas, a.n_min..=a.n_max) {
        Ok(r) => r,
        Err(e) => return failure(CMD, fmt, e),
    };
    let infeasible = rows.iter().filter(|r| r.values.is_err()).count();
    let body = match fmt {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| match &r.values {
                    Ok(v) => json!({
                        "eta": num(r.eta), "n": r.n, "status": "ok",
                        "sigma2_classical": num(v.sigma2_classical),
                        "sigma2_hybrid": num(v.sigma2_hybrid),
                        "reduction_percent": num(v.reduction_percent),
                    }),
                    Err(e) => json!({
                        "eta": num(r.eta), "n": r.n, "status": error_kind(e),
                        "sigma2_classical": null, "sigma2_hybrid": null, "reduction_percent": null,
                    }),
                })
                .collect();
            let mut m = Map::new();
            m.insert(
                "input".into(),
                json!({ "epsilon_prime": num(a.eps), "delta_prime": num(a.delta), "l": num(a.l) }),
            );
            m.insert("rows".into(), Value::Array(items));
            render_json(&document(CMD, m))
        }
        Format::Csv | Format::Human => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut row = vec![text(r.eta), r.n.to_string()];
                    match &r.values {
                        Ok(v) => row.extend([
                            text(v.sigma2_classical),
                            text(v.sigma2_hybrid),
                            text(v.reduction_percent),
                        ]),
                        // Infeasible grid points keep their row with empty values.
                        Err(_) => row.extend([String::new(), String::new(), String::new()]),
                    }
                    row
                })
                .collect();
            let header = [
                "eta",
                "n",
                "sigma2_classical",
                "sigma2_hybrid",
                "reduction_percent",
            ];
            if fmt == Format::Csv {
                csv(&header, &table)
            } else {
                aligned(&header, &table)
            }
        }
    };
    Ok(Outcome {
        body,
        code: if infeasible > 0 {
            EXIT_INFEASIBLE
        } else {
            EXIT_OK
        },
        note: (infeasible > 0).then(|| format!("{infeasible} grid point(s) infeasible")),
    })
}

fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let mut s = String::new();
    let line = |cells: Vec<&str>, s: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        s.push_str(parts.join("  ").trim_end());
        s.push('\n');
    };
    line(header.to_vec(), &mut s);
    for r in rows {
        line(r.iter().map(String::as_str).collect(), &mut s);
    }
    s
}

/// Evaluates `jobs` on a pool of scoped threads; results keep their input order.
fn parallel_map<T: Sync, R: Send>(jobs: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(jobs.len())
        .max(1);
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<R>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let r = f(&jobs[i]);
                *slots[i]
                    .lock()
                    .expect("no worker panics while holding a slot") = Some(r);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| {
            m.into_inner()
                .expect("slot lock is never poisoned")
                .expect("every job ran")
        })
        .collect()
}

/// Parallel version of the core tightness sweep, sigma-major like the original.
pub fn tightness_grid_parallel(
    cfg: &MechanismConfig,
    sigmas: &[f64],
    etas: &[f64],
    p_fail: f64,
    samples: usize,
    seed: u64,
) -> Result<Vec<TightnessCell>, CoreError> {
    let jobs: Vec<(f64, f64)> = sigmas
        .iter()
        .flat_map(|&s| etas.iter().map(move |&e| (s, e)))
        .collect();
    let sampler = InputSampler::default();
    parallel_map(&jobs, |&(sigma, eta)| {
        let c = cfg.with_noise(eta, sigma)?;
        Ok(TightnessCell {
            sigma,
            eta,
            estimate: tightness_ratio(&c, p_fail, samples, &sampler, seed)?,
        })
    })
    .into_iter()
    .collect()
}

pub fn cmd_utility(a: &UtilityArgs, fmt: Format, seed: u64) -> Result<Outcome, UsageError> {
    const CMD: &str = "utility";
    let base = match &a.config {
        Some(path) => ConfigFile::load(path)
            .and_then(|c| c.build())
            .map_err(|e| usage(format!("invalid config: {e:#}")))?,
        None => MechanismConfig::reference(0.0, 0.0).map_err(|e| usage(e.to_string()))?,
    };
    let cfg = base
        .with_noise(a.eta.unwrap_or(base.eta()), a.sigma.unwrap_or(base.sigma()))
        .map_err(|e| usage(e.to_string()))?;
    let report = utility_bound(&cfg, a.p).map_err(|e| usage(e.to_string()))?;
    if a.samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let empirical = tightness_ratio(&cfg, a.p, a.samples, &InputSampler::default(), seed);
    let empirical = match empirical {
        Ok(t) => t,
        Err(e) => return failure(CMD, fmt, e),
    };
    let grid = if a.tightness {
        let sigmas = a.sigmas.clone().unwrap_or_else(default_sigma_grid);
        let etas = a.etas.clone().unwrap_or_else(default_eta_grid);
        match tightness_grid_parallel(&cfg, &sigmas, &etas, a.p, a.samples, seed) {
            Ok(g) => Some(g),
            Err(e) if is_infeasible(&e) => return failure(CMD, fmt, e),
            Err(e) => return Err(usage(e.to_string())),
        }
    } else {
        None
    };
    let body = match fmt {
        Format::Json => {
            let mut m = Map::new();
            m.insert(
                "input".into(),
                json!({
                    "sigma": num(cfg.sigma()), "eta": num(cfg.eta()), "p": num(a.p),
                    "samples": a.samples, "seed": seed,
                    "input_dim": cfg.input_dim(), "qubits": cfg.encoding().qubits(),
                }),
            );
            m.insert("l_inf".into(), num(report.l_inf));
            m.insert("sigma_term".into(), num(report.sigma_term));
            m.insert("quantum_term".into(), num(report.quantum_term));
            m.insert("bound".into(), num(report.bound));
            m.insert(
                "empirical".into(),
                json!({ "max_deviation": num(empirical.max_deviation), "ratio": num(empirical.ratio) }),
            );
            if let Some(g) = &grid {
                let cells: Vec<Value> = g
                    .iter()
                    .map(|c| {
                        json!({
                            "sigma": num(c.sigma), "eta": num(c.eta), "ratio": num(c.estimate.ratio),
                            "max_deviation": num(c.estimate.max_deviation), "bound": num(c.estimate.bound),
                        })
                    })
                    .collect();
                m.insert("tightness".into(), Value::Array(cells));
            }
            render_json(&document(CMD, m))
        }
        Format::Csv => match &grid {
            Some(g) => csv(
                &["sigma", "eta", "ratio"],
                &g.iter()
                    .map(|c| vec![text(c.sigma), text(c.eta), text(c.estimate.ratio)])
                    .collect::<Vec<_>>(),
            ),
            None => csv(
                &[
                    "l_inf",
                    "sigma_term",
                    "quantum_term",
                    "bound",
                    "empirical_max_deviation",
                    "empirical_ratio",
                ],
                &[vec![
                    text(report.l_inf),
                    text(report.sigma_term),
                    text(report.quantum_term),
                    text(report.bound),
                    text(empirical.max_deviation),
                    text(empirical.ratio),
                ]],
            ),
        },
        Format::Human => {
            let mut s = key_values(&[
                ("L_inf", text(report.l_inf)),
                ("sigma term", text(report.sigma_term)),
                ("quantum term", text(report.quantum_term)),
                ("bound", text(report.bound)),
                ("max deviation", text(empirical.max_deviation)),
                ("ratio", text(empirical.ratio)),
            ]);
            if let Some(g) = &grid {
                s.push('\n');
                s.push_str(&heatmap(g));
            }
            s
        }
    };
    ok(body)
}

/// Ratio table with σ down the side and η across the top.
fn heatmap(cells: &[TightnessCell]) -> String {
    let mut sigmas: Vec<f64> = Vec::new();
    let mut etas: Vec<f64> = Vec::new();
    for c in cells {
        if !sigmas.contains(&c.sigma) {
            sigmas.push(c.sigma);
        }
        if !etas.contains(&c.eta) {
            etas.push(c.eta);
        }
    }
    let mut header = vec!["sigma\\eta".to_string()];
    header.extend(etas.iter().map(|e| text(*e)));
    let rows: Vec<Vec<String>> = sigmas
        .iter()
        .map(|&s| {
            let mut r = vec![text(s)];
            r.extend(etas.iter().map(|&e| {
                cells
                    .iter()
                    .find(|c| c.sigma == s && c.eta == e)
                    .map_or_else(String::new, |c| format!("{:.3}", c.estimate.ratio))
            }));
            r
        })
        .collect();
    let h: Vec<&str> = header.iter().map(String::as_str).collect();
    aligned(&h, &rows)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "Holds",
        Verdict::Violated => "Violated",
        Verdict::Reported => "Reported",
    }
}

pub fn report_json(r: &TrialReport) -> Value {
    let cells: Vec<Value> = r
        .cells
        .iter()
        .map(|c| {
            json!({
                "eta": num(c.eta), "p_exc": num(c.p_exc), "trials": c.trials,
                "max_ratio": num(c.max_ratio), "bound": num(c.bound),
            })
        })
        .collect();
    json!({
        "lemma": r.lemma.name(),
        "selector": r.lemma.selector(),
        "trials": r.trials,
        "max_violation": num(r.max_violation),
        "max_ratio": num(r.max_ratio),
        "tolerance": num(r.tolerance),
        "seed": r.seed,
        "verdict": verdict_name(r.verdict),
        "worst_trial": r.worst_trial,
        "cells": cells,
    })
}

pub fn cmd_verify(a: &VerifyArgs, fmt: Format, seed: u64) -> Result<Outcome, UsageError> {
    const CMD: &str = "verify";
    let lemmas: Vec<LemmaId> = if a.all {
        LemmaId::ALL.to_vec()
    } else {
        let sel = a.lemma.as_deref().unwrap_or_default();
        vec![LemmaId::from_selector(sel).ok_or_else(|| {
            usage(format!(
                "unknown lemma `{sel}`; expected one of b4, b5, b6, b7, b8, b9, b11, t41"
            ))
        })?]
    };
    if a.trials == 0 {
        return Err(usage("--trials must be positive"));
    }
    let opts = HarnessOptions {
        trials: a.trials,
        seed,
        dims: a.dims.clone(),
        etas: a.eta.clone(),
    };
    let results = parallel_map(&lemmas, |&id| run_lemma(id, &opts));
    let mut reports = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(r) => reports.push(r),
            Err(e) if is_infeasible(&e) => return failure(CMD, fmt, e),
            Err(e) => return Err(usage(e.to_string())),
        }
    }
    let violated: Vec<&str> = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Violated)
        .map(|r| r.lemma.name())
        .collect();
    let body = match fmt {
        Format::Json => {
            let mut m = Map::new();
            m.insert(
                "reports".into(),
                Value::Array(reports.iter().map(report_json).collect()),
            );
            render_json(&document(CMD, m))
        }
        Format::Csv | Format::Human => {
            let header = [
                "lemma",
                "trials",
                "max_violation",
                "max_ratio",
                "verdict",
                "worst_trial",
            ];
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.lemma.name().into(),
                        r.trials.to_string(),
                        text(r.max_violation),
                        text(r.max_ratio),
                        verdict_name(r.verdict).into(),
                        r.worst_trial.map_or_else(String::new, |w| w.to_string()),
                    ]
                })
                .collect();
            if fmt == Format::Csv {
                csv(&header, &rows)
            } else {
                aligned(&header, &rows)
            }
        }
    };
    Ok(Outcome {
        body,
        code: if violated.is_empty() {
            EXIT_OK
        } else {
            EXIT_VIOLATION
        },
        note: (!violated.is_empty()).then(|| format!("violated: {}", violated.join(", "))),
    })
}
