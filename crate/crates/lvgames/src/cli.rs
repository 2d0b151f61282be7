//! Command-line surface: argument parsing, config-file handling, and the
//! JSON/CSV report assembly for every subcommand.
//!
//! Exit codes: 0 success, 1 validation or usage error, 2 I/O error. Config
//! files are TOML with `[model]`, `[integration]`, and `[mapping]` sections;
//! command-line flags override config values field by field, and a `--model`
//! flag replaces the whole `[model]` section.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use crate::analytic::{
    logistic_solution, threshold_constant, zero_interaction_return, zero_interaction_risk,
    ExponentialCurve,
};
use crate::equilibria::{enumerate_equilibria, interior_equilibrium_nplayer, DEFAULT_RESIDUAL_TOL};
use crate::error::Error;
use crate::fmt::fmt_sig;
use crate::market::{load_series, plot_csv, premium_claim_report};
use crate::model::{
    nondimensionalize, InteractionMode, LogisticParams, ModelSpec, NondimParams,
    PredatorPreyParams, TwoPlayerParams, ValidatedModel,
};
use crate::premium::{
    compare_to_market, exposure_premium_association, nash_premiums, parse_market_premiums,
    PremiumMapping,
};
use crate::simulate::{
    detect_attractor, integrate, phase_portrait, IntegrationConfig, PortraitGrid,
    TrajectoryStatus,
};
use crate::stability::{
    cooperative_sign_check, is_stable_matrix, jacobian, negative_diagonal_dominance, regime_case,
    stability_report,
};

const FAMILY_HELP: &str =
    "logistic, competitive, cooperative, competitive2, cooperative2, predator-prey, nplayer";

#[derive(Parser, Debug)]
#[command(
    name = "lvgames",
    version,
    about = "Deterministic Lotka-Volterra dynamics for insurance market games",
    after_help = "Exit codes: 0 success, 1 validation error, 2 I/O error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate rest points and classify their stability (JSON)
    Equilibria(EquilibriaArgs),
    /// Integrate one trajectory and emit it as CSV
    Simulate(SimulateArgs),
    /// Integrate a lattice of initial conditions and write CSVs plus an index
    Portrait(PortraitArgs),
    /// Print the interaction regime case for a two-player model
    Regime(RegimeArgs),
    /// Price the n-player Nash equilibrium and compare to market premiums
    Game(GameArgs),
    /// Fit per-year slopes to a premium/claim series (JSON report)
    Regress(RegressArgs),
    /// Sample a closed-form curve (logistic, growth, or decay) as CSV
    Analytic(AnalyticArgs),
}

#[derive(Args, Debug, Default)]
struct ModelArgs {
    /// TOML config file with [model], [integration], [mapping] sections
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Model family built from flags (replaces the config [model] section)
    #[arg(long, value_name = "FAMILY", help = FAMILY_HELP)]
    model: Option<String>,
    /// Growth rate (logistic), or rate ratio rho2/rho1 (nondimensional)
    #[arg(long)]
    rho: Option<f64>,
    /// Carrying capacity (logistic)
    #[arg(long = "K")]
    k: Option<f64>,
    /// Pressure of player 2 on player 1 (nondimensional)
    #[arg(long)]
    a12: Option<f64>,
    /// Pressure of player 1 on player 2 (nondimensional)
    #[arg(long)]
    a21: Option<f64>,
    #[arg(long)]
    rho1: Option<f64>,
    #[arg(long)]
    rho2: Option<f64>,
    #[arg(long = "K1")]
    k1: Option<f64>,
    #[arg(long = "K2")]
    k2: Option<f64>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    /// Policyholder risk growth rate (predator-prey)
    #[arg(long)]
    delta: Option<f64>,
    /// Suppression of risk by insurer return (predator-prey)
    #[arg(long)]
    epsilon: Option<f64>,
    /// Return growth per unit risk (predator-prey)
    #[arg(long)]
    alpha: Option<f64>,
    /// Insurer return decay rate (predator-prey)
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct IntegrationArgs {
    /// Final integration time
    #[arg(long)]
    t_end: Option<f64>,
    /// Fixed integrator step
    #[arg(long)]
    step: Option<f64>,
    /// State max-norm bound; exceeding it ends the trajectory as blow-up
    #[arg(long)]
    blowup_threshold: Option<f64>,
    /// Seed for randomized features (grid jitter)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug, Default)]
struct MappingArgs {
    /// Currency offset of the premium map
    #[arg(long)]
    base: Option<f64>,
    /// Currency per unit of equilibrium state
    #[arg(long)]
    scale: Option<f64>,
    #[arg(long)]
    claim_base: Option<f64>,
    #[arg(long)]
    claim_scale: Option<f64>,
}

#[derive(Args, Debug)]
struct EquilibriaArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Residual tolerance for accepting a candidate as a fixed point
    #[arg(long, default_value_t = DEFAULT_RESIDUAL_TOL)]
    tol: f64,
    /// Output file (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    integration: IntegrationArgs,
    /// Comma-separated initial state, e.g. 0.1,0.9
    #[arg(long, value_name = "LIST")]
    initial: String,
    /// Significant digits in the CSV
    #[arg(long, default_value_t = 6)]
    digits: usize,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PortraitArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    integration: IntegrationArgs,
    /// Comma-separated lattice minima, one per state axis
    #[arg(long, value_name = "LIST")]
    mins: String,
    /// Comma-separated lattice maxima
    #[arg(long, value_name = "LIST")]
    maxs: String,
    /// Comma-separated point counts per axis
    #[arg(long, value_name = "LIST")]
    counts: String,
    /// Jitter amplitude as a fraction of lattice spacing (needs a seed)
    #[arg(long, default_value_t = 0.0)]
    jitter: f64,
    /// Attractor-detection tolerance
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Directory for per-trajectory CSVs and index.json
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 6)]
    digits: usize,
}

#[derive(Args, Debug)]
struct RegimeArgs {
    /// competitive or cooperative
    #[arg(long)]
    mode: String,
    #[arg(long)]
    a12: f64,
    #[arg(long)]
    a21: f64,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
}

#[derive(Args, Debug)]
struct GameArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    mapping: MappingArgs,
    /// Market premium CSV: player,market_premium[,claim_exposure]
    #[arg(long, value_name = "PATH")]
    market: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RegressArgs {
    /// Input CSV: year,net_written_premium,net_claims_incurred
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also write a plot CSV (year,premium,claim) here
    #[arg(long, value_name = "PATH")]
    plot: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    digits: usize,
}

#[derive(Args, Debug)]
struct AnalyticArgs {
    /// logistic, growth, or decay
    #[arg(long)]
    curve: String,
    /// Initial population (logistic)
    #[arg(long = "N0")]
    n0: Option<f64>,
    /// Carrying capacity (logistic)
    #[arg(long = "K")]
    k: Option<f64>,
    /// Growth rate (logistic)
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    /// Initial value (growth and decay curves)
    #[arg(long)]
    amplitude: Option<f64>,
    /// Exponent magnitude (growth and decay curves)
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    t_end: f64,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    #[arg(long, default_value_t = 6)]
    digits: usize,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Errors routed to exit codes: validation problems exit 1, I/O problems 2.
enum CliError {
    Validation(String),
    Io(String),
}

type CliResult<T> = std::result::Result<T, CliError>;

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> CliResult<()> {
    fs::write(path, content)
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, content: &str) -> CliResult<()> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(p) => write_file(p, content),
    }
}

fn to_pretty(doc: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<ModelSpec>,
    integration: Option<IntegrationSection>,
    mapping: Option<MappingSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegrationSection {
    t_end: Option<f64>,
    step: Option<f64>,
    blowup_threshold: Option<f64>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct MappingSection {
    base: Option<f64>,
    scale: Option<f64>,
    claim_base: Option<f64>,
    claim_scale: Option<f64>,
    exposure_weights: Option<Vec<f64>>,
}

fn load_file_config(path: &Option<PathBuf>) -> CliResult<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = read_file(p)?;
            toml::from_str(&text)
                .map_err(|e| validation(format!("config {}: {e}", p.display())))
        }
    }
}

impl ModelArgs {
    fn resolve(&self, file: &FileConfig) -> CliResult<ValidatedModel> {
        let spec = if let Some(name) = &self.model {
            self.spec_from_flags(name, file)?
        } else if let Some(spec) = file.model.clone() {
            self.apply_overrides(spec)?
        } else {
            return Err(validation(
                "no model given: pass --model with its parameter flags, \
                 or a config file with a [model] section",
            ));
        };
        spec.validate().map_err(CliError::from)
    }

    fn spec_from_flags(&self, family: &str, file: &FileConfig) -> CliResult<ModelSpec> {
        let req = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| validation(format!("--{flag} is required for --model {family}")))
        };
        match family {
            "logistic" => Ok(ModelSpec::Logistic(LogisticParams {
                rho: self.rho.unwrap_or(1.0),
                k: req(self.k, "K")?,
            })),
            "competitive" | "cooperative" => {
                let mode = if family == "competitive" {
                    InteractionMode::Competitive
                } else {
                    InteractionMode::Cooperative
                };
                Ok(ModelSpec::Nondim(NondimParams {
                    a12: req(self.a12, "a12")?,
                    a21: req(self.a21, "a21")?,
                    rho: self.rho.unwrap_or(1.0),
                    mode,
                }))
            }
            "competitive2" | "cooperative2" => {
                let p = TwoPlayerParams {
                    rho1: req(self.rho1, "rho1")?,
                    rho2: req(self.rho2, "rho2")?,
                    k1: req(self.k1, "K1")?,
                    k2: req(self.k2, "K2")?,
                    c1: req(self.c1, "c1")?,
                    c2: req(self.c2, "c2")?,
                };
                Ok(if family == "competitive2" {
                    ModelSpec::Competitive2(p)
                } else {
                    ModelSpec::Cooperative2(p)
                })
            }
            "predator-prey" => Ok(ModelSpec::PredatorPrey(PredatorPreyParams {
                delta: req(self.delta, "delta")?,
                epsilon: req(self.epsilon, "epsilon")?,
                alpha: req(self.alpha, "alpha")?,
                beta: req(self.beta, "beta")?,
            })),
            "nplayer" => match &file.model {
                Some(spec @ ModelSpec::NPlayer(_)) => Ok(spec.clone()),
                Some(other) => Err(validation(format!(
                    "--model nplayer needs a config [model] with variant = \"nplayer\", \
                     found {:?}",
                    other.variant_name()
                ))),
                None => Err(validation(
                    "--model nplayer needs a config file: the coupling matrix C \
                     cannot be passed as flags",
                )),
            },
            other => Err(validation(format!(
                "unknown model family {other:?}; expected one of: {FAMILY_HELP}"
            ))),
        }
    }

    /// Field-by-field flag overrides on a config-file model.
    fn apply_overrides(&self, mut spec: ModelSpec) -> CliResult<ModelSpec> {
        let applicable: &[&str] = match &spec {
            ModelSpec::Logistic(_) => &["rho", "K"],
            ModelSpec::Nondim(_) => &["a12", "a21", "rho"],
            ModelSpec::Competitive2(_) | ModelSpec::Cooperative2(_) => {
                &["rho1", "rho2", "K1", "K2", "c1", "c2"]
            }
            ModelSpec::PredatorPrey(_) => &["delta", "epsilon", "alpha", "beta"],
            ModelSpec::NPlayer(_) => &[],
        };
        for (name, set) in self.set_model_flags() {
            if set && !applicable.contains(&name) {
                return Err(validation(format!(
                    "flag --{name} does not apply to the {} model from the config file",
                    spec.variant_name()
                )));
            }
        }
        match &mut spec {
            ModelSpec::Logistic(p) => {
                if let Some(v) = self.rho {
                    p.rho = v;
                }
                if let Some(v) = self.k {
                    p.k = v;
                }
            }
            ModelSpec::Nondim(p) => {
                if let Some(v) = self.a12 {
                    p.a12 = v;
                }
                if let Some(v) = self.a21 {
                    p.a21 = v;
                }
                if let Some(v) = self.rho {
                    p.rho = v;
                }
            }
            ModelSpec::Competitive2(p) | ModelSpec::Cooperative2(p) => {
                if let Some(v) = self.rho1 {
                    p.rho1 = v;
                }
                if let Some(v) = self.rho2 {
                    p.rho2 = v;
                }
                if let Some(v) = self.k1 {
                    p.k1 = v;
                }
                if let Some(v) = self.k2 {
                    p.k2 = v;
                }
                if let Some(v) = self.c1 {
                    p.c1 = v;
                }
                if let Some(v) = self.c2 {
                    p.c2 = v;
                }
            }
            ModelSpec::PredatorPrey(p) => {
                if let Some(v) = self.delta {
                    p.delta = v;
                }
                if let Some(v) = self.epsilon {
                    p.epsilon = v;
                }
                if let Some(v) = self.alpha {
                    p.alpha = v;
                }
                if let Some(v) = self.beta {
                    p.beta = v;
                }
            }
            ModelSpec::NPlayer(_) => {}
        }
        Ok(spec)
    }

    fn set_model_flags(&self) -> [(&'static str, bool); 14] {
        [
            ("rho", self.rho.is_some()),
            ("K", self.k.is_some()),
            ("a12", self.a12.is_some()),
            ("a21", self.a21.is_some()),
            ("rho1", self.rho1.is_some()),
            ("rho2", self.rho2.is_some()),
            ("K1", self.k1.is_some()),
            ("K2", self.k2.is_some()),
            ("c1", self.c1.is_some()),
            ("c2", self.c2.is_some()),
            ("delta", self.delta.is_some()),
            ("epsilon", self.epsilon.is_some()),
            ("alpha", self.alpha.is_some()),
            ("beta", self.beta.is_some()),
        ]
    }
}

impl IntegrationArgs {
    /// Returns the merged config plus whether a seed was set explicitly
    /// (flag or config file) rather than defaulted.
    fn resolve(&self, file: &FileConfig) -> (IntegrationConfig, bool) {
        let mut cfg = IntegrationConfig::default();
        let mut seed_explicit = false;
        if let Some(s) = &file.integration {
            if let Some(v) = s.t_end {
                cfg.t_end = v;
            }
            if let Some(v) = s.step {
                cfg.step = v;
            }
            if let Some(v) = s.blowup_threshold {
                cfg.blowup_threshold = v;
            }
            if let Some(v) = s.seed {
                cfg.seed = v;
                seed_explicit = true;
            }
        }
        if let Some(v) = self.t_end {
            cfg.t_end = v;
        }
        if let Some(v) = self.step {
            cfg.step = v;
        }
        if let Some(v) = self.blowup_threshold {
            cfg.blowup_threshold = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
            seed_explicit = true;
        }
        (cfg, seed_explicit)
    }
}

impl MappingArgs {
    fn resolve(&self, file: &FileConfig) -> PremiumMapping {
        let mut m = PremiumMapping::default();
        if let Some(s) = &file.mapping {
            if let Some(v) = s.base {
                m.base = v;
            }
            if let Some(v) = s.scale {
                m.scale = v;
            }
            if let Some(v) = s.claim_base {
                m.claim_base = v;
            }
            if let Some(v) = s.claim_scale {
                m.claim_scale = v;
            }
            m.exposure_weights = s.exposure_weights.clone();
        }
        if let Some(v) = self.base {
            m.base = v;
        }
        if let Some(v) = self.scale {
            m.scale = v;
        }
        if let Some(v) = self.claim_base {
            m.claim_base = v;
        }
        if let Some(v) = self.claim_scale {
            m.claim_scale = v;
        }
        m
    }
}

fn parse_f64_list(s: &str, flag: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .map(|t| {
            t.parse()
                .map_err(|_| validation(format!("bad number {t:?} in --{flag}")))
        })
        .collect()
}

fn parse_usize_list(s: &str, flag: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .map(|t| {
            t.parse()
                .map_err(|_| validation(format!("bad count {t:?} in --{flag}")))
        })
        .collect()
}

/// Parses argv and runs one subcommand, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };
    let result = match cli.command {
        Command::Equilibria(args) => cmd_equilibria(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Portrait(args) => cmd_portrait(args),
        Command::Regime(args) => cmd_regime(args),
        Command::Game(args) => cmd_game(args),
        Command::Regress(args) => cmd_regress(args),
        Command::Analytic(args) => cmd_analytic(args),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn planar_points_doc(model: &ValidatedModel, tol: f64) -> CliResult<Vec<serde_json::Value>> {
    let pts = enumerate_equilibria(model, tol)?;
    let mut out = Vec::with_capacity(pts.len());
    for pt in &pts {
        let rep = stability_report(model, pt)?;
        out.push(json!({
            "coords": pt.coords,
            "residual": pt.residual,
            "kind": pt.kind.to_string(),
            "is_true_fixed_point": pt.is_true_fixed_point,
            "classification": rep.class.to_string(),
            "eigenvalues": rep.eigen.values.iter().map(|v| [v.re, v.im]).collect::<Vec<_>>(),
            "eigen_method": rep.eigen.method.to_string(),
            "jacobian": rep.jacobian.rows(),
            "notes": rep.notes,
        }));
    }
    Ok(out)
}

fn cmd_equilibria(args: EquilibriaArgs) -> CliResult<()> {
    let file = load_file_config(&args.model.config)?;
    let model = args.model.resolve(&file)?;
    let doc = match model.spec() {
        ModelSpec::NPlayer(p) => {
            let pt = interior_equilibrium_nplayer(p, args.tol)?;
            // The interior point lives in per-capacity shares, so the
            // certificate checks run on the matching rescaled system.
            let nd_model = ModelSpec::NPlayer(p.nondimensionalized()).validate()?;
            let jac = jacobian(&nd_model, &pt.coords)?;
            json!({
                "model": model.spec().variant_name(),
                "analyzed_as": "nondim",
                "points": [{
                    "coords": pt.coords,
                    "residual": pt.residual,
                    "kind": pt.kind.to_string(),
                    "is_true_fixed_point": pt.is_true_fixed_point,
                    "stability_verdict": is_stable_matrix(&jac),
                    "eigen_method": "certificate",
                    "cooperative_sign_structure": cooperative_sign_check(&jac),
                    "dominance_witness": negative_diagonal_dominance(&jac),
                }],
            })
        }
        ModelSpec::Competitive2(p) | ModelSpec::Cooperative2(p) => {
            let mode = match model.spec() {
                ModelSpec::Cooperative2(_) => InteractionMode::Cooperative,
                _ => InteractionMode::Competitive,
            };
            let (nd, scales) = nondimensionalize(p, mode)?;
            let regime = regime_case(&nd).to_string();
            let nd_model = ModelSpec::Nondim(nd).validate()?;
            let points = planar_points_doc(&nd_model, args.tol)?;
            json!({
                "model": model.spec().variant_name(),
                "analyzed_as": "nondim",
                "scales": scales,
                "regime_case": regime,
                "points": points,
            })
        }
        ModelSpec::Nondim(p) => {
            let regime = regime_case(p).to_string();
            let points = planar_points_doc(&model, args.tol)?;
            json!({
                "model": model.spec().variant_name(),
                "regime_case": regime,
                "points": points,
            })
        }
        _ => {
            let points = planar_points_doc(&model, args.tol)?;
            json!({
                "model": model.spec().variant_name(),
                "points": points,
            })
        }
    };
    emit(&args.out, &to_pretty(&doc))
}

fn cmd_simulate(args: SimulateArgs) -> CliResult<()> {
    let file = load_file_config(&args.model.config)?;
    let model = args.model.resolve(&file)?;
    let (cfg, _) = args.integration.resolve(&file);
    let initial = parse_f64_list(&args.initial, "initial")?;
    let traj = integrate(&model, &initial, &cfg)?;
    match traj.status {
        TrajectoryStatus::Blowup { t } => {
            eprintln!("status: blow-up at t = {}", fmt_sig(t, args.digits));
        }
        TrajectoryStatus::Invalid => {
            eprintln!("status: initial state beyond the blow-up threshold");
        }
        TrajectoryStatus::Completed => {}
    }
    emit(&args.out, &traj.to_csv(args.digits))
}

fn cmd_portrait(args: PortraitArgs) -> CliResult<()> {
    let file = load_file_config(&args.model.config)?;
    let model = args.model.resolve(&file)?;
    let (cfg, seed_explicit) = args.integration.resolve(&file);
    if args.jitter > 0.0 && !seed_explicit {
        return Err(validation(
            "--jitter is randomized and needs an explicit --seed \
             (or [integration] seed in the config file)",
        ));
    }
    let grid = PortraitGrid::Lattice {
        mins: parse_f64_list(&args.mins, "mins")?,
        maxs: parse_f64_list(&args.maxs, "maxs")?,
        counts: parse_usize_list(&args.counts, "counts")?,
        jitter: args.jitter,
    };
    // Claim the output directory before the sweep so a bad path fails fast.
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", args.out_dir.display())))?;
    let trajectories = phase_portrait(&model, &grid, &cfg)?;
    // Candidate rest points for attractor labeling; families without a
    // catalogue (or with a singular interaction) get none.
    let candidates = match model.spec() {
        ModelSpec::Nondim(_) | ModelSpec::PredatorPrey(_) => {
            enumerate_equilibria(&model, DEFAULT_RESIDUAL_TOL).unwrap_or_default()
        }
        _ => Vec::new(),
    };
    let mut index = Vec::with_capacity(trajectories.len());
    for (i, traj) in trajectories.iter().enumerate() {
        let name = format!("traj_{i:03}.csv");
        write_file(&args.out_dir.join(&name), &traj.to_csv(args.digits))?;
        index.push(json!({
            "initial": traj.state(0),
            "file": name,
            "status": traj.status,
            "attractor": detect_attractor(traj, &candidates, args.tol),
        }));
    }
    let doc = json!({
        "candidates": candidates.iter().map(|c| &c.coords).collect::<Vec<_>>(),
        "trajectories": index,
    });
    write_file(&args.out_dir.join("index.json"), &to_pretty(&doc))?;
    println!(
        "wrote {} trajectories and index.json to {}",
        trajectories.len(),
        args.out_dir.display()
    );
    Ok(())
}

fn cmd_regime(args: RegimeArgs) -> CliResult<()> {
    let mode = match args.mode.as_str() {
        "competitive" => InteractionMode::Competitive,
        "cooperative" => InteractionMode::Cooperative,
        other => {
            return Err(validation(format!(
                "unknown mode {other:?}; expected competitive or cooperative"
            )))
        }
    };
    let params = NondimParams {
        a12: args.a12,
        a21: args.a21,
        rho: args.rho,
        mode,
    };
    ModelSpec::Nondim(params.clone()).validate()?;
    println!("{}", regime_case(&params));
    Ok(())
}

fn cmd_game(args: GameArgs) -> CliResult<()> {
    let file = load_file_config(&args.model.config)?;
    let model = args.model.resolve(&file)?;
    let params = match model.spec() {
        ModelSpec::NPlayer(p) => p.clone(),
        other => {
            return Err(validation(format!(
                "the game subcommand needs an nplayer model, found {:?}; \
                 use a config file with [model] variant = \"nplayer\"",
                other.variant_name()
            )))
        }
    };
    let mapping = args.mapping.resolve(&file);
    let mut result = nash_premiums(&params, &mapping)?;
    if let Some(path) = &args.market {
        let text = read_file(path)?;
        let (market, _) = parse_market_premiums(&text)?;
        result = compare_to_market(result, &market)?;
    }
    let mut doc = json!({
        "nash_state": result.nash_state,
        "nash_premiums": result.nash_premiums,
        "claim_exposures": result.claim_exposures,
        "market_premiums": result.market_premiums,
        "below_market_players": result.below_market_players(),
    });
    if result.n() >= 2 {
        let assoc = exposure_premium_association(&result)?;
        doc["max_premium_player"] = json!(assoc.max_premium_player);
        doc["max_exposure_player"] = json!(assoc.max_exposure_player);
        doc["min_premium_player"] = json!(assoc.min_premium_player);
        doc["spearman"] = json!(assoc.spearman);
        doc["spearman_sign"] = json!(assoc.spearman_sign);
        doc["note"] = json!(assoc.note);
    }
    emit(&args.out, &to_pretty(&doc))
}

fn cmd_regress(args: RegressArgs) -> CliResult<()> {
    let text = read_file(&args.input)?;
    let series = load_series(&text)?;
    let report = premium_claim_report(&series)?;
    let rows: Vec<_> = (0..series.len())
        .map(|i| {
            json!({
                "year": series.years[i],
                "premium": series.premiums[i],
                "claim": series.claims[i],
            })
        })
        .collect();
    let doc = json!({
        "premium_regression": report.premium_regression,
        "claim_regression": report.claim_regression,
        "correlation": report.correlation,
        "correlation_sign": report.correlation_sign,
        "rows": rows,
    });
    if let Some(plot) = &args.plot {
        write_file(plot, &plot_csv(&series, args.digits))?;
    }
    emit(&args.out, &to_pretty(&doc))
}

fn cmd_analytic(args: AnalyticArgs) -> CliResult<()> {
    if !(args.step.is_finite() && args.step > 0.0 && args.t_end >= args.step) {
        return Err(validation(format!(
            "sampling needs 0 < step <= t_end, got step = {}, t_end = {}",
            args.step, args.t_end
        )));
    }
    let req = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| {
            validation(format!("--{flag} is required for --curve {}", args.curve))
        })
    };
    let n = (args.t_end / args.step).round() as usize;
    let sample: Box<dyn Fn(f64) -> crate::error::Result<f64>> = match args.curve.as_str() {
        "logistic" => {
            let n0 = req(args.n0, "N0")?;
            let k = req(args.k, "K")?;
            let rho = args.rho;
            logistic_solution(n0, k, rho, 0.0)?;
            Box::new(move |t| logistic_solution(n0, k, rho, t))
        }
        "growth" => {
            let curve = ExponentialCurve::growth(req(args.amplitude, "amplitude")?, req(args.rate, "rate")?)?;
            eprintln!(
                "guideline: the curve reaches amplitude*e = {} at t = 1/rate = {}",
                fmt_sig(curve.amplitude * std::f64::consts::E, args.digits),
                fmt_sig(1.0 / curve.rate, args.digits)
            );
            Box::new(move |t| zero_interaction_risk(&curve, t))
        }
        "decay" => {
            let curve = ExponentialCurve::decay(req(args.amplitude, "amplitude")?, req(args.rate, "rate")?)?;
            let threshold = threshold_constant(curve.amplitude)?;
            eprintln!(
                "guideline: the curve crosses amplitude/e = {} at t = 1/rate = {}",
                fmt_sig(threshold, args.digits),
                fmt_sig(1.0 / curve.rate, args.digits)
            );
            Box::new(move |t| zero_interaction_return(&curve, t))
        }
        other => {
            return Err(validation(format!(
                "unknown curve {other:?}; expected logistic, growth, or decay"
            )))
        }
    };
    let mut out = String::from("t,value\n");
    for i in 0..=n {
        let t = i as f64 * args.step;
        let v = sample(t)?;
        out.push_str(&fmt_sig(t, args.digits));
        out.push(',');
        out.push_str(&fmt_sig(v, args.digits));
        out.push('\n');
    }
    emit(&args.out, &out)
}
