//! Command-line front end: analyze a mapping law, simulate its action evolution and verify
//! the factorization of the observed process.

pub mod config;
pub mod render;
pub mod report;

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use actevo::sim::{self, SimConfig, Simulator};
use actevo::{example, Analysis, MappingLaw};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use report::{AnalysisReport, Mode, SimulationSection};

/// Sizes at which the mixing check is evaluated; only the largest one can fail.
pub const MIXING_SIZES: [usize; 3] = [5, 20, 50];

/// Steps shown in the path excerpt.
const EXCERPT: i64 = 10;

pub mod exit {
    pub const OK: u8 = 0;
    pub const STATISTICAL: u8 = 1;
    pub const STRUCTURAL: u8 = 2;
    pub const INPUT: u8 = 3;
}

#[derive(Debug, Parser)]
#[command(name = "actevo", version, about = "Exact limit structure and simulation of random compositions of finite maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Semigroup, kernel, limits and cliques of a law.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Analysis plus the simulation checks for one evolution.
    Simulate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Simulation checks plus the mixing check and, for the built-in law, the
    /// one-particle event identities.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// `verify` on the built-in five-point law.
    Example {
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Mapping-law JSON file.
    #[arg(long)]
    pub law: Option<PathBuf>,
    /// Run config JSON file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct SimArgs {
    /// Base seed, default 42.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Independent paths, default 10000.
    #[arg(long)]
    pub replications: Option<usize>,
    /// Significance level of the chi-square checks, default 0.001.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// First simulated time, default -999.
    #[arg(long, allow_hyphen_values = true)]
    pub k_min: Option<i64>,
    /// Last simulated time, default 0.
    #[arg(long, allow_hyphen_values = true)]
    pub k_max: Option<i64>,
    /// Observation time, default `k_max`.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    /// Width of the noise window, default 3.
    #[arg(long)]
    pub window: Option<usize>,
}

#[derive(Debug, Args, Default)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Leave the timestamp out, for byte-identical reruns.
    #[arg(long)]
    pub no_timestamp: bool,
    /// JSON output (the default).
    #[arg(long, conflicts_with = "text")]
    pub json: bool,
    /// Indented plain-text output.
    #[arg(long)]
    pub text: bool,
}

impl OutputArgs {
    pub fn render(&self, report: &AnalysisReport) -> Result<String> {
        Ok(if self.text {
            render::to_text(&serde_json::to_value(report)?)
        } else {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s
        })
    }
}

impl Cli {
    pub fn output(&self) -> &OutputArgs {
        match &self.command {
            Command::Analyze { output, .. }
            | Command::Simulate { output, .. }
            | Command::Verify { output, .. }
            | Command::Example { output, .. } => output,
        }
    }
}

fn load(input: &InputArgs) -> Result<(MappingLaw, RunConfig)> {
    let cfg = match &input.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let path = input
        .law
        .clone()
        .or_else(|| cfg.law_file.clone())
        .ok_or_else(|| actevo::Error::Input("no law given: pass --law or set law_file in --config".into()))?;
    let text = std::fs::read_to_string(&path)
        .with_context(|| format!("cannot read law file {}", path.display()))
        .map_err(|e| actevo::Error::Input(format!("{e:#}")))?;
    let law = MappingLaw::from_json(&text)?;
    Ok((law, cfg))
}

fn sim_config(cfg: &RunConfig, args: &SimArgs) -> Result<SimConfig> {
    let d = SimConfig::default();
    let c = SimConfig {
        replications: args.replications.or(cfg.replications).unwrap_or(d.replications),
        seed: args.seed.or(cfg.seed).unwrap_or(d.seed),
        alpha: args.alpha.or(cfg.alpha).unwrap_or(d.alpha),
        k_min: args.k_min.or(cfg.k_min).unwrap_or(d.k_min),
        k_max: args.k_max.or(cfg.k_max).unwrap_or(d.k_max),
        k: args.k.or(cfg.k),
        window: args.window.or(cfg.window).unwrap_or(d.window),
    };
    c.validate()?;
    Ok(c)
}

fn simulate(an: &Analysis, cfg: &RunConfig, sc: &SimConfig, full: bool) -> Result<SimulationSection> {
    let (sim, mut verification, lambda_w, family) = match cfg.mode {
        Mode::Stationary => {
            let lw = config::lambda_w(an, cfg.lambda_w.as_ref())?;
            let rep = sim::verify_third_noise(an, &lw, sc)?;
            (Simulator::stationary(an, &lw)?, rep, Some(report::tuple_weights(&lw)), None)
        }
        Mode::Nonstationary => {
            let entries = cfg.family.as_deref().ok_or_else(|| {
                actevo::Error::Input("nonstationary mode needs a family in the config".into())
            })?;
            let fam = config::family(an, entries)?;
            let rep = sim::verify_nonstationary(an, &fam, sc)?;
            (Simulator::nonstationary(an, &fam)?, rep, None, Some(report::family_entries(&fam)))
        }
    };
    if full {
        verification.extend(sim::mixing_lemma(an, sc, &MIXING_SIZES)?);
        if an.law == example::law() {
            verification.extend(sim::verify_mono_projection(an, sc)?);
        }
    }
    let k = sc.time();
    let path = sim.sample(sc.k_min, sc.k_max, sc.seed, 0)?;
    let path_excerpt = ((k - EXCERPT + 1).max(sc.k_min)..=k)
        .filter_map(|j| path.step(j))
        .map(|st| report::step_echo(an, st))
        .collect();
    Ok(SimulationSection {
        mode: cfg.mode,
        config: sc.clone(),
        lambda_w,
        family,
        path_excerpt,
        exact_failures: verification.exact_failures(),
        statistical_failures: verification.statistical_failures(),
        verification,
    })
}

fn with_simulation(
    law: &MappingLaw,
    cfg: &RunConfig,
    args: &SimArgs,
    full: bool,
) -> Result<AnalysisReport> {
    let sc = sim_config(cfg, args)?;
    let an = Analysis::run(law)?;
    let lw = config::lambda_w(&an, cfg.lambda_w.as_ref())?;
    let mut report = AnalysisReport::build(&an, &lw)?;
    report.seed = Some(sc.seed);
    report.simulation = Some(simulate(&an, cfg, &sc, full)?);
    Ok(report)
}

/// Runs a command and returns its report without the timestamp.
pub fn execute(cli: &Cli) -> Result<AnalysisReport> {
    match &cli.command {
        Command::Analyze { input, .. } => {
            let (law, cfg) = load(input)?;
            let an = Analysis::run(&law)?;
            let lw = config::lambda_w(&an, cfg.lambda_w.as_ref())?;
            Ok(AnalysisReport::build(&an, &lw)?)
        }
        Command::Simulate { input, sim, .. } => {
            let (law, cfg) = load(input)?;
            with_simulation(&law, &cfg, sim, false)
        }
        Command::Verify { input, sim, .. } => {
            let (law, cfg) = load(input)?;
            with_simulation(&law, &cfg, sim, true)
        }
        Command::Example { sim, .. } => {
            let cfg = RunConfig {
                lambda_w: Some(report::Weights::from([(example::base_tuple().to_string(), "1".into())])),
                ..RunConfig::default()
            };
            with_simulation(&example::law(), &cfg, sim, true)
        }
    }
}

pub fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Exit status of a completed run: exact failures outrank statistical ones.
pub fn status(report: &AnalysisReport) -> u8 {
    if report.exact_failures() > 0 {
        exit::STRUCTURAL
    } else if report.statistical_failures() > 0 {
        exit::STATISTICAL
    } else {
        exit::OK
    }
}

/// Exit status for an error: internal inconsistencies are structural, everything else is
/// treated as bad input.
pub fn error_status(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<actevo::Error>() {
        Some(actevo::Error::Structural(_)) => exit::STRUCTURAL,
        _ => exit::INPUT,
    }
}
