use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use locman::config::RunConfig;
use locman::cost::PagingMode;
use locman::ctrw::{estimate_t, summary_row, SimConfig, SUMMARY_HEADER};
use locman::figures;
use locman::mobility::SECONDS_PER_HOUR;
use locman::optimize::{joint_optimize, results_row, OptimizerOptions, Provider, RESULTS_HEADER};
use locman::protocol::{run_episode, Scenario, EPISODE_HEADER};
use locman::validate::{all_passed, require_nonempty, run_checks, Fault, ValidateOptions};
use locman::{Error, Result};

#[derive(Parser)]
#[command(name = "locman", version, about = "Location-area design for drifting mobile terminals")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// key = value run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path; stdout when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Random seed; overrides the configuration
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Source of the mean interval
    #[arg(long, global = true, value_enum)]
    provider: Option<ProviderArg>,
    /// How sequential paging rounds are charged
    #[arg(long, global = true, value_enum, default_value = "paper")]
    paging_mode: PagingArg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Galerkin interval against the asymptotic limits across k
    Fig5,
    /// Interval across k for several call rates and dwell variances
    Fig6,
    /// Optimal offset and radius across k
    Fig7,
    /// Cost saving ratio across k
    Fig8,
    /// Joint offset and radius optimisation for the configured parameters
    Optimize,
    /// Monte-Carlo mean interval, or a protocol episode with --episode
    Simulate {
        /// Run a protocol episode instead of exit-time trials
        #[arg(long)]
        episode: bool,
    },
    /// Run the oracle suite; exits 1 if any check fails
    Validate {
        /// Comma-separated check ids, e.g. 1,2,8.fig7
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        /// Monte-Carlo trials per drift point
        #[arg(long, default_value_t = 100_000)]
        n_trials: usize,
        /// Inject a known defect (negative control)
        #[arg(long, value_enum)]
        fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProviderArg {
    Pde,
    Galerkin,
    Asymptotic,
}

#[derive(Clone, Copy, ValueEnum)]
enum PagingArg {
    /// Each round is charged for its own cells
    #[value(name = "paper", alias = "per-round")]
    PerRound,
    /// Each round is charged for every cell paged so far
    Cumulative,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    FlipDrift,
    FlipSigma,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let provider = match cli.provider {
        Some(ProviderArg::Pde) => Provider::Pde,
        Some(ProviderArg::Galerkin) => Provider::Galerkin,
        Some(ProviderArg::Asymptotic) => Provider::Asymptotic,
        None => cfg.provider,
    };
    let mut opts = OptimizerOptions::new(provider);
    opts.paging_mode = match cli.paging_mode {
        PagingArg::PerRound => PagingMode::PerRound,
        PagingArg::Cumulative => PagingMode::Cumulative,
    };
    let ks = figures::k_grid();
    match cli.cmd {
        Cmd::Fig5 => {
            let mut base = cfg.mobility()?;
            if !cfg.is_set("Var_eta_s2") {
                base = base.with_var_time(0.1 / (SECONDS_PER_HOUR * SECONDS_PER_HOUR))?;
            }
            let mut costs = cfg.costs()?;
            if !cfg.is_set("lambda_per_hr") {
                costs = costs.with_lambda(0.2)?;
            }
            emit(&cli.out, &figures::fig5_csv(&figures::fig5(&base, &costs, cfg.r_km, &ks)?))?;
        }
        Cmd::Fig6 => emit(&cli.out, &figures::fig6_csv(&figures::fig6(&cfg.mobility()?, cfg.r_km, &ks)?))?,
        Cmd::Fig7 | Cmd::Fig8 => {
            let rows = figures::fig7_fig8(&cfg.mobility()?, &cfg.costs()?, &opts, &ks)?;
            emit(&cli.out, &figures::fig78_csv(&rows))?;
        }
        Cmd::Optimize => {
            let res = joint_optimize(&cfg.mobility()?, &cfg.costs()?, &opts)?;
            emit(&cli.out, &format!("{RESULTS_HEADER}\n{}\n", results_row(cfg.k, cfg.lambda_per_hr, &res)))?;
        }
        Cmd::Simulate { episode: false } => {
            let x = [cfg.x_km, 0.0];
            let sim = SimConfig::new(cfg.n_trials, cfg.seed);
            let est = estimate_t(x, cfg.r_km, cfg.lambda_per_hr, &cfg.mobility()?, &sim)?;
            emit(&cli.out, &format!("{SUMMARY_HEADER}\n{}\n", summary_row(cfg.k, x, cfg.r_km, &est)))?;
        }
        Cmd::Simulate { episode: true } => {
            let mut s = Scenario::new(cfg.mobility()?, cfg.costs()?, cfg.strategy, cfg.duration_hr, cfg.seed);
            // Episodes design areas with the asymptotic provider unless told otherwise.
            if cli.provider.is_some() || cfg.is_set("provider") {
                s.opts = opts;
            } else {
                s.opts.paging_mode = opts.paging_mode;
            }
            if cfg.is_set("R_km") {
                s.r_override = Some(cfg.r_km);
            }
            let m = run_episode(&s)?;
            emit(&cli.out, &format!("{EPISODE_HEADER}\n{}\n", m.csv_row()))?;
        }
        Cmd::Validate { only, n_trials, fault } => {
            let vopts = ValidateOptions {
                seed: cfg.seed,
                n_trials,
                fault: fault.map(|f| match f {
                    FaultArg::FlipDrift => Fault::FlipDriftSign,
                    FaultArg::FlipSigma => Fault::FlipSigmaSign,
                }),
                only,
                fig_provider: cli.provider.map(|_| provider).unwrap_or(Provider::Pde),
            };
            let reports = run_checks(&vopts);
            require_nonempty(&reports)?;
            let text: String = reports.iter().map(|r| format!("{r}\n")).collect();
            emit(&cli.out, &text)?;
            return Ok(all_passed(&reports));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::Config { .. }) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
