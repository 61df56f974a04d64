use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quasispec_cli::commands;
use quasispec_cli::config::{ExperimentConfig, Overrides};
use quasispec_cli::presets::preset;
use quasispec_cli::CliError;

#[derive(Parser)]
#[command(name = "quasispec", version, about = "Fourier-Galerkin experiments for quasilinear hyperbolic systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one configuration and write monitors, spectrum and snapshot.
    Run(Common),
    /// Convergence study against a fine reference.
    Converge(Common),
    /// Check the structural assumptions of a system.
    CheckSystem {
        /// Built-in system name or path to a system file.
        #[arg(long)]
        system: String,
    },
    /// Growth of the commutator probe J_N.
    ProbeJn(Common),
    /// Print the shipped presets.
    ListPresets,
}

#[derive(Args, Default)]
struct Common {
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Worker threads for `converge`.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "T")]
    t: Option<f64>,
    /// Half-resolution: 2M grid points per axis.
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long = "M-ref")]
    m_ref: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    scheme: Option<Vec<String>>,
    #[arg(long)]
    system: Option<String>,
    #[arg(long = "N-list", value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
}

fn load(common: &Common, command: &str) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match (&common.config, &common.preset) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Some(name)) => {
            let cfg = preset(name)?;
            if let Some(c) = &cfg.command {
                if c != command {
                    return Err(CliError::Config(format!("preset `{name}` is for `{c}`, not `{command}`")));
                }
            }
            cfg
        }
        (None, None) => ExperimentConfig::default(),
    };
    cfg.apply(&Overrides {
        system: common.system.clone(),
        scheme: common.scheme.clone(),
        m: common.m,
        m_ref: common.m_ref,
        dt: common.dt,
        t: common.t,
        out: common.out.clone(),
        n_list: common.n_list.clone(),
        p: common.p,
        q: common.q,
    });
    for w in cfg.validate()? {
        eprintln!("warning: {w}");
    }
    Ok(cfg)
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(c) => {
            let cfg = load(&c, "run")?;
            let (_, text) = commands::cmd_run(&cfg)?;
            print!("{text}");
        }
        Command::Converge(c) => {
            let cfg = load(&c, "converge")?;
            let (_, table) = commands::cmd_converge(&cfg, c.jobs)?;
            print!("{table}");
        }
        Command::CheckSystem { system } => {
            let sys = commands::resolve_system(&system, None)?;
            let (text, ok) = commands::cmd_check_system(&sys)?;
            print!("{text}");
            if !ok {
                return Err(CliError::CheckFailed(format!("system `{}` violates an assumption", sys.name())));
            }
        }
        Command::ProbeJn(c) => {
            let cfg = load(&c, "probe-jn")?;
            let (_, _, text) = commands::cmd_probe_jn(&cfg)?;
            print!("{text}");
        }
        Command::ListPresets => print!("{}", commands::list_presets()?),
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
