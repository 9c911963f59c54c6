use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use hsrchan::campaign::{self, Campaign, CaseSpec, Overrides, ScenarioFile};

/// Ray-tracing channel simulator for satellite-terrestrial railway links.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Trace one case or all cases and write the result files.
    Simulate(SimulateArgs),
    /// Rebuild statistics, fits and SIR files from existing traces.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Write the built-in scenario as an editable scene file.
    ExportScene {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Case id such as BS2TrUE-R.
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    case: Option<String>,
    /// Run all eight cases plus the interference reports.
    #[arg(long)]
    all: bool,
    /// Scene file; the built-in scenario when omitted.
    #[arg(long)]
    scene: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, env = "HSRCHAN_WORKERS")]
    workers: Option<usize>,
    #[arg(long)]
    cutoff_db: Option<f64>,
    #[arg(long)]
    tile_m2: Option<f64>,
}

fn simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let mut file = match &args.scene {
        Some(path) => ScenarioFile::load(path)?,
        None => ScenarioFile::builtin()?,
    };
    if args.workers == Some(0) {
        bail!("--workers must be at least 1");
    }
    Overrides { workers: args.workers, cutoff_db: args.cutoff_db, tile_m2: args.tile_m2 }.apply(&mut file.simulation);
    let campaign = Campaign::new(&file)?;
    let written = match &args.case {
        Some(id) => {
            let case: CaseSpec = id.parse()?;
            campaign::run_case_to_dir(&campaign, case, &args.out)?
        }
        None => campaign::run_all_to_dir(&campaign, &args.out)?,
    };
    for path in written {
        log::info!("wrote {}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Report { input } => {
            let written = campaign::regenerate(&input)?;
            log::info!("rewrote {} files", written.len());
            Ok(())
        }
        Command::ExportScene { out } => {
            let text = ScenarioFile::builtin()?.to_toml_string()?;
            std::fs::write(&out, text).with_context(|| format!("writing {}", out.display()))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<hsrchan::Error>() {
                Some(hsrchan::Error::UnknownCase(_)) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
