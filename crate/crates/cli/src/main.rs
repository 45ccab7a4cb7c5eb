use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use catcavity::config::{ConfigFile, Section};
use catcavity::figures::{compute, resolve, FigureId};
use catcavity::oracle_dump::{dump, DumpSettings};
use catcavity::validate::{run, Level};

#[derive(Parser)]
#[command(name = "catcavity", version, about = "Atom-cavity revival curves for Schrödinger-cat fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Overrides {
    /// Parameter preset (benson97, brune96).
    #[arg(long)]
    preset: Option<String>,
    /// Mean photon number of the prepared field.
    #[arg(long)]
    nbar: Option<f64>,
    /// Relative phase of the cat superposition.
    #[arg(long)]
    phi: Option<f64>,
    /// Thermal photon number of the bath (required here or in the config).
    #[arg(long)]
    nb: Option<f64>,
    /// Config file with `[fig1]`-style sections.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the CSV data behind a figure.
    Figure {
        id: FigureId,
        #[command(flatten)]
        common: Overrides,
        #[arg(long)]
        gt_max: Option<f64>,
        #[arg(long)]
        gt_step: Option<f64>,
        /// Emit time in seconds instead of gt.
        #[arg(long)]
        si_time: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the validation suite.
    Validate {
        #[arg(long, value_enum, default_value_t = Level::Fast)]
        level: Level,
    },
    /// Dump a master-equation trajectory to stdout.
    Oracle {
        #[command(flatten)]
        common: Overrides,
        /// Trajectory length in seconds.
        #[arg(long)]
        t_max: Option<f64>,
    },
}

fn merged(name: &str, common: &Overrides, extra: Section) -> Result<Section> {
    let file = match &common.config {
        Some(path) => ConfigFile::load(path)?.section(name),
        None => Section::default(),
    };
    Ok(file.overridden_by(&Section {
        preset: common.preset.clone(),
        nb: common.nb,
        nbar: common.nbar,
        phi: common.phi,
        ..extra
    }))
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Figure {
            id,
            common,
            gt_max,
            gt_step,
            si_time,
            out,
        } => {
            let section = merged(
                id.name(),
                &common,
                Section {
                    gt_max,
                    gt_step,
                    si_time: si_time.then_some(true),
                    out: out.map(|p| p.to_string_lossy().into_owned()),
                    ..Section::default()
                },
            )?;
            let dir = PathBuf::from(section.out.clone().unwrap_or_else(|| ".".into()));
            std::fs::create_dir_all(&dir)?;
            for table in compute(id, &resolve(id, &section)?)? {
                println!("{}", table.write_in(&dir)?.display());
            }
            Ok(true)
        }
        Command::Validate { level } => run(level),
        Command::Oracle { common, t_max } => {
            let section = merged(
                "oracle",
                &common,
                Section {
                    t_max,
                    ..Section::default()
                },
            )?;
            dump(&DumpSettings::resolve(&section)?, std::io::stdout().lock())?;
            Ok(true)
        }
    }
}
