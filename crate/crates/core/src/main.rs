//! Command line harness: single runs, sweeps, summaries and config
//! validation.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use wsnsim::experiment::{load_config, run_experiment, summarize, Model};

#[derive(Parser)]
#[command(name = "wsnsim", version, about = "Chain-routed WSN lifetime simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single cell (one model, one seed) and write its outputs.
    Run {
        /// Config file (TOML); built-in defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Model override: chain1|chain2|pegasis|epegasis|chiron.
        #[arg(long)]
        model: Option<String>,
        /// Approach override for chain models: one-hop|multi-hop.
        #[arg(long)]
        approach: Option<String>,
        #[arg(long)]
        sectors: Option<u32>,
        #[arg(long)]
        tracks: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory override.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the full sweep grid from the config file.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Run cells concurrently (outputs stay deterministic).
        #[arg(long)]
        parallel: bool,
    },
    /// Summarize completed cells: medians, delay table, claim verdicts.
    Summarize {
        /// Directory containing manifest.json and cells/.
        dir: PathBuf,
        /// Emit machine-readable JSON instead of the text table.
        #[arg(long)]
        json: bool,
    },
    /// Parse and validate a config file, printing the resolved values.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    match cli.command {
        Command::Run {
            config,
            model,
            approach,
            sectors,
            tracks,
            seed,
            output,
        } => {
            let (mut spec, base) = load_config(config.as_deref())?;
            if let Some(m) = model {
                spec.models = vec![Model::parse(&m)?];
            }
            spec.models.truncate(1);
            if let Some(a) = approach {
                let model = spec.models[0];
                if !model.needs_approach() {
                    return Err(Box::new(wsnsim::ConfigError::ApproachNotApplicable {
                        scheme: model.label().to_string(),
                    }));
                }
                spec.approaches = vec![experiment_parse_approach(&a)?];
            }
            spec.approaches.truncate(1);
            if let Some(ns) = sectors {
                spec.sector_counts = vec![ns];
            }
            spec.sector_counts.truncate(1);
            if let Some(nt) = tracks {
                spec.track_counts = vec![nt];
            }
            spec.track_counts.truncate(1);
            if let Some(s) = seed {
                spec.seeds = vec![s];
            }
            spec.seeds.truncate(1);
            if let Some(out) = output {
                spec.output_dir = out;
            }
            spec.validate(&base)?;
            let manifest = run_experiment(&spec, &base)?;
            let cell = &manifest.cells[0];
            println!("cell {}", cell.name);
            match cell.fnd_round {
                Some(f) => println!("fnd_round {f}"),
                None => println!("fnd_round undefined (round budget exhausted)"),
            }
            println!("outputs {}", spec.output_dir.display());
            Ok(())
        }
        Command::Sweep {
            config,
            output,
            parallel,
        } => {
            let (mut spec, base) = load_config(config.as_deref())?;
            if let Some(out) = output {
                spec.output_dir = out;
            }
            spec.parallel = spec.parallel || parallel;
            let manifest = run_experiment(&spec, &base)?;
            println!(
                "{} cells complete under {}",
                manifest.cells.len(),
                spec.output_dir.display()
            );
            Ok(())
        }
        Command::Summarize { dir, json } => {
            let table = summarize(&dir)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&table)?);
            } else {
                print!("{}", table.render_text());
            }
            Ok(())
        }
        Command::Validate { config } => {
            let (spec, cfg) = load_config(config.as_deref())?;
            let warnings = cfg.validate()?;
            println!("config ok");
            println!(
                "network: {} rfds, R={} m, r={} m, theta={} deg ({} regions)",
                cfg.rfd_count,
                cfg.partition.radius_m(),
                cfg.partition.track_width_m(),
                cfg.partition.sector_angle_rad().to_degrees(),
                cfg.partition.region_count()
            );
            println!(
                "sweep: {} cells ({} models x seeds/axes)",
                spec.cells().len(),
                spec.models.len()
            );
            for w in warnings {
                println!("warning: {w}");
            }
            Ok(())
        }
    }
}

fn experiment_parse_approach(s: &str) -> Result<wsnsim::Approach, wsnsim::ConfigError> {
    match s {
        "one-hop" | "onehop" => Ok(wsnsim::Approach::OneHop),
        "multi-hop" | "multihop" => Ok(wsnsim::Approach::MultiHop),
        other => Err(wsnsim::ConfigError::Invalid {
            key: "--approach".into(),
            message: format!("unknown approach '{other}'"),
        }),
    }
}
