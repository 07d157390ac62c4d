use clap::{Parser, Subcommand};
use fpx_cli::commands::{
    cmd_abel, cmd_catalog, cmd_core, cmd_embed, cmd_lowindex, cmd_parse, cmd_quotients,
    cmd_screen, cmd_subgroup_pres, cmd_tc,
};
use fpx_cli::config::{parse_duration, parse_strategy, OutputFormat, RunConfig};
use fpx_cli::pipeline::{cmd_reproduce, ReproInputs};
use fpx_cli::reports::Envelope;
use fpx_cli::CliError;
use serde::Serialize;
use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fpx",
    about = "Computations with finitely presented groups: coset enumeration, \
             low-index subgroups, subgroup presentations, abelianization, and \
             permutation group analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Coset limit for enumerations.
    #[arg(long, global = true)]
    max_cosets: Option<usize>,
    /// Index bound for low-index searches.
    #[arg(long, global = true)]
    max_index: Option<usize>,
    /// Worker threads for the low-index search.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Enumeration strategy: hlt or felsch.
    #[arg(long, global = true)]
    strategy: Option<String>,
    /// Wall-clock budget, e.g. 90s, 30m, 12h.
    #[arg(long, global = true)]
    time_budget: Option<String>,
    /// Search node budget.
    #[arg(long, global = true)]
    node_budget: Option<u64>,
    /// Checkpoint file for restartable low-index searches.
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    /// Output format: text or json.
    #[arg(long, global = true)]
    output: Option<String>,
    /// Result cache directory (FPX_CACHE_DIR is the fallback).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a presentation file and print its canonical form.
    Parse { file: PathBuf },
    /// Abelian invariants of a presentation.
    Abel { file: PathBuf },
    /// Coset enumeration over a subgroup (the whole group by default).
    Tc {
        file: PathBuf,
        /// Subgroup generator words; repeatable.
        #[arg(long = "subgroup", short = 's')]
        subgroup: Vec<String>,
    },
    /// All subgroup classes up to --max-index.
    Lowindex { file: PathBuf },
    /// Presentation of one low-index subgroup class.
    SubgroupPres {
        file: PathBuf,
        #[arg(long)]
        index: usize,
        /// 1-based class position within the index.
        #[arg(long, default_value_t = 1)]
        class: usize,
        #[arg(long)]
        simplify: bool,
    },
    /// Core of one subgroup class: quotient order and identification.
    Core {
        file: PathBuf,
        #[arg(long)]
        index: usize,
        #[arg(long, default_value_t = 1)]
        class: usize,
        /// Element enumeration bound for the quotient analysis.
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
    },
    /// Nonabelian simple groups of order below a bound.
    Catalog {
        #[arg(long, default_value_t = 20160)]
        bound: u64,
    },
    /// Divisibility screening of the catalog for a given rank.
    Screen {
        #[arg(long)]
        rank: u32,
    },
    /// Embedding exclusion checks for the rank-4 screening survivors.
    Embed {
        #[arg(long, default_value_t = 4)]
        rank: u32,
        #[arg(long, default_value = "data/atlas")]
        atlas_dir: PathBuf,
    },
    /// Nonabelian simple quotients up to a bound, with witnesses.
    Quotients {
        file: PathBuf,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value = "data/atlas")]
        atlas_dir: PathBuf,
    },
    /// Full reproduction pipeline for one rank, compared against the
    /// reference values file. Exit code 2 on any mismatch.
    Reproduce {
        #[arg(long)]
        rank: u32,
        #[arg(long, default_value = "data/presentations")]
        presentations_dir: PathBuf,
        #[arg(long, default_value = "data/atlas")]
        atlas_dir: PathBuf,
        #[arg(long, default_value = "expected/reference_values.json")]
        expected: PathBuf,
    },
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(v) = cli.max_cosets {
        cfg.max_cosets = v;
    }
    if let Some(v) = cli.max_index {
        cfg.max_index = v;
    }
    if let Some(v) = cli.threads {
        cfg.threads = v;
    }
    if let Some(s) = &cli.strategy {
        cfg.strategy = parse_strategy(s).map_err(CliError::Config)?;
    }
    if let Some(s) = &cli.time_budget {
        cfg.time_budget = Some(parse_duration(s).map_err(CliError::Config)?);
    }
    if let Some(v) = cli.node_budget {
        cfg.node_budget = v;
    }
    cfg.checkpoint_path = cli.checkpoint.clone();
    if let Some(s) = &cli.output {
        cfg.output_format = match s.as_str() {
            "json" => OutputFormat::Json,
            "text" => OutputFormat::Text,
            other => {
                return Err(CliError::Config(format!(
                    "unknown output format `{}` (text, json)",
                    other
                )))
            }
        };
    }
    cfg.cache_dir = cli.cache_dir.clone();
    cfg.validate()?;
    Ok(cfg)
}

fn emit<T: Serialize + Display>(
    cfg: &RunConfig,
    command: &str,
    report: &T,
) -> Result<(), CliError> {
    match cfg.output_format {
        OutputFormat::Json => println!("{}", Envelope::new(command, report).to_json()?),
        OutputFormat::Text => println!("{}", report),
    }
    Ok(())
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<ExitCode, CliError> {
    match &cli.command {
        Command::Parse { file } => emit(cfg, "parse", &cmd_parse(file)?)?,
        Command::Abel { file } => emit(cfg, "abel", &cmd_abel(file)?)?,
        Command::Tc { file, subgroup } => emit(cfg, "tc", &cmd_tc(file, subgroup, cfg)?)?,
        Command::Lowindex { file } => emit(cfg, "lowindex", &cmd_lowindex(file, cfg)?)?,
        Command::SubgroupPres {
            file,
            index,
            class,
            simplify,
        } => emit(
            cfg,
            "subgroup-pres",
            &cmd_subgroup_pres(file, *index, *class, *simplify, cfg)?,
        )?,
        Command::Core {
            file,
            index,
            class,
            bound,
        } => emit(cfg, "core", &cmd_core(file, *index, *class, *bound, cfg)?)?,
        Command::Catalog { bound } => emit(cfg, "catalog", &cmd_catalog(*bound)?)?,
        Command::Screen { rank } => emit(cfg, "screen", &cmd_screen(*rank)?)?,
        Command::Embed { rank, atlas_dir } => {
            emit(cfg, "embed", &cmd_embed(*rank, atlas_dir, cfg)?)?
        }
        Command::Quotients {
            file,
            bound,
            atlas_dir,
        } => emit(cfg, "quotients", &cmd_quotients(file, *bound, atlas_dir, cfg)?)?,
        Command::Reproduce {
            rank,
            presentations_dir,
            atlas_dir,
            expected,
        } => {
            let rep = cmd_reproduce(&ReproInputs {
                rank: *rank,
                presentations_dir,
                atlas_dir,
                expected_path: expected,
                cfg,
            })?;
            let pass = rep.all_pass();
            emit(cfg, "reproduce", &rep)?;
            if !pass {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(1);
        }
    };
    match run(&cli, &cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
