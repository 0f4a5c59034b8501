use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::{Arc, OnceLock};

use catconv::converter::Dims;
use catconv::fock::random::split_seeds;
use catconv::{Error, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

mod config;
mod output;
mod tasks;

use config::{preset, RunConfig, PRESETS};
use output::{FileRecord, OutputDir};
use tasks::Context;

#[derive(Parser)]
#[command(name = "catconv", version, about = "DV→CV qubit conversion simulator")]
struct Cli {
    /// TOML run configuration; overrides --preset.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value = "table-s1")]
    preset: String,
    /// Output directory (default: the config's out_dir).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Mode truncations A,B,C,D.
    #[arg(long, global = true)]
    dims: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    Convert,
    Sweep,
    Bound,
    TomoState,
    TomoProcess,
    Wigner,
    Sample,
    /// Run the task list from the configuration.
    Run,
    PresetList,
    TaskList,
    /// Print a preset as TOML, a starting point for a config file.
    PresetShow { name: String },
}

impl Command {
    fn task(&self) -> Option<&'static str> {
        Some(match self {
            Command::Convert => "convert",
            Command::Sweep => "sweep",
            Command::Bound => "bound",
            Command::TomoState => "tomo-state",
            Command::TomoProcess => "tomo-process",
            Command::Wigner => "wigner",
            Command::Sample => "sample",
            _ => return None,
        })
    }
}

#[derive(Serialize)]
struct TaskStatus {
    name: String,
    seed: u64,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    files: Vec<FileRecord>,
}

#[derive(Serialize)]
struct Manifest {
    tool: &'static str,
    cli_version: &'static str,
    core_version: &'static str,
    seed: u64,
    succeeded: bool,
    tasks: Vec<TaskStatus>,
    /// Effective configuration, minus the output directory.
    config: serde_json::Value,
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            RunConfig::from_toml(&text)?
        }
        None => preset(&cli.preset)?,
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(d) = &cli.dims {
        cfg = cfg.with_dims(Dims::parse(d)?);
    }
    if let Some(o) = &cli.out {
        cfg.out_dir = o.clone();
    }
    if let Some(t) = cli.command.task() {
        cfg.tasks = vec![t.to_string()];
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cfg: RunConfig) -> Result<bool> {
    let mut out = OutputDir::create(&cfg.out_dir)?;
    // One master generator; each registered task gets the draw at its
    // registry position, so a task's seed does not depend on what else runs.
    let registry = tasks::tasks();
    let seeds = split_seeds(cfg.seed, registry.len());
    let resource = Arc::new(OnceLock::new());
    let mut statuses = Vec::new();
    let mut ok = true;
    for name in &cfg.tasks {
        let pos = registry.iter().position(|t| t.name() == name).expect("validated task");
        let seed = seeds[pos];
        if !ok {
            statuses.push(TaskStatus { name: name.clone(), seed, status: "skipped", error: None, files: vec![] });
            continue;
        }
        let ctx = Context::new(cfg.clone(), seed, resource.clone());
        let mut task_out = OutputDir::create(out.root())?;
        let res = registry[pos].run(&ctx, &mut task_out);
        let files = task_out.files().to_vec();
        match res {
            Ok(()) => statuses.push(TaskStatus { name: name.clone(), seed, status: "ok", error: None, files }),
            Err(e) => {
                eprintln!("task {name} failed: {e}");
                out.write_unrecorded("FAILED", format!("{name}: {e}\n").as_bytes())?;
                statuses.push(TaskStatus { name: name.clone(), seed, status: "failed", error: Some(e.to_string()), files });
                ok = false;
            }
        }
    }
    let mut config = serde_json::to_value(&cfg).map_err(|e| Error::Format(e.to_string()))?;
    if let Some(m) = config.as_object_mut() {
        m.remove("out_dir");
    }
    let manifest = Manifest {
        tool: "catconv",
        cli_version: env!("CARGO_PKG_VERSION"),
        core_version: catconv::VERSION,
        seed: cfg.seed,
        succeeded: ok,
        tasks: statuses,
        config,
    };
    out.write_json("manifest.json", &manifest)?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::PresetList => {
            for (name, about) in PRESETS {
                println!("{name:<10} {about}");
            }
            return ExitCode::SUCCESS;
        }
        Command::TaskList => {
            for t in tasks::tasks() {
                println!("{:<13} {}", t.name(), t.describe());
            }
            return ExitCode::SUCCESS;
        }
        Command::PresetShow { name } => {
            return match preset(name).and_then(|c| c.to_toml()) {
                Ok(t) => {
                    print!("{t}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            };
        }
        _ => {}
    }
    let cfg = match load_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let dir = cfg.out_dir.clone();
    match execute(cfg) {
        Ok(true) => {
            println!("wrote {}", dir.display());
            ExitCode::SUCCESS
        }
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
