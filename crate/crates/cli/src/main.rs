//! `vertexq`: run identity checks from a JSON config or a named preset and write
//! report.json / report.csv.
//!
//! Exit status: 0 all checks pass, 1 some check failed, 2 configuration error,
//! 3 computational failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vertexq_core::config::PRESETS;
use vertexq_core::report::{ParamSnapshot, Report};
use vertexq_core::{ReportFile, RunConfig, VqError};

#[derive(Parser)]
#[command(name = "vertexq", version, about = "Residual checks for eight-vertex Q-operators")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the checks selected by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated check groups, overriding the config.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a named preset's config to the output directory and run it.
    Preset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(PRESETS))]
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Config(String),
    Compute(String),
    Io(String),
}

fn classify(e: VqError) -> Failure {
    match e {
        VqError::InvalidParams(_) | VqError::OddSites(_) => Failure::Config(e.to_string()),
        other => Failure::Compute(other.to_string()),
    }
}

fn io(what: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", what.display()))
}

fn write_reports(dir: &Path, rep: &ReportFile) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let json = dir.join("report.json");
    fs::write(&json, rep.to_json() + "\n").map_err(|e| io(&json, e))?;
    let csv = dir.join("report.csv");
    fs::write(&csv, rep.to_csv()).map_err(|e| io(&csv, e))
}

fn execute(cfg: &RunConfig, out: &Path) -> Result<ExitCode, Failure> {
    let rep = match vertexq_core::run(cfg) {
        Ok(r) => r,
        Err(e) => {
            let f = classify(e.clone());
            if let Failure::Compute(_) = f {
                // the run never produced records; report the setup failure itself
                let failed = Report::failed("run.setup", "model construction", 0.0, ParamSnapshot::of(cfg, None), e.to_string());
                write_reports(out, &ReportFile::new(vec![failed]))?;
            }
            return Err(f);
        }
    };
    write_reports(out, &rep)?;
    let failed = rep.records.iter().filter(|r| !r.pass).count();
    eprintln!("{} checks, {} failed; reports in {}", rep.records.len(), failed, out.display());
    Ok(if rep.any_error() {
        ExitCode::from(3)
    } else if failed > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn main_inner(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.cmd {
        Cmd::Run { config, checks, out } => {
            let text = fs::read_to_string(&config).map_err(|e| Failure::Config(format!("{}: {e}", config.display())))?;
            let mut cfg = RunConfig::parse(&text).map_err(classify)?;
            if let Some(c) = checks {
                cfg.checks = c;
            }
            let out = out.or_else(|| cfg.out_dir.clone().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."));
            execute(&cfg, &out)
        }
        Cmd::Preset { name, out } => {
            let cfg = RunConfig::preset(&name).expect("clap restricts preset names");
            fs::create_dir_all(&out).map_err(|e| io(&out, e))?;
            let path = out.join("config.json");
            fs::write(&path, cfg.to_json() + "\n").map_err(|e| io(&path, e))?;
            execute(&cfg, &out)
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("VERTEXQ_THREADS") else { return Ok(()) };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| Failure::Config(format!("VERTEXQ_THREADS={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Compute(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|_| main_inner(cli)) {
        Ok(code) => code,
        Err(f) => {
            let (kind, msg, code) = match f {
                Failure::Config(m) => ("config", m, 2),
                Failure::Compute(m) => ("computation", m, 3),
                Failure::Io(m) => ("io", m, 3),
            };
            let err = serde_json::json!({ "error": kind, "message": msg });
            eprintln!("{err}");
            ExitCode::from(code)
        }
    }
}
