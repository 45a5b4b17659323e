use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use helmray_cli::config::{parse_config, KEYS};
use helmray_cli::execute::{execute, Status};

fn key_table() -> String {
    let mut out = String::from("Configuration keys:\n");
    let mut section = None;
    for (s, key, doc) in KEYS {
        if section != Some(*s) {
            section = Some(*s);
            if !s.is_empty() {
                out.push_str(&format!("  [{s}]\n"));
            }
        }
        out.push_str(&format!("    {key:<16} {doc}\n"));
    }
    out.push_str("\nExit status: 0 success, 2 invalid configuration, 3 numerical abort.");
    out
}

/// Trace Helmholtz rays or matter-wave trajectories with the Wave Potential.
#[derive(Parser)]
#[command(version, about, after_long_help = key_table())]
struct Args {
    /// Run configuration file.
    config: PathBuf,
    /// Output directory, overriding `[output] dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return ExitCode::from(Status::Invalid as u8);
        }
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(Status::Invalid as u8);
        }
    };
    if let Some(dir) = args.out {
        cfg.output = dir;
    }
    match execute(&cfg) {
        Ok(status) => {
            if status != Status::Success {
                eprintln!("run aborted, see {}", cfg.output.join("summary.txt").display());
            }
            ExitCode::from(status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status() as u8)
        }
    }
}
