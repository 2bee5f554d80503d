//! `nlrd`: runs one configuration or preset and writes its CSV artifacts.
//!
//! Exit status: 0 success, 1 other failure, 2 invalid configuration,
//! 3 divergence (the last checkpoint stays in the output directory).
//! Verbosity follows `NLRD_LOG` (`error` … `trace`, default `info`).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use nonlocal_rd::checks::seed_check;
use nonlocal_rd::config::{preset, presets, RunConfig};
use nonlocal_rd::experiment::run_experiment;
use nonlocal_rd::Error;

#[derive(Parser, Debug)]
#[command(name = "nlrd", version, about = "Nonlocal Gray-Scott quadrature solver")]
struct Args {
    /// TOML run configuration.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named preset (see --list-presets).
    #[arg(long)]
    preset: Option<String>,
    /// Reduced desk-scale variant of the preset.
    #[arg(long, requires = "preset")]
    desk: bool,
    /// Output directory, overriding the configuration.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run the invariant suite and exit.
    #[arg(long)]
    seed_check: bool,
    /// Print the preset names.
    #[arg(long)]
    list_presets: bool,
    /// Print the resolved configuration as TOML and exit.
    #[arg(long)]
    print_config: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("NLRD_LOG", "info")).init();
    let args = Args::parse();

    if args.list_presets {
        for p in presets() {
            println!("{:24} {}", p.name, p.summary);
        }
        return ExitCode::SUCCESS;
    }
    if args.seed_check {
        let checks = seed_check();
        let mut ok = true;
        for c in &checks {
            println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            ok &= c.passed;
        }
        return if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE };
    }

    let cfg = match (&args.config, &args.preset) {
        (Some(path), None) => RunConfig::from_file(path),
        (None, Some(name)) => preset(name, args.desk),
        _ => {
            eprintln!("give --config <path> or --preset <name>");
            return ExitCode::from(2);
        }
    };
    let mut cfg = match cfg {
        Ok(c) => c,
        Err(e) => return report(&e),
    };
    if let Some(out) = &args.out {
        cfg.output.dir = out.to_string_lossy().into_owned();
    }
    if args.print_config {
        return match cfg.to_toml_string() {
            Ok(s) => {
                print!("{s}");
                ExitCode::SUCCESS
            }
            Err(e) => report(&e),
        };
    }
    let out = PathBuf::from(&cfg.output.dir);
    match run_experiment(&cfg, &out) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if matches!(e, Error::Divergence { .. }) {
                eprintln!("last checkpoint kept in {}", out.join("checkpoint.csv").display());
            }
            report(&e)
        }
    }
}

fn report(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(match e {
        Error::Config(_) => 2,
        Error::Divergence { .. } => 3,
        _ => 1,
    })
}
