//! Runs the free-vs-periodic comparison and writes its CSVs and plot script.
//!
//! `cargo run --release --example compare -- out/compare`

use std::path::PathBuf;

use nonlocal_rd::config::preset;
use nonlocal_rd::experiment::run_experiment;

fn main() -> nonlocal_rd::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "target/compare".into()));
    let mut cfg = preset("free-vs-periodic", true)?;
    cfg.output.plot_script = true;
    let outcome = run_experiment(&cfg, &out)?;
    for line in &outcome.summary {
        println!("{line}");
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
