//! Runs a pulse preset and prints profile metrics.
//!
//! `cargo run --release --example pulse -- pulse-exp-neumann`

use nonlocal_rd::analysis::profile_metrics;
use nonlocal_rd::config::preset;
use nonlocal_rd::experiment::simulate;
use nonlocal_rd::model::quasilinear_det;

fn main() -> nonlocal_rd::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "pulse-exp-free".into());
    let cfg = preset(&name, true)?;
    let run = simulate(&cfg, &cfg.stepper.build()?, None)?;
    let m = profile_metrics(&run.state.v, &run.x)?;
    println!("{name}: t = {} after {} steps ({:?})", run.state.t, run.result.steps, run.result.reason);
    println!("  max v {:.5} at x = {:.4}", m.max_value, m.max_location);
    println!("  95% plateau width {:.5}, oscillations {}", m.plateau_width, m.oscillations);
    println!("  boundary values {:.3e} / {:.3e}", m.boundary_left, m.boundary_right);
    if let Ok(eps) = nonlocal_rd::experiment::determinant_eps(&cfg) {
        let det = quasilinear_det(&run.state, eps, &cfg.params);
        println!("  min det (ε = {eps:.4}) {:.4e}", det.iter().copied().fold(f64::INFINITY, f64::min));
    }
    Ok(())
}
