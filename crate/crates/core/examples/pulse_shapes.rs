//! Plateau and oscillation metrics of the four free-boundary desk pulses.
//! The output is the acceptance fixture `tests/fixtures/pulse_desk_metrics.csv`.

use nonlocal_rd::analysis::profile_metrics;
use nonlocal_rd::config::preset;
use nonlocal_rd::experiment::simulate;

fn main() -> nonlocal_rd::Result<()> {
    println!("preset,m,plateau_width,oscillations,max_value");
    for name in ["pulse-exp-free", "pulse-exp4-free", "pulse-alg-free", "pulse-alg039-free"] {
        let cfg = preset(name, true)?;
        let run = simulate(&cfg, &cfg.stepper.build()?, None)?;
        let m = profile_metrics(&run.state.v, &run.x)?;
        println!("{name},{},{:.17e},{},{:.17e}", cfg.grid.m, m.plateau_width, m.oscillations, m.max_value);
    }
    Ok(())
}
