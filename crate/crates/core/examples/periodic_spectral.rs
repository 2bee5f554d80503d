//! Periodic pseudo-spectral pulse next to the free-boundary quadrature run.

use nonlocal_rd::analysis::profile_metrics;
use nonlocal_rd::config::preset;
use nonlocal_rd::experiment::simulate;

fn main() -> nonlocal_rd::Result<()> {
    for name in ["pulse-exp-periodic", "pulse-exp-free"] {
        let cfg = preset(name, true)?;
        let run = simulate(&cfg, &cfg.stepper.build()?, None)?;
        let m = profile_metrics(&run.state.v, &run.x)?;
        println!(
            "{name:20} {:?} nodes {:5}  max v {:.5}  plateau {:.5}",
            cfg.solver,
            run.x.len(),
            m.max_value,
            m.plateau_width
        );
    }
    Ok(())
}
