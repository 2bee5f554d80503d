//! Manufactured-solution convergence on [-1, 1] with zero Dirichlet data.
//! Prints the report CSV.

use nonlocal_rd::analysis::{ConvergenceReport, Norm, ReferenceKind};
use nonlocal_rd::config::preset;
use nonlocal_rd::experiment::mms_level;

fn main() -> nonlocal_rd::Result<()> {
    let cfg = preset("mms-benchmark", true)?;
    let conv = cfg.convergence.clone().expect("preset has levels");
    let mut report = ConvergenceReport::new(Norm::L2, ReferenceKind::Exact);
    for (i, &m) in conv.levels.iter().enumerate() {
        let h = 2.0 * cfg.grid.half_width / m as f64;
        let dt = conv.dt(i, h)?;
        let level = mms_level(&cfg, m, dt)?;
        report.push(m, h, dt, level.error_u, level.error_v)?;
    }
    print!("{}", report.to_csv());
    Ok(())
}
