//! Self-convergence of the Neumann σ = 4 pulse against a finer reference.

use nonlocal_rd::config::preset;
use nonlocal_rd::experiment::pulse_convergence;

fn main() -> nonlocal_rd::Result<()> {
    let cfg = preset("self-convergence", true)?;
    let (report, _) = pulse_convergence(&cfg)?;
    print!("{}", report.to_csv());
    println!(
        "# average orders u {:.3}, v {:.3}",
        report.average_order_u().unwrap_or(f64::NAN),
        report.average_order_v().unwrap_or(f64::NAN)
    );
    Ok(())
}
