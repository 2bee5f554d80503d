//! Assembles the quadrature operator for a Gaussian with matching exterior
//! data and shows second-order agreement under refinement.

use nonlocal_rd::boundary::BoundaryConstraint;
use nonlocal_rd::kernels::Kernel;
use nonlocal_rd::quadrature::{compute_weights, Grid, OperatorBuilder};

fn main() -> nonlocal_rd::Result<()> {
    let k = Kernel::exponential(3.4)?;
    let f = |x: f64| (-x * x).exp();
    let fine = Grid::new(4.0, 2048)?;
    let reference = OperatorBuilder::new(&k, fine)?
        .operator(&BoundaryConstraint::dirichlet_fn(f))?
        .apply(&fine.sample(f))?;

    let mut prev: Option<f64> = None;
    for m in [64, 128, 256, 512] {
        let grid = Grid::new(4.0, m)?;
        let w = compute_weights(&k, &grid)?;
        let b = OperatorBuilder::new(&k, grid)?;
        let ku = b.operator(&BoundaryConstraint::dirichlet_fn(f))?.apply(&grid.sample(f))?;
        let stride = 2048 / m;
        let err = (0..grid.len()).map(|i| (ku[i] - reference[i * stride]).abs()).fold(0.0, f64::max);
        let order = prev.map(|p| (p / err).log2());
        println!(
            "M = {m:4}  h = {:.4}  f1 = {:.4e}  tail = {:.3e}  max error {err:.3e}  order {}",
            grid.h(),
            w.f1(),
            b.tail_mass(),
            order.map_or("-".into(), |o| format!("{o:.3}"))
        );
        prev = Some(err);
    }
    Ok(())
}
