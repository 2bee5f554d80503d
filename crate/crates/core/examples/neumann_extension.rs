//! Extends interior data to the collar so the operator vanishes there.

use nonlocal_rd::boundary::{BoundaryConstraint, NeumannExtension};
use nonlocal_rd::kernels::Kernel;
use nonlocal_rd::quadrature::{Grid, OperatorBuilder};

fn main() -> nonlocal_rd::Result<()> {
    let k = Kernel::algebraic(0.42)?;
    let grid = Grid::new(4.0, 256)?;
    let op = OperatorBuilder::new(&k, grid)?.operator(&BoundaryConstraint::neumann(2.0, 2.0, 1.0))?;
    let ext = NeumannExtension::new(&op)?;
    let inner: Vec<f64> = grid.nodes()[ext.inner_range()].iter().map(|x| 1.0 - (-4.0 * x * x).exp()).collect();
    let u = ext.extend_inner(&op, &inner)?;
    println!(
        "{} inner nodes, {} collar nodes, pivot ratio {:.3e}",
        inner.len(),
        ext.outer_indices().len(),
        ext.pivot_ratio()
    );
    println!("collar residual {:.3e}", ext.outer_residual(&op, &u)?);
    for &i in ext.outer_indices().iter().step_by(16) {
        println!("  x = {:7.3}  u = {:.6}", grid.x(i), u[i]);
    }
    Ok(())
}
