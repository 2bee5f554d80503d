//! Kernel densities, Fourier transforms and tail masses for both families.

use nonlocal_rd::kernels::{Kernel, KernelProfile};
use nonlocal_rd::spectral::symbol;

fn main() -> nonlocal_rd::Result<()> {
    for k in [Kernel::exponential(3.4)?, Kernel::exponential(4.0)?, Kernel::algebraic(0.42)?] {
        println!("{:?} shape {}: second moment {:.6e}", k.family(), k.shape(), k.second_moment());
        for z in [0.0, 0.1, 0.5, 2.0] {
            println!("  γ({z}) = {:.6e}   mass beyond {z}: {:.6e}", k.density(z), k.tail_mass(z)?);
        }
        for xi in [0.0, 1.0, 5.0, 20.0] {
            println!("  γ̂({xi}) = {:.6e}   symbol {:.6e}", k.fourier_transform(xi), symbol(&k, xi));
        }
    }
    Ok(())
}
