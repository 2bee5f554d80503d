//! Sign of the quasilinear determinant on a converged pulse and on a
//! compressed copy of the sharper σ = 4 pulse.

use nonlocal_rd::config::preset;
use nonlocal_rd::experiment::simulate;
use nonlocal_rd::model::{quasilinear_det, SystemState};

fn min_det(s: &SystemState, eps: f64, cfg: &nonlocal_rd::config::RunConfig) -> f64 {
    quasilinear_det(s, eps, &cfg.params).into_iter().fold(f64::INFINITY, f64::min)
}

fn main() -> nonlocal_rd::Result<()> {
    let eps = 1.0 / 3.4;
    let wide = preset("pulse-exp-free", true)?;
    let run = simulate(&wide, &wide.stepper.build()?, None)?;
    println!("σ = 3.4 pulse: min det {:.4e}", min_det(&run.state, eps, &wide));

    let sharp = preset("pulse-exp4-free", true)?;
    let run = simulate(&sharp, &sharp.stepper.build()?, None)?;
    let (x, s) = (&run.x, &run.state);
    let h = x[1] - x[0];
    let at = |w: &[f64], y: f64, far: f64| {
        let p = (y - x[0]) / h;
        if p < 0.0 || p > (x.len() - 1) as f64 {
            return far;
        }
        let i = (p as usize).min(x.len() - 2);
        let t = p - i as f64;
        (1.0 - t) * w[i] + t * w[i + 1]
    };
    let spike = SystemState {
        u: x.iter().map(|&y| at(&s.u, 2.0 * y, 1.0)).collect(),
        v: x.iter().map(|&y| 2.0 * at(&s.v, 2.0 * y, 0.0)).collect(),
        t: s.t,
    };
    println!("compressed σ = 4 spike: min det {:.4e}", min_det(&spike, eps, &sharp));
    Ok(())
}
