//! Fast invariant suite behind `--seed-check`.

use crate::boundary::{BoundaryConstraint, NeumannExtension};
use crate::config::{preset, presets, RunConfig};
use crate::error::Result;
use crate::kernels::Kernel;
use crate::model::{quasilinear_det, rhs, GrayScottParams, SystemState};
use crate::quadrature::{Grid, OperatorBuilder};
use crate::spectral::symbol;
use crate::timestepper::{run, StepperConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, value: f64, bound: f64) -> Check {
    Check {
        name,
        passed: value <= bound,
        detail: format!("{value:e} (bound {bound:e})"),
    }
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn run_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let kernels = [Kernel::exponential(3.4)?, Kernel::algebraic(0.42)?];

    let mut annihilation = 0.0f64;
    let mut fixed = 0.0f64;
    let mut extension = 0.0f64;
    let mut collar = 0.0f64;
    for k in &kernels {
        let grid = Grid::new(5.0, 64)?;
        let b = OperatorBuilder::new(k, grid)?;
        let op = b.operator(&BoundaryConstraint::dirichlet_constant(0.7))?;
        annihilation = annihilation.max(sup(&op.apply(&vec![0.7; grid.len()])?));

        let params = GrayScottParams::pulse();
        let ou = b.operator(&BoundaryConstraint::free(2.0, 1.0))?;
        let ov = b.operator(&BoundaryConstraint::free(2.0, 0.0))?;
        let (du, dv) = rhs(&SystemState::constant(grid.len(), 1.0, 0.0), &params, &ou, &ov, None)?;
        fixed = fixed.max(sup(&du)).max(sup(&dv));

        let ng = Grid::new(10.0, 64)?;
        let nop = OperatorBuilder::new(k, ng)?.operator(&BoundaryConstraint::neumann(5.0, 2.0, 0.3))?;
        let ext = NeumannExtension::new(&nop)?;
        let inner = ext.inner_range().count();
        let e = ext.extend_inner(&nop, &vec![0.3; inner])?;
        extension = extension.max(e.iter().fold(0.0f64, |m, x| m.max((x - 0.3).abs())));
        let ramp: Vec<f64> = (0..inner).map(|i| (0.2 * i as f64).sin()).collect();
        let e = ext.extend_inner(&nop, &ramp)?;
        collar = collar.max(ext.outer_residual(&nop, &e)? / sup(&e));
    }
    out.push(check("constants are annihilated", annihilation, 1e-12));
    out.push(check("(1, 0) is a fixed point", fixed, 1e-12));
    out.push(check("Neumann extension keeps constants", extension, 1e-12));
    out.push(check("Neumann collar residual", collar, 1e-10));

    let mut sym = 0.0f64;
    for k in &kernels {
        sym = sym.max(symbol(k, 0.0).abs());
        for xi in [0.5, 3.0, 17.0] {
            sym = sym.max((symbol(k, xi) - symbol(k, -xi)).abs());
        }
    }
    out.push(check("symbols vanish at 0 and are even", sym, 0.0));

    let decay = |s: &SystemState, du: &mut [f64], dv: &mut [f64]| {
        du[0] = -s.u[0];
        dv[0] = -s.v[0];
        Ok(())
    };
    let one = SystemState::constant(1, 1.0, 1.0);
    let err = |dt: f64| -> Result<f64> {
        let cfg = StepperConfig {
            dt,
            nmax: (1.0 / dt).round() as usize,
            tol: -1.0,
            checkpoint_every: 0,
        };
        let r = run(&one, &cfg, &mut { decay }, None, None)?;
        Ok((r.state.u[0] - (-1.0f64).exp()).abs())
    };
    let ratio = err(0.01)? / err(0.005)?;
    out.push(Check {
        name: "AB2 error ratio under dt halving",
        passed: (3.6..=4.4).contains(&ratio),
        detail: format!("{ratio:.4}"),
    });

    let p = GrayScottParams::pulse();
    let d = quasilinear_det(&SystemState::constant(1, 0.4, 0.8), 0.0, &p)[0];
    out.push(check("determinant at ε = 0 is d_u d_v", (d - p.d_u * p.d_v).abs(), 0.0));

    let mut failed = Vec::new();
    for pr in presets() {
        for desk in [false, true] {
            let c = preset(pr.name, desk)?;
            let back = RunConfig::from_toml_str(&c.to_toml_string()?);
            if back.ok().as_ref() != Some(&c) {
                failed.push(pr.name);
            }
        }
    }
    out.push(Check {
        name: "presets round-trip",
        passed: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{} presets", presets().len())
        } else {
            failed.join(", ")
        },
    });
    Ok(out)
}

/// Runs every invariant; an error inside a check is reported as a failure.
pub fn seed_check() -> Vec<Check> {
    run_checks().unwrap_or_else(|e| {
        vec![Check {
            name: "invariant suite",
            passed: false,
            detail: e.to_string(),
        }]
    })
}

#[cfg(test)]
mod tests {
    #[test]
    fn suite_passes() {
        for c in super::seed_check() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
