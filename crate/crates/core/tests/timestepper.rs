use nonlocal_rd::model::{rhs, GrayScottParams, SystemState};
use nonlocal_rd::quadrature::Grid;
use nonlocal_rd::timestepper::{run, GrayScottRhs, StepperConfig, StopReason};
use nonlocal_rd::{boundary::BoundaryConstraint, kernels::Kernel, quadrature::OperatorBuilder, Error};

fn linear(lambda: f64) -> impl FnMut(&SystemState, &mut [f64], &mut [f64]) -> nonlocal_rd::Result<()> {
    move |s, du, dv| {
        du[0] = lambda * s.u[0];
        dv[0] = 2.0 * lambda * s.v[0];
        Ok(())
    }
}

fn cfg(dt: f64, nmax: usize) -> StepperConfig {
    StepperConfig { dt, nmax, tol: -1.0, checkpoint_every: 0 }
}

/// Closed-form AB2 iterate `c₁ρ₁ⁿ + c₂ρ₂ⁿ` with a forward-Euler first step.
fn ab2_closed_form(z: f64, n: usize) -> f64 {
    let b = 1.0 + 1.5 * z;
    let d = (b * b - 2.0 * z).sqrt();
    let (r1, r2) = ((b + d) / 2.0, (b - d) / 2.0);
    let y1 = 1.0 + z;
    let c1 = (y1 - r2) / (r1 - r2);
    let c2 = 1.0 - c1;
    c1 * r1.powi(n as i32) + c2 * r2.powi(n as i32)
}

#[test]
fn iterates_match_the_recurrence() {
    for (lambda, dt, n) in [(-1.0, 0.1, 50usize), (-3.0, 0.05, 80), (0.5, 0.2, 30)] {
        let r = run(&SystemState::constant(1, 1.0, 1.0), &cfg(dt, n), &mut linear(lambda), None, None).unwrap();
        let (u, v) = (ab2_closed_form(lambda * dt, n), ab2_closed_form(2.0 * lambda * dt, n));
        assert!(((r.state.u[0] - u) / u).abs() < 1e-12);
        assert!(((r.state.v[0] - v) / v).abs() < 1e-12);
        assert!((r.state.t - dt * n as f64).abs() < 1e-12);
    }
}

#[test]
fn second_order_in_time() {
    let err = |dt: f64| {
        let r = run(&SystemState::constant(1, 1.0, 1.0), &cfg(dt, (2.0 / dt) as usize), &mut linear(-0.7), None, None)
            .unwrap();
        (r.state.u[0] - (-1.4f64).exp()).abs()
    };
    let (e1, e2, e3) = (err(0.02), err(0.01), err(0.005));
    assert!((3.6..=4.4).contains(&(e1 / e2)), "{}", e1 / e2);
    assert!((3.6..=4.4).contains(&(e2 / e3)), "{}", e2 / e3);
}

#[test]
fn stability_boundary_follows_the_characteristic_roots() {
    // Largest root modulus of ρ² - (1 + 3z/2)ρ + z/2 crosses 1 at z = -1.
    for (z, stable) in [(-0.3, true), (-0.95, true), (-1.05, false), (-1.2, false), (-2.5, false)] {
        let r = run(&SystemState::constant(1, 1.0, 0.0), &cfg(1.0, 2000), &mut linear(z), None, None);
        let grows = match r {
            Ok(r) => r.state.u[0].abs() > 1.0,
            Err(Error::Divergence { .. }) => true,
            Err(e) => panic!("{e}"),
        };
        assert_eq!(!grows, stable, "z = {z}");
    }
}

#[test]
fn steady_stop_and_determinism() {
    let k = Kernel::exponential(3.4).unwrap();
    let grid = Grid::new(4.0, 64).unwrap();
    let b = OperatorBuilder::new(&k, grid).unwrap();
    let op_u = b.operator(&BoundaryConstraint::free(2.0, 1.0)).unwrap();
    let op_v = b.operator(&BoundaryConstraint::free(2.0, 0.0)).unwrap();
    let params = GrayScottParams::pulse();
    let init = SystemState::new(
        grid.sample(|x| 1.0 - 0.2 * (-x * x).exp()),
        grid.sample(|x| 0.1 * (-x * x).exp()),
        0.0,
    )
    .unwrap();
    let go = || {
        let mut g = GrayScottRhs { params, op_u: &op_u, op_v: &op_v, sources: None };
        let c = StepperConfig { dt: 0.02, nmax: 200_000, tol: 1e-10, checkpoint_every: 500 };
        run(&init, &c, &mut g, None, None).unwrap()
    };
    let (a, b2) = (go(), go());
    assert_eq!(a.reason, StopReason::Steady);
    assert!(a.last_update() < 1e-10);
    assert_eq!(a.state, b2.state);
    assert_eq!(a.checkpoints.len(), a.steps / 500);
    let (du, dv) = rhs(&a.state, &params, &op_u, &op_v, None).unwrap();
    let resid = du.iter().chain(&dv).fold(0.0f64, |m, x| m.max(x.abs()));
    assert!(resid < 1e-7, "{resid:e}");
}

#[test]
fn invalid_configs_are_rejected() {
    let s = SystemState::constant(1, 1.0, 1.0);
    for c in [cfg(0.0, 5), cfg(-1.0, 5), cfg(0.1, 0), StepperConfig { tol: f64::NAN, ..cfg(0.1, 5) }] {
        assert!(matches!(run(&s, &c, &mut linear(-1.0), None, None), Err(Error::Config(_))));
    }
}
