mod common;

use std::f64::consts::PI;

use common::{gauss, sup};
use nonlocal_rd::boundary::BoundaryConstraint;
use nonlocal_rd::integrate::Integrator;
use nonlocal_rd::kernels::Kernel;
use nonlocal_rd::model::{
    nonlocal_of_compact, pulse_initial_conditions, quasilinear_det, rhs, GrayScottParams, ManufacturedCase,
    ManufacturedSources, SourceTerms, SystemState,
};
use nonlocal_rd::quadrature::{Grid, OperatorBuilder};

#[test]
fn pulse_initial_values() {
    let grid = Grid::new(75.0 / 4.0, 1024).unwrap();
    let s = pulse_initial_conditions(&grid, 0.1, 3.0).unwrap();
    let mid = grid.m() / 2;
    let u0 = 1.0 - 0.67 / (0.1 * (2.0 * PI).sqrt());
    // Γ(1/3) to 16 digits.
    let v0 = 0.925 * 3.0 / (0.1 * 2.0 * 2f64.sqrt() * 2.678_938_534_707_747_6);
    assert!((s.u[mid] - u0).abs() < 1e-13 && (u0 + 1.6729).abs() < 1e-4);
    assert!((s.v[mid] - v0).abs() < 1e-12 && (v0 - 3.662).abs() < 1e-3);
    assert!((s.u[0] - 1.0).abs() < 1e-15 && (s.u[grid.m()] - 1.0).abs() < 1e-15);
    assert!(pulse_initial_conditions(&grid, 0.0, 3.0).is_err());
}

#[test]
fn homogeneous_states() {
    let params = GrayScottParams::pulse();
    let k = Kernel::algebraic(0.42).unwrap();
    let grid = Grid::new(3.0, 48).unwrap();
    let b = OperatorBuilder::new(&k, grid).unwrap();
    let zero = b.operator(&BoundaryConstraint::dirichlet_constant(0.0)).unwrap();
    let (du, dv) = rhs(&SystemState::constant(grid.len(), 0.0, 0.0), &params, &zero, &zero, None).unwrap();
    assert!(du.iter().all(|d| (d - params.feed).abs() < 1e-15));
    assert!(dv.iter().all(|d| *d == 0.0));
    let one = b.operator(&BoundaryConstraint::dirichlet_constant(1.0)).unwrap();
    let (du, dv) = rhs(&SystemState::constant(grid.len(), 1.0, 0.0), &params, &one, &zero, None).unwrap();
    assert!(sup(&du) <= 1e-12 && sup(&dv) <= 1e-12);
    assert!(rhs(&SystemState::constant(3, 1.0, 0.0), &params, &one, &zero, None).is_err());
}

#[test]
fn determinant_formula() {
    let p = GrayScottParams::pulse();
    let s = SystemState::new(vec![0.2, 0.9], vec![1.5, 0.1], 0.0).unwrap();
    let e = 0.3;
    let e2 = e * e;
    let det = quasilinear_det(&s, e, &p);
    for i in 0..2 {
        let (u, v) = (s.u[i], s.v[i]);
        let m = [[p.d_u + e2 * p.feed + e2 * v * v, 2.0 * e2 * u * v], [-e2 * v * v, p.d_v + e2 * p.removal - 2.0 * e2 * u * v]];
        let expected = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        assert!((det[i] - expected).abs() < 1e-14);
    }
}

/// `K p(x)` for `p` supported on `[-1, 1]` with the exponential kernel
/// `σ = 1`: panels split at the kernel cusp and the support ends.
fn k_compact(p: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    let g = |z: f64| 0.5 * (-z.abs()).exp();
    let px = p(x);
    let body = |y: f64| (p(y) - px) * g(x - y);
    let inside = gauss(body, -1.0, x, 300) + gauss(body, x, 1.0, 300);
    let outside = 0.5 * (-(1.0 - x)).exp() + 0.5 * (-(1.0 + x)).exp();
    inside - px * outside
}

#[test]
fn manufactured_sources_match_an_independent_oracle() {
    let case = ManufacturedCase::benchmark();
    let params = GrayScottParams::manufactured();
    let k = Kernel::exponential(1.0).unwrap();
    let grid = Grid::new(1.0, 8).unwrap();
    let node = grid.nodes().iter().position(|x| (x - 0.25).abs() < 1e-14).unwrap();
    let src = ManufacturedSources::new(&case, &grid, &k, &params, &Integrator::default()).unwrap();
    let t = 0.5;
    let (mut fu, mut fv) = (vec![0.0; grid.len()], vec![0.0; grid.len()]);
    src.at(t, &mut fu, &mut fv);

    let p = |x: f64| 0.5 * (1.0 + (PI * (x - 0.5)).sin()) * (1.0 - x * x) * (1.0 - x * x).exp();
    let q = |x: f64| (PI * x / 2.0).cos() * x.powi(3) * (PI * x).sin();
    let (x, a, c) = (0.25, t.cos(), (t * t).cos());
    let (u, v) = (a * p(x), c * q(x));
    let f_u = -t.sin() * p(x) - params.d_u * a * k_compact(&p, x) - params.feed * (1.0 - u) + u * v * v;
    let f_v = -2.0 * t * (t * t).sin() * q(x) - params.d_v * c * k_compact(&q, x) + params.removal * v - u * v * v;
    assert!((fu[node] - f_u).abs() < 1e-10, "{} vs {f_u}", fu[node]);
    assert!((fv[node] - f_v).abs() < 1e-10, "{} vs {f_v}", fv[node]);

    let lib = nonlocal_of_compact(&k, &p, 1.0, 0.25, &Integrator::default()).unwrap();
    assert!((lib - k_compact(&p, 0.25)).abs() < 1e-10);
}

#[test]
fn manufactured_time_derivatives() {
    let case = ManufacturedCase::benchmark();
    let d = 1e-5;
    for (x, t) in [(0.3, 0.2), (-0.7, 0.9)] {
        let fd_u = (case.u(x, t + d) - case.u(x, t - d)) / (2.0 * d);
        let fd_v = (case.v(x, t + d) - case.v(x, t - d)) / (2.0 * d);
        let p = case.u(x, 0.0);
        let q = case.v(x, 0.0);
        assert!((fd_u + t.sin() * p).abs() < 1e-8);
        assert!((fd_v + 2.0 * t * (t * t).sin() * q).abs() < 1e-8);
    }
}
