//! The nonlocal Gray–Scott system, its pulse initial data, manufactured
//! sources and the quasilinear determinant diagnostic.
//!
//! ```text
//! u_t = d_u K u + A (1 - u) - u v² + f_u
//! v_t = d_v K v - B v       + u v² + f_v
//! ```

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::integrate::Integrator;
use crate::kernels::{Kernel, KernelProfile};
use crate::quadrature::{apply_pair, DiscreteOperator, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrayScottParams {
    pub d_u: f64,
    pub d_v: f64,
    /// Feed rate `A`.
    pub feed: f64,
    /// Removal rate `B`.
    pub removal: f64,
}

impl GrayScottParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("d_u", self.d_u),
            ("d_v", self.d_v),
            ("feed", self.feed),
            ("removal", self.removal),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Pulse regime: `d_u = 1`, `d_v = 0.01`, `A = 0.01`, `B = ∛0.01 / 2`.
    pub fn pulse() -> Self {
        Self {
            d_u: 1.0,
            d_v: 0.01,
            feed: 0.01,
            removal: 0.01f64.cbrt() / 2.0,
        }
    }

    pub fn manufactured() -> Self {
        Self {
            d_u: 0.05,
            d_v: 0.01,
            feed: 6.0,
            removal: 8.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub t: f64,
}

impl SystemState {
    pub fn new(u: Vec<f64>, v: Vec<f64>, t: f64) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::Argument(format!(
                "u has {} values but v has {}",
                u.len(),
                v.len()
            )));
        }
        Ok(Self { u, v, t })
    }

    pub fn constant(len: usize, u: f64, v: f64) -> Self {
        Self {
            u: vec![u; len],
            v: vec![v; len],
            t: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(&self.v).all(|x| x.is_finite())
    }
}

/// Source terms on the grid at one instant.
pub trait SourceTerms: Send + Sync {
    fn at(&self, t: f64, f_u: &mut [f64], f_v: &mut [f64]);
}

/// Writes `(u_t, v_t)` for the semi-discrete system. `op_*.apply` realizes
/// `-K`, so the diffusion term enters with a minus sign.
#[allow(clippy::too_many_arguments)]
pub fn rhs_into(
    state: &SystemState,
    params: &GrayScottParams,
    op_u: &DiscreteOperator,
    op_v: &DiscreteOperator,
    sources: Option<&dyn SourceTerms>,
    du: &mut [f64],
    dv: &mut [f64],
) -> Result<()> {
    let n = op_u.grid().len();
    if op_v.grid() != op_u.grid() || state.len() != n || du.len() != n || dv.len() != n {
        return Err(Error::Argument(
            "state, operators and outputs must share one grid".into(),
        ));
    }
    apply_pair(op_u, op_v, &state.u, &state.v, du, dv)?;
    let GrayScottParams {
        d_u,
        d_v,
        feed,
        removal,
    } = *params;
    for i in 0..n {
        let (u, v) = (state.u[i], state.v[i]);
        let uvv = u * v * v;
        du[i] = -d_u * du[i] + feed * (1.0 - u) - uvv;
        dv[i] = -d_v * dv[i] - removal * v + uvv;
    }
    if let Some(src) = sources {
        let mut fu = vec![0.0; n];
        let mut fv = vec![0.0; n];
        src.at(state.t, &mut fu, &mut fv);
        for i in 0..n {
            du[i] += fu[i];
            dv[i] += fv[i];
        }
    }
    Ok(())
}

pub fn rhs(
    state: &SystemState,
    params: &GrayScottParams,
    op_u: &DiscreteOperator,
    op_v: &DiscreteOperator,
    sources: Option<&dyn SourceTerms>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = state.len();
    let (mut du, mut dv) = (vec![0.0; n], vec![0.0; n]);
    rhs_into(state, params, op_u, op_v, sources, &mut du, &mut dv)?;
    Ok((du, dv))
}

/// Localized pulse `u₀ = 1 - 0.67 N_α(x)`, `v₀ = 0.925 β e^{-(|x|/α)^β} / (2√2 α Γ(1/β))`.
pub fn pulse_initial_conditions(grid: &Grid, alpha: f64, beta: f64) -> Result<SystemState> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::Config(format!(
            "pulse width and exponent must be positive, got α = {alpha}, β = {beta}"
        )));
    }
    let gauss = 1.0 / (alpha * (2.0 * PI).sqrt());
    let amp = 0.925 * beta / (alpha * 2.0 * 2f64.sqrt() * gamma(1.0 / beta));
    let u = grid.sample(|x| 1.0 - 0.67 * gauss * (-0.5 * (x / alpha).powi(2)).exp());
    let v = grid.sample(|x| amp * (-(x.abs() / alpha).powf(beta)).exp());
    SystemState::new(u, v, 0.0)
}

/// Per-node determinant of the quasilinear diffusion matrix
/// `[[d_u + ε²A + ε²v², 2ε²uv], [-ε²v², d_v + ε²B - 2ε²uv]]`.
pub fn quasilinear_det(state: &SystemState, eps: f64, params: &GrayScottParams) -> Vec<f64> {
    let e2 = eps * eps;
    state
        .u
        .iter()
        .zip(&state.v)
        .map(|(&u, &v)| {
            let a11 = params.d_u + e2 * params.feed + e2 * v * v;
            let a12 = 2.0 * e2 * u * v;
            let a21 = -e2 * v * v;
            let a22 = params.d_v + e2 * params.removal - 2.0 * e2 * u * v;
            a11 * a22 - a12 * a21
        })
        .collect()
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Exact solution `u = a(t) p(x)`, `v = c(t) q(x)` with zero exterior data.
#[derive(Clone)]
pub struct ManufacturedCase {
    pub half_width: f64,
    pub space_u: ScalarFn,
    pub time_u: ScalarFn,
    pub dtime_u: ScalarFn,
    pub space_v: ScalarFn,
    pub time_v: ScalarFn,
    pub dtime_v: ScalarFn,
}

impl std::fmt::Debug for ManufacturedCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ManufacturedCase")
            .field("half_width", &self.half_width)
            .finish_non_exhaustive()
    }
}

impl ManufacturedCase {
    /// The benchmark pair on `[-1, 1]`:
    /// `u = ½ cos t (1 + sin π(x - ½)) (1 - x²) e^{1-x²}`,
    /// `v = cos t² cos(πx/2) x³ sin πx`.
    pub fn benchmark() -> Self {
        Self {
            half_width: 1.0,
            space_u: Arc::new(|x: f64| {
                0.5 * (1.0 + (PI * (x - 0.5)).sin()) * (1.0 - x * x) * (1.0 - x * x).exp()
            }),
            time_u: Arc::new(f64::cos),
            dtime_u: Arc::new(|t: f64| -t.sin()),
            space_v: Arc::new(|x: f64| (PI * x / 2.0).cos() * x.powi(3) * (PI * x).sin()),
            time_v: Arc::new(|t: f64| (t * t).cos()),
            dtime_v: Arc::new(|t: f64| -2.0 * t * (t * t).sin()),
        }
    }

    pub fn u(&self, x: f64, t: f64) -> f64 {
        if x.abs() > self.half_width {
            return 0.0;
        }
        (self.time_u)(t) * (self.space_u)(x)
    }

    pub fn v(&self, x: f64, t: f64) -> f64 {
        if x.abs() > self.half_width {
            return 0.0;
        }
        (self.time_v)(t) * (self.space_v)(x)
    }

    pub fn exact_state(&self, grid: &Grid, t: f64) -> SystemState {
        SystemState {
            u: grid.sample(|x| self.u(x, t)),
            v: grid.sample(|x| self.v(x, t)),
            t,
        }
    }
}

/// `K p(x)` for a profile `p` supported on `[-L, L]`, by adaptive quadrature
/// over the domain plus the closed-form exterior mass.
pub fn nonlocal_of_compact(
    kernel: &Kernel,
    p: &(dyn Fn(f64) -> f64 + Sync),
    half_width: f64,
    x: f64,
    integrator: &Integrator,
) -> Result<f64> {
    let l = half_width;
    let px = if x.abs() <= l { p(x) } else { 0.0 };
    let mut breaks = vec![-l, l];
    if x.abs() < l {
        breaks.insert(1, x);
    }
    let inside = integrator.integrate_breaks(|y| (p(y) - px) * kernel.density(x - y), &breaks)?;
    let (_, fp_hi) = kernel.antiderivatives(x + l);
    let (_, fp_lo) = kernel.antiderivatives(x - l);
    let exterior_mass = 1.0 - fp_hi + fp_lo;
    Ok(inside - px * exterior_mass)
}

/// Manufactured sources with the nonlocal terms `K p`, `K q` tabulated once
/// at the grid nodes.
#[derive(Clone)]
pub struct ManufacturedSources {
    case: ManufacturedCase,
    params: GrayScottParams,
    p: Vec<f64>,
    q: Vec<f64>,
    kp: Vec<f64>,
    kq: Vec<f64>,
}

impl ManufacturedSources {
    pub fn new(
        case: &ManufacturedCase,
        grid: &Grid,
        kernel: &Kernel,
        params: &GrayScottParams,
        integrator: &Integrator,
    ) -> Result<Self> {
        let nodes = grid.nodes();
        let tabulate = |f: &ScalarFn| -> Result<Vec<f64>> {
            nodes
                .par_iter()
                .map(|&x| nonlocal_of_compact(kernel, f.as_ref(), case.half_width, x, integrator))
                .collect()
        };
        let restrict = |f: &ScalarFn| -> Vec<f64> {
            nodes
                .iter()
                .map(|&x| if x.abs() <= case.half_width { f(x) } else { 0.0 })
                .collect()
        };
        Ok(Self {
            kp: tabulate(&case.space_u)?,
            kq: tabulate(&case.space_v)?,
            p: restrict(&case.space_u),
            q: restrict(&case.space_v),
            case: case.clone(),
            params: *params,
        })
    }

    /// `(K u, K v)` of the exact solution at the nodes.
    pub fn exact_nonlocal(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let a = (self.case.time_u)(t);
        let c = (self.case.time_v)(t);
        (
            self.kp.iter().map(|k| a * k).collect(),
            self.kq.iter().map(|k| c * k).collect(),
        )
    }
}

impl SourceTerms for ManufacturedSources {
    fn at(&self, t: f64, f_u: &mut [f64], f_v: &mut [f64]) {
        let c = &self.case;
        let (a, da) = ((c.time_u)(t), (c.dtime_u)(t));
        let (b, db) = ((c.time_v)(t), (c.dtime_v)(t));
        let GrayScottParams {
            d_u,
            d_v,
            feed,
            removal,
        } = self.params;
        for i in 0..self.p.len() {
            let (u, v) = (a * self.p[i], b * self.q[i]);
            let uvv = u * v * v;
            f_u[i] = da * self.p[i] - d_u * a * self.kp[i] - feed * (1.0 - u) + uvv;
            f_v[i] = db * self.q[i] - d_v * b * self.kq[i] + removal * v - uvv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::BoundaryConstraint;
    use crate::quadrature::assemble;

    #[test]
    fn homogeneous_state_is_fixed_point() {
        let k = Kernel::exponential(4.0).unwrap();
        let g = Grid::new(2.0, 64).unwrap();
        let ou = assemble(&k, g, &BoundaryConstraint::dirichlet_constant(1.0)).unwrap();
        let ov = assemble(&k, g, &BoundaryConstraint::dirichlet_constant(0.0)).unwrap();
        let s = SystemState::constant(g.len(), 1.0, 0.0);
        let (du, dv) = rhs(&s, &GrayScottParams::pulse(), &ou, &ov, None).unwrap();
        assert!(du.iter().chain(&dv).all(|x| x.abs() <= 1e-12));

        let ou = assemble(&k, g, &BoundaryConstraint::dirichlet_constant(0.0)).unwrap();
        let p = GrayScottParams::manufactured();
        let s = SystemState::constant(g.len(), 0.0, 0.0);
        let (du, dv) = rhs(&s, &p, &ou, &ov, None).unwrap();
        assert!(du.iter().all(|x| (x - p.feed).abs() <= 1e-12));
        assert!(dv.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let k = Kernel::exponential(4.0).unwrap();
        let bc = BoundaryConstraint::dirichlet_constant(0.0);
        let ou = assemble(&k, Grid::new(1.0, 8).unwrap(), &bc).unwrap();
        let ov = assemble(&k, Grid::new(1.0, 16).unwrap(), &bc).unwrap();
        let s = SystemState::constant(9, 0.0, 0.0);
        assert!(matches!(
            rhs(&s, &GrayScottParams::pulse(), &ou, &ov, None),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn pulse_values_at_origin() {
        let g = Grid::new(18.75, 1024).unwrap();
        let s = pulse_initial_conditions(&g, 0.1, 3.0).unwrap();
        let mid = g.m() / 2;
        assert!((s.u[mid] - (1.0 - 0.67 / (0.1 * (2.0 * PI).sqrt()))).abs() < 1e-14);
        assert!((s.u[0] - 1.0).abs() < 1e-15);
        assert!((s.v[mid] - 3.662).abs() < 1e-3);
        assert!(pulse_initial_conditions(&g, 0.0, 3.0).is_err());
    }

    #[test]
    fn determinant_limits() {
        let p = GrayScottParams::pulse();
        let s = SystemState {
            u: vec![1.0, 0.3, 2.0],
            v: vec![0.0, 1.2, 0.4],
            t: 0.0,
        };
        let d = quasilinear_det(&s, 0.0, &p);
        assert!(d.iter().all(|x| *x == p.d_u * p.d_v));
        let e = 0.25;
        let d = quasilinear_det(&s, e, &p);
        let base = (p.d_u + e * e * p.feed) * (p.d_v + e * e * p.removal);
        assert!((d[0] - base).abs() < 1e-15);
    }

    #[test]
    fn time_derivatives_match_finite_differences() {
        let c = ManufacturedCase::benchmark();
        let d = 1e-4;
        for t in [0.1, 0.5, 0.9] {
            let fd = ((c.time_u)(t + d) - (c.time_u)(t - d)) / (2.0 * d);
            assert!((fd - (c.dtime_u)(t)).abs() < 1e-7);
            let fd = ((c.time_v)(t + d) - (c.time_v)(t - d)) / (2.0 * d);
            assert!((fd - (c.dtime_v)(t)).abs() < 1e-7);
        }
    }
}
