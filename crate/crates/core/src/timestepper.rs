//! Second-order Adams–Bashforth marching with a forward-Euler trial step.
//!
//! ```text
//! W_1     = W_0 + dt G_0
//! W_{n+1} = W_n + 3/2 dt G_n - 1/2 dt G_{n-1}
//! ```
//!
//! The loop stops once `max |W_{n+1} - W_n| < tol` or after `nmax` steps
//! (the trial step counts as one). A negative `tol` disables the early stop.
//! With an extension hook (Neumann constraints) every new level is extended
//! before `G` sees it, and the update is measured on the hook's inner nodes.

use std::ops::RangeInclusive;

use log::{debug, info};

use crate::boundary::NeumannExtension;
use crate::error::{Error, Result};
use crate::model::{rhs_into, GrayScottParams, SourceTerms, SystemState};
use crate::quadrature::DiscreteOperator;

/// Right-hand side `G(t, W)` of a two-component system.
pub trait Rhs {
    fn eval(&mut self, state: &SystemState, du: &mut [f64], dv: &mut [f64]) -> Result<()>;
}

impl<F> Rhs for F
where
    F: FnMut(&SystemState, &mut [f64], &mut [f64]) -> Result<()>,
{
    fn eval(&mut self, state: &SystemState, du: &mut [f64], dv: &mut [f64]) -> Result<()> {
        self(state, du, dv)
    }
}

/// The quadrature-discretized Gray–Scott right-hand side.
pub struct GrayScottRhs<'a> {
    pub params: GrayScottParams,
    pub op_u: &'a DiscreteOperator,
    pub op_v: &'a DiscreteOperator,
    pub sources: Option<&'a dyn SourceTerms>,
}

impl Rhs for GrayScottRhs<'_> {
    fn eval(&mut self, state: &SystemState, du: &mut [f64], dv: &mut [f64]) -> Result<()> {
        rhs_into(state, &self.params, self.op_u, self.op_v, self.sources, du, dv)
    }
}

/// Post-step hook that completes a state, e.g. the Neumann collar solve.
pub trait Extension {
    fn extend(&self, state: &mut SystemState) -> Result<()>;
    /// Nodes on which the steady-state update is measured.
    fn measured(&self) -> RangeInclusive<usize>;
}

/// Neumann extension of both components.
pub struct NeumannPair<'a> {
    pub op_u: &'a DiscreteOperator,
    pub op_v: &'a DiscreteOperator,
    pub ext_u: &'a NeumannExtension,
    pub ext_v: &'a NeumannExtension,
}

impl Extension for NeumannPair<'_> {
    fn extend(&self, state: &mut SystemState) -> Result<()> {
        self.ext_u.extend_in_place(self.op_u, &mut state.u)?;
        self.ext_v.extend_in_place(self.op_v, &mut state.v)
    }

    fn measured(&self) -> RangeInclusive<usize> {
        self.ext_u.inner_range()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub dt: f64,
    /// Step budget, trial step included.
    pub nmax: usize,
    /// Steady-state tolerance; negative runs exactly `nmax` steps.
    pub tol: f64,
    /// Checkpoint every this many steps; 0 disables checkpoints.
    pub checkpoint_every: usize,
}

impl StepperConfig {
    pub fn fixed_horizon(dt: f64, horizon: f64) -> Self {
        Self {
            dt,
            nmax: (horizon / dt).round().max(1.0) as usize,
            tol: -1.0,
            checkpoint_every: 1000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.nmax == 0 {
            return Err(Error::Config("nmax must be at least 1".into()));
        }
        if self.tol.is_nan() {
            return Err(Error::Config("tol must be a number".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Steady,
    StepLimit,
}

/// One record of the update history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryEntry {
    pub step: usize,
    pub t: f64,
    pub max_update: f64,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub state: SystemState,
    pub steps: usize,
    pub reason: StopReason,
    pub history: Vec<HistoryEntry>,
    pub checkpoints: Vec<(usize, SystemState)>,
}

impl RunResult {
    pub fn last_update(&self) -> f64 {
        self.history.last().map_or(f64::INFINITY, |h| h.max_update)
    }
}

fn check_finite(state: &SystemState, step: usize) -> Result<()> {
    if state.is_finite() {
        return Ok(());
    }
    let bad = state
        .u
        .iter()
        .chain(&state.v)
        .position(|x| !x.is_finite())
        .unwrap_or(0);
    let n = state.len();
    let (comp, node) = if bad < n { ("u", bad) } else { ("v", bad - n) };
    Err(Error::Divergence {
        step,
        time: state.t,
        detail: format!("{comp} is not finite at node {node}"),
    })
}

/// `W + dt G`.
pub fn trial_step(state: &SystemState, dt: f64, g: (&[f64], &[f64])) -> Result<SystemState> {
    let next = SystemState {
        u: state.u.iter().zip(g.0).map(|(w, d)| w + dt * d).collect(),
        v: state.v.iter().zip(g.1).map(|(w, d)| w + dt * d).collect(),
        t: state.t + dt,
    };
    check_finite(&next, 1)?;
    Ok(next)
}

/// `W_n + 3/2 dt G_n - 1/2 dt G_{n-1}`.
pub fn ab2_step(
    state: &SystemState,
    dt: f64,
    g_n: (&[f64], &[f64]),
    g_nm1: (&[f64], &[f64]),
    step: usize,
) -> Result<SystemState> {
    let combine = |w: &[f64], a: &[f64], b: &[f64]| -> Vec<f64> {
        w.iter()
            .zip(a.iter().zip(b))
            .map(|(w, (a, b))| w + dt * (1.5 * a - 0.5 * b))
            .collect()
    };
    let next = SystemState {
        u: combine(&state.u, g_n.0, g_nm1.0),
        v: combine(&state.v, g_n.1, g_nm1.1),
        t: state.t + dt,
    };
    check_finite(&next, step)?;
    Ok(next)
}

fn max_update(a: &SystemState, b: &SystemState, range: &RangeInclusive<usize>) -> f64 {
    let r = range.clone();
    let du = a.u[r.clone()].iter().zip(&b.u[r.clone()]);
    let dv = a.v[r.clone()].iter().zip(&b.v[r]);
    du.chain(dv).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Called with each checkpoint as it is taken.
pub type CheckpointSink<'a> = dyn FnMut(usize, &SystemState) -> Result<()> + 'a;

/// Marches `initial` until steady or out of steps.
pub fn run(
    initial: &SystemState,
    config: &StepperConfig,
    rhs: &mut dyn Rhs,
    extension: Option<&dyn Extension>,
    mut sink: Option<&mut CheckpointSink<'_>>,
) -> Result<RunResult> {
    config.validate()?;
    let n = initial.len();
    let dt = config.dt;
    let measured = extension.map_or(0..=n.saturating_sub(1), |e| e.measured());
    let mut history = Vec::new();
    let mut checkpoints = Vec::new();

    let (mut gu, mut gv) = (vec![0.0; n], vec![0.0; n]);
    let (mut gu_prev, mut gv_prev) = (vec![0.0; n], vec![0.0; n]);

    let mut current = initial.clone();
    rhs.eval(&current, &mut gu, &mut gv)?;
    let mut next = trial_step(&current, dt, (&gu, &gv))?;
    let mut step = 1;
    loop {
        if let Some(ext) = extension {
            ext.extend(&mut next)?;
            check_finite(&next, step)?;
        }
        let update = max_update(&next, &current, &measured);
        history.push(HistoryEntry {
            step,
            t: next.t,
            max_update: update,
        });
        debug!("step {step} t {:.6} max_update {update:e}", next.t);
        if config.checkpoint_every > 0 && step % config.checkpoint_every == 0 {
            info!(
                "step {step} t {:.6} max_update {update:e} (per unit time {:e})",
                next.t,
                update / dt
            );
            if let Some(s) = sink.as_deref_mut() {
                s(step, &next)?;
            }
            checkpoints.push((step, next.clone()));
        }
        let steady = update < config.tol;
        if steady || step >= config.nmax {
            let reason = if steady {
                StopReason::Steady
            } else {
                StopReason::StepLimit
            };
            info!("stopped after {step} steps at t {:.6}: {reason:?}", next.t);
            return Ok(RunResult {
                state: next,
                steps: step,
                reason,
                history,
                checkpoints,
            });
        }
        std::mem::swap(&mut gu, &mut gu_prev);
        std::mem::swap(&mut gv, &mut gv_prev);
        current = next;
        rhs.eval(&current, &mut gu, &mut gv)?;
        step += 1;
        next = ab2_step(&current, dt, (&gu, &gv), (&gu_prev, &gv_prev), step)?;
    }
}
