//! Periodic comparison solver. On `[-L, L)` with `N` nodes the operator is
//! diagonal in Fourier space with multiplier `γ̂(ξ_k) - 1`, `ξ_k = π k / L`.
//!
//! The default scheme is IMEX-BDF2 (implicit diffusion, extrapolated
//! reaction) started by one IMEX-Euler step:
//!
//! ```text
//! û¹      = (û⁰ + dt Ĝ⁰) / (1 - dt d K̂)
//! û^{n+1} = (4ûⁿ - û^{n-1} + 2 dt (2Ĝⁿ - Ĝ^{n-1})) / (3 - 2 dt d K̂)
//! ```

use std::sync::Arc;

use log::info;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::model::{GrayScottParams, SystemState};
use crate::timestepper::{self, HistoryEntry, RunResult, StepperConfig, StopReason};

/// `γ̂(ξ) - 1`.
pub fn symbol(kernel: &Kernel, xi: f64) -> f64 {
    kernel.fourier_transform_minus_one(xi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralScheme {
    #[default]
    ImexBdf2,
    /// Fully explicit AB2 with the diffusion applied through the FFT.
    ExplicitAb2,
}

#[derive(Clone)]
pub struct SpectralOperator {
    half_width: f64,
    symbols: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SpectralOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralOperator")
            .field("half_width", &self.half_width)
            .field("n", &self.symbols.len())
            .finish()
    }
}

impl SpectralOperator {
    pub fn new(kernel: &Kernel, half_width: f64, n: usize) -> Result<Self> {
        if !n.is_power_of_two() || n < 2 {
            return Err(Error::Config(format!(
                "periodic grid size must be a power of two, got {n}"
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::Config(format!(
                "half-width must be positive, got {half_width}"
            )));
        }
        let mut planner = FftPlanner::new();
        let symbols = (0..n)
            .map(|k| symbol(kernel, wavenumber(k, n, half_width)))
            .collect();
        Ok(Self {
            half_width,
            symbols,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_width / self.len() as f64
    }

    /// `x_k = -L + k h`, right endpoint excluded.
    pub fn nodes(&self) -> Vec<f64> {
        let h = self.h();
        (0..self.len()).map(|k| -self.half_width + k as f64 * h).collect()
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes().into_iter().map(f).collect()
    }

    /// Multipliers in FFT order.
    pub fn symbols(&self) -> &[f64] {
        &self.symbols
    }

    pub fn transform(&self, u: &[f64]) -> Result<Vec<Complex64>> {
        if u.len() != self.len() {
            return Err(Error::Argument(format!(
                "grid function has {} values, expected {}",
                u.len(),
                self.len()
            )));
        }
        let mut buf: Vec<Complex64> = u.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward.process(&mut buf);
        Ok(buf)
    }

    /// Inverse transform; fails if the result is not real to 1e-12.
    pub fn inverse_transform(&self, mut hat: Vec<Complex64>) -> Result<Vec<f64>> {
        self.inverse.process(&mut hat);
        let scale = 1.0 / self.len() as f64;
        let mut worst = 0.0f64;
        let mut size = 0.0f64;
        let out = hat
            .iter()
            .map(|z| {
                worst = worst.max(z.im.abs());
                size = size.max(z.re.abs());
                z.re * scale
            })
            .collect();
        if worst * scale > 1e-12 * (size * scale).max(1.0) {
            return Err(Error::Numerical(format!(
                "inverse transform left imaginary residue {:e}",
                worst * scale
            )));
        }
        Ok(out)
    }

    /// `K u`.
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        let mut hat = self.transform(u)?;
        for (z, s) in hat.iter_mut().zip(&self.symbols) {
            *z *= *s;
        }
        self.inverse_transform(hat)
    }
}

fn wavenumber(k: usize, n: usize, half_width: f64) -> f64 {
    let signed = if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    };
    std::f64::consts::PI * signed / half_width
}

fn reaction(params: &GrayScottParams, u: &[f64], v: &[f64]) -> (Vec<f64>, Vec<f64>) {
    u.iter()
        .zip(v)
        .map(|(&u, &v)| {
            let uvv = u * v * v;
            (params.feed * (1.0 - u) - uvv, -params.removal * v + uvv)
        })
        .unzip()
}

fn check_finite(state: &SystemState, step: usize) -> Result<()> {
    if state.is_finite() {
        Ok(())
    } else {
        Err(Error::Divergence {
            step,
            time: state.t,
            detail: "non-finite value in spectral state".into(),
        })
    }
}

pub struct SpectralSolver<'a> {
    pub op: &'a SpectralOperator,
    pub params: GrayScottParams,
    pub scheme: SpectralScheme,
}

impl SpectralSolver<'_> {
    pub fn run(&self, initial: &SystemState, config: &StepperConfig) -> Result<RunResult> {
        config.validate()?;
        if initial.len() != self.op.len() {
            return Err(Error::Argument(
                "initial state does not match the periodic grid".into(),
            ));
        }
        match self.scheme {
            SpectralScheme::ExplicitAb2 => {
                let mut g = |s: &SystemState, du: &mut [f64], dv: &mut [f64]| -> Result<()> {
                    let ku = self.op.apply(&s.u)?;
                    let kv = self.op.apply(&s.v)?;
                    let (ru, rv) = reaction(&self.params, &s.u, &s.v);
                    for i in 0..du.len() {
                        du[i] = self.params.d_u * ku[i] + ru[i];
                        dv[i] = self.params.d_v * kv[i] + rv[i];
                    }
                    Ok(())
                };
                timestepper::run(initial, config, &mut g, None, None)
            }
            SpectralScheme::ImexBdf2 => self.run_imex(initial, config),
        }
    }

    fn run_imex(&self, initial: &SystemState, config: &StepperConfig) -> Result<RunResult> {
        let op = self.op;
        let dt = config.dt;
        let p = &self.params;
        let hat_reaction = |s: &SystemState| -> Result<(Vec<Complex64>, Vec<Complex64>)> {
            let (ru, rv) = reaction(p, &s.u, &s.v);
            Ok((op.transform(&ru)?, op.transform(&rv)?))
        };

        let mut history = Vec::new();
        let mut checkpoints = Vec::new();

        let mut prev = initial.clone();
        let (mut uh_prev, mut vh_prev) = (op.transform(&prev.u)?, op.transform(&prev.v)?);
        let (mut gu_prev, mut gv_prev) = hat_reaction(&prev)?;

        let euler = |w: &[Complex64], g: &[Complex64], d: f64| -> Vec<Complex64> {
            w.iter()
                .zip(g)
                .zip(op.symbols())
                .map(|((w, g), s)| (w + dt * g) / (1.0 - dt * d * s))
                .collect()
        };
        let (mut uh, mut vh) = (
            euler(&uh_prev, &gu_prev, p.d_u),
            euler(&vh_prev, &gv_prev, p.d_v),
        );
        let mut current = SystemState {
            u: op.inverse_transform(uh.clone())?,
            v: op.inverse_transform(vh.clone())?,
            t: prev.t + dt,
        };
        let mut step = 1;
        loop {
            check_finite(&current, step)?;
            let update = current
                .u
                .iter()
                .zip(&prev.u)
                .chain(current.v.iter().zip(&prev.v))
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            history.push(HistoryEntry {
                step,
                t: current.t,
                max_update: update,
            });
            if config.checkpoint_every > 0 && step % config.checkpoint_every == 0 {
                info!("spectral step {step} t {:.6} max_update {update:e}", current.t);
                checkpoints.push((step, current.clone()));
            }
            let steady = update < config.tol;
            if steady || step >= config.nmax {
                return Ok(RunResult {
                    state: current,
                    steps: step,
                    reason: if steady {
                        StopReason::Steady
                    } else {
                        StopReason::StepLimit
                    },
                    history,
                    checkpoints,
                });
            }
            let (gu, gv) = hat_reaction(&current)?;
            let bdf = |w: &[Complex64], wm: &[Complex64], g: &[Complex64], gm: &[Complex64], d: f64| {
                (0..w.len())
                    .map(|k| {
                        (4.0 * w[k] - wm[k] + 2.0 * dt * (2.0 * g[k] - gm[k]))
                            / (3.0 - 2.0 * dt * d * op.symbols()[k])
                    })
                    .collect::<Vec<_>>()
            };
            let un = bdf(&uh, &uh_prev, &gu, &gu_prev, p.d_u);
            let vn = bdf(&vh, &vh_prev, &gv, &gv_prev, p.d_v);
            uh_prev = std::mem::replace(&mut uh, un);
            vh_prev = std::mem::replace(&mut vh, vn);
            gu_prev = gu;
            gv_prev = gv;
            prev = current;
            current = SystemState {
                u: op.inverse_transform(uh.clone())?,
                v: op.inverse_transform(vh.clone())?,
                t: prev.t + dt,
            };
            step += 1;
        }
    }
}
