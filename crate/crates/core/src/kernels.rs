//! Convolution kernels and the closed-form quantities the quadrature needs.
//!
//! Every kernel `γ` here is positive, even and of unit mass. Besides the
//! density we need two antiderivatives with `F'' = γ`, the truncated second
//! moment `f₁(h) = ∫₀ʰ y²γ(y) dy` and the two-sided tail mass
//! `∫_{|y|>R} γ(y) dy`. Integration constants follow `F'(0) = F(0) = 0`, so
//! `F'` is odd and `F` is even.

use std::f64::consts::{FRAC_1_PI, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::Integrator;

/// The closed-form data a kernel provides to the weight computation.
///
/// The quadrature module is generic over this trait so alternative
/// antiderivative conventions can be plugged in (the weights must not depend
/// on them).
pub trait KernelProfile: Send + Sync {
    /// `γ(|z|)`.
    fn density(&self, z: f64) -> f64;

    /// `(F(z), F'(z))` with `F'' = γ`.
    fn antiderivatives(&self, z: f64) -> (f64, f64);

    /// `∫₀ʰ y²γ(y) dy`.
    fn f1(&self, h: f64) -> Result<f64>;

    /// `∫_{|y|>R} γ(y) dy`.
    fn tail_mass(&self, r: f64) -> Result<f64>;

    /// `F(x + h) - 2F(x) + F(x - h)`.
    fn second_difference(&self, x: f64, h: f64) -> f64 {
        let (fp, _) = self.antiderivatives(x + h);
        let (f0, _) = self.antiderivatives(x);
        let (fm, _) = self.antiderivatives(x - h);
        fp - 2.0 * f0 + fm
    }

    /// `∫_{x-h}^{x} T_h(y - x) γ(y) dy = F'(x) - (F(x) - F(x - h))/h`.
    fn far_half_tent(&self, x: f64, h: f64) -> f64 {
        let (f_x, fp_x) = self.antiderivatives(x);
        let (f_m, _) = self.antiderivatives(x - h);
        fp_x - (f_x - f_m) / h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelFamily {
    /// `γ(z) = (σ/2) exp(-σ|z|)`, thin-tailed.
    Exponential,
    /// `γ(z) = 2a³ / (π (z² + a²)²)`, fat-tailed.
    Algebraic,
}

/// A validated kernel: a family plus its positive shape parameter
/// (`σ` for the exponential family, `a` for the algebraic one).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    family: KernelFamily,
    shape: f64,
}

impl Kernel {
    pub fn new(family: KernelFamily, shape: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite()) {
            return Err(Error::Config(format!(
                "kernel shape parameter must be positive and finite, got {shape}"
            )));
        }
        Ok(Self { family, shape })
    }

    pub fn exponential(sigma: f64) -> Result<Self> {
        Self::new(KernelFamily::Exponential, sigma)
    }

    pub fn algebraic(a: f64) -> Result<Self> {
        Self::new(KernelFamily::Algebraic, a)
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    /// `∫ z²γ(z) dz` over the real line.
    pub fn second_moment(&self) -> f64 {
        match self.family {
            KernelFamily::Exponential => 2.0 / (self.shape * self.shape),
            KernelFamily::Algebraic => self.shape * self.shape,
        }
    }

    /// Fourier transform `∫ γ(z) e^{-iξz} dz` (real, since γ is even).
    pub fn fourier_transform(&self, xi: f64) -> f64 {
        match self.family {
            KernelFamily::Exponential => {
                let s2 = self.shape * self.shape;
                s2 / (s2 + xi * xi)
            }
            KernelFamily::Algebraic => {
                let s = self.shape * xi.abs();
                (1.0 + s) * (-s).exp()
            }
        }
    }

    /// `γ̂(ξ) - 1`, evaluated without cancellation near `ξ = 0`.
    pub fn fourier_transform_minus_one(&self, xi: f64) -> f64 {
        match self.family {
            KernelFamily::Exponential => {
                let s2 = self.shape * self.shape;
                -(xi * xi) / (s2 + xi * xi)
            }
            KernelFamily::Algebraic => {
                let s = self.shape * xi.abs();
                if s < 0.5 {
                    // (1+s)e^{-s} - 1 = sum_{n>=2} (-1)^n (1-n) s^n / n!
                    let mut term = s; // s^n / n! at n = 1
                    let mut sum = 0.0;
                    for n in 2..40 {
                        term *= s / n as f64;
                        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                        sum += sign * (1.0 - n as f64) * term;
                        if term < 1e-18 * sum.abs() {
                            break;
                        }
                    }
                    sum
                } else {
                    (1.0 + s) * (-s).exp() - 1.0
                }
            }
        }
    }
}

/// `atan(s) - s/(1+s²)`, with a series below `s = 0.1`.
fn atan_minus_rational(s: f64) -> f64 {
    if s < 0.1 {
        // sum_{k>=1} (-1)^{k+1} 2k/(2k+1) s^{2k+1}
        let s2 = s * s;
        let mut p = s * s2;
        let mut sum = 0.0;
        for k in 1..30 {
            let kf = k as f64;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let term = sign * 2.0 * kf / (2.0 * kf + 1.0) * p;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            p *= s2;
        }
        sum
    } else {
        s.atan() - s / (1.0 + s * s)
    }
}

/// `t - atan(t)`, with a series below `t = 0.1`.
fn t_minus_atan(t: f64) -> f64 {
    if t < 0.1 {
        // sum_{k>=1} (-1)^{k+1} t^{2k+1}/(2k+1)
        let t2 = t * t;
        let mut p = t * t2;
        let mut sum = 0.0;
        for k in 1..30 {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let term = sign * p / (2 * k + 1) as f64;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            p *= t2;
        }
        sum
    } else {
        t - t.atan()
    }
}

/// `1 - e^{-s}(1 + s + s²/2)`, the regularized lower incomplete gamma P(3, s).
fn incomplete_gamma3(s: f64) -> f64 {
    if s < 1.0 {
        // e^{-s} sum_{k>=3} s^k / k!
        let mut term = s * s * s / 6.0;
        let mut sum = 0.0;
        for k in 3..60 {
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
            term *= s / (k + 1) as f64;
        }
        sum * (-s).exp()
    } else {
        1.0 - (-s).exp() * (1.0 + s + 0.5 * s * s)
    }
}

impl KernelProfile for Kernel {
    fn density(&self, z: f64) -> f64 {
        let z = z.abs();
        match self.family {
            KernelFamily::Exponential => 0.5 * self.shape * (-self.shape * z).exp(),
            KernelFamily::Algebraic => {
                let a = self.shape;
                let d = z * z + a * a;
                2.0 * a * a * a * FRAC_1_PI / (d * d)
            }
        }
    }

    fn antiderivatives(&self, z: f64) -> (f64, f64) {
        let az = z.abs();
        match self.family {
            KernelFamily::Exponential => {
                let sigma = self.shape;
                let em1 = (-sigma * az).exp_m1();
                let f = 0.5 * az + em1 / (2.0 * sigma);
                let fp = -0.5 * em1 * z.signum();
                (f, if z == 0.0 { 0.0 } else { fp })
            }
            KernelFamily::Algebraic => {
                let a = self.shape;
                let f = FRAC_1_PI * z * (z / a).atan();
                let fp = FRAC_1_PI * ((z / a).atan() + a * z / (z * z + a * a));
                (f, fp)
            }
        }
    }

    fn f1(&self, h: f64) -> Result<f64> {
        if h.is_nan() || h < 0.0 {
            return Err(Error::Argument(format!("f1 needs h >= 0, got {h}")));
        }
        if h.is_infinite() {
            return Ok(0.5 * self.second_moment());
        }
        Ok(match self.family {
            KernelFamily::Exponential => {
                let sigma = self.shape;
                incomplete_gamma3(sigma * h) / (sigma * sigma)
            }
            KernelFamily::Algebraic => {
                let a = self.shape;
                a * a * FRAC_1_PI * atan_minus_rational(h / a)
            }
        })
    }

    fn tail_mass(&self, r: f64) -> Result<f64> {
        if r.is_nan() || r < 0.0 {
            return Err(Error::Argument(format!("tail mass needs R >= 0, got {r}")));
        }
        Ok(match self.family {
            KernelFamily::Exponential => (-self.shape * r).exp(),
            KernelFamily::Algebraic => {
                if r == 0.0 {
                    1.0
                } else {
                    2.0 * FRAC_1_PI * atan_minus_rational(self.shape / r)
                }
            }
        })
    }

    fn second_difference(&self, x: f64, h: f64) -> f64 {
        if x - h <= 0.0 {
            let (fp, _) = self.antiderivatives(x + h);
            let (f0, _) = self.antiderivatives(x);
            let (fm, _) = self.antiderivatives(x - h);
            return fp - 2.0 * f0 + fm;
        }
        match self.family {
            KernelFamily::Exponential => {
                // The linear part of F drops out exactly on z > 0.
                let sigma = self.shape;
                let half = (0.5 * sigma * h).sinh();
                (-sigma * x).exp() * 2.0 * half * half / sigma
            }
            KernelFamily::Algebraic => {
                // F(z) = z/2 - a/π + ψ(z)/π on z > 0, ψ(z) = z (a/z - atan(a/z)).
                let a = self.shape;
                let psi = |z: f64| z * t_minus_atan(a / z);
                (psi(x + h) - 2.0 * psi(x) + psi(x - h)) / PI
            }
        }
    }

    fn far_half_tent(&self, x: f64, h: f64) -> f64 {
        if x - h <= 0.0 {
            let (f_x, fp_x) = self.antiderivatives(x);
            let (f_m, _) = self.antiderivatives(x - h);
            return fp_x - (f_x - f_m) / h;
        }
        match self.family {
            KernelFamily::Exponential => {
                let sigma = self.shape;
                0.5 * (-sigma * x).exp() * expm1_over_s_minus_one(sigma * h)
            }
            KernelFamily::Algebraic => {
                let a = self.shape;
                let psi = |z: f64| z * t_minus_atan(a / z);
                (-atan_minus_rational(a / x) - (psi(x) - psi(x - h)) / h) / PI
            }
        }
    }
}

/// `(e^s - 1)/s - 1`.
fn expm1_over_s_minus_one(s: f64) -> f64 {
    if s < 0.1 {
        // sum_{k>=1} s^k / (k+1)!
        let mut term = 0.5 * s;
        let mut sum = 0.0;
        for k in 1..30 {
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
            term *= s / (k + 2) as f64;
        }
        sum
    } else {
        s.exp_m1() / s - 1.0
    }
}

/// Which half of the exterior a tail integral samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExteriorSide {
    /// `∫_{y>R} g(x-y)γ(y) dy`: samples `g` to the left of `x - R`.
    Left,
    /// `∫_{y<-R} g(x-y)γ(y) dy`: samples `g` to the right of `x + R`.
    Right,
}

/// Tail integral of an exterior profile `g` against the kernel, computed by
/// adaptive quadrature on the semi-infinite range.
pub fn tail_integral_against<K, G>(
    kernel: &K,
    x: f64,
    r: f64,
    g: G,
    side: ExteriorSide,
    integrator: &Integrator,
) -> Result<f64>
where
    K: KernelProfile + ?Sized,
    G: Fn(f64) -> f64,
{
    if !(r > 0.0) {
        return Err(Error::Argument(format!(
            "tail integral needs R > 0, got {r}"
        )));
    }
    let value = match side {
        ExteriorSide::Left => {
            integrator.integrate_to_infinity(|y| g(x - y) * kernel.density(y), r)
        }
        ExteriorSide::Right => {
            integrator.integrate_to_infinity(|y| g(x + y) * kernel.density(y), r)
        }
    }
    .map_err(|e| Error::Numerical(format!("tail integral at x = {x}: {e}")))?;
    Ok(value)
}
