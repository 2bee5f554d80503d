//! Independent oracles: composite Gauss–Legendre quadrature, a direct
//! evaluation of the nonlocal operator, a numeric Fourier transform and a
//! Gaussian-elimination solver. None of them call into the library's
//! integrator, weights or linear algebra.
#![allow(dead_code)]

use std::f64::consts::PI;

/// 10-point Gauss–Legendre nodes and weights on [-1, 1].
const GL_X: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_W: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982_0,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

/// Composite 10-point Gauss–Legendre rule with `panels` equal panels.
pub fn gauss(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let w = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * w;
        let r = 0.5 * w;
        let mut s = 0.0;
        for k in 0..5 {
            s += GL_W[k] * (f(c - r * GL_X[k]) + f(c + r * GL_X[k]));
        }
        total += r * s;
    }
    total
}

#[derive(Debug, Clone, Copy)]
pub enum OracleKernel {
    Exponential(f64),
    Algebraic(f64),
}

impl OracleKernel {
    pub fn density(&self, z: f64) -> f64 {
        match *self {
            OracleKernel::Exponential(s) => 0.5 * s * (-s * z.abs()).exp(),
            OracleKernel::Algebraic(a) => 2.0 * a.powi(3) / (PI * (z * z + a * a).powi(2)),
        }
    }

    /// `∫_Z^∞ γ`.
    pub fn one_sided_tail(&self, z: f64) -> f64 {
        match *self {
            OracleKernel::Exponential(s) => 0.5 * (-s * z).exp(),
            // z = a cot ψ turns the tail into (2/π) ∫_0^{atan(a/z)} sin²ψ dψ.
            OracleKernel::Algebraic(a) => 2.0 / PI * gauss(|p: f64| p.sin().powi(2), 0.0, (a / z).atan(), 8),
        }
    }

    pub fn second_moment(&self) -> f64 {
        match *self {
            OracleKernel::Exponential(s) => 2.0 / (s * s),
            OracleKernel::Algebraic(a) => a * a,
        }
    }

    /// Cutoff beyond which `u(x ± z)` is negligible for the test functions
    /// and the rest is handled by `one_sided_tail`.
    fn cutoff(&self) -> f64 {
        match *self {
            OracleKernel::Exponential(s) => 45.0 / s,
            OracleKernel::Algebraic(_) => 40.0,
        }
    }
}

/// `-K u(x) = ∫ (u(x) - u(y)) γ(x - y) dy` for `u` decaying fast at infinity,
/// written as `∫_0^∞ (2u(x) - u(x+z) - u(x-z)) γ(z) dz`.
pub fn minus_k(kernel: OracleKernel, u: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    let z = kernel.cutoff();
    let ux = u(x);
    let body = |t: f64| (2.0 * ux - u(x + t) - u(x - t)) * kernel.density(t);
    // Panels cluster near the origin where the kernel varies fastest.
    let near = gauss(body, 0.0, 2.0, 400);
    let far = gauss(body, 2.0, z, 800);
    near + far + 2.0 * ux * kernel.one_sided_tail(z)
}

/// `γ̂(ξ) = 2 ∫_0^∞ γ(z) cos(ξ z) dz` by quadrature.
pub fn fourier(kernel: OracleKernel, xi: f64) -> f64 {
    let (z, panels) = match kernel {
        OracleKernel::Exponential(s) => (60.0 / s, 4000),
        OracleKernel::Algebraic(_) => (400.0, 40000),
    };
    let body = |t: f64| kernel.density(t) * (xi * t).cos();
    // The remaining algebraic tail is bounded by ∫_Z^∞ γ and is far below
    // the comparison tolerance.
    2.0 * gauss(body, 0.0, z, panels)
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// Smooth, fast-decaying test functions.
pub fn test_functions() -> Vec<(&'static str, Box<dyn Fn(f64) -> f64 + Send + Sync>)> {
    vec![
        ("gaussian", Box::new(|x: f64| (-x * x).exp())),
        ("shifted", Box::new(|x: f64| 2.0 * (-(x - 0.5) * (x - 0.5)).exp())),
        ("odd", Box::new(|x: f64| x * (-x * x).exp())),
        ("wave", Box::new(|x: f64| (2.0 * x).cos() * (-0.5 * x * x).exp())),
        ("sech", Box::new(|x: f64| 1.0 / (2.0 * x).cosh())),
    ]
}

pub fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}
