//! Globally adaptive 21-point Gauss–Kronrod quadrature.
//!
//! Intervals are kept in a max-heap keyed by their error estimate and the
//! worst one is bisected until the summed estimate falls below the requested
//! tolerance. Semi-infinite ranges use the map `y = a + (1 - t)/t`, which
//! sends `t in (0, 1]` onto `[a, inf)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_36,
    0.295_524_224_714_752_87,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];

/// One application of the 21-point Kronrod rule with its embedded 10-point
/// Gauss rule. Returns `(estimate, error, roundoff floor of the error)`.
fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_k = WGK[10] * f_center;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        // Gauss nodes sit at the odd Kronrod indices.
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let abs_half = half.abs();
    let err = ((res_k - res_g) * half).abs();
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;

    let mut scaled = err;
    if res_asc != 0.0 && scaled != 0.0 {
        scaled = res_asc * (200.0 * scaled / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(floor);
    }
    (res_k * half, scaled, floor)
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    floor: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_segments: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_segments: 4000,
        }
    }
}

impl Integrator {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        self.integrate_breaks(f, &[a, b])
    }

    /// Integrates `f` over `[points[0], points[last]]`, starting the
    /// bisection from the given breakpoints (kinks, jumps).
    pub fn integrate_breaks<F: Fn(f64) -> f64>(&self, f: F, points: &[f64]) -> Result<f64> {
        if points.len() < 2 {
            return Err(Error::Argument("need at least two breakpoints".into()));
        }
        let mut heap = BinaryHeap::new();
        let mut total = 0.0;
        let mut total_err = 0.0;
        let mut total_floor = 0.0;
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a == b {
                continue;
            }
            let (value, error, floor) = kronrod21(&f, a, b);
            total += value;
            total_err += error;
            total_floor += floor;
            heap.push(Segment {
                a,
                b,
                value,
                error,
                floor,
            });
        }

        // Bisection cannot push the estimate below the summed roundoff floor.
        while total_err > self.abs_tol.max(self.rel_tol * total.abs()).max(1.5 * total_floor) {
            if !total.is_finite() || !total_err.is_finite() {
                return Err(Error::Numerical("non-finite integrand".into()));
            }
            if heap.len() >= self.max_segments {
                return Err(Error::Numerical(format!(
                    "adaptive quadrature did not converge: estimate {total:e}, error {total_err:e} after {} segments",
                    heap.len()
                )));
            }
            let worst = match heap.pop() {
                Some(s) => s,
                None => break,
            };
            let mid = 0.5 * (worst.a + worst.b);
            let (lo, hi) = (worst.a.min(worst.b), worst.a.max(worst.b));
            if mid <= lo || mid >= hi {
                // Segment is at the resolution limit; accept what we have.
                heap.push(worst);
                break;
            }
            let (v1, e1, r1) = kronrod21(&f, worst.a, mid);
            let (v2, e2, r2) = kronrod21(&f, mid, worst.b);
            total += v1 + v2 - worst.value;
            total_err += e1 + e2 - worst.error;
            total_floor += r1 + r2 - worst.floor;
            heap.push(Segment {
                a: worst.a,
                b: mid,
                value: v1,
                error: e1,
                floor: r1,
            });
            heap.push(Segment {
                a: mid,
                b: worst.b,
                value: v2,
                error: e2,
                floor: r2,
            });
        }

        // Re-sum to shed the drift of the running updates.
        let total: f64 = heap.iter().map(|s| s.value).sum();
        if !total.is_finite() {
            return Err(Error::Numerical("non-finite integrand".into()));
        }
        Ok(total)
    }

    /// Integrates `f` over `[a, inf)`.
    pub fn integrate_to_infinity<F: Fn(f64) -> f64>(&self, f: F, a: f64) -> Result<f64> {
        self.integrate(
            |t: f64| {
                let y = a + (1.0 - t) / t;
                f(y) / (t * t)
            },
            0.0,
            1.0,
        )
    }

    /// Integrates `f` over `(-inf, b]`.
    pub fn integrate_from_neg_infinity<F: Fn(f64) -> f64>(&self, f: F, b: f64) -> Result<f64> {
        self.integrate_to_infinity(|y| f(-y), -b)
    }
}
