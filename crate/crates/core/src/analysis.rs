//! Discrete error norms, observed orders and pulse-profile metrics.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
}

impl Norm {
    pub fn exponent(self) -> f64 {
        match self {
            Norm::L1 => 1.0,
            Norm::L2 => 2.0,
        }
    }
}

/// Trapezoid-weighted `(Σ w_i |u_i - r_i|^p)^{1/p}` on a uniform mesh.
pub fn lp_error(u: &[f64], reference: &[f64], norm: Norm, h: f64) -> Result<f64> {
    if u.len() != reference.len() {
        return Err(Error::Argument(format!(
            "grid functions differ in length: {} vs {}",
            u.len(),
            reference.len()
        )));
    }
    let n = u.len();
    let p = norm.exponent();
    let sum: f64 = u
        .iter()
        .zip(reference)
        .enumerate()
        .map(|(i, (a, b))| {
            let w = if n > 1 && (i == 0 || i == n - 1) { 0.5 } else { 1.0 };
            w * (a - b).abs().powf(p)
        })
        .sum();
    Ok((h * sum).powf(1.0 / p))
}

/// Samples a fine dyadic-refined grid function at the coarse nodes.
pub fn restrict_to_coarse(fine: &[f64], coarse_len: usize) -> Result<Vec<f64>> {
    if coarse_len < 2 || fine.len() < coarse_len {
        return Err(Error::Argument(format!(
            "cannot restrict {} values onto {coarse_len}",
            fine.len()
        )));
    }
    let (fm, cm) = (fine.len() - 1, coarse_len - 1);
    if fm % cm != 0 {
        return Err(Error::Argument(format!(
            "grids with M = {fm} and M = {cm} are not nested"
        )));
    }
    let stride = fm / cm;
    Ok(fine.iter().step_by(stride).copied().collect())
}

/// `log(e_f / e_c) / log(h_f / h_c)`; `None` when either error vanishes.
pub fn observed_order(e_coarse: f64, e_fine: f64, h_coarse: f64, h_fine: f64) -> Result<Option<f64>> {
    if !(h_fine > 0.0 && h_fine < h_coarse) {
        return Err(Error::Argument(format!(
            "need 0 < h_fine < h_coarse, got {h_fine} and {h_coarse}"
        )));
    }
    if e_coarse < 0.0 || e_fine < 0.0 || !e_coarse.is_finite() || !e_fine.is_finite() {
        return Err(Error::Argument("errors must be finite and non-negative".into()));
    }
    if e_coarse == 0.0 || e_fine == 0.0 {
        return Ok(None);
    }
    Ok(Some((e_fine / e_coarse).ln() / (h_fine / h_coarse).ln()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceKind {
    Exact,
    FinestMesh,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub m: usize,
    pub h: f64,
    pub dt: f64,
    pub error_u: f64,
    pub error_v: f64,
    pub order_u: Option<f64>,
    pub order_v: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub norm: Norm,
    pub reference: ReferenceKind,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn new(norm: Norm, reference: ReferenceKind) -> Self {
        Self {
            norm,
            reference,
            rows: Vec::new(),
        }
    }

    /// Appends a refinement level; rows must arrive coarse to fine.
    pub fn push(&mut self, m: usize, h: f64, dt: f64, error_u: f64, error_v: f64) -> Result<()> {
        let (order_u, order_v) = match self.rows.last() {
            None => (None, None),
            Some(prev) => (
                observed_order(prev.error_u, error_u, prev.h, h)?,
                observed_order(prev.error_v, error_v, prev.h, h)?,
            ),
        };
        self.rows.push(ConvergenceRow {
            m,
            h,
            dt,
            error_u,
            error_v,
            order_u,
            order_v,
        });
        Ok(())
    }

    fn mean(orders: impl Iterator<Item = Option<f64>>) -> Option<f64> {
        let v: Vec<f64> = orders.flatten().collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }

    pub fn average_order_u(&self) -> Option<f64> {
        Self::mean(self.rows.iter().map(|r| r.order_u))
    }

    pub fn average_order_v(&self) -> Option<f64> {
        Self::mean(self.rows.iter().map(|r| r.order_v))
    }

    pub fn errors_decrease(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].error_u < w[0].error_u && w[1].error_v < w[0].error_v)
    }

    /// CSV with header `M,h,dt,error_u,order_u,error_v,order_v`. The first
    /// row has no order (`-`); a vanishing error gives `undefined`.
    pub fn to_csv(&self) -> String {
        let order = |i: usize, o: Option<f64>| match (i, o) {
            (0, _) => "-".to_string(),
            (_, Some(x)) => format!("{x:e}"),
            (_, None) => "undefined".to_string(),
        };
        let mut s = String::from("M,h,dt,error_u,order_u,error_v,order_v\n");
        for (i, r) in self.rows.iter().enumerate() {
            let _ = writeln!(
                s,
                "{},{:e},{:e},{:e},{},{:e},{}",
                r.m,
                r.h,
                r.dt,
                r.error_u,
                order(i, r.order_u),
                r.error_v,
                order(i, r.order_v)
            );
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileMetrics {
    pub max_value: f64,
    pub max_location: f64,
    /// Measure of `{v ≥ 0.95 max v}` under linear interpolation.
    pub plateau_width: f64,
    pub boundary_left: f64,
    pub boundary_right: f64,
    /// Strict sign changes of the discrete derivative inside the plateau.
    pub oscillations: usize,
}

/// Fraction of the plateau level below which derivative increments count as
/// flat.
const FLAT_THRESHOLD: f64 = 1e-9;

pub fn profile_metrics(v: &[f64], x: &[f64]) -> Result<ProfileMetrics> {
    if v.len() != x.len() || v.len() < 2 {
        return Err(Error::Argument("profile and nodes must match, with ≥ 2 nodes".into()));
    }
    if v.iter().any(|a| !a.is_finite()) {
        return Err(Error::Argument("profile is not finite".into()));
    }
    let (imax, &max) = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    if v.iter().all(|a| *a == 0.0) || max <= 0.0 {
        return Err(Error::Numerical(
            "degenerate profile: no positive maximum".into(),
        ));
    }
    let level = 0.95 * max;

    let mut width = 0.0;
    for i in 0..v.len() - 1 {
        let (a, b) = (v[i] - level, v[i + 1] - level);
        let dx = x[i + 1] - x[i];
        width += match (a >= 0.0, b >= 0.0) {
            (true, true) => dx,
            (false, false) => 0.0,
            (true, false) => dx * a / (a - b),
            (false, true) => dx * b / (b - a),
        };
    }

    let flat = FLAT_THRESHOLD * max;
    let mut oscillations = 0;
    let mut last_sign = 0i8;
    for i in 0..v.len() - 1 {
        if v[i] < level || v[i + 1] < level {
            last_sign = 0;
            continue;
        }
        let d = v[i + 1] - v[i];
        if d.abs() <= flat {
            continue;
        }
        let s = if d > 0.0 { 1 } else { -1 };
        if last_sign != 0 && s != last_sign {
            oscillations += 1;
        }
        last_sign = s;
    }

    Ok(ProfileMetrics {
        max_value: max,
        max_location: x[imax],
        plateau_width: width,
        boundary_left: v[0],
        boundary_right: v[v.len() - 1],
        oscillations,
    })
}
