//! Nonlocal boundary constraints and the Neumann extension solve.
//!
//! A nonlocal operator samples its argument everywhere, so a constraint has
//! to say what `u` is outside `Ω = [-L, L]`:
//!
//! * Dirichlet: `u = g` on the exterior.
//! * Free: `u - u_ref` decays like `|L|^q / |x|^q` from its boundary value.
//! * Neumann: `K u = 0` on a collar `ℓ < |x| ≤ L = 2ℓ`, free decay beyond.
//!
//! The Neumann collar values are recovered from the inner values by a linear
//! block solve that is factorized once per operator.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::quadrature::{DiscreteOperator, Grid};

/// Exterior data for a Dirichlet constraint.
#[derive(Clone)]
pub enum ExteriorData {
    Constant(f64),
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl ExteriorData {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            ExteriorData::Constant(c) => *c,
            ExteriorData::Function(f) => f(x),
        }
    }
}

impl fmt::Debug for ExteriorData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExteriorData::Constant(c) => write!(f, "Constant({c})"),
            ExteriorData::Function(_) => write!(f, "Function(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum BoundaryConstraint {
    Dirichlet {
        exterior: ExteriorData,
    },
    Free {
        /// Decay exponent `q`.
        decay: f64,
        /// Far-field state `u_ref` the decaying part relaxes to.
        far_field: f64,
    },
    Neumann {
        /// Half-width `ℓ` of the physical domain; the operator lives on `2ℓ`.
        inner_half_width: f64,
        decay: f64,
        far_field: f64,
    },
}

impl BoundaryConstraint {
    pub fn dirichlet_constant(value: f64) -> Self {
        Self::Dirichlet {
            exterior: ExteriorData::Constant(value),
        }
    }

    pub fn dirichlet_fn(g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Dirichlet {
            exterior: ExteriorData::Function(Arc::new(g)),
        }
    }

    pub fn free(decay: f64, far_field: f64) -> Self {
        Self::Free { decay, far_field }
    }

    pub fn neumann(inner_half_width: f64, decay: f64, far_field: f64) -> Self {
        Self::Neumann {
            inner_half_width,
            decay,
            far_field,
        }
    }

    pub fn is_neumann(&self) -> bool {
        matches!(self, Self::Neumann { .. })
    }

    /// Checks the constraint against the grid it is used on.
    pub fn validate(&self, grid: &Grid) -> Result<()> {
        match self {
            Self::Dirichlet { exterior } => {
                if let ExteriorData::Constant(c) = exterior {
                    if !c.is_finite() {
                        return Err(Error::Config("Dirichlet value must be finite".into()));
                    }
                }
                Ok(())
            }
            Self::Free { decay, far_field } => check_decay(*decay, *far_field),
            Self::Neumann {
                inner_half_width,
                decay,
                far_field,
            } => {
                check_decay(*decay, *far_field)?;
                let l = grid.half_width();
                if ((2.0 * inner_half_width - l) / l).abs() > 1e-12 {
                    return Err(Error::Config(format!(
                        "Neumann constraint needs L = 2ℓ, got L = {l}, ℓ = {inner_half_width}"
                    )));
                }
                if grid.m() % 4 != 0 {
                    return Err(Error::Config(format!(
                        "Neumann constraint needs M divisible by 4 so ±ℓ are nodes, got {}",
                        grid.m()
                    )));
                }
                Ok(())
            }
        }
    }
}

fn check_decay(decay: f64, far_field: f64) -> Result<()> {
    if !decay.is_finite() || !far_field.is_finite() {
        return Err(Error::Config(format!(
            "decay exponent and far-field value must be finite, got q = {decay}, u_ref = {far_field}"
        )));
    }
    Ok(())
}

/// Value the constraint assigns at an exterior point `|x| > L`, given the
/// current boundary values `u(-L)` and `u(L)`.
pub fn exterior_value(
    bc: &BoundaryConstraint,
    x: f64,
    u_left: f64,
    u_right: f64,
    half_width: f64,
) -> Result<f64> {
    if x.abs() <= half_width {
        return Err(Error::Argument(format!(
            "x = {x} is inside the domain [-{half_width}, {half_width}]"
        )));
    }
    Ok(match bc {
        BoundaryConstraint::Dirichlet { exterior } => exterior.value(x),
        BoundaryConstraint::Free { decay, far_field }
        | BoundaryConstraint::Neumann {
            decay, far_field, ..
        } => {
            let boundary = if x < 0.0 { u_left } else { u_right };
            let ratio = (half_width / x.abs()).powf(*decay);
            far_field + ratio * (boundary - far_field)
        }
    })
}

/// Factorized collar system for one Neumann operator.
#[derive(Clone)]
pub struct NeumannExtension {
    grid: Grid,
    inner_lo: usize,
    inner_hi: usize,
    outer: Vec<usize>,
    lu: Arc<nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>>,
    pivot_ratio: f64,
}

impl fmt::Debug for NeumannExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NeumannExtension")
            .field("grid", &self.grid)
            .field("inner", &(self.inner_lo..=self.inner_hi))
            .field("outer_len", &self.outer.len())
            .field("pivot_ratio", &self.pivot_ratio)
            .finish()
    }
}

impl NeumannExtension {
    /// Restricts the operator to the collar rows and factorizes the
    /// collar-collar block.
    pub fn new(op: &DiscreteOperator) -> Result<Self> {
        if !op.boundary().is_neumann() {
            return Err(Error::Config(
                "extension needs an operator assembled with a Neumann constraint".into(),
            ));
        }
        let grid = *op.grid();
        let m = grid.m();
        let (inner_lo, inner_hi) = (m / 4, 3 * m / 4);
        let outer: Vec<usize> = (0..inner_lo).chain(inner_hi + 1..=m).collect();
        let n = outer.len();
        let block = DMatrix::from_fn(n, n, |r, c| op.effective_entry(outer[r], outer[c]));
        let lu = block.lu();
        let u = lu.u();
        let diag = u.diagonal();
        let max = diag.iter().fold(0.0f64, |a, d| a.max(d.abs()));
        let min = diag.iter().fold(f64::INFINITY, |a, d| a.min(d.abs()));
        let pivot_ratio = if max > 0.0 { min / max } else { 0.0 };
        if !(pivot_ratio > 1e-14) {
            return Err(Error::Singular { pivot_ratio });
        }
        Ok(Self {
            grid,
            inner_lo,
            inner_hi,
            outer,
            lu: Arc::new(lu),
            pivot_ratio,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Array indices of the physical (inner) nodes, `|x| ≤ ℓ`.
    pub fn inner_range(&self) -> std::ops::RangeInclusive<usize> {
        self.inner_lo..=self.inner_hi
    }

    /// Array indices of the collar nodes.
    pub fn outer_indices(&self) -> &[usize] {
        &self.outer
    }

    /// `min |U_ii| / max |U_ii|` of the factorization.
    pub fn pivot_ratio(&self) -> f64 {
        self.pivot_ratio
    }

    /// Overwrites the collar values of `u` so that `K u = 0` there; the inner
    /// values are left untouched.
    pub fn extend_in_place(&self, op: &DiscreteOperator, u: &mut [f64]) -> Result<()> {
        if u.len() != self.grid.len() || op.grid() != &self.grid {
            return Err(Error::Argument(
                "grid function does not match the extension grid".into(),
            ));
        }
        let far_field = match op.boundary() {
            BoundaryConstraint::Neumann { far_field, .. } => *far_field,
            _ => 0.0,
        };
        // Solved for the deviation from the far-field state, which the
        // operator annihilates together with its exterior data.
        let mut masked = vec![0.0; u.len()];
        for k in self.inner_lo..=self.inner_hi {
            masked[k] = u[k] - far_field;
        }
        let mut coupled = vec![0.0; u.len()];
        op.matrix().matvec_into(&masked, &mut coupled);
        let rhs = DVector::from_iterator(self.outer.len(), self.outer.iter().map(|&r| -coupled[r]));
        let sol = self.lu.solve(&rhs).ok_or(Error::Singular {
            pivot_ratio: self.pivot_ratio,
        })?;
        for (&k, &val) in self.outer.iter().zip(sol.iter()) {
            u[k] = far_field + val;
        }
        Ok(())
    }

    /// Extends values given on the inner nodes only to the whole grid.
    pub fn extend_inner(&self, op: &DiscreteOperator, u_inner: &[f64]) -> Result<Vec<f64>> {
        let expected = self.inner_hi - self.inner_lo + 1;
        if u_inner.len() != expected {
            return Err(Error::Argument(format!(
                "inner function has {} values, expected {expected}",
                u_inner.len()
            )));
        }
        let mut u = vec![0.0; self.grid.len()];
        u[self.inner_lo..=self.inner_hi].copy_from_slice(u_inner);
        self.extend_in_place(op, &mut u)?;
        Ok(u)
    }

    /// `max |K u|` over the collar nodes.
    pub fn outer_residual(&self, op: &DiscreteOperator, u: &[f64]) -> Result<f64> {
        let ku = op.apply(u)?;
        Ok(self.outer.iter().fold(0.0f64, |a, &k| a.max(ku[k].abs())))
    }
}
