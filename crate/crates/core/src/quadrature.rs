//! Quadrature weights for the nonlocal operator and its dense assembly.
//!
//! On the uniform grid `x_i = i h`, `i = -M/2..=M/2`, the operator is
//! approximated by
//!
//! ```text
//! -[K u](x_i) ≈ Σ_{j=-M..M} w_j (u_i - u_{i-j}) + C u_i - D_i
//! ```
//!
//! where the weights come from integrating tent functions against the kernel,
//! `C` is the kernel mass beyond `L_W = 2L` and `D_i` is the exterior data
//! integrated against that far tail. Samples `u_{i-j}` that fall outside
//! `[-L, L]` are supplied by the boundary constraint.

use std::sync::Arc;

use crate::boundary::{BoundaryConstraint, ExteriorData};
use crate::error::{Error, Result};
use crate::integrate::Integrator;
use crate::kernels::{tail_integral_against, ExteriorSide, KernelProfile};
use crate::linalg::SymmetricToeplitz;

/// Uniform symmetric grid with `M + 1` nodes on `[-L, L]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    half_width: f64,
    m: usize,
    h: f64,
}

impl Grid {
    /// Builds the grid with `h = 2L / M`. `M` must be even and positive.
    pub fn new(half_width: f64, m: usize) -> Result<Self> {
        if m < 2 || m % 2 != 0 {
            return Err(Error::Config(format!(
                "node parameter M must be even and >= 2, got {m}"
            )));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Config(format!(
                "domain half-width must be positive, got {half_width}"
            )));
        }
        Ok(Self {
            half_width,
            m,
            h: 2.0 * half_width / m as f64,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of nodes, `M + 1`.
    pub fn len(&self) -> usize {
        self.m + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position of array index `k` (node `i = k - M/2`).
    #[inline]
    pub fn x(&self, k: usize) -> f64 {
        self.offset_position(k as isize)
    }

    /// Position of a possibly exterior array index.
    #[inline]
    pub fn offset_position(&self, k: isize) -> f64 {
        (k - (self.m / 2) as isize) as f64 * self.h
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.x(k)).collect()
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.len()).map(|k| f(self.x(k))).collect()
    }

    /// Truncation radius of the quadrature, `L_W = 2L = M h`.
    pub fn truncation_radius(&self) -> f64 {
        self.m as f64 * self.h
    }
}

/// `T_h(t) = max(0, 1 - |t|/h)`.
pub fn tent(t: f64, h: f64) -> f64 {
    (1.0 - t.abs() / h).max(0.0)
}

/// Quadrature weights `w_j`, `j = -M..=M`, stored by `|j|`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSet {
    weights: Vec<f64>,
    f1: f64,
    h: f64,
}

impl WeightSet {
    /// `w_j`; symmetric by construction.
    #[inline]
    pub fn get(&self, j: isize) -> f64 {
        self.weights[j.unsigned_abs()]
    }

    pub fn max_offset(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn f1(&self) -> f64 {
        self.f1
    }

    /// `Σ_j w_j` over `j = -M..=M`.
    pub fn total(&self) -> f64 {
        2.0 * self.weights[1..].iter().sum::<f64>()
    }

    pub fn as_half_slice(&self) -> &[f64] {
        &self.weights
    }
}

/// Computes the weights from the kernel's antiderivatives:
///
/// * `w_0 = 0`
/// * `|j| = 1`: `f₁(h)/h² - F'(x_1) + (F(x_2) - F(x_1))/h`
/// * `1 < |j| < M`: `(F(x_{j+1}) - 2F(x_j) + F(x_{j-1}))/h`
/// * `|j| = M`: `F'(x_M) + (F(x_{M-1}) - F(x_M))/h`
pub fn compute_weights<K: KernelProfile + ?Sized>(kernel: &K, grid: &Grid) -> Result<WeightSet> {
    let m = grid.m();
    if m < 2 {
        return Err(Error::Config(format!("need M >= 2, got {m}")));
    }
    let h = grid.h();
    let x = |j: usize| j as f64 * h;
    let f1 = kernel.f1(h)?;

    let mut weights = vec![0.0; m + 1];
    // Central part of integral I plus the half tent on [h, 2h].
    let (f_1, fp_1) = kernel.antiderivatives(x(1));
    let (f_2, _) = kernel.antiderivatives(x(2));
    weights[1] = f1 / (h * h) - fp_1 + (f_2 - f_1) / h;
    for (j, w) in weights.iter_mut().enumerate().take(m).skip(2) {
        *w = kernel.second_difference(x(j), h) / h;
    }
    weights[m] = kernel.far_half_tent(x(m), h);
    Ok(WeightSet { weights, f1, h })
}

/// Shared dense part of the operator: the interior coupling and the diagonal,
/// independent of the boundary constraint.
#[derive(Debug, Clone)]
pub struct OperatorBuilder<'k, K: KernelProfile + ?Sized> {
    kernel: &'k K,
    grid: Grid,
    weights: WeightSet,
    tail_mass: f64,
    matrix: Arc<SymmetricToeplitz>,
    integrator: Integrator,
}

impl<'k, K: KernelProfile + ?Sized> OperatorBuilder<'k, K> {
    pub fn new(kernel: &'k K, grid: Grid) -> Result<Self> {
        let weights = compute_weights(kernel, &grid)?;
        let tail_mass = kernel.tail_mass(grid.truncation_radius())?;
        let n = grid.len();
        let diagonal = weights.total() + tail_mass;
        let column = (0..n)
            .map(|j| if j == 0 { diagonal } else { -weights.get(j as isize) })
            .collect();
        let matrix = SymmetricToeplitz::new(column);
        Ok(Self {
            kernel,
            grid,
            weights,
            tail_mass,
            matrix: Arc::new(matrix),
            integrator: Integrator::default(),
        })
    }

    pub fn with_integrator(mut self, integrator: Integrator) -> Self {
        self.integrator = integrator;
        self
    }

    pub fn weights(&self) -> &WeightSet {
        &self.weights
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `C = ∫_{|y|>L_W} γ`.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Completes the operator for one boundary constraint; the dense matrix is
    /// shared between all operators built here.
    pub fn operator(&self, bc: &BoundaryConstraint) -> Result<DiscreteOperator> {
        bc.validate(&self.grid)?;
        let grid = self.grid;
        let n = grid.len();
        let m = grid.m() as isize;
        let lw = grid.truncation_radius();
        let boundary_x = grid.x(grid.m());

        let mut affine = vec![0.0; n];
        let mut couple_left = vec![0.0; n];
        let mut couple_right = vec![0.0; n];

        for k in 0..n {
            let ki = k as isize;
            let xk = grid.x(k);
            // Exterior samples in the truncated sum: t = k - j < 0 or t > M.
            let exterior = (ki + 1..=m).chain(-m..ki - m);
            match bc {
                BoundaryConstraint::Dirichlet { exterior: data } => {
                    let mut acc = 0.0;
                    for j in exterior {
                        let xt = grid.offset_position(ki - j);
                        let g = data.value(xt);
                        if !g.is_finite() {
                            return Err(Error::Config(format!(
                                "Dirichlet data is not finite at x = {xt}"
                            )));
                        }
                        acc += self.weights.get(j) * g;
                    }
                    let tail = match data {
                        ExteriorData::Constant(c) => c * self.tail_mass,
                        ExteriorData::Function(f) => {
                            let f = f.as_ref();
                            tail_integral_against(self.kernel, xk, lw, f, ExteriorSide::Left, &self.integrator)?
                                + tail_integral_against(self.kernel, xk, lw, f, ExteriorSide::Right, &self.integrator)?
                        }
                    };
                    affine[k] = -acc - tail;
                }
                BoundaryConstraint::Free { decay, far_field }
                | BoundaryConstraint::Neumann { decay, far_field, .. } => {
                    let ratio = |x: f64| (boundary_x / x.abs()).powf(*decay);
                    let mut b = 0.0;
                    let (mut cl, mut cr) = (0.0, 0.0);
                    for j in exterior {
                        let t = ki - j;
                        let xt = grid.offset_position(t);
                        let r = ratio(xt);
                        if !r.is_finite() {
                            return Err(Error::Config(format!(
                                "decay profile is not finite at x = {xt}"
                            )));
                        }
                        let w = self.weights.get(j);
                        b -= w * far_field * (1.0 - r);
                        if t < 0 {
                            cl -= w * r;
                        } else {
                            cr -= w * r;
                        }
                    }
                    let il = tail_integral_against(self.kernel, xk, lw, ratio, ExteriorSide::Left, &self.integrator)?;
                    let ir = tail_integral_against(self.kernel, xk, lw, ratio, ExteriorSide::Right, &self.integrator)?;
                    b += -far_field * self.tail_mass + far_field * (il + ir);
                    cl -= il;
                    cr -= ir;
                    affine[k] = b;
                    couple_left[k] = cl;
                    couple_right[k] = cr;
                }
            }
        }

        Ok(DiscreteOperator {
            grid,
            matrix: Arc::clone(&self.matrix),
            affine,
            couple_left,
            couple_right,
            bc: bc.clone(),
        })
    }
}

/// Affine discretization of `-K` on a grid:
/// `-[K u]_i = (A u)_i + c_left,i u(-L) + c_right,i u(L) + b_i`.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    grid: Grid,
    matrix: Arc<SymmetricToeplitz>,
    affine: Vec<f64>,
    couple_left: Vec<f64>,
    couple_right: Vec<f64>,
    bc: BoundaryConstraint,
}

/// Assembles `-K` for one kernel, grid and boundary constraint.
pub fn assemble<K: KernelProfile + ?Sized>(
    kernel: &K,
    grid: Grid,
    bc: &BoundaryConstraint,
) -> Result<DiscreteOperator> {
    OperatorBuilder::new(kernel, grid)?.operator(bc)
}

impl DiscreteOperator {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn matrix(&self) -> &SymmetricToeplitz {
        &self.matrix
    }

    pub fn affine(&self) -> &[f64] {
        &self.affine
    }

    pub fn couple_left(&self) -> &[f64] {
        &self.couple_left
    }

    pub fn couple_right(&self) -> &[f64] {
        &self.couple_right
    }

    pub fn boundary(&self) -> &BoundaryConstraint {
        &self.bc
    }

    /// Whether both operators share one dense matrix.
    pub fn shares_matrix(&self, other: &DiscreteOperator) -> bool {
        Arc::ptr_eq(&self.matrix, &other.matrix)
    }

    /// Entry of the linear part with the boundary couplings folded into the
    /// first and last columns.
    pub fn effective_entry(&self, row: usize, col: usize) -> f64 {
        let mut v = self.matrix.get(row, col);
        if col == 0 {
            v += self.couple_left[row];
        }
        if col == self.grid.m() {
            v += self.couple_right[row];
        }
        v
    }

    fn check_len(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.grid.len() {
            return Err(Error::Argument(format!(
                "grid function has {} values, operator expects {}",
                u.len(),
                self.grid.len()
            )));
        }
        Ok(())
    }

    fn finish(&self, u: &[f64], out: &mut [f64]) {
        let (ul, ur) = (u[0], u[u.len() - 1]);
        for (k, o) in out.iter_mut().enumerate() {
            *o += self.couple_left[k] * ul + self.couple_right[k] * ur + self.affine[k];
        }
    }

    /// `-K u`.
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_len(u)?;
        let mut out = vec![0.0; u.len()];
        self.matrix.matvec_into(u, &mut out);
        self.finish(u, &mut out);
        Ok(out)
    }

    /// `-K u` into a caller buffer.
    pub fn apply_into(&self, u: &[f64], out: &mut [f64]) -> Result<()> {
        self.check_len(u)?;
        self.check_len(out)?;
        self.matrix.matvec_into(u, out);
        self.finish(u, out);
        Ok(())
    }
}

/// Applies two operators at once; when they share a matrix the dense sweep is
/// done a single time.
pub fn apply_pair(
    op_u: &DiscreteOperator,
    op_v: &DiscreteOperator,
    u: &[f64],
    v: &[f64],
    out_u: &mut [f64],
    out_v: &mut [f64],
) -> Result<()> {
    op_u.check_len(u)?;
    op_v.check_len(v)?;
    op_u.check_len(out_u)?;
    op_v.check_len(out_v)?;
    if op_u.shares_matrix(op_v) {
        op_u.matrix.matvec_pair_into(u, v, out_u, out_v);
    } else {
        op_u.matrix.matvec_into(u, out_u);
        op_v.matrix.matvec_into(v, out_v);
    }
    op_u.finish(u, out_u);
    op_v.finish(v, out_v);
    Ok(())
}
