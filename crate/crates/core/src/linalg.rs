//! Symmetric Toeplitz storage for the interior part of the quadrature
//! operator, `A_{kt} = c_{|k-t|}`.
//!
//! Products use direct summation on small grids and a circulant embedding
//! through the FFT otherwise; both paths are deterministic.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Grids up to this size use direct summation.
const DIRECT_LIMIT: usize = 512;

#[derive(Clone)]
pub struct SymmetricToeplitz {
    column: Vec<f64>,
    fft: Option<Embedding>,
}

#[derive(Clone)]
struct Embedding {
    len: usize,
    spectrum: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SymmetricToeplitz {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymmetricToeplitz")
            .field("n", &self.column.len())
            .field("fft", &self.fft.as_ref().map(|e| e.len))
            .finish()
    }
}

impl PartialEq for SymmetricToeplitz {
    fn eq(&self, other: &Self) -> bool {
        self.column == other.column
    }
}

impl SymmetricToeplitz {
    /// `column[j]` is the entry on the `j`-th off-diagonal.
    pub fn new(column: Vec<f64>) -> Self {
        let n = column.len();
        let fft = (n > DIRECT_LIMIT).then(|| {
            let len = (2 * n).next_power_of_two();
            let mut planner = FftPlanner::new();
            let forward = planner.plan_fft_forward(len);
            let inverse = planner.plan_fft_inverse(len);
            let mut c = vec![Complex64::new(0.0, 0.0); len];
            c[0].re = column[0];
            for j in 1..n {
                c[j].re = column[j];
                c[len - j].re = column[j];
            }
            forward.process(&mut c);
            Embedding {
                len,
                spectrum: c.iter().map(|z| z.re / len as f64).collect(),
                forward,
                inverse,
            }
        });
        Self { column, fft }
    }

    pub fn size(&self) -> usize {
        self.column.len()
    }

    pub fn column(&self) -> &[f64] {
        &self.column
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.column[i.abs_diff(j)]
    }

    fn direct(&self, x: &[f64], out: &mut [f64]) {
        let n = self.size();
        for (i, o) in out.iter_mut().enumerate() {
            // Left part runs over decreasing offsets, right part increasing.
            let left: f64 = x[..i].iter().zip(self.column[1..=i].iter().rev()).map(|(a, c)| a * c).sum();
            let right: f64 = x[i..n].iter().zip(&self.column[..n - i]).map(|(a, c)| a * c).sum();
            *o = left + right;
        }
    }

    /// `out = A x`.
    pub fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.size());
        assert_eq!(out.len(), self.size());
        match &self.fft {
            None => self.direct(x, out),
            Some(e) => {
                let buf = e.apply(x.iter().map(|&a| Complex64::new(a, 0.0)));
                for (o, z) in out.iter_mut().zip(&buf) {
                    *o = z.re;
                }
            }
        }
    }

    /// `(A x, A y)`; the FFT path transforms `x + i y` once.
    pub fn matvec_pair_into(&self, x: &[f64], y: &[f64], out_x: &mut [f64], out_y: &mut [f64]) {
        assert_eq!(x.len(), self.size());
        assert_eq!(y.len(), self.size());
        match &self.fft {
            None => {
                self.direct(x, out_x);
                self.direct(y, out_y);
            }
            Some(e) => {
                let buf = e.apply(x.iter().zip(y).map(|(&a, &b)| Complex64::new(a, b)));
                for ((ox, oy), z) in out_x.iter_mut().zip(out_y.iter_mut()).zip(&buf) {
                    *ox = z.re;
                    *oy = z.im;
                }
            }
        }
    }
}

impl Embedding {
    fn apply(&self, x: impl Iterator<Item = Complex64>) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = x.collect();
        buf.resize(self.len, Complex64::new(0.0, 0.0));
        self.forward.process(&mut buf);
        for (z, s) in buf.iter_mut().zip(&self.spectrum) {
            *z *= *s;
        }
        self.inverse.process(&mut buf);
        buf
    }
}
