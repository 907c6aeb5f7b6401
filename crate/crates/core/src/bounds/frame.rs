//! Segment operators expressed in the eigenbasis of `H`, where `U₀^k` is a
//! diagonal phase and many-segment sums reduce to blocked matrix products.

use faer::{Mat, MatRef};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::formula::{Propagators, SegmentUnitaries};
use crate::linalg::{DenseOperator, EigenSystem, StateVector};

/// Trajectory states processed per matrix product.
const BLOCK: usize = 64;

/// `V†𝒰_pV` and `V†𝓜V` for one step `dt`, with `V` the eigenvectors of `H`.
pub struct EigenFrame<'a> {
    eig: &'a EigenSystem,
    up: Mat<Complex64>,
    m: Mat<Complex64>,
    dt: f64,
}

impl<'a> EigenFrame<'a> {
    pub fn new(props: &'a Propagators, seg: &SegmentUnitaries) -> Self {
        let eig = props.total_eigen();
        Self {
            eig,
            up: eig.rotate_into(&seg.up).into_mat(),
            m: eig.rotate_into(&seg.m).into_mat(),
            dt: seg.dt,
        }
    }

    pub fn dim(&self) -> usize {
        self.eig.values().len()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn m(&self) -> MatRef<'_, Complex64> {
        self.m.as_ref()
    }

    pub fn rotate(&self, a: &DenseOperator) -> Mat<Complex64> {
        self.eig.rotate_into(a).into_mat()
    }

    pub fn coords(&self, psi: &StateVector) -> Result<Vec<Complex64>> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: psi.dim(),
            });
        }
        Ok(self.eig.to_eigenbasis(psi))
    }

    /// `e^{-iλ k dt}`.
    pub fn phases(&self, k: usize) -> Vec<Complex64> {
        self.eig.phases(k as f64 * self.dt)
    }

    /// Visits `ψ_k = 𝒰_p^{r−k}ψ` for `k = r, r−1, …, 1` in column blocks.
    /// The callback receives the `k` of each column and the block itself.
    pub fn for_each_block(&self, c0: &[Complex64], r: usize, mut f: impl FnMut(&[usize], MatRef<'_, Complex64>)) {
        let d = self.dim();
        let mut cur = c0.to_vec();
        let mut k = r;
        while k >= 1 {
            let width = BLOCK.min(k);
            let ks: Vec<usize> = (0..width).map(|j| k - j).collect();
            let mut block = Mat::<Complex64>::zeros(d, width);
            for j in 0..width {
                for i in 0..d {
                    block[(i, j)] = cur[i];
                }
                if k - j > 1 {
                    cur = mat_vec(self.up.as_ref(), &cur);
                }
            }
            f(&ks, block.as_ref());
            k -= width;
        }
    }

    /// Multiplies column `j` by the phases `e^{∓iλ k_j dt}` (sign from `forward`).
    pub fn phase_columns(&self, block: MatRef<'_, Complex64>, ks: &[usize], forward: bool) -> Mat<Complex64> {
        let sign = if forward { -1.0 } else { 1.0 };
        let vals = self.eig.values();
        Mat::from_fn(block.nrows(), block.ncols(), |i, j| {
            block[(i, j)] * Complex64::from_polar(1.0, sign * vals[i] * ks[j] as f64 * self.dt)
        })
    }
}

pub(crate) fn mat_vec(a: MatRef<'_, Complex64>, x: &[Complex64]) -> Vec<Complex64> {
    let y = a * faer::ColRef::from_slice(x);
    y.iter().copied().collect()
}

pub(crate) fn column_norms(a: MatRef<'_, Complex64>) -> Vec<f64> {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect()
}

pub(crate) fn column_diff_norms(a: MatRef<'_, Complex64>, b: MatRef<'_, Complex64>) -> Vec<f64> {
    (0..a.ncols())
        .map(|j| {
            (0..a.nrows())
                .map(|i| (a[(i, j)] - b[(i, j)]).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}
