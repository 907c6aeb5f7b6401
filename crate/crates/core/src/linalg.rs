//! Dense complex kernel: operators, state vectors, Hermitian eigensystems,
//! partial traces and entropies.
//!
//! Basis convention: for an `n`-site register, site `i` is stored in bit
//! `n - 1 - i` of the basis index, so site 0 is the leftmost tensor factor
//! (`|01⟩` is index 1 for two sites).

use faer::{ColRef, Mat, MatRef, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register for which dense matrices are materialized.
pub const DENSE_CAP: usize = 14;

/// Eigenvalues at or below this are treated as exact zeros in entropies.
pub const ENTROPY_CLAMP: f64 = 1e-14;

const HERMITIAN_TOL: f64 = 1e-10;

/// Bit of the basis index that encodes `site`.
#[inline]
pub fn site_bit(n_sites: usize, site: usize) -> usize {
    1usize << (n_sites - 1 - site)
}

fn check_cap(n_sites: usize) -> Result<()> {
    if n_sites > DENSE_CAP {
        Err(Error::DenseCapExceeded {
            n_sites,
            cap: DENSE_CAP,
        })
    } else {
        Ok(())
    }
}

/// A `2^n × 2^n` complex matrix.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    n_sites: usize,
    mat: Mat<Complex64>,
}

impl DenseOperator {
    pub fn from_mat(n_sites: usize, mat: Mat<Complex64>) -> Result<Self> {
        check_cap(n_sites)?;
        let dim = 1usize << n_sites;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: mat.nrows().max(mat.ncols()),
            });
        }
        Ok(Self { n_sites, mat })
    }

    pub(crate) fn from_mat_unchecked(n_sites: usize, mat: Mat<Complex64>) -> Self {
        debug_assert_eq!(mat.nrows(), 1 << n_sites);
        Self { n_sites, mat }
    }

    pub fn from_fn(n_sites: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        check_cap(n_sites)?;
        let dim = 1usize << n_sites;
        Ok(Self {
            n_sites,
            mat: Mat::from_fn(dim, dim, f),
        })
    }

    pub fn identity(n_sites: usize) -> Result<Self> {
        check_cap(n_sites)?;
        let dim = 1usize << n_sites;
        Ok(Self {
            n_sites,
            mat: Mat::identity(dim, dim),
        })
    }

    pub fn zeros(n_sites: usize) -> Result<Self> {
        check_cap(n_sites)?;
        let dim = 1usize << n_sites;
        Ok(Self {
            n_sites,
            mat: Mat::zeros(dim, dim),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    pub fn as_mat(&self) -> MatRef<'_, Complex64> {
        self.mat.as_ref()
    }

    pub fn into_mat(self) -> Mat<Complex64> {
        self.mat
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n_sites != other.n_sites {
            Err(Error::SizeMismatch {
                left: self.n_sites,
                right: other.n_sites,
            })
        } else {
            Ok(())
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self::from_mat_unchecked(self.n_sites, &self.mat * &other.mat))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_mat_unchecked(self.n_sites, self.mat.adjoint().to_owned())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self::from_mat_unchecked(self.n_sites, &self.mat + &other.mat))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self::from_mat_unchecked(self.n_sites, &self.mat - &other.mat))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let d = self.dim();
        Self::from_mat_unchecked(self.n_sites, Mat::from_fn(d, d, |i, j| self.mat[(i, j)] * c))
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// `ab − ba`.
    pub fn commutator(a: &Self, b: &Self) -> Result<Self> {
        a.same_shape(b)?;
        Ok(Self::from_mat_unchecked(a.n_sites, &a.mat * &b.mat - &b.mat * &a.mat))
    }

    /// `u† a u`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        self.same_shape(u)?;
        Ok(Self::from_mat_unchecked(
            self.n_sites,
            u.mat.adjoint() * &self.mat * &u.mat,
        ))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    /// Largest entrywise deviation from `a = a†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut dev = 0.0f64;
        for j in 0..d {
            for i in j..d {
                dev = dev.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Normalized Frobenius norm `sqrt(tr(a†a)/d)`.
    pub fn frobenius_norm(&self) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for j in 0..d {
            for i in 0..d {
                acc += self.mat[(i, j)].norm_sqr();
            }
        }
        (acc / d as f64).sqrt()
    }

    /// Largest singular value, from a full dense decomposition.
    pub fn spectral_norm(&self) -> f64 {
        if self.is_hermitian(1e-12 * (1.0 + self.max_abs())) {
            if let Ok(vals) = self.mat.self_adjoint_eigenvalues(Side::Lower) {
                return vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            }
        }
        self.mat
            .singular_values()
            .map(|s| s.first().copied().unwrap_or(0.0))
            .unwrap_or(f64::NAN)
    }

    pub fn max_abs(&self) -> f64 {
        let d = self.dim();
        let mut m = 0.0f64;
        for j in 0..d {
            for i in 0..d {
                m = m.max(self.mat[(i, j)].norm());
            }
        }
        m
    }

    /// Hermitian eigendecomposition; rejects non-Hermitian input.
    pub fn hermitian_eigen(&self) -> Result<EigenSystem> {
        let deviation = self.hermiticity_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let eig = self
            .mat
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Numerical(format!("eigendecomposition failed: {e:?}")))?;
        let values = (0..self.dim()).map(|i| eig.S()[i].re).collect();
        Ok(EigenSystem {
            n_sites: self.n_sites,
            values,
            vectors: eig.U().to_owned(),
        })
    }

    /// Matrix–vector product (unnormalized output).
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.n_sites != self.n_sites {
            return Err(Error::SizeMismatch {
                left: self.n_sites,
                right: psi.n_sites,
            });
        }
        Ok(StateVector {
            n_sites: self.n_sites,
            amps: matvec(self.mat.as_ref(), &psi.amps),
        })
    }

    /// `⟨ψ|a|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> Result<Complex64> {
        let a_psi = self.apply(psi)?;
        Ok(psi.inner(&a_psi))
    }

    /// `‖aψ‖₂`.
    pub fn vector_norm(&self, psi: &StateVector) -> Result<f64> {
        Ok(self.apply(psi)?.norm())
    }
}

/// Dense matrix times a vector.
pub(crate) fn matvec(a: MatRef<'_, Complex64>, x: &[Complex64]) -> Vec<Complex64> {
    let y = a * ColRef::from_slice(x);
    y.iter().copied().collect()
}

/// `a† x`.
pub(crate) fn matvec_adjoint(a: MatRef<'_, Complex64>, x: &[Complex64]) -> Vec<Complex64> {
    let y = a.adjoint() * ColRef::from_slice(x);
    y.iter().copied().collect()
}

/// `e^{-i h t}` for Hermitian `h`, via a full eigendecomposition.
pub fn expm_hermitian(h: &DenseOperator, t: f64) -> Result<DenseOperator> {
    Ok(h.hermitian_eigen()?.evolution(t))
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
/// Hermitian operator. Holding one of these lets many `e^{-iht}` and
/// state evolutions reuse a single decomposition.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    n_sites: usize,
    values: Vec<f64>,
    vectors: Mat<Complex64>,
}

impl EigenSystem {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> MatRef<'_, Complex64> {
        self.vectors.as_ref()
    }

    pub fn eigenvector(&self, k: usize) -> StateVector {
        StateVector {
            n_sites: self.n_sites,
            amps: (0..self.values.len()).map(|i| self.vectors[(i, k)]).collect(),
        }
    }

    /// `e^{-i h t}` as a dense operator.
    pub fn evolution(&self, t: f64) -> DenseOperator {
        self.function(|lambda| Complex64::from_polar(1.0, -lambda * t))
    }

    /// `f(h) = V f(Λ) V†`.
    pub fn function(&self, f: impl Fn(f64) -> Complex64) -> DenseOperator {
        let d = self.values.len();
        let phases: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        let scaled = Mat::from_fn(d, d, |i, k| self.vectors[(i, k)] * phases[k]);
        DenseOperator::from_mat_unchecked(self.n_sites, &scaled * self.vectors.adjoint())
    }

    /// Coordinates of `ψ` in the eigenbasis (`V†ψ`).
    pub fn to_eigenbasis(&self, psi: &StateVector) -> Vec<Complex64> {
        matvec_adjoint(self.vectors.as_ref(), &psi.amps)
    }

    pub fn from_eigenbasis(&self, coords: &[Complex64]) -> StateVector {
        StateVector {
            n_sites: self.n_sites,
            amps: matvec(self.vectors.as_ref(), coords),
        }
    }

    /// `e^{-i h t} ψ` without forming the dense propagator.
    pub fn evolve(&self, psi: &StateVector, t: f64) -> StateVector {
        let mut c = self.to_eigenbasis(psi);
        self.phase_in_place(&mut c, t);
        self.from_eigenbasis(&c)
    }

    /// Multiplies eigenbasis coordinates by `e^{-iλt}`.
    pub fn phase_in_place(&self, coords: &mut [Complex64], t: f64) {
        for (c, &l) in coords.iter_mut().zip(&self.values) {
            *c *= Complex64::from_polar(1.0, -l * t);
        }
    }

    /// `V† a V`: an operator expressed in this eigenbasis.
    pub fn rotate_into(&self, a: &DenseOperator) -> DenseOperator {
        DenseOperator::from_mat_unchecked(self.n_sites, self.vectors.adjoint() * &a.mat * &self.vectors)
    }

    /// `e^{-iλ_j t}` for every eigenvalue.
    pub fn phases(&self, t: f64) -> Vec<Complex64> {
        self.values
            .iter()
            .map(|&l| Complex64::from_polar(1.0, -l * t))
            .collect()
    }
}

/// A pure state on `n` sites.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_sites: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn from_amps(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::invalid(format!("state length {dim} is not a power of two")));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::invalid("non-finite amplitude"));
        }
        Ok(Self {
            n_sites: dim.trailing_zeros() as usize,
            amps,
        })
    }

    pub(crate) fn from_amps_unchecked(n_sites: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_sites);
        Self { n_sites, amps }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_sites: usize, index: usize) -> Result<Self> {
        check_cap(n_sites)?;
        let dim = 1usize << n_sites;
        if index >= dim {
            return Err(Error::invalid(format!(
                "basis index {index} out of range for {n_sites} sites"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_sites, amps })
    }

    /// Tensor product of single-site states, site 0 first.
    pub fn product(sites: &[[Complex64; 2]]) -> Result<Self> {
        let n = sites.len();
        if n == 0 {
            return Err(Error::invalid("product state needs at least one site"));
        }
        check_cap(n)?;
        let dim = 1usize << n;
        let amps = (0..dim)
            .map(|idx| {
                sites.iter().enumerate().fold(Complex64::new(1.0, 0.0), |acc, (s, q)| {
                    let bit = (idx >> (n - 1 - s)) & 1;
                    acc * q[bit]
                })
            })
            .collect();
        Ok(Self { n_sites: n, amps })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Returns the norm before normalization; a zero vector is left untouched.
    pub fn normalize(&mut self) -> f64 {
        let n = self.norm();
        if n > 0.0 {
            let inv = 1.0 / n;
            self.amps.iter_mut().for_each(|a| *a *= inv);
        }
        n
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            n_sites: self.n_sites,
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            n_sites: self.n_sites,
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            n_sites: self.n_sites,
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
        }
    }

    /// Reduced state on `keep` (sorted internally; kept site order follows site index).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(self, keep)
    }
}

/// Reduced density matrix of `|ψ⟩⟨ψ|` on the sites in `keep`.
pub fn partial_trace(psi: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::invalid("partial trace needs a non-empty keep set"));
    }
    let n = psi.n_sites;
    let mut sites: Vec<usize> = keep.to_vec();
    sites.sort_unstable();
    sites.dedup();
    if let Some(&bad) = sites.iter().find(|&&s| s >= n) {
        return Err(Error::invalid(format!("site {bad} out of range for {n} sites")));
    }
    let k = sites.len();
    let env: Vec<usize> = (0..n).filter(|s| !sites.contains(s)).collect();
    let dk = 1usize << k;
    let de = 1usize << env.len();

    let keep_bits: Vec<usize> = sites.iter().map(|&s| site_bit(n, s)).collect();
    let env_bits: Vec<usize> = env.iter().map(|&s| site_bit(n, s)).collect();
    let compose = |bits: &[usize], local: usize| -> usize {
        let m = bits.len();
        bits.iter().enumerate().fold(0usize, |acc, (pos, &b)| {
            if (local >> (m - 1 - pos)) & 1 == 1 {
                acc | b
            } else {
                acc
            }
        })
    };
    let keep_idx: Vec<usize> = (0..dk).map(|a| compose(&keep_bits, a)).collect();
    let env_idx: Vec<usize> = (0..de).map(|e| compose(&env_bits, e)).collect();

    let psi_mat = Mat::from_fn(dk, de, |a, e| psi.amps[keep_idx[a] | env_idx[e]]);
    let rho = &psi_mat * psi_mat.adjoint();
    Ok(DensityMatrix { sites, mat: rho })
}

/// A reduced (mixed) state on a subset of sites.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    sites: Vec<usize>,
    mat: Mat<Complex64>,
}

impl DensityMatrix {
    pub fn from_mat(sites: Vec<usize>, mat: Mat<Complex64>) -> Result<Self> {
        let d = 1usize << sites.len();
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: mat.nrows(),
            });
        }
        Ok(Self { sites, mat })
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.dim() == 1 {
            return vec![self.mat[(0, 0)].re];
        }
        self.mat
            .self_adjoint_eigenvalues(Side::Lower)
            .unwrap_or_else(|_| vec![f64::NAN; self.dim()])
    }

    /// Natural-log von Neumann entropy.
    pub fn entropy(&self) -> f64 {
        von_neumann_entropy(self)
    }
}

/// `−Σ λ ln λ` with eigenvalues clamped into `[0, 1]`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let s: f64 = rho
        .eigenvalues()
        .into_iter()
        .map(|l| l.clamp(0.0, 1.0))
        .filter(|&l| l > ENTROPY_CLAMP)
        .map(|l| -l * l.ln())
        .sum();
    s.max(0.0)
}
