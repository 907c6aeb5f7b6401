//! Exact errors, operator-scrambling bounds and the worst-case spectral bound.

use num_complex::Complex64;

use super::frame::{column_diff_norms, EigenFrame};
use crate::error::{Error, Result};
use crate::formula::{Propagators, SegmentUnitaries};
use crate::linalg::{DenseOperator, StateVector};
use crate::pauli::PauliSum;

const HERMITIAN_TOL: f64 = 1e-10;

fn require_hermitian(o: &DenseOperator) -> Result<()> {
    let deviation = o.hermiticity_deviation();
    if deviation > HERMITIAN_TOL {
        Err(Error::NotHermitian { deviation })
    } else {
        Ok(())
    }
}

/// `U₀†OU₀`.
pub fn evolved_observable(o: &DenseOperator, seg: &SegmentUnitaries) -> Result<DenseOperator> {
    o.conjugate_by(&seg.u0)
}

/// `|⟨ψ|𝒰_p^{†k}O𝒰_p^k − U₀^{†k}OU₀^k|ψ⟩|`.
pub fn exact_error(psi: &StateVector, o: &DenseOperator, seg: &SegmentUnitaries, k: usize) -> Result<f64> {
    require_hermitian(o)?;
    let mut a = psi.clone();
    let mut b = psi.clone();
    for _ in 0..k {
        a = seg.up.apply(&a)?;
        b = seg.u0.apply(&b)?;
    }
    Ok((o.expectation(&a)? - o.expectation(&b)?).norm())
}

/// `‖[O(δt),𝓜]ψ‖`.
pub fn scrambling_bound(psi: &StateVector, o_dt: &DenseOperator, m: &DenseOperator) -> Result<f64> {
    let a = o_dt.apply(&m.apply(psi)?)?;
    let b = m.apply(&o_dt.apply(psi)?)?;
    Ok(a.sub(&b).norm())
}

/// `Σ_j ‖[O(δt),M_j]ψ‖ δt^{p+1}` with `M_j` applied sparsely.
pub fn scrambling_bound_local(
    psi: &StateVector,
    o_dt: &DenseOperator,
    leading_terms: &[PauliSum],
    dt: f64,
    order: usize,
) -> Result<f64> {
    let o_psi = o_dt.apply(psi)?;
    let mut total = 0.0;
    for mj in leading_terms {
        let a = o_dt.apply(&mj.apply(psi)?)?;
        let b = mj.apply(&o_psi)?;
        total += a.sub(&b).norm();
    }
    Ok(total * dt.powi(order as i32 + 1))
}

/// Splits a sum into its single-string terms.
pub fn single_terms(m: &PauliSum) -> Vec<PauliSum> {
    m.parts().into_iter().map(|(c, p)| PauliSum::term(c, p)).collect()
}

/// `‖[O(δt),𝓜]‖`.
pub fn worst_case_bound(o_dt: &DenseOperator, m: &DenseOperator) -> Result<f64> {
    Ok(DenseOperator::commutator(o_dt, m)?.spectral_norm())
}

/// `𝒰_p†O𝒰_p − U₀†OU₀`, which equals `(I+𝓜)†[O(δt),𝓜]` and has the same norm.
pub fn difference_operator(o: &DenseOperator, seg: &SegmentUnitaries) -> Result<DenseOperator> {
    o.conjugate_by(&seg.up)?.sub(&o.conjugate_by(&seg.u0)?)
}

/// Eigenvector of the difference operator with the largest `|λ|`;
/// among equal magnitudes the one with the lowest eigenvalue index wins.
pub fn worst_case_state(o: &DenseOperator, seg: &SegmentUnitaries) -> Result<StateVector> {
    require_hermitian(o)?;
    let diff = difference_operator(o, seg)?;
    // Symmetrize away round-off before the Hermitian solver.
    let herm = diff.add(&diff.adjoint())?.scale_real(0.5);
    let eig = herm.hermitian_eigen()?;
    let vals = eig.values();
    let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-12 * top.max(1e-300);
    let idx = vals.iter().position(|v| (v.abs() - top).abs() <= tol).unwrap_or(0);
    Ok(eig.eigenvector(idx).normalized())
}

/// Result of [`accumulated_scrambling`].
#[derive(Clone, Debug)]
pub struct AccumulatedScrambling {
    /// `Σ_k sqrt(C_k) δt^{p+1} + 2r‖O‖‖𝓜_Re‖`.
    pub bound: f64,
    /// `Σ_k sqrt(C_k) δt^{p+1}`.
    pub leading: f64,
    /// `2r‖O‖‖𝓜_Re‖`.
    pub remainder: f64,
    /// `‖𝓜 − Mδt^{p+1}‖`.
    pub remainder_norm: f64,
    /// `sqrt(C_k) δt^{p+1}` indexed by `k − 1`.
    pub per_k: Vec<f64>,
}

/// Accumulated scrambling bound on the `r`-segment error, with `M` the symbolic
/// leading term and `C_k = ‖[O(kδt),M]ψ_k‖²`, `ψ_k = 𝒰_p^{r−k}ψ`.
pub fn accumulated_scrambling(
    psi: &StateVector,
    o: &DenseOperator,
    props: &Propagators,
    leading: &PauliSum,
    dt: f64,
    r: usize,
) -> Result<AccumulatedScrambling> {
    require_hermitian(o)?;
    let order = props.spec().order();
    let seg = props.segment(dt)?;
    let lead_dense = leading.to_dense()?;
    let scale = dt.powi(order as i32 + 1);
    let remainder_norm = seg.m.sub(&lead_dense.scale_real(scale))?.spectral_norm();
    let o_norm = o.spectral_norm();
    let remainder = 2.0 * r as f64 * o_norm * remainder_norm;
    if r == 0 {
        return Ok(AccumulatedScrambling {
            bound: 0.0,
            leading: 0.0,
            remainder: 0.0,
            remainder_norm,
            per_k: vec![],
        });
    }
    let frame = EigenFrame::new(props, &seg);
    let lead_rot = frame.rotate(&lead_dense);
    let obs_rot = frame.rotate(o);
    let c0 = frame.coords(psi)?;
    let sums = leading_scrambling_terms(&frame, &c0, r, &lead_rot, std::slice::from_ref(&obs_rot));
    let per_k: Vec<f64> = sums
        .into_iter()
        .next()
        .unwrap_or_default()
        .into_iter()
        .map(|v| v * scale)
        .collect();
    let leading_sum: f64 = per_k.iter().sum();
    Ok(AccumulatedScrambling {
        bound: leading_sum + remainder,
        leading: leading_sum,
        remainder,
        remainder_norm,
        per_k,
    })
}

/// `‖[O_k, M]ψ_k‖` for `k = 1..=r` (indexed `k − 1`), for each observable.
/// All operators are given in the eigenbasis of `H`.
pub(crate) fn leading_scrambling_terms(
    frame: &EigenFrame<'_>,
    c0: &[Complex64],
    r: usize,
    lead_rot: &faer::Mat<Complex64>,
    obs_rot: &[faer::Mat<Complex64>],
) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; r]; obs_rot.len()];
    frame.for_each_block(c0, r, |ks, block| {
        let m_psi = lead_rot * block;
        let m_psi_fwd = frame.phase_columns(m_psi.as_ref(), ks, true);
        let psi_fwd = frame.phase_columns(block, ks, true);
        for (oi, o) in obs_rot.iter().enumerate() {
            // O_k M ψ_k = D^{−k} Õ D^k M ψ_k and M O_k ψ_k = M D^{−k} Õ D^k ψ_k.
            let a = frame.phase_columns((o * &m_psi_fwd).as_ref(), ks, false);
            let o_k_psi = frame.phase_columns((o * &psi_fwd).as_ref(), ks, false);
            let b = lead_rot * &o_k_psi;
            for (j, v) in column_diff_norms(a.as_ref(), b.as_ref()).into_iter().enumerate() {
                out[oi][ks[j] - 1] = v;
            }
        }
    });
    out
}
