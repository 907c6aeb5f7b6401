//! Vector-norm and entanglement-entropy bounds.
//!
//! For `A = Σ_j A_j`, `‖Aχ‖² ≤ ‖A‖_F² + Δ_A(χ)` where
//! `Δ_A(χ) = Σ_{j,j'} ‖A_j†A_{j'}‖ sqrt(2 ln d_s − 2 S(ρ_s))` and `s` is the
//! support of `A_j†A_{j'}`.

use std::collections::HashMap;

use super::frame::{column_norms, EigenFrame};
use crate::error::Result;
use crate::formula::{Propagators, SegmentUnitaries};
use crate::linalg::{DenseOperator, StateVector};
use crate::pauli::PauliSum;

/// Norms below this make the matching normalized state undefined; that term is 0.
pub const DEGENERATE_NORM: f64 = 1e-13;

/// The four vector norms of the one-step vector-norm bound.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VectorNormTerms {
    pub bound: f64,
    /// `‖Oψ(δt)‖`.
    pub v_o: f64,
    /// `‖𝓜ψ_{O(δt)}‖`.
    pub v_m_o: f64,
    /// `‖𝓜ψ‖`.
    pub v_m: f64,
    /// `‖OU(δt)ψ_𝓜‖`.
    pub v_o_m: f64,
}

/// `‖Oψ(δt)‖·‖𝓜ψ_{O(δt)}‖ + ‖𝓜ψ‖·‖OU(δt)ψ_𝓜‖`.
pub fn vector_norm_bound(psi: &StateVector, o: &DenseOperator, seg: &SegmentUnitaries) -> Result<VectorNormTerms> {
    let psi_dt = seg.u0.apply(psi)?;
    let o_psi_dt = o.apply(&psi_dt)?;
    let v_o = o_psi_dt.norm();
    // O(δt)ψ = U₀†Oψ(δt).
    let o_dt_psi = seg.u0.adjoint().apply(&o_psi_dt)?;
    let v_m_o = if v_o < DEGENERATE_NORM {
        0.0
    } else {
        seg.m.apply(&o_dt_psi)?.norm() / v_o
    };
    let m_psi = seg.m.apply(psi)?;
    let v_m = m_psi.norm();
    let v_o_m = if v_m < DEGENERATE_NORM {
        0.0
    } else {
        o.apply(&seg.u0.apply(&m_psi)?)?.norm() / v_m
    };
    let t1 = if v_o < DEGENERATE_NORM { 0.0 } else { v_o * v_m_o };
    let t2 = if v_m < DEGENERATE_NORM { 0.0 } else { v_m * v_o_m };
    Ok(VectorNormTerms {
        bound: t1 + t2,
        v_o,
        v_m_o,
        v_m,
        v_o_m,
    })
}

/// `Δ_A(χ)` over the single-string terms of `a`.
pub fn delta_entanglement(a: &PauliSum, chi: &StateVector) -> Result<f64> {
    let mut cache = EntropyCache::new(chi);
    delta_with_cache(a, &mut cache)
}

struct EntropyCache<'a> {
    chi: &'a StateVector,
    entropies: HashMap<u64, f64>,
}

impl<'a> EntropyCache<'a> {
    fn new(chi: &'a StateVector) -> Self {
        Self {
            chi,
            entropies: HashMap::new(),
        }
    }

    /// `sqrt(2 ln d − 2S)` on the sites of `mask` (0 for the empty mask).
    fn radical(&mut self, mask: u64) -> Result<f64> {
        if mask == 0 {
            return Ok(0.0);
        }
        let sites: Vec<usize> = (0..64).filter(|i| (mask >> i) & 1 == 1).collect();
        let s = match self.entropies.get(&mask) {
            Some(&s) => s,
            None => {
                let s = self.chi.partial_trace(&sites)?.entropy();
                self.entropies.insert(mask, s);
                s
            }
        };
        let log_d = sites.len() as f64 * std::f64::consts::LN_2;
        Ok((2.0 * log_d - 2.0 * s).max(0.0).sqrt())
    }
}

fn delta_with_cache(a: &PauliSum, cache: &mut EntropyCache<'_>) -> Result<f64> {
    let parts = a.parts();
    let mut total = 0.0;
    for (cj, pj) in &parts {
        for (ck, pk) in &parts {
            let (_, prod) = pj.mul(pk)?;
            let mask = prod.x_mask() | prod.z_mask();
            total += cj.norm() * ck.norm() * cache.radical(mask)?;
        }
    }
    Ok(total)
}

/// `sqrt(‖A‖_F² + Δ_A(χ))`, an upper bound on `‖Aχ‖`.
pub fn entanglement_vector_bound(a: &PauliSum, chi: &StateVector) -> Result<f64> {
    Ok((a.frobenius_norm().powi(2) + delta_entanglement(a, chi)?).sqrt())
}

/// Pieces of [`entanglement_bound`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EntanglementTerms {
    pub bound: f64,
    /// The bracketed leading part times `δt^{p+1}`.
    pub leading: f64,
    /// `2‖O‖‖𝓜 − Mδt^{p+1}‖`.
    pub remainder: f64,
    pub delta_o_evolved: f64,
    pub delta_m_induced: f64,
    pub delta_o_induced: f64,
    pub delta_m: f64,
    /// Same combination with exact vector norms of `O` and `M` on the same states.
    pub vector_leading: f64,
}

/// Entanglement-based one-step bound with the full `𝓜` defining `ψ_𝓜` and the
/// leading `M` inside the radicals; the remainder is exact at desk scale.
pub fn entanglement_bound(
    psi: &StateVector,
    o: &PauliSum,
    seg: &SegmentUnitaries,
    leading: &PauliSum,
    order: usize,
) -> Result<EntanglementTerms> {
    let scale = seg.dt.powi(order as i32 + 1);
    let lead_dense = leading.to_dense()?;
    let remainder = 2.0 * o.spectral_norm()? * seg.m.sub(&lead_dense.scale_real(scale))?.spectral_norm();
    entanglement_bound_with_remainder(psi, o, seg, leading, order, remainder)
}

/// [`entanglement_bound`] with a precomputed `2‖O‖‖𝓜 − Mδt^{p+1}‖`.
pub fn entanglement_bound_with_remainder(
    psi: &StateVector,
    o: &PauliSum,
    seg: &SegmentUnitaries,
    leading: &PauliSum,
    order: usize,
    remainder: f64,
) -> Result<EntanglementTerms> {
    let scale = seg.dt.powi(order as i32 + 1);
    let fo2 = o.frobenius_norm().powi(2);
    let fm2 = leading.frobenius_norm().powi(2);

    let psi_dt = seg.u0.apply(psi)?;
    let o_psi_dt = o.apply(&psi_dt)?;
    let o_dt_psi = seg.u0.adjoint().apply(&o_psi_dt)?;
    let m_psi = seg.m.apply(psi)?;

    let mut cache_psi = EntropyCache::new(psi);
    let delta_m = delta_with_cache(leading, &mut cache_psi)?;
    let delta_o_evolved = delta_entanglement(o, &psi_dt)?;

    let (term1, vec1, delta_m_induced) = if o_dt_psi.norm() < DEGENERATE_NORM {
        (0.0, 0.0, 0.0)
    } else {
        let psi_o = o_dt_psi.clone().normalized();
        let d = delta_entanglement(leading, &psi_o)?;
        let t = (fo2 + delta_o_evolved).sqrt() * (fm2 + d).sqrt();
        let v = o_psi_dt.norm() * leading.apply(&psi_o)?.norm();
        (t, v, d)
    };
    let (term2, vec2, delta_o_induced) = if m_psi.norm() < DEGENERATE_NORM {
        (0.0, 0.0, 0.0)
    } else {
        let psi_um = seg.u0.apply(&m_psi.clone().normalized())?;
        let d = delta_entanglement(o, &psi_um)?;
        let t = (fo2 + d).sqrt() * (fm2 + delta_m).sqrt();
        let v = o.apply(&psi_um)?.norm() * leading.apply(psi)?.norm();
        (t, v, d)
    };
    let leading_part = (term1 + term2) * scale;
    Ok(EntanglementTerms {
        bound: leading_part + remainder,
        leading: leading_part,
        remainder,
        delta_o_evolved,
        delta_m_induced,
        delta_o_induced,
        delta_m,
        vector_leading: (vec1 + vec2) * scale,
    })
}

/// `2‖O‖_F‖M‖_F δt^{p+1}`: the fully scrambled limit of the leading part.
pub fn frobenius_product(o: &PauliSum, leading: &PauliSum, dt: f64, order: usize) -> f64 {
    2.0 * o.frobenius_norm() * leading.frobenius_norm() * dt.powi(order as i32 + 1)
}

/// Result of [`accumulated_entanglement`]; traces are indexed by `k − 1`.
#[derive(Clone, Debug, Default)]
pub struct AccumulatedEntanglement {
    pub bound: f64,
    /// `v(O, ψ̃_{r_k})` with `ψ̃_{r_k} = U₀^k 𝒰_p^{r−k} ψ`.
    pub v_o: Vec<f64>,
    /// `v(O, ψ̃_{r_k,𝓜})`, the normalized `U₀^k 𝓜 𝒰_p^{r−k} ψ`.
    pub v_o_m: Vec<f64>,
    /// `v(𝓜, ψ_k)` with `ψ_k = 𝒰_p^{r−k} ψ`.
    pub v_m: Vec<f64>,
    /// `v(𝓜, ψ_{k,O_k})`.
    pub v_m_o: Vec<f64>,
    /// Normalized Frobenius norm of `𝓜`.
    pub m_frobenius: f64,
    /// Spectral norm of `𝓜`.
    pub m_spectral: f64,
}

/// `Σ_{k=1}^{r} v(O,ψ̃_{r_k})·v(𝓜,ψ_{k,O_k}) + v(O,ψ̃_{r_k,𝓜})·v(𝓜,ψ_k)`.
pub fn accumulated_entanglement(
    psi: &StateVector,
    o: &DenseOperator,
    props: &Propagators,
    dt: f64,
    r: usize,
) -> Result<AccumulatedEntanglement> {
    let seg = props.segment(dt)?;
    let frame = EigenFrame::new(props, &seg);
    let o_rot = frame.rotate(o);
    let m_rot = frame.m().to_owned();
    let c0 = frame.coords(psi)?;
    let mut out = AccumulatedEntanglement {
        v_o: vec![0.0; r],
        v_o_m: vec![0.0; r],
        v_m: vec![0.0; r],
        v_m_o: vec![0.0; r],
        m_frobenius: seg.m.frobenius_norm(),
        m_spectral: seg.m.spectral_norm(),
        ..Default::default()
    };
    let mut bound = 0.0;
    frame.for_each_block(&c0, r, |ks, block| {
        let fwd = frame.phase_columns(block, ks, true);
        let o_fwd = &o_rot * &fwd;
        let v_o = column_norms(o_fwd.as_ref());
        let o_k_psi = frame.phase_columns(o_fwd.as_ref(), ks, false);
        let m_o = column_norms((&m_rot * &o_k_psi).as_ref());
        let m_psi = &m_rot * block;
        let v_m = column_norms(m_psi.as_ref());
        let o_m = column_norms((&o_rot * &frame.phase_columns(m_psi.as_ref(), ks, true)).as_ref());
        for (j, &k) in ks.iter().enumerate() {
            let i = k - 1;
            out.v_o[i] = v_o[j];
            out.v_m[i] = v_m[j];
            out.v_m_o[i] = if v_o[j] < DEGENERATE_NORM { 0.0 } else { m_o[j] / v_o[j] };
            out.v_o_m[i] = if v_m[j] < DEGENERATE_NORM { 0.0 } else { o_m[j] / v_m[j] };
            bound += out.v_o[i] * out.v_m_o[i] + out.v_o_m[i] * out.v_m[i];
        }
    });
    out.bound = bound;
    Ok(out)
}
