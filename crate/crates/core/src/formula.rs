//! Product formulas: stage lists, one-segment unitaries, the exact
//! multiplicative error `𝓜 = U₀†𝒰_p − I` and its symbolic leading term.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonians::HamiltonianSplit;
use crate::linalg::{DenseOperator, EigenSystem};
use crate::pauli::{nested_commutator, PauliSum};

/// Registers above this size use the coefficient bound in [`alpha_comm`].
pub const ALPHA_DENSE_MAX: usize = 10;

/// Ordered stages `(term index, coefficient)`: `𝒰_p(δt) = Π_s e^{−i a_s H_{l_s} δt}`,
/// written left to right, so the first stage is the leftmost factor.
#[derive(Clone, Debug, PartialEq)]
pub struct FormulaSpec {
    order: usize,
    n_terms: usize,
    stages: Vec<(usize, f64)>,
}

/// Suzuki recursion weight `p_k = 1/(4 − 4^{1/(2k−1)})`.
pub fn suzuki_weight(k: usize) -> f64 {
    1.0 / (4.0 - 4f64.powf(1.0 / (2 * k - 1) as f64))
}

fn pf2_stages(n_terms: usize, scale: f64) -> Vec<(usize, f64)> {
    if n_terms == 1 {
        return vec![(0, scale)];
    }
    let mut s: Vec<(usize, f64)> = (0..n_terms - 1).map(|l| (l, 0.5 * scale)).collect();
    s.push((n_terms - 1, scale));
    s.extend((0..n_terms - 1).rev().map(|l| (l, 0.5 * scale)));
    s
}

fn suzuki_stages(order: usize, n_terms: usize, scale: f64) -> Vec<(usize, f64)> {
    if order == 2 {
        return pf2_stages(n_terms, scale);
    }
    let k = order / 2;
    let pk = suzuki_weight(k);
    let outer = suzuki_stages(order - 2, n_terms, pk * scale);
    let middle = suzuki_stages(order - 2, n_terms, (1.0 - 4.0 * pk) * scale);
    let mut s = Vec::with_capacity(5 * outer.len());
    s.extend_from_slice(&outer);
    s.extend_from_slice(&outer);
    s.extend_from_slice(&middle);
    s.extend_from_slice(&outer);
    s.extend_from_slice(&outer);
    s
}

/// Stage list for order `p` over `L` terms.
pub fn make_spec(order: usize, n_terms: usize) -> Result<FormulaSpec> {
    if n_terms == 0 {
        return Err(Error::invalid("a product formula needs at least one term"));
    }
    let stages = match order {
        1 => (0..n_terms).map(|l| (l, 1.0)).collect(),
        p if p >= 2 && p % 2 == 0 => suzuki_stages(p, n_terms, 1.0),
        p => return Err(Error::invalid(format!("unsupported product-formula order {p}"))),
    };
    Ok(FormulaSpec { order, n_terms, stages })
}

impl FormulaSpec {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n_terms(&self) -> usize {
        self.n_terms
    }

    pub fn stages(&self) -> &[(usize, f64)] {
        &self.stages
    }

    /// `Σ_s a_s` restricted to term `l`.
    pub fn weight_of(&self, l: usize) -> f64 {
        self.stages.iter().filter(|(t, _)| *t == l).map(|(_, a)| a).sum()
    }

    pub fn reversed(&self) -> Self {
        let mut stages = self.stages.clone();
        stages.reverse();
        Self {
            order: self.order,
            n_terms: self.n_terms,
            stages,
        }
    }
}

/// `U₀ = e^{−iHδt}`, `𝒰_p(δt)` and `𝓜 = U₀†𝒰_p − I` for one segment.
#[derive(Clone, Debug)]
pub struct SegmentUnitaries {
    pub u0: DenseOperator,
    pub up: DenseOperator,
    pub m: DenseOperator,
    pub dt: f64,
}

/// Eigensystems of `H` and each `H_l`, reused across many `δt`.
#[derive(Clone, Debug)]
pub struct Propagators {
    split: HamiltonianSplit,
    spec: FormulaSpec,
    total: EigenSystem,
    terms: Vec<EigenSystem>,
}

impl Propagators {
    pub fn new(split: &HamiltonianSplit, spec: &FormulaSpec) -> Result<Self> {
        if spec.n_terms != split.n_terms() {
            return Err(Error::invalid(format!(
                "formula built for {} terms, Hamiltonian has {}",
                spec.n_terms,
                split.n_terms()
            )));
        }
        let total = split.total_dense()?.hermitian_eigen()?;
        let terms = split
            .terms()
            .iter()
            .map(|t| t.to_dense()?.hermitian_eigen())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            split: split.clone(),
            spec: spec.clone(),
            total,
            terms,
        })
    }

    pub fn split(&self) -> &HamiltonianSplit {
        &self.split
    }

    pub fn spec(&self) -> &FormulaSpec {
        &self.spec
    }

    pub fn total_eigen(&self) -> &EigenSystem {
        &self.total
    }

    pub fn n_sites(&self) -> usize {
        self.split.n_sites()
    }

    /// `𝒰_p(δt)` alone.
    pub fn product_unitary(&self, dt: f64) -> Result<DenseOperator> {
        let mut cache: HashMap<(usize, u64), DenseOperator> = HashMap::new();
        let mut up = DenseOperator::identity(self.n_sites())?;
        for &(l, a) in &self.spec.stages {
            let key = (l, (a * dt).to_bits());
            let stage = cache.entry(key).or_insert_with(|| self.terms[l].evolution(a * dt));
            up = up.matmul(stage)?;
        }
        Ok(up)
    }

    pub fn segment(&self, dt: f64) -> Result<SegmentUnitaries> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::invalid(format!("time step must be positive, got {dt}")));
        }
        let u0 = self.total.evolution(dt);
        let up = self.product_unitary(dt)?;
        let m = u0
            .adjoint()
            .matmul(&up)?
            .sub(&DenseOperator::identity(self.n_sites())?)?;
        Ok(SegmentUnitaries { u0, up, m, dt })
    }
}

/// One segment of `spec` applied to `h` at step `dt`.
pub fn segment(h: &HamiltonianSplit, spec: &FormulaSpec, dt: f64) -> Result<SegmentUnitaries> {
    Propagators::new(h, spec)?.segment(dt)
}

/// `−½[A,B]` for a two-term split (multiply by `δt²`).
pub fn pf1_leading(h: &HamiltonianSplit) -> Result<PauliSum> {
    let (a, b) = h.pair()?;
    Ok(PauliSum::commutator(a, b)?.scale_real(-0.5))
}

/// `(i/12)[B,[B,A]] − (i/24)[A,[A,B]]` for a two-term split (multiply by `δt³`).
pub fn pf2_leading(h: &HamiltonianSplit) -> Result<PauliSum> {
    let (a, b) = h.pair()?;
    let bba = nested_commutator(&[b, b, a])?;
    let aab = nested_commutator(&[a, a, b])?;
    bba.scale(Complex64::new(0.0, 1.0 / 12.0))
        .sub(&aab.scale(Complex64::new(0.0, 1.0 / 24.0)))
}

/// Leading multiplicative error `M` with `𝓜 = M δt^{p+1} + O(δt^{p+2})`,
/// for any number of terms. Orders above 2 are not available symbolically.
pub fn leading_term(h: &HamiltonianSplit, order: usize) -> Result<PauliSum> {
    let n = h.n_sites();
    match order {
        1 => {
            let mut acc = PauliSum::zero(n)?;
            let t = h.terms();
            for i in 0..t.len() {
                for j in i + 1..t.len() {
                    acc = acc.add(&PauliSum::commutator(&t[i], &t[j])?)?;
                }
            }
            Ok(acc.scale_real(-0.5))
        }
        2 => pf2_general(h.terms()),
        p => Err(Error::Unsupported(format!("symbolic leading term for order {p}"))),
    }
}

// Strang recursion on the outermost term: with X = −iH₁, Y = −iΣ_{l>1}H_l the
// third-order BCH term gains −[X,[X,Y]]/24 − [Y,[X,Y]]/12.
fn pf2_general(terms: &[PauliSum]) -> Result<PauliSum> {
    let n = terms[0].n_sites();
    if terms.len() == 1 {
        return PauliSum::zero(n);
    }
    let inner = pf2_general(&terms[1..])?;
    let mut rest = PauliSum::zero(n)?;
    for t in &terms[1..] {
        rest = rest.add(t)?;
    }
    let x = &terms[0];
    // (−i)³ = i.
    let xxy = nested_commutator(&[x, x, &rest])?;
    let yxy = nested_commutator(&[&rest, x, &rest])?;
    let new = xxy
        .scale(Complex64::new(0.0, -1.0 / 24.0))
        .sub(&yxy.scale(Complex64::new(0.0, 1.0 / 12.0)))?;
    inner.add(&new)
}

/// `α_{p+2} = Σ ‖[H_{l₁},[H_{l₂},…,H_{l_{p+2}}]]‖` over all `L^{p+2}` tuples.
/// Uses exact dense norms up to [`ALPHA_DENSE_MAX`] sites, coefficient sums beyond.
pub fn alpha_comm(h: &HamiltonianSplit, order: usize) -> Result<f64> {
    let depth = order + 2;
    let l = h.n_terms();
    if l < 2 {
        return Ok(0.0);
    }
    let dense = h.n_sites() <= ALPHA_DENSE_MAX;
    let mut total = 0.0;
    let mut idx = vec![0usize; depth];
    loop {
        let ops: Vec<&PauliSum> = idx.iter().map(|&i| &h.terms()[i]).collect();
        let c = nested_commutator(&ops)?;
        if !c.is_empty() {
            total += if dense { c.spectral_norm()? } else { c.coefficient_l1() };
        }
        // Odometer increment over the tuple.
        let mut pos = depth;
        loop {
            if pos == 0 {
                return Ok(total);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < l {
                break;
            }
            idx[pos] = 0;
        }
    }
}
