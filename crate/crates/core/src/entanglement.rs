//! Entanglement entropy of evolved states and of operator-induced states
//! `Aψ/‖Aψ‖`.

use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::delta::DEGENERATE_NORM;
use crate::bounds::{format_value, haar_state};
use crate::error::{Error, Result};
use crate::formula::Propagators;
use crate::hamiltonians::HamiltonianSplit;
use crate::linalg::{DenseOperator, StateVector};

/// `aψ/‖aψ‖`.
pub fn induced_state(a: &DenseOperator, psi: &StateVector) -> Result<StateVector> {
    let mut out = a.apply(psi)?;
    let norm = out.norm();
    if norm <= DEGENERATE_NORM {
        return Err(Error::AnnihilatedState { norm });
    }
    out.normalize();
    Ok(out)
}

/// Entropy of the reduced state of `psi` on `cut`.
pub fn cut_entropy(psi: &StateVector, cut: &[usize]) -> Result<f64> {
    Ok(psi.partial_trace(cut)?.entropy())
}

/// `cut` sites of `n` starting at the middle, `width` long.
pub fn middle_cut(n: usize, width: usize) -> Result<Vec<usize>> {
    if width == 0 || width > n {
        return Err(Error::invalid(format!("cut width {width} does not fit {n} sites")));
    }
    let start = (n - width) / 2;
    Ok((start..start + width).collect())
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EntropyTrace {
    pub times: Vec<f64>,
    pub s_state: Vec<f64>,
    pub s_induced_o: Vec<f64>,
    pub s_induced_m: Vec<f64>,
    pub cut: Vec<usize>,
}

impl EntropyTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn write_csv<W: Write>(&self, out: &mut W, metadata: &[(String, String)]) -> Result<()> {
        for (k, v) in metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        writeln!(out, "t,s_state,s_induced_o,s_induced_m")?;
        for i in 0..self.len() {
            let row = [self.times[i], self.s_state[i], self.s_induced_o[i], self.s_induced_m[i]];
            writeln!(
                out,
                "{}",
                row.iter().map(|v| format_value(*v)).collect::<Vec<_>>().join(",")
            )?;
        }
        Ok(())
    }
}

/// Evolves `psi0` exactly to `t_k = k·dt`, `k = 0..=r`, and records the entropy
/// on `cut` of `ψ(t)`, `Oψ(t)` and `𝓜ψ(t)`, where `𝓜` is the multiplicative
/// error of one `dt` segment. An induced state that is annihilated records NaN.
pub fn entropy_trace(
    props: &Propagators,
    psi0: &StateVector,
    o: &DenseOperator,
    cut: &[usize],
    dt: f64,
    r: usize,
) -> Result<EntropyTrace> {
    let seg = props.segment(dt)?;
    let eig = props.total_eigen();
    let c0 = eig.to_eigenbasis(psi0);
    let rows = (0..=r)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 * dt;
            let mut c = c0.clone();
            eig.phase_in_place(&mut c, t);
            let psi = eig.from_eigenbasis(&c);
            let induced = |a: &DenseOperator| -> Result<f64> {
                match induced_state(a, &psi) {
                    Ok(s) => cut_entropy(&s, cut),
                    Err(Error::AnnihilatedState { .. }) => Ok(f64::NAN),
                    Err(e) => Err(e),
                }
            };
            Ok((t, cut_entropy(&psi, cut)?, induced(o)?, induced(&seg.m)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut trace = EntropyTrace {
        cut: cut.to_vec(),
        ..Default::default()
    };
    for (t, s, so, sm) in rows {
        trace.times.push(t);
        trace.s_state.push(s);
        trace.s_induced_o.push(so);
        trace.s_induced_m.push(sm);
    }
    Ok(trace)
}

/// Energy and peak cut entropy of one random product input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyEntropyPoint {
    pub energy: f64,
    pub max_entropy: f64,
}

/// For `samples` seeded random product states (per-site Haar qubits), records
/// `⟨H⟩` and the largest entropy on `cut` over `steps + 1` evenly spaced
/// times in `[0, t_final]`.
pub fn energy_entropy_scan(
    h: &HamiltonianSplit,
    samples: usize,
    t_final: f64,
    steps: usize,
    cut: &[usize],
    seed: u64,
) -> Result<Vec<EnergyEntropyPoint>> {
    if steps == 0 || !(t_final >= 0.0) {
        return Err(Error::invalid("scan needs steps ≥ 1 and t_final ≥ 0"));
    }
    let n = h.n_sites();
    let hd = h.total_dense()?;
    let eig = hd.hermitian_eigen()?;
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let sites = (0..n)
                .map(|_| {
                    let q = haar_state(1, &mut rng)?;
                    Ok([q.amps()[0], q.amps()[1]])
                })
                .collect::<Result<Vec<[Complex64; 2]>>>()?;
            let psi = StateVector::product(&sites)?;
            let energy = hd.expectation(&psi)?.re;
            let c0 = eig.to_eigenbasis(&psi);
            let mut max_entropy = 0.0f64;
            for k in 0..=steps {
                let mut c = c0.clone();
                eig.phase_in_place(&mut c, t_final * k as f64 / steps as f64);
                max_entropy = max_entropy.max(cut_entropy(&eig.from_eigenbasis(&c), cut)?);
            }
            Ok(EnergyEntropyPoint { energy, max_entropy })
        })
        .collect()
}

pub fn write_scan_csv<W: Write>(
    out: &mut W,
    metadata: &[(String, String)],
    points: &[EnergyEntropyPoint],
) -> Result<()> {
    for (k, v) in metadata {
        writeln!(out, "# {k}: {v}")?;
    }
    writeln!(out, "energy,max_entropy")?;
    for p in points {
        writeln!(out, "{},{}", format_value(p.energy), format_value(p.max_entropy))?;
    }
    Ok(())
}
