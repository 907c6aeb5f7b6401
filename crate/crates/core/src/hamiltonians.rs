//! Hamiltonian splittings `H = H_1 + … + H_L` and the mixed-field Ising chain.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseOperator;
use crate::pauli::{Pauli, PauliString, PauliSum};

/// Field values used for the "typical" chain.
pub const TYPICAL: (f64, f64, f64) = (0.809, 0.9045, 1.0);
/// Field values used for the "atypical" chain.
pub const ATYPICAL: (f64, f64, f64) = (0.0, 0.9045, 0.4);

/// Ordered summands plus their total.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSplit {
    n_sites: usize,
    terms: Vec<PauliSum>,
    total: PauliSum,
}

impl HamiltonianSplit {
    pub fn new(terms: Vec<PauliSum>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::invalid("a splitting needs at least one term"))?;
        let n_sites = first.n_sites();
        let mut total = PauliSum::zero(n_sites)?;
        for t in &terms {
            total = total.add(t)?;
        }
        Ok(Self { n_sites, terms, total })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn terms(&self) -> &[PauliSum] {
        &self.terms
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total(&self) -> &PauliSum {
        &self.total
    }

    pub fn total_dense(&self) -> Result<DenseOperator> {
        self.total.to_dense()
    }

    /// Every coefficient multiplied by `c`.
    pub fn scale(&self, c: f64) -> Self {
        Self {
            n_sites: self.n_sites,
            terms: self.terms.iter().map(|t| t.scale_real(c)).collect(),
            total: self.total.scale_real(c),
        }
    }

    /// Terms `[A, B]` of a two-term split.
    pub fn pair(&self) -> Result<(&PauliSum, &PauliSum)> {
        match self.terms.as_slice() {
            [a, b] => Ok((a, b)),
            _ => Err(Error::invalid(format!(
                "expected a two-term split, got {} terms",
                self.terms.len()
            ))),
        }
    }
}

/// Mixed-field Ising chain with open boundary, split as
/// `A = h_x ΣX_j + J ΣX_jX_{j+1}`, `B = h_y ΣY_j`.
pub fn qimf(n: usize, h_x: f64, h_y: f64, j: f64) -> Result<HamiltonianSplit> {
    if n < 2 {
        return Err(Error::invalid(format!("qimf needs at least 2 sites, got {n}")));
    }
    let real = |v: f64| Complex64::new(v, 0.0);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for s in 0..n {
        a.push((real(h_x), PauliString::single(n, s, Pauli::X)?));
        b.push((real(h_y), PauliString::single(n, s, Pauli::Y)?));
    }
    for s in 0..n - 1 {
        a.push((
            real(j),
            PauliString::from_sites(n, &[(s, Pauli::X), (s + 1, Pauli::X)])?,
        ));
    }
    HamiltonianSplit::new(vec![PauliSum::from_terms(n, a)?, PauliSum::from_terms(n, b)?])
}

/// Ising chain with the typical couplings, used for induced-entanglement traces.
pub fn fig1_hamiltonian(n: usize) -> Result<HamiltonianSplit> {
    let (hx, hy, j) = TYPICAL;
    qimf(n, hx, hy, j)
}

/// JSON model description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelSpec {
    Qimf {
        #[serde(default = "default_n")]
        n: usize,
        hx: f64,
        hy: f64,
        j: f64,
    },
    File {
        terms: Vec<PathBuf>,
    },
}

fn default_n() -> usize {
    10
}

impl ModelSpec {
    pub fn typical(n: usize) -> Self {
        let (hx, hy, j) = TYPICAL;
        ModelSpec::Qimf { n, hx, hy, j }
    }

    pub fn atypical(n: usize) -> Self {
        let (hx, hy, j) = ATYPICAL;
        ModelSpec::Qimf { n, hx, hy, j }
    }

    /// Builds the split; file paths resolve relative to `base`.
    pub fn build(&self, base: Option<&Path>) -> Result<HamiltonianSplit> {
        match self {
            ModelSpec::Qimf { n, hx, hy, j } => qimf(*n, *hx, *hy, *j),
            ModelSpec::File { terms } => {
                let parts = terms
                    .iter()
                    .map(|p| {
                        let path = match base {
                            Some(b) if p.is_relative() => b.join(p),
                            _ => p.clone(),
                        };
                        PauliSum::read_file(&path)
                    })
                    .collect::<Result<Vec<_>>>()?;
                if parts.iter().any(|p| !p.is_hermitian()) {
                    return Err(Error::Config("Hamiltonian terms must be Hermitian".into()));
                }
                HamiltonianSplit::new(parts)
            }
        }
    }
}
