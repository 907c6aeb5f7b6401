use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::HamiltonianSplit;
use crate::pauli::{Pauli, PauliString, PauliSum};

/// Named observables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    /// The total Hamiltonian.
    Hamiltonian,
    /// `ΣX_i`.
    SumX,
    /// `ΣZ_i`.
    SumZ,
    /// `ΣX_iX_{i+1}`.
    XxCorr,
    /// `ΣZ_iZ_{i+1}`.
    ZzCorr,
    /// `Z^{⊗N}`.
    PauliGlobal,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Hamiltonian => "hamiltonian",
            Builtin::SumX => "sum_x",
            Builtin::SumZ => "sum_z",
            Builtin::XxCorr => "xx_corr",
            Builtin::ZzCorr => "zz_corr",
            Builtin::PauliGlobal => "pauli_global",
        }
    }
}

/// A builtin name or a Pauli-sum text file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObservableSpec {
    Builtin(Builtin),
    File { file: PathBuf },
}

impl ObservableSpec {
    /// Name and the observable scaled to unit spectral norm.
    pub fn resolve(&self, h: &HamiltonianSplit, base: Option<&Path>) -> Result<(String, PauliSum)> {
        let (name, raw) = match self {
            ObservableSpec::Builtin(b) => (b.name().to_string(), builtin_observable(*b, h)?),
            ObservableSpec::File { file } => {
                let path = match base {
                    Some(b) if file.is_relative() => b.join(file),
                    _ => file.clone(),
                };
                let o = PauliSum::read_file(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                if o.n_sites() != h.n_sites() {
                    return Err(Error::Config(format!(
                        "observable has {} sites, model has {}",
                        o.n_sites(),
                        h.n_sites()
                    )));
                }
                if !o.is_hermitian() {
                    return Err(Error::Config("observable must be Hermitian".into()));
                }
                (path.display().to_string(), o)
            }
        };
        Ok((name, normalize(&raw)?))
    }
}

fn single_sum(n: usize, p: Pauli) -> Result<PauliSum> {
    PauliSum::from_terms(
        n,
        (0..n)
            .map(|s| Ok((Complex64::new(1.0, 0.0), PauliString::single(n, s, p)?)))
            .collect::<Result<Vec<_>>>()?,
    )
}

fn pair_sum(n: usize, p: Pauli) -> Result<PauliSum> {
    PauliSum::from_terms(
        n,
        (0..n.saturating_sub(1))
            .map(|s| {
                Ok((
                    Complex64::new(1.0, 0.0),
                    PauliString::from_sites(n, &[(s, p), (s + 1, p)])?,
                ))
            })
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Unnormalized builtin observable on the sites of `h`.
pub fn builtin_observable(b: Builtin, h: &HamiltonianSplit) -> Result<PauliSum> {
    let n = h.n_sites();
    match b {
        Builtin::Hamiltonian => Ok(h.total().clone()),
        Builtin::SumX => single_sum(n, Pauli::X),
        Builtin::SumZ => single_sum(n, Pauli::Z),
        Builtin::XxCorr => pair_sum(n, Pauli::X),
        Builtin::ZzCorr => pair_sum(n, Pauli::Z),
        Builtin::PauliGlobal => {
            let all: Vec<(usize, Pauli)> = (0..n).map(|s| (s, Pauli::Z)).collect();
            Ok(PauliSum::from_string(PauliString::from_sites(n, &all)?))
        }
    }
}

fn normalize(o: &PauliSum) -> Result<PauliSum> {
    let norm = o.spectral_norm()?;
    if norm <= 1e-12 {
        return Err(Error::Config("observable has zero norm".into()));
    }
    Ok(o.scale_real(1.0 / norm))
}

/// Sum over every window of `k` adjacent sites of one random non-identity
/// string on that window with a coefficient uniform in `[−1, 1]`.
pub fn random_local_observable<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<PauliSum> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("locality {k} does not fit {n} sites")));
    }
    const LETTERS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut terms = Vec::new();
    for start in 0..=n - k {
        let letters: Vec<(usize, Pauli)> = loop {
            let l: Vec<(usize, Pauli)> = (0..k).map(|j| (start + j, LETTERS[rng.random_range(0..4)])).collect();
            if l.iter().any(|(_, p)| *p != Pauli::I) {
                break l;
            }
        };
        let coef: f64 = rng.random_range(-1.0..=1.0);
        terms.push((Complex64::new(coef, 0.0), PauliString::from_sites(n, &letters)?));
    }
    PauliSum::from_terms(n, terms)
}

/// Named observables, each scaled to unit spectral norm.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableSet {
    names: Vec<String>,
    ops: Vec<PauliSum>,
}

impl ObservableSet {
    pub fn new(items: Vec<(String, PauliSum)>) -> Result<Self> {
        let mut names = Vec::with_capacity(items.len());
        let mut ops = Vec::with_capacity(items.len());
        for (name, o) in items {
            ops.push(normalize(&o)?);
            names.push(name);
        }
        Ok(Self { names, ops })
    }

    /// `H`, `ΣX`, `ΣZ`, `ΣXX`, `ΣZZ` and `per_locality` random 2-, 3- and
    /// 4-local combinations. Observable `i` of locality `k` draws from stream
    /// `100·k + i` of a ChaCha8 generator seeded with `seed`.
    pub fn standard(h: &HamiltonianSplit, per_locality: usize, seed: u64) -> Result<Self> {
        let mut items = Vec::new();
        for b in [
            Builtin::Hamiltonian,
            Builtin::SumX,
            Builtin::SumZ,
            Builtin::XxCorr,
            Builtin::ZzCorr,
        ] {
            items.push((b.name().to_string(), builtin_observable(b, h)?));
        }
        for k in 2..=4usize {
            if k > h.n_sites() {
                continue;
            }
            for i in 0..per_locality {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream((100 * k + i) as u64);
                items.push((
                    format!("random{k}_{i}"),
                    random_local_observable(h.n_sites(), k, &mut rng)?,
                ));
            }
        }
        Self::new(items)
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn ops(&self) -> &[PauliSum] {
        &self.ops
    }
}
