//! Exact observable Trotter errors for spin chains, compared against a
//! hierarchy of scrambling, entanglement, Haar-average and worst-case bounds.
//!
//! Layers, bottom up:
//!
//! - [`pauli`]: symbolic Pauli strings and sums, commutators.
//! - [`linalg`]: dense operators, states, eigensystems, entropies.
//! - [`hamiltonians`]: Hamiltonian splittings, the mixed-field Ising chain.
//! - [`formula`]: product formulas, segment unitaries, leading error terms.
//! - [`bounds`]: exact errors and every bound.
//! - [`entanglement`]: operator-induced entanglement diagnostics.
//! - [`experiments`]: configurable scenarios that write CSV.

pub mod bounds;
pub mod entanglement;
pub mod error;
pub mod experiments;
pub mod formula;
pub mod hamiltonians;
pub mod linalg;
pub mod pauli;

pub use error::{Error, Result};
pub use formula::{FormulaSpec, SegmentUnitaries};
pub use hamiltonians::HamiltonianSplit;
pub use linalg::{DenseOperator, DensityMatrix, EigenSystem, StateVector};
pub use num_complex::Complex64;
pub use pauli::{Pauli, PauliString, PauliSum, Phase};
