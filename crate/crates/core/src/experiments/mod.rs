//! Named, reproducible experiment scenarios and their CSV artifacts.

mod min_steps;
mod observables;
mod scenarios;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{haar_state, worst_case_state};
use crate::error::{Error, Result};
use crate::formula::SegmentUnitaries;
use crate::hamiltonians::{HamiltonianSplit, ModelSpec};
use crate::linalg::{DenseOperator, StateVector};

pub use min_steps::{min_trotter_steps, search_min_steps, MinStepsReport, ObservableSteps, StepCount};
pub use observables::{builtin_observable, random_local_observable, Builtin, ObservableSet, ObservableSpec};
pub use scenarios::{
    run_energy_entropy, run_induced_entropy, run_long_time, run_min_steps, run_one_step, run_strong_weak,
    strong_weak_trace, StrongWeakTrace,
};

/// Environment variable capping the worker pool size.
pub const THREADS_ENV: &str = "TROTTER_SCOPE_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    OneStep,
    StrongWeak,
    LongTime,
    MinSteps,
    InducedEntropy,
    EnergyEntropy,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::OneStep,
        Scenario::StrongWeak,
        Scenario::LongTime,
        Scenario::MinSteps,
        Scenario::InducedEntropy,
        Scenario::EnergyEntropy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::OneStep => "one-step",
            Scenario::StrongWeak => "strong-weak",
            Scenario::LongTime => "long-time",
            Scenario::MinSteps => "min-steps",
            Scenario::InducedEntropy => "induced-entropy",
            Scenario::EnergyEntropy => "energy-entropy",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scenario '{s}'")))
    }
}

/// Input state of a scenario.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum StateSpec {
    /// `|0⟩^{⊗N}`.
    Zeros,
    /// `|01⟩^{⊗N/2}`.
    Neel,
    /// `|+⟩^{⊗N}`.
    Plus,
    /// Top eigenvector of the one-step difference operator.
    WorstCase,
    /// Seeded Haar-random state.
    Haar(u64),
}

impl TryFrom<String> for StateSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        match s.as_str() {
            "zeros" => Ok(StateSpec::Zeros),
            "neel" => Ok(StateSpec::Neel),
            "plus" => Ok(StateSpec::Plus),
            "worst_case" => Ok(StateSpec::WorstCase),
            other => match other.strip_prefix("haar:").map(str::parse::<u64>) {
                Some(Ok(seed)) => Ok(StateSpec::Haar(seed)),
                _ => Err(Error::Config(format!("unknown state '{other}'"))),
            },
        }
    }
}

impl From<StateSpec> for String {
    fn from(s: StateSpec) -> String {
        match s {
            StateSpec::Zeros => "zeros".into(),
            StateSpec::Neel => "neel".into(),
            StateSpec::Plus => "plus".into(),
            StateSpec::WorstCase => "worst_case".into(),
            StateSpec::Haar(seed) => format!("haar:{seed}"),
        }
    }
}

impl StateSpec {
    /// Builds the state; `worst_case` needs the observable and segment.
    pub fn build(&self, n: usize, worst: Option<(&DenseOperator, &SegmentUnitaries)>) -> Result<StateVector> {
        let zero = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let one = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [Complex64::new(h, 0.0), Complex64::new(h, 0.0)];
        match self {
            StateSpec::Zeros => StateVector::product(&vec![zero; n]),
            StateSpec::Neel => {
                if n % 2 != 0 {
                    return Err(Error::Config(format!(
                        "neel state needs an even number of sites, got {n}"
                    )));
                }
                StateVector::product(&(0..n).map(|i| if i % 2 == 0 { zero } else { one }).collect::<Vec<_>>())
            }
            StateSpec::Plus => StateVector::product(&vec![plus; n]),
            StateSpec::WorstCase => {
                let (o, seg) = worst.ok_or_else(|| Error::Config("worst_case state is not available here".into()))?;
                worst_case_state(o, seg)
            }
            StateSpec::Haar(seed) => haar_state(n, &mut ChaCha8Rng::seed_from_u64(*seed)),
        }
    }
}

/// JSON configuration shared by all scenarios; unused fields are ignored by
/// the scenarios that do not need them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: ModelSpec,
    /// Must match the model's site count when given.
    pub n: Option<usize>,
    pub order: usize,
    pub dt: f64,
    /// Number of segments; the time grid is `t_k = k·dt`, `k = 0..=r`.
    pub r: usize,
    pub observable: ObservableSpec,
    pub state: StateSpec,
    pub seed: u64,
    pub output: Option<PathBuf>,
    /// Entropy cut; defaults to the middle `cut_width` sites.
    pub cut: Option<Vec<usize>>,
    pub cut_width: usize,
    /// `c` in `H₂ = c·H₁` (strong-weak).
    pub strength: f64,
    /// Target precision (min-steps).
    pub epsilon: f64,
    /// Evolution times (min-steps).
    pub times: Vec<f64>,
    pub r_cap: usize,
    /// Random observables per locality 2, 3, 4 (min-steps).
    pub random_observables: usize,
    /// Random product states (energy-entropy).
    pub samples: usize,
    /// Time window and grid of the energy-entropy scan.
    pub t_final: f64,
    pub steps: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            model: ModelSpec::typical(10),
            n: None,
            order: 2,
            dt: 0.1,
            r: 20,
            observable: ObservableSpec::Builtin(Builtin::Hamiltonian),
            state: StateSpec::Neel,
            seed: 0,
            output: None,
            cut: None,
            cut_width: 4,
            strength: 1.4,
            epsilon: 1e-4,
            times: vec![1.0, 2.0, 3.0, 4.0, 5.0],
            r_cap: 1_000_000,
            random_observables: 10,
            samples: 50,
            t_final: 10.0,
            steps: 100,
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Single-line JSON with fields in declaration order.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.order == 0 {
            return Err(Error::Config("order must be at least 1".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(Error::Config("times must be positive".into()));
        }
        if !(self.strength > 0.0 && self.strength.is_finite()) {
            return Err(Error::Config("strength must be positive".into()));
        }
        if self.r_cap == 0 || self.steps == 0 || self.cut_width == 0 {
            return Err(Error::Config("r_cap, steps and cut_width must be positive".into()));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::Config("t_final must be non-negative".into()));
        }
        Ok(())
    }

    /// The model split, checked against `n`.
    pub fn hamiltonian(&self, base: Option<&Path>) -> Result<HamiltonianSplit> {
        let h = self.model.build(base).map_err(as_config)?;
        if let Some(n) = self.n {
            if n != h.n_sites() {
                return Err(Error::Config(format!(
                    "n = {n} but the model has {} sites",
                    h.n_sites()
                )));
            }
        }
        Ok(h)
    }

    pub fn cut_sites(&self, n: usize) -> Result<Vec<usize>> {
        match &self.cut {
            Some(c) => {
                if c.is_empty() || c.iter().any(|&s| s >= n) {
                    return Err(Error::Config(format!("cut {c:?} does not fit {n} sites")));
                }
                Ok(c.clone())
            }
            None => crate::entanglement::middle_cut(n, self.cut_width).map_err(as_config),
        }
    }

    fn metadata(&self) -> Vec<(String, String)> {
        vec![("config".into(), self.canonical_json())]
    }
}

/// Input problems found while building a scenario are configuration errors.
fn as_config(e: Error) -> Error {
    match e {
        Error::Parse { .. }
        | Error::InvalidArgument(_)
        | Error::DenseCapExceeded { .. }
        | Error::SizeMismatch { .. }
        | Error::Io(_)
        | Error::Json(_)
        | Error::Unsupported(_) => Error::Config(e.to_string()),
        other => other,
    }
}

/// Runs `scenario` and returns the CSV text. `base` resolves relative paths
/// in the config.
pub fn run_scenario(scenario: Scenario, cfg: &ScenarioConfig, base: Option<&Path>) -> Result<String> {
    match scenario {
        Scenario::OneStep => run_one_step(cfg, base),
        Scenario::StrongWeak => run_strong_weak(cfg, base),
        Scenario::LongTime => run_long_time(cfg, base),
        Scenario::MinSteps => run_min_steps(cfg, base),
        Scenario::InducedEntropy => run_induced_entropy(cfg, base),
        Scenario::EnergyEntropy => run_energy_entropy(cfg, base),
    }
}

/// Runs `scenario` and writes `<out>/<scenario>.csv`.
pub fn run_to_dir(scenario: Scenario, cfg: &ScenarioConfig, base: Option<&Path>, out: &Path) -> Result<PathBuf> {
    let text = run_scenario(scenario, cfg, base)?;
    fs::create_dir_all(out)?;
    let path = out.join(format!("{}.csv", scenario.name()));
    fs::write(&path, text)?;
    Ok(path)
}

/// Size of the worker pool requested by [`THREADS_ENV`], if set and valid.
pub fn requested_threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Config(format!(
                "{THREADS_ENV} must be a positive integer, got '{v}'"
            ))),
        },
        Err(_) => Ok(None),
    }
}

/// Builds the global worker pool, capped by [`THREADS_ENV`].
pub fn init_thread_pool() -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = requested_threads()? {
        builder = builder.num_threads(n);
    }
    builder.build_global().map_err(|e| Error::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_spec_round_trip() {
        for s in ["zeros", "neel", "plus", "worst_case", "haar:17"] {
            let spec = StateSpec::try_from(s.to_string()).unwrap();
            assert_eq!(String::from(spec), s);
        }
        assert!(StateSpec::try_from("haar:x".to_string()).is_err());
        assert!(StateSpec::try_from("ghz".to_string()).is_err());
    }

    #[test]
    fn neel_layout_and_parity() {
        let psi = StateSpec::Neel.build(4, None).unwrap();
        assert_eq!(psi.amps()[0b0101].re, 1.0);
        assert!(matches!(StateSpec::Neel.build(3, None), Err(Error::Config(_))));
        assert!(StateSpec::WorstCase.build(3, None).is_err());
    }

    #[test]
    fn config_defaults_and_errors() {
        let cfg = ScenarioConfig::from_json("{}").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        let cfg = ScenarioConfig::from_json(
            r#"{"model": {"model": "qimf", "n": 6, "hx": 0.8, "hy": 0.9, "j": 1.0}, "state": "haar:3", "observable": "zz_corr"}"#,
        )
        .unwrap();
        assert_eq!(cfg.state, StateSpec::Haar(3));
        assert_eq!(cfg.hamiltonian(None).unwrap().n_sites(), 6);
        assert_eq!(ScenarioConfig::from_json(&cfg.canonical_json()).unwrap(), cfg);
        for bad in [
            r#"{"dt": -1}"#,
            r#"{"bogus": 1}"#,
            r#"{"observable": "nope"}"#,
            r#"{"state": "up"}"#,
            "[1",
        ] {
            assert!(matches!(ScenarioConfig::from_json(bad), Err(Error::Config(_))), "{bad}");
        }
        let cfg = ScenarioConfig {
            n: Some(8),
            ..Default::default()
        };
        assert!(matches!(cfg.hamiltonian(None), Err(Error::Config(_))));
    }

    #[test]
    fn scenario_names() {
        for s in Scenario::ALL {
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
        }
        assert!("two-step".parse::<Scenario>().is_err());
    }
}
