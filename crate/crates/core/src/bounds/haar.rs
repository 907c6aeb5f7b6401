//! Haar-random states and the Haar-averaged observable error.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formula::SegmentUnitaries;
use crate::linalg::{DenseOperator, StateVector, DENSE_CAP};

use super::scrambling::evolved_observable;

/// A Haar-random pure state: a normalized vector of i.i.d. complex Gaussians.
pub fn haar_state<R: Rng + ?Sized>(n_sites: usize, rng: &mut R) -> Result<StateVector> {
    if n_sites == 0 || n_sites > DENSE_CAP {
        return Err(Error::DenseCapExceeded {
            n_sites,
            cap: DENSE_CAP,
        });
    }
    let amps = (0..1usize << n_sites)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    Ok(StateVector::from_amps(amps)?.normalized())
}

/// Closed-form Haar statistics of `‖[O(δt),𝓜]ψ‖`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HaarAverage {
    /// `‖[O(δt),𝓜]‖_F` (normalized), which is `sqrt(E‖·‖²)`.
    pub mean: f64,
    /// `sqrt(2d/(d+1))·F²`.
    pub var_bound: f64,
}

pub fn haar_average(o_dt: &DenseOperator, m: &DenseOperator) -> Result<HaarAverage> {
    let f = DenseOperator::commutator(o_dt, m)?.frobenius_norm();
    let d = o_dt.dim() as f64;
    Ok(HaarAverage {
        mean: f,
        var_bound: (2.0 * d / (d + 1.0)).sqrt() * f * f,
    })
}

/// Sample statistics of the exact one-step error over Haar states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HaarSample {
    pub samples: usize,
    pub mean: f64,
    pub std_error: f64,
    /// Sample mean of the squared error.
    pub second_moment: f64,
}

/// Samples `‖[O(δt),𝓜]ψ‖` over `samples` Haar states. Sample `i` draws from
/// stream `i` of a ChaCha8 generator seeded with `seed`, so results do not
/// depend on the thread count.
pub fn haar_monte_carlo(o: &DenseOperator, seg: &SegmentUnitaries, samples: usize, seed: u64) -> Result<HaarSample> {
    if samples == 0 {
        return Err(Error::invalid("samples must be positive"));
    }
    let o_dt = evolved_observable(o, seg)?;
    let d = DenseOperator::commutator(&o_dt, &seg.m)?;
    let n = o.n_sites();
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let psi = haar_state(n, &mut rng)?;
            Ok(d.apply(&psi)?.norm())
        })
        .collect::<Result<_>>()?;
    let s = samples as f64;
    let mean = values.iter().sum::<f64>() / s;
    let second_moment = values.iter().map(|v| v * v).sum::<f64>() / s;
    let var = if samples > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (s - 1.0)
    } else {
        0.0
    };
    Ok(HaarSample {
        samples,
        mean,
        std_error: (var / s).sqrt(),
        second_moment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{make_spec, segment};
    use crate::hamiltonians::qimf;
    use crate::pauli::PauliSum;

    #[test]
    fn haar_state_is_normalized_and_seeded() {
        let a = haar_state(4, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = haar_state(4, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert!((a.norm() - 1.0).abs() < 1e-14);
        assert_eq!(a.amps(), b.amps());
    }

    #[test]
    fn second_moment_matches_frobenius() {
        let h = qimf(4, 0.809, 0.9045, 1.0).unwrap();
        let seg = segment(&h, &make_spec(1, 2).unwrap(), 0.2).unwrap();
        let o = PauliSum::from_labels(&[(0.5, "XXII"), (0.5, "IIXX")])
            .unwrap()
            .to_dense()
            .unwrap();
        let avg = haar_average(&evolved_observable(&o, &seg).unwrap(), &seg.m).unwrap();
        let mc = haar_monte_carlo(&o, &seg, 4000, 1).unwrap();
        // E‖Dψ‖² = ‖D‖_F² exactly; the sample second moment concentrates around it.
        let rel = (mc.second_moment - avg.mean.powi(2)).abs() / avg.mean.powi(2);
        assert!(rel < 0.05, "relative deviation {rel}");
        assert!(mc.mean <= avg.mean * 1.01);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let h = qimf(3, 0.809, 0.9045, 1.0).unwrap();
        let seg = segment(&h, &make_spec(2, 2).unwrap(), 0.3).unwrap();
        let o = PauliSum::from_labels(&[(1.0, "ZII")]).unwrap().to_dense().unwrap();
        assert_eq!(
            haar_monte_carlo(&o, &seg, 50, 9).unwrap(),
            haar_monte_carlo(&o, &seg, 50, 9).unwrap()
        );
        assert!(haar_monte_carlo(&o, &seg, 0, 9).is_err());
    }
}
