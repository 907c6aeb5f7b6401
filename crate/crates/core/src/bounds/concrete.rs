//! Closed-form bounds for two-term first- and second-order formulas, built
//! from nested commutator norms only.

use crate::error::Result;
use crate::hamiltonians::HamiltonianSplit;
use crate::linalg::{expm_hermitian, DenseOperator, StateVector};
use crate::pauli::{commutator, PauliSum};

/// Leading, remainder and total of a closed-form bound.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ConcreteBound {
    pub bound: f64,
    pub leading: f64,
    pub remainder: f64,
}

fn leading_norm(psi: &StateVector, o_dt: &DenseOperator, c: &PauliSum) -> Result<f64> {
    let d = DenseOperator::commutator(o_dt, &c.to_dense()?)?;
    Ok(d.apply(psi)?.norm())
}

fn evolved(o: &DenseOperator, h: &HamiltonianSplit, dt: f64) -> Result<DenseOperator> {
    let u0 = expm_hermitian(&h.total_dense()?, dt)?;
    o.conjugate_by(&u0)
}

/// First-order bound for `e^{−iAδt}e^{−iBδt}`:
/// `½‖[O(δt),[A,B]]ψ‖δt² + ‖O‖(1+‖[A,B]‖²δt²)(δt³/6‖[A,[A,B]]‖ + δt³/3‖[B,[A,B]]‖) + δt⁴/2‖O‖‖[A,B]‖²`.
pub fn pf1_concrete(psi: &StateVector, o: &DenseOperator, h: &HamiltonianSplit, dt: f64) -> Result<ConcreteBound> {
    let (a, b) = h.pair()?;
    let ab = commutator(a, b)?;
    let aab = commutator(a, &ab)?;
    let bab = commutator(b, &ab)?;
    let n_ab = ab.spectral_norm()?;
    let n_o = o.spectral_norm();
    let leading = 0.5 * leading_norm(psi, &evolved(o, h, dt)?, &ab)? * dt.powi(2);
    let remainder = n_o
        * (1.0 + n_ab.powi(2) * dt.powi(2))
        * (dt.powi(3) / 6.0 * aab.spectral_norm()? + dt.powi(3) / 3.0 * bab.spectral_norm()?)
        + dt.powi(4) / 2.0 * n_o * n_ab.powi(2);
    Ok(ConcreteBound {
        bound: leading + remainder,
        leading,
        remainder,
    })
}

/// Second-order bound for `e^{−iAδt/2}e^{−iBδt}e^{−iAδt/2}`.
pub fn pf2_concrete(psi: &StateVector, o: &DenseOperator, h: &HamiltonianSplit, dt: f64) -> Result<ConcreteBound> {
    let (a, b) = h.pair()?;
    let ba = commutator(b, a)?;
    let ab = commutator(a, b)?;
    let bba = commutator(b, &ba)?;
    let aab = commutator(a, &ab)?;
    let n_bba = bba.spectral_norm()?;
    let n_aab = aab.spectral_norm()?;
    let n_abba = commutator(a, &bba)?.spectral_norm()?;
    let n_bbba = commutator(b, &bba)?.spectral_norm()?;
    let n_baab = commutator(b, &aab)?.spectral_norm()?;
    let n_aaab = commutator(a, &aab)?.spectral_norm()?;

    let o_dt = evolved(o, h, dt)?;
    let leading = (leading_norm(psi, &o_dt, &bba)? / 12.0 + leading_norm(psi, &o_dt, &aab)? / 24.0) * dt.powi(3);

    let t4 = dt.powi(4);
    let t6 = dt.powi(6);
    let t7 = dt.powi(7);
    let zeta1 = t4 / 32.0 * n_abba + t4 / 12.0 * n_bbba;
    let zeta2 = t4 / 32.0 * n_baab + t4 / 48.0 * n_aaab;
    let zeta21 = (t6 / 144.0 * n_bba
        + t6 / 288.0 * n_aab
        + t7 / 384.0 * n_abba
        + t7 / 144.0 * n_bbba
        + t7 / 384.0 * n_baab
        + t7 / 576.0 * n_aaab)
        * n_bba;
    let zeta22 = (t6 / 288.0 * n_bba
        + t6 / 576.0 * n_aab
        + t7 / 768.0 * n_abba
        + t7 / 288.0 * n_bbba
        + t7 / 768.0 * n_baab
        + t7 / 1152.0 * n_aaab)
        * n_aab;
    let remainder = 2.0 * o.spectral_norm() * (zeta1 + zeta2 + zeta21 + zeta22);
    Ok(ConcreteBound {
        bound: leading + remainder,
        leading,
        remainder,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::haar::haar_state;
    use crate::bounds::scrambling::{evolved_observable, exact_error, scrambling_bound};
    use crate::formula::{make_spec, pf1_leading, pf2_leading, segment};
    use crate::hamiltonians::qimf;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn observable() -> DenseOperator {
        PauliSum::from_labels(&[(0.5, "ZZII"), (0.5, "IXXI")])
            .unwrap()
            .to_dense()
            .unwrap()
    }

    #[test]
    fn pf1_dominates_exact_and_leading_matches_scrambling() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let h = qimf(4, 0.809, 0.9045, 1.0).unwrap();
        let o = observable();
        for dt in [0.02, 0.1, 0.3] {
            let seg = segment(&h, &make_spec(1, 2).unwrap(), dt).unwrap();
            let lead = pf1_leading(&h).unwrap().to_dense().unwrap().scale_real(dt * dt);
            let o_dt = evolved_observable(&o, &seg).unwrap();
            for _ in 0..10 {
                let psi = haar_state(4, &mut rng).unwrap();
                let c = pf1_concrete(&psi, &o, &h, dt).unwrap();
                assert!(exact_error(&psi, &o, &seg, 1).unwrap() <= c.bound);
                let s = scrambling_bound(&psi, &o_dt, &lead).unwrap();
                assert!((c.leading - s).abs() <= 1e-12 * (1.0 + s));
            }
        }
    }

    #[test]
    fn pf2_dominates_exact_and_leading_dominates_scrambling() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let h = qimf(4, 0.809, 0.9045, 1.0).unwrap();
        let o = observable();
        for dt in [0.02, 0.1, 0.3] {
            let seg = segment(&h, &make_spec(2, 2).unwrap(), dt).unwrap();
            let lead = pf2_leading(&h).unwrap().to_dense().unwrap().scale_real(dt.powi(3));
            let o_dt = evolved_observable(&o, &seg).unwrap();
            for _ in 0..10 {
                let psi = haar_state(4, &mut rng).unwrap();
                let c = pf2_concrete(&psi, &o, &h, dt).unwrap();
                assert!(exact_error(&psi, &o, &seg, 1).unwrap() <= c.bound);
                assert!(scrambling_bound(&psi, &o_dt, &lead).unwrap() <= c.leading + 1e-14);
            }
        }
    }

    #[test]
    fn commuting_pair_gives_zero() {
        let h = HamiltonianSplit::new(vec![
            PauliSum::from_labels(&[(1.0, "ZI")]).unwrap(),
            PauliSum::from_labels(&[(0.3, "ZZ")]).unwrap(),
        ])
        .unwrap();
        let o = PauliSum::from_labels(&[(1.0, "XI")]).unwrap().to_dense().unwrap();
        let psi = StateVector::basis(2, 1).unwrap();
        assert_eq!(pf1_concrete(&psi, &o, &h, 0.1).unwrap().bound, 0.0);
        assert_eq!(pf2_concrete(&psi, &o, &h, 0.1).unwrap().bound, 0.0);
    }
}
