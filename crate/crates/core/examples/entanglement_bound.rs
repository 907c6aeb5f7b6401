//! Entanglement-based bound for product, Bell-pair and Haar-random inputs,
//! with its Δ corrections and the Frobenius-norm estimate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trotter_scope::bounds::delta::frobenius_product;
use trotter_scope::bounds::{entanglement_bound, exact_error, haar_state};
use trotter_scope::formula::{leading_term, make_spec, segment};
use trotter_scope::hamiltonians::qimf;
use trotter_scope::{Complex64, PauliSum, Result, StateVector};

fn main() -> Result<()> {
    let n = 8;
    let (order, dt) = (1, 0.1);
    let h = qimf(n, 0.809, 0.9045, 1.0)?;
    let seg = segment(&h, &make_spec(order, 2)?, dt)?;
    let lead = leading_term(&h, order)?;
    let labels: Vec<String> = (0..n - 1)
        .map(|i| format!("{}ZZ{}", "I".repeat(i), "I".repeat(n - 2 - i)))
        .collect();
    let zz = PauliSum::from_labels(&labels.iter().map(|l| (1.0, l.as_str())).collect::<Vec<_>>())?;
    let obs = zz.scale_real(1.0 / zz.spectral_norm()?);
    let o = obs.to_dense()?;

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut bell = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (i, amp) in bell.iter_mut().enumerate() {
        let pairs_equal = (0..n / 2).all(|p| ((i >> (2 * p)) & 1) == ((i >> (2 * p + 1)) & 1));
        if pairs_equal {
            *amp = Complex64::new(1.0, 0.0);
        }
    }
    let bell = StateVector::from_amps(bell)?.normalized();
    let plus = StateVector::product(&vec![[Complex64::new(s, 0.0), Complex64::new(s, 0.0)]; n])?;
    let haar = haar_state(n, &mut ChaCha8Rng::seed_from_u64(1))?;

    println!("Frobenius estimate {:.4e}", frobenius_product(&obs, &lead, dt, order));
    for (name, psi) in [
        ("|0...0>", StateVector::basis(n, 0)?),
        ("|+...+>", plus),
        ("Bell pairs", bell),
        ("Haar", haar),
    ] {
        let t = entanglement_bound(&psi, &obs, &seg, &lead, order)?;
        println!(
            "{name:<11} exact {:.3e} bound {:.3e} (leading {:.3e}, remainder {:.1e}); Δ_O {:.3}, Δ_M {:.3}",
            exact_error(&psi, &o, &seg, 1)?,
            t.bound,
            t.leading,
            t.remainder,
            t.delta_o_evolved,
            t.delta_m,
        );
    }
    Ok(())
}
