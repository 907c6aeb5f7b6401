//! Entanglement entropy of an evolving state next to the entropies of the
//! states induced by the observable and by the Trotter error.

use trotter_scope::entanglement::{entropy_trace, middle_cut};
use trotter_scope::formula::{make_spec, Propagators};
use trotter_scope::hamiltonians::fig1_hamiltonian;
use trotter_scope::{Complex64, PauliSum, Result, StateVector};

fn main() -> Result<()> {
    let n = 8;
    let h = fig1_hamiltonian(n)?;
    let props = Propagators::new(&h, &make_spec(1, 2)?)?;
    let labels: Vec<String> = (0..n - 1)
        .map(|i| format!("{}ZZ{}", "I".repeat(i), "I".repeat(n - 2 - i)))
        .collect();
    let zz = PauliSum::from_labels(&labels.iter().map(|l| (1.0, l.as_str())).collect::<Vec<_>>())?;
    let o = zz.scale_real(1.0 / zz.spectral_norm()?).to_dense()?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = StateVector::product(&vec![[Complex64::new(s, 0.0), Complex64::new(s, 0.0)]; n])?;
    let cut = middle_cut(n, 4)?;
    let tr = entropy_trace(&props, &psi, &o, &cut, 0.1, 40)?;
    println!("cut {cut:?}");
    println!("{:>5} {:>8} {:>8} {:>8}", "t", "S(psi)", "S(O psi)", "S(M psi)");
    for i in (0..tr.len()).step_by(5) {
        println!(
            "{:>5.1} {:>8.4} {:>8.4} {:>8.4}",
            tr.times[i], tr.s_state[i], tr.s_induced_o[i], tr.s_induced_m[i]
        );
    }
    Ok(())
}
