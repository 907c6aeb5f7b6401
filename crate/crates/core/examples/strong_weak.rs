//! One-step errors for a Hamiltonian and a scaled copy, each started from its
//! own worst-case state.

use trotter_scope::experiments::strong_weak_trace;
use trotter_scope::hamiltonians::qimf;
use trotter_scope::{PauliSum, Result};

fn main() -> Result<()> {
    let n = 6;
    let h = qimf(n, 0.8, 0.9, 1.0)?;
    let labels: Vec<String> = (0..n - 1)
        .map(|i| format!("{}XX{}", "I".repeat(i), "I".repeat(n - 2 - i)))
        .collect();
    let xx = PauliSum::from_labels(&labels.iter().map(|l| (1.0, l.as_str())).collect::<Vec<_>>())?;
    let o = xx.scale_real(1.0 / xx.spectral_norm()?).to_dense()?;
    let tr = strong_weak_trace(&h, 1, &o, 1.4, 0.1, 60)?;
    println!(
        "initial ratio {:.4} (1.4^2 = 1.96), late ratio {:.4}",
        tr.initial_ratio(),
        tr.late_ratio()
    );
    for i in (0..tr.times.len()).step_by(10) {
        println!(
            "  t={:>4.1} err_h1 {:.3e} err_h2 {:.3e}",
            tr.times[i], tr.err_h1[i], tr.err_h2[i]
        );
    }
    Ok(())
}
