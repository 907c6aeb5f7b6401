//! Pauli-string products, commutators and norms for the quantum Ising chain.

use trotter_scope::hamiltonians::qimf;
use trotter_scope::pauli::{commutator, mul};
use trotter_scope::{PauliString, Result};

fn main() -> Result<()> {
    let xz = PauliString::from_label("XZ")?;
    let zz = PauliString::from_label("ZZ")?;
    let (phase, p) = mul(&xz, &zz)?;
    println!("XZ · ZZ = {} {}", phase.to_complex(), p.label());

    let h = qimf(4, 0.809, 0.9045, 1.0)?;
    let (a, b) = h.pair()?;
    let ab = commutator(a, b)?;
    println!("[A,B] has {} terms, locality {}", ab.len(), ab.locality());
    for (p, c) in ab.iter().take(4) {
        println!("  {:+.4}{:+.4}i {}", c.re, c.im, p.label());
    }
    let aab = commutator(a, &ab)?;
    println!("[A,[A,B]]: {} terms, locality {}", aab.len(), aab.locality());
    println!(
        "|H|_F = {:.4}, |H| = {:.4}",
        h.total().frobenius_norm(),
        h.total().spectral_norm()?
    );
    Ok(())
}
