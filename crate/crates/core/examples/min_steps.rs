//! Minimal Trotter step counts from the accumulated scrambling bound against
//! the spectral-norm baseline.

use trotter_scope::experiments::{min_trotter_steps, ObservableSet};
use trotter_scope::formula::{make_spec, Propagators};
use trotter_scope::hamiltonians::qimf;
use trotter_scope::{Result, StateVector};

fn main() -> Result<()> {
    let n = 6;
    let h = qimf(n, 0.809, 0.9045, 1.0)?;
    let props = Propagators::new(&h, &make_spec(1, 2)?)?;
    let set = ObservableSet::standard(&h, 1, 3)?;
    let psi = StateVector::basis(n, 0)?;
    for t in [0.5, 1.0] {
        let rep = min_trotter_steps(&set, &psi, &props, t, 1e-2, 1_000_000)?;
        println!("t = {t}, epsilon = {}", rep.epsilon);
        for o in &rep.per_observable {
            println!(
                "  {:<12} scrambling {:>5}  baseline {:>5}",
                o.name, o.scrambling.r, o.baseline.r
            );
        }
        println!(
            "  worst        scrambling {:>5}  baseline {:>5}",
            rep.worst_scrambling(),
            rep.worst_baseline()
        );
    }
    Ok(())
}
