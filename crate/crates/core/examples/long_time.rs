//! Accumulated bounds over many Trotter steps and the per-step vector norms.

use trotter_scope::bounds::{accumulated_entanglement, accumulated_scrambling, exact_error};
use trotter_scope::formula::{leading_term, make_spec, Propagators};
use trotter_scope::hamiltonians::qimf;
use trotter_scope::{PauliSum, Result, StateVector};

fn main() -> Result<()> {
    let n = 8;
    let (dt, r) = (0.1, 100);
    let h = qimf(n, 0.809, 0.9045, 1.0)?;
    let props = Propagators::new(&h, &make_spec(1, 2)?)?;
    let labels: Vec<String> = (0..n - 1)
        .map(|i| format!("{}XX{}", "I".repeat(i), "I".repeat(n - 2 - i)))
        .collect();
    let xx = PauliSum::from_labels(&labels.iter().map(|l| (1.0, l.as_str())).collect::<Vec<_>>())?;
    let obs = xx.scale_real(1.0 / xx.spectral_norm()?);
    let o = obs.to_dense()?;
    let psi = StateVector::basis(n, 0)?;

    let seg = props.segment(dt)?;
    let ent = accumulated_entanglement(&psi, &o, &props, dt, r)?;
    let scr = accumulated_scrambling(&psi, &o, &props, &leading_term(&h, 1)?, dt, r)?;
    println!("exact error after {r} steps {:.4e}", exact_error(&psi, &o, &seg, r)?);
    println!(
        "accumulated scrambling {:.4e}, entanglement {:.4e}",
        scr.bound, ent.bound
    );
    println!("|O|_F {:.4}, |M|_F {:.4e}", obs.frobenius_norm(), ent.m_frobenius);
    for k in (0..r).step_by(20) {
        println!(
            "  k={:<3} v_o {:.4} v_o_m {:.4} v_m {:.3e} v_m_o {:.3e}",
            k + 1,
            ent.v_o[k],
            ent.v_o_m[k],
            ent.v_m[k],
            ent.v_m_o[k]
        );
    }
    Ok(())
}
