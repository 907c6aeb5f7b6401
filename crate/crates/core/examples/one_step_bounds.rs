//! Exact one-step observable error against the scrambling, vector-norm,
//! entanglement and worst-case bounds along an exact trajectory.

use trotter_scope::bounds::{
    entanglement_bound, evolved_observable, exact_error, scrambling_bound, vector_norm_bound, worst_case_bound,
};
use trotter_scope::formula::{leading_term, make_spec, Propagators};
use trotter_scope::hamiltonians::qimf;
use trotter_scope::{Result, StateVector};

fn main() -> Result<()> {
    let n = 8;
    let (order, dt) = (2, 0.1);
    let h = qimf(n, 0.809, 0.9045, 1.0)?;
    let props = Propagators::new(&h, &make_spec(order, 2)?)?;
    let seg = props.segment(dt)?;
    let obs = h.total().scale_real(1.0 / h.total().spectral_norm()?);
    let o = obs.to_dense()?;
    let o_dt = evolved_observable(&o, &seg)?;
    let lead = leading_term(&h, order)?;
    let worst = worst_case_bound(&o_dt, &seg.m)?;
    let psi0 = StateVector::basis(n, 0)?;

    println!(
        "{:>5} {:>11} {:>11} {:>11} {:>11} {:>11}",
        "t", "exact", "scrambling", "vecnorm", "entangle", "worst"
    );
    for k in 0..=5 {
        let t = k as f64 * 0.5;
        let psi = props.total_eigen().evolve(&psi0, t);
        println!(
            "{t:>5.1} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {worst:>11.4e}",
            exact_error(&psi, &o, &seg, 1)?,
            scrambling_bound(&psi, &o_dt, &seg.m)?,
            vector_norm_bound(&psi, &o, &seg)?.bound,
            entanglement_bound(&psi, &obs, &seg, &lead, order)?.bound,
        );
    }
    Ok(())
}
