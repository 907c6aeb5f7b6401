//! Worst-case commutator norm, the state attaining the worst error, and the
//! Haar average compared with Monte Carlo sampling.

use trotter_scope::bounds::{
    evolved_observable, exact_error, haar_average, haar_monte_carlo, worst_case_bound, worst_case_state,
};
use trotter_scope::formula::{make_spec, segment};
use trotter_scope::hamiltonians::{qimf, ATYPICAL, TYPICAL};
use trotter_scope::Result;

fn main() -> Result<()> {
    let n = 6;
    for (name, (hx, hy, j)) in [("typical", TYPICAL), ("atypical", ATYPICAL)] {
        let h = qimf(n, hx, hy, j)?;
        let seg = segment(&h, &make_spec(2, 2)?, 0.1)?;
        let o = h.total().scale_real(1.0 / h.total().spectral_norm()?).to_dense()?;
        let o_dt = evolved_observable(&o, &seg)?;
        let worst = worst_case_bound(&o_dt, &seg.m)?;
        let psi = worst_case_state(&o, &seg)?;
        let avg = haar_average(&o_dt, &seg.m)?;
        let mc = haar_monte_carlo(&o, &seg, 500, 7)?;
        println!(
            "{name}: worst-case bound {worst:.4e}, worst state error {:.4e}",
            exact_error(&psi, &o, &seg, 1)?
        );
        println!(
            "  Haar mean bound {:.4e}, Monte Carlo {:.4e} ± {:.1e}",
            avg.mean, mc.mean, mc.std_error
        );
        println!("  second moment {:.4e} <= {:.4e}", mc.second_moment, avg.var_bound);
    }
    Ok(())
}
