//! Multiplicative Trotter error of PF1, PF2 and PF4 and its order in the step size.

use trotter_scope::formula::{leading_term, make_spec, Propagators};
use trotter_scope::hamiltonians::qimf;
use trotter_scope::Result;

fn main() -> Result<()> {
    let h = qimf(6, 0.809, 0.9045, 1.0)?;
    let dts = [0.2, 0.1, 0.05, 0.025];
    for p in [1usize, 2, 4] {
        let props = Propagators::new(&h, &make_spec(p, 2)?)?;
        println!("PF{p}: {} stages", props.spec().stages().len());
        let lead = if p <= 2 {
            Some(leading_term(&h, p)?.to_dense()?)
        } else {
            None
        };
        let mut prev: Option<f64> = None;
        for dt in dts {
            let m = props.segment(dt)?.m;
            let norm = m.spectral_norm();
            let rate = prev.map_or(String::new(), |q| format!("  slope {:.3}", (q / norm).log2()));
            let rem = match &lead {
                Some(l) => format!(
                    "  |M - M_lead dt^{}| {:.3e}",
                    p + 1,
                    m.sub(&l.scale_real(dt.powi(p as i32 + 1)))?.spectral_norm()
                ),
                None => String::new(),
            };
            println!("  dt {dt:<6} |M| {norm:.3e}{rate}{rem}");
            prev = Some(norm);
        }
    }
    Ok(())
}
