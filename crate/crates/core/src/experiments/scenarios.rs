use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::bounds::delta::{entanglement_bound_with_remainder, frobenius_product};
use crate::bounds::scrambling::single_terms;
use crate::bounds::{
    accumulated_entanglement, accumulated_scrambling, evolved_observable, exact_error, format_value, haar_average,
    scrambling_bound, scrambling_bound_local, vector_norm_bound, worst_case_bound, worst_case_state, BoundReport,
};
use crate::entanglement::{cut_entropy, energy_entropy_scan, entropy_trace, write_scan_csv};
use crate::error::{Error, Result};
use crate::formula::{leading_term, make_spec, Propagators};
use crate::hamiltonians::HamiltonianSplit;
use crate::linalg::{DenseOperator, StateVector};
use crate::pauli::PauliSum;

use super::{as_config, min_trotter_steps, ObservableSet, ScenarioConfig};

struct Setup {
    props: Propagators,
    obs_name: String,
    obs: PauliSum,
    o: DenseOperator,
}

impl Setup {
    fn new(cfg: &ScenarioConfig, base: Option<&Path>) -> Result<Self> {
        let h = cfg.hamiltonian(base)?;
        Self::with_split(cfg, &h, base)
    }

    fn with_split(cfg: &ScenarioConfig, h: &HamiltonianSplit, base: Option<&Path>) -> Result<Self> {
        let spec = make_spec(cfg.order, h.n_terms()).map_err(as_config)?;
        let props = Propagators::new(h, &spec).map_err(as_config)?;
        let (obs_name, obs) = cfg.observable.resolve(h, base)?;
        let o = obs.to_dense().map_err(as_config)?;
        Ok(Self {
            props,
            obs_name,
            obs,
            o,
        })
    }

    fn n(&self) -> usize {
        self.props.n_sites()
    }
}

/// `leading_term` when the order has a symbolic leading term.
fn optional_leading(props: &Propagators) -> Result<Option<PauliSum>> {
    match leading_term(props.split(), props.spec().order()) {
        Ok(m) => Ok(Some(m)),
        Err(Error::Unsupported(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn meta(cfg: &ScenarioConfig, extra: &[(&str, String)]) -> Vec<(String, String)> {
    let mut m = cfg.metadata();
    m.extend(extra.iter().map(|(k, v)| (k.to_string(), v.clone())));
    m
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numerical(format!("{name} is not finite")))
    }
}

fn sites_text(cut: &[usize]) -> String {
    format!("{cut:?}")
}

const ONE_STEP_NOTES: [&str; 7] = [
    "remainder",
    "s_state",
    "scrambling_leading",
    "v_m",
    "v_m_o",
    "v_o",
    "v_o_m",
];

/// One row per grid time `t_k = k·dt`, `k = 0..=r`: the state is evolved
/// exactly to `t_k` and one further `dt` segment is bounded. `r = 0` gives
/// a header-only table.
pub fn run_one_step(cfg: &ScenarioConfig, base: Option<&Path>) -> Result<String> {
    let s = Setup::new(cfg, base)?;
    let n = s.n();
    let order = s.props.spec().order();
    let seg = s.props.segment(cfg.dt)?;
    let psi0 = cfg.state.build(n, Some((&s.o, &seg)))?;
    let cut = cfg.cut_sites(n)?;
    let o_dt = evolved_observable(&s.o, &seg)?;
    let worst = worst_case_bound(&o_dt, &seg.m)?;
    let haar = haar_average(&o_dt, &seg.m)?;
    let scale = cfg.dt.powi(order as i32 + 1);
    let lead = optional_leading(&s.props)?;
    let lead_parts = lead.as_ref().map(single_terms).unwrap_or_default();
    let (lead_scaled, remainder) = match &lead {
        Some(m) => {
            let ms = m.to_dense()?.scale_real(scale);
            let rem = 2.0 * s.o.spectral_norm() * seg.m.sub(&ms)?.spectral_norm();
            (Some(ms), finite("remainder", rem)?)
        }
        None => (None, f64::NAN),
    };
    let frob = lead
        .as_ref()
        .map_or(f64::NAN, |m| frobenius_product(&s.obs, m, cfg.dt, order));
    let eig = s.props.total_eigen();
    let steps: Vec<usize> = if cfg.r == 0 { vec![] } else { (0..=cfg.r).collect() };
    let reports = steps
        .into_par_iter()
        .map(|k| {
            let t = k as f64 * cfg.dt;
            let psi = eig.evolve(&psi0, t);
            let vec = vector_norm_bound(&psi, &s.o, &seg)?;
            let mut r = BoundReport {
                t,
                exact_error: exact_error(&psi, &s.o, &seg, 1)?,
                scrambling: scrambling_bound(&psi, &o_dt, &seg.m)?,
                worst_case: worst,
                haar_mean: haar.mean,
                vector_norm_bound: vec.bound,
                frobenius_product: frob,
                ..Default::default()
            };
            match (&lead, &lead_scaled) {
                (Some(m), Some(ms)) => {
                    r.scrambling_local = scrambling_bound_local(&psi, &o_dt, &lead_parts, cfg.dt, order)?;
                    r.entanglement_bound =
                        entanglement_bound_with_remainder(&psi, &s.obs, &seg, m, order, remainder)?.bound;
                    r.note("scrambling_leading", scrambling_bound(&psi, &o_dt, ms)?);
                }
                _ => {
                    r.scrambling_local = f64::NAN;
                    r.entanglement_bound = f64::NAN;
                    r.note("scrambling_leading", f64::NAN);
                }
            }
            r.note("remainder", remainder);
            r.note("s_state", cut_entropy(&psi, &cut)?);
            r.note("v_o", vec.v_o);
            r.note("v_m_o", vec.v_m_o);
            r.note("v_m", vec.v_m);
            r.note("v_o_m", vec.v_o_m);
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    let metadata = meta(
        cfg,
        &[
            ("observable", s.obs_name.clone()),
            ("cut", sites_text(&cut)),
            ("m", "scrambling and worst use the full multiplicative error".into()),
            ("haar_var_bound", format_value(haar.var_bound)),
        ],
    );
    let notes: Vec<String> = ONE_STEP_NOTES.iter().map(|s| s.to_string()).collect();
    let mut text = String::new();
    for (k, v) in &metadata {
        let _ = writeln!(text, "# {k}: {v}");
    }
    let _ = writeln!(text, "{}", BoundReport::header(&notes));
    for r in &reports {
        let _ = writeln!(text, "{}", r.row(&notes));
    }
    Ok(text)
}

/// One-step errors of `H₁` and `H₂ = c·H₁` along exact trajectories that start
/// from each Hamiltonian's worst-case state.
#[derive(Clone, Debug, PartialEq)]
pub struct StrongWeakTrace {
    pub times: Vec<f64>,
    pub err_h1: Vec<f64>,
    pub err_h2: Vec<f64>,
}

impl StrongWeakTrace {
    pub fn ratio(&self, k: usize) -> f64 {
        self.err_h2[k] / self.err_h1[k]
    }

    pub fn initial_ratio(&self) -> f64 {
        self.ratio(0)
    }

    /// Ratio of the mean errors over the second half of the grid.
    pub fn late_ratio(&self) -> f64 {
        let from = self.times.len() / 2;
        let m1: f64 = self.err_h1[from..].iter().sum();
        let m2: f64 = self.err_h2[from..].iter().sum();
        m2 / m1
    }
}

pub fn strong_weak_trace(
    h1: &HamiltonianSplit,
    order: usize,
    o: &DenseOperator,
    strength: f64,
    dt: f64,
    r: usize,
) -> Result<StrongWeakTrace> {
    let spec = make_spec(order, h1.n_terms())?;
    let h2 = h1.scale(strength);
    let mut errs = Vec::with_capacity(2);
    for h in [h1, &h2] {
        let props = Propagators::new(h, &spec)?;
        let seg = props.segment(dt)?;
        let w = worst_case_state(o, &seg)?;
        let eig = props.total_eigen();
        let e = (0..=r)
            .into_par_iter()
            .map(|k| exact_error(&eig.evolve(&w, k as f64 * dt), o, &seg, 1))
            .collect::<Result<Vec<f64>>>()?;
        errs.push(e);
    }
    let err_h2 = errs.pop().expect("two traces");
    let err_h1 = errs.pop().expect("two traces");
    Ok(StrongWeakTrace {
        times: (0..=r).map(|k| k as f64 * dt).collect(),
        err_h1,
        err_h2,
    })
}

pub fn run_strong_weak(cfg: &ScenarioConfig, base: Option<&Path>) -> Result<String> {
    let h = cfg.hamiltonian(base)?;
    let s = Setup::with_split(cfg, &h, base)?;
    let tr = strong_weak_trace(&h, cfg.order, &s.o, cfg.strength, cfg.dt, cfg.r)?;
    let mut text = String::new();
    for (k, v) in meta(
        cfg,
        &[
            ("observable", s.obs_name.clone()),
            ("initial_ratio", format_value(tr.initial_ratio())),
            ("late_ratio", format_value(tr.late_ratio())),
        ],
    ) {
        let _ = writeln!(text, "# {k}: {v}");
    }
    text.push_str("t,err_h1,err_h2,ratio\n");
    for k in 0..tr.times.len() {
        let row = [tr.times[k], tr.err_h1[k], tr.err_h2[k], tr.ratio(k)];
        let _ = writeln!(text, "{}", row.map(format_value).join(","));
    }
    Ok(text)
}

pub fn run_long_time(cfg: &ScenarioConfig, base: Option<&Path>) -> Result<String> {
    let s = Setup::new(cfg, base)?;
    if cfg.r == 0 {
        return Err(Error::Config("long-time needs r ≥ 1".into()));
    }
    let seg = s.props.segment(cfg.dt)?;
    let psi0 = cfg.state.build(s.n(), Some((&s.o, &seg)))?;
    let ent = accumulated_entanglement(&psi0, &s.o, &s.props, cfg.dt, cfg.r)?;
    let scr = match optional_leading(&s.props)? {
        Some(m) => {
            let acc = accumulated_scrambling(&psi0, &s.o, &s.props, &m, cfg.dt, cfg.r)?;
            finite("accumulated scrambling bound", acc.bound)?;
            Some(acc)
        }
        None => None,
    };
    let exact = exact_error(&psi0, &s.o, &seg, cfg.r)?;
    let mut text = String::new();
    for (k, v) in meta(
        cfg,
        &[
            ("observable", s.obs_name.clone()),
            ("o_frobenius", format_value(s.obs.frobenius_norm())),
            ("m_frobenius", format_value(ent.m_frobenius)),
            ("m_spectral", format_value(ent.m_spectral)),
            ("exact_error", format_value(exact)),
            ("accumulated_entanglement", format_value(ent.bound)),
            (
                "accumulated_scrambling",
                format_value(scr.as_ref().map_or(f64::NAN, |a| a.bound)),
            ),
        ],
    ) {
        let _ = writeln!(text, "# {k}: {v}");
    }
    text.push_str("k,v_o,v_o_m,v_m,v_m_o,scrambling_k\n");
    for i in 0..cfg.r {
        let sk = scr.as_ref().map_or(f64::NAN, |a| a.per_k[i]);
        let vals = [ent.v_o[i], ent.v_o_m[i], ent.v_m[i], ent.v_m_o[i], sk]
            .map(format_value)
            .join(",");
        let _ = writeln!(text, "{},{vals}", i + 1);
    }
    Ok(text)
}

pub fn run_min_steps(cfg: &ScenarioConfig, base: Option<&Path>) -> Result<String> {
    let h = cfg.hamiltonian(base)?;
    let spec = make_spec(cfg.order, h.n_terms()).map_err(as_config)?;
    let props = Propagators::new(&h, &spec).map_err(as_config)?;
    if let Err(e) = leading_term(&h, cfg.order) {
        return Err(as_config(e));
    }
    let set = ObservableSet::standard(&h, cfg.random_observables, cfg.seed)?;
    let psi0: StateVector = cfg.state.build(h.n_sites(), None)?;
    let mut text = String::new();
    for (k, v) in meta(cfg, &[("observables", set.len().to_string())]) {
        let _ = writeln!(text, "# {k}: {v}");
    }
    text.push_str("t,observable,r_scrambling,r_baseline,saturated_scrambling,saturated_baseline\n");
    for &t in &cfg.times {
        let rep = min_trotter_steps(&set, &psi0, &props, t, cfg.epsilon, cfg.r_cap)?;
        let tv = format_value(t);
        for o in &rep.per_observable {
            let _ = writeln!(
                text,
                "{tv},{},{},{},{},{}",
                o.name, o.scrambling.r, o.baseline.r, o.scrambling.saturated, o.baseline.saturated
            );
        }
        let sat_s = rep.per_observable.iter().any(|o| o.scrambling.saturated);
        let sat_b = rep.per_observable.iter().any(|o| o.baseline.saturated);
        let _ = writeln!(
            text,
            "{tv},worst,{},{},{sat_s},{sat_b}",
            rep.worst_scrambling(),
            rep.worst_baseline()
        );
        let _ = writeln!(
            text,
            "{tv},mean,{},{},{sat_s},{sat_b}",
            format_value(rep.mean_scrambling()),
            format_value(rep.mean_baseline())
        );
    }
    Ok(text)
}

pub fn run_induced_entropy(cfg: &ScenarioConfig, base: Option<&Path>) -> Result<String> {
    let s = Setup::new(cfg, base)?;
    let seg = s.props.segment(cfg.dt)?;
    let psi0 = cfg.state.build(s.n(), Some((&s.o, &seg)))?;
    let cut = cfg.cut_sites(s.n())?;
    let tr = entropy_trace(&s.props, &psi0, &s.o, &cut, cfg.dt, cfg.r)?;
    let mut out = Vec::new();
    tr.write_csv(
        &mut out,
        &meta(cfg, &[("observable", s.obs_name.clone()), ("cut", sites_text(&cut))]),
    )?;
    Ok(String::from_utf8(out).expect("CSV is UTF-8"))
}

pub fn run_energy_entropy(cfg: &ScenarioConfig, base: Option<&Path>) -> Result<String> {
    let h = cfg.hamiltonian(base)?;
    let cut = cfg.cut_sites(h.n_sites())?;
    let pts = energy_entropy_scan(&h, cfg.samples, cfg.t_final, cfg.steps, &cut, cfg.seed).map_err(as_config)?;
    let mut out = Vec::new();
    write_scan_csv(
        &mut out,
        &meta(cfg, &[("cut", sites_text(&cut)), ("seed", cfg.seed.to_string())]),
        &pts,
    )?;
    Ok(String::from_utf8(out).expect("CSV is UTF-8"))
}
