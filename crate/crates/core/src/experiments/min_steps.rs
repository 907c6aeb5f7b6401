use std::collections::BTreeMap;

use faer::{Mat, Side};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::bounds::frame::EigenFrame;
use crate::bounds::scrambling::leading_scrambling_terms;
use crate::error::{Error, Result};
use crate::formula::{leading_term, Propagators, SegmentUnitaries};
use crate::linalg::{DenseOperator, StateVector};

use super::ObservableSet;

/// Outcome of a step-count search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepCount {
    pub r: usize,
    /// The target was not reached at the cap; `r` is the cap.
    pub saturated: bool,
    /// The search saw the bound increase with `r` and fell back to a linear scan.
    pub nonmonotone: bool,
}

/// Relative increase that counts as a monotonicity violation.
const MONOTONE_SLACK: f64 = 1e-9;

/// Smallest `r ≥ start` with `f(r) ≤ eps`, assuming `f` decreases roughly like
/// `r^{−order}`: extrapolate to bracket, then bisect geometrically. If the
/// evaluated points are not monotone the bracket is rescanned linearly.
pub fn search_min_steps(
    mut f: impl FnMut(usize) -> Result<f64>,
    eps: f64,
    order: usize,
    start: usize,
    cap: usize,
) -> Result<StepCount> {
    if !(eps > 0.0) {
        return Err(Error::invalid(format!("epsilon must be positive, got {eps}")));
    }
    let start = start.max(1);
    if start > cap {
        return Ok(StepCount {
            r: cap,
            saturated: true,
            nonmonotone: false,
        });
    }
    let mut seen = BTreeMap::new();
    let mut eval = |r: usize, seen: &mut BTreeMap<usize, f64>| -> Result<f64> {
        let v = f(r)?;
        if v.is_nan() {
            return Err(Error::Numerical(format!("bound is NaN at r = {r}")));
        }
        seen.insert(r, v);
        Ok(v)
    };
    let mut lo = start;
    let mut f_lo = eval(lo, &mut seen)?;
    if f_lo <= eps {
        return Ok(StepCount {
            r: lo,
            saturated: false,
            nonmonotone: false,
        });
    }
    let mut hi = loop {
        if lo >= cap {
            return Ok(StepCount {
                r: cap,
                saturated: true,
                nonmonotone: false,
            });
        }
        let guess = lo as f64 * (f_lo / eps).powf(1.0 / order.max(1) as f64);
        let guess = if guess.is_finite() && guess < cap as f64 {
            guess.ceil() as usize
        } else {
            cap
        };
        let cand = guess.max(lo + lo / 2 + 1).min(cap);
        let fc = eval(cand, &mut seen)?;
        if fc <= eps {
            break cand;
        }
        lo = cand;
        f_lo = fc;
    };
    while hi - lo > 1 {
        let mid = ((lo as f64 * hi as f64).sqrt().round() as usize).clamp(lo + 1, hi - 1);
        if eval(mid, &mut seen)? <= eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let values: Vec<f64> = seen.values().copied().collect();
    let monotone = values
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + MONOTONE_SLACK) + f64::MIN_POSITIVE);
    if monotone {
        return Ok(StepCount {
            r: hi,
            saturated: false,
            nonmonotone: false,
        });
    }
    for r in start..hi {
        let v = match seen.get(&r) {
            Some(&v) => v,
            None => eval(r, &mut seen)?,
        };
        if v <= eps {
            hi = r;
            break;
        }
    }
    Ok(StepCount {
        r: hi,
        saturated: false,
        nonmonotone: true,
    })
}

/// Step counts of one observable.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableSteps {
    pub name: String,
    pub scrambling: StepCount,
    pub baseline: StepCount,
}

/// Step counts for an observable set at one evolution time.
#[derive(Clone, Debug, PartialEq)]
pub struct MinStepsReport {
    pub t: f64,
    pub epsilon: f64,
    pub per_observable: Vec<ObservableSteps>,
}

impl MinStepsReport {
    /// Steps needed so that every observable meets the target.
    pub fn worst_scrambling(&self) -> usize {
        self.per_observable.iter().map(|o| o.scrambling.r).max().unwrap_or(0)
    }

    pub fn worst_baseline(&self) -> usize {
        self.per_observable.iter().map(|o| o.baseline.r).max().unwrap_or(0)
    }

    pub fn mean_scrambling(&self) -> f64 {
        mean(self.per_observable.iter().map(|o| o.scrambling.r as f64))
    }

    pub fn mean_baseline(&self) -> f64 {
        mean(self.per_observable.iter().map(|o| o.baseline.r as f64))
    }
}

fn mean(it: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = it.len();
    if n == 0 {
        f64::NAN
    } else {
        it.sum::<f64>() / n as f64
    }
}

struct Evaluator<'a> {
    props: &'a Propagators,
    psi0: &'a StateVector,
    lead: DenseOperator,
    lead_rot: Mat<Complex64>,
    t: f64,
    order: usize,
}

impl Evaluator<'_> {
    fn segment(&self, r: usize) -> Result<(SegmentUnitaries, f64)> {
        let dt = self.t / r as f64;
        let seg = self.props.segment(dt)?;
        let rem = seg
            .m
            .sub(&self.lead.scale_real(dt.powi(self.order as i32 + 1)))?
            .spectral_norm();
        Ok((seg, rem))
    }

    /// `Σ_k ‖[O_k,M]ψ_k‖ δt^{p+1} + 2r‖O‖‖𝓜_Re‖`.
    fn scrambling(&self, o_rot: &Mat<Complex64>, o_norm: f64, r: usize) -> Result<f64> {
        let (seg, rem) = self.segment(r)?;
        let frame = EigenFrame::new(self.props, &seg);
        let c0 = frame.coords(self.psi0)?;
        let sums = leading_scrambling_terms(&frame, &c0, r, &self.lead_rot, std::slice::from_ref(o_rot));
        let lead: f64 = sums[0].iter().sum();
        Ok(lead * seg.dt.powi(self.order as i32 + 1) + 2.0 * r as f64 * o_norm * rem)
    }

    /// Same with `‖[O_k,M]‖` in place of `‖[O_k,M]ψ_k‖`.
    fn baseline(&self, o_rot: &Mat<Complex64>, o_norm: f64, r: usize) -> Result<f64> {
        let (seg, rem) = self.segment(r)?;
        let vals = self.props.total_eigen().values();
        let d = vals.len();
        let m = &self.lead_rot;
        let norms: Vec<f64> = (1..=r)
            .into_par_iter()
            .map(|k| {
                let s = k as f64 * seg.dt;
                let ph: Vec<Complex64> = vals.iter().map(|&l| Complex64::from_polar(1.0, l * s)).collect();
                let ok = Mat::from_fn(d, d, |a, b| ph[a] * o_rot[(a, b)] * ph[b].conj());
                // M is anti-Hermitian, so [O_k, M] = O_k M + (O_k M)†.
                let om = &ok * m;
                let herm = Mat::from_fn(d, d, |a, b| om[(a, b)] + om[(b, a)].conj());
                herm.self_adjoint_eigenvalues(Side::Lower)
                    .map(|v| v.iter().fold(0.0f64, |acc, x| acc.max(x.abs())))
                    .map_err(|e| Error::Numerical(format!("eigenvalue solver failed: {e:?}")))
            })
            .collect::<Result<_>>()?;
        let lead: f64 = norms.iter().sum();
        Ok(lead * seg.dt.powi(self.order as i32 + 1) + 2.0 * r as f64 * o_norm * rem)
    }
}

/// Smallest `r` for which the accumulated scrambling bound of each observable
/// reaches `eps` at time `t`, plus the spectral-norm baseline. The baseline
/// search starts from the scrambling count, which it can never undercut.
pub fn min_trotter_steps(
    set: &ObservableSet,
    psi0: &StateVector,
    props: &Propagators,
    t: f64,
    eps: f64,
    r_cap: usize,
) -> Result<MinStepsReport> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time must be positive, got {t}")));
    }
    let order = props.spec().order();
    let lead = leading_term(props.split(), order)?.to_dense()?;
    let eig = props.total_eigen();
    let ev = Evaluator {
        props,
        psi0,
        lead_rot: eig.rotate_into(&lead).into_mat(),
        lead,
        t,
        order,
    };
    let per_observable = set
        .names()
        .par_iter()
        .zip(set.ops().par_iter())
        .map(|(name, o)| {
            let od = o.to_dense()?;
            let o_norm = od.spectral_norm();
            let o_rot = eig.rotate_into(&od).into_mat();
            let scrambling = search_min_steps(|r| ev.scrambling(&o_rot, o_norm, r), eps, order, 1, r_cap)?;
            let baseline = search_min_steps(|r| ev.baseline(&o_rot, o_norm, r), eps, order, scrambling.r, r_cap)?;
            Ok(ObservableSteps {
                name: name.clone(),
                scrambling,
                baseline,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MinStepsReport {
        t,
        epsilon: eps,
        per_observable,
    })
}
