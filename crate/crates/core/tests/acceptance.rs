//! Acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trotter_scope::bounds::{
    accumulated_entanglement, accumulated_scrambling, entanglement_bound, evolved_observable, exact_error,
    haar_average, haar_monte_carlo, haar_state, scrambling_bound, vector_norm_bound, worst_case_bound,
};
use trotter_scope::entanglement::{entropy_trace, middle_cut};
use trotter_scope::experiments::{random_local_observable, strong_weak_trace, Scenario};
use trotter_scope::formula::{leading_term, make_spec, segment, Propagators};
use trotter_scope::hamiltonians::{fig1_hamiltonian, qimf, ATYPICAL, TYPICAL};
use trotter_scope::pauli::{commutator, Pauli, PauliString, PauliSum};
use trotter_scope::{Complex64, StateVector};

type Outcome = (bool, String);

fn normalized(o: PauliSum) -> PauliSum {
    let n = o.spectral_norm().unwrap();
    o.scale_real(1.0 / n)
}

fn pair_sum(n: usize, p: Pauli) -> PauliSum {
    PauliSum::from_terms(
        n,
        (0..n - 1).map(|s| {
            (
                Complex64::new(1.0, 0.0),
                PauliString::from_sites(n, &[(s, p), (s + 1, p)]).unwrap(),
            )
        }),
    )
    .unwrap()
}

fn product(n: usize, q: [f64; 2]) -> StateVector {
    StateVector::product(&vec![[Complex64::new(q[0], 0.0), Complex64::new(q[1], 0.0)]; n]).unwrap()
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

fn worst_case_values() -> Outcome {
    let targets = [("typical", TYPICAL, 3.3254e-3), ("atypical", ATYPICAL, 1.0912e-3)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, (hx, hy, j), target) in targets {
        let h = qimf(10, hx, hy, j).unwrap();
        let seg = segment(&h, &make_spec(2, 2).unwrap(), 0.1).unwrap();
        let o = normalized(h.total().clone()).to_dense().unwrap();
        let w = worst_case_bound(&evolved_observable(&o, &seg).unwrap(), &seg.m).unwrap();
        let rel = (w - target).abs() / target;
        ok &= rel < 0.01;
        parts.push(format!("{name} {w:.5e} (target {target:.4e}, rel {rel:.1e})"));
    }
    (ok, format!("N=10 PF2 dt=0.1: {}", parts.join("; ")))
}

fn strong_weak() -> Outcome {
    let n = 8;
    let h1 = qimf(n, 0.8, 0.9, 1.0).unwrap();
    let o = normalized(pair_sum(n, Pauli::X)).to_dense().unwrap();
    let tr = strong_weak_trace(&h1, 1, &o, 1.4, 0.1, 100).unwrap();
    let init = tr.initial_ratio();
    let late = tr.late_ratio();
    let ok = (init - 1.9585).abs() / 1.9585 < 0.05 && late < init;
    (
        ok,
        format!("initial ratio {init:.4} (target 1.9585 within 5%), late ratio {late:.4} over t in [5, 10]"),
    )
}

fn symbolic_oracle() -> Outcome {
    let n = 6;
    let (hx, hy, j) = (0.7, 1.3, 0.45);
    let h = qimf(n, hx, hy, j).unwrap();
    let (a, b) = h.pair().unwrap();
    let c = |v: f64| Complex64::new(v, 0.0);
    let ci = |v: f64| Complex64::new(0.0, v);
    let s = |sites: &[(usize, Pauli)]| PauliString::from_sites(n, sites).unwrap();
    use Pauli::{X, Y, Z};

    let mut ab = Vec::new();
    for q in 0..n {
        ab.push((ci(2.0 * hx * hy), s(&[(q, Z)])));
    }
    for q in 0..n - 1 {
        ab.push((ci(2.0 * j * hy), s(&[(q, Z), (q + 1, X)])));
        ab.push((ci(2.0 * j * hy), s(&[(q, X), (q + 1, Z)])));
    }
    let mut aab = Vec::new();
    for q in 0..n {
        aab.push((c(4.0 * hx * hx * hy), s(&[(q, Y)])));
    }
    for q in 0..n - 1 {
        aab.push((c(4.0 * j * j * hy), s(&[(q, Y)])));
        aab.push((c(4.0 * j * j * hy), s(&[(q + 1, Y)])));
        aab.push((c(8.0 * j * hx * hy), s(&[(q, Y), (q + 1, X)])));
        aab.push((c(8.0 * j * hx * hy), s(&[(q, X), (q + 1, Y)])));
    }
    for q in 0..n - 2 {
        // Printed with the middle index as j+2; the string is X_j Y_{j+1} X_{j+2}.
        aab.push((c(8.0 * j * j * hy), s(&[(q, X), (q + 1, Y), (q + 2, X)])));
    }
    let mut bab = Vec::new();
    for q in 0..n {
        bab.push((c(-4.0 * hx * hy * hy), s(&[(q, X)])));
    }
    for q in 0..n - 1 {
        bab.push((c(8.0 * j * hy * hy), s(&[(q, Z), (q + 1, Z)])));
        bab.push((c(-8.0 * j * hy * hy), s(&[(q, X), (q + 1, X)])));
    }
    let ab_want = PauliSum::from_terms(n, ab).unwrap();
    let aab_want = PauliSum::from_terms(n, aab).unwrap();
    let bab_want = PauliSum::from_terms(n, bab).unwrap();

    let ab_got = commutator(a, b).unwrap();
    let aab_got = commutator(a, &ab_got).unwrap();
    let bab_got = commutator(b, &ab_got).unwrap();
    let diff = |x: &PauliSum, y: &PauliSum| {
        let d = x.sub(y).unwrap();
        d.iter().map(|(_, v)| v.norm()).fold(0.0f64, f64::max)
    };
    let same_strings = |x: &PauliSum, y: &PauliSum| x.iter().map(|(p, _)| p).eq(y.iter().map(|(p, _)| p));
    let results = [
        ("[A,B]", same_strings(&ab_got, &ab_want), diff(&ab_got, &ab_want)),
        (
            "[A,[A,B]]",
            same_strings(&aab_got, &aab_want),
            diff(&aab_got, &aab_want),
        ),
        (
            "[B,[A,B]]",
            same_strings(&bab_got, &bab_want),
            diff(&bab_got, &bab_want),
        ),
    ];
    let ok = results.iter().all(|(_, same, d)| *same && *d <= 1e-12);
    let detail = results
        .iter()
        .map(|(name, same, d)| {
            format!(
                "{name} strings {} max coef diff {d:.1e}",
                if *same { "equal" } else { "DIFFER" }
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    (ok, format!("N={n}: {detail}"))
}

fn bound_chain() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let slack = 1e-9;
    let cases = 200;
    let mut violations = Vec::new();
    for case in 0..cases {
        let n = rng.random_range(3..=8usize);
        let (hx, hy, j) = (
            rng.random_range(0.0..1.5),
            rng.random_range(0.2..1.5),
            rng.random_range(0.0..1.5),
        );
        let dt = [0.05, 0.1, 0.2][rng.random_range(0..3usize)];
        let p = rng.random_range(1..=2usize);
        let k = rng.random_range(1..=3usize.min(n));
        let h = qimf(n, hx, hy, j).unwrap();
        let obs = normalized(random_local_observable(n, k, &mut rng).unwrap());
        let o = obs.to_dense().unwrap();
        let psi = haar_state(n, &mut rng).unwrap();
        let props = Propagators::new(&h, &make_spec(p, 2).unwrap()).unwrap();
        let seg = props.segment(dt).unwrap();
        let lead = leading_term(&h, p).unwrap();
        let o_dt = evolved_observable(&o, &seg).unwrap();

        let exact = exact_error(&psi, &o, &seg, 1).unwrap();
        let scr = scrambling_bound(&psi, &o_dt, &seg.m).unwrap();
        let worst = worst_case_bound(&o_dt, &seg.m).unwrap();
        let vec = vector_norm_bound(&psi, &o, &seg).unwrap().bound;
        let ent = entanglement_bound(&psi, &obs, &seg, &lead, p).unwrap().bound;
        let mut checks = vec![
            ("exact<=scrambling", exact, scr),
            ("scrambling<=worst", scr, worst),
            ("exact<=vecnorm", exact, vec),
            ("exact<=entanglement", exact, ent),
        ];
        for r in [5usize, 30] {
            let acc = accumulated_scrambling(&psi, &o, &props, &lead, dt, r).unwrap().bound;
            checks.push((
                if r == 5 {
                    "exact(5)<=accumulated"
                } else {
                    "exact(30)<=accumulated"
                },
                exact_error(&psi, &o, &seg, r).unwrap(),
                acc,
            ));
        }
        for (name, lo, hi) in checks {
            if lo > hi + slack {
                violations.push(format!("case {case} {name}: {lo:e} > {hi:e}"));
            }
        }
    }
    let ok = violations.is_empty();
    let detail = if ok {
        format!("{cases} random cases (N 3..8, dt in {{.05,.1,.2}}, p in {{1,2}}), 0 violations")
    } else {
        format!("{} violations, first: {}", violations.len(), violations[0])
    };
    (ok, detail)
}

fn order_of_accuracy() -> Outcome {
    let h = qimf(6, TYPICAL.0, TYPICAL.1, TYPICAL.2).unwrap();
    let dts = [0.2, 0.1, 0.05, 0.025];
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [1usize, 2, 4] {
        let props = Propagators::new(&h, &make_spec(p, 2).unwrap()).unwrap();
        let segs: Vec<_> = dts.iter().map(|&dt| props.segment(dt).unwrap()).collect();
        let norms: Vec<f64> = segs.iter().map(|s| s.m.spectral_norm()).collect();
        let sl = slope(&dts, &norms);
        ok &= (sl - (p as f64 + 1.0)).abs() <= 0.15;
        parts.push(format!("p={p} |M| slope {sl:.3}"));
        if p <= 2 {
            let lead = leading_term(&h, p).unwrap().to_dense().unwrap();
            let rems: Vec<f64> = segs
                .iter()
                .map(|s| {
                    s.m.sub(&lead.scale_real(s.dt.powi(p as i32 + 1)))
                        .unwrap()
                        .spectral_norm()
                })
                .collect();
            let sr = slope(&dts, &rems);
            ok &= (sr - (p as f64 + 2.0)).abs() <= 0.2;
            parts.push(format!("p={p} remainder slope {sr:.3}"));
        }
    }
    (ok, parts.join(", "))
}

fn haar_bound() -> Outcome {
    let n = 6;
    let h = qimf(n, TYPICAL.0, TYPICAL.1, TYPICAL.2).unwrap();
    let seg = segment(&h, &make_spec(1, 2).unwrap(), 0.1).unwrap();
    let o = normalized(pair_sum(n, Pauli::X)).to_dense().unwrap();
    let avg = haar_average(&evolved_observable(&o, &seg).unwrap(), &seg.m).unwrap();
    let mc = haar_monte_carlo(&o, &seg, 500, 11).unwrap();
    let ok = mc.mean <= avg.mean + 3.0 * mc.std_error && mc.second_moment <= avg.var_bound;
    (
        ok,
        format!(
            "N=6, 500 samples: MC mean {:.4e} (se {:.1e}) vs Frobenius {:.4e}; second moment {:.4e} vs variance bound {:.4e}",
            mc.mean, mc.std_error, avg.mean, mc.second_moment, avg.var_bound
        ),
    )
}

fn observation() -> Outcome {
    let n = 10;
    let (r, dt) = (1000, 0.1);
    let h = qimf(n, TYPICAL.0, TYPICAL.1, TYPICAL.2).unwrap();
    let props = Propagators::new(&h, &make_spec(1, 2).unwrap()).unwrap();
    let obs = normalized(pair_sum(n, Pauli::X));
    let o = obs.to_dense().unwrap();
    let o_f = obs.frobenius_norm();

    let entangled = accumulated_entanglement(&product(n, [1.0, 0.0]), &o, &props, dt, r).unwrap();
    let h2 = std::f64::consts::FRAC_1_SQRT_2;
    let weak = accumulated_entanglement(&product(n, [h2, h2]), &o, &props, dt, r).unwrap();

    let mean = entangled.v_o.iter().sum::<f64>() / r as f64;
    let std = (entangled.v_o.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r as f64 - 1.0)).sqrt();
    let spread = std / mean;
    let mean_dev = (mean - o_f).abs() / o_f;
    let departure = |a: &trotter_scope::bounds::delta::AccumulatedEntanglement| {
        a.v_m.iter().map(|v| (v - a.m_frobenius).abs()).sum::<f64>() / (r as f64 * a.m_spectral)
    };
    let (d_ent, d_weak) = (departure(&entangled), departure(&weak));
    let ok = spread < 0.15 && mean_dev < 0.2 && d_weak > 2.0 * d_ent;
    (
        ok,
        format!(
            "N=10 r=1000: v(O) spread {spread:.3} (<0.15), mean {mean:.4} vs |O|_F {o_f:.4} (dev {mean_dev:.3} < 0.2); \
             v(M) departure weak {d_weak:.4} vs entangled {d_ent:.4} (ratio {:.2} > 2)",
            d_weak / d_ent
        ),
    )
}

fn induced_entanglement() -> Outcome {
    let n = 10;
    let h = fig1_hamiltonian(n).unwrap();
    let props = Propagators::new(&h, &make_spec(1, 2).unwrap()).unwrap();
    let o = normalized(pair_sum(n, Pauli::Z)).to_dense().unwrap();
    let h2 = std::f64::consts::FRAC_1_SQRT_2;
    let cut = middle_cut(n, 4).unwrap();
    let tr = entropy_trace(&props, &product(n, [h2, h2]), &o, &cut, 0.1, 60).unwrap();
    let limit = 0.5 * (16f64).ln();
    let good = (0..tr.len())
        .filter(|&i| tr.s_induced_o[i] >= 2.0 * tr.s_state[i] && tr.s_induced_m[i] >= 2.0 * tr.s_state[i])
        .count();
    let frac = good as f64 / tr.len() as f64;
    let max_state = tr.s_state.iter().copied().fold(0.0f64, f64::max);
    let ok = frac >= 0.7 && max_state < limit;
    (
        ok,
        format!(
            "N=10 cut {cut:?}, t in [0, 6]: induced >= 2x state on {:.0}% of grid (>= 70%), max s_state {max_state:.3} < {limit:.3}",
            frac * 100.0
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"model": {"model": "qimf", "n": 6, "hx": 0.809, "hy": 0.9045, "j": 1.0},
            "order": 1, "dt": 0.1, "r": 6, "observable": "xx_corr", "state": "haar:5", "seed": 3,
            "epsilon": 1e-2, "times": [1.0], "random_observables": 1, "samples": 6, "t_final": 2.0, "steps": 8}"#,
    )
    .unwrap();
    let bin = env!("CARGO_BIN_EXE_trotter-scope");
    let run = |out: &Path, threads: &str, sc: Scenario| -> Option<String> {
        let status = Command::new(bin)
            .arg(sc.name())
            .arg("--config")
            .arg(&cfg)
            .arg("--out")
            .arg(out)
            .env("TROTTER_SCOPE_THREADS", threads)
            .output()
            .ok()?;
        if !status.status.success() {
            return None;
        }
        std::fs::read_to_string(out.join(format!("{}.csv", sc.name()))).ok()
    };
    let mut failed = Vec::new();
    for sc in Scenario::ALL {
        let a = run(&dir.path().join("a"), "1", sc);
        let b = run(&dir.path().join("b"), "2", sc);
        if a.is_none() || a != b {
            failed.push(sc.name());
        }
    }
    let ok = failed.is_empty();
    (
        ok,
        if ok {
            "all 6 scenarios byte-identical (metadata included) across reruns (1 and 2 worker threads)".into()
        } else {
            format!("differing or failing scenarios: {failed:?}")
        },
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("worst-case commutator values", worst_case_values),
        ("strong/weak scaling", strong_weak),
        ("symbolic oracle match", symbolic_oracle),
        ("bound chain property suite", bound_chain),
        ("order of accuracy", order_of_accuracy),
        ("Haar bound", haar_bound),
        ("observation diagnostic", observation),
        ("induced entanglement", induced_entanglement),
        ("determinism", determinism),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            (false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        all &= ok;
        println!(
            "criterion {}: {} {name} [{:.1}s] {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
