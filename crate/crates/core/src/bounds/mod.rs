//! Exact observable errors and the bounds that certify them.
//!
//! Naming: `o` is an observable, `o_dt = U₀†OU₀`, `m` the dense
//! multiplicative error `𝓜`, and `M` its symbolic leading part.

pub mod concrete;
pub mod delta;
pub mod frame;
pub mod haar;
pub mod scrambling;

use std::collections::BTreeMap;
use std::io::Write;

use crate::error::Result;

pub use concrete::{pf1_concrete, pf2_concrete};
pub use delta::{accumulated_entanglement, delta_entanglement, entanglement_bound, vector_norm_bound};
pub use haar::{haar_average, haar_monte_carlo, haar_state};
pub use scrambling::{
    accumulated_scrambling, difference_operator, evolved_observable, exact_error, scrambling_bound,
    scrambling_bound_local, worst_case_bound, worst_case_state,
};

/// Fixed leading CSV columns of a [`BoundReport`].
pub const REPORT_COLUMNS: [&str; 9] = [
    "t",
    "exact",
    "scrambling",
    "scrambling_local",
    "worst",
    "haar_mean",
    "vecnorm",
    "entanglement",
    "frobprod",
];

/// Every bound evaluated at one time point.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundReport {
    pub t: f64,
    pub exact_error: f64,
    pub scrambling: f64,
    pub scrambling_local: f64,
    pub worst_case: f64,
    pub haar_mean: f64,
    pub vector_norm_bound: f64,
    pub entanglement_bound: f64,
    pub frobenius_product: f64,
    pub notes: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn note(&mut self, key: &str, value: f64) {
        self.notes.insert(key.to_string(), value);
    }

    pub fn header(notes: &[String]) -> String {
        let mut cols: Vec<String> = REPORT_COLUMNS.iter().map(|s| s.to_string()).collect();
        cols.extend(notes.iter().map(|k| format!("aux_{k}")));
        cols.join(",")
    }

    /// One CSV row; `notes` fixes the auxiliary column order (missing keys print `nan`).
    pub fn row(&self, notes: &[String]) -> String {
        let mut vals = vec![
            self.t,
            self.exact_error,
            self.scrambling,
            self.scrambling_local,
            self.worst_case,
            self.haar_mean,
            self.vector_norm_bound,
            self.entanglement_bound,
            self.frobenius_product,
        ];
        vals.extend(notes.iter().map(|k| self.notes.get(k).copied().unwrap_or(f64::NAN)));
        vals.iter().map(|v| format_value(*v)).collect::<Vec<_>>().join(",")
    }
}

/// Shortest round-trip decimal form; identical input gives identical text.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:e}")
    }
}

/// Writes `# key: value` metadata lines, the header and one row per report.
pub fn write_reports<W: Write>(out: &mut W, metadata: &[(String, String)], reports: &[BoundReport]) -> Result<()> {
    for (k, v) in metadata {
        writeln!(out, "# {k}: {v}")?;
    }
    let notes: Vec<String> = reports
        .first()
        .map(|r| r.notes.keys().cloned().collect())
        .unwrap_or_default();
    writeln!(out, "{}", BoundReport::header(&notes))?;
    for r in reports {
        writeln!(out, "{}", r.row(&notes))?;
    }
    Ok(())
}
