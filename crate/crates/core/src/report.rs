//! Aggregated per-space reports and the `(n, n+1)` family table.
//!
//! Every float in a report is rounded to 12 significant digits before it is
//! stored, so serializing, parsing and serializing again is byte-stable.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{extremize_sectional_with, ExtremizeOptions};
use crate::error::{Error, Result};
use crate::injectivity::{bounds_wpq_with, BindingBranch, CurvatureInterval};
use crate::pinching::{
    coefficients, family_formulas, lambda_bar, lambda_hat, pinch, reference_lambda_bar_family, Method, SimplexQuadratic,
};
use crate::structure::{Classification, WpqIndex};
use crate::volumes::vol_wpq_bounds;

pub const REPORT_VERSION: &str = "1";
/// Sweep budget used when the oracle is needed to settle a maximum.
pub const DEFAULT_ORACLE_BUDGET: usize = 10_000;
/// Largest allowed gap between the closed-form and oracle extremes.
pub const AGREEMENT_TOL: f64 = 1e-3;

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.11e}").parse().unwrap_or(x)
    } else {
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Oracle,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSection {
    pub p: i64,
    pub q: i64,
    pub gcd: i64,
    pub classification: Classification,
    /// Isometric representative used for curvature.
    pub representative: Option<[i64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeSection {
    pub lower: f64,
    pub exact: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSection {
    pub k_min: f64,
    pub k_max: f64,
    pub budget: usize,
    pub seed: u64,
    pub min_hits: usize,
    pub max_hits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSection {
    pub k_min: f64,
    pub k_max: f64,
    pub k_min_exact: Option<String>,
    pub k_max_exact: Option<String>,
    pub lambda_hat: f64,
    pub lambda_bar: f64,
    pub lambda_bar_exact: Option<String>,
    pub capital_lambda0: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub lambda_bar_gates: bool,
    pub k_max_fiber_gate: bool,
    pub k_max_eigen_gate: bool,
    pub k_min_method: Provenance,
    pub k_max_method: Provenance,
    pub oracle: Option<OracleSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectivitySection {
    pub lower: f64,
    pub upper: f64,
    pub binding_branch: BindingBranch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub agreement: f64,
    pub oracle_stationarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub version: String,
    pub index: IndexSection,
    pub volume: VolumeSection,
    pub curvature: Option<CurvatureSection>,
    pub curvature_error: Option<String>,
    pub injectivity: Option<InjectivitySection>,
    pub injectivity_error: Option<String>,
    pub tolerances: Tolerances,
}

impl BoundsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("malformed report: {e}")))
    }

    /// Whether the report was refused for curvature.
    pub fn is_degenerate(&self) -> bool {
        self.index.classification == Classification::Degenerate
    }

    /// Every float finite and every interval ordered.
    pub fn is_consistent(&self) -> bool {
        let v = &self.volume;
        let mut ok = [v.lower, v.exact, v.upper].iter().all(|x| x.is_finite()) && v.lower <= v.exact && v.exact <= v.upper;
        if let Some(c) = &self.curvature {
            ok &= c.k_min.is_finite() && c.k_max.is_finite() && 0.0 < c.k_min && c.k_min <= c.k_max;
        }
        if let Some(i) = &self.injectivity {
            ok &= i.lower.is_finite() && i.upper.is_finite() && 0.0 < i.lower && i.lower <= i.upper;
        }
        ok
    }
}

/// What the report computes beyond the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    /// `None` runs the oracle only when the closed-form maximum is not
    /// established; `Some(0)` never runs it; `Some(b)` always runs it with
    /// budget `b` as a cross-check.
    pub oracle_budget: Option<usize>,
    pub seed: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            oracle_budget: None,
            seed: 0,
        }
    }
}

fn curvature_section(idx: &WpqIndex, opts: &ReportOptions) -> Result<CurvatureSection> {
    let res = pinch(idx)?;
    let unresolved = res.k_max_method == Method::Unresolved;
    let budget = match opts.oracle_budget {
        Some(0) => None,
        Some(b) => Some(b),
        None => unresolved.then_some(DEFAULT_ORACLE_BUDGET),
    };
    let oracle = budget
        .map(|b| extremize_sectional_with(idx, &ExtremizeOptions::new(b, opts.seed)))
        .transpose()?;
    let bar_wins = res.lambda_bar.value <= res.lambda_hat.value;
    let (k_max, k_max_method, k_max_exact) = match (&oracle, unresolved) {
        (Some(o), true) => (o.k_max(), Provenance::Oracle, None),
        (None, true) => {
            return Err(Error::CurvatureUnavailable(format!(
                "closed-form maximum not established for W({},{}) and the oracle is disabled",
                idx.p, idx.q
            )))
        }
        (Some(_), false) => (res.k_max, Provenance::Both, Some(res.k_max_report.capital_lambda0_exact.clone())),
        (None, false) => (res.k_max, Provenance::ClosedForm, Some(res.k_max_report.capital_lambda0_exact.clone())),
    };
    let k_min_method = if oracle.is_some() { Provenance::Both } else { Provenance::ClosedForm };
    Ok(CurvatureSection {
        k_min: sig12(res.k_min),
        k_max: sig12(k_max),
        k_min_exact: if bar_wins { res.lambda_bar.closed_form_exact.clone() } else { None },
        k_max_exact,
        lambda_hat: sig12(res.lambda_hat.value),
        lambda_bar: sig12(res.lambda_bar.value),
        lambda_bar_exact: res.lambda_bar.closed_form_exact.clone(),
        capital_lambda0: sig12(res.capital_lambda0()),
        nu1: sig12(res.nu1()),
        nu2: sig12(res.nu2()),
        lambda_bar_gates: res.lambda_bar.gates_hold(),
        k_max_fiber_gate: res.k_max_report.fiber_gate,
        k_max_eigen_gate: res.k_max_report.eigen_gate,
        k_min_method,
        k_max_method,
        oracle: oracle.map(|o| OracleSection {
            k_min: sig12(o.k_min()),
            k_max: sig12(o.k_max()),
            budget: budget.unwrap_or_default(),
            seed: opts.seed,
            min_hits: o.min.hits,
            max_hits: o.max.hits,
        }),
    })
}

pub fn build_report(p: i64, q: i64, opts: &ReportOptions) -> Result<BoundsReport> {
    let idx = WpqIndex::new(p, q)?;
    let vol = vol_wpq_bounds(&idx);
    let (curvature, curvature_error) = match curvature_section(&idx, opts) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let (injectivity, injectivity_error) = match &curvature {
        Some(c) => match CurvatureInterval::new(c.k_min, c.k_max).and_then(|iv| bounds_wpq_with(&idx, &iv)) {
            Ok(b) => (
                Some(InjectivitySection {
                    lower: sig12(b.lower),
                    upper: sig12(b.upper),
                    binding_branch: b.binding_branch,
                }),
                None,
            ),
            Err(e) => (None, Some(e.to_string())),
        },
        None => (None, Some("no curvature interval".into())),
    };
    Ok(BoundsReport {
        version: REPORT_VERSION.into(),
        index: IndexSection {
            p,
            q,
            gcd: idx.gcd,
            classification: idx.classification,
            representative: idx.curvature_representative().ok().map(|r| [r.p, r.q]),
        },
        volume: VolumeSection {
            lower: sig12(vol.lower),
            exact: sig12(vol.exact.expect("closed-form volume")),
            upper: sig12(vol.upper),
        },
        curvature,
        curvature_error,
        injectivity,
        injectivity_error,
        tolerances: Tolerances {
            agreement: AGREEMENT_TOL,
            oracle_stationarity: ExtremizeOptions::new(DEFAULT_ORACLE_BUDGET, 0).tolerance,
        },
    })
}

/// One row of the `W(n, n+1)` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub n: u64,
    pub lambda_hat: f64,
    pub lambda_bar: f64,
    /// The reference rational form, which disagrees with `lambda_bar` for every `n`.
    pub lambda_bar_reference: f64,
    pub c_n: f64,
    pub big_c_n: f64,
    pub inj_lower: f64,
    pub inj_upper: f64,
    pub k_min_limit: f64,
    pub k_max_limit: f64,
}

pub fn family_row(n: u64) -> Result<FamilyRow> {
    let f = family_formulas(n)?;
    let idx = WpqIndex::new(n as i64, n as i64 + 1)?;
    let coeffs = coefficients(&idx)?;
    let hat = lambda_hat(&coeffs).value;
    let bar = lambda_bar(&SimplexQuadratic::new(&coeffs)).value;
    let inj = bounds_wpq_with(&idx, &CurvatureInterval::new(hat.min(bar), f.big_c_n)?)?;
    let reference = reference_lambda_bar_family(n);
    Ok(FamilyRow {
        n,
        lambda_hat: sig12(hat),
        lambda_bar: sig12(bar),
        lambda_bar_reference: sig12(num_traits::ToPrimitive::to_f64(&reference).unwrap_or(f64::NAN)),
        c_n: sig12(f.c_n),
        big_c_n: sig12(f.big_c_n),
        inj_lower: sig12(inj.lower),
        inj_upper: sig12(inj.upper),
        k_min_limit: sig12(2.0 / 37.0),
        k_max_limit: sig12(29.0 / 8.0),
    })
}

pub fn family_table(n_max: u64) -> Result<Vec<FamilyRow>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n-max must be at least 1".into()));
    }
    (1..=n_max).into_par_iter().map(family_row).collect()
}

/// Writes the table as CSV with a header row.
pub fn write_family_csv<W: Write>(rows: &[FamilyRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))
}
