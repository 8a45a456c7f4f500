//! Injectivity-radius bounds from volume and curvature.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curvature::{extremize_sectional_with, ExtremizeOptions};
use crate::error::{Error, Result};
use crate::pinching::{pinch, pinch_with_oracle, Method};
use crate::structure::WpqIndex;
use crate::volumes::vol_wpq_bounds;

/// Dimension of every `W(p, q)`.
pub const WPQ_DIM: u32 = 7;

/// Tabulated extreme curvatures of `W(1, 1)`.
pub const W11_K_MIN: f64 = 2.0 / 37.0;
pub const W11_K_MAX: f64 = 29.0 / 8.0;

/// Solution of `f'' + δf = 0`, `f(0) = 0`, `f'(0) = 1`.
pub fn s_delta(delta: f64, t: f64) -> f64 {
    if delta > 0.0 {
        let r = delta.sqrt();
        (r * t).sin() / r
    } else if delta < 0.0 {
        let r = (-delta).sqrt();
        (r * t).sinh() / r
    } else {
        t
    }
}

/// Volume of the unit `m`-sphere, `2π^{(m+1)/2} / Γ((m+1)/2)`.
pub fn vol_sphere(m: u32) -> f64 {
    let half = f64::from(m + 1) / 2.0;
    let (mut x, mut gamma) = if (m + 1) % 2 == 0 { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
    while x < half {
        gamma *= x;
        x += 1.0;
    }
    2.0 * PI.powf(half) / gamma
}

/// Sectional curvatures lie in `[delta, big_delta]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureInterval {
    pub delta: f64,
    pub big_delta: f64,
}

impl CurvatureInterval {
    pub fn new(delta: f64, big_delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= big_delta && big_delta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "curvature interval [{delta}, {big_delta}] must satisfy 0 < δ ≤ Δ"
            )));
        }
        Ok(Self { delta, big_delta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BindingBranch {
    /// `π/√Δ`.
    ConjugatePoint,
    Volume,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InjectivityBounds {
    pub lower: f64,
    pub upper: f64,
    pub binding_branch: BindingBranch,
}

/// Cheeger-type lower bound and the branch of the minimum that attains it.
///
/// Without a diameter bound the factor `s_δ(·)^{1−n}` is replaced by its
/// minimum `δ^{(n−1)/2}`.
pub fn cheeger_lower_branch(
    vol_lower: f64,
    interval: &CurvatureInterval,
    dim: u32,
    diameter: Option<f64>,
) -> Result<(f64, BindingBranch)> {
    if !(vol_lower > 0.0) || !(interval.delta > 0.0) || dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "Cheeger bound needs positive volume and δ, dim ≥ 2 (got {vol_lower}, {}, {dim})",
            interval.delta
        )));
    }
    let n = f64::from(dim);
    let factor = match diameter {
        None => interval.delta.powf((n - 1.0) / 2.0),
        Some(d) if d > 0.0 => {
            let t = d.min(PI / (2.0 * interval.delta.sqrt()));
            s_delta(interval.delta, t).powf(1.0 - n)
        }
        Some(d) => return Err(Error::InvalidArgument(format!("diameter must be positive, got {d}"))),
    };
    let conjugate = PI / interval.big_delta.sqrt();
    let volume = PI * vol_lower / vol_sphere(dim) * factor;
    Ok(if volume < conjugate {
        (volume, BindingBranch::Volume)
    } else {
        (conjugate, BindingBranch::ConjugatePoint)
    })
}

pub fn cheeger_lower(vol_lower: f64, interval: &CurvatureInterval, dim: u32, diameter: Option<f64>) -> Result<f64> {
    cheeger_lower_branch(vol_lower, interval, dim, diameter).map(|(v, _)| v)
}

/// Upper bound from `Vol(M) ≥ (i/π)^m Vol(S^m)`.
pub fn berger_upper(vol_upper: f64, dim: u32) -> Result<f64> {
    if !(vol_upper > 0.0) {
        return Err(Error::InvalidArgument(format!("volume must be positive, got {vol_upper}")));
    }
    Ok(PI * (vol_upper / vol_sphere(dim)).powf(1.0 / f64::from(dim)))
}

/// Where the curvature interval for [`bounds_wpq`] comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurvatureSource {
    /// Closed-form pinching; fails if the maximum is not settled in closed form.
    Pinching,
    /// Closed-form pinching, with the search settling an unresolved maximum.
    PinchingWithOracle(ExtremizeOptions),
    /// Numerical extremization only.
    Oracle(ExtremizeOptions),
    /// [`W11_K_MIN`] and [`W11_K_MAX`]; only valid for spaces isometric to `W(1, 1)`.
    Tabulated,
}

/// Curvature interval of `W(p, q)` from the chosen source.
pub fn curvature_interval(idx: &WpqIndex, source: &CurvatureSource) -> Result<CurvatureInterval> {
    match source {
        CurvatureSource::Pinching => {
            let r = pinch(idx)?;
            if r.k_max_method != Method::ClosedForm {
                return Err(Error::CurvatureUnavailable(format!(
                    "closed-form maximum not established for W({},{})",
                    idx.p, idx.q
                )));
            }
            CurvatureInterval::new(r.k_min, r.k_max)
        }
        CurvatureSource::PinchingWithOracle(opts) => {
            let r = pinch_with_oracle(idx, opts)?;
            CurvatureInterval::new(r.k_min, r.k_max)
        }
        CurvatureSource::Oracle(opts) => {
            let r = extremize_sectional_with(idx, opts)?;
            CurvatureInterval::new(r.k_min(), r.k_max())
        }
        CurvatureSource::Tabulated => {
            let rep = idx.curvature_representative()?;
            if (rep.p, rep.q) != (1, 1) {
                return Err(Error::CurvatureUnavailable(format!(
                    "tabulated constants cover W(1,1) only, not W({},{})",
                    idx.p, idx.q
                )));
            }
            CurvatureInterval::new(W11_K_MIN, W11_K_MAX)
        }
    }
}

/// Bounds for an explicit curvature interval.
pub fn bounds_wpq_with(idx: &WpqIndex, interval: &CurvatureInterval) -> Result<InjectivityBounds> {
    let vol = vol_wpq_bounds(idx);
    let (lower, binding_branch) = cheeger_lower_branch(vol.lower, interval, WPQ_DIM, None)?;
    let upper = berger_upper(vol.upper, WPQ_DIM)?;
    if lower > upper {
        return Err(Error::InvalidArgument(format!("injectivity bounds out of order: {lower} > {upper}")));
    }
    Ok(InjectivityBounds {
        lower,
        upper,
        binding_branch,
    })
}

pub fn bounds_wpq(idx: &WpqIndex, source: &CurvatureSource) -> Result<InjectivityBounds> {
    bounds_wpq_with(idx, &curvature_interval(idx, source)?)
}
