//! Closed-form volumes of `SU(3)` and of `W(p, q)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::{MetricSpec, WpqIndex};

/// Volume interval for `W(p, q)` with the induced Wallach metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeBounds {
    pub lower: f64,
    pub upper: f64,
    pub exact: Option<f64>,
}

impl VolumeBounds {
    pub fn new(lower: f64, upper: f64, exact: Option<f64>) -> Result<Self> {
        let ordered = lower > 0.0 && lower <= upper && exact.is_none_or(|e| lower <= e && e <= upper);
        if !ordered {
            return Err(Error::InvalidArgument(format!(
                "volume bounds out of order: {lower} / {exact:?} / {upper}"
            )));
        }
        Ok(Self { lower, upper, exact })
    }
}

/// Length of the closed geodesic `T(p, q)` in the Killing metric,
/// `2π √(p² + pq + q²) / gcd(p, q)`.
pub fn orbit_length(idx: &WpqIndex) -> f64 {
    2.0 * PI * (idx.norm_sq() as f64).sqrt() / idx.gcd as f64
}

/// `Vol(SU(3))` for a block-scaled metric.
///
/// Scaling the blocks multiplies the Riemannian volume form by
/// `√(c_T · c_V1³ · c_V2⁴)` everywhere, so only the Killing value is needed.
pub fn vol_su3(spec: &MetricSpec) -> f64 {
    let jac = spec.coeff_t * spec.coeff_v1.powi(3) * spec.coeff_v2.powi(4);
    3f64.sqrt() * PI.powi(5) * jac.sqrt()
}

/// The exact volume of `W(p, q)` and the interval obtained from
/// `½k ≤ w ≤ k`.
pub fn vol_wpq_bounds(idx: &WpqIndex) -> VolumeBounds {
    let g = idx.gcd as f64;
    let s = (idx.norm_sq() as f64).sqrt();
    let c = 3f64.sqrt() * PI.powi(4) * g / s;
    VolumeBounds {
        lower: c / 32.0,
        upper: c / 2.0,
        exact: Some(vol_su3(&MetricSpec::wallach_w()) / orbit_length(idx)),
    }
}
