//! Generalized Euler angles on SU(2) and SU(3) and the volume forms they
//! pull back.
//!
//! The SU(3) chart is
//!
//! ```text
//! g = s(φ,θ,ψ) · exp(½ i ξ λ₅) · s(α,β,γ) · exp(½ i √3 τ λ₈),
//! s(x,y,z) = exp(½ i x λ₃) · exp(½ i y λ₂) · exp(½ i z λ₃)
//! ```
//!
//! with `α, φ ∈ [0, 4π)`, `β, θ, ξ ∈ [0, π)` and `γ, ψ, τ ∈ [0, 2π)`. Its
//! Killing volume element is `(√3/512) sin β sin θ sin ξ sin²(ξ/2)`.

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;
use nalgebra::{DMatrix, Matrix3, SMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::{MetricSpec, ReductiveSplit};
use crate::su3::{killing, AlgebraElement, CMatrix2, CMatrix3, GroupElement};

const TAU: f64 = 2.0 * PI;

fn check_range(name: &'static str, value: f64, hi: f64) -> Result<()> {
    if (0.0..hi).contains(&value) {
        Ok(())
    } else {
        Err(Error::AngleRange {
            name,
            value,
            lo: 0.0,
            hi,
        })
    }
}

/// Angles of `s(φ,θ,ψ) ∈ SU(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAnglesSU2 {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
}

impl EulerAnglesSU2 {
    pub fn new(phi: f64, theta: f64, psi: f64) -> Result<Self> {
        check_range("phi", phi, 2.0 * TAU)?;
        check_range("theta", theta, PI)?;
        check_range("psi", psi, TAU)?;
        Ok(Self { phi, theta, psi })
    }
}

/// Angles of the SU(3) chart, in factor order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAnglesSU3 {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
    pub xi: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub tau: f64,
}

/// Coordinate names in factor order.
pub const SU3_ANGLE_NAMES: [&str; 8] = ["phi", "theta", "psi", "xi", "alpha", "beta", "gamma", "tau"];

/// Upper ends of the coordinate ranges `[0, hi)`, in factor order.
pub const SU3_RANGES: [f64; 8] = [2.0 * TAU, PI, TAU, PI, 2.0 * TAU, PI, TAU, TAU];

impl EulerAnglesSU3 {
    pub fn from_array(a: [f64; 8]) -> Result<Self> {
        for k in 0..8 {
            check_range(SU3_ANGLE_NAMES[k], a[k], SU3_RANGES[k])?;
        }
        Ok(Self::from_array_unchecked(a))
    }

    /// Accepts any real angles; the chart formulas are periodic.
    pub fn from_array_unchecked(a: [f64; 8]) -> Self {
        Self {
            phi: a[0],
            theta: a[1],
            psi: a[2],
            xi: a[3],
            alpha: a[4],
            beta: a[5],
            gamma: a[6],
            tau: a[7],
        }
    }

    pub fn to_array(&self) -> [f64; 8] {
        [
            self.phi, self.theta, self.psi, self.xi, self.alpha, self.beta, self.gamma, self.tau,
        ]
    }
}

pub fn su2_point(angles: &EulerAnglesSU2) -> CMatrix2 {
    let (c, s) = ((angles.theta / 2.0).cos(), (angles.theta / 2.0).sin());
    let a = Complex64::from_polar(c, (angles.phi + angles.psi) / 2.0);
    let b = Complex64::from_polar(s, (angles.phi - angles.psi) / 2.0);
    CMatrix2::new(a, b, -b.conj(), a.conj())
}

/// Places a 2x2 matrix in the upper-left block of SU(3).
pub fn embed_su2(m: &CMatrix2) -> GroupElement {
    let mut g = CMatrix3::identity();
    g.fixed_view_mut::<2, 2>(0, 0).copy_from(m);
    GroupElement::from_matrix_unchecked(g)
}

fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Inverse of [`su2_point`] from the first row `(a, b)`.
pub fn su2_angles_from_point(a: Complex64, b: Complex64) -> Result<EulerAnglesSU2> {
    let n = a.norm_sqr() + b.norm_sqr();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnit(n));
    }
    let theta = 2.0 * a.norm().min(1.0).acos();
    let al = wrap(a.arg());
    let be = wrap(b.arg());
    let (phi, psi) = if al >= be {
        (al + be, al - be)
    } else if al + be >= TAU {
        (al + be - TAU, al - be + TAU)
    } else {
        (al + be + TAU, al - be + TAU)
    };
    Ok(EulerAnglesSU2 {
        phi,
        theta: theta.min(PI.next_down()),
        psi,
    })
}

#[derive(Clone, Copy)]
enum Axis {
    L3,
    L2,
    L5,
    L8,
}

const AXES: [Axis; 8] = [
    Axis::L3,
    Axis::L2,
    Axis::L3,
    Axis::L5,
    Axis::L3,
    Axis::L2,
    Axis::L3,
    Axis::L8,
];

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn factor(axis: Axis, x: f64) -> CMatrix3 {
    let (c, s) = ((x / 2.0).cos(), (x / 2.0).sin());
    let (o, z) = (cx(1.0), cx(0.0));
    match axis {
        Axis::L3 => CMatrix3::from_diagonal(&nalgebra::Vector3::new(
            Complex64::from_polar(1.0, x / 2.0),
            Complex64::from_polar(1.0, -x / 2.0),
            o,
        )),
        Axis::L2 => Matrix3::new(cx(c), cx(s), z, cx(-s), cx(c), z, z, z, o),
        Axis::L5 => Matrix3::new(cx(c), z, cx(s), z, o, z, cx(-s), z, cx(c)),
        Axis::L8 => CMatrix3::from_diagonal(&nalgebra::Vector3::new(
            Complex64::from_polar(1.0, x / 2.0),
            Complex64::from_polar(1.0, x / 2.0),
            Complex64::from_polar(1.0, -x),
        )),
    }
}

/// `d/dx` of `factor(axis, x)` at `x = 0`.
fn generator(axis: Axis) -> CMatrix3 {
    let i = Complex64::new(0.0, 1.0);
    let (o, z) = (cx(0.5), cx(0.0));
    match axis {
        Axis::L3 => CMatrix3::from_diagonal(&nalgebra::Vector3::new(i * 0.5, -i * 0.5, z)),
        Axis::L2 => Matrix3::new(z, o, z, -o, z, z, z, z, z),
        Axis::L5 => Matrix3::new(z, z, o, z, z, z, -o, z, z),
        Axis::L8 => CMatrix3::from_diagonal(&nalgebra::Vector3::new(i * 0.5, i * 0.5, -i)),
    }
}

fn factors(angles: &EulerAnglesSU3) -> [CMatrix3; 8] {
    let a = angles.to_array();
    std::array::from_fn(|k| factor(AXES[k], a[k]))
}

pub fn su3_point(angles: &EulerAnglesSU3) -> GroupElement {
    let g = factors(angles).iter().fold(CMatrix3::identity(), |acc, f| acc * f);
    GroupElement::from_matrix_unchecked(g)
}

/// Inverse of [`su3_point`], read off the third row and third column.
///
/// Fails on the measure-zero set `sin(ξ/2) ≈ 0`.
pub fn su3_angles_from_point(g: &GroupElement) -> Result<EulerAnglesSU3> {
    let m = g.matrix();
    let g33 = m[(2, 2)];
    let xi = 2.0 * g33.norm().min(1.0).acos();
    let tau = wrap(-g33.arg());
    let s = (xi / 2.0).sin();
    if s < 1e-12 {
        return Err(Error::DegenerateChartPoint(s));
    }
    let unit = |a: Complex64, b: Complex64| {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        (a / n, b / n)
    };
    let half = Complex64::from_polar(1.0, tau / 2.0);
    let (a2, b2) = unit(m[(2, 0)] / (-s * half), m[(2, 1)] / (-s * half));
    let full = Complex64::from_polar(1.0, tau);
    let (a1, b1) = unit(m[(0, 2)] * full / s, -(m[(1, 2)] * full / s).conj());
    let left = su2_angles_from_point(a1, b1)?;
    let right = su2_angles_from_point(a2, b2)?;
    Ok(EulerAnglesSU3 {
        phi: left.phi,
        theta: left.theta,
        psi: left.psi,
        xi: xi.min(PI.next_down()),
        alpha: right.phi,
        beta: right.theta,
        gamma: right.psi,
        tau,
    })
}

/// `g⁻¹ ∂g/∂x_k` for the eight chart coordinates.
///
/// With `g = A₁⋯A₈` and `R_k = A_{k+1}⋯A₈`, the `k`-th entry is
/// `R_k⁻¹ X_k R_k` where `X_k` generates `A_k`.
pub fn maurer_cartan_frame(angles: &EulerAnglesSU3) -> [AlgebraElement; 8] {
    let fs = factors(angles);
    let mut out = [AlgebraElement::zero(); 8];
    let mut r = CMatrix3::identity();
    for k in (0..8).rev() {
        out[k] = AlgebraElement::from_matrix_unchecked(r.adjoint() * generator(AXES[k]) * r);
        r = fs[k] * r;
    }
    out
}

/// `(√3/512) sin β sin θ sin ξ sin²(ξ/2)`.
pub fn killing_density_closed_form(angles: &EulerAnglesSU3) -> f64 {
    3f64.sqrt() / 512.0 * angles.beta.sin() * angles.theta.sin() * angles.xi.sin() * (angles.xi / 2.0).sin().powi(2)
}

/// `sqrt det G` with `G_ij` the metric on the coordinate frame.
pub fn volume_density(angles: &EulerAnglesSU3, spec: &MetricSpec, split: &ReductiveSplit) -> Result<f64> {
    let frame = maurer_cartan_frame(angles);
    let basis = split.frame();
    let weights = spec.frame_weights();
    // Coordinates in the split frame, scaled so that G = F Fᵀ.
    let f = SMatrix::<f64, 8, 8>::from_fn(|i, j| killing(&frame[i], &basis.generators[j]) * weights[j].sqrt());
    let gram = f * f.transpose();
    match gram.cholesky() {
        Some(ch) => Ok(ch.l_dirty().diagonal().product().abs()),
        None => Err(Error::DegenerateChartPoint(gram.determinant())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureScheme {
    /// Tensor Gauss-Legendre on the coordinate box, evaluated axis by axis.
    ProductGauss,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: QuadratureScheme,
    /// Nodes per axis, or total samples.
    pub count: usize,
    pub seed: u64,
    /// Largest acceptable relative error estimate.
    pub tolerance: Option<f64>,
}

impl QuadratureSpec {
    pub fn product_gauss(nodes_per_axis: usize) -> Self {
        Self {
            scheme: QuadratureScheme::ProductGauss,
            count: nodes_per_axis,
            seed: 0,
            tolerance: Some(1e-6),
        }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        Self {
            scheme: QuadratureScheme::MonteCarlo,
            count: samples,
            seed,
            tolerance: None,
        }
    }

    pub fn with_tolerance(mut self, tolerance: Option<f64>) -> Self {
        self.tolerance = tolerance;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    /// Relative: `|I(n) - I(n/2)| / I(n)` for product Gauss, standard
    /// error over value for Monte-Carlo.
    pub error_estimate: f64,
    /// Largest relative deviation of the density from its axis-product
    /// reconstruction at the probe points (product Gauss only).
    pub separability_residual: Option<f64>,
    pub evaluations: usize,
}

const MC_CHUNK: usize = 4096;
const SEPARABILITY_TOL: f64 = 1e-8;
const SEPARABILITY_PROBES: usize = 16;

fn box_volume() -> f64 {
    SU3_RANGES.iter().product()
}

/// Integrates [`volume_density`] over the coordinate box.
///
/// Product Gauss relies on the density being a product of one-variable
/// factors: with `x₀` an interior reference point and `f_k` the density along
/// axis `k` through `x₀`, `ρ(x) = ∏ f_k(x_k) / ρ(x₀)⁷`. This is verified at
/// random probe points before the factorized sum is trusted.
pub fn integrate_volume(spec: &MetricSpec, split: &ReductiveSplit, quad: &QuadratureSpec) -> Result<VolumeEstimate> {
    if quad.count == 0 {
        return Err(Error::Budget { given: 0, min: 1 });
    }
    let est = match quad.scheme {
        QuadratureScheme::ProductGauss => product_gauss(spec, split, quad)?,
        QuadratureScheme::MonteCarlo => monte_carlo(spec, split, quad)?,
    };
    if let Some(tol) = quad.tolerance {
        if !(est.error_estimate <= tol) {
            return Err(Error::QuadratureBudget {
                achieved: est.error_estimate,
                requested: tol,
            });
        }
    }
    Ok(est)
}

fn reference_point() -> [f64; 8] {
    SU3_RANGES.map(|hi| 0.5 * hi)
}

struct AxisProfiles {
    rho0: f64,
}

impl AxisProfiles {
    fn along(&self, spec: &MetricSpec, split: &ReductiveSplit, k: usize, x: f64) -> Result<f64> {
        let mut p = reference_point();
        p[k] = x;
        volume_density(&EulerAnglesSU3::from_array_unchecked(p), spec, split)
    }

    fn reconstruct(&self, spec: &MetricSpec, split: &ReductiveSplit, x: &[f64; 8]) -> Result<f64> {
        let mut prod = 1.0;
        for (k, &xk) in x.iter().enumerate() {
            prod *= self.along(spec, split, k, xk)? / self.rho0;
        }
        Ok(prod * self.rho0)
    }
}

fn gauss_sum(spec: &MetricSpec, split: &ReductiveSplit, profiles: &AxisProfiles, n: usize) -> Result<(f64, usize)> {
    let rule = GaussLegendre::new(n.try_into().map_err(|_| Error::Budget { given: n, min: 1 })?);
    let mut total = profiles.rho0;
    let mut evals = 0;
    for (k, &hi) in SU3_RANGES.iter().enumerate() {
        let mut s = 0.0;
        for (node, w) in rule.nodes().zip(rule.weights()) {
            let x = 0.5 * hi * (node + 1.0);
            s += 0.5 * hi * w * profiles.along(spec, split, k, x)?;
            evals += 1;
        }
        total *= s / profiles.rho0;
    }
    Ok((total, evals))
}

fn product_gauss(spec: &MetricSpec, split: &ReductiveSplit, quad: &QuadratureSpec) -> Result<VolumeEstimate> {
    let rho0 = volume_density(&EulerAnglesSU3::from_array_unchecked(reference_point()), spec, split)?;
    let profiles = AxisProfiles { rho0 };

    let mut rng = ChaCha8Rng::seed_from_u64(quad.seed);
    let mut residual = 0.0f64;
    for _ in 0..SEPARABILITY_PROBES {
        // Stay clear of the boundary, where both sides vanish.
        let x: [f64; 8] = SU3_RANGES.map(|hi| hi * rng.random_range(0.05..0.95));
        let direct = volume_density(&EulerAnglesSU3::from_array_unchecked(x), spec, split)?;
        let rebuilt = profiles.reconstruct(spec, split, &x)?;
        residual = residual.max((direct - rebuilt).abs() / direct.abs());
    }
    if residual > SEPARABILITY_TOL {
        return Err(Error::NotSeparable(residual));
    }

    let (value, evals) = gauss_sum(spec, split, &profiles, quad.count)?;
    let coarse = (quad.count / 2).max(1);
    let (rough, evals2) = gauss_sum(spec, split, &profiles, coarse)?;
    Ok(VolumeEstimate {
        value,
        error_estimate: ((value - rough) / value).abs(),
        separability_residual: Some(residual),
        evaluations: evals + evals2 + SEPARABILITY_PROBES * 9 + 1,
    })
}

fn monte_carlo(spec: &MetricSpec, split: &ReductiveSplit, quad: &QuadratureSpec) -> Result<VolumeEstimate> {
    let n = quad.count;
    let chunks = n.div_ceil(MC_CHUNK);
    // Each chunk owns a ChaCha stream, so the result does not depend on the
    // number of worker threads.
    let partial: Vec<Result<(f64, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(quad.seed);
            rng.set_stream(c as u64);
            let len = MC_CHUNK.min(n - c * MC_CHUNK);
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..len {
                let x: [f64; 8] = SU3_RANGES.map(|hi| hi * rng.random::<f64>());
                let v = match volume_density(&EulerAnglesSU3::from_array_unchecked(x), spec, split) {
                    Ok(v) => v,
                    // Boundary draws have density zero.
                    Err(Error::DegenerateChartPoint(_)) => 0.0,
                    Err(e) => return Err(e),
                };
                s += v;
                s2 += v * v;
            }
            Ok((s, s2))
        })
        .collect();
    let (mut s, mut s2) = (0.0, 0.0);
    for p in partial {
        let (a, b) = p?;
        s += a;
        s2 += b;
    }
    let nf = n as f64;
    let mean = s / nf;
    let var = (s2 / nf - mean * mean).max(0.0) * nf / (nf - 1.0).max(1.0);
    let vbox = box_volume();
    let value = vbox * mean;
    let se = vbox * (var / nf).sqrt();
    Ok(VolumeEstimate {
        value,
        error_estimate: se / value.abs(),
        separability_residual: None,
        evaluations: n,
    })
}

/// Gram matrix of the coordinate frame under `spec` (for diagnostics).
pub fn coordinate_gram(angles: &EulerAnglesSU3, spec: &MetricSpec, split: &ReductiveSplit) -> DMatrix<f64> {
    let frame = maurer_cartan_frame(angles);
    DMatrix::from_fn(8, 8, |i, j| crate::structure::metric_eval(spec, split, &frame[i], &frame[j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{build_split, WpqIndex};
    use crate::su3::gell_mann;
    use approx::assert_relative_eq;

    fn random_angles(rng: &mut impl Rng, margin: f64) -> EulerAnglesSU3 {
        EulerAnglesSU3::from_array_unchecked(SU3_RANGES.map(|hi| hi * rng.random_range(margin..1.0 - margin)))
    }

    fn max_entry(m: &CMatrix3) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn su2_point_examples() {
        let id = su2_point(&EulerAnglesSU2::new(0.0, 0.0, 0.0).unwrap());
        assert!((id - CMatrix2::identity()).norm() < 1e-15);
        let t = 1.1;
        let m = su2_point(&EulerAnglesSU2::new(0.0, t, 0.0).unwrap());
        let expected = CMatrix2::new(cx((t / 2.0).cos()), cx((t / 2.0).sin()), cx(-(t / 2.0).sin()), cx((t / 2.0).cos()));
        assert!((m - expected).norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a = EulerAnglesSU2::new(rng.random_range(0.0..4.0 * PI), rng.random_range(0.0..PI), rng.random_range(0.0..TAU)).unwrap();
            assert!((su2_point(&a).determinant() - cx(1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn su2_matches_pauli_exponentials() {
        let a = EulerAnglesSU2::new(2.3, 0.7, 5.1).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let exp2 = |m: CMatrix2, x: f64| {
            // exp(i x σ/2) = cos(x/2) + i sin(x/2) σ for a Pauli matrix σ
            CMatrix2::identity() * cx((x / 2.0).cos()) + m * (i * (x / 2.0).sin())
        };
        let s3 = crate::su3::pauli(3).unwrap();
        let s2 = crate::su3::pauli(2).unwrap();
        let m = exp2(s3, a.phi) * exp2(s2, a.theta) * exp2(s3, a.psi);
        assert!((m - su2_point(&a)).norm() < 1e-14);
    }

    #[test]
    fn su2_inversion() {
        let r = su2_angles_from_point(cx(1.0), cx(0.0)).unwrap();
        assert_eq!((r.phi, r.theta, r.psi), (0.0, 0.0, 0.0));
        assert!(matches!(su2_angles_from_point(cx(1.0), cx(0.5)), Err(Error::NotUnit(_))));

        // α < β and α + β ≥ 2π
        let (al, be) = (2.0, 5.0);
        let a = Complex64::from_polar(0.6, al);
        let b = Complex64::from_polar(0.8, be);
        let r = su2_angles_from_point(a, b).unwrap();
        assert_relative_eq!(r.phi, al + be - TAU, epsilon = 1e-14);
        assert_relative_eq!(r.psi, al - be + TAU, epsilon = 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10_000 {
            let a = EulerAnglesSU2::new(rng.random_range(0.01..4.0 * PI - 0.01), rng.random_range(0.01..PI - 0.01), rng.random_range(0.01..TAU - 0.01)).unwrap();
            let m = su2_point(&a);
            let back = su2_angles_from_point(m[(0, 0)], m[(0, 1)]).unwrap();
            assert!(EulerAnglesSU2::new(back.phi, back.theta, back.psi).is_ok());
            assert!((su2_point(&back) - m).norm() < 1e-10);
            assert_relative_eq!(back.phi, a.phi, epsilon = 1e-9);
            assert_relative_eq!(back.theta, a.theta, epsilon = 1e-9);
            assert_relative_eq!(back.psi, a.psi, epsilon = 1e-9);
        }
    }

    #[test]
    fn su3_point_examples() {
        let id = su3_point(&EulerAnglesSU3::from_array([0.0; 8]).unwrap());
        assert!(max_entry(&(id.matrix() - CMatrix3::identity())) < 1e-15);

        let xi = 0.9;
        let g = su3_point(&EulerAnglesSU3::from_array([0.0, 0.0, 0.0, xi, 0.0, 0.0, 0.0, 0.0]).unwrap());
        let (c, s) = ((xi / 2.0).cos(), (xi / 2.0).sin());
        let z = cx(0.0);
        let expected = Matrix3::new(cx(c), z, cx(s), z, cx(1.0), z, cx(-s), z, cx(c));
        assert!(max_entry(&(g.matrix() - expected)) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let g = su3_point(&random_angles(&mut rng, 0.0));
            assert!(g.unitarity_residual() < 1e-12);
            assert!(g.determinant_residual() < 1e-12);
        }
    }

    #[test]
    fn factors_are_exponentials_of_generators() {
        let i = Complex64::new(0.0, 1.0);
        let x = 1.3;
        for (axis, k, scale) in [(Axis::L2, 2, 0.5), (Axis::L3, 3, 0.5), (Axis::L5, 5, 0.5), (Axis::L8, 8, 0.5 * 3f64.sqrt())] {
            let gen = AlgebraElement::from_matrix_unchecked(gell_mann(k).unwrap() * (i * scale * x));
            let e = crate::su3::exponential(&gen);
            assert!(max_entry(&(e.matrix() - factor(axis, x))) < 1e-14);
            assert!(max_entry(&(generator(axis) - gell_mann(k).unwrap() * (i * scale))) < 1e-15);
        }
    }

    #[test]
    fn su3_inversion_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..2000 {
            let g = GroupElement::random_haar(&mut rng);
            let a = su3_angles_from_point(&g).unwrap();
            assert!(EulerAnglesSU3::from_array(a.to_array()).is_ok(), "{a:?}");
            assert!(max_entry(&(su3_point(&a).matrix() - g.matrix())) < 1e-9);
        }
        for _ in 0..500 {
            let a = random_angles(&mut rng, 0.01);
            let back = su3_angles_from_point(&su3_point(&a)).unwrap();
            for (x, y) in a.to_array().iter().zip(back.to_array()) {
                assert_relative_eq!(*x, y, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn frame_tau_component_is_constant() {
        let i = Complex64::new(0.0, 1.0);
        let expected = gell_mann(8).unwrap() * (i * 0.5 * 3f64.sqrt());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = maurer_cartan_frame(&random_angles(&mut rng, 0.0));
            assert!(max_entry(&(f[7].matrix() - expected)) < 1e-15);
            assert!(f.iter().all(|x| x.is_valid(1e-13)));
        }
    }

    #[test]
    fn frame_matches_finite_differences() {
        let h = 1e-5;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let a = random_angles(&mut rng, 0.05);
            let g = su3_point(&a);
            let frame = maurer_cartan_frame(&a);
            for k in 0..8 {
                let mut p = a.to_array();
                let mut m = a.to_array();
                p[k] += h;
                m[k] -= h;
                let gp = su3_point(&EulerAnglesSU3::from_array_unchecked(p));
                let gm = su3_point(&EulerAnglesSU3::from_array_unchecked(m));
                let fd = g.matrix().adjoint() * (gp.matrix() - gm.matrix()) / cx(2.0 * h);
                worst = worst.max(max_entry(&(fd - frame[k].matrix())));
            }
        }
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn density_matches_closed_form() {
        let split = build_split(&WpqIndex::new(1, 1).unwrap());
        let k = MetricSpec::killing();
        let mut a = EulerAnglesSU3::from_array_unchecked([0.3, PI / 2.0, 1.0, PI / 2.0, 2.0, PI / 2.0, 0.4, 5.0]);
        assert_relative_eq!(volume_density(&a, &k, &split).unwrap(), 3f64.sqrt() / 1024.0, max_relative = 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            a = random_angles(&mut rng, 0.0);
            let d = volume_density(&a, &k, &split).unwrap();
            assert_relative_eq!(d, killing_density_closed_form(&a), max_relative = 1e-9);
        }
    }

    #[test]
    fn wallach_density_ratio() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for (p, q) in [(1, 1), (2, 5)] {
            let split = build_split(&WpqIndex::new(p, q).unwrap());
            for _ in 0..50 {
                let a = random_angles(&mut rng, 0.01);
                let w = volume_density(&a, &MetricSpec::wallach_w(), &split).unwrap();
                let k = volume_density(&a, &MetricSpec::killing(), &split).unwrap();
                assert_relative_eq!(w / k, 1.0 / (2.0 * 2f64.sqrt()), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn density_vanishes_at_boundary() {
        let split = build_split(&WpqIndex::new(1, 1).unwrap());
        let k = MetricSpec::killing();
        let base = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        for idx in [1, 3, 5] {
            let mut x = base;
            x[idx] = 1e-7;
            let d = volume_density(&EulerAnglesSU3::from_array_unchecked(x), &k, &split).unwrap();
            assert!(d < 1e-8, "{idx}: {d}");
        }
    }

    #[test]
    fn gram_from_metric_eval_agrees() {
        let split = build_split(&WpqIndex::new(1, 2).unwrap());
        let w = MetricSpec::wallach_w();
        let a = EulerAnglesSU3::from_array_unchecked([0.3, 1.2, 1.0, 2.2, 2.0, 0.5, 0.4, 5.0]);
        let g = coordinate_gram(&a, &w, &split);
        assert_relative_eq!(g.determinant().sqrt(), volume_density(&a, &w, &split).unwrap(), max_relative = 1e-10);
    }

    #[test]
    fn angle_validation() {
        assert!(matches!(EulerAnglesSU2::new(0.0, PI, 0.0), Err(Error::AngleRange { name: "theta", .. })));
        let mut a = [0.0; 8];
        a[7] = TAU;
        assert!(matches!(EulerAnglesSU3::from_array(a), Err(Error::AngleRange { name: "tau", .. })));
    }

    #[test]
    fn product_gauss_volume() {
        let split = build_split(&WpqIndex::new(1, 1).unwrap());
        let v = integrate_volume(&MetricSpec::killing(), &split, &QuadratureSpec::product_gauss(32)).unwrap();
        let exact = 3f64.sqrt() * PI.powi(5);
        assert_relative_eq!(v.value, exact, max_relative = 1e-6);
        assert!(v.separability_residual.unwrap() < 1e-10);
        let v64 = integrate_volume(&MetricSpec::killing(), &split, &QuadratureSpec::product_gauss(64)).unwrap();
        assert!(((v64.value - v.value) / v.value).abs() < 1e-6);
        let w = integrate_volume(&MetricSpec::wallach_w(), &split, &QuadratureSpec::product_gauss(32)).unwrap();
        assert_relative_eq!(w.value, exact / (2.0 * 2f64.sqrt()), max_relative = 1e-6);
    }

    #[test]
    fn small_budget_is_reported() {
        let split = build_split(&WpqIndex::new(1, 1).unwrap());
        let r = integrate_volume(&MetricSpec::killing(), &split, &QuadratureSpec::product_gauss(3));
        assert!(matches!(r, Err(Error::QuadratureBudget { .. })), "{r:?}");
        let r = integrate_volume(&MetricSpec::killing(), &split, &QuadratureSpec::product_gauss(0));
        assert!(matches!(r, Err(Error::Budget { .. })));
    }

    #[test]
    fn monte_carlo_volume() {
        let split = build_split(&WpqIndex::new(1, 1).unwrap());
        let q = QuadratureSpec::monte_carlo(40_000, 11);
        let v = integrate_volume(&MetricSpec::killing(), &split, &q).unwrap();
        let exact = 3f64.sqrt() * PI.powi(5);
        assert!((v.value - exact).abs() < 3.0 * v.error_estimate * v.value, "{v:?}");
        let again = integrate_volume(&MetricSpec::killing(), &split, &q).unwrap();
        assert_eq!(v, again);
    }
}
