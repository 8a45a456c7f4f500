//! Closed-form pinching of the Wallach metric on `W(p, q)`.
//!
//! The minimum sectional curvature is `min(λ̂, λ̄)`: `λ̂` is the max-min of
//! three hyperbola branches and `λ̄` the minimum of a quadratic form over the
//! probability simplex. The maximum is `Λ₀` whenever two sufficient
//! conditions hold. All rational quantities are also carried exactly so that
//! the conditions are decided without rounding.

use std::cmp::Ordering;

use nalgebra::{Matrix3, Vector3};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::curvature::{extremize_sectional_with, ExtremizeOptions};
use crate::error::{Error, Result};
use crate::structure::WpqIndex;

/// The fixed diagonal `d`.
pub const D_COEFFS: [f64; 3] = [5.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0];

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact form of the rational coefficients.
///
/// `ξ_j = √3 · xi_linear[j] / (8√S)` with `S = p² + pq + q²`; only squared
/// differences of the `ξ` enter the exact checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCoefficients {
    pub a: [BigRational; 3],
    pub b: [BigRational; 3],
    pub c: [BigRational; 3],
    pub d: [BigRational; 3],
    pub xi_linear: [i64; 3],
    pub s: i64,
}

impl ExactCoefficients {
    /// `(ξ_j − ξ_k)²` as a rational.
    pub fn xi_gap_sq(&self, j: usize, k: usize) -> BigRational {
        let g = self.xi_linear[j] - self.xi_linear[k];
        rat(3 * g * g, 64 * self.s)
    }
}

/// The fifteen coefficients entering the pinching argument.
#[derive(Debug, Clone, PartialEq)]
pub struct PinchCoefficients {
    /// The positively curved representative the formulas are evaluated at.
    pub index: WpqIndex,
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [f64; 3],
    pub d: [f64; 3],
    pub xi: [f64; 3],
    pub exact: ExactCoefficients,
}

/// Coefficient table of `W(p, q)`, evaluated on its curvature representative.
pub fn coefficients(idx: &WpqIndex) -> Result<PinchCoefficients> {
    let rep = idx.curvature_representative()?;
    let (p, q) = (rep.p, rep.q);
    let s = rep.norm_sq();
    let pq2 = (p + q) * (p + q);
    let a = [
        rat(8, 1) - rat(9 * pq2, 2 * s),
        rat(4, 1) - rat(9 * p * p, 8 * s),
        rat(4, 1) - rat(9 * q * q, 8 * s),
    ];
    let b = [
        rat(-2, 1) - rat(9 * p * q, 8 * s),
        -rat(10 * p * p + p * q + q * q, 4 * s),
        -rat(p * p + p * q + 10 * q * q, 4 * s),
    ];
    let c = [rat(3 * pq2, 2 * s), rat(3 * p * p, 8 * s), rat(3 * q * q, 8 * s)];
    let d = [rat(5, 8), rat(1, 8), rat(1, 8)];
    let xi_linear = [-3 * (p + q), 2 * p + q, p + 2 * q];
    let scale = 3f64.sqrt() / (8.0 * (s as f64).sqrt());
    let exact = ExactCoefficients {
        a,
        b,
        c,
        d,
        xi_linear,
        s,
    };
    Ok(PinchCoefficients {
        index: rep,
        a: exact.a.each_ref().map(to_f64),
        b: exact.b.each_ref().map(to_f64),
        c: exact.c.each_ref().map(to_f64),
        d: D_COEFFS,
        xi: xi_linear.map(|l| scale * l as f64),
        exact,
    })
}

/// Lower branch `λ_j(x)` of the `j`-th hyperbola.
pub fn lambda_branch(coeffs: &PinchCoefficients, j: usize, x: f64) -> f64 {
    let (c, d) = (coeffs.c[j], coeffs.d[j]);
    let h = 0.5 * (c - d).abs();
    c.min(d) + (h - h.hypot(coeffs.xi[j] - x))
}

fn lower_envelope(coeffs: &PinchCoefficients, x: f64) -> f64 {
    (0..3).map(|j| lambda_branch(coeffs, j, x)).fold(f64::INFINITY, f64::min)
}

fn xi_range(coeffs: &PinchCoefficients) -> (f64, f64) {
    let lo = coeffs.xi.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = coeffs.xi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// `λ̂` together with the two independent evaluations it is built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaHat {
    pub value: f64,
    pub argmax: f64,
    /// Golden-section search on the concave envelope.
    pub search: f64,
    /// Best of the branch peaks and the pairwise crossings.
    pub enumeration: f64,
}

const SEARCH_WIDTH: f64 = 1e-12;
const CROSSING_GRID: usize = 4096;

fn golden_section(coeffs: &PinchCoefficients) -> (f64, f64) {
    let (mut lo, mut hi) = xi_range(coeffs);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (lower_envelope(coeffs, x1), lower_envelope(coeffs, x2));
    while hi - lo > SEARCH_WIDTH {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = lower_envelope(coeffs, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = lower_envelope(coeffs, x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, lower_envelope(coeffs, x))
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Points where two branches cross inside the `ξ` range, found by bisection
/// on every sign change of `λ_i − λ_j` over a uniform grid.
pub fn branch_crossings(coeffs: &PinchCoefficients) -> Vec<f64> {
    let (lo, hi) = xi_range(coeffs);
    let step = (hi - lo) / CROSSING_GRID as f64;
    let mut roots = Vec::new();
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        let f = |x: f64| lambda_branch(coeffs, i, x) - lambda_branch(coeffs, j, x);
        let mut prev = f(lo);
        for k in 1..=CROSSING_GRID {
            let x = lo + step * k as f64;
            let cur = f(x);
            if prev == 0.0 {
                roots.push(x - step);
            } else if prev * cur < 0.0 {
                roots.push(bisect(f, x - step, x));
            }
            prev = cur;
        }
    }
    roots
}

/// `max_x min_j λ_j(x)`.
pub fn lambda_hat(coeffs: &PinchCoefficients) -> LambdaHat {
    let (argmax, search) = golden_section(coeffs);
    let enumeration = coeffs
        .xi
        .iter()
        .copied()
        .chain(branch_crossings(coeffs))
        .map(|x| lower_envelope(coeffs, x))
        .fold(f64::NEG_INFINITY, f64::max);
    LambdaHat {
        value: search.max(enumeration),
        argmax,
        search,
        enumeration,
    }
}

/// The form `xᵀAx` restricted to `x ≥ 0, Σx = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexQuadratic {
    pub a: Matrix3<f64>,
    /// Row sums of `adj(A)`.
    pub d: [f64; 3],
    exact: Option<[[BigRational; 3]; 3]>,
}

fn adjugate_row_sums(m: &[[BigRational; 3]; 3]) -> [BigRational; 3] {
    let cof = |i: usize, j: usize| {
        let r: Vec<usize> = (0..3).filter(|&k| k != j).collect();
        let c: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let minor = &m[r[0]][c[0]] * &m[r[1]][c[1]] - &m[r[0]][c[1]] * &m[r[1]][c[0]];
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    // adj(A)[i][j] is the (j, i) cofactor.
    std::array::from_fn(|i| (0..3).map(|j| cof(i, j)).fold(BigRational::zero(), |s, x| s + x))
}

fn det3(m: &[[BigRational; 3]; 3]) -> BigRational {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

impl SimplexQuadratic {
    /// `A = [[a₀, b₂, b₁], [b₂, a₁, b₀], [b₁, b₀, a₂]]`.
    pub fn new(coeffs: &PinchCoefficients) -> Self {
        let e = &coeffs.exact;
        let m = [
            [e.a[0].clone(), e.b[2].clone(), e.b[1].clone()],
            [e.b[2].clone(), e.a[1].clone(), e.b[0].clone()],
            [e.b[1].clone(), e.b[0].clone(), e.a[2].clone()],
        ];
        let d = adjugate_row_sums(&m);
        Self {
            a: Matrix3::from_fn(|i, j| to_f64(&m[i][j])),
            d: d.each_ref().map(to_f64),
            exact: Some(m),
        }
    }

    /// A general symmetric form without an exact representation.
    pub fn from_matrix(a: Matrix3<f64>) -> Result<Self> {
        if (a - a.transpose()).amax() > 1e-14 * a.amax().max(1.0) {
            return Err(Error::InvalidArgument("simplex quadratic must be symmetric".into()));
        }
        let adj = Matrix3::from_fn(|i, j| {
            let r: Vec<usize> = (0..3).filter(|&k| k != j).collect();
            let c: Vec<usize> = (0..3).filter(|&k| k != i).collect();
            let minor = a[(r[0], c[0])] * a[(r[1], c[1])] - a[(r[0], c[1])] * a[(r[1], c[0])];
            if (i + j) % 2 == 0 {
                minor
            } else {
                -minor
            }
        });
        let d = adj * Vector3::repeat(1.0);
        Ok(Self {
            a,
            d: [d[0], d[1], d[2]],
            exact: None,
        })
    }

    pub fn value(&self, x: &Vector3<f64>) -> f64 {
        x.dot(&(self.a * x))
    }

    /// `det A / (D₁ + D₂ + D₃)` exactly, when the form carries rationals.
    pub fn closed_form_exact(&self) -> Option<BigRational> {
        let m = self.exact.as_ref()?;
        let sum = adjugate_row_sums(m).into_iter().fold(BigRational::zero(), |s, x| s + x);
        (!sum.is_zero()).then(|| det3(m) / sum)
    }

    pub fn closed_form(&self) -> f64 {
        self.closed_form_exact()
            .map(|r| to_f64(&r))
            .unwrap_or_else(|| self.a.determinant() / self.d.iter().sum::<f64>())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaBar {
    /// Minimum over the simplex.
    pub value: f64,
    pub argmin: [f64; 3],
    /// `det A / ΣD`.
    pub closed_form: f64,
    pub closed_form_exact: Option<String>,
    /// `Σ(a_j − b_j) ≥ 0`.
    pub diagonal_dominates: bool,
    /// All `D_j > 0`.
    pub adjugate_positive: bool,
}

impl LambdaBar {
    /// Whether the minimum is known to sit at the interior stationary point.
    pub fn gates_hold(&self) -> bool {
        self.diagonal_dominates && self.adjugate_positive
    }
}

/// Minimum of `xᵀAx` over the simplex by enumerating the stationary point of
/// every face: the interior, the three edges and the three vertices.
pub fn simplex_minimum(sq: &SimplexQuadratic) -> (f64, Vector3<f64>) {
    let mut candidates: Vec<Vector3<f64>> = (0..3).map(|i| Vector3::ith(i, 1.0)).collect();
    let sum: f64 = sq.d.iter().sum();
    if sum != 0.0 {
        let x = Vector3::new(sq.d[0], sq.d[1], sq.d[2]) / sum;
        if x.iter().all(|&v| v >= 0.0) {
            candidates.push(x);
        }
    }
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        // x = t e_i + (1 − t) e_j
        let (aii, ajj, aij) = (sq.a[(i, i)], sq.a[(j, j)], sq.a[(i, j)]);
        let curv = aii + ajj - 2.0 * aij;
        if curv != 0.0 {
            let t = (ajj - aij) / curv;
            if (0.0..=1.0).contains(&t) {
                let mut x = Vector3::zeros();
                x[i] = t;
                x[j] = 1.0 - t;
                candidates.push(x);
            }
        }
    }
    candidates
        .into_iter()
        .map(|x| (sq.value(&x), x))
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal))
        .expect("vertices are always candidates")
}

pub fn lambda_bar(sq: &SimplexQuadratic) -> LambdaBar {
    let (value, x) = simplex_minimum(sq);
    let trace_gap = (0..3).map(|i| sq.a[(i, i)]).sum::<f64>()
        - (sq.a[(1, 2)] + sq.a[(0, 2)] + sq.a[(0, 1)]);
    let (diagonal_dominates, adjugate_positive) = match &sq.exact {
        Some(m) => {
            let gap = &m[0][0] + &m[1][1] + &m[2][2] - &m[1][2] - &m[0][2] - &m[0][1];
            (!gap.is_negative(), adjugate_row_sums(m).iter().all(|d| d.is_positive()))
        }
        None => (trace_gap >= 0.0, sq.d.iter().all(|&d| d > 0.0)),
    };
    LambdaBar {
        value,
        argmin: [x[0], x[1], x[2]],
        closed_form: sq.closed_form(),
        closed_form_exact: sq.closed_form_exact().map(|r| r.to_string()),
        diagonal_dominates,
        adjugate_positive,
    }
}

/// The largest eigenvalue of `[[c_j, √2(ξ_j − ξ₀)], [·, 2d_j − b_j]]`, kept as
/// `m + √(h² + 2Δξ²)` so that comparisons can be made exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedEigen {
    pub mean: BigRational,
    pub half_gap: BigRational,
    pub coupling_sq: BigRational,
}

impl MixedEigen {
    fn new(e: &ExactCoefficients, j: usize) -> Self {
        let two = rat(2, 1);
        let lower = &two * &e.d[j] - &e.b[j];
        Self {
            mean: (&e.c[j] + &lower) / &two,
            half_gap: (&e.c[j] - &lower) / &two,
            coupling_sq: &two * e.xi_gap_sq(j, 0),
        }
    }

    pub fn value(&self) -> f64 {
        let h = to_f64(&self.half_gap);
        to_f64(&self.mean) + (h * h + to_f64(&self.coupling_sq)).sqrt()
    }

    /// `x ≥ ν`, decided in exact arithmetic.
    pub fn bounded_by(&self, x: &BigRational) -> bool {
        let slack = x - &self.mean;
        !slack.is_negative() && &slack * &slack >= &self.half_gap * &self.half_gap + &self.coupling_sq
    }

    /// `x > ν`, decided in exact arithmetic.
    pub fn strictly_below(&self, x: &BigRational) -> bool {
        let slack = x - &self.mean;
        slack.is_positive() && &slack * &slack > &self.half_gap * &self.half_gap + &self.coupling_sq
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMaxReport {
    /// `Λ₀ = max{a₀, a₁, a₂, c₀}`.
    pub capital_lambda0: f64,
    pub capital_lambda0_exact: String,
    pub nu1: f64,
    pub nu2: f64,
    /// `a₁ > 2d₀ − b₀`.
    pub fiber_gate: bool,
    /// `Λ₀ ≥ max{b₀, b₁, b₂, c₀, ν₁, ν₂}`.
    pub eigen_gate: bool,
}

impl KMaxReport {
    pub fn gates_hold(&self) -> bool {
        self.fiber_gate && self.eigen_gate
    }
}

pub fn k_max(coeffs: &PinchCoefficients) -> KMaxReport {
    let e = &coeffs.exact;
    let lambda0 = [&e.a[0], &e.a[1], &e.a[2], &e.c[0]]
        .into_iter()
        .max()
        .expect("four candidates")
        .clone();
    let nu = [MixedEigen::new(e, 1), MixedEigen::new(e, 2)];
    let fiber_gate = e.a[1] > rat(2, 1) * &e.d[0] - &e.b[0];
    let eigen_gate = e.b.iter().chain([&e.c[0]]).all(|v| &lambda0 >= v) && nu.iter().all(|n| n.bounded_by(&lambda0));
    KMaxReport {
        capital_lambda0: to_f64(&lambda0),
        capital_lambda0_exact: lambda0.to_string(),
        nu1: nu[0].value(),
        nu2: nu[1].value(),
        fiber_gate,
        eigen_gate,
    }
}

/// `ν₁`, `ν₂` as exact-comparable objects.
pub fn mixed_eigenvalues(coeffs: &PinchCoefficients) -> [MixedEigen; 2] {
    [MixedEigen::new(&coeffs.exact, 1), MixedEigen::new(&coeffs.exact, 2)]
}

/// How a reported extreme curvature was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Oracle,
    /// The sufficient conditions failed and no oracle was run.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinchResult {
    pub index: WpqIndex,
    pub lambda_hat: LambdaHat,
    pub lambda_bar: LambdaBar,
    pub k_max_report: KMaxReport,
    pub k_min: f64,
    pub k_max: f64,
    pub k_min_method: Method,
    pub k_max_method: Method,
}

impl PinchResult {
    pub fn capital_lambda0(&self) -> f64 {
        self.k_max_report.capital_lambda0
    }

    pub fn nu1(&self) -> f64 {
        self.k_max_report.nu1
    }

    pub fn nu2(&self) -> f64 {
        self.k_max_report.nu2
    }
}

/// Assembles `K_min = min(λ̂, λ̄)` and `K_max = Λ₀`. When the `Λ₀` conditions
/// fail the maximum is marked [`Method::Unresolved`]; see [`pinch_with_oracle`].
pub fn pinch(idx: &WpqIndex) -> Result<PinchResult> {
    let coeffs = coefficients(idx)?;
    let hat = lambda_hat(&coeffs);
    let bar = lambda_bar(&SimplexQuadratic::new(&coeffs));
    let km = k_max(&coeffs);
    Ok(PinchResult {
        index: coeffs.index,
        k_min: hat.value.min(bar.value),
        k_max: km.capital_lambda0,
        k_min_method: Method::ClosedForm,
        k_max_method: if km.gates_hold() {
            Method::ClosedForm
        } else {
            Method::Unresolved
        },
        lambda_hat: hat,
        lambda_bar: bar,
        k_max_report: km,
    })
}

/// Like [`pinch`], but replaces an unresolved maximum by the oracle's.
pub fn pinch_with_oracle(idx: &WpqIndex, opts: &ExtremizeOptions) -> Result<PinchResult> {
    let mut res = pinch(idx)?;
    if res.k_max_method == Method::Unresolved {
        res.k_max = extremize_sectional_with(idx, opts)?.k_max();
        res.k_max_method = Method::Oracle;
    }
    Ok(res)
}

/// The two ends of the curvature range of `W(n, n+1)` in closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyFormulas {
    pub n: u64,
    pub c_n: f64,
    pub big_c_n: f64,
    pub big_c_exact: String,
}

/// Upper end `C(n) = 4 − 9n²/(8(1 + 3n + 3n²))`.
pub fn family_upper_exact(n: u64) -> BigRational {
    let n = n as i64;
    rat(4, 1) - rat(9 * n * n, 8 * (1 + 3 * n + 3 * n * n))
}

/// Lower end `c(n)` from its radical expression.
pub fn family_lower(n: u64) -> f64 {
    let n = n as f64;
    let poly = |cs: &[f64]| cs.iter().rev().fold(0.0, |acc, &c| acc * n + c);
    let dd = 1.0 + 3.0 * n + 3.0 * n * n;
    let r = (3.0 + 9.0 * n + 9.0 * n * n).sqrt();
    let p1 = poly(&[32.0, 552.0, 3132.0, 8037.0, 9648.0, 4401.0]);
    let p2 = poly(&[-56.0, -555.0, -1935.0, -1620.0, 7173.0, 22788.0, 26649.0, 11907.0]);
    let p3 = poly(&[64.0, 672.0, 2916.0, 6624.0, 8181.0, 4995.0, 999.0]);
    let inner = (p1 * r - (3.0 * n).sqrt() * poly(&[16.0, 60.0, 57.0]) * p2.sqrt()) / p3;
    let shift = 9.0 * (1.0 + 2.0 * n) / r + inner;
    let lead = poly(&[7.0, 33.0, 33.0]) / dd;
    poly(&[17.0, 63.0, 63.0]) / (16.0 * dd) - (lead * lead + 4.0 * shift * shift).sqrt() / 16.0
}

pub fn family_formulas(n: u64) -> Result<FamilyFormulas> {
    if n == 0 {
        return Err(Error::InvalidArgument("family index n must be at least 1".into()));
    }
    let big_c = family_upper_exact(n);
    Ok(FamilyFormulas {
        n,
        c_n: family_lower(n),
        big_c_n: to_f64(&big_c),
        big_c_exact: big_c.to_string(),
    })
}

/// Reference rational form of `λ̄(p, q)`. It agrees with the simplex minimum
/// only when `p = q` and is kept for comparison.
pub fn reference_lambda_bar(p: i64, q: i64) -> BigRational {
    let s = p * p + p * q + q * q;
    let num = s * (59 * p * p - 22 * p * q + 59 * q * q);
    let den = 772 * p.pow(4) + 1127 * p.pow(3) * q + 1776 * p * p * q * q + 977 * p * q.pow(3) + 676 * q.pow(4);
    rat(num, den)
}

/// Reference `λ̄(n)` on the `(n, n+1)` family, same caveat as [`reference_lambda_bar`].
pub fn reference_lambda_bar_family(n: u64) -> BigRational {
    let n = n as i64;
    let num = (1 + 3 * n + 3 * n * n) * (59 + 96 * n + 96 * n * n);
    let den = 676 + 3681 * n + 8763 * n * n + 10314 * n.pow(3) + 5328 * n.pow(4);
    rat(num, den)
}
