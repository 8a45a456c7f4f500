//! The circle subgroup `T(p, q)`, the reductive split `su(3) = 𝔗 ⊕ V₁ ⊕ V₂`
//! and the block-scaled metrics built on it.
//!
//! `V₂` is the Killing complement of `𝔲 = s(u(2) ⊕ u(1))` and does not depend
//! on `(p, q)`; `V₁` is the complement of `𝔗` inside `𝔲`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::su3::{bracket, exponential, killing, AlgebraElement, CMatrix3, GeneratorBasis};

/// Whether the index admits the positively curved homogeneous metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// `p`, `q` and `p + q` are all nonzero.
    PositivelyCurvable,
    Degenerate,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// The pair `(p, q)` labelling `W(p, q) = SU(3)/T(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WpqIndex {
    pub p: i64,
    pub q: i64,
    pub gcd: i64,
    pub classification: Classification,
}

impl WpqIndex {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::TrivialSubgroup);
        }
        let classification = if p != 0 && q != 0 && p + q != 0 {
            Classification::PositivelyCurvable
        } else {
            Classification::Degenerate
        };
        Ok(Self {
            p,
            q,
            gcd: gcd(p, q),
            classification,
        })
    }

    pub fn is_positively_curvable(&self) -> bool {
        self.classification == Classification::PositivelyCurvable
    }

    pub fn require_curvable(&self) -> Result<()> {
        if self.is_positively_curvable() {
            Ok(())
        } else {
            Err(Error::Degenerate {
                p: self.p,
                q: self.q,
            })
        }
    }

    /// `p² + pq + q²`.
    pub fn norm_sq(&self) -> i64 {
        self.p * self.p + self.p * self.q + self.q * self.q
    }

    /// The isometric representative `(p', q')` with `0 < p' <= q'`.
    ///
    /// The weights `(p, q, -p-q)` may be permuted and negated without changing
    /// the space; the upper-left `U(2)` used to build `V₁` must contain the two
    /// weights of equal sign for the deformed metric to be positively curved.
    pub fn curvature_representative(&self) -> Result<Self> {
        self.require_curvable()?;
        let r = -self.p - self.q;
        let (a, b) = if self.p.signum() == self.q.signum() {
            (self.p, self.q)
        } else if self.p.signum() == r.signum() {
            (self.p, r)
        } else {
            (self.q, r)
        };
        let (a, b) = (a.abs(), b.abs());
        Self::new(a.min(b), a.max(b))
    }
}

/// `2πi diag(p, q, -(p+q))`, the generator of `T(p, q)` at `θ = 0`.
pub fn tangent_generator(idx: &WpqIndex) -> AlgebraElement {
    let tp = 2.0 * PI;
    let (p, q) = (idx.p as f64, idx.q as f64);
    let d = Vector3::new(
        Complex64::new(0.0, tp * p),
        Complex64::new(0.0, tp * q),
        Complex64::new(0.0, -tp * (p + q)),
    );
    AlgebraElement::from_matrix_unchecked(CMatrix3::from_diagonal(&d))
}

/// One of the three summands of the reductive split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    T,
    V1,
    V2,
}

/// Killing-orthonormal bases of `𝔗`, `V₁` and `V₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductiveSplit {
    pub index: WpqIndex,
    pub t_basis: [AlgebraElement; 1],
    pub v1_basis: [AlgebraElement; 3],
    pub v2_basis: [AlgebraElement; 4],
}

/// Block membership of the entries of [`ReductiveSplit::frame`].
pub const FRAME_BLOCKS: [Block; 8] = [
    Block::T,
    Block::V1,
    Block::V1,
    Block::V1,
    Block::V2,
    Block::V2,
    Block::V2,
    Block::V2,
];

const DROP_TOL: f64 = 1e-8;

pub fn build_split(idx: &WpqIndex) -> ReductiveSplit {
    let gen = tangent_generator(idx);
    let t = gen * (1.0 / gen.norm());

    // Gram-Schmidt of a spanning set of 𝔲 against 𝔗; exactly one vector drops.
    let mut v1: Vec<AlgebraElement> = Vec::with_capacity(3);
    for k in [1, 2, 3, 8] {
        let u = AlgebraElement::gell_mann(k).expect("index in range");
        let mut x = u - t * killing(&u, &t);
        for b in &v1 {
            x = x - *b * killing(&x, b);
        }
        let n = x.norm();
        if n > DROP_TOL {
            v1.push(x * (1.0 / n));
        }
    }
    debug_assert_eq!(v1.len(), 3);
    let v2 = [4, 5, 6, 7].map(|k| AlgebraElement::gell_mann(k).expect("index in range"));

    ReductiveSplit {
        index: *idx,
        t_basis: [t],
        v1_basis: [v1[0], v1[1], v1[2]],
        v2_basis: v2,
    }
}

impl ReductiveSplit {
    /// `t, v1_0..v1_2, v2_0..v2_3` as one Killing-orthonormal 8-frame.
    pub fn frame(&self) -> GeneratorBasis {
        let mut gens = Vec::with_capacity(8);
        gens.extend_from_slice(&self.t_basis);
        gens.extend_from_slice(&self.v1_basis);
        gens.extend_from_slice(&self.v2_basis);
        GeneratorBasis::from_generators(gens)
    }

    pub fn block_basis(&self, block: Block) -> &[AlgebraElement] {
        match block {
            Block::T => &self.t_basis,
            Block::V1 => &self.v1_basis,
            Block::V2 => &self.v2_basis,
        }
    }

    /// The normalized generator of `𝔗`.
    pub fn t(&self) -> &AlgebraElement {
        &self.t_basis[0]
    }
}

/// Killing-orthogonal projection onto one block.
pub fn project(x: &AlgebraElement, split: &ReductiveSplit, block: Block) -> AlgebraElement {
    split
        .block_basis(block)
        .iter()
        .fold(AlgebraElement::zero(), |acc, b| acc + *b * killing(x, b))
}

/// Block-diagonal scaling of the Killing metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSpec {
    pub coeff_t: f64,
    pub coeff_v1: f64,
    pub coeff_v2: f64,
}

impl MetricSpec {
    pub fn new(coeff_t: f64, coeff_v1: f64, coeff_v2: f64) -> Result<Self> {
        for (name, v) in [("t", coeff_t), ("v1", coeff_v1), ("v2", coeff_v2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidMetric(format!("coefficient {name} = {v} must be positive")));
            }
        }
        Ok(Self {
            coeff_t,
            coeff_v1,
            coeff_v2,
        })
    }

    pub fn killing() -> Self {
        Self {
            coeff_t: 1.0,
            coeff_v1: 1.0,
            coeff_v2: 1.0,
        }
    }

    /// The total-space metric `w`, for which `SU(3) -> W(p, q)` is a
    /// Riemannian submersion.
    pub fn wallach_w() -> Self {
        Self {
            coeff_t: 1.0,
            coeff_v1: 0.5,
            coeff_v2: 1.0,
        }
    }

    /// The quotient metric `k̃` on `𝔗⊥`. `coeff_t` is carried only so the
    /// value is usable on all of su(3); base-space computations ignore it.
    pub fn base_ktilde() -> Self {
        Self::wallach_w()
    }

    pub fn coeff(&self, block: Block) -> f64 {
        match block {
            Block::T => self.coeff_t,
            Block::V1 => self.coeff_v1,
            Block::V2 => self.coeff_v2,
        }
    }

    /// Coefficients in the order of [`ReductiveSplit::frame`].
    pub fn frame_weights(&self) -> [f64; 8] {
        FRAME_BLOCKS.map(|b| self.coeff(b))
    }

    /// The same metric multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.coeff_t * c, self.coeff_v1 * c, self.coeff_v2 * c)
    }
}

pub fn metric_eval(spec: &MetricSpec, split: &ReductiveSplit, x: &AlgebraElement, y: &AlgebraElement) -> f64 {
    [Block::T, Block::V1, Block::V2]
        .iter()
        .map(|&blk| {
            let s: f64 = split
                .block_basis(blk)
                .iter()
                .map(|b| killing(x, b) * killing(y, b))
                .sum();
            spec.coeff(blk) * s
        })
        .sum()
}

/// Outcome of the bracket-inclusion checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionIIReport {
    /// `[V₁, V₂] ⊂ V₂`: largest norm of a `𝔗 ⊕ V₁` component.
    pub residual_item1: f64,
    /// `[V₁, V₁] ⊂ 𝔗 ⊕ V₁`: largest norm of a `V₂` component.
    pub residual_item2: f64,
    /// `[V₂, V₂] ⊂ 𝔗 ⊕ V₁`: largest norm of a `V₂` component.
    pub residual_item3: f64,
    /// Commuting, independent pairs in `𝔗⊥` that were tested.
    pub item4_samples: usize,
    /// Tested pairs whose `V₁` parts also commute.
    pub item4_violations: usize,
    /// Smallest observed `‖[x₁, y₁]‖` over the tested (unit) pairs.
    pub item4_min_bracket: f64,
}

/// Relative size below which `[x₁, y₁]` is counted as vanishing.
pub const ITEM4_ZERO_TOL: f64 = 1e-9;

fn max_forbidden(split: &ReductiveSplit, a: Block, b: Block, forbidden: &[Block]) -> f64 {
    let mut worst = 0.0f64;
    for x in split.block_basis(a) {
        for y in split.block_basis(b) {
            let z = bracket(x, y);
            let bad = forbidden
                .iter()
                .fold(AlgebraElement::zero(), |acc, &blk| acc + project(&z, split, blk));
            worst = worst.max(bad.norm());
        }
    }
    worst
}

fn conjugate(u: &CMatrix3, h: &AlgebraElement) -> AlgebraElement {
    AlgebraElement::from_matrix_unchecked(u * h.matrix() * u.adjoint())
}

fn diag_i(a: f64, b: f64, c: f64) -> AlgebraElement {
    AlgebraElement::from_matrix_unchecked(CMatrix3::from_diagonal(&Vector3::new(
        Complex64::new(0.0, a),
        Complex64::new(0.0, b),
        Complex64::new(0.0, c),
    )))
}

/// Unit `v ∈ C³` with `Σ |v_k|² τ_k = 0`, where `τ` is the diagonal of `t/i`.
fn balanced_unit(tau: &[f64; 3], rng: &mut impl Rng) -> Vector3<Complex64> {
    let e: [f64; 3] = std::array::from_fn(|_| -rng.random::<f64>().max(1e-300).ln());
    let s: f64 = e.iter().sum();
    let mut w = e.map(|x| x / s);
    let f: f64 = (0..3).map(|k| w[k] * tau[k]).sum();
    if f != 0.0 {
        // Slide toward a vertex on the other side of the plane w·τ = 0.
        let opposite: Vec<usize> = (0..3).filter(|&k| tau[k] * f < 0.0).collect();
        let k = opposite[rng.random_range(0..opposite.len())];
        let lam = f / (f - tau[k]);
        for (j, wj) in w.iter_mut().enumerate() {
            *wj *= 1.0 - lam;
            if j == k {
                *wj += lam;
            }
        }
    }
    Vector3::from_fn(|k, _| Complex64::from_polar(w[k].max(0.0).sqrt(), rng.random_range(0.0..2.0 * PI)))
}

/// Orthonormal basis of `v⊥` in C³ (v unit).
fn complement_basis(v: &Vector3<Complex64>, rng: &mut impl Rng) -> [Vector3<Complex64>; 2] {
    let mut out: Vec<Vector3<Complex64>> = Vec::with_capacity(2);
    while out.len() < 2 {
        let mut r: Vector3<Complex64> =
            Vector3::from_fn(|_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        for b in std::iter::once(v).chain(out.iter()) {
            r -= b * b.dotc(&r);
        }
        let n = r.norm();
        if n > 1e-6 {
            out.push(r / Complex64::from(n));
        }
    }
    [out[0], out[1]]
}

fn weight(tau: &[f64; 3], v: &Vector3<Complex64>) -> f64 {
    (0..3).map(|k| v[k].norm_sqr() * tau[k]).sum()
}

fn columns(c: [Vector3<Complex64>; 3]) -> CMatrix3 {
    CMatrix3::from_columns(&c)
}

/// Random element of `span(basis) ∩ t⊥`, `basis` Killing-orthonormal.
fn random_in_span_perp_t(basis: &[AlgebraElement], t: &AlgebraElement, rng: &mut impl Rng) -> AlgebraElement {
    let w: Vec<f64> = basis.iter().map(|b| killing(b, t)).collect();
    let mut r: Vec<f64> = (0..basis.len()).map(|_| rng.sample(StandardNormal)).collect();
    let ww: f64 = w.iter().map(|x| x * x).sum();
    if ww > 0.0 {
        let rw: f64 = r.iter().zip(&w).map(|(a, b)| a * b).sum();
        for (ri, wi) in r.iter_mut().zip(&w) {
            *ri -= rw / ww * wi;
        }
    }
    basis.iter().zip(&r).fold(AlgebraElement::zero(), |acc, (b, c)| acc + *b * *c)
}

/// A commuting pair `x, y ∈ 𝔗⊥`, both unit, `y ⊥ x`.
///
/// Half the draws come from Cartan subalgebras `Ad_u 𝔥` lying in `𝔗⊥`, which
/// happens exactly when every column of `u` is balanced against `τ`. The
/// others take the singular element `x = i(3vv* − 1)` with `v` balanced and
/// `y` from its 4-dimensional centralizer.
fn commuting_pair(split: &ReductiveSplit, rng: &mut impl Rng) -> Option<(AlgebraElement, AlgebraElement)> {
    let t = *split.t();
    let tau = [0, 1, 2].map(|k| t.matrix()[(k, k)].im);
    let v = balanced_unit(&tau, rng);
    let [e1, e2] = complement_basis(&v, rng);
    let h1 = diag_i(1.0, -1.0, 0.0);
    let h2 = diag_i(1.0, 1.0, -2.0) * (1.0 / 3f64.sqrt());
    if rng.random_bool(0.5) {
        // w(s) = cos s e1 + e^{iφ} sin s e2 moves between e1 and e2, whose
        // weights sum to -weight(v) = 0, so a balanced column exists.
        let phase = Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
        let col = |s: f64| e1 * Complex64::from(s.cos()) + e2 * (phase * s.sin());
        let (mut a, mut b) = (0.0, 0.5 * PI);
        let fa = weight(&tau, &col(a));
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            if weight(&tau, &col(m)).signum() == fa.signum() {
                a = m;
            } else {
                b = m;
            }
        }
        let c1 = col(0.5 * (a + b));
        let c2 = e2 * Complex64::from((0.5 * (a + b)).cos()) - e1 * (phase.conj() * (0.5 * (a + b)).sin());
        let u = columns([v, c1, c2]);
        let coeffs: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let x = conjugate(&u, &(h1 * coeffs[0] + h2 * coeffs[1]));
        let y = conjugate(&u, &(h1 * coeffs[2] + h2 * coeffs[3]));
        finish_pair(&t, x, y)
    } else {
        let u = columns([e1, e2, v]);
        let x = conjugate(&u, &diag_i(-1.0, -1.0, 2.0));
        let centralizer: Vec<AlgebraElement> = [1, 2, 3, 8]
            .iter()
            .map(|&k| conjugate(&u, &AlgebraElement::gell_mann(k).expect("index in range")))
            .collect();
        let y = random_in_span_perp_t(&centralizer, &t, rng);
        finish_pair(&t, x, y)
    }
}

fn finish_pair(t: &AlgebraElement, x: AlgebraElement, y: AlgebraElement) -> Option<(AlgebraElement, AlgebraElement)> {
    let x = x - *t * killing(&x, t);
    let nx = x.norm();
    if nx < 1e-8 {
        return None;
    }
    let x = x * (1.0 / nx);
    let y = y - *t * killing(&y, t);
    let y = y - x * killing(&y, &x);
    let ny = y.norm();
    if ny < 1e-8 {
        return None;
    }
    Some((x, y * (1.0 / ny)))
}

/// Checks the four bracket conditions on `(V₁, V₂)`.
///
/// Items 1-3 are checked exhaustively on basis pairs. Item 4 is only searched
/// for counterexamples: commuting independent pairs in `𝔗⊥` are sampled from
/// Cartan subalgebras orthogonal to `𝔗` and from centralizers of singular
/// elements, and each is tested for `[x₁, y₁] ≠ 0`.
pub fn check_condition_ii(split: &ReductiveSplit, sample_budget: usize, seed: u64) -> ConditionIIReport {
    use Block::*;
    let residual_item1 = max_forbidden(split, V1, V2, &[T, V1]);
    let residual_item2 = max_forbidden(split, V1, V1, &[V2]);
    let residual_item3 = max_forbidden(split, V2, V2, &[V2]);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = 0;
    let mut violations = 0;
    let mut min_bracket = f64::INFINITY;
    let mut attempts = 0;
    while samples < sample_budget && attempts < 4 * sample_budget + 100 {
        attempts += 1;
        let Some((x, y)) = commuting_pair(split, &mut rng) else {
            continue;
        };
        if bracket(&x, &y).norm() > 1e-9 {
            continue;
        }
        samples += 1;
        let x1 = project(&x, split, V1);
        let y1 = project(&y, split, V1);
        let b = bracket(&x1, &y1).norm();
        min_bracket = min_bracket.min(b);
        if b < ITEM4_ZERO_TOL {
            violations += 1;
        }
    }

    ConditionIIReport {
        residual_item1,
        residual_item2,
        residual_item3,
        item4_samples: samples,
        item4_violations: violations,
        item4_min_bracket: if samples == 0 { 0.0 } else { min_bracket },
    }
}

/// Largest off-block component of `Ad_g v` over sampled `g ∈ T(p, q)` and
/// basis vectors `v` of each block.
pub fn ad_invariance_residual(split: &ReductiveSplit, samples: usize, seed: u64) -> f64 {
    let gen = tangent_generator(&split.index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let theta: f64 = rng.random_range(0.0..1.0);
        let g = exponential(&(gen * theta));
        for blk in [Block::T, Block::V1, Block::V2] {
            for v in split.block_basis(blk) {
                let w = g.adjoint_action(v);
                let off = w - project(&w, split, blk);
                worst = worst.max(off.norm());
            }
        }
    }
    worst
}

/// Killing Gram matrix of the 8-frame.
pub fn frame_gram(split: &ReductiveSplit) -> DMatrix<f64> {
    let f = split.frame();
    DMatrix::from_fn(8, 8, |i, j| killing(&f.generators[i], &f.generators[j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn random_x(rng: &mut impl Rng) -> AlgebraElement {
        let coords: Vec<f64> = (0..8).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        GeneratorBasis::gell_mann().combine(&coords)
    }

    #[test]
    fn index_classification() {
        assert_eq!(WpqIndex::new(0, 0), Err(Error::TrivialSubgroup));
        let i = WpqIndex::new(4, 6).unwrap();
        assert_eq!(i.gcd, 2);
        assert!(i.is_positively_curvable());
        assert_eq!(WpqIndex::new(1, 0).unwrap().classification, Classification::Degenerate);
        assert_eq!(WpqIndex::new(1, -1).unwrap().classification, Classification::Degenerate);
        assert_eq!(WpqIndex::new(-3, 0).unwrap().gcd, 3);
        assert!(matches!(
            WpqIndex::new(2, -2).unwrap().require_curvable(),
            Err(Error::Degenerate { p: 2, q: -2 })
        ));
    }

    #[test]
    fn curvature_representative_is_positive_and_ordered() {
        let cases = [((1, 2), (1, 2)), ((2, 1), (1, 2)), ((1, -2), (1, 1)), ((2, -1), (1, 1)), ((1, -3), (1, 2)), ((-2, -5), (2, 5)), ((3, -1), (1, 2))];
        for ((p, q), (a, b)) in cases {
            let r = WpqIndex::new(p, q).unwrap().curvature_representative().unwrap();
            assert_eq!((r.p, r.q), (a, b), "({p},{q})");
            // p² + pq + q² is invariant under the weight symmetries.
            assert_eq!(r.norm_sq(), WpqIndex::new(p, q).unwrap().norm_sq());
        }
        assert!(WpqIndex::new(1, 0).unwrap().curvature_representative().is_err());
    }

    #[test]
    fn tangent_generator_values() {
        let g = tangent_generator(&WpqIndex::new(1, 1).unwrap());
        let tp = 2.0 * PI;
        assert_relative_eq!(g.matrix()[(0, 0)].im, tp);
        assert_relative_eq!(g.matrix()[(1, 1)].im, tp);
        assert_relative_eq!(g.matrix()[(2, 2)].im, -2.0 * tp);
        assert!(g.is_valid(1e-14));

        let g = tangent_generator(&WpqIndex::new(1, 0).unwrap());
        assert_relative_eq!(g.matrix()[(1, 1)].im, 0.0);
        assert_relative_eq!(g.matrix()[(2, 2)].im, -tp);

        for (p, q) in [(1, 1), (2, 3), (-4, 7), (5, 0)] {
            let idx = WpqIndex::new(p, q).unwrap();
            let g = tangent_generator(&idx);
            let expected = 4.0 * PI * PI * idx.norm_sq() as f64;
            assert_relative_eq!(killing(&g, &g), expected, max_relative = 1e-14);
        }
    }

    #[test]
    fn split_is_orthonormal_with_right_dimensions() {
        for (p, q) in [(1, 1), (1, 2), (3, -7), (1, -1), (0, 5), (50, 49)] {
            let split = build_split(&WpqIndex::new(p, q).unwrap());
            let gram = frame_gram(&split);
            assert!((gram - DMatrix::identity(8, 8)).amax() < 1e-12, "({p},{q})");
            assert_eq!(split.t_basis.len() + split.v1_basis.len() + split.v2_basis.len(), 8);
            let gen = tangent_generator(&split.index);
            assert_relative_eq!(killing(split.t(), &gen).abs(), gen.norm(), max_relative = 1e-12);
            // V1 ⊂ 𝔲: zero third row/column off the diagonal.
            for v in &split.v1_basis {
                let m = v.matrix();
                for k in 0..2 {
                    assert!(m[(k, 2)].norm() < 1e-14 && m[(2, k)].norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn v2_is_orthogonal_to_u() {
        let split = build_split(&WpqIndex::new(1, 1).unwrap());
        for v in &split.v2_basis {
            for k in [1, 2, 3, 8] {
                assert!(killing(v, &AlgebraElement::gell_mann(k).unwrap()).abs() < 1e-15);
            }
        }
        // V2 does not depend on (p, q).
        let other = build_split(&WpqIndex::new(3, 11).unwrap());
        assert_eq!(split.v2_basis, other.v2_basis);
    }

    #[test]
    fn split_is_deterministic() {
        let idx = WpqIndex::new(2, 7).unwrap();
        assert_eq!(build_split(&idx), build_split(&idx));
    }

    #[test]
    fn projections() {
        let split = build_split(&WpqIndex::new(2, 3).unwrap());
        let t = *split.t();
        assert!((project(&t, &split, Block::T) - t).norm() < 1e-15);
        for v in &split.v2_basis {
            assert!(project(v, &split, Block::V1).norm() < 1e-15);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x = random_x(&mut rng);
            let sum = project(&x, &split, Block::T) + project(&x, &split, Block::V1) + project(&x, &split, Block::V2);
            assert!((sum - x).norm() < 1e-12);
        }
    }

    #[test]
    fn metric_eval_properties() {
        let split = build_split(&WpqIndex::new(1, 2).unwrap());
        let w = MetricSpec::wallach_w();
        let k = MetricSpec::killing();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let x = random_x(&mut rng);
            let y = random_x(&mut rng);
            assert_relative_eq!(metric_eval(&k, &split, &x, &y), killing(&x, &y), epsilon = 1e-12);
            let wxx = metric_eval(&w, &split, &x, &x);
            let kxx = killing(&x, &x);
            assert!(0.5 * kxx <= wxx + 1e-12 && wxx <= kxx + 1e-12);
            assert!(wxx > 0.0);
            assert_relative_eq!(metric_eval(&w, &split, &x, &y), metric_eval(&w, &split, &y, &x), epsilon = 1e-14);
        }
        for v in &split.v1_basis {
            assert_relative_eq!(metric_eval(&w, &split, v, v), 0.5, epsilon = 1e-14);
        }
    }

    #[test]
    fn metric_spec_validation() {
        assert!(MetricSpec::new(1.0, 0.0, 1.0).is_err());
        assert!(MetricSpec::new(1.0, -1.0, 1.0).is_err());
        assert!(MetricSpec::new(f64::NAN, 1.0, 1.0).is_err());
        assert_eq!(MetricSpec::wallach_w().frame_weights(), [1.0, 0.5, 0.5, 0.5, 1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn condition_ii_items_1_to_3() {
        for (p, q) in [(1, 1), (2, 3), (1, 50), (17, 4)] {
            let r = check_condition_ii(&build_split(&WpqIndex::new(p, q).unwrap()), 0, 0);
            assert!(r.residual_item1 < 1e-12, "({p},{q}) {r:?}");
            assert!(r.residual_item2 < 1e-12, "({p},{q}) {r:?}");
            assert!(r.residual_item3 < 1e-12, "({p},{q}) {r:?}");
        }
    }

    #[test]
    fn condition_ii_item4_sampling_produces_commuting_pairs() {
        let split = build_split(&WpqIndex::new(1, 2).unwrap());
        let r = check_condition_ii(&split, 500, 9);
        assert_eq!(r.item4_samples, 500);
        assert_eq!(r.item4_violations, 0);
        assert!(r.item4_min_bracket > ITEM4_ZERO_TOL);
    }

    #[test]
    fn blocks_are_ad_invariant() {
        for (p, q) in [(1, 1), (2, 5), (-3, 1)] {
            let split = build_split(&WpqIndex::new(p, q).unwrap());
            assert!(ad_invariance_residual(&split, 50, 4) < 1e-12);
        }
    }
}
