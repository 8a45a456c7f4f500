//! Sectional curvature of `(SU(3), w)` and of the quotient `W(p, q)`.
//!
//! Everything is computed at the identity coset from structure constants.
//! With `E₀ = t` and `E₁..E₇` spanning `𝔗⊥`, the group curvature comes from the
//! Koszul formula for left-invariant fields, and the base curvature adds the
//! O'Neill term for the submersion `SU(3) → W(p, q)`:
//! `K_base(X, Y) = K(X, Y) + ¾ |[X, Y]_𝔗|²_w` for orthonormal horizontal `X, Y`.
//!
//! Sign convention: `Rm(X, Y, Z, W) = ⟨∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z, W⟩`, so
//! that `K(X, Y) = Rm(X, Y, Y, X)` on orthonormal pairs.

use nalgebra::{DMatrix, SMatrix, SVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::{build_split, metric_eval, MetricSpec, ReductiveSplit, WpqIndex};
use crate::su3::{bracket, killing, AlgebraElement};

/// Dimension of `W(p, q)`.
pub const BASE_DIM: usize = 7;
/// Number of coordinate bivectors `e_a ∧ e_b`, `a < b`, on the base.
pub const BIVECTOR_DIM: usize = BASE_DIM * (BASE_DIM - 1) / 2;

const PLANE_TOL: f64 = 1e-12;

/// A covariant 4-tensor over an orthonormal frame, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTable {
    dim: usize,
    data: Vec<f64>,
}

impl CurvatureTable {
    fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim.pow(4)],
        }
    }

    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.dim + b) * self.dim + c) * self.dim + d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.data[self.idx(a, b, c, d)]
    }

    fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: f64) {
        let i = self.idx(a, b, c, d);
        self.data[i] = v;
    }

    /// `Rm(x, y, z, w)` for coordinate vectors.
    pub fn eval(&self, x: &[f64], y: &[f64], z: &[f64], w: &[f64]) -> f64 {
        let n = self.dim;
        let mut s = 0.0;
        for a in 0..n {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..n {
                let xy = x[a] * y[b];
                if xy == 0.0 {
                    continue;
                }
                for c in 0..n {
                    let xyz = xy * z[c];
                    if xyz == 0.0 {
                        continue;
                    }
                    let base = self.idx(a, b, c, 0);
                    s += xyz * (0..n).map(|d| self.data[base + d] * w[d]).sum::<f64>();
                }
            }
        }
        s
    }

    /// `M[a][d] = Rm(e_a, y, y, e_d)`, the quadratic form of `x ↦ Rm(x, y, y, x)`.
    pub fn jacobi_form(&self, y: &[f64]) -> DMatrix<f64> {
        let n = self.dim;
        DMatrix::from_fn(n, n, |a, d| {
            let mut s = 0.0;
            for b in 0..n {
                for c in 0..n {
                    s += self.get(a, b, c, d) * y[b] * y[c];
                }
            }
            s
        })
    }

    /// `Rm(x, y, y, x) / (|x|²|y|² − ⟨x, y⟩²)`.
    pub fn sectional(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        let gram = dot(x, x) * dot(y, y) - dot(x, y).powi(2);
        if gram <= PLANE_TOL * dot(x, x) * dot(y, y) {
            return Err(Error::DegeneratePlane(gram));
        }
        Ok(self.eval(x, y, y, x) / gram)
    }

    /// Largest violation of `Rm_abcd = −Rm_bacd = −Rm_abdc = Rm_cdab`.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let v = self.get(a, b, c, d);
                        worst = worst
                            .max((v + self.get(b, a, c, d)).abs())
                            .max((v + self.get(a, b, d, c)).abs())
                            .max((v - self.get(c, d, a, b)).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest `|Rm_abcd + Rm_bcad + Rm_cabd|`.
    pub fn bianchi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let s = self.get(a, b, c, d) + self.get(b, c, a, d) + self.get(c, a, b, d);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }
}

/// Left-invariant geometry of `(SU(3), spec)` on the w-orthonormal frame
/// `E_a = B_a / √g_a`, where `B` is the split's Killing-orthonormal frame.
#[derive(Debug, Clone)]
pub struct GroupCurvature {
    pub spec: MetricSpec,
    pub frame: Vec<AlgebraElement>,
    /// `[E_a, E_b] = Σ_c C[a][b][c] E_c`.
    pub structure: Vec<f64>,
    /// `∇_{E_a} E_b = Σ_c Γ[a][b][c] E_c`.
    pub connection: Vec<f64>,
    pub table: CurvatureTable,
}

const N: usize = 8;

fn i3(a: usize, b: usize, c: usize) -> usize {
    (a * N + b) * N + c
}

pub fn group_curvature(spec: &MetricSpec, split: &ReductiveSplit) -> GroupCurvature {
    let weights = spec.frame_weights();
    let basis = split.frame();
    let frame: Vec<AlgebraElement> = (0..N)
        .map(|a| basis.generators[a] * (1.0 / weights[a].sqrt()))
        .collect();

    let mut c = vec![0.0; N * N * N];
    for a in 0..N {
        for b in 0..N {
            let z = bracket(&frame[a], &frame[b]);
            for e in 0..N {
                c[i3(a, b, e)] = metric_eval(spec, split, &z, &frame[e]);
            }
        }
    }

    let mut gamma = vec![0.0; N * N * N];
    for a in 0..N {
        for b in 0..N {
            for e in 0..N {
                gamma[i3(a, b, e)] = 0.5 * (c[i3(a, b, e)] - c[i3(b, e, a)] + c[i3(e, a, b)]);
            }
        }
    }

    let mut table = CurvatureTable::zeros(N);
    for a in 0..N {
        for b in 0..N {
            for cc in 0..N {
                for d in 0..N {
                    let mut s = 0.0;
                    for m in 0..N {
                        s += gamma[i3(b, cc, m)] * gamma[i3(a, m, d)];
                        s -= gamma[i3(a, cc, m)] * gamma[i3(b, m, d)];
                        s -= c[i3(a, b, m)] * gamma[i3(m, cc, d)];
                    }
                    table.set(a, b, cc, d, s);
                }
            }
        }
    }

    GroupCurvature {
        spec: *spec,
        frame,
        structure: c,
        connection: gamma,
        table,
    }
}

impl GroupCurvature {
    /// Coordinates of `x` in the w-orthonormal frame.
    pub fn coordinates(&self, x: &AlgebraElement) -> [f64; N] {
        let w = self.spec.frame_weights();
        std::array::from_fn(|a| killing(x, &self.frame[a]) * w[a])
    }

    /// Sectional curvature of the plane spanned by `x, y` (any basis).
    pub fn sectional(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
        self.table.sectional(&self.coordinates(x), &self.coordinates(y))
    }

    /// `C[a][b][c]`.
    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> f64 {
        self.structure[i3(a, b, c)]
    }
}

/// Curvature of `W(p, q)` at the base point on the k̃-orthonormal frame
/// `E₁..E₇` of `𝔗⊥`.
#[derive(Debug, Clone)]
pub struct BaseCurvature {
    /// The index whose split is used (see [`WpqIndex::curvature_representative`]).
    pub index: WpqIndex,
    pub split: ReductiveSplit,
    pub group: GroupCurvature,
    pub table: CurvatureTable,
}

fn lift(x: &[f64]) -> [f64; N] {
    let mut v = [0.0; N];
    v[1..].copy_from_slice(&x[..BASE_DIM]);
    v
}

impl BaseCurvature {
    /// Builds the base tensor for the positively curved representative of `idx`.
    pub fn new(idx: &WpqIndex) -> Result<Self> {
        let rep = idx.curvature_representative()?;
        let split = build_split(&rep);
        let group = group_curvature(&MetricSpec::wallach_w(), &split);
        let mut base = Self {
            index: rep,
            split,
            group,
            table: CurvatureTable::zeros(BASE_DIM),
        };
        base.table = base.polarized_table();
        Ok(base)
    }

    /// Unnormalized base sectional form `κ(u, v) = Rm_base(u, v, v, u)` for
    /// horizontal coordinate vectors.
    pub fn kappa(&self, u: &[f64], v: &[f64]) -> f64 {
        let (lu, lv) = (lift(u), lift(v));
        let g = self.group.table.eval(&lu, &lv, &lv, &lu);
        let mut t = 0.0;
        for a in 1..N {
            for b in 1..N {
                t += lu[a] * lv[b] * self.group.structure_constant(a, b, 0);
            }
        }
        g + 0.75 * t * t
    }

    /// `Rm_base(x, y, z, w)` from `κ` by polarization:
    /// `6 Rm(x, y, z, w) = ∂_s∂_t [κ(x + s w, y + t z) − κ(x + s z, y + t w)]`.
    /// `κ` is quadratic in each slot, so the mixed derivative is the exact
    /// four-point difference at `s, t = ±1`.
    pub fn polarize(&self, x: &[f64], y: &[f64], z: &[f64], w: &[f64]) -> f64 {
        let comb = |u: &[f64], s: f64, p: &[f64]| -> Vec<f64> { u.iter().zip(p).map(|(a, b)| a + s * b).collect() };
        let mixed = |p: &[f64], q: &[f64]| {
            let f = |s: f64, t: f64| self.kappa(&comb(x, s, p), &comb(y, t, q));
            (f(1.0, 1.0) - f(1.0, -1.0) - f(-1.0, 1.0) + f(-1.0, -1.0)) / 4.0
        };
        (mixed(w, z) - mixed(z, w)) / 6.0
    }

    fn polarized_table(&self) -> CurvatureTable {
        let pairs = &bivector_pairs();
        let unit = |a: usize| {
            let mut e = [0.0; BASE_DIM];
            e[a] = 1.0;
            e
        };
        let entries: Vec<(usize, usize, f64)> = (0..BIVECTOR_DIM)
            .into_par_iter()
            .flat_map_iter(|i| {
                let (a, b) = pairs[i];
                (i..BIVECTOR_DIM).map(move |j| {
                    let (c, d) = pairs[j];
                    (i, j, self.polarize(&unit(a), &unit(b), &unit(c), &unit(d)))
                })
            })
            .collect();
        let mut t = CurvatureTable::zeros(BASE_DIM);
        for (i, j, v) in entries {
            let (a, b) = pairs[i];
            let (c, d) = pairs[j];
            for (p, q, r, s) in [(a, b, c, d), (c, d, a, b)] {
                t.set(p, q, r, s, v);
                t.set(q, p, r, s, -v);
                t.set(p, q, s, r, -v);
                t.set(q, p, s, r, v);
            }
        }
        t
    }

    /// Horizontal coordinates of `x ∈ 𝔗⊥`.
    pub fn coordinates(&self, x: &AlgebraElement) -> [f64; BASE_DIM] {
        let c = self.group.coordinates(x);
        std::array::from_fn(|a| c[a + 1])
    }

    /// Horizontal element with the given coordinates.
    pub fn element(&self, x: &[f64]) -> AlgebraElement {
        (0..BASE_DIM).fold(AlgebraElement::zero(), |acc, a| acc + self.group.frame[a + 1] * x[a])
    }

    pub fn sectional(&self, plane: &TwoPlane) -> Result<f64> {
        self.table.sectional(&self.coordinates(&plane.x), &self.coordinates(&plane.y))
    }

    /// The group sectional curvature of the same plane, without the O'Neill term.
    pub fn group_sectional(&self, plane: &TwoPlane) -> Result<f64> {
        self.group.sectional(&plane.x, &plane.y)
    }
}

/// A k̃-orthonormal pair spanning a 2-plane in `𝔗⊥`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPlane {
    pub x: AlgebraElement,
    pub y: AlgebraElement,
}

const ORTHONORMAL_TOL: f64 = 1e-9;

impl TwoPlane {
    /// Checks the pair is k̃-orthonormal and horizontal.
    pub fn new(x: AlgebraElement, y: AlgebraElement, split: &ReductiveSplit) -> Result<Self> {
        let w = MetricSpec::base_ktilde();
        let t = split.t();
        let dev = [
            (metric_eval(&w, split, &x, &x) - 1.0).abs(),
            (metric_eval(&w, split, &y, &y) - 1.0).abs(),
            metric_eval(&w, split, &x, &y).abs(),
            killing(&x, t).abs(),
            killing(&y, t).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        if dev > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Self { x, y })
    }

    /// Projects `x, y` onto `𝔗⊥` and applies Gram-Schmidt in k̃.
    pub fn orthonormalize(x: &AlgebraElement, y: &AlgebraElement, split: &ReductiveSplit) -> Result<Self> {
        let w = MetricSpec::base_ktilde();
        let t = *split.t();
        let h = |v: &AlgebraElement| *v - t * killing(v, &t);
        let (x, y) = (h(x), h(y));
        let xx = metric_eval(&w, split, &x, &x);
        let yy = metric_eval(&w, split, &y, &y);
        let xy = metric_eval(&w, split, &x, &y);
        let gram = xx * yy - xy * xy;
        if !(gram > PLANE_TOL * xx * yy) {
            return Err(Error::DegeneratePlane(gram));
        }
        let x = x * (1.0 / xx.sqrt());
        let y = y - x * metric_eval(&w, split, &y, &x);
        let y = y * (1.0 / metric_eval(&w, split, &y, &y).sqrt());
        Ok(Self { x, y })
    }
}

/// Sectional curvature of `W(p, q)` on a horizontal 2-plane.
///
/// The plane must lie in `𝔗⊥` for the split of the curvature representative
/// of `idx`, which for `pq > 0` is `idx` itself up to ordering.
pub fn sectional_wpq(idx: &WpqIndex, plane: &TwoPlane) -> Result<f64> {
    BaseCurvature::new(idx)?.sectional(plane)
}

pub fn bivector_pairs() -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(BIVECTOR_DIM);
    for a in 0..BASE_DIM {
        for b in a + 1..BASE_DIM {
            v.push((a, b));
        }
    }
    v
}

/// The base curvature operator on `Λ²𝔗⊥` and its spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpectrum {
    /// Row-major `21 × 21`; entry `((a,b),(c,d))` is `Rm(e_a, e_b, e_d, e_c)`.
    pub matrix: Vec<f64>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
}

impl OperatorSpectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    pub fn symmetry_residual(&self) -> f64 {
        let n = BIVECTOR_DIM;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.matrix[i * n + j] - self.matrix[j * n + i]).abs());
            }
        }
        worst
    }
}

pub fn curvature_operator(base: &BaseCurvature) -> OperatorSpectrum {
    let pairs = bivector_pairs();
    let n = BIVECTOR_DIM;
    let m = DMatrix::from_fn(n, n, |i, j| {
        let (a, b) = pairs[i];
        let (c, d) = pairs[j];
        base.table.get(a, b, d, c)
    });
    let matrix: Vec<f64> = (0..n * n).map(|k| m[(k / n, k % n)]).collect();
    let sym = (&m + m.transpose()) * 0.5;
    let mut eigenvalues: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    OperatorSpectrum { matrix, eigenvalues }
}

pub fn base_curvature_operator(idx: &WpqIndex) -> Result<OperatorSpectrum> {
    Ok(curvature_operator(&BaseCurvature::new(idx)?))
}

/// Multi-start settings for [`extremize_sectional_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremizeOptions {
    /// Total sweeps per objective, shared evenly among the restarts.
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
    /// A restart is stationary once a full sweep changes `K` by less than this.
    pub tolerance: f64,
}

pub const MIN_BUDGET: usize = 1000;
pub const DEFAULT_RESTARTS: usize = 200;
/// Restarts ending within this of the best value count as hits.
pub const HIT_TOL: f64 = 1e-6;

impl ExtremizeOptions {
    pub fn new(budget: usize, seed: u64) -> Self {
        Self {
            budget,
            restarts: DEFAULT_RESTARTS,
            seed,
            tolerance: 1e-10,
        }
    }
}

/// One end of the curvature range found by the search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub value: f64,
    /// Horizontal coordinates of the optimal orthonormal pair.
    pub plane: [[f64; BASE_DIM]; 2],
    /// Gap between the best and second-best restart.
    pub spread: f64,
    /// Restarts that finished within [`HIT_TOL`] of the best.
    pub hits: usize,
    /// Whether the best restart reached stationarity within its sweeps.
    pub stationary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremizeResult {
    pub index: WpqIndex,
    pub min: Extremum,
    pub max: Extremum,
    pub restarts: usize,
    pub sweeps_per_restart: usize,
}

impl ExtremizeResult {
    pub fn k_min(&self) -> f64 {
        self.min.value
    }

    pub fn k_max(&self) -> f64 {
        self.max.value
    }
}

type Frame = SMatrix<f64, BASE_DIM, BASE_DIM>;
type Vec7 = SVector<f64, BASE_DIM>;

fn random_frame(rng: &mut ChaCha8Rng) -> Frame {
    let g = Frame::from_fn(|_, _| StandardNormal.sample(rng));
    g.qr().q()
}

fn quad(m: &DMatrix<f64>, u: &Vec7, v: &Vec7) -> f64 {
    let mut s = 0.0;
    for a in 0..BASE_DIM {
        for b in 0..BASE_DIM {
            s += u[a] * m[(a, b)] * v[b];
        }
    }
    s
}

/// Rotates column `i` towards column `j` by the angle that optimizes
/// `K = Rm(x, y, y, x)` with the other plane vector `other` held fixed.
fn rotate(table: &CurvatureTable, q: &mut Frame, i: usize, j: usize, other: usize, sign: f64) {
    let y: Vec<f64> = q.column(other).iter().copied().collect();
    let m = table.jacobi_form(&y);
    let (u, v): (Vec7, Vec7) = (q.column(i).into(), q.column(j).into());
    let (uu, vv, uv) = (quad(&m, &u, &u), quad(&m, &v, &v), quad(&m, &u, &v));
    // K(θ) = P + Q cos 2θ + R sin 2θ; the optimum of sign·K is at
    // 2θ = atan2(sign·R, sign·Q).
    let (qq, rr) = (0.5 * (uu - vv), uv);
    let two_theta = (sign * rr).atan2(sign * qq);
    let (c, s) = ((0.5 * two_theta).cos(), (0.5 * two_theta).sin());
    let nu = u * c + v * s;
    let nv = v * c - u * s;
    q.set_column(i, &nu);
    q.set_column(j, &nv);
}

fn plane_value(table: &CurvatureTable, q: &Frame) -> f64 {
    let x: Vec<f64> = q.column(0).iter().copied().collect();
    let y: Vec<f64> = q.column(1).iter().copied().collect();
    table.eval(&x, &y, &y, &x)
}

struct RunResult {
    value: f64,
    frame: Frame,
    stationary: bool,
}

/// Coordinate-rotation search from one random frame `[x, y, n₁..n₅]`. A sweep
/// rotates `x` and then `y` against each normal direction.
fn run(table: &CurvatureTable, mut q: Frame, sweeps: usize, sign: f64, tol: f64) -> RunResult {
    let mut value = plane_value(table, &q);
    let mut stationary = false;
    for _ in 0..sweeps {
        for j in 2..BASE_DIM {
            rotate(table, &mut q, 0, j, 1, sign);
            rotate(table, &mut q, 1, j, 0, sign);
        }
        let next = plane_value(table, &q);
        let change = (next - value).abs();
        value = next;
        if change < tol {
            stationary = true;
            break;
        }
    }
    RunResult {
        value,
        frame: q,
        stationary,
    }
}

fn search(table: &CurvatureTable, opts: &ExtremizeOptions, sweeps: usize, sign: f64, stream_offset: u64) -> Extremum {
    let runs: Vec<RunResult> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(stream_offset + r as u64);
            run(table, random_frame(&mut rng), sweeps, sign, opts.tolerance)
        })
        .collect();
    // Lowest index wins ties, so the choice is independent of scheduling.
    let mut order: Vec<usize> = (0..runs.len()).collect();
    order.sort_by(|&a, &b| (sign * runs[b].value).total_cmp(&(sign * runs[a].value)).then(a.cmp(&b)));
    let best = &runs[order[0]];
    let spread = order.get(1).map_or(0.0, |&k| (runs[k].value - best.value).abs());
    let hits = runs.iter().filter(|r| (r.value - best.value).abs() <= HIT_TOL).count();
    let col = |k: usize| -> [f64; BASE_DIM] { std::array::from_fn(|a| best.frame[(a, k)]) };
    Extremum {
        value: best.value,
        plane: [col(0), col(1)],
        spread,
        hits,
        stationary: best.stationary,
    }
}

/// Multi-start search for the extreme sectional curvatures of `W(p, q)`.
pub fn extremize_sectional(idx: &WpqIndex, budget: usize, seed: u64) -> Result<ExtremizeResult> {
    extremize_sectional_with(idx, &ExtremizeOptions::new(budget, seed))
}

pub fn extremize_sectional_with(idx: &WpqIndex, opts: &ExtremizeOptions) -> Result<ExtremizeResult> {
    let base = BaseCurvature::new(idx)?;
    extremize_base(&base, opts)
}

pub fn extremize_base(base: &BaseCurvature, opts: &ExtremizeOptions) -> Result<ExtremizeResult> {
    if opts.budget < MIN_BUDGET {
        return Err(Error::Budget {
            given: opts.budget,
            min: MIN_BUDGET,
        });
    }
    if opts.restarts == 0 || opts.restarts > opts.budget {
        return Err(Error::InvalidArgument(format!(
            "restarts must lie in 1..={}, got {}",
            opts.budget, opts.restarts
        )));
    }
    let sweeps = opts.budget / opts.restarts;
    let min = search(&base.table, opts, sweeps, -1.0, 0);
    let max = search(&base.table, opts, sweeps, 1.0, opts.restarts as u64);
    Ok(ExtremizeResult {
        index: base.index,
        min,
        max,
        restarts: opts.restarts,
        sweeps_per_restart: sweeps,
    })
}
