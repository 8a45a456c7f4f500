//! Matrix algebra for su(3) and SU(3).
//!
//! Elements of the Lie algebra are stored as 3x3 complex anti-Hermitian,
//! traceless matrices. The inner product used throughout is the Killing
//! metric `k(X, Y) = 1/2 Re Tr(X Y*)`, for which the eight matrices `i λ_k`
//! (Gell-Mann) form an orthonormal basis.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix2, Matrix3};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type CMatrix2 = Matrix2<Complex64>;
pub type CMatrix3 = Matrix3<Complex64>;

/// Dimension of su(3).
pub const DIM: usize = 8;

/// Tolerance used by invariant checks unless a caller supplies its own.
pub const DEFAULT_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The Gell-Mann matrix `λ_index` (Hermitian, traceless, `Tr(λ_a λ_b) = 2 δ_ab`).
pub fn gell_mann(index: usize) -> Result<CMatrix3> {
    let s3 = 1.0 / 3f64.sqrt();
    #[rustfmt::skip]
    let m = match index {
        1 => CMatrix3::new(ZERO, ONE, ZERO,
                           ONE, ZERO, ZERO,
                           ZERO, ZERO, ZERO),
        2 => CMatrix3::new(ZERO, -I, ZERO,
                           I, ZERO, ZERO,
                           ZERO, ZERO, ZERO),
        3 => CMatrix3::new(ONE, ZERO, ZERO,
                           ZERO, -ONE, ZERO,
                           ZERO, ZERO, ZERO),
        4 => CMatrix3::new(ZERO, ZERO, ONE,
                           ZERO, ZERO, ZERO,
                           ONE, ZERO, ZERO),
        5 => CMatrix3::new(ZERO, ZERO, -I,
                           ZERO, ZERO, ZERO,
                           I, ZERO, ZERO),
        6 => CMatrix3::new(ZERO, ZERO, ZERO,
                           ZERO, ZERO, ONE,
                           ZERO, ONE, ZERO),
        7 => CMatrix3::new(ZERO, ZERO, ZERO,
                           ZERO, ZERO, -I,
                           ZERO, I, ZERO),
        8 => CMatrix3::new(c(s3), ZERO, ZERO,
                           ZERO, c(s3), ZERO,
                           ZERO, ZERO, c(-2.0 * s3)),
        _ => return Err(Error::GellMannIndex(index)),
    };
    Ok(m)
}

/// The Pauli matrix `σ_index`.
pub fn pauli(index: usize) -> Result<CMatrix2> {
    #[rustfmt::skip]
    let m = match index {
        1 => CMatrix2::new(ZERO, ONE, ONE, ZERO),
        2 => CMatrix2::new(ZERO, -I, I, ZERO),
        3 => CMatrix2::new(ONE, ZERO, ZERO, -ONE),
        _ => return Err(Error::PauliIndex(index)),
    };
    Ok(m)
}

/// Largest entry modulus of `m + m*`.
fn anti_hermitian_residual(m: &CMatrix3) -> f64 {
    (m + m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// An element of su(3): a 3x3 anti-Hermitian traceless matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraElement(CMatrix3);

impl AlgebraElement {
    pub fn new(entries: CMatrix3) -> Result<Self> {
        Self::with_tolerance(entries, DEFAULT_TOL)
    }

    pub fn with_tolerance(entries: CMatrix3, tol: f64) -> Result<Self> {
        let anti_hermitian = anti_hermitian_residual(&entries);
        let trace = entries.trace().norm();
        if anti_hermitian > tol || trace > tol {
            return Err(Error::NotInAlgebra {
                anti_hermitian,
                trace,
            });
        }
        Ok(Self(entries))
    }

    /// Wraps a matrix that is known to lie in su(3) by construction.
    pub fn from_matrix_unchecked(entries: CMatrix3) -> Self {
        Self(entries)
    }

    /// `i · h` for a Hermitian traceless `h`.
    pub fn from_hermitian(h: &CMatrix3) -> Result<Self> {
        Self::new(h * I)
    }

    /// `i λ_index`, which has unit Killing norm.
    pub fn gell_mann(index: usize) -> Result<Self> {
        Ok(Self(gell_mann(index)? * I))
    }

    pub fn zero() -> Self {
        Self(CMatrix3::zeros())
    }

    pub fn matrix(&self) -> &CMatrix3 {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix3 {
        self.0
    }

    /// Norm induced by the Killing metric.
    pub fn norm(&self) -> f64 {
        killing(self, self).sqrt()
    }

    pub fn anti_hermitian_residual(&self) -> f64 {
        anti_hermitian_residual(&self.0)
    }

    pub fn trace_modulus(&self) -> f64 {
        self.0.trace().norm()
    }

    /// True when both su(3) invariants hold to `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.anti_hermitian_residual() <= tol && self.trace_modulus() <= tol
    }
}

impl Add for AlgebraElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for AlgebraElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Neg for AlgebraElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Mul<f64> for AlgebraElement {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0 * c(rhs))
    }
}

impl Mul<AlgebraElement> for f64 {
    type Output = AlgebraElement;
    fn mul(self, rhs: AlgebraElement) -> AlgebraElement {
        rhs * self
    }
}

/// Matrix commutator `XY - YX`.
pub fn bracket(x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
    AlgebraElement(x.0 * y.0 - y.0 * x.0)
}

/// Killing metric `k(X, Y) = 1/2 Re Tr(X Y*)`.
pub fn killing(x: &AlgebraElement, y: &AlgebraElement) -> f64 {
    // Tr(X Y*) = sum_ij X_ij conj(Y_ij)
    0.5 * x
        .0
        .iter()
        .zip(y.0.iter())
        .map(|(a, b)| (a * b.conj()).re)
        .sum::<f64>()
}

/// Matrix exponential of an su(3) element.
///
/// `-iX` is Hermitian, so `X = V diag(iμ) V*` with real `μ` and unitary `V`,
/// and `exp X = V diag(e^{iμ}) V*`.
pub fn exponential(x: &AlgebraElement) -> GroupElement {
    let h = x.0 * (-I);
    // Symmetrize against rounding before the Hermitian solver sees it.
    let h = (h + h.adjoint()) * c(0.5);
    let eig = h.symmetric_eigen();
    let v = eig.eigenvectors;
    let phases = CMatrix3::from_diagonal(&eig.eigenvalues.map(|mu| Complex64::from_polar(1.0, mu)));
    GroupElement(v * phases * v.adjoint())
}

/// An element of SU(3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement(CMatrix3);

impl GroupElement {
    pub fn new(entries: CMatrix3) -> Result<Self> {
        Self::with_tolerance(entries, DEFAULT_TOL)
    }

    pub fn with_tolerance(entries: CMatrix3, tol: f64) -> Result<Self> {
        let g = Self(entries);
        let unitarity = g.unitarity_residual();
        let determinant = g.determinant_residual();
        if unitarity > tol || determinant > tol {
            return Err(Error::NotInGroup {
                unitarity,
                determinant,
            });
        }
        Ok(g)
    }

    pub fn from_matrix_unchecked(entries: CMatrix3) -> Self {
        Self(entries)
    }

    pub fn identity() -> Self {
        Self(CMatrix3::identity())
    }

    /// A Haar-distributed sample: QR of a complex Ginibre matrix with the
    /// phases of `R`'s diagonal absorbed, then scaled into `det = 1`.
    pub fn random_haar<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let z = CMatrix3::from_fn(|_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let qr = z.qr();
        let (mut q, r) = qr.unpack();
        for j in 0..3 {
            let d = r[(j, j)];
            let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
            for i in 0..3 {
                q[(i, j)] *= ph;
            }
        }
        let det = q.determinant();
        let root = Complex64::from_polar(1.0, -det.arg() / 3.0);
        Self(q * root)
    }

    pub fn matrix(&self) -> &CMatrix3 {
        &self.0
    }

    /// Inverse, which for a unitary matrix is the adjoint.
    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Max entry modulus of `g g* - 1`.
    pub fn unitarity_residual(&self) -> f64 {
        (self.0 * self.0.adjoint() - CMatrix3::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn determinant_residual(&self) -> f64 {
        (self.0.determinant() - ONE).norm()
    }

    /// `Ad_g X = g X g⁻¹`.
    pub fn adjoint_action(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(self.0 * x.0 * self.0.adjoint())
    }
}

impl Mul for GroupElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

/// An ordered basis of su(3) together with the Pauli matrices of the
/// embedded su(2).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorBasis {
    pub generators: Vec<AlgebraElement>,
    pub pauli: [CMatrix2; 3],
}

impl GeneratorBasis {
    /// `i λ_1, ..., i λ_8`.
    pub fn gell_mann() -> Self {
        let generators = (1..=DIM)
            .map(|k| AlgebraElement::gell_mann(k).expect("index in range"))
            .collect();
        Self::from_generators(generators)
    }

    pub fn from_generators(generators: Vec<AlgebraElement>) -> Self {
        let pauli = [1, 2, 3].map(|k| pauli(k).expect("index in range"));
        Self { generators, pauli }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Largest entry of `|G - 1|` for the Killing Gram matrix `G`.
    pub fn gram_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (a, x) in self.generators.iter().enumerate() {
            for (b, y) in self.generators.iter().enumerate() {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((killing(x, y) - target).abs());
            }
        }
        worst
    }

    /// Killing-metric coordinates of `x` (exact only for orthonormal bases).
    pub fn coordinates(&self, x: &AlgebraElement) -> Vec<f64> {
        self.generators.iter().map(|e| killing(x, e)).collect()
    }

    pub fn combine(&self, coords: &[f64]) -> AlgebraElement {
        self.generators
            .iter()
            .zip(coords)
            .fold(AlgebraElement::zero(), |acc, (e, &w)| acc + *e * w)
    }
}

/// `[e_a, e_b] = Σ_e c[a][b][e] e_e` for an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    data: Vec<f64>,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, e: usize) -> f64 {
        self.data[(a * self.dim + b) * self.dim + e]
    }

    /// Largest `|c[a][b][e] + c[b][a][e]|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for e in 0..n {
                    worst = worst.max((self.get(a, b, e) + self.get(b, a, e)).abs());
                }
            }
        }
        worst
    }

    /// Largest `|c[a][b][e] - c[b][e][a]|`; zero for an ad-invariant inner product.
    pub fn cyclic_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for e in 0..n {
                    worst = worst.max((self.get(a, b, e) - self.get(b, e, a)).abs());
                }
            }
        }
        worst
    }
}

/// Structure constants of a Killing-orthonormal basis.
pub fn structure_constants(basis: &GeneratorBasis) -> Result<StructureConstants> {
    structure_constants_with_tol(basis, DEFAULT_TOL)
}

pub fn structure_constants_with_tol(basis: &GeneratorBasis, tol: f64) -> Result<StructureConstants> {
    let deviation = basis.gram_deviation();
    if deviation > tol {
        return Err(Error::NotOrthonormal(deviation));
    }
    let n = basis.len();
    let mut data = vec![0.0; n * n * n];
    for a in 0..n {
        for b in 0..n {
            let z = bracket(&basis.generators[a], &basis.generators[b]);
            for (e, gen) in basis.generators.iter().enumerate() {
                data[(a * n + b) * n + e] = killing(&z, gen);
            }
        }
    }
    Ok(StructureConstants { dim: n, data })
}
