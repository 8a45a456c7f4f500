//! Acceptance criteria, one PASS/FAIL line each.
//!
//! The run fails when a criterion's outcome differs from `EXPECTED_FAIL`:
//! anything not listed there must pass, and anything listed must still fail.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use aloff_wallach::curvature::{base_curvature_operator, extremize_sectional, group_curvature};
use aloff_wallach::euler::{integrate_volume, volume_density, EulerAnglesSU3, QuadratureSpec, SU3_RANGES};
use aloff_wallach::injectivity::{bounds_wpq, CurvatureSource};
use aloff_wallach::pinching::{
    coefficients, family_lower, family_upper_exact, k_max, lambda_bar, lambda_hat, mixed_eigenvalues, SimplexQuadratic,
};
use aloff_wallach::structure::{build_split, check_condition_ii, MetricSpec, WpqIndex};
use aloff_wallach::su3::{bracket, killing, AlgebraElement, GeneratorBasis};
use aloff_wallach::volumes::vol_wpq_bounds;
use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Criteria with a sub-check that cannot hold; see the decisions notes.
const EXPECTED_FAIL: [u32; 1] = [6];

struct Outcome {
    passed: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            passed: true,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, note: impl Into<String>) {
        let note = note.into();
        self.passed &= ok;
        self.notes.push(if ok { note } else { format!("FAILED {note}") });
    }
}

fn idx(p: i64, q: i64) -> WpqIndex {
    WpqIndex::new(p, q).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn c1_volume_constant() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let est = integrate_volume(&MetricSpec::killing(), &build_split(&idx(1, 1)), &QuadratureSpec::product_gauss(32)).unwrap();
    let elapsed = start.elapsed();
    let target = 3f64.sqrt() * PI.powi(5);
    o.check(rel(est.value, target) < 1e-6, format!("Vol = {:.10} vs √3π⁵ = {target:.10}", est.value));
    o.check(elapsed < Duration::from_secs(30), format!("{elapsed:.2?}"));
    o
}

fn c2_density() -> Outcome {
    let mut o = Outcome::new();
    let split = build_split(&idx(1, 1));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a: [f64; 8] = SU3_RANGES.map(|r| r * rng.random_range(0.001..0.999));
        let [_, theta, _, xi, _, beta, _, _] = a;
        let closed = 3f64.sqrt() / 512.0 * beta.sin() * theta.sin() * xi.sin() * (xi / 2.0).sin().powi(2);
        let rho = volume_density(&EulerAnglesSU3::from_array(a).unwrap(), &MetricSpec::killing(), &split).unwrap();
        worst = worst.max(rel(rho, closed));
    }
    o.check(worst < 1e-9, format!("max relative error {worst:.2e}"));
    o
}

fn c3_sandwich() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut inside, mut worst, mut n) = (true, 0.0f64, 0);
    while n < 100 {
        let (p, q): (i64, i64) = (rng.random_range(-50..=50), rng.random_range(-50..=50));
        if p == 0 || q == 0 || p + q == 0 {
            continue;
        }
        n += 1;
        let i = idx(p, q);
        let s = ((p * p + p * q + q * q) as f64).sqrt();
        let exact = 3f64.sqrt() * PI.powi(4) * i.gcd as f64 / (4.0 * 2f64.sqrt() * s);
        let b = vol_wpq_bounds(&i);
        worst = worst.max(rel(b.exact.unwrap(), exact));
        inside &= b.lower < exact && exact < b.upper;
        worst = worst.max(rel(exact / b.lower, 4.0 * 2f64.sqrt())).max(rel(b.upper / exact, 2.0 * 2f64.sqrt()));
    }
    o.check(inside, "exact volume strictly inside");
    o.check(worst < 1e-12, format!("formula and ratio deviation {worst:.2e}"));
    o
}

fn c4_w11() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let r = extremize_sectional(&idx(1, 1), 10_000, 4).unwrap();
    let elapsed = start.elapsed();
    o.check((r.k_min() - 2.0 / 37.0).abs() < 1e-3, format!("K_min = {:.9}", r.k_min()));
    o.check((r.k_max() - 29.0 / 8.0).abs() < 1e-3, format!("K_max = {:.9}", r.k_max()));
    o.check(elapsed < Duration::from_secs(120), format!("{elapsed:.2?}"));
    o
}

fn c5_sharpness() -> Outcome {
    let mut o = Outcome::new();
    for n in 1..=5u64 {
        let r = extremize_sectional(&idx(n as i64, n as i64 + 1), 10_000, 5).unwrap();
        let (c, big_c) = (family_lower(n), num_traits::ToPrimitive::to_f64(&family_upper_exact(n)).unwrap());
        o.check(
            (r.k_min() - c).abs() < 1e-3 && (r.k_max() - big_c).abs() < 1e-3,
            format!("n={n}: oracle ({:.6}, {:.6}) vs ({c:.6}, {big_c:.6})", r.k_min(), r.k_max()),
        );
    }
    let c1 = family_lower(1);
    o.check((c1 - 0.04760).abs() < 1e-3, format!("c(1) = {c1:.7}"));
    o.check(1.0 / 25.0 < c1 && c1 < 2.0 / 37.0, "1/25 < c(1) < 2/37");
    o.check(family_upper_exact(1).to_string() == "215/56", format!("C(1) = {}", family_upper_exact(1)));
    o
}

fn quad_by_adjugate(p: i64, q: i64) -> f64 {
    let c = coefficients(&idx(p, q)).unwrap();
    let (a, b) = (c.a, c.b);
    let m = Matrix3::new(a[0], b[2], b[1], b[2], a[1], b[0], b[1], b[0], a[2]);
    let det = m.determinant();
    let adj = m.try_inverse().unwrap() * det;
    det / (adj * Vector3::repeat(1.0)).sum()
}

fn c6_lambda_bar() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst, mut sym) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let (p, q) = (rng.random_range(1..=60), rng.random_range(1..=60));
        let v = lambda_bar(&SimplexQuadratic::new(&coefficients(&idx(p, q)).unwrap())).value;
        worst = worst.max((v - quad_by_adjugate(p, q)).abs());
        let w = lambda_bar(&SimplexQuadratic::new(&coefficients(&idx(q, p)).unwrap())).value;
        sym = sym.max((v - w).abs());
    }
    o.check(worst < 1e-12, format!("QP vs det A/ΣD {worst:.2e}"));
    o.check(sym < 1e-12, format!("p↔q {sym:.2e}"));
    let b11 = lambda_bar(&SimplexQuadratic::new(&coefficients(&idx(1, 1)).unwrap())).value;
    o.check((b11 - 2.0 / 37.0).abs() < 1e-12, format!("λ̄(1,1) = {b11:.12}"));
    let b12 = lambda_bar(&SimplexQuadratic::new(&coefficients(&idx(1, 2)).unwrap())).value;
    o.check(
        (b12 - 1757.0 / 28762.0).abs() < 1e-12,
        format!("λ̄(1,2) = {b12:.12} vs 1757/28762 = {:.12}", 1757.0 / 28762.0),
    );
    o
}

fn c7_lambda_hat() -> Outcome {
    let mut o = Outcome::new();
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let h = lambda_hat(&coefficients(&idx(rng.random_range(1..=50), rng.random_range(1..=50))).unwrap());
        worst = worst.max((h.search - h.enumeration).abs());
    }
    o.check(worst < 1e-10, format!("search vs enumeration {worst:.2e}"));
    let hats: Vec<f64> = (1..=100).map(|n| lambda_hat(&coefficients(&idx(n, n + 1)).unwrap()).value).collect();
    o.check(hats.windows(2).all(|w| w[1] > w[0]), "increasing on n = 1..100");
    o.check(hats.iter().all(|&h| 2.0 / 37.0 - h > 0.0), format!("2/37 − λ̂(100) = {:.3e}", 2.0 / 37.0 - hats[99]));
    o
}

fn c8_operator() -> Outcome {
    let mut o = Outcome::new();
    let op = base_curvature_operator(&idx(1, 1)).unwrap();
    o.check(op.min() < 0.0, format!("λ_min(W(1,1)) = {:.6}", op.min()));
    for (p, q) in [(1, 1), (1, 2), (2, 3), (1, 4), (3, 5)] {
        let i = idx(p, q);
        let op = base_curvature_operator(&i).unwrap();
        let r = extremize_sectional(&i, 4_000, 8).unwrap();
        o.check(
            op.min() <= r.k_min() && r.k_min() <= r.k_max() && r.k_max() <= op.max(),
            format!("({p},{q}): [{:.4}, {:.4}] ⊂ [{:.4}, {:.4}]", r.k_min(), r.k_max(), op.min(), op.max()),
        );
    }
    o
}

fn c9_kmax() -> Outcome {
    let mut o = Outcome::new();
    let mut gates = true;
    let mut values = Vec::new();
    for n in 1..=100i64 {
        let c = coefficients(&idx(n, n + 1)).unwrap();
        let km = k_max(&c);
        gates &= km.fiber_gate && mixed_eigenvalues(&c)[1].strictly_below(&c.exact.a[1]);
        values.push(km.capital_lambda0);
    }
    o.check(gates, "a₁ > 2d₀ − b₀ and a₁ > ν₂ exactly for n = 1..100");
    o.check(values.windows(2).all(|w| w[1] < w[0]), "K_max strictly decreasing");
    let far = k_max(&coefficients(&idx(1_000_000, 1_000_001)).unwrap()).capital_lambda0;
    o.check(values.iter().all(|&v| v > 29.0 / 8.0) && far - 29.0 / 8.0 < 1e-6, format!("K_max(10⁶) = {far:.9}"));
    o
}

fn c10_injectivity() -> Outcome {
    let mut o = Outcome::new();
    let b = bounds_wpq(&idx(1, 1), &CurvatureSource::Tabulated).unwrap();
    let target = 3.0 * PI / (4.0 * 37f64.powi(3));
    o.check(rel(b.lower, target) < 1e-4 && rel(b.lower, 4.6513e-5) < 1e-4, format!("lower {:.6e}", b.lower));
    o.check(rel(b.upper, PI * 1.5f64.powf(1.0 / 7.0)) < 1e-12 && (b.upper - 3.329).abs() < 1e-3, format!("upper {:.6}", b.upper));
    let ordered = (1..=100).all(|n| {
        let f = bounds_wpq(&idx(n, n + 1), &CurvatureSource::Pinching).unwrap();
        f.lower <= f.upper
    });
    o.check(ordered, "lower ≤ upper for n = 1..100");
    o
}

fn c11_bi_invariant() -> Outcome {
    let mut o = Outcome::new();
    let g = group_curvature(&MetricSpec::killing(), &build_split(&idx(2, 3)));
    let basis = GeneratorBasis::gell_mann();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut draw = || -> AlgebraElement { basis.combine(&(0..8).map(|_| rng.sample(StandardNormal)).collect::<Vec<f64>>()) };
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let x = draw();
        let x = x * (1.0 / x.norm());
        let y = draw();
        let y = y - x * killing(&x, &y);
        let y = y * (1.0 / y.norm());
        let b = bracket(&x, &y);
        worst = worst.max(rel(g.sectional(&x, &y).unwrap(), 0.25 * killing(&b, &b)));
    }
    o.check(worst < 1e-9, format!("max relative error {worst:.2e}"));
    o
}

fn c12_condition_ii() -> Outcome {
    let mut o = Outcome::new();
    let mut residual = 0.0f64;
    for p in 1..=10 {
        for q in 1..=10 {
            let r = check_condition_ii(&build_split(&idx(p, q)), 0, 0);
            residual = residual.max(r.residual_item1).max(r.residual_item2).max(r.residual_item3);
        }
    }
    o.check(residual < 1e-12, format!("items 1-3 residual {residual:.2e}"));
    for (p, q) in [(1, 1), (1, 2)] {
        let r = check_condition_ii(&build_split(&idx(p, q)), 100_000, 12);
        o.check(
            r.item4_samples == 100_000 && r.item4_violations == 0,
            format!("({p},{q}): {} violations in {} samples", r.item4_violations, r.item4_samples),
        );
    }
    o
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 12] = [
        (1, "volume constant", c1_volume_constant),
        (2, "density closed form", c2_density),
        (3, "volume sandwich", c3_sandwich),
        (4, "W(1,1) pinching", c4_w11),
        (5, "family sharpness", c5_sharpness),
        (6, "λ̄ dual computation", c6_lambda_bar),
        (7, "λ̂ dual computation", c7_lambda_hat),
        (8, "curvature operator", c8_operator),
        (9, "K_max gates", c9_kmax),
        (10, "injectivity numbers", c10_injectivity),
        (11, "bi-invariant self-test", c11_bi_invariant),
        (12, "condition II", c12_condition_ii),
    ];
    let mut unexpected = 0;
    for (id, name, f) in criteria {
        let out = f();
        let tag = if out.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {id:>2} ({name}): {}", out.notes.join("; "));
        if out.passed == EXPECTED_FAIL.contains(&id) {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria deviate from the expected outcome");
        ExitCode::FAILURE
    }
}
