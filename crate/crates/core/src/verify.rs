//! Seeded randomized checks of the whole construction.
//!
//! Each property reports the worst deviation it observed against a fixed
//! tolerance. The report is a pure function of `(seed, trials)`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    commutator, derivative_at_zero, expm, generator_from_rates, parametrized_curve,
    rates_from_generator, Generator, DEFAULT_FD_STEP,
};
use crate::dynamics::{
    flow_group_defect, integrate, lorentz_force, IntegrationConfig, Stepper,
};
use crate::field::{field_invariants, frame_transform, Coupling, FieldMap, FieldTensor};
use crate::geometry::{
    boost_matrix, compose, minkowski_inner, rotation_matrix, Axis, FourVector, LorentzMatrix,
};
use crate::matrix::Matrix4;

/// How a property compares its measurement with the threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// Worst deviation must not exceed the threshold.
    AtMost,
    /// Worst (smallest) measurement must reach the threshold.
    AtLeast,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub measured: f64,
    pub threshold: f64,
    pub bound: Bound,
    pub samples: usize,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.measured <= self.threshold,
            Bound::AtLeast => self.measured >= self.threshold,
        }
    }
}

impl fmt::Display for PropertyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (label, op) = match self.bound {
            Bound::AtMost => ("worst", "<="),
            Bound::AtLeast => ("min", ">="),
        };
        write!(
            f,
            "{} {:<28} {label}={:.3e} {op} {:.1e}  (n={})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.threshold,
            self.samples
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub results: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(PropertyResult::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verify seed={} trials={}", self.seed, self.trials)?;
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        let passed = self.results.iter().filter(|r| r.passed()).count();
        writeln!(
            f,
            "summary: {passed}/{} properties passed: {}",
            self.results.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Group-law deviation `|AB − C|` measured against the magnitude of the
/// product's terms, `max|A|·max|B|`. When `A` and `B` are large and nearly
/// inverse the product cancels to O(1) and the absolute error floor is
/// `ε·max|A|·max|B|`.
pub fn group_law_deviation(a: &Matrix4, b: &Matrix4, c: &Matrix4) -> f64 {
    (*a * *b).max_abs_diff(c) / (a.max_abs() * b.max_abs()).max(c.max_abs()).max(1.0)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

/// `n` points spaced evenly in log from `lo` to `hi`.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Largest `|L_G(τ) − exp(τQ)|` growth exponent over τ ∈ [1e-4, 1e-1].
pub fn product_defect_slope(g: &Generator) -> f64 {
    let curve = parametrized_curve(*g);
    let taus = log_space(1e-4, 1e-1, 7);
    let defects: Vec<f64> = taus
        .iter()
        .map(|&t| curve(t).matrix().max_abs_diff(expm(g, t).matrix()))
        .collect();
    loglog_slope(&taus, &defects)
}

fn uniform3(rng: &mut ChaCha8Rng, r: f64) -> [f64; 3] {
    std::array::from_fn(|_| rng.gen_range(-r..=r))
}

fn random_generator(rng: &mut ChaCha8Rng, r: f64) -> Generator {
    generator_from_rates(uniform3(rng, r), uniform3(rng, r))
}

fn random_axis(rng: &mut ChaCha8Rng) -> Axis {
    Axis::ALL[rng.gen_range(0..3)]
}

fn random_transform(rng: &mut ChaCha8Rng) -> LorentzMatrix {
    let rot = rotation_matrix(random_axis(rng), rng.gen_range(-std::f64::consts::PI..=std::f64::consts::PI));
    let boost = boost_matrix(random_axis(rng), rng.gen_range(-3.0..=3.0));
    compose(&rot, &boost)
}

fn max_fields_diff(a: &FieldTensor, b: &FieldTensor) -> f64 {
    a.e.iter()
        .chain(&a.b)
        .zip(b.e.iter().chain(&b.b))
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}

/// The printed single-axis matrices against the exponential of each basis
/// generator, at 20 evenly spaced angles in [−5, 5].
fn single_axis_exponential() -> f64 {
    let angles: Vec<f64> = (0..20).map(|i| -5.0 + 10.0 * i as f64 / 19.0).collect();
    let mut worst = 0.0_f64;
    for axis in Axis::ALL {
        for &a in &angles {
            let b = expm(&Generator::boost(axis, 1.0), a);
            worst = worst.max(b.matrix().max_abs_diff(boost_matrix(axis, a).matrix()));
            let r = expm(&Generator::rotation(axis, 1.0), a);
            worst = worst.max(r.matrix().max_abs_diff(rotation_matrix(axis, a).matrix()));
        }
    }
    worst
}

pub fn run_suite(seed: u64, trials: usize) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();
    let mut push = |name, measured, threshold, bound, samples| {
        results.push(PropertyResult { name, measured, threshold, bound, samples })
    };

    // tangent of the six-factor family at τ = 0
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let g = random_generator(&mut rng, 1.0);
        let d = derivative_at_zero(parametrized_curve(g), DEFAULT_FD_STEP);
        worst = worst.max(d.max_abs_diff(&g.matrix()));
    }
    push("generator_derivative", worst, 1e-9, Bound::AtMost, trials);

    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let g = random_generator(&mut rng, 2.0);
        let (t1, t2) = (rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0));
        let (a, b) = (expm(&g, t1), expm(&g, t2));
        worst = worst.max(group_law_deviation(a.matrix(), b.matrix(), expm(&g, t1 + t2).matrix()));
    }
    push("exponential_group_law", worst, 1e-12, Bound::AtMost, trials);

    push("single_axis_exponential", single_axis_exponential(), 1e-13, Bound::AtMost, 120);

    let mut worst_antisym = 0.0_f64;
    let mut worst_round_trip = 0.0_f64;
    let mut worst_orth = 0.0_f64;
    for _ in 0..trials {
        let g = random_generator(&mut rng, 1.0);
        worst_antisym = worst_antisym.max(g.antisymmetry_defect());
        let back = rates_from_generator(&g.matrix(), 0.0).map_or(f64::INFINITY, |r| {
            if r == g {
                0.0
            } else {
                f64::INFINITY
            }
        });
        worst_round_trip = worst_round_trip.max(back);
        let u = FourVector::on_shell(uniform3(&mut rng, 3.0));
        let f = FieldTensor::new(g.eps, g.b);
        worst_orth = worst_orth.max(minkowski_inner(&lorentz_force(&u, &f, Coupling(1.0)), &u).abs());
    }
    push("generator_antisymmetry", worst_antisym, 0.0, Bound::AtMost, trials);
    push("rates_round_trip", worst_round_trip, 0.0, Bound::AtMost, trials);
    push("force_orthogonality", worst_orth, 1e-12, Bound::AtMost, trials);

    let mut worst_closure = 0.0_f64;
    for _ in 0..trials {
        let (a, b) = (random_generator(&mut rng, 1.0), random_generator(&mut rng, 1.0));
        let c = commutator(&a, &b);
        let direct = a.matrix().commutator(&b.matrix());
        worst_closure = worst_closure.max(c.matrix().max_abs_diff(&direct));
    }
    push("bracket_closure", worst_closure, 1e-12, Bound::AtMost, trials);

    let k = Coupling(1.0);
    let mut worst_inv = 0.0_f64;
    let mut worst_comp = 0.0_f64;
    let mut failures = 0usize;
    for _ in 0..trials {
        let f = FieldTensor::new(uniform3(&mut rng, 1.0), uniform3(&mut rng, 1.0));
        let (l1, l2) = (random_transform(&mut rng), random_transform(&mut rng));
        let (Ok(once), Ok(twice), Ok(direct)) = (
            frame_transform(&f, k, &l2),
            frame_transform(&f, k, &l2).and_then(|g| frame_transform(&g, k, &l1)),
            frame_transform(&f, k, &compose(&l1, &l2)),
        ) else {
            failures += 1;
            continue;
        };
        let (p0, s0) = field_invariants(&f);
        let (p1, s1) = field_invariants(&once);
        worst_inv = worst_inv.max((p1 - p0).abs()).max((s1 - s0).abs());
        worst_comp = worst_comp.max(max_fields_diff(&twice, &direct));
    }
    if failures > 0 {
        worst_inv = f64::INFINITY;
        worst_comp = f64::INFINITY;
    }
    push("field_invariants", worst_inv, 1e-10, Bound::AtMost, trials);
    push("adjoint_composition", worst_comp, 1e-10, Bound::AtMost, trials);

    // mass shell and flow composition under the exact stepper
    let mut worst_shell = 0.0_f64;
    let mut worst_flow = 0.0_f64;
    for _ in 0..trials {
        let map = FieldMap::uniform(uniform3(&mut rng, 1.0), uniform3(&mut rng, 1.0));
        let u0 = FourVector::on_shell(uniform3(&mut rng, 1.0));
        let cfg = IntegrationConfig::new(0.01, 200, Stepper::Exact).with_stride(200);
        worst_shell = match integrate(FourVector::ZERO, u0, &map, k, &cfg) {
            Ok(traj) => worst_shell.max(traj.max_shell_defect),
            Err(_) => f64::INFINITY,
        };
        let defect = flow_group_defect(FourVector::ZERO, u0, &map, k, (0.5, 0.75), 0.01, Stepper::Exact);
        worst_flow = worst_flow.max(defect.unwrap_or(f64::INFINITY));
    }
    push("exact_mass_shell", worst_shell, 1e-9, Bound::AtMost, trials);
    push("exact_flow_group", worst_flow, 1e-12, Bound::AtMost, trials);

    // the six-factor family departs from exp(τQ) at second order
    let mut min_slope = f64::INFINITY;
    let mut used = 0usize;
    let mut attempts = 0usize;
    while used < trials && attempts < 100 * trials {
        attempts += 1;
        let g = random_generator(&mut rng, 1.0);
        let split_a = Generator::new(g.eps, [0.0; 3]);
        let split_b = Generator::new([0.0; 3], g.b);
        if commutator(&split_a, &split_b).matrix().max_abs() < 0.1 {
            continue;
        }
        min_slope = min_slope.min(product_defect_slope(&g));
        used += 1;
    }
    if used < trials {
        min_slope = f64::NEG_INFINITY;
    }
    push("product_defect_order", min_slope, 1.9, Bound::AtLeast, used);

    VerifyReport { seed, trials, results }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs = log_space(1e-3, 1.0, 5);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powi(2)).collect();
        assert!((loglog_slope(&xs, &ys) - 2.0).abs() < 1e-12);
        assert!((xs[0] - 1e-3).abs() < 1e-15 && (xs[4] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn report_is_deterministic() {
        let a = run_suite(7, 5).to_string();
        let b = run_suite(7, 5).to_string();
        assert_eq!(a, b);
    }

    #[test]
    fn small_suite_passes() {
        let report = run_suite(1, 10);
        assert!(report.passed(), "{report}");
    }
}
