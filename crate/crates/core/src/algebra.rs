//! Generators of the Lorentz group in the 4×4 vector representation.
//!
//! A [`Generator`] packages three boost rates `eps` and three rotation rates
//! `b`. Its matrix has the layout
//!
//! ```text
//! [ 0    ε₁   ε₂   ε₃ ]
//! [ ε₁   0   −b₃   b₂ ]
//! [ ε₂   b₃   0   −b₁ ]
//! [ ε₃  −b₂   b₁   0  ]
//! ```
//!
//! so that `ηQ` is antisymmetric and `exp(τQ)` is a Lorentz transformation.

use crate::error::{Error, Result};
use crate::geometry::{general_product, Axis, LorentzMatrix};
use crate::matrix::Matrix4;

pub use crate::matrix::Matrix4 as RawMatrix;

/// Default step for [`derivative_at_zero`].
pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// Taylor terms are summed until the largest entry of the next term drops
/// below this value.
const SERIES_CUTOFF: f64 = 1e-16;

/// Scaled argument bound for scaling-and-squaring.
const SCALED_NORM_BOUND: f64 = 0.5;

/// An element of the Lorentz algebra: boost rates and rotation rates per unit
/// proper time.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Generator {
    pub eps: [f64; 3],
    pub b: [f64; 3],
}

impl Generator {
    pub const ZERO: Generator = Generator { eps: [0.0; 3], b: [0.0; 3] };

    pub fn new(eps: [f64; 3], b: [f64; 3]) -> Self {
        Generator { eps, b }
    }

    pub fn boost(axis: Axis, rate: f64) -> Self {
        let mut eps = [0.0; 3];
        eps[axis.index() - 1] = rate;
        Generator { eps, b: [0.0; 3] }
    }

    pub fn rotation(axis: Axis, rate: f64) -> Self {
        let mut b = [0.0; 3];
        b[axis.index() - 1] = rate;
        Generator { eps: [0.0; 3], b }
    }

    pub fn matrix(&self) -> Matrix4 {
        let [e1, e2, e3] = self.eps;
        let [b1, b2, b3] = self.b;
        Matrix4([
            [0.0, e1, e2, e3],
            [e1, 0.0, -b3, b2],
            [e2, b3, 0.0, -b1],
            [e3, -b2, b1, 0.0],
        ])
    }

    pub fn scale(&self, s: f64) -> Self {
        Generator {
            eps: self.eps.map(|e| e * s),
            b: self.b.map(|b| b * s),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.eps.iter().chain(&self.b).all(|v| v.is_finite())
    }

    /// `max |ηQ + (ηQ)ᵀ|`; zero for every generator.
    pub fn antisymmetry_defect(&self) -> f64 {
        let lowered = Matrix4::METRIC * self.matrix();
        (lowered + lowered.transpose()).max_abs()
    }
}

impl std::ops::Add for Generator {
    type Output = Generator;

    fn add(self, rhs: Generator) -> Generator {
        Generator {
            eps: std::array::from_fn(|i| self.eps[i] + rhs.eps[i]),
            b: std::array::from_fn(|i| self.b[i] + rhs.b[i]),
        }
    }
}

pub fn generator_from_rates(eps: [f64; 3], b: [f64; 3]) -> Generator {
    Generator { eps, b }
}

/// Largest deviation of `q` from the generator layout: nonzero diagonal,
/// asymmetric time row/column, or non-antisymmetric spatial block.
pub fn structure_defect(q: &Matrix4) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..4 {
        worst = worst.max(q[(i, i)].abs());
    }
    for i in 1..4 {
        worst = worst.max((q[(0, i)] - q[(i, 0)]).abs());
        for j in (i + 1)..4 {
            worst = worst.max((q[(i, j)] + q[(j, i)]).abs());
        }
    }
    worst
}

/// Reads the rates back out of a matrix with the generator layout.
///
/// Paired entries are averaged, which is exact when the pair already agrees.
pub fn rates_from_generator(q: &Matrix4, tol: f64) -> Result<Generator> {
    let max_deviation = structure_defect(q);
    if !(max_deviation <= tol) {
        return Err(Error::Structural { max_deviation, tol });
    }
    let sym = |i: usize, j: usize| 0.5 * (q[(i, j)] + q[(j, i)]);
    let anti = |i: usize, j: usize| 0.5 * (q[(i, j)] - q[(j, i)]);
    Ok(Generator {
        eps: [sym(0, 1), sym(0, 2), sym(0, 3)],
        b: [anti(3, 2), anti(1, 3), anti(2, 1)],
    })
}

/// The six-factor family `τ ↦ general_product(b·τ, eps·τ)` with every angle
/// growing linearly in τ.
///
/// Its tangent at τ = 0 is `gen`, but it is a one-parameter subgroup only
/// when the rates commute. Use [`expm`] for the subgroup itself.
pub fn parametrized_curve(gen: Generator) -> impl Fn(f64) -> LorentzMatrix + Clone {
    move |tau| general_product(gen.b.map(|r| r * tau), gen.eps.map(|r| r * tau))
}

/// Fourth-order central difference of `curve` at zero:
/// `(−c(2h) + 8c(h) − 8c(−h) + c(−2h)) / 12h`.
pub fn derivative_at_zero<F>(curve: F, h: f64) -> Matrix4
where
    F: Fn(f64) -> LorentzMatrix,
{
    let at = |t: f64| *curve(t).matrix();
    let num = at(h).scale(8.0) - at(-h).scale(8.0) - at(2.0 * h) + at(-2.0 * h);
    num.scale(1.0 / (12.0 * h))
}

/// Number of halvings needed to bring `a` inside the series radius.
fn squaring_count(a: &Matrix4) -> u32 {
    let norm = a.norm_inf();
    if norm <= SCALED_NORM_BOUND {
        0
    } else {
        (norm / SCALED_NORM_BOUND).log2().ceil().max(0.0) as u32
    }
}

/// `exp(a) − I` by truncated Taylor series, for small `a`.
fn exp_minus_identity_series(a: &Matrix4) -> Matrix4 {
    let mut sum = Matrix4::ZERO;
    let mut term = Matrix4::IDENTITY;
    for n in 1..64 {
        term = (term * *a).scale(1.0 / n as f64);
        sum = sum + term;
        if term.max_abs() < SERIES_CUTOFF {
            break;
        }
    }
    sum
}

/// `exp(a)` for an arbitrary 4×4 matrix by scaling and squaring.
///
/// The squaring phase carries `X = exp(a/2ˢ) − I` and doubles it as
/// `2X + X²`, adding the identity back only at the end.
pub fn expm_matrix(a: &Matrix4) -> Matrix4 {
    let s = squaring_count(a);
    let scaled = a.scale(0.5_f64.powi(s as i32));
    let mut x = exp_minus_identity_series(&scaled);
    for _ in 0..s {
        x = x.scale(2.0) + x * x;
    }
    Matrix4::IDENTITY + x
}

/// `exp(τQ)` for the generator `gen`.
pub fn expm(gen: &Generator, tau: f64) -> LorentzMatrix {
    LorentzMatrix::from_matrix_unchecked(expm_matrix(&gen.matrix().scale(tau)))
}

/// Returns `(exp(dt·Q), Φ(dt))` with `Φ(dt) = Σₙ Qⁿ dtⁿ⁺¹/(n+1)! = ∫₀^dt exp(sQ) ds`.
///
/// Both series are summed on the scaled step `h = dt/2ˢ` and doubled back with
/// `exp(2hQ) = exp(hQ)²` and `Φ(2h) = (I + exp(hQ))·Φ(h)`, carrying
/// `X = exp(hQ) − I` as in [`expm_matrix`].
pub fn expm_with_integral(q: &Matrix4, dt: f64) -> (Matrix4, Matrix4) {
    let s = squaring_count(&q.scale(dt));
    let h = dt * 0.5_f64.powi(s as i32);
    let scaled = q.scale(h);

    let mut x = Matrix4::ZERO;
    let mut phi = Matrix4::IDENTITY.scale(h);
    // term_n = (hQ)ⁿ / n!; Φ accumulates h·term_n / (n+1)
    let mut term = Matrix4::IDENTITY;
    for n in 1..64 {
        term = (term * scaled).scale(1.0 / n as f64);
        x = x + term;
        phi = phi + term.scale(h / (n + 1) as f64);
        if term.max_abs() < SERIES_CUTOFF {
            break;
        }
    }
    for _ in 0..s {
        phi = phi.scale(2.0) + x * phi;
        x = x.scale(2.0) + x * x;
    }
    (Matrix4::IDENTITY + x, phi)
}

/// Lie bracket `[a, b] = AB − BA`, read back as a generator.
pub fn commutator(a: &Generator, b: &Generator) -> Generator {
    let c = a.matrix().commutator(&b.matrix());
    // closure holds up to round-off in the products
    let tol = 1e-12 * (a.matrix().max_abs() * b.matrix().max_abs()).max(1.0);
    rates_from_generator(&c, tol).expect("Lorentz algebra is closed under the bracket")
}
