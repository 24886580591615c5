//! Four-vectors over the Minkowski metric diag(+1, −1, −1, −1) and the
//! finite rotations and boosts that act on them.
//!
//! Index 0 is the time component. Matrices act actively on column vectors:
//! `apply(L, u)[α] = Σ_λ L[α][λ] u[λ]`.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::matrix::Matrix4;

/// Tolerance on `|LᵀηL − η|` and `|det L − 1|` used when validating
/// externally supplied Lorentz matrices.
pub const LORENTZ_TOL: f64 = 1e-12;

/// A point or tangent vector in Minkowski spacetime.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub const ZERO: FourVector = FourVector([0.0; 4]);

    /// Unit timelike vector of a particle at rest.
    pub const REST: FourVector = FourVector([1.0, 0.0, 0.0, 0.0]);

    pub fn new(c0: f64, c1: f64, c2: f64, c3: f64) -> Self {
        FourVector([c0, c1, c2, c3])
    }

    /// Future-pointing unit four-velocity with the given spatial part,
    /// `u⁰ = sqrt(1 + |u|²)`.
    pub fn on_shell(spatial: [f64; 3]) -> Self {
        let [a, b, c] = spatial;
        FourVector([(1.0 + a * a + b * b + c * c).sqrt(), a, b, c])
    }

    pub fn time(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    pub fn inner(&self, other: &FourVector) -> f64 {
        minkowski_inner(self, other)
    }

    pub fn norm_sqr(&self) -> f64 {
        minkowski_inner(self, self)
    }

    pub fn scale(&self, s: f64) -> Self {
        FourVector(self.0.map(|c| c * s))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |acc, c| acc.max(c.abs()))
    }
}

impl fmt::Display for FourVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

impl Index<usize> for FourVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for FourVector {
    type Output = FourVector;

    fn add(self, rhs: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for FourVector {
    type Output = FourVector;

    fn sub(self, rhs: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for FourVector {
    type Output = FourVector;

    fn neg(self) -> FourVector {
        self.scale(-1.0)
    }
}

impl Mul<FourVector> for f64 {
    type Output = FourVector;

    fn mul(self, rhs: FourVector) -> FourVector {
        rhs.scale(self)
    }
}

/// The constant Minkowski metric η = diag(+1, −1, −1, −1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct MinkowskiMetric;

impl MinkowskiMetric {
    pub const SIGNATURE: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

    pub fn matrix(&self) -> Matrix4 {
        Matrix4::METRIC
    }

    /// Lower the index of a vector: `(ηu)_α`.
    pub fn lower(&self, u: &FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| Self::SIGNATURE[i] * u.0[i]))
    }
}

/// `a⁰b⁰ − a¹b¹ − a²b² − a³b³`.
pub fn minkowski_inner(a: &FourVector, b: &FourVector) -> f64 {
    a.0[0] * b.0[0] - a.0[1] * b.0[1] - a.0[2] * b.0[2] - a.0[3] * b.0[3]
}

/// A spatial coordinate axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X = 1,
    Y = 2,
    Z = 3,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Row/column index of this axis in a 4×4 matrix.
    pub fn index(self) -> usize {
        self as usize
    }

    /// The two remaining spatial indices `(j, k)` in cyclic order, so that
    /// `(self, j, k)` is an even permutation of `(1, 2, 3)`.
    pub fn cyclic_pair(self) -> (usize, usize) {
        match self {
            Axis::X => (2, 3),
            Axis::Y => (3, 1),
            Axis::Z => (1, 2),
        }
    }
}

impl TryFrom<usize> for Axis {
    type Error = Error;

    fn try_from(value: usize) -> Result<Self> {
        match value {
            1 => Ok(Axis::X),
            2 => Ok(Axis::Y),
            3 => Ok(Axis::Z),
            other => Err(Error::Domain(format!("axis must be 1, 2 or 3, got {other}"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A proper orthochronous Lorentz transformation.
///
/// Every constructor in this crate yields `LᵀηL = η` to round-off and
/// `det L = +1`. Arbitrary matrices enter only through [`LorentzMatrix::try_new`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzMatrix(Matrix4);

impl LorentzMatrix {
    pub const IDENTITY: LorentzMatrix = LorentzMatrix(Matrix4::IDENTITY);

    /// Validates metric preservation, unit determinant and orientation of time.
    pub fn try_new(m: Matrix4, tol: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::Domain("Lorentz matrix has non-finite entries".into()));
        }
        let candidate = LorentzMatrix(m);
        let defect = candidate.metric_defect();
        let scale = m.max_abs().powi(2).max(1.0);
        if defect > tol * scale {
            return Err(Error::Domain(format!(
                "matrix does not preserve the metric (|LᵀηL − η| = {defect:.3e})"
            )));
        }
        let det = m.determinant();
        if (det - 1.0).abs() > tol * scale * scale {
            return Err(Error::Domain(format!("determinant {det} is not +1")));
        }
        if m[(0, 0)] < 1.0 - tol * scale {
            return Err(Error::Domain("transformation reverses the direction of time".into()));
        }
        Ok(candidate)
    }

    /// Wraps a matrix already known to be a Lorentz transformation.
    pub(crate) fn from_matrix_unchecked(m: Matrix4) -> Self {
        LorentzMatrix(m)
    }

    pub fn matrix(&self) -> &Matrix4 {
        &self.0
    }

    /// `max |LᵀηL − η|`.
    pub fn metric_defect(&self) -> f64 {
        let eta = Matrix4::METRIC;
        (self.0.transpose() * eta * self.0).max_abs_diff(&eta)
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    /// `L⁻¹ = η Lᵀ η`, exact for Lorentz matrices.
    pub fn inverse(&self) -> LorentzMatrix {
        let eta = Matrix4::METRIC;
        LorentzMatrix(eta * self.0.transpose() * eta)
    }

    pub fn apply(&self, u: &FourVector) -> FourVector {
        apply(self, u)
    }
}

impl Mul for LorentzMatrix {
    type Output = LorentzMatrix;

    fn mul(self, rhs: LorentzMatrix) -> LorentzMatrix {
        compose(&self, &rhs)
    }
}

impl Mul<FourVector> for LorentzMatrix {
    type Output = FourVector;

    fn mul(self, rhs: FourVector) -> FourVector {
        apply(&self, &rhs)
    }
}

impl From<LorentzMatrix> for Matrix4 {
    fn from(l: LorentzMatrix) -> Matrix4 {
        l.0
    }
}

/// Finite spatial rotation by `phi` radians about `axis`.
///
/// For the cyclic triple `(axis, j, k)` the `(j, k)` block is
/// `[[cos φ, −sin φ], [sin φ, cos φ]]`. About axis 2 this places `+sin φ` at
/// `(1, 3)`, and about axis 3 it places `−sin φ` at `(1, 2)`.
pub fn rotation_matrix(axis: Axis, phi: f64) -> LorentzMatrix {
    let (j, k) = axis.cyclic_pair();
    let (s, c) = phi.sin_cos();
    let mut m = Matrix4::IDENTITY;
    m[(j, j)] = c;
    m[(j, k)] = -s;
    m[(k, j)] = s;
    m[(k, k)] = c;
    LorentzMatrix(m)
}

/// Boost with rapidity `psi` along `axis`.
pub fn boost_matrix(axis: Axis, psi: f64) -> LorentzMatrix {
    let i = axis.index();
    let mut m = Matrix4::IDENTITY;
    m[(0, 0)] = psi.cosh();
    m[(i, i)] = psi.cosh();
    m[(0, i)] = psi.sinh();
    m[(i, 0)] = psi.sinh();
    LorentzMatrix(m)
}

/// Matrix product `a·b` (apply `b` first).
pub fn compose(a: &LorentzMatrix, b: &LorentzMatrix) -> LorentzMatrix {
    LorentzMatrix(a.0 * b.0)
}

/// The six-factor product `R₁(φ₁)·R₂(φ₂)·R₃(φ₃)·B₁(ψ₁)·B₂(ψ₂)·B₃(ψ₃)`,
/// multiplied left to right in that order.
///
/// Other factor orders agree with this one to first order in the angles and
/// differ at second order.
pub fn general_product(phi: [f64; 3], psi: [f64; 3]) -> LorentzMatrix {
    let rotations = Axis::ALL.iter().zip(phi).map(|(&a, p)| rotation_matrix(a, p));
    let boosts = Axis::ALL.iter().zip(psi).map(|(&a, p)| boost_matrix(a, p));
    rotations
        .chain(boosts)
        .fold(LorentzMatrix::IDENTITY, |acc, factor| compose(&acc, &factor))
}

/// `L^α_λ u^λ`.
pub fn apply(l: &LorentzMatrix, u: &FourVector) -> FourVector {
    FourVector(l.0.mul_vec(u.0))
}
