//! Electromagnetic fields as Lorentz-algebra generators.
//!
//! With coupling `k = q/m` (natural units, c = 1) the boost rates are `k·E` and
//! the rotation rates are `k·B`. The four-velocity then evolves as
//! `du/dτ = Q u`. With this sign layout a positive `k·B₃` turns the spatial
//! velocity counter-clockwise in the 1–2 plane.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{rates_from_generator, Generator};
use crate::error::{Error, Result};
use crate::geometry::{FourVector, LorentzMatrix};

/// Deviation from the generator layout, relative to the conjugated matrix
/// scale, beyond which [`frame_transform`] reports a non-Lorentz input.
pub const FRAME_STRUCTURE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct FieldTensor {
    pub e: [f64; 3],
    pub b: [f64; 3],
}

impl FieldTensor {
    pub const ZERO: FieldTensor = FieldTensor { e: [0.0; 3], b: [0.0; 3] };

    pub fn new(e: [f64; 3], b: [f64; 3]) -> Self {
        FieldTensor { e, b }
    }

    pub fn is_finite(&self) -> bool {
        self.e.iter().chain(&self.b).all(|v| v.is_finite())
    }
}

/// Charge-to-mass ratio `q/m`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Coupling(pub f64);

impl Coupling {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn tensor_to_generator(f: &FieldTensor, k: Coupling) -> Generator {
    Generator {
        eps: f.e.map(|e| k.0 * e),
        b: f.b.map(|b| k.0 * b),
    }
}

pub fn generator_to_tensor(g: &Generator, k: Coupling) -> Result<FieldTensor> {
    if k.0 == 0.0 {
        return Err(Error::Domain("coupling k must be nonzero to recover fields".into()));
    }
    Ok(FieldTensor {
        e: g.eps.map(|e| e / k.0),
        b: g.b.map(|b| b / k.0),
    })
}

/// Fields seen after applying `l`, by the adjoint action `Q ↦ L Q L⁻¹`.
///
/// `k` cancels out of the result; it only fixes the generator scale the
/// structural check runs at and must be nonzero.
///
/// Conjugating with `ηLᵀη` keeps `ηQ'` antisymmetric for any `L`, so metric
/// preservation of `l` is checked separately.
pub fn frame_transform(f: &FieldTensor, k: Coupling, l: &LorentzMatrix) -> Result<FieldTensor> {
    let scale = l.matrix().max_abs().powi(2).max(1.0);
    let metric_defect = l.metric_defect();
    if metric_defect > FRAME_STRUCTURE_TOL * scale {
        return Err(Error::Domain(format!(
            "transformation is not a Lorentz matrix (|LᵀηL − η| = {metric_defect:.3e})"
        )));
    }
    let q = tensor_to_generator(f, k).matrix();
    let conjugated = *l.matrix() * q * *l.inverse().matrix();
    let tol = FRAME_STRUCTURE_TOL * conjugated.max_abs().max(1.0);
    let g = rates_from_generator(&conjugated, tol)?;
    generator_to_tensor(&g, k)
}

/// `(E·B, E·E − B·B)`.
pub fn field_invariants(f: &FieldTensor) -> (f64, f64) {
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    (dot(&f.e, &f.b), dot(&f.e, &f.e) - dot(&f.b, &f.b))
}

/// Position-dependent field, pure in its argument.
pub type FieldFn = dyn Fn(&FourVector) -> FieldTensor + Send + Sync;

/// A field as a function of spacetime position.
#[derive(Clone)]
pub enum FieldMap {
    Uniform(FieldTensor),
    Varying { name: String, eval: Arc<FieldFn> },
}

impl FieldMap {
    pub fn uniform(e: [f64; 3], b: [f64; 3]) -> Self {
        FieldMap::Uniform(FieldTensor::new(e, b))
    }

    pub fn varying<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&FourVector) -> FieldTensor + Send + Sync + 'static,
    {
        FieldMap::Varying {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    /// `base` plus a magnetic component along axis 3 growing linearly with
    /// the first spatial coordinate: `B₃ += gradient·x¹`.
    pub fn b3_gradient(base: FieldTensor, gradient: f64) -> Self {
        Self::varying("b3_gradient", move |x: &FourVector| {
            let mut f = base;
            f.b[2] += gradient * x[1];
            f
        })
    }

    /// `base` plus `E₁ += gradient·x¹`.
    pub fn e1_gradient(base: FieldTensor, gradient: f64) -> Self {
        Self::varying("e1_gradient", move |x: &FourVector| {
            let mut f = base;
            f.e[0] += gradient * x[1];
            f
        })
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, FieldMap::Uniform(_))
    }

    pub fn tag(&self) -> &str {
        match self {
            FieldMap::Uniform(_) => "uniform",
            FieldMap::Varying { name, .. } => name,
        }
    }

    pub fn evaluate(&self, x: &FourVector) -> Result<FieldTensor> {
        evaluate(self, x)
    }
}

impl fmt::Debug for FieldMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldMap::Uniform(t) => f.debug_tuple("Uniform").field(t).finish(),
            FieldMap::Varying { name, .. } => f.debug_struct("Varying").field("name", name).finish(),
        }
    }
}

pub fn evaluate(map: &FieldMap, x: &FourVector) -> Result<FieldTensor> {
    let f = match map {
        FieldMap::Uniform(f) => *f,
        FieldMap::Varying { eval, .. } => eval(x),
    };
    if f.is_finite() {
        Ok(f)
    } else {
        Err(Error::Evaluation { position: *x })
    }
}
