//! Finite Lorentz transformations, their generators, the electromagnetic field
//! tensor as a generator of four-velocity evolution, and integrators for the
//! resulting Lorentz-force motion.

// `!(x <= tol)` is used deliberately so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod commands;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod geometry;
pub mod matrix;
pub mod scenario;
pub mod verify;

pub use algebra::{
    commutator, derivative_at_zero, expm, generator_from_rates, parametrized_curve,
    rates_from_generator, Generator,
};
pub use error::{Error, Result};
pub use geometry::{
    apply, boost_matrix, compose, general_product, minkowski_inner, rotation_matrix, Axis,
    FourVector, LorentzMatrix, MinkowskiMetric,
};
pub use matrix::Matrix4;
pub use field::{
    evaluate, field_invariants, frame_transform, generator_to_tensor, tensor_to_generator,
    Coupling, FieldMap, FieldTensor,
};
pub use dynamics::{
    flow_group_defect, integrate, lorentz_force, oracle_cyclotron, oracle_hyperbolic,
    renormalize, step_exact, step_rk4, IntegrationConfig, ParticleState, Stepper, Trajectory,
};
