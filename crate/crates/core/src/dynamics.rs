//! Four-velocity evolution `du/dτ = Q(x) u`, `dx/dτ = u`.
//!
//! Uniform fields are advanced exactly with `exp(dt·Q)` and its integral.
//! Position-dependent fields use classical RK4 on the eight-dimensional
//! state `(x, u)`, optionally projected back onto the mass shell.

use std::fmt;
use std::str::FromStr;

use crate::algebra::expm_with_integral;
use crate::error::{Error, Result};
use crate::field::{evaluate, tensor_to_generator, Coupling, FieldMap, FieldTensor};
use crate::geometry::{minkowski_inner, FourVector};
use crate::matrix::Matrix4;

/// Initial four-velocities must satisfy `|⟨u,u⟩ − 1|` below this.
pub const INITIAL_SHELL_TOL: f64 = 1e-9;

/// Integration aborts once `|⟨u,u⟩ − 1|` exceeds this.
pub const ABORT_SHELL_TOL: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParticleState {
    pub tau: f64,
    pub x: FourVector,
    pub u: FourVector,
}

impl ParticleState {
    pub fn new(tau: f64, x: FourVector, u: FourVector) -> Self {
        ParticleState { tau, x, u }
    }

    /// `|⟨u,u⟩ − 1|`.
    pub fn shell_defect(&self) -> f64 {
        (self.u.norm_sqr() - 1.0).abs()
    }

    pub fn is_finite(&self) -> bool {
        self.tau.is_finite() && self.x.is_finite() && self.u.is_finite()
    }

    /// Largest component difference in `x` and `u`.
    pub fn max_diff(&self, other: &ParticleState) -> f64 {
        (self.x - other.x).max_abs().max((self.u - other.u).max_abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stepper {
    Exact,
    Rk4,
    Rk4Renorm,
}

impl Stepper {
    pub fn name(self) -> &'static str {
        match self {
            Stepper::Exact => "EXACT",
            Stepper::Rk4 => "RK4",
            Stepper::Rk4Renorm => "RK4_RENORM",
        }
    }
}

impl fmt::Display for Stepper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stepper {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "EXACT" => Ok(Stepper::Exact),
            "RK4" => Ok(Stepper::Rk4),
            "RK4_RENORM" => Ok(Stepper::Rk4Renorm),
            other => Err(Error::Domain(format!(
                "unknown stepper `{other}` (expected EXACT, RK4 or RK4_RENORM)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub states: Vec<ParticleState>,
    pub stepper: Stepper,
    pub dt: f64,
    pub field_tag: String,
    /// Every `stride`-th state is stored; the final state always is.
    pub stride: usize,
    pub n_steps: usize,
    /// Worst `|⟨u,u⟩ − 1|` over every step, stored or not.
    pub max_shell_defect: f64,
}

impl Trajectory {
    pub fn first(&self) -> &ParticleState {
        &self.states[0]
    }

    pub fn last(&self) -> &ParticleState {
        self.states.last().expect("trajectory holds at least the initial state")
    }
}

/// Step size, step count, stepper and storage stride for [`integrate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationConfig {
    pub dt: f64,
    pub n_steps: usize,
    pub stepper: Stepper,
    pub stride: usize,
}

impl IntegrationConfig {
    pub fn new(dt: f64, n_steps: usize, stepper: Stepper) -> Self {
        IntegrationConfig { dt, n_steps, stepper, stride: 1 }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }
}

/// `du/dτ = Q u` with `Q` built from `f` and `k`.
pub fn lorentz_force(u: &FourVector, f: &FieldTensor, k: Coupling) -> FourVector {
    FourVector(tensor_to_generator(f, k).matrix().mul_vec(u.0))
}

fn check_dt(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("step size must be positive and finite, got {dt}")))
    }
}

/// Precomputed one-step map for a constant field: `u' = E u`, `x' = x + Φ u`.
#[derive(Clone, Copy, Debug)]
pub struct ExactPropagator {
    exp: Matrix4,
    integral: Matrix4,
    dt: f64,
}

impl ExactPropagator {
    pub fn new(f: &FieldTensor, k: Coupling, dt: f64) -> Result<Self> {
        check_dt(dt)?;
        let (exp, integral) = expm_with_integral(&tensor_to_generator(f, k).matrix(), dt);
        Ok(ExactPropagator { exp, integral, dt })
    }

    pub fn step(&self, s: &ParticleState) -> ParticleState {
        ParticleState {
            tau: s.tau + self.dt,
            x: s.x + FourVector(self.integral.mul_vec(s.u.0)),
            u: FourVector(self.exp.mul_vec(s.u.0)),
        }
    }
}

/// Advances one step of length `dt` through a constant field exactly.
pub fn step_exact(s: &ParticleState, f: &FieldTensor, k: Coupling, dt: f64) -> Result<ParticleState> {
    Ok(ExactPropagator::new(f, k, dt)?.step(s))
}

fn velocity_rate(map: &FieldMap, k: Coupling, x: &FourVector, u: &FourVector) -> Result<FourVector> {
    let f = evaluate(map, x)?;
    Ok(lorentz_force(u, &f, k))
}

/// One classical Runge–Kutta step on `(x, u)`. No mass-shell projection.
pub fn step_rk4(s: &ParticleState, map: &FieldMap, k: Coupling, dt: f64) -> Result<ParticleState> {
    check_dt(dt)?;
    let half = 0.5 * dt;

    let k1x = s.u;
    let k1u = velocity_rate(map, k, &s.x, &s.u)?;

    let x2 = s.x + half * k1x;
    let u2 = s.u + half * k1u;
    let k2x = u2;
    let k2u = velocity_rate(map, k, &x2, &u2)?;

    let x3 = s.x + half * k2x;
    let u3 = s.u + half * k2u;
    let k3x = u3;
    let k3u = velocity_rate(map, k, &x3, &u3)?;

    let x4 = s.x + dt * k3x;
    let u4 = s.u + dt * k3u;
    let k4x = u4;
    let k4u = velocity_rate(map, k, &x4, &u4)?;

    let sixth = dt / 6.0;
    Ok(ParticleState {
        tau: s.tau + dt,
        x: s.x + sixth * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        u: s.u + sixth * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
    })
}

/// Projects a future-pointing timelike vector onto the unit mass shell.
pub fn renormalize(u: &FourVector) -> Result<FourVector> {
    let norm = minkowski_inner(u, u);
    if !(norm > 0.0) || !(u.time() > 0.0) {
        return Err(Error::Domain(format!(
            "cannot renormalize {u}: not future-pointing timelike (⟨u,u⟩ = {norm})"
        )));
    }
    Ok(u.scale(1.0 / norm.sqrt()))
}

enum Advance<'a> {
    Exact(Box<ExactPropagator>),
    Rk4 { map: &'a FieldMap, k: Coupling, dt: f64, renorm: bool },
}

impl<'a> Advance<'a> {
    fn new(map: &'a FieldMap, k: Coupling, dt: f64, stepper: Stepper) -> Result<Self> {
        check_dt(dt)?;
        match (stepper, map) {
            (Stepper::Exact, FieldMap::Uniform(f)) => Ok(Advance::Exact(Box::new(ExactPropagator::new(f, k, dt)?))),
            (Stepper::Exact, FieldMap::Varying { name, .. }) => Err(Error::Config(format!(
                "EXACT stepper requires a uniform field, got `{name}`"
            ))),
            (Stepper::Rk4, _) => Ok(Advance::Rk4 { map, k, dt, renorm: false }),
            (Stepper::Rk4Renorm, _) => Ok(Advance::Rk4 { map, k, dt, renorm: true }),
        }
    }

    fn dt(&self) -> f64 {
        match self {
            Advance::Exact(p) => p.dt,
            Advance::Rk4 { dt, .. } => *dt,
        }
    }

    fn step(&self, s: &ParticleState, index: usize) -> Result<ParticleState> {
        let abort = |reason: String| Error::Abort { step: index, tau: s.tau, reason };
        match self {
            Advance::Exact(p) => Ok(p.step(s)),
            Advance::Rk4 { map, k, dt, renorm } => {
                let mut next = step_rk4(s, map, *k, *dt).map_err(|e| match e {
                    Error::Evaluation { .. } => abort(e.to_string()),
                    other => other,
                })?;
                if *renorm {
                    next.u = renormalize(&next.u).map_err(|e| abort(e.to_string()))?;
                }
                Ok(next)
            }
        }
    }
}

/// Runs `n_steps` from `start`, returning stored states and the worst shell
/// defect seen. No check on the starting mass shell.
fn run(start: ParticleState, advance: &Advance<'_>, n_steps: usize, stride: usize) -> Result<(Vec<ParticleState>, f64)> {
    let mut states = Vec::with_capacity(n_steps / stride + 2);
    states.push(start);
    let mut worst = start.shell_defect();
    let mut current = start;
    let dt = advance.dt();
    for i in 1..=n_steps {
        current = advance.step(&current, i)?;
        // proper time from the step count, free of summation drift
        current.tau = start.tau + i as f64 * dt;
        let defect = current.shell_defect();
        if !current.is_finite() || !(defect <= ABORT_SHELL_TOL) {
            return Err(Error::Abort {
                step: i,
                tau: current.tau,
                reason: format!("mass-shell defect {defect:.3e} exceeds {ABORT_SHELL_TOL:e}"),
            });
        }
        worst = worst.max(defect);
        if i % stride == 0 || i == n_steps {
            states.push(current);
        }
    }
    Ok((states, worst))
}

/// Integrates from `(x0, u0)` at τ = 0.
pub fn integrate(
    x0: FourVector,
    u0: FourVector,
    map: &FieldMap,
    k: Coupling,
    config: &IntegrationConfig,
) -> Result<Trajectory> {
    if config.n_steps == 0 {
        return Err(Error::Domain("n_steps must be at least 1".into()));
    }
    if config.stride == 0 {
        return Err(Error::Domain("stride must be at least 1".into()));
    }
    if !x0.is_finite() || !u0.is_finite() {
        return Err(Error::Domain("initial state must be finite".into()));
    }
    let start = ParticleState::new(0.0, x0, u0);
    if !(start.shell_defect() <= INITIAL_SHELL_TOL) {
        return Err(Error::Domain(format!(
            "initial four-velocity is off the mass shell by {:.3e}",
            start.shell_defect()
        )));
    }
    let advance = Advance::new(map, k, config.dt, config.stepper)?;
    let (states, max_shell_defect) = run(start, &advance, config.n_steps, config.stride)?;
    Ok(Trajectory {
        states,
        stepper: config.stepper,
        dt: config.dt,
        field_tag: map.tag().to_string(),
        stride: config.stride,
        n_steps: config.n_steps,
        max_shell_defect,
    })
}

fn steps_for(tau: f64, dt: f64) -> Result<usize> {
    let n = (tau / dt).round();
    if !(n >= 1.0) || (n * dt - tau).abs() > 1e-9 * tau.abs().max(1.0) {
        return Err(Error::Domain(format!(
            "proper time {tau} is not a positive multiple of the step {dt}"
        )));
    }
    Ok(n as usize)
}

/// Difference between flowing `τ₁` then `τ₂` and flowing `τ₁ + τ₂` in one go,
/// with the same stepper and step. Both times must be multiples of `dt`.
pub fn flow_group_defect(
    x0: FourVector,
    u0: FourVector,
    map: &FieldMap,
    k: Coupling,
    (tau1, tau2): (f64, f64),
    dt: f64,
    stepper: Stepper,
) -> Result<f64> {
    let n1 = steps_for(tau1, dt)?;
    let n2 = steps_for(tau2, dt)?;
    let advance = Advance::new(map, k, dt, stepper)?;
    let start = ParticleState::new(0.0, x0, u0);
    let run_last = |from: ParticleState, n: usize| -> Result<ParticleState> {
        let (states, _) = run(from, &advance, n, n)?;
        Ok(*states.last().expect("non-empty"))
    };
    let mid = run_last(start, n1)?;
    let staged = run_last(ParticleState::new(0.0, mid.x, mid.u), n2)?;
    let direct = run_last(start, n1 + n2)?;
    Ok(staged.max_diff(&direct))
}

/// Constant electric field `E₀` along axis 1, starting at rest at the origin.
pub fn oracle_hyperbolic(e0: f64, k: Coupling, tau: f64) -> ParticleState {
    let a = k.0 * e0;
    if a == 0.0 {
        return ParticleState::new(tau, FourVector::new(tau, 0.0, 0.0, 0.0), FourVector::REST);
    }
    let (sh, ch) = ((a * tau).sinh(), (a * tau).cosh());
    ParticleState::new(
        tau,
        FourVector::new(sh / a, (ch - 1.0) / a, 0.0, 0.0),
        FourVector::new(ch, sh, 0.0, 0.0),
    )
}

/// Constant magnetic field `B₀` along axis 3, starting at the origin with
/// spatial four-velocity `(u_perp, 0, 0)`.
///
/// The velocity turns counter-clockwise in the 1–2 plane at proper angular
/// rate `kB₀`, around a centre at `(0, u_perp/(kB₀))`.
pub fn oracle_cyclotron(b0: f64, k: Coupling, u_perp: f64, tau: f64) -> ParticleState {
    let gamma = (1.0 + u_perp * u_perp).sqrt();
    let omega = k.0 * b0;
    if omega == 0.0 {
        return ParticleState::new(
            tau,
            FourVector::new(gamma * tau, u_perp * tau, 0.0, 0.0),
            FourVector::new(gamma, u_perp, 0.0, 0.0),
        );
    }
    let (s, c) = (omega * tau).sin_cos();
    let radius = u_perp / omega;
    ParticleState::new(
        tau,
        FourVector::new(gamma * tau, radius * s, radius * (1.0 - c), 0.0),
        FourVector::new(gamma, u_perp * c, u_perp * s, 0.0),
    )
}
