//! The work behind each CLI verb, kept free of process concerns so it can be
//! tested directly.

use std::fmt;
use std::time::Instant;

use crate::dynamics::{integrate, ParticleState, Trajectory};
use crate::error::{Error, Result};
use crate::field::{field_invariants, frame_transform, Coupling, FieldTensor};
use crate::geometry::{boost_matrix, rotation_matrix, Axis, LorentzMatrix};
use crate::scenario::Scenario;

/// Relative tolerance for the invariant check printed by `transform`.
pub const TRANSFORM_INVARIANT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationSummary {
    pub name: String,
    pub stepper: String,
    pub n_steps: usize,
    pub final_state: ParticleState,
    pub max_shell_defect: f64,
    /// Spatial distance between the final and initial positions.
    pub displacement: f64,
    pub wall_clock_secs: f64,
    pub steps_per_sec: f64,
}

impl fmt::Display for SimulationSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.final_state;
        writeln!(f, "scenario: {}", self.name)?;
        writeln!(f, "stepper: {}", self.stepper)?;
        writeln!(f, "steps: {}", self.n_steps)?;
        writeln!(f, "final tau: {:.16e}", s.tau)?;
        writeln!(f, "final x: {:.16e}, {:.16e}, {:.16e}, {:.16e}", s.x[0], s.x[1], s.x[2], s.x[3])?;
        writeln!(f, "final u: {:.16e}, {:.16e}, {:.16e}, {:.16e}", s.u[0], s.u[1], s.u[2], s.u[3])?;
        writeln!(f, "max shell defect: {:.3e}", self.max_shell_defect)?;
        writeln!(f, "spatial displacement: {:.16e}", self.displacement)?;
        writeln!(f, "wall clock: {:.6} s", self.wall_clock_secs)?;
        writeln!(f, "throughput: {:.0} steps/s", self.steps_per_sec)
    }
}

pub fn simulate(scenario: &Scenario) -> Result<(Trajectory, SimulationSummary)> {
    let map = scenario.field_map();
    let start = Instant::now();
    let traj = integrate(scenario.x0(), scenario.u0(), &map, scenario.coupling(), &scenario.config())?;
    let elapsed = start.elapsed().as_secs_f64();

    let first = traj.first();
    let last = *traj.last();
    let displacement = (1..4)
        .map(|i| (last.x[i] - first.x[i]).powi(2))
        .sum::<f64>()
        .sqrt();
    let summary = SimulationSummary {
        name: scenario.name.clone(),
        stepper: traj.stepper.to_string(),
        n_steps: traj.n_steps,
        final_state: last,
        max_shell_defect: traj.max_shell_defect,
        displacement,
        wall_clock_secs: elapsed,
        steps_per_sec: if elapsed > 0.0 { traj.n_steps as f64 / elapsed } else { f64::INFINITY },
    };
    Ok((traj, summary))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Transformation {
    Identity,
    Boost { axis: Axis, rapidity: f64 },
    Rotation { axis: Axis, angle: f64 },
}

impl Transformation {
    pub fn matrix(&self) -> LorentzMatrix {
        match *self {
            Transformation::Identity => LorentzMatrix::IDENTITY,
            Transformation::Boost { axis, rapidity } => boost_matrix(axis, rapidity),
            Transformation::Rotation { axis, angle } => rotation_matrix(axis, angle),
        }
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transformation::Identity => f.write_str("identity"),
            Transformation::Boost { axis, rapidity } => write!(f, "boost along axis {axis}, rapidity {rapidity}"),
            Transformation::Rotation { axis, angle } => write!(f, "rotation about axis {axis}, angle {angle} rad"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransformReport {
    pub transformation: Transformation,
    pub before: FieldTensor,
    pub after: FieldTensor,
    pub invariants_before: (f64, f64),
    pub invariants_after: (f64, f64),
}

impl TransformReport {
    pub fn invariants_preserved(&self) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= TRANSFORM_INVARIANT_TOL * a.abs().max(b.abs()).max(1.0);
        close(self.invariants_before.0, self.invariants_after.0)
            && close(self.invariants_before.1, self.invariants_after.1)
    }
}

impl fmt::Display for TransformReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |x: &[f64; 3]| format!("{:.16e}, {:.16e}, {:.16e}", x[0], x[1], x[2]);
        writeln!(f, "transformation: {}", self.transformation)?;
        writeln!(f, "E  = {}", v(&self.before.e))?;
        writeln!(f, "B  = {}", v(&self.before.b))?;
        writeln!(f, "E' = {}", v(&self.after.e))?;
        writeln!(f, "B' = {}", v(&self.after.b))?;
        writeln!(
            f,
            "E.B:     before {:.16e}  after {:.16e}",
            self.invariants_before.0, self.invariants_after.0
        )?;
        writeln!(
            f,
            "E2 - B2: before {:.16e}  after {:.16e}",
            self.invariants_before.1, self.invariants_after.1
        )?;
        writeln!(
            f,
            "invariants: {}",
            if self.invariants_preserved() { "PASS" } else { "FAIL" }
        )
    }
}

pub fn transform(fields: &FieldTensor, k: Coupling, transformation: Transformation) -> Result<TransformReport> {
    if k.0 == 0.0 {
        return Err(Error::Domain("coupling k must be nonzero".into()));
    }
    let after = frame_transform(fields, k, &transformation.matrix())?;
    Ok(TransformReport {
        transformation,
        before: *fields,
        after,
        invariants_before: field_invariants(fields),
        invariants_after: field_invariants(&after),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    #[test]
    fn identity_echoes_fields() {
        let f = FieldTensor::new([0.1, 0.2, 0.3], [-0.4, 0.5, -0.6]);
        let r = transform(&f, Coupling(1.0), Transformation::Identity).unwrap();
        assert_eq!(r.after, f);
        assert!(r.invariants_preserved());
    }

    #[test]
    fn perpendicular_boost_keeps_invariants() {
        let f = FieldTensor::new([2.0, 0.0, 0.0], [0.0; 3]);
        let r = transform(&f, Coupling(1.0), Transformation::Boost { axis: Axis::Z, rapidity: 1.1 }).unwrap();
        assert!(r.invariants_preserved());
        assert!(r.to_string().contains("invariants: PASS"));
    }

    #[test]
    fn full_turn_leaves_fields() {
        let f = FieldTensor::new([0.3, -0.7, 0.2], [0.9, 0.1, -0.5]);
        let r = transform(
            &f,
            Coupling(1.0),
            Transformation::Rotation { axis: Axis::Y, angle: 2.0 * std::f64::consts::PI },
        )
        .unwrap();
        for (a, b) in r.after.e.iter().chain(&r.after.b).zip(f.e.iter().chain(&f.b)) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn free_particle_summary() {
        let s = parse_scenario(
            "name = free\nk = 1\nE = 0,0,0\nB = 0,0,0\nfield_map = uniform\nx0 = 0,0,0,0\n\
             u0_spatial = 0.75,0,0\ndt = 0.5\nn_steps = 100\nstepper = EXACT\n",
        )
        .unwrap();
        let (traj, summary) = simulate(&s).unwrap();
        assert_eq!(traj.states.len(), 101);
        assert_eq!(summary.max_shell_defect, 0.0);
        assert!((summary.displacement - 37.5).abs() < 1e-12);
    }
}
