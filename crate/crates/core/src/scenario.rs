//! Scenario files and trajectory tables.
//!
//! A scenario is UTF-8 text with one `key = value` per line and `#`
//! comments. Vectors are comma-separated. Example:
//!
//! ```text
//! name = cyclotron
//! k = 1
//! E = 0, 0, 0
//! B = 0, 0, 1
//! field_map = uniform
//! x0 = 0, 0, 0, 0
//! u0_spatial = 0.5, 0, 0
//! dt = 0.01
//! n_steps = 1000
//! stepper = EXACT
//! output_stride = 1
//! ```
//!
//! `field_map` is `uniform`, `b3_gradient(g)` or `e1_gradient(g)`; the
//! gradient maps add `g·x¹` to `B₃` or `E₁` on top of `E` and `B`.
//! `output_stride` is optional and defaults to 1.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use crate::dynamics::{IntegrationConfig, Stepper, Trajectory};
use crate::error::{Error, Result};
use crate::field::{Coupling, FieldMap, FieldTensor};
use crate::geometry::FourVector;

pub const CSV_HEADER: &str = "tau,t,x,y,z,u0,u1,u2,u3,shell_defect";

const KEYS: [&str; 11] = [
    "name",
    "k",
    "E",
    "B",
    "field_map",
    "x0",
    "u0_spatial",
    "dt",
    "n_steps",
    "stepper",
    "output_stride",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldMapSpec {
    Uniform,
    B3Gradient(f64),
    E1Gradient(f64),
}

impl fmt::Display for FieldMapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldMapSpec::Uniform => f.write_str("uniform"),
            FieldMapSpec::B3Gradient(g) => write!(f, "b3_gradient({g})"),
            FieldMapSpec::E1Gradient(g) => write!(f, "e1_gradient({g})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub k: f64,
    pub e: [f64; 3],
    pub b: [f64; 3],
    pub field_map: FieldMapSpec,
    pub x0: [f64; 4],
    pub u0_spatial: [f64; 3],
    pub dt: f64,
    pub n_steps: usize,
    pub stepper: Stepper,
    pub output_stride: usize,
}

impl Scenario {
    pub fn coupling(&self) -> Coupling {
        Coupling(self.k)
    }

    pub fn x0(&self) -> FourVector {
        FourVector(self.x0)
    }

    /// Initial four-velocity with `u⁰ = sqrt(1 + |u|²)`.
    pub fn u0(&self) -> FourVector {
        FourVector::on_shell(self.u0_spatial)
    }

    pub fn field_map(&self) -> FieldMap {
        let base = FieldTensor::new(self.e, self.b);
        match self.field_map {
            FieldMapSpec::Uniform => FieldMap::Uniform(base),
            FieldMapSpec::B3Gradient(g) => FieldMap::b3_gradient(base, g),
            FieldMapSpec::E1Gradient(g) => FieldMap::e1_gradient(base, g),
        }
    }

    pub fn config(&self) -> IntegrationConfig {
        IntegrationConfig::new(self.dt, self.n_steps, self.stepper).with_stride(self.output_stride)
    }

    /// Canonical text form; `parse_scenario(&s.render())` returns `s`.
    pub fn render(&self) -> String {
        let v3 = |v: &[f64; 3]| format!("{}, {}, {}", v[0], v[1], v[2]);
        let x = &self.x0;
        format!(
            "name = {}\nk = {}\nE = {}\nB = {}\nfield_map = {}\nx0 = {}, {}, {}, {}\nu0_spatial = {}\ndt = {}\nn_steps = {}\nstepper = {}\noutput_stride = {}\n",
            self.name,
            self.k,
            v3(&self.e),
            v3(&self.b),
            self.field_map,
            x[0],
            x[1],
            x[2],
            x[3],
            v3(&self.u0_spatial),
            self.dt,
            self.n_steps,
            self.stepper,
            self.output_stride,
        )
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(parse_err("dt", "dt must be positive"));
        }
        if self.n_steps == 0 {
            return Err(parse_err("n_steps", "n_steps must be at least 1"));
        }
        if self.output_stride == 0 {
            return Err(parse_err("output_stride", "output_stride must be at least 1"));
        }
        if self.stepper == Stepper::Exact && self.field_map != FieldMapSpec::Uniform {
            return Err(Error::Config(format!(
                "EXACT stepper requires field_map = uniform, got {}",
                self.field_map
            )));
        }
        Ok(())
    }
}

fn parse_err(key: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        key: key.to_string(),
        message: message.into(),
    }
}

fn parse_real(key: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| parse_err(key, format!("expected a real number, got `{}`", raw.trim())))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_err(key, "value must be finite"))
    }
}

fn parse_vec<const N: usize>(key: &str, raw: &str) -> Result<[f64; N]> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != N {
        return Err(parse_err(key, format!("expected {N} comma-separated components, got {}", parts.len())));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = parse_real(key, part)?;
    }
    Ok(out)
}

fn parse_count(key: &str, raw: &str) -> Result<usize> {
    raw.trim()
        .parse()
        .map_err(|_| parse_err(key, format!("expected a non-negative integer, got `{}`", raw.trim())))
}

fn parse_field_map(raw: &str) -> Result<FieldMapSpec> {
    let raw = raw.trim();
    if raw == "uniform" {
        return Ok(FieldMapSpec::Uniform);
    }
    let (name, rest) = raw
        .split_once('(')
        .ok_or_else(|| parse_err("field_map", format!("unknown field map `{raw}`")))?;
    let arg = rest
        .strip_suffix(')')
        .ok_or_else(|| parse_err("field_map", "missing closing parenthesis"))?;
    let g = parse_real("field_map", arg)?;
    match name.trim() {
        "b3_gradient" => Ok(FieldMapSpec::B3Gradient(g)),
        "e1_gradient" => Ok(FieldMapSpec::E1Gradient(g)),
        other => Err(parse_err("field_map", format!("unknown field map `{other}`"))),
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut entries: BTreeMap<&str, &str> = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            parse_err(content, format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(parse_err(key, "unknown key"));
        }
        if entries.insert(key, value.trim()).is_some() {
            return Err(parse_err(key, "duplicate key"));
        }
    }
    let get = |key: &str| entries.get(key).copied().ok_or_else(|| parse_err(key, "missing key"));

    let name = get("name")?.to_string();
    if name.is_empty() {
        return Err(parse_err("name", "name must not be empty"));
    }
    let scenario = Scenario {
        name,
        k: parse_real("k", get("k")?)?,
        e: parse_vec("E", get("E")?)?,
        b: parse_vec("B", get("B")?)?,
        field_map: parse_field_map(get("field_map")?)?,
        x0: parse_vec("x0", get("x0")?)?,
        u0_spatial: parse_vec("u0_spatial", get("u0_spatial")?)?,
        dt: parse_real("dt", get("dt")?)?,
        n_steps: parse_count("n_steps", get("n_steps")?)?,
        stepper: get("stepper")?
            .parse()
            .map_err(|e: Error| parse_err("stepper", e.to_string()))?,
        output_stride: match entries.get("output_stride") {
            Some(raw) => parse_count("output_stride", raw)?,
            None => 1,
        },
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Writes the trajectory table: header plus one row per stored state,
/// every value with 17 significant digits.
pub fn write_csv<W: Write>(out: &mut W, traj: &Trajectory) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for s in &traj.states {
        let [t, x, y, z] = s.x.0;
        let [u0, u1, u2, u3] = s.u.0;
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            s.tau,
            t,
            x,
            y,
            z,
            u0,
            u1,
            u2,
            u3,
            s.shell_defect()
        )?;
    }
    Ok(())
}
