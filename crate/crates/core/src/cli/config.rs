//! Run configuration: one JSON document, optionally patched by
//! `--set dotted.key=value` overrides, validated before anything runs.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dynamics::{Clock, Coupling, EvolutionConfig, PlaneWave, Scheme};
use crate::lattice::{LatticeParams, ModeLattice};
use crate::minkowski::FourVector;
use crate::state::ParticleState;
use crate::{Error, Result};

/// Environment variable that overrides `output.dir`.
pub const OUT_DIR_ENV: &str = "COVBRACKET_OUT_DIR";

/// Largest lattice half-width accepted from a config.
pub const MAX_N_MAX: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    pub a: f64,
    pub c: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { a: 4.0, c: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Brackets,
    GuptaBleuler,
    PauliJordan,
    Dynamics,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Brackets, Suite::GuptaBleuler, Suite::PauliJordan, Suite::Dynamics];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Brackets => "brackets",
            Suite::GuptaBleuler => "gupta-bleuler",
            Suite::PauliJordan => "pauli-jordan",
            Suite::Dynamics => "dynamics",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DynamicsParams {
    pub m0: f64,
    pub e: f64,
    pub dt: f64,
    pub steps: usize,
    pub scheme: Scheme,
    pub coupling: Coupling,
    pub clock: Clock,
    pub wave: Option<PlaneWave>,
    /// Initial position.
    pub x: [f64; 4],
    /// Initial spatial kinetic momentum `m₀u⃗`.
    pub kinetic: [f64; 3],
    /// Standard deviation of random initial amplitudes (coupled runs).
    pub field_scale: f64,
    /// Relative finite-difference step of the tangent map.
    pub fd_step: f64,
    /// Accepted deviation of the symplectic-check matrix from `η`.
    pub symplectic_tolerance: f64,
    /// Include the symplectic check in `evolve` summaries.
    pub symplectic: bool,
}

impl Default for DynamicsParams {
    fn default() -> Self {
        DynamicsParams {
            m0: 1.0,
            e: 1.0,
            dt: 0.01,
            steps: 1000,
            scheme: Scheme::Rk4,
            coupling: Coupling::ExternalOnly,
            clock: Clock::Lab,
            wave: Some(PlaneWave::along_z(0.1, [1.0, 0.0, 0.0], 1.0, std::f64::consts::FRAC_PI_2)),
            x: [0.0; 4],
            kinetic: [0.0; 3],
            field_scale: 0.0,
            fd_step: 1e-4,
            symplectic_tolerance: 1e-5,
            symplectic: false,
        }
    }
}

impl DynamicsParams {
    pub fn evolution(&self) -> EvolutionConfig {
        EvolutionConfig {
            dt: self.dt,
            steps: self.steps,
            scheme: self.scheme,
            wave: self.wave,
            coupling: self.coupling,
            clock: self.clock,
        }
    }

    /// Initial particle with on-shell kinetic momentum in the initial
    /// external potential.
    pub fn particle(&self, c: f64) -> ParticleState {
        let x = FourVector(self.x);
        let a = self.wave.map(|w| w.potential(&x)).unwrap_or(FourVector::ZERO);
        ParticleState::in_potential(x, self.kinetic, self.m0, self.e, c, &a)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PauliJordanParams {
    pub x0_range: [f64; 2],
    pub r_range: [f64; 2],
    /// Grid points along `x⁰` and along `r`.
    pub points: [usize; 2],
    /// Unit direction of the spatial separation.
    pub direction: [f64; 3],
}

impl Default for PauliJordanParams {
    fn default() -> Self {
        PauliJordanParams {
            x0_range: [-2.0, 2.0],
            r_range: [0.0, 3.0],
            points: [9, 13],
            direction: [1.0, 0.0, 0.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputParams {
    pub dir: PathBuf,
}

impl Default for OutputParams {
    fn default() -> Self {
        OutputParams { dir: PathBuf::from("out") }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub lattice: LatticeParams,
    pub constants: Constants,
    pub suites: Vec<Suite>,
    pub dynamics: DynamicsParams,
    pub pauli_jordan: PauliJordanParams,
    pub output: OutputParams,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lattice: LatticeParams::default(),
            constants: Constants::default(),
            suites: Suite::ALL.to_vec(),
            dynamics: DynamicsParams::default(),
            pauli_jordan: PauliJordanParams::default(),
            output: OutputParams::default(),
            seed: 7,
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl RunConfig {
    /// Parse, apply overrides, and validate.
    pub fn load(text: Option<&str>, overrides: &[String]) -> Result<Self> {
        let mut doc = match text {
            Some(t) => serde_json::from_str::<Value>(t).map_err(|e| bad(format!("malformed config: {e}")))?,
            None => serde_json::to_value(RunConfig::default())?,
        };
        if !doc.is_object() {
            return Err(bad("config must be a JSON object"));
        }
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        let cfg: RunConfig = serde_json::from_value(doc).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let text = match path {
            Some(p) => Some(std::fs::read_to_string(p).map_err(|e| bad(format!("{}: {e}", p.display())))?),
            None => None,
        };
        Self::load(text.as_deref(), overrides)
    }

    pub fn validate(&self) -> Result<()> {
        let l = &self.lattice;
        if !(l.delta_k.is_finite() && l.delta_k > 0.0) {
            return Err(bad(format!("lattice.delta_k must be positive, got {}", l.delta_k)));
        }
        if l.n_max == 0 || l.n_max > MAX_N_MAX {
            return Err(bad(format!("lattice.n_max must be in 1..={MAX_N_MAX}, got {}", l.n_max)));
        }
        let k = &self.constants;
        if !(k.a.is_finite() && k.a != 0.0) {
            return Err(bad("constants.a must be finite and nonzero"));
        }
        if !(k.c.is_finite() && k.c > 0.0) {
            return Err(bad("constants.c must be positive"));
        }
        let d = &self.dynamics;
        if !(d.m0.is_finite() && d.m0 > 0.0) {
            return Err(bad("dynamics.m0 must be positive"));
        }
        if !d.e.is_finite() || !d.field_scale.is_finite() || d.field_scale < 0.0 {
            return Err(bad("dynamics.e and dynamics.field_scale must be finite, field_scale ≥ 0"));
        }
        if !(d.fd_step.is_finite() && d.fd_step > 0.0) || !(d.symplectic_tolerance > 0.0) {
            return Err(bad("dynamics.fd_step and dynamics.symplectic_tolerance must be positive"));
        }
        if d.x.iter().chain(&d.kinetic).any(|v| !v.is_finite()) {
            return Err(bad("dynamics initial state must be finite"));
        }
        d.evolution().validate().map_err(|e| bad(format!("dynamics: {e}")))?;
        let p = &self.pauli_jordan;
        for (name, r) in [("x0_range", p.x0_range), ("r_range", p.r_range)] {
            if !(r[0].is_finite() && r[1].is_finite() && r[0] <= r[1]) {
                return Err(bad(format!("pauli_jordan.{name} must be an ordered finite pair")));
            }
        }
        if p.points.iter().any(|&n| n == 0) {
            return Err(bad("pauli_jordan.points must be positive"));
        }
        let norm = p.direction.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(bad("pauli_jordan.direction must be a nonzero vector"));
        }
        if self.suites.is_empty() {
            return Err(bad("at least one suite must be selected"));
        }
        Ok(())
    }

    pub fn build_lattice(&self) -> Result<Arc<ModeLattice>> {
        Ok(Arc::new(ModeLattice::from_params(&self.lattice)?))
    }

    /// `output.dir`, unless the environment overrides it.
    pub fn out_dir(&self) -> PathBuf {
        match std::env::var_os(OUT_DIR_ENV) {
            Some(v) if !v.is_empty() => PathBuf::from(v),
            _ => self.output.dir.clone(),
        }
    }
}

/// Apply `a.b.c=value`. The value is read as JSON when it parses, and as a
/// string otherwise. Intermediate objects must already exist (or be null);
/// unknown leaf keys are caught later by strict deserialization.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| bad(format!("override `{assignment}` is not of the form key=value")))?;
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(bad(format!("empty key in override `{assignment}`")));
    }
    let value = serde_json::from_str::<Value>(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
    let mut node = doc;
    for (i, key) in keys.iter().enumerate() {
        if node.is_null() {
            *node = Value::Object(Default::default());
        }
        let obj = node
            .as_object_mut()
            .ok_or_else(|| bad(format!("`{}` is not an object", keys[..i].join("."))))?;
        if i + 1 == keys.len() {
            obj.insert(key.to_string(), value);
            return Ok(());
        }
        node = obj.entry(key.to_string()).or_insert(Value::Null);
    }
    unreachable!("override path has at least one key")
}
