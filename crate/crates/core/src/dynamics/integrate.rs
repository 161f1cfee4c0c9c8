//! Fixed-step RK4 on the real coordinate vector.

use serde::Serialize;

use super::rhs::{field_energy_proxy, Rhs};
use super::{EvolutionConfig, PlaneWave, Scheme};
use crate::minkowski::FourVector;
use crate::state::{ParticleState, SystemState};
use crate::{Error, Result};

/// Substeps per step of [`Scheme::Reference`].
pub const REFERENCE_SUBSTEPS: usize = 100;

/// One recorded sample of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub x: [f64; 4],
    pub p: [f64; 4],
    pub mass_shell_residual: f64,
    pub field_energy_proxy: f64,
}

#[derive(Clone, Debug)]
pub struct Evolution {
    pub rows: Vec<TrajectoryRow>,
    pub final_state: SystemState,
}

impl Evolution {
    /// Largest mass-shell residual seen along the trajectory.
    pub fn max_mass_shell_drift(&self) -> f64 {
        self.rows.iter().map(|r| r.mass_shell_residual).fold(0.0, f64::max)
    }
}

struct Workspace {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            k1: vec![0.0; n],
            k2: vec![0.0; n],
            k3: vec![0.0; n],
            k4: vec![0.0; n],
            tmp: vec![0.0; n],
        }
    }
}

fn rk4_step(rhs: &Rhs<'_>, z: &mut [f64], h: f64, ws: &mut Workspace) -> Result<()> {
    let n = z.len();
    rhs.eval(z, &mut ws.k1)?;
    for i in 0..n {
        ws.tmp[i] = z[i] + 0.5 * h * ws.k1[i];
    }
    rhs.eval(&ws.tmp, &mut ws.k2)?;
    for i in 0..n {
        ws.tmp[i] = z[i] + 0.5 * h * ws.k2[i];
    }
    rhs.eval(&ws.tmp, &mut ws.k3)?;
    for i in 0..n {
        ws.tmp[i] = z[i] + h * ws.k3[i];
    }
    rhs.eval(&ws.tmp, &mut ws.k4)?;
    for i in 0..n {
        z[i] += h / 6.0 * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
    }
    Ok(())
}

/// Advance `z` by `steps` steps of signed size `dt`, calling `observe`
/// after each step. Non-finite values or a degenerate kinetic momentum abort
/// with the index of the failing step.
fn advance<F>(rhs: &Rhs<'_>, z: &mut [f64], dt: f64, steps: usize, scheme: Scheme, mut observe: F) -> Result<()>
where
    F: FnMut(usize, &[f64]),
{
    let (sub, h) = match scheme {
        Scheme::Rk4 => (1, dt),
        Scheme::Reference => (REFERENCE_SUBSTEPS, dt / REFERENCE_SUBSTEPS as f64),
    };
    let mut ws = Workspace::new(z.len());
    for step in 0..steps {
        for _ in 0..sub {
            rk4_step(rhs, z, h, &mut ws).map_err(|e| Error::IntegrationAborted {
                step,
                reason: e.to_string(),
            })?;
        }
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::IntegrationAborted {
                step,
                reason: "non-finite state".into(),
            });
        }
        observe(step + 1, z);
    }
    Ok(())
}

fn row(rhs: &Rhs<'_>, state: &SystemState, t: f64) -> TrajectoryRow {
    let z = state.to_real();
    let (a, _) = rhs.potential(&z);
    TrajectoryRow {
        t,
        x: state.particle.x.0,
        p: state.particle.p.0,
        mass_shell_residual: state.particle.mass_shell_residual(&a, rhs.c),
        field_energy_proxy: field_energy_proxy(&state.field),
    }
}

fn run(state: &SystemState, cfg: &EvolutionConfig, dt: f64, record: bool) -> Result<Evolution> {
    cfg.validate()?;
    state.particle.validate()?;
    state.field.check_finite()?;
    let rhs = Rhs::new(state, cfg);
    let mut z = state.to_real();
    let mut rows = Vec::new();
    let mut scratch = state.clone();
    if record {
        rows.reserve(cfg.steps + 1);
        rows.push(row(&rhs, state, state.time));
    }
    advance(&rhs, &mut z, dt, cfg.steps, cfg.scheme, |k, zk| {
        if record {
            scratch.set_real(zk);
            rows.push(row(&rhs, &scratch, state.time + dt * k as f64));
        }
    })?;
    let mut final_state = state.with_real(&z);
    final_state.time = state.time + dt * cfg.steps as f64;
    Ok(Evolution { rows, final_state })
}

/// Integrate `cfg.steps` steps of size `cfg.dt`, recording every step.
pub fn integrate(state: &SystemState, cfg: &EvolutionConfig) -> Result<Evolution> {
    run(state, cfg, cfg.dt, true)
}

/// Same as [`integrate`] with the step sign reversed.
pub fn integrate_backward(state: &SystemState, cfg: &EvolutionConfig) -> Result<Evolution> {
    run(state, cfg, -cfg.dt, true)
}

/// End state only.
pub fn evolve(state: &SystemState, cfg: &EvolutionConfig) -> Result<SystemState> {
    Ok(run(state, cfg, cfg.dt, false)?.final_state)
}

/// Advance a raw coordinate vector; used by the finite-difference tangent map.
pub(crate) fn evolve_real(template: &SystemState, cfg: &EvolutionConfig, z: &mut [f64]) -> Result<()> {
    let rhs = Rhs::new(template, cfg);
    advance(&rhs, z, cfg.dt, cfg.steps, cfg.scheme, |_, _| {})
}

/// Reference solution for a particle in a prescribed plane wave: the
/// particle is advanced over `duration` with RK4 at `dt/100`.
pub fn plane_wave_oracle(particle: &ParticleState, wave: &PlaneWave, duration: f64, dt: f64, c: f64) -> Result<ParticleState> {
    if !(dt > 0.0 && duration >= 0.0) {
        return Err(Error::InvalidParameter("oracle needs dt > 0 and duration ≥ 0".into()));
    }
    let steps = (duration / dt).round() as usize;
    if ((steps as f64) * dt - duration).abs() > 1e-9 * duration.max(1.0) {
        return Err(Error::InvalidParameter("duration must be a multiple of dt".into()));
    }
    let state = particle_system(*particle, c);
    let cfg = EvolutionConfig {
        dt,
        steps,
        scheme: Scheme::Reference,
        wave: Some(*wave),
        ..EvolutionConfig::default()
    };
    Ok(evolve(&state, &cfg)?.particle)
}

/// Particle with an empty mode lattice.
pub fn particle_system(particle: ParticleState, c: f64) -> SystemState {
    use crate::field::FieldState;
    use crate::lattice::ModeLattice;
    let lattice = std::sync::Arc::new(ModeLattice::empty());
    SystemState::new(particle, FieldState::zero(lattice, c, 1.0), 0.0)
}

/// Number of sign changes of a sampled series, ignoring exact zeros.
pub fn zero_crossings(values: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

/// Kinetic momentum along a recorded trajectory in a plane wave.
pub fn kinetic_series(rows: &[TrajectoryRow], wave: &PlaneWave, m0: f64, e: f64, c: f64) -> Vec<FourVector> {
    rows.iter()
        .map(|r| {
            let ps = ParticleState {
                x: FourVector(r.x),
                p: FourVector(r.p),
                m0,
                e,
            };
            ps.kinetic(&wave.potential(&ps.x), c)
        })
        .collect()
}
