//! Evolution of the charged particle and the mode amplitudes.
//!
//! Sign chain, starting from `p_μ = −m₀u̇_μ − (e/c)A_μ` and the particle
//! Hamiltonian `−(1/2m₀)(p + eA/c)²`:
//!
//! * kinetic momentum `π = −(p + eA/c) = m₀u̇`;
//! * proper time: `dx^μ/dτ = π^μ/m₀`, `dp_μ/dτ = −(e/c) ∂_μA_ν u̇^ν`;
//! * eliminating `p` gives `m₀ü_μ = (e/c)(∂_μA_ν − ∂_νA_μ)u̇^ν = (e/c)F_μν u̇^ν`,
//!   the Lorentz force for `F_μν = ∂_μA_ν − ∂_νA_μ`;
//! * lab time `t` with `x⁰ = ct`: `dτ/dt = m₀c/π⁰`, so `dx^μ/dt = cπ^μ/π⁰`
//!   and `dp_μ/dt = −(e/c) ∂_μA_ν dx^ν/dt`.
//!
//! Amplitudes are driven by differentiating the retarded source,
//! `d𝒜^ν/dt = 4πie (dx^ν/dt) e^{ik·x}`; without charge they are constant and
//! all time dependence of the free field sits in the phases of the mode
//! expansion.
//!
//! With this system `E = −c p⁰ + E_f`, `E_f = −(64π⁴)⁻¹ Σ_j Δk³ 𝒜*_ν𝒜^ν`, is
//! an exact invariant when no external wave is applied.

mod integrate;
mod rhs;
mod tangent;

use serde::{Deserialize, Serialize};

use crate::minkowski::{FourVector, Tensor2};
use crate::{Error, Result};

pub use crate::field::{verify_free_field_hamilton, HamiltonResiduals};
pub use crate::state::{ParticleState, SystemState};
pub use integrate::*;
pub use rhs::*;
pub use tangent::*;

/// Prescribed plane wave `A^ν(x) = ε^ν cos(k·x + φ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneWave {
    /// Contravariant amplitude `ε^ν`.
    pub amplitude: FourVector,
    /// Contravariant wavevector; should be null.
    pub k: FourVector,
    #[serde(default)]
    pub phase: f64,
}

impl PlaneWave {
    /// Linearly polarized wave travelling along `+z` with frequency `omega`.
    pub fn along_z(amplitude: f64, polarization: [f64; 3], omega: f64, phase: f64) -> Self {
        PlaneWave {
            amplitude: FourVector::from_parts(0.0, polarization) * amplitude,
            k: FourVector::new(omega, 0.0, 0.0, omega),
            phase,
        }
    }

    pub fn phase_at(&self, x: &FourVector) -> f64 {
        self.k.dot(x) + self.phase
    }

    pub fn potential(&self, x: &FourVector) -> FourVector {
        self.amplitude * self.phase_at(x).cos()
    }

    /// `g[μ][ν] = ∂_μ A^ν`.
    pub fn gradient(&self, x: &FourVector) -> Tensor2 {
        let s = -self.phase_at(x).sin();
        let kc = self.k.lower();
        std::array::from_fn(|mu| std::array::from_fn(|nu| kc[mu] * self.amplitude[nu] * s))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude.is_finite() && self.k.is_finite() && self.phase.is_finite()) {
            return Err(Error::InvalidParameter("plane wave has non-finite entries".into()));
        }
        if self.k[0] <= 0.0 || self.k.norm_sq().abs() > 1e-12 * self.k[0] * self.k[0] {
            return Err(Error::InvalidParameter("plane-wave k must be future-directed and null".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    Rk4,
    /// RK4 with 100 substeps per step.
    Reference,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// The particle feels only the prescribed wave; amplitudes are spectators.
    #[default]
    ExternalOnly,
    /// The particle also feels the mode field, which it sources.
    Coupled,
}

/// Evolution parameter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clock {
    /// Lab time `t = x⁰/c`.
    #[default]
    Lab,
    /// Particle proper time `τ`.
    Proper,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub steps: usize,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default)]
    pub wave: Option<PlaneWave>,
    #[serde(default)]
    pub coupling: Coupling,
    #[serde(default)]
    pub clock: Clock,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            dt: 1e-2,
            steps: 100,
            scheme: Scheme::Rk4,
            wave: None,
            coupling: Coupling::ExternalOnly,
            clock: Clock::Lab,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if let Some(w) = &self.wave {
            w.validate()?;
        }
        Ok(())
    }

    pub fn duration(&self) -> f64 {
        self.dt * self.steps as f64
    }

    pub fn with_steps(mut self, dt: f64, steps: usize) -> Self {
        self.dt = dt;
        self.steps = steps;
        self
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::FieldState;
    use crate::lattice::ModeLattice;

    fn wave() -> PlaneWave {
        PlaneWave::along_z(0.1, [1.0, 0.0, 0.0], 1.0, 0.3)
    }

    #[test]
    fn plane_wave_gradient_matches_finite_difference() {
        let w = wave();
        let x = FourVector::new(0.4, -0.2, 0.7, 1.1);
        let g = w.gradient(&x);
        let h = 1e-6;
        for mu in 0..4 {
            let mut xp = x;
            let mut xm = x;
            xp[mu] += h;
            xm[mu] -= h;
            let d = (w.potential(&xp) - w.potential(&xm)) * (1.0 / (2.0 * h));
            for nu in 0..4 {
                assert!((d[nu] - g[mu][nu]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn neutral_charge_leaves_amplitudes_constant() {
        let lat = Arc::new(ModeLattice::build(1.0, 1).unwrap());
        let mut rng = rand::rngs::mock::StepRng::new(3, 7);
        let field = FieldState::random(lat, 1.0, 1.0, 1.0, &mut rng);
        let particle = ParticleState::free(FourVector::ZERO, [0.2, 0.0, 0.1], 1.0, 0.0, 1.0);
        let state = SystemState::new(particle, field, 0.0);
        let cfg = EvolutionConfig {
            coupling: Coupling::Coupled,
            ..Default::default()
        };
        let d = coupled_rhs(&state, &cfg).unwrap();
        assert!(d[8..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn static_particle_sources_only_the_time_component() {
        let lat = Arc::new(ModeLattice::build(1.0, 1).unwrap());
        let n = lat.len();
        let particle = ParticleState::free(FourVector::ZERO, [0.0; 3], 1.0, 0.5, 1.0);
        let state = SystemState::new(particle, FieldState::zero(lat, 1.0, 1.0), 0.0);
        let cfg = EvolutionConfig {
            coupling: Coupling::Coupled,
            ..Default::default()
        };
        let d = coupled_rhs(&state, &cfg).unwrap();
        for j in 0..n {
            let src = (d[8 + 4 * j].powi(2) + d[8 + 4 * n + 4 * j].powi(2)).sqrt();
            assert!((src - 4.0 * std::f64::consts::PI * 0.5).abs() < 1e-12);
            for nu in 1..4 {
                assert_eq!(d[8 + 4 * j + nu], 0.0);
                assert_eq!(d[8 + 4 * n + 4 * j + nu], 0.0);
            }
        }
    }

    #[test]
    fn past_directed_kinetic_momentum_is_rejected() {
        let p = ParticleState {
            p: FourVector::new(1.0, 0.0, 0.0, 0.0),
            ..Default::default()
        };
        assert!(matches!(particle_rhs(&p, &NoPotential, 1.0), Err(Error::Superluminal(_))));
        let state = particle_system(p, 1.0);
        let err = integrate(&state, &EvolutionConfig::default()).unwrap_err();
        assert!(matches!(err, Error::IntegrationAborted { step: 0, .. }));
    }

    #[test]
    fn zero_duration_tangent_is_identity() {
        let state = particle_system(ParticleState::default(), 1.0);
        let cfg = EvolutionConfig::default().with_steps(0.1, 0);
        let t = tangent_map(&state, &cfg, &TangentOptions::default()).unwrap();
        assert_eq!(t.matrix(), &nalgebra::DMatrix::identity(8, 8));
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = EvolutionConfig {
            wave: Some(wave()),
            coupling: Coupling::Coupled,
            clock: Clock::Proper,
            scheme: Scheme::Reference,
            ..Default::default()
        };
        let s = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<EvolutionConfig>(&s).unwrap(), cfg);
        assert!(EvolutionConfig::default().with_steps(-1.0, 3).validate().is_err());
    }
}
