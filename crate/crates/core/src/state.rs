//! Joint particle + field phase-space point.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::field::FieldState;
use crate::lattice::ModeLattice;
use crate::minkowski::FourVector;
use crate::{Error, Result};

/// Charged point particle.
///
/// `p` holds contravariant components of the canonical momentum
/// `p^μ = −m₀u^μ − (e/c)A^μ`, so the kinetic momentum is
/// `π_kin = −(p + eA/c) = m₀u` and a particle at rest in zero field has
/// `p = (−m₀c, 0, 0, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParticleState {
    pub x: FourVector,
    pub p: FourVector,
    pub m0: f64,
    pub e: f64,
}

impl ParticleState {
    /// Particle at `x` with spatial velocity-like momentum `m₀u⃗ = kinetic`
    /// in a vanishing potential.
    pub fn free(x: FourVector, kinetic: [f64; 3], m0: f64, e: f64, c: f64) -> Self {
        let pk = [kinetic[0], kinetic[1], kinetic[2]];
        let e_over_c = (m0 * m0 * c * c + pk[0] * pk[0] + pk[1] * pk[1] + pk[2] * pk[2]).sqrt();
        ParticleState {
            x,
            p: -FourVector::from_parts(e_over_c, pk),
            m0,
            e,
        }
    }

    /// Particle with prescribed kinetic spatial momentum sitting in a
    /// potential `a_at_x` (contravariant); `p` is chosen so that the kinetic
    /// momentum is on shell.
    pub fn in_potential(x: FourVector, kinetic: [f64; 3], m0: f64, e: f64, c: f64, a_at_x: &FourVector) -> Self {
        let mut s = Self::free(x, kinetic, m0, e, c);
        s.p = s.p - *a_at_x * (e / c);
        s
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m0.is_finite() && self.m0 > 0.0) {
            return Err(Error::InvalidParameter(format!("rest mass must be positive, got {}", self.m0)));
        }
        if !(self.e.is_finite() && self.x.is_finite() && self.p.is_finite()) {
            return Err(Error::NonFinite("particle state".into()));
        }
        Ok(())
    }

    /// `π_kin = −(p + eA/c)` for the potential at the particle.
    pub fn kinetic(&self, a_at_x: &FourVector, c: f64) -> FourVector {
        -(self.p + *a_at_x * (self.e / c))
    }

    /// `|π_kin·π_kin − m₀²c²| / (m₀²c²)`.
    pub fn mass_shell_residual(&self, a_at_x: &FourVector, c: f64) -> f64 {
        let k = self.kinetic(a_at_x, c);
        let target = self.m0 * self.m0 * c * c;
        (k.norm_sq() - target).abs() / target
    }
}

impl Default for ParticleState {
    fn default() -> Self {
        ParticleState {
            x: FourVector::ZERO,
            p: FourVector::new(-1.0, 0.0, 0.0, 0.0),
            m0: 1.0,
            e: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemState {
    pub particle: ParticleState,
    pub field: FieldState,
    pub time: f64,
}

impl SystemState {
    pub fn new(particle: ParticleState, field: FieldState, time: f64) -> Self {
        SystemState { particle, field, time }
    }

    /// Field-only state with a default neutral particle.
    pub fn field_only(field: FieldState) -> Self {
        let c = field.c;
        SystemState {
            particle: ParticleState {
                p: FourVector::new(-c, 0.0, 0.0, 0.0),
                ..ParticleState::default()
            },
            field,
            time: 0.0,
        }
    }

    pub fn lattice(&self) -> &Arc<ModeLattice> {
        &self.field.lattice
    }

    pub fn n_modes(&self) -> usize {
        self.field.len()
    }

    /// Length of the real coordinate vector `(x, p, Re𝒜, Im𝒜)`.
    pub fn real_dim(&self) -> usize {
        8 + 8 * self.n_modes()
    }

    /// Flatten to `(x⁰..x³, p⁰..p³, Re𝒜, Im𝒜)`; amplitude blocks are
    /// mode-major with the Lorentz index fastest.
    pub fn to_real(&self) -> Vec<f64> {
        let n = self.n_modes();
        let mut z = Vec::with_capacity(8 + 8 * n);
        z.extend_from_slice(&self.particle.x.0);
        z.extend_from_slice(&self.particle.p.0);
        z.extend(self.field.amp.iter().flat_map(|v| v.iter().map(|c| c.re)));
        z.extend(self.field.amp.iter().flat_map(|v| v.iter().map(|c| c.im)));
        z
    }

    /// Overwrite coordinates from a vector produced by [`Self::to_real`].
    pub fn set_real(&mut self, z: &[f64]) {
        let n = self.n_modes();
        assert_eq!(z.len(), 8 + 8 * n, "coordinate vector length");
        self.particle.x.0.copy_from_slice(&z[0..4]);
        self.particle.p.0.copy_from_slice(&z[4..8]);
        for (j, v) in self.field.amp.iter_mut().enumerate() {
            for mu in 0..4 {
                v[mu].re = z[8 + 4 * j + mu];
                v[mu].im = z[8 + 4 * n + 4 * j + mu];
            }
        }
    }

    pub fn with_real(&self, z: &[f64]) -> Self {
        let mut s = self.clone();
        s.set_real(z);
        s
    }
}
