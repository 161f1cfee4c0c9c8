//! Right-hand sides of the particle and coupled equations of motion.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Clock, Coupling, EvolutionConfig, PlaneWave};
use crate::field::{fourier_prefactor, FieldState};
use crate::lattice::ModeLattice;
use crate::minkowski::{eta, FourVector, Tensor2};
use crate::state::{ParticleState, SystemState};
use crate::summation::NeumaierSum;
use crate::{Error, Result};

/// Supplies `A^ν(x)` and `∂_μA^ν(x)` to the particle equations.
pub trait PotentialProvider {
    fn potential(&self, x: &FourVector) -> FourVector;
    /// `g[μ][ν] = ∂_μ A^ν`.
    fn gradient(&self, x: &FourVector) -> Tensor2;
}

impl PotentialProvider for PlaneWave {
    fn potential(&self, x: &FourVector) -> FourVector {
        PlaneWave::potential(self, x)
    }
    fn gradient(&self, x: &FourVector) -> Tensor2 {
        PlaneWave::gradient(self, x)
    }
}

impl PotentialProvider for FieldState {
    fn potential(&self, x: &FourVector) -> FourVector {
        self.reconstruct_potential(x)
    }
    fn gradient(&self, x: &FourVector) -> Tensor2 {
        self.potential_gradient(x)
    }
}

/// Spatially and temporally constant potential (pure gauge).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantPotential(pub FourVector);

impl PotentialProvider for ConstantPotential {
    fn potential(&self, _x: &FourVector) -> FourVector {
        self.0
    }
    fn gradient(&self, _x: &FourVector) -> Tensor2 {
        [[0.0; 4]; 4]
    }
}

/// No potential at all.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NoPotential;

impl PotentialProvider for NoPotential {
    fn potential(&self, _x: &FourVector) -> FourVector {
        FourVector::ZERO
    }
    fn gradient(&self, _x: &FourVector) -> Tensor2 {
        [[0.0; 4]; 4]
    }
}

/// `(dx/dλ, dp/dλ)` for a given potential and gradient at `x`, where `λ`
/// is lab time or proper time. Also returns `dx^ν/dλ` for reuse.
fn particle_derivative(
    p: &FourVector,
    m0: f64,
    e: f64,
    c: f64,
    a: &FourVector,
    g: &Tensor2,
    clock: Clock,
) -> Result<(FourVector, FourVector)> {
    let kin = -(*p + *a * (e / c));
    let xdot = match clock {
        Clock::Lab => {
            if !(kin[0] > 0.0) {
                return Err(Error::Superluminal(kin[0]));
            }
            kin * (c / kin[0])
        }
        Clock::Proper => kin * (1.0 / m0),
    };
    let mut pdot = FourVector::ZERO;
    for mu in 0..4 {
        let mut s = 0.0;
        for nu in 0..4 {
            s += g[mu][nu] * eta(nu) * xdot[nu];
        }
        // raise the index of dp_μ/dλ
        pdot[mu] = -eta(mu) * (e / c) * s;
    }
    Ok((xdot, pdot))
}

/// Lab-time derivative of `(x, p)` of a particle in the potential `provider`.
pub fn particle_rhs<P: PotentialProvider + ?Sized>(
    state: &ParticleState,
    provider: &P,
    c: f64,
) -> Result<(FourVector, FourVector)> {
    particle_rhs_with_clock(state, provider, c, Clock::Lab)
}

pub fn particle_rhs_with_clock<P: PotentialProvider + ?Sized>(
    state: &ParticleState,
    provider: &P,
    c: f64,
    clock: Clock,
) -> Result<(FourVector, FourVector)> {
    let a = provider.potential(&state.x);
    let g = provider.gradient(&state.x);
    particle_derivative(&state.p, state.m0, state.e, c, &a, &g, clock)
}

/// Mode-sum potential and gradient read directly from the real coordinate
/// vector, avoiding a `FieldState` rebuild inside the integrator.
fn mode_potential(lattice: &ModeLattice, z: &[f64], x: &FourVector) -> (FourVector, Tensor2) {
    let n = lattice.len();
    let mut pot = [NeumaierSum::new(); 4];
    let mut grad = [[NeumaierSum::new(); 4]; 4];
    for (j, m) in lattice.modes.iter().enumerate() {
        let ph = Complex64::from_polar(1.0, -m.phase(x));
        for nu in 0..4 {
            let amp = Complex64::new(z[8 + 4 * j + nu], z[8 + 4 * n + 4 * j + nu]);
            let v = amp * ph;
            pot[nu].add(2.0 * m.w * v.re);
            for mu in 0..4 {
                grad[mu][nu].add(2.0 * m.w * m.k_cov(mu) * v.im);
            }
        }
    }
    let c = fourier_prefactor();
    (
        FourVector(pot.map(|s| c * s.value())),
        grad.map(|row| row.map(|s| c * s.value())),
    )
}

/// Static data shared by every evaluation of the coupled right-hand side.
#[derive(Clone, Debug)]
pub struct Rhs<'a> {
    pub lattice: &'a ModeLattice,
    pub c: f64,
    pub m0: f64,
    pub e: f64,
    pub wave: Option<PlaneWave>,
    pub coupling: Coupling,
    pub clock: Clock,
}

impl<'a> Rhs<'a> {
    pub fn new(state: &'a SystemState, cfg: &EvolutionConfig) -> Self {
        Rhs {
            lattice: &state.field.lattice,
            c: state.field.c,
            m0: state.particle.m0,
            e: state.particle.e,
            wave: cfg.wave,
            coupling: cfg.coupling,
            clock: cfg.clock,
        }
    }

    /// Total potential and gradient acting on the particle.
    pub fn potential(&self, z: &[f64]) -> (FourVector, Tensor2) {
        let x = FourVector([z[0], z[1], z[2], z[3]]);
        let (mut a, mut g) = match self.coupling {
            Coupling::Coupled => mode_potential(self.lattice, z, &x),
            Coupling::ExternalOnly => (FourVector::ZERO, [[0.0; 4]; 4]),
        };
        if let Some(w) = &self.wave {
            a += w.potential(&x);
            let gw = w.gradient(&x);
            for mu in 0..4 {
                for nu in 0..4 {
                    g[mu][nu] += gw[mu][nu];
                }
            }
        }
        (a, g)
    }

    /// Write `dz/dλ` into `out`.
    pub fn eval(&self, z: &[f64], out: &mut [f64]) -> Result<()> {
        let n = self.lattice.len();
        debug_assert_eq!(z.len(), 8 + 8 * n);
        let p = FourVector([z[4], z[5], z[6], z[7]]);
        let (a, g) = self.potential(z);
        let (xdot, pdot) = particle_derivative(&p, self.m0, self.e, self.c, &a, &g, self.clock)?;
        out[0..4].copy_from_slice(&xdot.0);
        out[4..8].copy_from_slice(&pdot.0);
        out[8..].iter_mut().for_each(|v| *v = 0.0);
        if self.coupling == Coupling::Coupled && self.e != 0.0 {
            let x = FourVector([z[0], z[1], z[2], z[3]]);
            for (j, m) in self.lattice.modes.iter().enumerate() {
                // d𝒜^ν = 4πi e ẋ^ν e^{ik·x}
                let src = Complex64::new(0.0, 4.0 * PI * self.e) * Complex64::from_polar(1.0, m.phase(&x));
                for nu in 0..4 {
                    let d = src * xdot[nu];
                    out[8 + 4 * j + nu] = d.re;
                    out[8 + 4 * n + 4 * j + nu] = d.im;
                }
            }
        }
        Ok(())
    }
}

/// Derivative of the full real coordinate vector of `state` under `cfg`.
pub fn coupled_rhs(state: &SystemState, cfg: &EvolutionConfig) -> Result<Vec<f64>> {
    let z = state.to_real();
    let mut out = vec![0.0; z.len()];
    Rhs::new(state, cfg).eval(&z, &mut out)?;
    Ok(out)
}

/// `E_f = −(64π⁴)⁻¹ Σ_j Δk³ 𝒜*_ν(j) 𝒜^ν(j)`; together with `−c p⁰` it is
/// conserved by the coupled system in the absence of an external wave.
pub fn field_energy_proxy(f: &FieldState) -> f64 {
    let dk3 = f.lattice.cell_volume();
    let mut acc = NeumaierSum::new();
    for amp in &f.amp {
        for nu in 0..4 {
            acc.add(eta(nu) * amp[nu].norm_sqr());
        }
    }
    -dk3 * acc.value() / (64.0 * PI.powi(4))
}

/// `−c p⁰ + E_f`.
pub fn total_energy(state: &SystemState) -> f64 {
    -state.field.c * state.particle.p[0] + field_energy_proxy(&state.field)
}
