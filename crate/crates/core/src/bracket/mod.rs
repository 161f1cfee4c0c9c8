//! Covariant Poisson brackets on the mode lattice.
//!
//! Lattice conventions: `Θ(k₀)δ(k·k)δ⁴(k−k') ↔ δ_jj'/w_j` and
//! `δF/δ𝒜(k_j) ↔ (1/w_j) ∂F/∂𝒜_j`. With these the amplitude bracket is
//!
//! ```text
//! {F,G}_𝒜𝒜* = a Σ_j (k₀²/w_j) Σ_μ η_μμ [∂F/∂𝒜^μ ∂G/∂𝒜*^μ − ∂G/∂𝒜^μ ∂F/∂𝒜*^μ]
//! ```
//!
//! and the `(q, π)` bracket with kernel `V_μ = a k₀ k_μ` equals
//! `4πic {F,G}_𝒜𝒜*`. Both are computed here, the latter by two independent
//! routes that are cross-checked on every call.

mod algebraic;
mod oracle;
mod pauli_jordan;
mod tangent;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::field::FieldState;
use crate::lattice::ModeLattice;
use crate::minkowski::{eta, FourVector};
use crate::observable::{Gradient, Observable};
use crate::state::SystemState;
use crate::summation::ComplexSum;
use crate::{Error, Result};

pub use algebraic::*;
pub use oracle::*;
pub use pauli_jordan::*;
pub use tangent::*;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative tolerance for agreement of the two `(q, π)` bracket routes.
pub const QPI_CONSISTENCY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct BracketConfig {
    pub a: f64,
    pub c: f64,
    pub lattice: Arc<ModeLattice>,
    /// Point at which `q`, `π` carry their plane-wave phases in the
    /// second `(q, π)` route. The bracket does not depend on it.
    pub phase_point: FourVector,
}

impl BracketConfig {
    pub fn new(a: f64, c: f64, lattice: Arc<ModeLattice>) -> Result<Self> {
        if !(a.is_finite() && a != 0.0) {
            return Err(Error::InvalidParameter(format!("bracket constant a must be nonzero, got {a}")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
        }
        Ok(BracketConfig {
            a,
            c,
            lattice,
            phase_point: FourVector::ZERO,
        })
    }

    pub fn for_field(f: &FieldState) -> Result<Self> {
        Self::new(f.a, f.c, f.lattice.clone())
    }

    pub fn with_phase_point(mut self, x: FourVector) -> Self {
        self.phase_point = x;
        self
    }

    /// Amplitude pair-bracket weight `a k₀²/w_j`.
    pub fn amp_weight(&self, j: usize) -> f64 {
        let m = &self.lattice.modes[j];
        self.a * m.k0 * m.k0 / m.w
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketKind {
    Amp,
    Qpi,
    Particle,
    Joint,
    NonEqualTime,
    Polarized,
    Reduced,
    Standard,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BracketReport {
    pub kind: BracketKind,
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub field_part: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub particle_part: Complex64,
    pub consistency_residual: f64,
}

pub(crate) fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// Value of the two-route `(q, π)` bracket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QpiBracket {
    /// Route (i): `4πic {F,G}_𝒜𝒜*`.
    pub value: Complex64,
    /// Route (ii): quadrature of the `(q, π)` form through the chain rule.
    pub direct: Complex64,
    /// `|value − direct|` relative to the summed term magnitudes.
    pub residual: f64,
}

fn check_gradients(ga: &Gradient, gb: &Gradient, cfg: &BracketConfig) -> Result<()> {
    let n = cfg.lattice.len();
    if ga.n_modes() != n || gb.n_modes() != n {
        return Err(Error::IndexOutOfRange {
            what: "gradient modes",
            index: ga.n_modes().max(gb.n_modes()),
            limit: n,
        });
    }
    if !ga.is_finite() || !gb.is_finite() {
        return Err(Error::NonFinite("observable gradient".into()));
    }
    Ok(())
}

/// Amplitude bracket from gradients. Returns the value and the summed
/// magnitude of the individual products, a scale for relative comparisons
/// that is not reduced by cancellations.
pub fn amp_from_gradients(ga: &Gradient, gb: &Gradient, cfg: &BracketConfig) -> Result<(Complex64, f64)> {
    check_gradients(ga, gb, cfg)?;
    let mut acc = ComplexSum::new();
    let mut scale = 0.0;
    for j in 0..cfg.lattice.len() {
        let kappa = cfg.amp_weight(j);
        let mut inner = Complex64::new(0.0, 0.0);
        let mut size = 0.0;
        for mu in 0..4 {
            let (t1, t2) = (ga.amp[j][mu] * gb.amp_conj[j][mu], gb.amp[j][mu] * ga.amp_conj[j][mu]);
            inner += eta(mu) * (t1 - t2);
            size += t1.norm() + t2.norm();
        }
        scale += kappa.abs() * size;
        acc.add(kappa * inner);
    }
    Ok((acc.value(), scale))
}

/// Second `(q, π)` route. Wirtinger derivatives are moved to the phased
/// amplitudes `𝔞 = 𝒜e^{−ik·x}`, then to `q^ν` and `s^ν` through
/// `𝔞 = N(s + iq)/2`, and `π_μν = k_μ s_ν` is differentiated with the
/// convention `s_ν = π_0ν/k_0`. The bracket is the lattice quadrature
/// `Σ_j (1/w_j) V_μ [∂F/∂q^ν ∂G/∂π_μν − ∂G/∂q^ν ∂F/∂π_μν]`.
pub fn qpi_direct_from_gradients(ga: &Gradient, gb: &Gradient, cfg: &BracketConfig) -> Result<(Complex64, f64)> {
    check_gradients(ga, gb, cfg)?;
    let x = &cfg.phase_point;
    let mut acc = ComplexSum::new();
    let mut scale = 0.0;
    for (j, m) in cfg.lattice.modes.iter().enumerate() {
        let n = (8.0 * PI * cfg.c * m.k0).sqrt();
        let ph = Complex64::from_polar(1.0, m.phase(x));
        let v: [f64; 4] = std::array::from_fn(|mu| cfg.a * m.k0 * m.k_cov(mu));
        let split = |g: &Gradient| {
            let mut dq = [Complex64::new(0.0, 0.0); 4];
            let mut dpi = [[Complex64::new(0.0, 0.0); 4]; 4];
            for nu in 0..4 {
                let fa = ph * g.amp[j][nu];
                let fac = ph.conj() * g.amp_conj[j][nu];
                dq[nu] = I * (0.5 * n) * (fa - fac);
                let ds = (0.5 * n) * (fa + fac);
                dpi[0][nu] = eta(nu) * ds / m.k_cov(0);
            }
            (dq, dpi)
        };
        let (fq, fpi) = split(ga);
        let (gq, gpi) = split(gb);
        let mut inner = Complex64::new(0.0, 0.0);
        let mut size = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                let (t1, t2) = (fq[nu] * gpi[mu][nu], gq[nu] * fpi[mu][nu]);
                inner += v[mu] * (t1 - t2);
                size += v[mu].abs() * (t1.norm() + t2.norm());
            }
        }
        scale += size / m.w;
        acc.add(inner / m.w);
    }
    Ok((acc.value(), scale))
}

/// Both `(q, π)` routes and their consistency residual.
pub fn qpi_from_gradients(ga: &Gradient, gb: &Gradient, cfg: &BracketConfig) -> Result<QpiBracket> {
    let (amp, amp_scale) = amp_from_gradients(ga, gb, cfg)?;
    let factor = 4.0 * PI * cfg.c * I;
    let value = factor * amp;
    let (direct, direct_scale) = qpi_direct_from_gradients(ga, gb, cfg)?;
    let scale = direct_scale.max(factor.norm() * amp_scale);
    let diff = (value - direct).norm();
    let residual = if diff == 0.0 { 0.0 } else { diff / scale.max(f64::MIN_POSITIVE) };
    Ok(QpiBracket {
        value,
        direct,
        residual,
    })
}

/// `Σ_μ η_μμ [∂F/∂x^μ ∂G/∂p^μ − ∂G/∂x^μ ∂F/∂p^μ]`.
pub fn particle_from_gradients(ga: &Gradient, gb: &Gradient) -> Complex64 {
    let mut acc = ComplexSum::new();
    for mu in 0..4 {
        acc.add(eta(mu) * (ga.x[mu] * gb.p[mu] - gb.x[mu] * ga.p[mu]));
    }
    acc.value()
}

/// Joint bracket from gradients; errors if the two `(q, π)` routes disagree.
pub fn joint_from_gradients(ga: &Gradient, gb: &Gradient, cfg: &BracketConfig) -> Result<BracketReport> {
    let qpi = qpi_from_gradients(ga, gb, cfg)?;
    if qpi.residual > QPI_CONSISTENCY_TOL {
        return Err(Error::Inconsistent {
            residual: qpi.residual,
            tolerance: QPI_CONSISTENCY_TOL,
        });
    }
    let particle = particle_from_gradients(ga, gb);
    Ok(BracketReport {
        kind: BracketKind::Joint,
        value: qpi.value + particle,
        field_part: qpi.value,
        particle_part: particle,
        consistency_residual: qpi.residual,
    })
}

fn gradients<A: Observable + ?Sized, B: Observable + ?Sized>(
    a: &A,
    b: &B,
    state: &SystemState,
) -> Result<(Gradient, Gradient)> {
    Ok((a.gradient(state)?, b.gradient(state)?))
}

/// `{A, B}_𝒜𝒜*` at `state`.
pub fn bracket_amp<A, B>(a: &A, b: &B, state: &SystemState, cfg: &BracketConfig) -> Result<Complex64>
where
    A: Observable + ?Sized,
    B: Observable + ?Sized,
{
    let (ga, gb) = gradients(a, b, state)?;
    Ok(amp_from_gradients(&ga, &gb, cfg)?.0)
}

/// `{A, B}_qπ` at `state`, returning route (i) after checking it against
/// route (ii).
pub fn bracket_qpi<A, B>(a: &A, b: &B, state: &SystemState, cfg: &BracketConfig) -> Result<Complex64>
where
    A: Observable + ?Sized,
    B: Observable + ?Sized,
{
    let r = bracket_qpi_checked(a, b, state, cfg)?;
    if r.residual > QPI_CONSISTENCY_TOL {
        return Err(Error::Inconsistent {
            residual: r.residual,
            tolerance: QPI_CONSISTENCY_TOL,
        });
    }
    Ok(r.value)
}

/// Both routes of the `(q, π)` bracket, without failing on disagreement.
pub fn bracket_qpi_checked<A, B>(a: &A, b: &B, state: &SystemState, cfg: &BracketConfig) -> Result<QpiBracket>
where
    A: Observable + ?Sized,
    B: Observable + ?Sized,
{
    let (ga, gb) = gradients(a, b, state)?;
    qpi_from_gradients(&ga, &gb, cfg)
}

/// Particle bracket at `state`.
pub fn bracket_particle<A, B>(a: &A, b: &B, state: &SystemState) -> Result<Complex64>
where
    A: Observable + ?Sized,
    B: Observable + ?Sized,
{
    let (ga, gb) = gradients(a, b, state)?;
    if !ga.is_finite() || !gb.is_finite() {
        return Err(Error::NonFinite("observable gradient".into()));
    }
    Ok(particle_from_gradients(&ga, &gb))
}

/// Joint field + particle bracket at `state`.
pub fn bracket_joint<A, B>(a: &A, b: &B, state: &SystemState, cfg: &BracketConfig) -> Result<BracketReport>
where
    A: Observable + ?Sized,
    B: Observable + ?Sized,
{
    let (ga, gb) = gradients(a, b, state)?;
    joint_from_gradients(&ga, &gb, cfg)
}
