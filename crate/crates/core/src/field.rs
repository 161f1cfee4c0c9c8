//! Per-mode field amplitudes and the canonical variables built from them.
//!
//! Amplitudes `𝒜^μ(j)` are stored with contravariant components. The phased
//! amplitude at a point `x` is `𝔞 = 𝒜 e^{−ik·x}`; with `N = √(8πck₀)`
//!
//! ```text
//! q^ν = i(𝔞*^ν − 𝔞^ν)/N,   s^ν = (𝔞*^ν + 𝔞^ν)/N,   π_μν = k_μ s_ν,
//! ```
//!
//! and the inverse is `𝔞 = N(s + iq)/2`. Attaching the phases makes the free
//! Hamilton equations `∂_μq_ν = −π_μν`, `∂_μπ^{μν} = (k·k)q^ν` hold as
//! identities in `x`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::lattice::{LatticeParams, Mode, ModeLattice};
use crate::minkowski::{eta, CVec4, FourVector, Tensor2};
use crate::summation::{ComplexSum, NeumaierSum};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO4: CVec4 = [Complex64::new(0.0, 0.0); 4];

/// `1/(2π)³`, the prefactor of the mode expansion.
pub fn fourier_prefactor() -> f64 {
    1.0 / (2.0 * PI).powi(3)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    pub lattice: Arc<ModeLattice>,
    /// Contravariant amplitudes, one per mode in lattice order.
    pub amp: Vec<CVec4>,
    pub c: f64,
    pub a: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalState {
    pub lattice: Arc<ModeLattice>,
    pub q: Vec<FourVector>,
    /// Rank-one factor of the momentum: `π_μν = k_μ s_ν`.
    pub s: Vec<FourVector>,
    pub phase_x: FourVector,
    pub c: f64,
    pub a: f64,
}

impl FieldState {
    pub fn zero(lattice: Arc<ModeLattice>, c: f64, a: f64) -> Self {
        let n = lattice.len();
        FieldState {
            lattice,
            amp: vec![ZERO4; n],
            c,
            a,
        }
    }

    pub fn new(lattice: Arc<ModeLattice>, amp: Vec<CVec4>, c: f64, a: f64) -> Result<Self> {
        if amp.len() != lattice.len() {
            return Err(Error::InvalidParameter(format!(
                "{} amplitudes for {} modes",
                amp.len(),
                lattice.len()
            )));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
        }
        let state = FieldState { lattice, amp, c, a };
        state.check_finite()?;
        Ok(state)
    }

    /// Independent uniform draws in `[−scale, scale]` for every real and
    /// imaginary part.
    pub fn random<R: Rng + ?Sized>(lattice: Arc<ModeLattice>, c: f64, a: f64, scale: f64, rng: &mut R) -> Self {
        let amp = (0..lattice.len())
            .map(|_| std::array::from_fn(|_| Complex64::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale))))
            .collect();
        FieldState { lattice, amp, c, a }
    }

    pub fn check_finite(&self) -> Result<()> {
        for (j, v) in self.amp.iter().enumerate() {
            if v.iter().any(|z| !z.is_finite()) {
                return Err(Error::NonFinite(format!("amplitude of mode {j}")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.amp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amp.is_empty()
    }

    pub fn mode(&self, j: usize) -> &Mode {
        &self.lattice.modes[j]
    }

    /// Canonical normalization `√(8πck₀)` of mode `j`.
    pub fn norm_factor(&self, j: usize) -> f64 {
        (8.0 * PI * self.c * self.mode(j).k0).sqrt()
    }

    /// Euclidean norm of all amplitude components.
    pub fn norm(&self) -> f64 {
        self.amp
            .iter()
            .flat_map(|v| v.iter())
            .map(|z| z.norm_sqr())
            .collect::<NeumaierSum>()
            .value()
            .sqrt()
    }

    pub fn to_canonical(&self, x: &FourVector) -> CanonicalState {
        to_canonical(self, x)
    }

    pub fn reconstruct_potential(&self, x: &FourVector) -> FourVector {
        reconstruct_potential(self, x)
    }

    pub fn potential_gradient(&self, x: &FourVector) -> Tensor2 {
        potential_gradient(self, x)
    }

    pub fn conjugate_momentum(&self, x: &FourVector) -> Tensor2 {
        conjugate_momentum(self, x)
    }

    pub fn lorentz_condition_residual(&self) -> Vec<f64> {
        lorentz_condition_residual(self)
    }

    pub fn to_document(&self) -> FieldDocument {
        FieldDocument {
            lattice: self.lattice.params(),
            c: self.c,
            a: self.a,
            amplitudes: self.amp.iter().map(|v| v.map(|z| [z.re, z.im])).collect(),
        }
    }

    pub fn from_document(doc: &FieldDocument) -> Result<Self> {
        let lattice = Arc::new(ModeLattice::from_params(&doc.lattice)?);
        let amp = doc
            .amplitudes
            .iter()
            .map(|v| v.map(|[re, im]| Complex64::new(re, im)))
            .collect();
        FieldState::new(lattice, amp, doc.c, doc.a)
    }
}

/// JSON form: lattice parameters plus `[re, im]` pairs in lattice order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDocument {
    pub lattice: LatticeParams,
    pub c: f64,
    pub a: f64,
    pub amplitudes: Vec<[[f64; 2]; 4]>,
}

impl CanonicalState {
    /// `π_μν(j) = k_μ s_ν`, both indices covariant.
    pub fn pi(&self, j: usize, mu: usize, nu: usize) -> f64 {
        self.lattice.modes[j].k_cov(mu) * eta(nu) * self.s[j][nu]
    }

    /// Covariant `q_ν(j)`.
    pub fn q_cov(&self, j: usize, nu: usize) -> f64 {
        eta(nu) * self.q[j][nu]
    }

    /// Max-abs of `π_μν k_λ − π_λν k_μ` over all modes and indices.
    pub fn rank_one_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (j, m) in self.lattice.modes.iter().enumerate() {
            for mu in 0..4 {
                for lam in 0..4 {
                    for nu in 0..4 {
                        let r = self.pi(j, mu, nu) * m.k_cov(lam) - self.pi(j, lam, nu) * m.k_cov(mu);
                        worst = worst.max(r.abs());
                    }
                }
            }
        }
        worst
    }
}

pub fn to_canonical(f: &FieldState, x: &FourVector) -> CanonicalState {
    let mut q = Vec::with_capacity(f.len());
    let mut s = Vec::with_capacity(f.len());
    for (j, m) in f.lattice.modes.iter().enumerate() {
        let n = f.norm_factor(j);
        let phase = Complex64::from_polar(1.0, -m.phase(x));
        let mut qj = FourVector::ZERO;
        let mut sj = FourVector::ZERO;
        for nu in 0..4 {
            let b = f.amp[j][nu] * phase;
            qj[nu] = (I * (b.conj() - b)).re / n;
            sj[nu] = (b.conj() + b).re / n;
        }
        q.push(qj);
        s.push(sj);
    }
    CanonicalState {
        lattice: f.lattice.clone(),
        q,
        s,
        phase_x: *x,
        c: f.c,
        a: f.a,
    }
}

pub fn from_canonical(cs: &CanonicalState, x: &FourVector) -> Result<FieldState> {
    if cs.phase_x != *x {
        return Err(Error::PhaseMismatch {
            expected: cs.phase_x.0,
            requested: x.0,
        });
    }
    let amp = cs
        .lattice
        .modes
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let n = (8.0 * PI * cs.c * m.k0).sqrt();
            let phase = Complex64::from_polar(1.0, m.phase(x));
            std::array::from_fn(|nu| Complex64::new(cs.s[j][nu], cs.q[j][nu]) * (0.5 * n) * phase)
        })
        .collect();
    FieldState::new(cs.lattice.clone(), amp, cs.c, cs.a)
}

/// `A^ν(x) = (2π)⁻³ Σ_j w_j [𝒜^ν(j) e^{−ik·x} + c.c.]`.
pub fn reconstruct_potential(f: &FieldState, x: &FourVector) -> FourVector {
    let mut acc = [NeumaierSum::new(); 4];
    for (m, amp) in f.lattice.modes.iter().zip(&f.amp) {
        let phase = Complex64::from_polar(1.0, -m.phase(x));
        for nu in 0..4 {
            acc[nu].add(2.0 * m.w * (amp[nu] * phase).re);
        }
    }
    let pref = fourier_prefactor();
    FourVector(acc.map(|s| pref * s.value()))
}

/// `g[μ][ν] = ∂_μ A^ν(x)`, differentiated analytically inside the mode sum.
pub fn potential_gradient(f: &FieldState, x: &FourVector) -> Tensor2 {
    let mut acc = [[NeumaierSum::new(); 4]; 4];
    for (m, amp) in f.lattice.modes.iter().zip(&f.amp) {
        let phase = Complex64::from_polar(1.0, -m.phase(x));
        for nu in 0..4 {
            // ∂_μ[𝒜 e^{−ik·x} + c.c.] = 2 k_μ Im(𝒜 e^{−ik·x})
            let im = (amp[nu] * phase).im;
            for mu in 0..4 {
                acc[mu][nu].add(2.0 * m.w * m.k_cov(mu) * im);
            }
        }
    }
    let pref = fourier_prefactor();
    acc.map(|row| row.map(|s| pref * s.value()))
}

/// `θ_μν(x) = −(1/4πc) ∂_μ A_ν(x)`, both indices covariant.
pub fn conjugate_momentum(f: &FieldState, x: &FourVector) -> Tensor2 {
    let g = potential_gradient(f, x);
    let scale = -1.0 / (4.0 * PI * f.c);
    let mut theta = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            theta[mu][nu] = scale * eta(nu) * g[mu][nu];
        }
    }
    theta
}

/// `∂_μ A^μ(x)`.
pub fn divergence(f: &FieldState, x: &FourVector) -> f64 {
    let g = potential_gradient(f, x);
    g[0][0] + g[1][1] + g[2][2] + g[3][3]
}

/// Per mode `|k_μ 𝒜^μ|`.
pub fn lorentz_condition_residual(f: &FieldState) -> Vec<f64> {
    f.lattice
        .modes
        .iter()
        .zip(&f.amp)
        .map(|(m, amp)| {
            (0..4)
                .map(|mu| amp[mu] * m.k_cov(mu))
                .collect::<ComplexSum>()
                .value()
                .norm()
        })
        .collect()
}

fn amp_self_product(amp: &CVec4) -> f64 {
    (0..4).map(|nu| eta(nu) * amp[nu].norm_sqr()).sum()
}

/// Free de Donder-Weyl density in amplitude form,
/// `−(k·k)/(4πck₀) 𝒜*_ν𝒜^ν`. Zero on shell.
pub fn ddw_free_density_amp(f: &FieldState, j: usize) -> f64 {
    ddw_free_density_amp_with_k(f, j, &f.mode(j).k())
}

/// Amplitude form with an arbitrary (possibly off-shell) `k` in the `k·k`
/// factor; the normalization `k₀` stays that of mode `j`.
pub fn ddw_free_density_amp_with_k(f: &FieldState, j: usize, k: &FourVector) -> f64 {
    let k0 = f.mode(j).k0;
    -k.norm_sq() / (4.0 * PI * f.c * k0) * amp_self_product(&f.amp[j])
}

/// Free de Donder-Weyl density in canonical form,
/// `−½ π_μν π^{μν} − ½ (k·k) q_ν q^ν`.
pub fn ddw_free_density(cs: &CanonicalState, j: usize) -> f64 {
    ddw_free_density_with_k(cs, j, &cs.lattice.modes[j].k())
}

/// Canonical form with `π_μν = k_μ s_ν` built from an arbitrary `k`.
pub fn ddw_free_density_with_k(cs: &CanonicalState, j: usize, k: &FourVector) -> f64 {
    let kc = k.lower();
    let mut pi_sq = NeumaierSum::new();
    for mu in 0..4 {
        for nu in 0..4 {
            let pi = kc[mu] * eta(nu) * cs.s[j][nu];
            pi_sq.add(eta(mu) * eta(nu) * pi * pi);
        }
    }
    let qq = cs.q[j].norm_sq();
    -0.5 * pi_sq.value() - 0.5 * k.norm_sq() * qq
}

/// Max-abs residuals of the free Hamilton equations at `x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HamiltonResiduals {
    /// `max |∂_μq_ν + π_μν|`.
    pub q_equation: f64,
    /// `max |∂_μπ^{μν} − (k·k)q^ν|`.
    pub pi_equation: f64,
    /// `max |∂_μπ^{μν}|` (zero on shell).
    pub pi_divergence: f64,
    /// Largest `k₀²|q|` seen, the scale of the second equation.
    pub scale: f64,
}

/// Differentiate the phased `q`, `s` analytically and compare with the
/// free Hamilton equations.
pub fn verify_free_field_hamilton(f: &FieldState, x: &FourVector) -> HamiltonResiduals {
    let cs = to_canonical(f, x);
    let mut out = HamiltonResiduals {
        q_equation: 0.0,
        pi_equation: 0.0,
        pi_divergence: 0.0,
        scale: 0.0,
    };
    for (j, m) in f.lattice.modes.iter().enumerate() {
        let n = f.norm_factor(j);
        let phase = Complex64::from_polar(1.0, -m.phase(x));
        let kk = m.k().norm_sq();
        for nu in 0..4 {
            let b = f.amp[j][nu] * phase;
            // ∂_μ𝔞 = −ik_μ𝔞, ∂_μ𝔞* = +ik_μ𝔞*
            let mut div_pi = 0.0;
            for mu in 0..4 {
                let km = m.k_cov(mu);
                let db = -I * km * b;
                let dbc = I * km * b.conj();
                let dq = (I * (dbc - db)).re / n;
                let ds = (dbc + db).re / n;
                let q_eq = eta(nu) * dq + cs.pi(j, mu, nu);
                out.q_equation = out.q_equation.max(q_eq.abs());
                // π^{μν} = k^μ s^ν, so ∂_μπ^{μν} = k^μ ∂_μ s^ν
                div_pi += eta(mu) * km * ds;
            }
            out.pi_divergence = out.pi_divergence.max(div_pi.abs());
            out.pi_equation = out.pi_equation.max((div_pi - kk * cs.q[j][nu]).abs());
            out.scale = out.scale.max(m.k0 * m.k0 * cs.q[j][nu].abs());
        }
    }
    out
}
