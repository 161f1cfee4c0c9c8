//! Position-space field brackets: the chain-rule evaluation through the
//! `(q, π)` bracket, and the independent mode-sum oracle.

use std::f64::consts::PI;

use super::{free_field_tangent, bracket_nonequal_time, qpi_from_gradients, BracketConfig};
use crate::field::FieldState;
use crate::minkowski::{eta, FourVector};
use crate::observable::{conjugate_momentum, potential_cov, Gradient};
use crate::state::SystemState;
use crate::{Error, Result};

/// Rank-3 array indexed `[μ][λ][ν]`.
pub type Tensor3 = [[[f64; 4]; 4]; 4];

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaBracketComparison {
    /// `{A_μ(x), θ_λν(x')}` from the chain rule through the `(q, π)` bracket.
    pub chain: Tensor3,
    /// The same from the `K_λ` mode sum.
    pub oracle: Tensor3,
    /// Largest imaginary part seen in the chain-rule values.
    pub chain_imag_max: f64,
    /// Largest route (i)/(ii) residual of the `(q, π)` bracket.
    pub consistency_residual: f64,
}

impl ThetaBracketComparison {
    /// Max-abs difference between the two evaluations, relative to the
    /// largest entry.
    pub fn relative_difference(&self) -> f64 {
        let mut diff = 0.0_f64;
        let mut scale = 0.0_f64;
        for mu in 0..4 {
            for lam in 0..4 {
                for nu in 0..4 {
                    diff = diff.max((self.chain[mu][lam][nu] - self.oracle[mu][lam][nu]).abs());
                    scale = scale.max(self.oracle[mu][lam][nu].abs());
                }
            }
        }
        if diff == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }
}

fn zero_state(cfg: &BracketConfig) -> SystemState {
    SystemState::field_only(FieldState::zero(cfg.lattice.clone(), cfg.c, cfg.a))
}

/// Equal-time `{A_μ(x), θ_λν(x')}` by both routes.
///
/// The oracle evaluates
///
/// ```text
/// ¼ [δ²(0)/8π³] η_μν K_λ,
/// K_λ = (1/4π³) Σ_j w_j k₀⁻¹ [V_λ sin(k⃗·x⃗) sin(k⃗·x⃗') + (k·V/k·k) k_λ cos(k⃗·x⃗) cos(k⃗·x⃗')]
/// ```
///
/// with `V_λ = a k₀ k_λ`, the ratio `k·V/k·k` cancelled to `a k₀` before
/// going on shell, and `δ²(0)` realized per mode as `(Δk³/w_j)²`, the
/// square of the lattice image of `Θ(k₀)δ(k·k)δ⁴(0)` in units of the cell.
pub fn field_theta_bracket_oracle(x: &FourVector, xp: &FourVector, cfg: &BracketConfig) -> Result<ThetaBracketComparison> {
    if x[0] != xp[0] {
        return Err(Error::InvalidParameter("the K-sum oracle is an equal-time relation".into()));
    }
    let state = zero_state(cfg);
    let ga: Vec<Gradient> = (0..4)
        .map(|mu| potential_cov(&cfg.lattice, x, mu).gradient(&state))
        .collect::<Result<_>>()?;
    let mut chain = [[[0.0; 4]; 4]; 4];
    let mut imag: f64 = 0.0;
    let mut residual: f64 = 0.0;
    for lam in 0..4 {
        for nu in 0..4 {
            let gt = conjugate_momentum(&cfg.lattice, cfg.c, xp, lam, nu).gradient(&state)?;
            for mu in 0..4 {
                let b = qpi_from_gradients(&ga[mu], &gt, cfg)?;
                chain[mu][lam][nu] = b.value.re;
                imag = imag.max(b.value.im.abs());
                residual = residual.max(b.residual);
            }
        }
    }

    let cell = cfg.lattice.cell_volume();
    let pref = 0.25 / (8.0 * PI.powi(3)) / (4.0 * PI.powi(3));
    let mut k_sum = [0.0; 4];
    for lam in 0..4 {
        let mut acc = crate::summation::NeumaierSum::new();
        for m in &cfg.lattice.modes {
            let sx = m.k_spatial[0] * x[1] + m.k_spatial[1] * x[2] + m.k_spatial[2] * x[3];
            let sxp = m.k_spatial[0] * xp[1] + m.k_spatial[1] * xp[2] + m.k_spatial[2] * xp[3];
            let v_lam = cfg.a * m.k0 * m.k_cov(lam);
            let kv_over_kk = cfg.a * m.k0;
            let d2 = (cell / m.w).powi(2);
            let bracket = v_lam * sx.sin() * sxp.sin() + kv_over_kk * m.k_cov(lam) * sx.cos() * sxp.cos();
            acc.add(d2 * m.w / m.k0 * bracket);
        }
        k_sum[lam] = pref * acc.value();
    }
    let mut oracle = [[[0.0; 4]; 4]; 4];
    for mu in 0..4 {
        for lam in 0..4 {
            oracle[mu][lam][mu] = eta(mu) * k_sum[lam];
        }
    }
    Ok(ThetaBracketComparison {
        chain,
        oracle,
        chain_imag_max: imag,
        consistency_residual: residual,
    })
}

/// Free-field brackets between two space-time points, taken at time `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonEqualTimeBrackets {
    /// `{A_μ(x), A_ν(x')}(s)`, `[μ][ν]`.
    pub aa: [[f64; 4]; 4],
    /// `{A_μ(x), θ_λν(x')}(s)`, `[μ][λ][ν]`.
    pub a_theta: Tensor3,
    pub imag_max: f64,
    pub consistency_residual: f64,
}

/// Non-equal-time brackets of the free field by tangent-map pullback.
///
/// The state at time `s` is the set of instantaneous amplitudes
/// `𝔞(s) = 𝒜e^{−ik₀s}`; the potential and momentum at `(t, x⃗)` are linear
/// functionals of `𝔞(t)`, and the flow `s → t` is the exact per-mode
/// rotation of [`free_field_tangent`].
pub fn nonequal_time_field_brackets(x: &FourVector, xp: &FourVector, s: f64, cfg: &BracketConfig) -> Result<NonEqualTimeBrackets> {
    let state = zero_state(cfg);
    let flow_x = free_field_tangent(&cfg.lattice, x[0] - s)?;
    let flow_xp = free_field_tangent(&cfg.lattice, xp[0] - s)?;
    let slice_x = FourVector::from_parts(0.0, x.spatial());
    let slice_xp = FourVector::from_parts(0.0, xp.spatial());

    let a_x: Vec<_> = (0..4).map(|mu| potential_cov(&cfg.lattice, &slice_x, mu)).collect();
    let mut out = NonEqualTimeBrackets {
        aa: [[0.0; 4]; 4],
        a_theta: [[[0.0; 4]; 4]; 4],
        imag_max: 0.0,
        consistency_residual: 0.0,
    };
    let record = |v: num_complex::Complex64, r: f64, out: &mut NonEqualTimeBrackets| {
        out.imag_max = out.imag_max.max(v.im.abs());
        out.consistency_residual = out.consistency_residual.max(r);
        v.re
    };
    for nu in 0..4 {
        let b = potential_cov(&cfg.lattice, &slice_xp, nu);
        for mu in 0..4 {
            let r = bracket_nonequal_time(&a_x[mu], (&state, &flow_x), &b, (&state, &flow_xp), cfg)?;
            out.aa[mu][nu] = record(r.value, r.consistency_residual, &mut out);
        }
        for lam in 0..4 {
            let th = conjugate_momentum(&cfg.lattice, cfg.c, &slice_xp, lam, nu);
            for mu in 0..4 {
                let r = bracket_nonequal_time(&a_x[mu], (&state, &flow_x), &th, (&state, &flow_xp), cfg)?;
                out.a_theta[mu][lam][nu] = record(r.value, r.consistency_residual, &mut out);
            }
        }
    }
    Ok(out)
}

/// Least-squares constant `C` in `values ≈ C·kernel` and the relative
/// residual `‖values − C·kernel‖ / ‖values‖`.
pub fn fit_constant(values: &[f64], kernel: &[f64]) -> (f64, f64) {
    let vk: f64 = values.iter().zip(kernel).map(|(v, k)| v * k).sum();
    let kk: f64 = kernel.iter().map(|k| k * k).sum();
    let vv: f64 = values.iter().map(|v| v * v).sum();
    let c = vk / kk;
    let rr: f64 = values.iter().zip(kernel).map(|(v, k)| (v - c * k).powi(2)).sum();
    (c, if vv == 0.0 { rr.sqrt() } else { (rr / vv).sqrt() })
}
