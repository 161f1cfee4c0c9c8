//! Polarization decomposition, the Lorentz constraint, and reduction of the
//! amplitude bracket to its two transverse polarizations.
//!
//! Components along the tetrad: `𝒜₀ = 𝒜⁰` and `𝒜ᵢ = eᵢ·𝒜⃗` for `i = 1, 2, 3`,
//! so that `𝒜 = 𝒜₀ε⁰ + Σᵢ 𝒜ᵢ(0, eᵢ)`. Since `k·ε^{1,2} = 0` and
//! `k·ε³ = −k₀`, the Lorentz condition per mode reads `𝒜₀ − 𝒜₃ = 0`.

use num_complex::Complex64;
use serde::Serialize;

use crate::bracket::{amp_from_gradients, BracketConfig};
use crate::field::FieldState;
use crate::lattice::ModeLattice;
use crate::minkowski::CVec4;
use crate::observable::{Gradient, Observable};
use crate::state::SystemState;
use crate::summation::ComplexSum;
use crate::{Error, Result};

/// Per-mode tetrad coefficients `(𝒜₀, 𝒜₁, 𝒜₂, 𝒜₃)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizationComponents(pub Vec<CVec4>);

/// Relative tolerance of the constraint-compatibility check.
pub const COMPATIBILITY_TOL: f64 = 1e-12;

fn project(e: [f64; 3], v: &CVec4) -> Complex64 {
    v[1] * e[0] + v[2] * e[1] + v[3] * e[2]
}

pub fn decompose(f: &FieldState) -> PolarizationComponents {
    PolarizationComponents(
        f.lattice
            .modes
            .iter()
            .zip(&f.amp)
            .map(|(m, v)| [v[0], project(m.e(1), v), project(m.e(2), v), project(m.e(3), v)])
            .collect(),
    )
}

/// Contravariant amplitudes from tetrad coefficients.
pub fn recompose(pc: &PolarizationComponents, lattice: &ModeLattice) -> Vec<CVec4> {
    lattice
        .modes
        .iter()
        .zip(&pc.0)
        .map(|(m, c)| {
            let mut v = [c[0], Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
            for i in 1..4 {
                let e = m.e(i);
                for a in 0..3 {
                    v[a + 1] += c[i] * e[a];
                }
            }
            v
        })
        .collect()
}

/// `|𝒜₀ − 𝒜₃|` per mode.
pub fn constraint_residual(pc: &PolarizationComponents) -> Vec<f64> {
    pc.0.iter().map(|c| (c[0] - c[3]).norm()).collect()
}

/// Replace `𝒜₀` and `𝒜₃` by their average, leaving transverse parts alone.
pub fn project_constraint(f: &FieldState) -> FieldState {
    let mut pc = decompose(f);
    for c in &mut pc.0 {
        let avg = 0.5 * (c[0] + c[3]);
        c[0] = avg;
        c[3] = avg;
    }
    FieldState {
        amp: recompose(&pc, &f.lattice),
        ..f.clone()
    }
}

/// Gradient with respect to tetrad coefficients:
/// `∂F/∂𝒜₀ = ∂F/∂𝒜⁰`, `∂F/∂𝒜ᵢ = Σ_a eᵢ^a ∂F/∂𝒜^a`, and the same for the
/// conjugates.
pub fn polarization_gradient(g: &Gradient, lattice: &ModeLattice) -> (Vec<CVec4>, Vec<CVec4>) {
    let conv = |rows: &[CVec4]| -> Vec<CVec4> {
        lattice
            .modes
            .iter()
            .zip(rows)
            .map(|(m, v)| [v[0], project(m.e(1), v), project(m.e(2), v), project(m.e(3), v)])
            .collect()
    };
    (conv(&g.amp), conv(&g.amp_conj))
}

fn pair_term(fa: &CVec4, fc: &CVec4, ga: &CVec4, gc: &CVec4, i: usize) -> Complex64 {
    fa[i] * gc[i] - ga[i] * fc[i]
}

struct PolarizedGradients {
    fa: Vec<CVec4>,
    fc: Vec<CVec4>,
    ga: Vec<CVec4>,
    gc: Vec<CVec4>,
}

fn polarized_gradients<A, B>(a: &A, b: &B, state: &SystemState, cfg: &BracketConfig) -> Result<PolarizedGradients>
where
    A: Observable + ?Sized,
    B: Observable + ?Sized,
{
    let (fa, fc) = polarization_gradient(&a.gradient(state)?, &cfg.lattice);
    let (ga, gc) = polarization_gradient(&b.gradient(state)?, &cfg.lattice);
    Ok(PolarizedGradients { fa, fc, ga, gc })
}

/// Amplitude bracket written in tetrad components,
/// `a Σ_j (k₀²/w_j) ([0] − Σ_{i=1..3} [i])` with
/// `[i] = ∂A/∂𝒜ᵢ ∂B/∂𝒜ᵢ* − ∂B/∂𝒜ᵢ ∂A/∂𝒜ᵢ*`.
pub fn bracket_polarized<A, B>(a: &A, b: &B, state: &SystemState, cfg: &BracketConfig) -> Result<Complex64>
where
    A: Observable + ?Sized,
    B: Observable + ?Sized,
{
    let p = polarized_gradients(a, b, state, cfg)?;
    let mut acc = ComplexSum::new();
    for j in 0..cfg.lattice.len() {
        let t = |i| pair_term(&p.fa[j], &p.fc[j], &p.ga[j], &p.gc[j], i);
        acc.add(cfg.amp_weight(j) * (t(0) - t(1) - t(2) - t(3)));
    }
    Ok(acc.value())
}

/// Largest `|∂F/∂𝒜₀ − ∂F/∂𝒜₃| + |∂F/∂𝒜₀* − ∂F/∂𝒜₃*|` relative to the
/// gradient scale, and the mode where it occurs.
pub fn compatibility_residual(g: &Gradient, lattice: &ModeLattice) -> (f64, usize) {
    let (pa, pc) = polarization_gradient(g, lattice);
    let scale = pa
        .iter()
        .chain(pc.iter())
        .flat_map(|v| v.iter())
        .fold(0.0_f64, |m, z| m.max(z.norm()));
    let mut worst = (0.0, 0);
    for j in 0..pa.len() {
        let r = (pa[j][0] - pa[j][3]).norm() + (pc[j][0] - pc[j][3]).norm();
        let r = if scale > 0.0 { r / scale } else { 0.0 };
        if r > worst.0 {
            worst = (r, j);
        }
    }
    worst
}

/// Transverse-only bracket `−a Σ_j (k₀²/w_j) Σ_{λ=1,2} [λ]`, without the
/// compatibility check.
pub fn bracket_reduced_unchecked<A, B>(a: &A, b: &B, state: &SystemState, cfg: &BracketConfig) -> Result<Complex64>
where
    A: Observable + ?Sized,
    B: Observable + ?Sized,
{
    let p = polarized_gradients(a, b, state, cfg)?;
    let mut acc = ComplexSum::new();
    for j in 0..cfg.lattice.len() {
        let t = |i| pair_term(&p.fa[j], &p.fc[j], &p.ga[j], &p.gc[j], i);
        acc.add(-cfg.amp_weight(j) * (t(1) + t(2)));
    }
    Ok(acc.value())
}

/// Transverse-only bracket; rejects observables whose scalar and
/// longitudinal partials differ, since the cancellation of those two
/// contributions is exactly what the reduction relies on.
pub fn bracket_reduced<A, B>(a: &A, b: &B, state: &SystemState, cfg: &BracketConfig) -> Result<Complex64>
where
    A: Observable + ?Sized,
    B: Observable + ?Sized,
{
    for o in [a.gradient(state)?, b.gradient(state)?] {
        let (r, mode) = compatibility_residual(&o, &cfg.lattice);
        if r > COMPATIBILITY_TOL {
            return Err(Error::NotConstraintCompatible { mode, residual: r });
        }
    }
    bracket_reduced_unchecked(a, b, state, cfg)
}

/// `𝒜_λ(k⃗) = 𝒜_λ(k)/√(2k₀)` for `λ = 1, 2`.
pub fn to_3d_amplitudes(pc: &PolarizationComponents, lattice: &ModeLattice) -> Vec<[Complex64; 2]> {
    lattice
        .modes
        .iter()
        .zip(&pc.0)
        .map(|(m, c)| {
            let s = (2.0 * m.k0).sqrt();
            [c[1] / s, c[2] / s]
        })
        .collect()
}

/// Inverse of [`to_3d_amplitudes`] on the transverse components.
pub fn from_3d_amplitudes(t: &[[Complex64; 2]], lattice: &ModeLattice) -> Vec<[Complex64; 2]> {
    lattice
        .modes
        .iter()
        .zip(t)
        .map(|(m, c)| {
            let s = (2.0 * m.k0).sqrt();
            [c[0] * s, c[1] * s]
        })
        .collect()
}

/// Standard transverse bracket in three-dimensional amplitudes,
/// `(a/4) Σ_j (1/Δk³) Σ_{λ=1,2} [∂A/∂𝒜_λ(k⃗) ∂B/∂𝒜*_λ(k⃗) − (A↔B)]`, where
/// `∂/∂𝒜_λ(k⃗) = √(2k₀) ∂/∂𝒜_λ(k)`. With `a = 4` the pair bracket is
/// `δ_λλ' δ_jj' / Δk³`.
pub fn bracket_standard<A, B>(a: &A, b: &B, state: &SystemState, cfg: &BracketConfig) -> Result<Complex64>
where
    A: Observable + ?Sized,
    B: Observable + ?Sized,
{
    let p = polarized_gradients(a, b, state, cfg)?;
    let cell = cfg.lattice.cell_volume();
    let mut acc = ComplexSum::new();
    for (j, m) in cfg.lattice.modes.iter().enumerate() {
        let jac = 2.0 * m.k0;
        let t = |i| pair_term(&p.fa[j], &p.fc[j], &p.ga[j], &p.gc[j], i);
        acc.add(0.25 * cfg.a * jac / cell * (t(1) + t(2)));
    }
    Ok(acc.value())
}

/// Every representation of one bracket along the reduction chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReductionChain {
    #[serde(serialize_with = "crate::bracket::ser_complex")]
    pub amp: Complex64,
    #[serde(serialize_with = "crate::bracket::ser_complex")]
    pub polarized: Complex64,
    #[serde(serialize_with = "crate::bracket::ser_complex")]
    pub reduced: Complex64,
    #[serde(serialize_with = "crate::bracket::ser_complex")]
    pub standard: Complex64,
    pub amp_vs_polarized: f64,
    pub polarized_vs_reduced: f64,
    pub reduced_vs_standard: f64,
    /// Summed magnitude of the products entering the amplitude bracket;
    /// the link residuals are relative to it.
    pub scale: f64,
    /// Constraint-compatibility residual of the worse of the two observables.
    pub compatibility: f64,
}

/// `|a − b|` relative to `scale`, the summed magnitude of the terms
/// behind either value, so that exact cancellations are not amplified.
fn rel(a: Complex64, b: Complex64, scale: f64) -> f64 {
    let d = (a - b).norm();
    if d == 0.0 {
        0.0
    } else {
        d / scale.max(a.norm()).max(b.norm())
    }
}

/// Evaluate the chain for one pair of observables. The reduced link is
/// computed without the compatibility guard so the residual can be
/// reported either way.
pub fn reduction_chain<A, B>(a: &A, b: &B, state: &SystemState, cfg: &BracketConfig) -> Result<ReductionChain>
where
    A: Observable + ?Sized,
    B: Observable + ?Sized,
{
    let ga = a.gradient(state)?;
    let gb = b.gradient(state)?;
    let (amp, scale) = amp_from_gradients(&ga, &gb, cfg)?;
    let polarized = bracket_polarized(a, b, state, cfg)?;
    let reduced = bracket_reduced_unchecked(a, b, state, cfg)?;
    let standard = bracket_standard(a, b, state, cfg)?;
    let compatibility = compatibility_residual(&ga, &cfg.lattice)
        .0
        .max(compatibility_residual(&gb, &cfg.lattice).0);
    Ok(ReductionChain {
        amp,
        polarized,
        reduced,
        standard,
        amp_vs_polarized: rel(amp, polarized, scale),
        polarized_vs_reduced: rel(polarized, reduced, scale),
        reduced_vs_standard: rel(reduced, standard, scale),
        scale,
        compatibility,
    })
}

/// Per-mode scalar and longitudinal contributions to the polarized bracket
/// (`[0]` and `−[3]`, weighted); they cancel for compatible observables.
pub fn scalar_longitudinal_terms<A, B>(
    a: &A,
    b: &B,
    state: &SystemState,
    cfg: &BracketConfig,
) -> Result<Vec<(Complex64, Complex64)>>
where
    A: Observable + ?Sized,
    B: Observable + ?Sized,
{
    let p = polarized_gradients(a, b, state, cfg)?;
    Ok((0..cfg.lattice.len())
        .map(|j| {
            let t = |i| pair_term(&p.fa[j], &p.fc[j], &p.ga[j], &p.gc[j], i);
            let k = cfg.amp_weight(j);
            (k * t(0), -k * t(3))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;
    use crate::observable::{amp3d, amp3d_conj, polarization, polarization_conj};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn setup() -> (SystemState, BracketConfig) {
        let l = Arc::new(build_lattice(1.0, 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = FieldState::random(l, 1.0, 4.0, 1.0, &mut rng);
        let cfg = BracketConfig::for_field(&f).unwrap();
        (SystemState::field_only(f), cfg)
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn decompose_examples_and_roundtrip() {
        let (st, _) = setup();
        let f = &st.field;
        let m = f.mode(6).clone();
        let mut g = FieldState::zero(f.lattice.clone(), 1.0, 4.0);
        g.amp[6] = m.tetrad[1].0.map(c);
        let d = decompose(&g).0[6];
        for (got, want) in d.iter().zip([0.0, 1.0, 0.0, 0.0]) {
            assert!((got - c(want)).norm() < 1e-15);
        }
        g.amp[6] = (m.tetrad[0] + m.tetrad[3]).0.map(c);
        let d = decompose(&g).0[6];
        for (got, want) in d.iter().zip([1.0, 0.0, 0.0, 1.0]) {
            assert!((got - c(want)).norm() < 1e-15);
        }
        let back = recompose(&decompose(f), &f.lattice);
        for (u, v) in back.iter().zip(&f.amp) {
            for mu in 0..4 {
                assert!((u[mu] - v[mu]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn projection_is_idempotent_and_averages() {
        let (st, _) = setup();
        let p1 = project_constraint(&st.field);
        assert!(constraint_residual(&decompose(&p1)).iter().all(|&r| r < 1e-15));
        let p2 = project_constraint(&p1);
        for (u, v) in p1.amp.iter().zip(&p2.amp) {
            for mu in 0..4 {
                assert!((u[mu] - v[mu]).norm() < 1e-15);
            }
        }
        let before = decompose(&st.field).0[3];
        let after = decompose(&p1).0[3];
        assert!((after[0] - 0.5 * (before[0] + before[3])).norm() < 1e-15);
        assert!((after[1] - before[1]).norm() < 1e-15);
    }

    #[test]
    fn polarized_pair_signs_follow_the_metric() {
        let (st, cfg) = setup();
        let j = 4;
        let kappa = cfg.amp_weight(j);
        let b = |i| bracket_polarized(&polarization(&cfg.lattice, j, i), &polarization_conj(&cfg.lattice, j, i), &st, &cfg).unwrap();
        assert!((b(0) - c(kappa)).norm() < 1e-12 * kappa);
        for i in 1..4 {
            assert!((b(i) - c(-kappa)).norm() < 1e-12 * kappa);
        }
    }

    #[test]
    fn standard_pair_bracket_is_inverse_cell() {
        let (st, cfg) = setup();
        let j = 17;
        let v = bracket_standard(&amp3d(&cfg.lattice, j, 1), &amp3d_conj(&cfg.lattice, j, 1), &st, &cfg).unwrap();
        assert!((v - c(1.0 / cfg.lattice.cell_volume())).norm() < 1e-14);
        let x = bracket_standard(&amp3d(&cfg.lattice, j, 1), &amp3d_conj(&cfg.lattice, j, 2), &st, &cfg).unwrap();
        assert!(x.norm() < 1e-15);
    }

    #[test]
    fn incompatible_observable_is_rejected() {
        let (st, cfg) = setup();
        let a0 = polarization(&cfg.lattice, 2, 0);
        let a0c = polarization_conj(&cfg.lattice, 2, 0);
        assert!(matches!(
            bracket_reduced(&a0, &a0c, &st, &cfg),
            Err(Error::NotConstraintCompatible { .. })
        ));
    }

    #[test]
    fn three_dimensional_roundtrip() {
        let (st, cfg) = setup();
        let pc = decompose(&st.field);
        let t = to_3d_amplitudes(&pc, &cfg.lattice);
        let back = from_3d_amplitudes(&t, &cfg.lattice);
        for (b, p) in back.iter().zip(&pc.0) {
            assert!((b[0] - p[1]).norm() < 1e-15 && (b[1] - p[2]).norm() < 1e-15);
        }
    }
}
