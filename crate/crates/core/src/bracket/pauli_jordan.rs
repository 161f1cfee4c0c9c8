//! Lattice Pauli-Jordan function and related kernels, evaluated by direct
//! quadrature without any bracket machinery.
//!
//! ```text
//! Δ_lat(x)   = −(2π)⁻³ Σ_j Δk³ sin(k·x)/k₀
//! ∂_λΔ_lat   = −(2π)⁻³ Σ_j Δk³ k_λ cos(k·x)/k₀
//! δ³_lat(r⃗)  =  (2π)⁻³ Σ_j Δk³ cos(k⃗·r⃗)
//! ```

use serde::Serialize;

use crate::field::fourier_prefactor;
use crate::lattice::{build_lattice, Mode, ModeLattice};
use crate::minkowski::{CoVector, FourVector, LorentzMap};
use crate::summation::NeumaierSum;
use crate::{Error, Result};

fn quadrature<F: Fn(&Mode) -> f64>(lattice: &ModeLattice, f: F) -> f64 {
    let cell = lattice.cell_volume();
    let mut acc = NeumaierSum::new();
    for m in &lattice.modes {
        acc.add(cell * f(m));
    }
    fourier_prefactor() * acc.value()
}

fn quadrature4<F: Fn(&Mode) -> [f64; 4]>(lattice: &ModeLattice, f: F) -> [f64; 4] {
    let cell = lattice.cell_volume();
    let mut acc = [NeumaierSum::new(); 4];
    for m in &lattice.modes {
        let v = f(m);
        for l in 0..4 {
            acc[l].add(cell * v[l]);
        }
    }
    acc.map(|s| fourier_prefactor() * s.value())
}

/// `Δ_lat(x)`.
pub fn pauli_jordan_lattice(x: &FourVector, lattice: &ModeLattice) -> f64 {
    -quadrature(lattice, |m| m.phase(x).sin() / m.k0)
}

/// `∂_λΔ_lat(x)`, covariant index.
pub fn pauli_jordan_grad(x: &FourVector, lattice: &ModeLattice) -> CoVector {
    CoVector(quadrature4(lattice, |m| {
        let c = -m.phase(x).cos() / m.k0;
        std::array::from_fn(|l| m.k_cov(l) * c)
    }))
}

/// `∂₀²Δ_lat(x) = (2π)⁻³ Σ_j Δk³ k₀ sin(k·x)`.
pub fn pauli_jordan_d00(x: &FourVector, lattice: &ModeLattice) -> f64 {
    quadrature(lattice, |m| m.k0 * m.phase(x).sin())
}

/// `∂_λ∂₀²Δ_lat(x) = (2π)⁻³ Σ_j Δk³ k₀ k_λ cos(k·x)`.
pub fn pauli_jordan_d00_grad(x: &FourVector, lattice: &ModeLattice) -> CoVector {
    CoVector(quadrature4(lattice, |m| {
        let c = m.k0 * m.phase(x).cos();
        std::array::from_fn(|l| m.k_cov(l) * c)
    }))
}

/// Lattice Dirichlet kernel `δ³_lat(r⃗)`.
pub fn dirichlet_kernel(r: [f64; 3], lattice: &ModeLattice) -> f64 {
    quadrature(lattice, |m| spatial_phase(m, r).cos())
}

/// `−∇²δ³_lat(r⃗) = (2π)⁻³ Σ_j Δk³ |k⃗|² cos(k⃗·r⃗)`.
pub fn dirichlet_neg_laplacian(r: [f64; 3], lattice: &ModeLattice) -> f64 {
    quadrature(lattice, |m| m.k0 * m.k0 * spatial_phase(m, r).cos())
}

fn spatial_phase(m: &Mode, r: [f64; 3]) -> f64 {
    m.k_spatial[0] * r[0] + m.k_spatial[1] * r[1] + m.k_spatial[2] * r[2]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoostInvariance {
    pub delta_x: f64,
    pub delta_mapped: f64,
    /// `|Δ(Λx) − Δ(x)| / |Δ(x)|` (absolute when `Δ(x) = 0`).
    pub deviation: f64,
}

/// Largest rapidity for which the quadrature is trusted.
pub const MAX_RAPIDITY: f64 = 2.0;

/// Compare `Δ_lat` at `x` and `Λx` on the same lattice.
pub fn boost_invariance_check(x: &FourVector, map: &LorentzMap, lattice: &ModeLattice) -> Result<BoostInvariance> {
    if map.entry(0, 0) > MAX_RAPIDITY.cosh() * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "total rapidity exceeds {MAX_RAPIDITY} (Λ⁰₀ = {})",
            map.entry(0, 0)
        )));
    }
    let delta_x = pauli_jordan_lattice(x, lattice);
    let delta_mapped = pauli_jordan_lattice(&map.apply(x), lattice);
    let diff = (delta_mapped - delta_x).abs();
    let deviation = if delta_x == 0.0 { diff } else { diff / delta_x.abs() };
    Ok(BoostInvariance {
        delta_x,
        delta_mapped,
        deviation,
    })
}

/// One row of a refinement study at fixed momentum cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RefinementRow {
    pub n_max: usize,
    pub delta_k: f64,
    pub n_modes: usize,
    #[serde(flatten)]
    pub check: BoostInvariance,
}

/// Boost-invariance deviation on lattices with cutoff `k_max` held fixed
/// and `Δk = k_max / n_max` for each requested `n_max`.
pub fn refinement_study(x: &FourVector, map: &LorentzMap, k_max: f64, n_values: &[usize]) -> Result<Vec<RefinementRow>> {
    n_values
        .iter()
        .map(|&n| {
            let l = build_lattice(k_max / n as f64, n)?;
            Ok(RefinementRow {
                n_max: n,
                delta_k: l.delta_k,
                n_modes: l.len(),
                check: boost_invariance_check(x, map, &l)?,
            })
        })
        .collect()
}
