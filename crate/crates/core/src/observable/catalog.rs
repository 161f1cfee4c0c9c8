//! Ready-made observables expressed in the primitive coordinates.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{PolyObservable, Var};
use crate::field::fourier_prefactor;
use crate::lattice::ModeLattice;
use crate::minkowski::{eta, FourVector};

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn linear(terms: impl IntoIterator<Item = (Var, Complex64)>) -> PolyObservable {
    PolyObservable::from_terms(terms.into_iter().map(|(v, c)| (super::Monomial::from_vars(vec![v]), c)))
}

/// `𝒜^μ(j)`.
pub fn amp(j: usize, mu: usize) -> PolyObservable {
    PolyObservable::var(Var::amp(j, mu))
}

/// `𝒜*^μ(j)`.
pub fn amp_conj(j: usize, mu: usize) -> PolyObservable {
    PolyObservable::var(Var::amp_conj(j, mu))
}

/// `𝒜_μ(j) = η_μμ 𝒜^μ(j)`.
pub fn amp_cov(j: usize, mu: usize) -> PolyObservable {
    amp(j, mu).scale_real(eta(mu))
}

/// `𝒜*_μ(j)`.
pub fn amp_conj_cov(j: usize, mu: usize) -> PolyObservable {
    amp_conj(j, mu).scale_real(eta(mu))
}

pub fn x(mu: usize) -> PolyObservable {
    PolyObservable::var(Var::X(mu as u8))
}

pub fn p(mu: usize) -> PolyObservable {
    PolyObservable::var(Var::P(mu as u8))
}

/// `x_μ`.
pub fn x_cov(mu: usize) -> PolyObservable {
    x(mu).scale_real(eta(mu))
}

/// `p_μ`.
pub fn p_cov(mu: usize) -> PolyObservable {
    p(mu).scale_real(eta(mu))
}

fn norm(lattice: &ModeLattice, j: usize, c: f64) -> f64 {
    (8.0 * PI * c * lattice.modes[j].k0).sqrt()
}

/// `q^ν(j) = i(𝒜*^ν e^{ik·x} − 𝒜^ν e^{−ik·x})/√(8πck₀)`, phased at `at`.
pub fn q(lattice: &ModeLattice, c: f64, at: &FourVector, j: usize, nu: usize) -> PolyObservable {
    let m = &lattice.modes[j];
    let n = norm(lattice, j, c);
    let e = Complex64::from_polar(1.0, m.phase(at));
    linear([
        (Var::amp_conj(j, nu), cx(0.0, 1.0) * e / n),
        (Var::amp(j, nu), cx(0.0, -1.0) * e.conj() / n),
    ])
}

/// `q_ν(j)`.
pub fn q_cov(lattice: &ModeLattice, c: f64, at: &FourVector, j: usize, nu: usize) -> PolyObservable {
    q(lattice, c, at, j, nu).scale_real(eta(nu))
}

/// `s^ν(j) = (𝒜*^ν e^{ik·x} + 𝒜^ν e^{−ik·x})/√(8πck₀)`.
pub fn s(lattice: &ModeLattice, c: f64, at: &FourVector, j: usize, nu: usize) -> PolyObservable {
    let m = &lattice.modes[j];
    let n = norm(lattice, j, c);
    let e = Complex64::from_polar(1.0, m.phase(at));
    linear([(Var::amp_conj(j, nu), e / n), (Var::amp(j, nu), e.conj() / n)])
}

/// `π_μν(j) = k_μ s_ν`.
pub fn pi(lattice: &ModeLattice, c: f64, at: &FourVector, j: usize, mu: usize, nu: usize) -> PolyObservable {
    s(lattice, c, at, j, nu).scale_real(lattice.modes[j].k_cov(mu) * eta(nu))
}

/// Polarization component `𝒜_i(j)`: `𝒜⁰` for `i = 0`, `e_i·𝒜⃗` otherwise,
/// so that `𝒜 = 𝒜₀ε⁰ + Σᵢ 𝒜ᵢ(0, eᵢ)`.
pub fn polarization(lattice: &ModeLattice, j: usize, i: usize) -> PolyObservable {
    if i == 0 {
        return amp(j, 0);
    }
    let e = lattice.modes[j].e(i);
    linear((1..4).map(|a| (Var::amp(j, a), cx(e[a - 1], 0.0))))
}

pub fn polarization_conj(lattice: &ModeLattice, j: usize, i: usize) -> PolyObservable {
    polarization(lattice, j, i).conjugate()
}

/// Transverse three-dimensional amplitude `𝒜_λ(k⃗) = 𝒜_λ(k)/√(2k₀)`.
pub fn amp3d(lattice: &ModeLattice, j: usize, lambda: usize) -> PolyObservable {
    polarization(lattice, j, lambda).scale_real(1.0 / (2.0 * lattice.modes[j].k0).sqrt())
}

pub fn amp3d_conj(lattice: &ModeLattice, j: usize, lambda: usize) -> PolyObservable {
    amp3d(lattice, j, lambda).conjugate()
}

/// Contravariant `A^ν(x)` as a linear functional of the amplitudes.
pub fn potential(lattice: &ModeLattice, at: &FourVector, nu: usize) -> PolyObservable {
    let pref = fourier_prefactor();
    let mut terms = Vec::with_capacity(2 * lattice.len());
    for m in &lattice.modes {
        let e = Complex64::from_polar(pref * m.w, -m.phase(at));
        terms.push((Var::amp(m.index, nu), e));
        terms.push((Var::amp_conj(m.index, nu), e.conj()));
    }
    linear(terms)
}

/// `A_ν(x)`.
pub fn potential_cov(lattice: &ModeLattice, at: &FourVector, nu: usize) -> PolyObservable {
    potential(lattice, at, nu).scale_real(eta(nu))
}

/// `θ_λν(x) = −(1/4πc) ∂_λ A_ν(x)`.
pub fn conjugate_momentum(lattice: &ModeLattice, c: f64, at: &FourVector, lambda: usize, nu: usize) -> PolyObservable {
    let pref = -fourier_prefactor() / (4.0 * PI * c) * eta(nu);
    let mut terms = Vec::with_capacity(2 * lattice.len());
    for m in &lattice.modes {
        // ∂_λ e^{−ik·x} = −ik_λ e^{−ik·x}
        let e = Complex64::from_polar(pref * m.w * m.k_cov(lambda), -m.phase(at)) * cx(0.0, -1.0);
        terms.push((Var::amp(m.index, nu), e));
        terms.push((Var::amp_conj(m.index, nu), e.conj()));
    }
    linear(terms)
}
