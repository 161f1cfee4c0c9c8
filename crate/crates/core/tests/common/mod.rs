//! Oracles shared by the integration tests. Everything here is computed
//! from closed forms or plain mode sums, without going through the
//! bracket machinery under test.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use covbracket::bracket::{amp_from_gradients, BracketConfig};
use covbracket::field::FieldState;
use covbracket::lattice::{build_lattice, ModeLattice};
use covbracket::minkowski::FourVector;
use covbracket::observable::{polarization, polarization_conj, Gradient, PolyObservable};
use covbracket::state::{ParticleState, SystemState};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

pub fn lattice(delta_k: f64, n_max: usize) -> Arc<ModeLattice> {
    Arc::new(build_lattice(delta_k, n_max).unwrap())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn field_state(lat: &Arc<ModeLattice>, a: f64, seed: u64) -> SystemState {
    SystemState::field_only(FieldState::random(lat.clone(), 1.0, a, 1.0, &mut rng(seed)))
}

pub fn joint_state(lat: &Arc<ModeLattice>, a: f64, seed: u64) -> SystemState {
    let mut r = rng(seed);
    let field = FieldState::random(lat.clone(), 1.0, a, 1.0, &mut r);
    let x = random_point(&mut r, None);
    let kin = [r.gen_range(-0.5..0.5), r.gen_range(-0.5..0.5), r.gen_range(-0.5..0.5)];
    SystemState::new(ParticleState::free(x, kin, 1.0, 0.3, 1.0), field, 0.0)
}

pub fn random_point<R: Rng>(r: &mut R, t: Option<f64>) -> FourVector {
    let t = t.unwrap_or_else(|| r.gen_range(-1.0..1.0));
    FourVector::new(t, r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0))
}

pub fn config(lat: &Arc<ModeLattice>, a: f64) -> BracketConfig {
    BracketConfig::new(a, 1.0, lat.clone()).unwrap()
}

fn k_dot_x(k0: f64, k: [f64; 3], x: &FourVector) -> f64 {
    k0 * x[0] - k[0] * x[1] - k[1] * x[2] - k[2] * x[3]
}

fn cell_sum<F: Fn(f64, [f64; 3]) -> f64>(lat: &ModeLattice, f: F) -> f64 {
    let cell = lat.delta_k.powi(3);
    let mut s = 0.0;
    for m in &lat.modes {
        s += cell * f(m.k0, m.k_spatial);
    }
    s / (2.0 * PI).powi(3)
}

/// `Δ_lat(x) = −(2π)⁻³ Σ Δk³ sin(k·x)/k₀`.
pub fn delta(x: &FourVector, lat: &ModeLattice) -> f64 {
    -cell_sum(lat, |k0, k| k_dot_x(k0, k, x).sin() / k0)
}

/// Covariant gradient of `Δ_lat`.
pub fn delta_grad(x: &FourVector, lat: &ModeLattice) -> [f64; 4] {
    std::array::from_fn(|l| {
        -cell_sum(lat, |k0, k| {
            let kl = if l == 0 { k0 } else { -k[l - 1] };
            kl * k_dot_x(k0, k, x).cos() / k0
        })
    })
}

/// `δ³_lat(r⃗) = (2π)⁻³ Σ Δk³ cos(k⃗·r⃗)`.
pub fn dirichlet(r: [f64; 3], lat: &ModeLattice) -> f64 {
    cell_sum(lat, |_, k| (k[0] * r[0] + k[1] * r[1] + k[2] * r[2]).cos())
}

/// `−∇²δ³_lat(r⃗) = (2π)⁻³ Σ Δk³ |k⃗|² cos(k⃗·r⃗)`.
pub fn neg_laplacian_dirichlet(r: [f64; 3], lat: &ModeLattice) -> f64 {
    cell_sum(lat, |k0, k| k0 * k0 * (k[0] * r[0] + k[1] * r[1] + k[2] * r[2]).cos())
}

/// `∂₀²Δ_lat(x) = (2π)⁻³ Σ Δk³ k₀ sin(k·x)`.
pub fn delta_d00(x: &FourVector, lat: &ModeLattice) -> f64 {
    cell_sum(lat, |k0, k| k0 * k_dot_x(k0, k, x).sin())
}

/// Covariant gradient of `∂₀²Δ_lat`.
pub fn delta_d00_grad(x: &FourVector, lat: &ModeLattice) -> [f64; 4] {
    std::array::from_fn(|l| {
        cell_sum(lat, |k0, k| {
            let kl = if l == 0 { k0 } else { -k[l - 1] };
            k0 * kl * k_dot_x(k0, k, x).cos()
        })
    })
}

/// Equal-time mode sum `¼[δ²(0)/8π³] K_λ` for the field/momentum bracket,
/// with the delta-squared factor realized per mode as `(Δk³/w)²`.
pub fn k_sum(x: &FourVector, xp: &FourVector, lat: &ModeLattice, a: f64) -> [f64; 4] {
    let cell = lat.delta_k.powi(3);
    std::array::from_fn(|l| {
        let mut s = 0.0;
        for m in &lat.modes {
            let sx = m.k_spatial[0] * x[1] + m.k_spatial[1] * x[2] + m.k_spatial[2] * x[3];
            let sxp = m.k_spatial[0] * xp[1] + m.k_spatial[1] * xp[2] + m.k_spatial[2] * xp[3];
            let kl = if l == 0 { m.k0 } else { -m.k_spatial[l - 1] };
            let w = cell / (2.0 * m.k0);
            let d2 = (cell / w).powi(2);
            s += d2 * w / m.k0 * (a * m.k0 * kl * sx.sin() * sxp.sin() + a * m.k0 * kl * sx.cos() * sxp.cos());
        }
        0.25 / (8.0 * PI.powi(3)) / (4.0 * PI.powi(3)) * s
    })
}

/// Joint bracket from gradients with the summed absolute size of its
/// terms, used as the scale of relative residuals.
pub fn joint_scaled(ga: &Gradient, gb: &Gradient, cfg: &BracketConfig) -> (Complex64, f64) {
    let (amp, amp_scale) = amp_from_gradients(ga, gb, cfg).unwrap();
    let k = 4.0 * PI * cfg.c;
    let mut part = Complex64::new(0.0, 0.0);
    let mut part_scale = 0.0;
    for mu in 0..4 {
        let (t1, t2) = (ga.x[mu] * gb.p[mu], gb.x[mu] * ga.p[mu]);
        part += ETA[mu] * (t1 - t2);
        part_scale += t1.norm() + t2.norm();
    }
    (Complex64::new(0.0, k) * amp + part, k * amp_scale + part_scale)
}

pub fn rel(diff: f64, scale: f64) -> f64 {
    if diff == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

/// Polynomials in the transverse amplitudes and `𝒜₀ + 𝒜₃` of a few modes,
/// whose scalar and longitudinal partials coincide.
pub fn compatible_observables(lat: &ModeLattice, r: &mut ChaCha8Rng, count: usize) -> Vec<PolyObservable> {
    // a small shared pool of modes, so that most pairs have nonzero brackets
    let pool: Vec<usize> = (0..3).map(|_| r.gen_range(0..lat.len())).collect();
    let atom = |r: &mut ChaCha8Rng| {
        let j = pool[r.gen_range(0..pool.len())];
        let conj = r.gen_bool(0.5);
        let pol = |i| if conj { polarization_conj(lat, j, i) } else { polarization(lat, j, i) };
        match r.gen_range(0..3) {
            0 => pol(1),
            1 => pol(2),
            _ => &pol(0) + &pol(3),
        }
    };
    (0..count)
        .map(|_| {
            let mut p = PolyObservable::zero();
            for _ in 0..3 {
                let mut t = atom(r);
                if r.gen_bool(0.5) {
                    t = &t * &atom(r);
                }
                let c = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
                p = &p + &t.scale(c);
            }
            p
        })
        .collect()
}

/// Wave `A^μ = amplitude^μ cos(ω(x⁰ − x³) + φ)` with transverse amplitude.
#[derive(Clone, Copy, Debug)]
pub struct ZWave {
    pub amp: [f64; 2],
    pub omega: f64,
    pub phase: f64,
}

/// Closed-form motion in a transverse plane wave travelling along `z`,
/// parametrized by `ξ = x⁰ − x³`. The transverse canonical momentum and
/// `Π = π⁰ − π³` are conserved, `π⁰ + π³ = (m₀²c² + π⊥²)/Π`, and
/// `dx^μ/dξ = π^μ/Π`. Returns the particle at lab time `t`.
pub fn plane_wave_exact(p0: &ParticleState, w: &ZWave, t: f64, c: f64) -> ParticleState {
    let ec = p0.e / c;
    let xi0 = p0.x[0] - p0.x[3];
    let th0 = w.omega * xi0 + w.phase;
    // π⊥(ξ) = α + β cos θ
    let alpha = [-p0.p[1], -p0.p[2]];
    let beta = [-ec * w.amp[0], -ec * w.amp[1]];
    let big_pi = -(p0.p[0] - p0.p[3]);
    let m2c2 = p0.m0 * p0.m0 * c * c;
    let a2 = alpha[0] * alpha[0] + alpha[1] * alpha[1];
    let ab = alpha[0] * beta[0] + alpha[1] * beta[1];
    let b2 = beta[0] * beta[0] + beta[1] * beta[1];
    let theta = |xi: f64| w.omega * (xi0 + xi) + w.phase;
    let int_cos = |xi: f64| (theta(xi).sin() - th0.sin()) / w.omega;
    let int_cos2 = |xi: f64| xi / 2.0 + ((2.0 * theta(xi)).sin() - (2.0 * th0).sin()) / (4.0 * w.omega);
    let int_s = |xi: f64| (m2c2 + a2) * xi + 2.0 * ab * int_cos(xi) + b2 * int_cos2(xi);
    let s_at = |xi: f64| {
        let c = theta(xi).cos();
        let px = alpha[0] + beta[0] * c;
        let py = alpha[1] + beta[1] * c;
        m2c2 + px * px + py * py
    };
    let x0_of = |xi: f64| xi / 2.0 + int_s(xi) / (2.0 * big_pi * big_pi);

    // x⁰(ξ) is strictly increasing: bracket the root, then safeguarded Newton
    let target = c * t;
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let mut width = target.abs().max(1e-3);
    while (x0_of(lo) - target) * (x0_of(hi) - target) > 0.0 || lo == hi {
        if target >= 0.0 {
            hi = width;
        } else {
            lo = -width;
        }
        width *= 2.0;
    }
    let mut xi = 0.5 * (lo + hi);
    let mut converged = false;
    for _ in 0..200 {
        let f = x0_of(xi) - target;
        if f > 0.0 {
            hi = xi;
        } else {
            lo = xi;
        }
        let df = 0.5 + s_at(xi) / (2.0 * big_pi * big_pi);
        let mut next = xi - f / df;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let done = (next - xi).abs() <= 1e-15 * xi.abs().max(1.0);
        xi = next;
        if done {
            converged = true;
            break;
        }
    }
    assert!(converged, "light-front time did not converge");
    let ic = int_cos(xi);
    let is = int_s(xi);
    let x = FourVector::new(
        p0.x[0] + x0_of(xi),
        p0.x[1] + (alpha[0] * xi + beta[0] * ic) / big_pi,
        p0.x[2] + (alpha[1] * xi + beta[1] * ic) / big_pi,
        p0.x[3] - xi / 2.0 + is / (2.0 * big_pi * big_pi),
    );
    let cth = theta(xi).cos();
    let perp = [alpha[0] + beta[0] * cth, alpha[1] + beta[1] * cth];
    let s = s_at(xi);
    let kin = FourVector::new(0.5 * (big_pi + s / big_pi), perp[0], perp[1], 0.5 * (s / big_pi - big_pi));
    let a_here = FourVector::new(0.0, w.amp[0] * cth, w.amp[1] * cth, 0.0);
    ParticleState {
        x,
        p: -kin - a_here * ec,
        ..*p0
    }
}
