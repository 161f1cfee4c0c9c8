mod common;

use std::f64::consts::PI;

use common::*;
use covbracket::dynamics::{
    evolve, integrate, integrate_backward, particle_system, plane_wave_oracle, total_energy, Clock, Coupling, EvolutionConfig,
    PlaneWave,
};
use covbracket::field::{lorentz_condition_residual, FieldState};
use covbracket::minkowski::FourVector;
use covbracket::state::{ParticleState, SystemState};
use num_complex::Complex64;
use proptest::prelude::*;

fn distance(a: &ParticleState, b: &ParticleState) -> f64 {
    (a.x - b.x).max_abs().max((a.p - b.p).max_abs())
}

fn coupled_system(e: f64, seed: u64) -> SystemState {
    let lat = lattice(1.0, 1);
    let mut r = rng(seed);
    let field = FieldState::random(lat, 1.0, 4.0, 0.05, &mut r);
    SystemState::new(ParticleState::free(FourVector::ZERO, [0.2, -0.1, 0.05], 1.0, e, 1.0), field, 0.0)
}

fn coupled(dt: f64, steps: usize) -> EvolutionConfig {
    EvolutionConfig {
        coupling: Coupling::Coupled,
        ..EvolutionConfig::default().with_steps(dt, steps)
    }
}

/// `k_μ𝒜^μ(j) − 4πe e^{ik·x}` per mode; the source term changes `k·𝒜` by
/// a total derivative, so this combination is constant.
fn lorentz_invariant(state: &SystemState) -> Vec<Complex64> {
    let x = state.particle.x;
    state
        .field
        .lattice
        .modes
        .iter()
        .zip(&state.field.amp)
        .map(|(m, a)| {
            let ka: Complex64 = (0..4).map(|mu| a[mu] * m.k_cov(mu)).sum();
            ka - 4.0 * PI * state.particle.e * Complex64::from_polar(1.0, m.phase(&x))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn plane_wave_motion_matches_the_light_front_solution(
        amp in 0.2..1.5f64,
        angle in 0.0..PI,
        omega in 0.5..2.0f64,
        phase in 0.0..(2.0 * PI),
        kin in prop::array::uniform3(-0.5..0.5f64),
    ) {
        let pol = [angle.cos(), angle.sin(), 0.0];
        let wave = PlaneWave::along_z(amp, pol, omega, phase);
        let zw = ZWave { amp: [amp * pol[0], amp * pol[1]], omega, phase };
        let start = ParticleState::in_potential(FourVector::ZERO, kin, 1.0, 1.0, 1.0, &wave.potential(&FourVector::ZERO));
        let cfg = EvolutionConfig { wave: Some(wave), ..EvolutionConfig::default().with_steps(0.005, 800) };
        let got = evolve(&particle_system(start, 1.0), &cfg).unwrap().particle;
        let exact = plane_wave_exact(&start, &zw, cfg.duration(), 1.0);
        let scale = exact.x.max_abs().max(exact.p.max_abs());
        prop_assert!(distance(&got, &exact) < 1e-8 * scale, "{}", distance(&got, &exact) / scale);
    }
}

#[test]
fn library_oracle_agrees_with_the_closed_form() {
    let wave = PlaneWave::along_z(1.0, [0.0, 1.0, 0.0], 1.0, 0.3);
    let zw = ZWave { amp: [0.0, 1.0], omega: 1.0, phase: 0.3 };
    let start = ParticleState::in_potential(FourVector::ZERO, [0.1, 0.0, -0.2], 1.0, 1.0, 1.0, &wave.potential(&FourVector::ZERO));
    let got = plane_wave_oracle(&start, &wave, 6.0, 0.05, 1.0).unwrap();
    let exact = plane_wave_exact(&start, &zw, 6.0, 1.0);
    assert!(distance(&got, &exact) < 1e-10 * exact.x.max_abs());
}

#[test]
fn runs_are_bit_identical() {
    let state = coupled_system(0.05, 3);
    let cfg = coupled(0.01, 200);
    let a = integrate(&state, &cfg).unwrap();
    let b = integrate(&state, &cfg).unwrap();
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.final_state, b.final_state);
}

#[test]
fn recorded_times_cover_the_duration() {
    let state = coupled_system(0.05, 4);
    let cfg = coupled(0.02, 150);
    let ev = integrate(&state, &cfg).unwrap();
    assert_eq!(ev.rows.len(), cfg.steps + 1);
    assert_eq!(ev.rows[0].t, 0.0);
    assert!((ev.rows.last().unwrap().t - cfg.duration()).abs() < 1e-12);
    assert_eq!(ev.final_state.time, cfg.dt * cfg.steps as f64);
}

#[test]
fn backward_integration_returns_to_the_start() {
    let state = coupled_system(0.05, 5);
    let cfg = coupled(0.01, 300);
    let there = evolve(&state, &cfg).unwrap();
    let back = integrate_backward(&there, &cfg).unwrap().final_state;
    assert!(distance(&back.particle, &state.particle) < 1e-10);
    for (a, b) in back.field.amp.iter().zip(&state.field.amp) {
        for mu in 0..4 {
            assert!((a[mu] - b[mu]).norm() < 1e-10);
        }
    }
}

#[test]
fn neutral_particle_leaves_the_field_and_its_constraint_alone() {
    let lat = lattice(1.0, 1);
    let field = covbracket::gupta_bleuler::project_constraint(&FieldState::random(lat, 1.0, 4.0, 1.0, &mut rng(6)));
    let state = SystemState::new(ParticleState::free(FourVector::ZERO, [0.3, 0.0, 0.1], 1.0, 0.0, 1.0), field, 0.0);
    let end = evolve(&state, &coupled(0.05, 100)).unwrap();
    assert_eq!(end.field.amp, state.field.amp);
    assert_eq!(lorentz_condition_residual(&end.field), lorentz_condition_residual(&state.field));
}

#[test]
fn coupled_runs_shift_the_lorentz_condition_by_a_total_derivative() {
    let state = coupled_system(0.1, 7);
    let end = evolve(&state, &coupled(0.01, 500)).unwrap();
    let (before, after) = (lorentz_invariant(&state), lorentz_invariant(&end));
    let scale = before.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let worst = before.iter().zip(&after).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(worst < 1e-9 * scale, "{worst:e}");
}

#[test]
fn coupled_runs_stay_on_the_mass_shell() {
    let lat = lattice(1.0, 1);
    let field = FieldState::random(lat, 1.0, 4.0, 0.05, &mut rng(10));
    let a0 = field.reconstruct_potential(&FourVector::ZERO);
    let particle = ParticleState::in_potential(FourVector::ZERO, [0.3, 0.0, -0.1], 1.0, 0.1, 1.0, &a0);
    let state = SystemState::new(particle, field, 0.0);
    let drift = |dt: f64| integrate(&state, &coupled(dt, (10.0 / dt).round() as usize)).unwrap().max_mass_shell_drift();
    let (coarse, fine) = (drift(0.02), drift(0.01));
    assert!(coarse < 1e-8, "{coarse:e}");
    assert!(fine < coarse / 4.0, "{coarse:e} {fine:e}");
}

#[test]
fn coupled_energy_is_conserved_and_converges() {
    let state = coupled_system(0.1, 8);
    let e0 = total_energy(&state);
    let drift = |dt: f64| {
        let ev = evolve(&state, &coupled(dt, (5.0 / dt).round() as usize)).unwrap();
        (total_energy(&ev) - e0).abs() / e0.abs()
    };
    let (coarse, fine) = (drift(0.02), drift(0.01));
    assert!(coarse < 1e-8, "{coarse:e}");
    assert!(fine <= coarse || fine < 1e-13, "{coarse:e} {fine:e}");
}

#[test]
fn proper_clock_traces_the_same_worldline() {
    let wave = PlaneWave::along_z(0.8, [1.0, 0.0, 0.0], 1.0, 0.0);
    let start = ParticleState::in_potential(FourVector::ZERO, [0.0, 0.2, 0.1], 1.0, 1.0, 1.0, &wave.potential(&FourVector::ZERO));
    let zw = ZWave { amp: [0.8, 0.0], omega: 1.0, phase: 0.0 };
    let cfg = EvolutionConfig {
        wave: Some(wave),
        clock: Clock::Proper,
        ..EvolutionConfig::default().with_steps(0.005, 1000)
    };
    let ev = integrate(&particle_system(start, 1.0), &cfg).unwrap();
    assert!(ev.max_mass_shell_drift() < 1e-8);
    let end = ev.final_state.particle;
    let exact = plane_wave_exact(&start, &zw, end.x[0], 1.0);
    assert!(distance(&end, &exact) < 1e-8 * exact.x.max_abs(), "{:e}", distance(&end, &exact));
}

#[test]
fn invalid_steps_are_rejected() {
    let state = coupled_system(0.1, 9);
    for dt in [0.0, -0.1, f64::NAN] {
        assert!(evolve(&state, &coupled(dt, 10)).is_err());
    }
}
