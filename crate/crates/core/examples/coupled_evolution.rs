//! A charged particle coupled to its own mode field: energy bookkeeping and
//! the Lorentz-condition combination carried along by the source.

use std::f64::consts::PI;
use std::sync::Arc;

use covbracket::dynamics::{integrate, total_energy, Coupling, EvolutionConfig};
use covbracket::field::{lorentz_condition_residual, FieldState};
use covbracket::lattice::build_lattice;
use covbracket::minkowski::FourVector;
use covbracket::state::{ParticleState, SystemState};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lorentz_combination(s: &SystemState, j: usize) -> Complex64 {
    let m = &s.field.lattice.modes[j];
    let ka: Complex64 = (0..4).map(|mu| s.field.amp[j][mu] * m.k_cov(mu)).sum();
    ka - 4.0 * PI * s.particle.e * Complex64::from_polar(1.0, m.phase(&s.particle.x))
}

fn main() -> covbracket::Result<()> {
    let lat = Arc::new(build_lattice(1.0, 1)?);
    let field = FieldState::random(lat.clone(), 1.0, 4.0, 0.05, &mut ChaCha8Rng::seed_from_u64(5));
    // on shell in the initial mode potential
    let a0 = field.reconstruct_potential(&FourVector::ZERO);
    let particle = ParticleState::in_potential(FourVector::ZERO, [0.3, 0.0, -0.1], 1.0, 0.1, 1.0, &a0);
    let state = SystemState::new(particle, field, 0.0);
    let cfg = EvolutionConfig {
        coupling: Coupling::Coupled,
        ..EvolutionConfig::default().with_steps(0.01, 1000)
    };

    let ev = integrate(&state, &cfg)?;
    let end = &ev.final_state;
    println!("{} modes, {} steps", lat.len(), cfg.steps);
    println!("energy: {:.12} → {:.12}", total_energy(&state), total_energy(end));
    println!("field energy proxy: {:.3e} → {:.3e}", ev.rows[0].field_energy_proxy, ev.rows.last().unwrap().field_energy_proxy);
    println!("mass-shell drift: {:.1e}", ev.max_mass_shell_drift());
    let worst = (0..lat.len()).map(|j| (lorentz_combination(end, j) - lorentz_combination(&state, j)).norm()).fold(0.0, f64::max);
    let moved = lorentz_condition_residual(&end.field).iter().zip(lorentz_condition_residual(&state.field)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("|k·𝒜| changes by up to {moved:.2e}; k·𝒜 − 4πe e^(ik·x) changes by {worst:.1e}");
    Ok(())
}
