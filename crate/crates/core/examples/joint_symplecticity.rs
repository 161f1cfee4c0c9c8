//! {x_μ(τ), p_ν(τ)} through the finite-difference tangent map: a particle
//! in a plane wave, and a weakly coupled particle with its field modes.

use std::sync::Arc;

use covbracket::dynamics::{particle_system, symplectic_check, Clock, Coupling, EvolutionConfig, PlaneWave, TangentOptions};
use covbracket::field::FieldState;
use covbracket::lattice::build_lattice;
use covbracket::minkowski::FourVector;
use covbracket::state::{ParticleState, SystemState};

fn main() -> covbracket::Result<()> {
    let wave = PlaneWave::along_z(1.0, [1.0, 0.0, 0.0], 1.0, 0.2);
    let start = ParticleState::in_potential(FourVector::ZERO, [0.1, 0.0, 0.0], 1.0, 1.0, 1.0, &wave.potential(&FourVector::ZERO));
    let cfg = EvolutionConfig {
        wave: Some(wave),
        clock: Clock::Proper,
        ..EvolutionConfig::default().with_steps(0.1, 20)
    };
    let r = symplectic_check(&particle_system(start, 1.0), &cfg, &TangentOptions::default())?;
    println!("particle in a wave: deviation from η = {:.2e}", r.deviation);
    for row in &r.matrix {
        println!("  [{}]", row.iter().map(|v| format!("{v:+.10}")).collect::<Vec<_>>().join(", "));
    }

    let lat = Arc::new(build_lattice(1.0, 1)?);
    let coupled = SystemState::new(
        ParticleState::free(FourVector::ZERO, [0.1, 0.05, 0.0], 1.0, 1e-3, 1.0),
        FieldState::zero(lat.clone(), 1.0, 4.0),
        0.0,
    );
    println!("coupled, {} modes:", lat.len());
    let base = TangentOptions::default();
    for (dt, h) in [(0.1, base.h), (0.05, base.h / 2.0)] {
        let cfg = EvolutionConfig {
            coupling: Coupling::Coupled,
            clock: Clock::Proper,
            ..EvolutionConfig::default().with_steps(dt, (1.0 / dt).round() as usize)
        };
        let r = symplectic_check(&coupled, &cfg, &TangentOptions { h, ..base })?;
        println!("  dt={dt:<5} h={h:.0e}: deviation {:.2e}, det = {:.6}", r.deviation, r.tangent.determinant);
    }
    Ok(())
}
