//! A charged particle in a prescribed plane wave, checked against the
//! fine-step reference and watched for mass-shell drift.

use covbracket::dynamics::{integrate, kinetic_series, particle_system, plane_wave_oracle, zero_crossings, EvolutionConfig, PlaneWave};
use covbracket::minkowski::FourVector;
use covbracket::state::ParticleState;

fn main() -> covbracket::Result<()> {
    let c = 1.0;
    let wave = PlaneWave::along_z(0.5, [1.0, 0.0, 0.0], 1.0, 0.0);
    let start = ParticleState::in_potential(FourVector::ZERO, [0.0; 3], 1.0, 1.0, c, &wave.potential(&FourVector::ZERO));
    let cfg = EvolutionConfig {
        wave: Some(wave),
        ..EvolutionConfig::default().with_steps(0.01, 2000)
    };

    let ev = integrate(&particle_system(start, c), &cfg)?;
    let end = ev.final_state.particle;
    let reference = plane_wave_oracle(&start, &wave, cfg.duration(), 0.05, c)?;
    println!("t = {:.1}", cfg.duration());
    println!("x  = {:?}", end.x.0);
    println!("|x − x_ref| = {:.2e}, |p − p_ref| = {:.2e}", (end.x - reference.x).max_abs(), (end.p - reference.p).max_abs());
    println!("max mass-shell drift = {:.2e}", ev.max_mass_shell_drift());

    let kin = kinetic_series(&ev.rows, &wave, start.m0, start.e, c);
    let vx: Vec<f64> = kin.iter().map(|k| k[1]).collect();
    println!("transverse momentum sign changes = {}", zero_crossings(&vx));
    for r in ev.rows.iter().step_by(400) {
        println!("  t={:5.1}  x1={:+.5}  x3={:+.5}", r.t, r.x[1], r.x[3]);
    }
    Ok(())
}
