//! Elementary brackets: amplitude pairs, (q, π) pairs through both routes,
//! and the particle's {x, p} = η.

use std::sync::Arc;

use covbracket::bracket::{bracket_amp, bracket_particle, bracket_qpi_checked, BracketConfig};
use covbracket::field::FieldState;
use covbracket::lattice::build_lattice;
use covbracket::minkowski::FourVector;
use covbracket::observable as obs;
use covbracket::state::{ParticleState, SystemState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> covbracket::Result<()> {
    let lat = Arc::new(build_lattice(1.0, 1)?);
    let field = FieldState::random(lat.clone(), 1.0, 4.0, 1.0, &mut ChaCha8Rng::seed_from_u64(2));
    let particle = ParticleState::free(FourVector::ZERO, [0.1, 0.0, 0.2], 1.0, 1.0, 1.0);
    let state = SystemState::new(particle, field, 0.0);
    let at = FourVector::new(0.0, 0.3, 0.1, -0.2);
    let cfg = BracketConfig::new(4.0, 1.0, lat.clone())?.with_phase_point(at);

    let j = 3;
    let m = &lat.modes[j];
    println!("mode {j}: k0 = {:.4}, a k0²/w = {:.6}", m.k0, 4.0 * m.k0 * m.k0 / m.w);
    for mu in 0..4 {
        let v = bracket_amp(&obs::amp(j, mu), &obs::amp_conj(j, mu), &state, &cfg)?;
        println!("  {{A^{mu}, A*^{mu}}} = {v:.6}");
    }

    println!("(q, π) pairs, value and route residual:");
    for nu in 0..4 {
        let q = obs::q_cov(&lat, 1.0, &at, j, nu);
        let p = obs::pi(&lat, 1.0, &at, j, 0, nu);
        let b = bracket_qpi_checked(&q, &p, &state, &cfg)?;
        println!("  {{q_{nu}, π_0{nu}}} = {:.6}  residual {:.1e}", b.value, b.residual);
    }

    println!("particle:");
    for mu in 0..4 {
        let row: Vec<String> = (0..4).map(|nu| format!("{:+.0}", bracket_particle(&obs::x(mu), &obs::p(nu), &state).unwrap().re)).collect();
        println!("  {{x^{mu}, p^ν}} = [{}]", row.join(", "));
    }
    Ok(())
}
