//! Antisymmetry, Leibniz and Jacobi on random polynomial observables.

use std::sync::Arc;

use covbracket::bracket::{bracket_joint, jacobi_residual, AlgebraicKind, BracketConfig};
use covbracket::field::FieldState;
use covbracket::lattice::build_lattice;
use covbracket::minkowski::FourVector;
use covbracket::observable::{random_polynomial, PolySpec};
use covbracket::state::{ParticleState, SystemState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> covbracket::Result<()> {
    let lat = Arc::new(build_lattice(1.0, 1)?);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let field = FieldState::random(lat.clone(), 1.0, 4.0, 1.0, &mut rng);
    let particle = ParticleState::free(FourVector::new(0.1, 0.2, 0.3, 0.4), [0.1, -0.2, 0.3], 1.0, 0.3, 1.0);
    let state = SystemState::new(particle, field, 0.0);
    let cfg = BracketConfig::new(4.0, 1.0, lat)?;

    let spec = PolySpec::joint(2);
    let (a, b, c) = (random_polynomial(&mut rng, &spec), random_polynomial(&mut rng, &spec), random_polynomial(&mut rng, &spec));
    let ab = bracket_joint(&a, &b, &state, &cfg)?.value;
    let ba = bracket_joint(&b, &a, &state, &cfg)?.value;
    println!("{{A,B}} = {ab:.6}, {{B,A}} = {ba:.6}");

    let lhs = bracket_joint(&(&a * &b), &c, &state, &cfg)?.value;
    let rhs = a.evaluate(&state)? * bracket_joint(&b, &c, &state, &cfg)?.value + bracket_joint(&a, &c, &state, &cfg)?.value * b.evaluate(&state)?;
    println!("Leibniz: {{AB,C}} = {lhs:.6}, A{{B,C}} + {{A,C}}B = {rhs:.6}");

    for kind in [AlgebraicKind::Amp, AlgebraicKind::Qpi, AlgebraicKind::Particle, AlgebraicKind::Joint] {
        let (sum, scale) = jacobi_residual(&a, &b, &c, kind, &cfg);
        println!("Jacobi ({kind:?}): largest coefficient {:.1e} against nested-bracket scale {scale:.2e}", sum.max_coefficient());
    }
    Ok(())
}
