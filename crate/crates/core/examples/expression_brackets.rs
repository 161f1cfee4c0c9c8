//! Observables written as text, bracketed algebraically and numerically.
//!
//! Grammar: `A[j,mu]`, `Ac[j,mu]`, `x[mu]`, `p[mu]`, numbers with an
//! optional `i`, `^`, `*`, `+`, `-`, parentheses.

use std::sync::Arc;

use covbracket::bracket::{bracket_joint, poly_bracket, AlgebraicKind, BracketConfig};
use covbracket::field::FieldState;
use covbracket::lattice::build_lattice;
use covbracket::minkowski::FourVector;
use covbracket::observable::parse;
use covbracket::state::{ParticleState, SystemState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> covbracket::Result<()> {
    let lat = Arc::new(build_lattice(1.0, 1)?);
    let field = FieldState::random(lat.clone(), 1.0, 4.0, 1.0, &mut ChaCha8Rng::seed_from_u64(4));
    let particle = ParticleState::free(FourVector::new(0.0, 0.5, 0.0, 0.0), [0.2, 0.0, 0.0], 1.0, 1.0, 1.0);
    let state = SystemState::new(particle, field, 0.0);
    let cfg = BracketConfig::new(4.0, 1.0, lat)?;

    let pairs = [
        ("x[1]", "p[1]"),
        ("A[0,1]", "Ac[0,1]"),
        ("A[0,2]*Ac[3,2] + 2i*x[0]", "A[3,2] - p[0]^2"),
        ("(A[1,0] + Ac[1,0])^2", "x[3]*p[3]"),
    ];
    for (a, b) in pairs {
        let (fa, fb) = (parse(a)?, parse(b)?);
        let symbolic = poly_bracket(&fa, &fb, AlgebraicKind::Joint, &cfg);
        let numeric = bracket_joint(&fa, &fb, &state, &cfg)?;
        println!("{{{a}, {b}}}");
        println!("  = {symbolic}");
        println!("  numeric {:.6}, symbolic at the state {:.6}", numeric.value, symbolic.evaluate(&state)?);
    }

    match parse("A[0,") {
        Err(e) => println!("malformed input: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
