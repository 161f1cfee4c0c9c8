//! Canonical variables of a random field state: the rank-one momentum, the
//! free Hamilton equations and the vanishing de Donder-Weyl density.

use std::sync::Arc;

use covbracket::field::{ddw_free_density, ddw_free_density_amp, from_canonical, to_canonical, verify_free_field_hamilton, FieldState};
use covbracket::lattice::build_lattice;
use covbracket::minkowski::FourVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> covbracket::Result<()> {
    let lat = Arc::new(build_lattice(0.8, 1)?);
    let field = FieldState::random(lat.clone(), 1.0, 4.0, 1.0, &mut ChaCha8Rng::seed_from_u64(1));
    let x = FourVector::new(0.4, 0.1, -0.3, 0.2);

    let cs = to_canonical(&field, &x);
    println!("q(0)      = {:?}", cs.q[0].0);
    println!("π_0ν(0)   = {:?}", std::array::from_fn::<f64, 4, _>(|nu| cs.pi(0, 0, nu)));
    println!("rank-one residual of π = {:.1e}", cs.rank_one_residual());

    let back = from_canonical(&cs, &x)?;
    let err = field.amp.iter().zip(&back.amp).flat_map(|(a, b)| (0..4).map(move |m| (a[m] - b[m]).norm())).fold(0.0, f64::max);
    println!("canonical round trip error = {err:.1e}");

    let h = verify_free_field_hamilton(&field, &x);
    println!("∂q + π = {:.1e}, ∂π − (k·k)q = {:.1e} (scale {:.2})", h.q_equation, h.pi_equation, h.scale);

    let worst = (0..lat.len()).map(|j| ddw_free_density_amp(&field, j).abs().max(ddw_free_density(&cs, j).abs())).fold(0.0, f64::max);
    println!("largest free density on shell = {worst:.1e}");

    let a = field.reconstruct_potential(&x);
    println!("A(x) = {:?}", a.0);
    Ok(())
}
