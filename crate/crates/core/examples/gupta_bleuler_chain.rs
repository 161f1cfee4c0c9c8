//! The reduction chain from the covariant amplitude bracket to the
//! standard transverse bracket, for observables that respect the
//! Gupta-Bleuler constraint.

use std::sync::Arc;

use covbracket::bracket::BracketConfig;
use covbracket::field::FieldState;
use covbracket::gupta_bleuler::{bracket_reduced, bracket_standard, project_constraint, reduction_chain};
use covbracket::lattice::build_lattice;
use covbracket::observable::{polarization, polarization_conj, amp3d, amp3d_conj};
use covbracket::state::SystemState;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> covbracket::Result<()> {
    let lat = Arc::new(build_lattice(1.0, 1)?);
    let field = project_constraint(&FieldState::random(lat.clone(), 1.0, 4.0, 1.0, &mut ChaCha8Rng::seed_from_u64(3)));
    let state = SystemState::field_only(field);
    let cfg = BracketConfig::new(4.0, 1.0, lat.clone())?;

    // transverse amplitudes and 𝒜₀ + 𝒜₃ have equal scalar and longitudinal partials
    let (j, k) = (2, 9);
    let f = &(&polarization(&lat, j, 1) * &polarization_conj(&lat, k, 2)) + &(&polarization(&lat, k, 0) + &polarization(&lat, k, 3));
    let g = &(&polarization_conj(&lat, j, 1) * &polarization(&lat, k, 2)).scale(Complex64::new(0.5, -1.0))
        + &(&polarization_conj(&lat, k, 0) + &polarization_conj(&lat, k, 3));

    let ch = reduction_chain(&f, &g, &state, &cfg)?;
    println!("amplitude  {:.6}", ch.amp);
    println!("polarized  {:.6}  (residual {:.1e})", ch.polarized, ch.amp_vs_polarized);
    println!("reduced    {:.6}  (residual {:.1e})", ch.reduced, ch.polarized_vs_reduced);
    println!("standard   {:.6}  (residual {:.1e})", ch.standard, ch.reduced_vs_standard);

    println!("per transverse pair:");
    for j in [0, 4, 13] {
        let m = &lat.modes[j];
        let (a, ac) = (polarization(&lat, j, 1), polarization_conj(&lat, j, 1));
        let reduced = bracket_reduced(&a, &ac, &state, &cfg)?;
        let four = bracket_standard(&a, &ac, &state, &cfg)?;
        let three = bracket_standard(&amp3d(&lat, j, 1), &amp3d_conj(&lat, j, 1), &state, &cfg)?;
        println!(
            "  k0={:.3}: reduced/standard = {:+.4} (−4k₀² = {:+.4}), 4D/3D = {:.4} (2k₀ = {:.4})",
            m.k0,
            (reduced / four).re,
            -4.0 * m.k0 * m.k0,
            (four / three).re,
            2.0 * m.k0
        );
    }
    Ok(())
}
