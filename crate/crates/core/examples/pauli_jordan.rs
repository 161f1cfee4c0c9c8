//! The lattice Pauli-Jordan function: a small table, its time
//! antisymmetry, and how boost invariance improves with refinement.

use covbracket::bracket::{boost_invariance_check, pauli_jordan_grad, pauli_jordan_lattice, refinement_study};
use covbracket::lattice::build_lattice;
use covbracket::minkowski::{Axis, FourVector, LorentzMap};

fn main() -> covbracket::Result<()> {
    let lat = build_lattice(0.5, 3)?;
    println!("{:>6} {:>6} {:>12} {:>12}", "x0", "r", "Δ_lat", "∂₀Δ_lat");
    for t in [-1.0, 0.0, 1.0] {
        for r in [0.0, 0.5, 1.5] {
            let x = FourVector::new(t, r, 0.0, 0.0);
            println!("{t:>6.2} {r:>6.2} {:>12.6} {:>12.6}", pauli_jordan_lattice(&x, &lat), pauli_jordan_grad(&x, &lat)[0]);
        }
    }

    let x = FourVector::new(1.0, 0.3, 0.2, 0.1);
    let map = LorentzMap::boost(Axis::Z, 0.5);
    let quarter = LorentzMap::quarter_turn(Axis::Z, 1);
    println!("quarter turn deviation: {:.1e}", boost_invariance_check(&x, &quarter, &lat)?.deviation);
    println!("boost deviation at fixed cutoff k_max = 3:");
    for row in refinement_study(&x, &map, 3.0, &[2, 4, 8])? {
        println!("  n_max={:2} modes={:5} deviation={:.3e}", row.n_max, row.n_modes, row.check.deviation);
    }
    Ok(())
}
