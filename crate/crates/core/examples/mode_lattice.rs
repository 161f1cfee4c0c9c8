//! The light-cone mode lattice: counts, weights, reflection pairs and the
//! invariant measure.

use covbracket::lattice::build_lattice;
use covbracket::minkowski::{Axis, LorentzMap};

fn main() -> covbracket::Result<()> {
    for n_max in 1..=3 {
        let lat = build_lattice(0.5, n_max)?;
        let total_w = lat.measure_sum(|_| 1.0)?;
        println!("n_max={n_max}: {:4} modes, Σw = {total_w:.6}", lat.len());
    }

    let lat = build_lattice(0.5, 2)?;
    let j = 7;
    let m = &lat.modes[j];
    let p = &lat.modes[lat.partner(j).unwrap()];
    println!("mode {j}: n={:?} k0={:.4} w={:.6} (Δk³/2k₀ = {:.6})", m.n, m.k0, m.w, lat.cell_volume() / (2.0 * m.k0));
    println!("partner:  n={:?}", p.n);

    let odd = lat.measure_sum(|m| m.k_spatial[0] * m.k0)?;
    let even = lat.measure_sum(|m| m.k0 * m.k0)?;
    println!("odd integrand / even integrand = {:.1e}", odd / even);

    let boosted = lat.boosted(&LorentzMap::boost(Axis::X, 0.6));
    let worst = boosted.modes.iter().map(|m| m.k().norm_sq().abs() / (m.k0 * m.k0)).fold(0.0, f64::max);
    println!("after a boost: weights unchanged = {}, max |k·k|/k₀² = {worst:.1e}", boosted.modes.iter().zip(&lat.modes).all(|(a, b)| a.w == b.w));
    Ok(())
}
