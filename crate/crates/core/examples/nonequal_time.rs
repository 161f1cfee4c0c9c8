//! Free-field brackets between different times by tangent-map pullback,
//! compared with derivatives of the lattice Pauli-Jordan function.

use std::sync::Arc;

use covbracket::bracket::{nonequal_time_field_brackets, pauli_jordan_d00, pauli_jordan_d00_grad, BracketConfig};
use covbracket::lattice::build_lattice;
use covbracket::minkowski::FourVector;

fn main() -> covbracket::Result<()> {
    let lat = Arc::new(build_lattice(0.7, 2)?);
    let cfg = BracketConfig::new(4.0, 1.0, lat.clone())?;
    let x = FourVector::new(0.8, 0.2, -0.1, 0.4);
    let xp = FourVector::new(0.1, -0.3, 0.2, 0.0);
    let sep = x - xp;

    println!("{{A_μ(x), A_ν(x')}} against ∂₀²Δ_lat(x − x') = {:.6}", pauli_jordan_d00(&sep, &lat));
    for s in [0.0, 0.5, -1.0] {
        let b = nonequal_time_field_brackets(&x, &xp, s, &cfg)?;
        let ratio: Vec<String> = (0..4).map(|mu| format!("{:+.6}", b.aa[mu][mu] / pauli_jordan_d00(&sep, &lat))).collect();
        println!("  s={s:+.1}: diagonal / ∂₀²Δ = [{}], imag ≤ {:.1e}", ratio.join(", "), b.imag_max);
    }
    let b = nonequal_time_field_brackets(&x, &xp, 0.0, &cfg)?;
    let g = pauli_jordan_d00_grad(&sep, &lat);
    println!("{{A_1(x), θ_λ1(x')}} / ∂_λ∂₀²Δ_lat:");
    for lam in 0..4 {
        println!("  λ={lam}: {:+.6}", b.a_theta[1][lam][1] / g[lam]);
    }
    Ok(())
}
