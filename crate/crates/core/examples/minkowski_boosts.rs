//! Boosts, rotations and the invariance of the Minkowski interval.

use covbracket::minkowski::{Axis, FourVector, LorentzMap};

fn main() {
    let u = FourVector::new(2.0, 0.3, -0.5, 1.1);
    let v = FourVector::new(1.0, 0.2, 0.4, -0.7);

    let boost = LorentzMap::boost(Axis::Z, 0.8);
    let turn = LorentzMap::rotation(Axis::X, 1.2);
    let map = boost.compose(&turn).compose(&LorentzMap::boost(Axis::Y, -0.4));

    println!("u·v          = {:+.15}", u.dot(&v));
    println!("(Λu)·(Λv)    = {:+.15}", map.apply(&u).dot(&map.apply(&v)));
    println!("|ΛᵀηΛ − η|   = {:.2e}", map.eta_residual());

    let rest = FourVector::new(1.0, 0.0, 0.0, 0.0);
    let moving = boost.apply(&rest);
    println!("boosted rest frame: {:?}  (γ = cosh 0.8 = {:.12})", moving.0, 0.8f64.cosh());

    let two_steps = LorentzMap::boost(Axis::Z, 0.3).compose(&LorentzMap::boost(Axis::Z, 0.5));
    let diff = (two_steps.apply(&u) - boost.apply(&u)).max_abs();
    println!("collinear rapidities add: |Λ(0.3)Λ(0.5)u − Λ(0.8)u| = {diff:.2e}");

    let back = map.inverse().apply(&map.apply(&u));
    println!("Λ⁻¹Λu − u   = {:.2e}", (back - u).max_abs());
    println!("lower(u)     = {:?}", u.lower().0);
}
