//! Random polynomial observables for property checks.

use num_complex::Complex64;
use rand::Rng;

use super::{Monomial, PolyObservable, Var};

/// Shape of a random polynomial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolySpec {
    pub n_modes: usize,
    pub terms: usize,
    pub max_degree: usize,
    /// Allow particle coordinates as variables.
    pub particle: bool,
    /// Allow field amplitudes as variables.
    pub field: bool,
}

impl PolySpec {
    pub fn joint(n_modes: usize) -> Self {
        PolySpec {
            n_modes,
            terms: 4,
            max_degree: 3,
            particle: true,
            field: true,
        }
    }
}

fn random_var<R: Rng + ?Sized>(rng: &mut R, spec: &PolySpec) -> Var {
    let field = spec.field && spec.n_modes > 0;
    let pick_field = match (field, spec.particle) {
        (true, true) => rng.gen_bool(0.75),
        (true, false) => true,
        (false, true) => false,
        (false, false) => panic!("polynomial spec allows no variables"),
    };
    let mu = rng.gen_range(0..4u8);
    if pick_field {
        let mode = rng.gen_range(0..spec.n_modes);
        if rng.gen_bool(0.5) {
            Var::Amp { mode, mu }
        } else {
            Var::AmpConj { mode, mu }
        }
    } else if rng.gen_bool(0.5) {
        Var::X(mu)
    } else {
        Var::P(mu)
    }
}

/// Sum of `spec.terms` monomials of degree `1..=max_degree` with complex
/// coefficients uniform in the unit square.
pub fn random_polynomial<R: Rng + ?Sized>(rng: &mut R, spec: &PolySpec) -> PolyObservable {
    let mut p = PolyObservable::zero();
    for _ in 0..spec.terms {
        let degree = rng.gen_range(1..=spec.max_degree.max(1));
        let vars = (0..degree).map(|_| random_var(rng, spec)).collect();
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        p.add_term(Monomial::from_vars(vars), c);
    }
    p
}
