//! Brackets of polynomial observables computed symbolically.
//!
//! The kernel is constant, so the bracket of two polynomials is again a
//! polynomial: `{F,G} = Σ_v ∂F/∂v · ∂G/∂v̄ · {v, v̄}` where `v̄` is the unique
//! coordinate paired with `v`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::BracketConfig;
use crate::minkowski::eta;
use crate::observable::{PolyObservable, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraicKind {
    Amp,
    Qpi,
    Particle,
    Joint,
}

/// Partner of `v` and the elementary bracket `{v, partner}`.
pub fn elementary(v: Var, kind: AlgebraicKind, cfg: &BracketConfig) -> Option<(Var, Complex64)> {
    let field = matches!(kind, AlgebraicKind::Amp | AlgebraicKind::Qpi | AlgebraicKind::Joint);
    let particle = matches!(kind, AlgebraicKind::Particle | AlgebraicKind::Joint);
    let factor = if kind == AlgebraicKind::Amp {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 4.0 * PI * cfg.c)
    };
    let mu = v.index();
    match v {
        Var::Amp { mode, .. } if field => Some((v.conjugate(), factor * cfg.amp_weight(mode) * eta(mu))),
        Var::AmpConj { mode, .. } if field => Some((v.conjugate(), -factor * cfg.amp_weight(mode) * eta(mu))),
        Var::X(m) if particle => Some((Var::P(m), Complex64::new(eta(mu), 0.0))),
        Var::P(m) if particle => Some((Var::X(m), Complex64::new(-eta(mu), 0.0))),
        _ => None,
    }
}

pub fn poly_bracket(a: &PolyObservable, b: &PolyObservable, kind: AlgebraicKind, cfg: &BracketConfig) -> PolyObservable {
    let b_vars = b.variables();
    let mut out = PolyObservable::zero();
    for v in a.variables() {
        let Some((w, k)) = elementary(v, kind, cfg) else { continue };
        if b_vars.binary_search(&w).is_err() {
            continue;
        }
        let term = &a.partial(v) * &b.partial(w);
        out = &out + &term.scale(k);
    }
    out
}

/// Cyclic Jacobi sum `{{A,B},C} + {{B,C},A} + {{C,A},B}` and the largest
/// coefficient among its three constituents.
pub fn jacobi_residual(
    a: &PolyObservable,
    b: &PolyObservable,
    c: &PolyObservable,
    kind: AlgebraicKind,
    cfg: &BracketConfig,
) -> (PolyObservable, f64) {
    let t1 = poly_bracket(&poly_bracket(a, b, kind, cfg), c, kind, cfg);
    let t2 = poly_bracket(&poly_bracket(b, c, kind, cfg), a, kind, cfg);
    let t3 = poly_bracket(&poly_bracket(c, a, kind, cfg), b, kind, cfg);
    let scale = t1.max_coefficient().max(t2.max_coefficient()).max(t3.max_coefficient());
    (&(&t1 + &t2) + &t3, scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;
    use crate::observable::{amp, amp_conj, p, x};
    use std::sync::Arc;

    fn cfg() -> BracketConfig {
        BracketConfig::new(4.0, 1.0, Arc::new(build_lattice(1.0, 1).unwrap())).unwrap()
    }

    #[test]
    fn elementary_pairs() {
        let cfg = cfg();
        let j = cfg.lattice.find([0, 1, 0]).unwrap();
        let b = poly_bracket(&amp(j, 2), &amp_conj(j, 2), AlgebraicKind::Amp, &cfg);
        assert_eq!(b, PolyObservable::real(-8.0));
        let b = poly_bracket(&x(0), &p(0), AlgebraicKind::Joint, &cfg);
        assert_eq!(b, PolyObservable::real(1.0));
        assert!(poly_bracket(&x(0), &p(0), AlgebraicKind::Amp, &cfg).is_zero());
    }

    #[test]
    fn antisymmetric() {
        let cfg = cfg();
        let f = &(&amp(3, 1) * &x(2)) + &amp_conj(3, 1).pow(2);
        let g = &(&amp_conj(3, 1) * &p(2)) + &amp(3, 1);
        let ab = poly_bracket(&f, &g, AlgebraicKind::Joint, &cfg);
        let ba = poly_bracket(&g, &f, AlgebraicKind::Joint, &cfg);
        assert!((&ab + &ba).is_zero());
    }
}
