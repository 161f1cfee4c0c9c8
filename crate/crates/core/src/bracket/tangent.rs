//! Brackets of observables taken at different times, by pulling their
//! gradients back through the tangent map of the flow.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::{joint_from_gradients, BracketConfig, BracketKind, BracketReport};
use crate::lattice::ModeLattice;
use crate::observable::{Gradient, Observable};
use crate::state::SystemState;
use crate::{Error, Result};

/// Jacobian `∂z(τ)/∂z(s)` in the real coordinates `(x, p, Re𝒜, Im𝒜)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentMap {
    matrix: DMatrix<f64>,
    n_modes: usize,
    /// `τ − s`.
    pub duration: f64,
    /// Largest Richardson discrepancy between step sizes `h` and `h/2`
    /// (zero for analytic maps).
    pub fd_discrepancy: f64,
    determinant: f64,
}

impl TangentMap {
    /// Validate and wrap a Jacobian. Rejects non-finite entries and maps
    /// whose determinant is not safely away from zero.
    pub fn new(matrix: DMatrix<f64>, n_modes: usize, duration: f64, fd_discrepancy: f64) -> Result<Self> {
        let dim = 8 + 8 * n_modes;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::TangentMap(format!(
                "expected {dim}x{dim}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::TangentMap("non-finite entry".into()));
        }
        let determinant = matrix.clone().lu().determinant();
        if !determinant.is_finite() || determinant.abs() < 1e-10 {
            return Err(Error::TangentMap(format!("singular or ill-conditioned (det = {determinant:e})")));
        }
        Ok(TangentMap {
            matrix,
            n_modes,
            duration,
            fd_discrepancy,
            determinant,
        })
    }

    pub fn identity(n_modes: usize) -> Self {
        let dim = 8 + 8 * n_modes;
        TangentMap {
            matrix: DMatrix::identity(dim, dim),
            n_modes,
            duration: 0.0,
            fd_discrepancy: 0.0,
            determinant: 1.0,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn determinant(&self) -> f64 {
        self.determinant
    }

    /// Gradient at the initial state of `F ∘ flow`: `∇_s = Jᵀ ∇_τ`.
    pub fn pullback(&self, g: &Gradient) -> Result<Gradient> {
        if g.n_modes() != self.n_modes {
            return Err(Error::TangentMap(format!(
                "gradient has {} modes, map has {}",
                g.n_modes(),
                self.n_modes
            )));
        }
        let real = g.to_real();
        let re = DVector::from_iterator(real.len(), real.iter().map(|z| z.re));
        let im = DVector::from_iterator(real.len(), real.iter().map(|z| z.im));
        let pr = self.matrix.tr_mul(&re);
        let pi = self.matrix.tr_mul(&im);
        let back: Vec<Complex64> = pr.iter().zip(pi.iter()).map(|(&r, &i)| Complex64::new(r, i)).collect();
        Ok(Gradient::from_real(&back))
    }
}

/// Exact tangent map of the free field evolved by `dt` in `x⁰`, acting on
/// instantaneous amplitudes `𝔞(t) = 𝒜 e^{−ik₀t}`: a rotation
/// `𝔞 → 𝔞 e^{−ik₀ dt}` per mode, identity on the particle block.
pub fn free_field_tangent(lattice: &ModeLattice, dt: f64) -> Result<TangentMap> {
    let n = lattice.len();
    let dim = 8 + 8 * n;
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..8 {
        m[(i, i)] = 1.0;
    }
    for (j, mode) in lattice.modes.iter().enumerate() {
        let (sn, cs) = (mode.k0 * dt).sin_cos();
        for mu in 0..4 {
            let re = 8 + 4 * j + mu;
            let im = 8 + 4 * n + 4 * j + mu;
            // (u + iv)(cos − i sin) = (u cos + v sin) + i(v cos − u sin)
            m[(re, re)] = cs;
            m[(re, im)] = sn;
            m[(im, re)] = -sn;
            m[(im, im)] = cs;
        }
    }
    TangentMap::new(m, n, dt, 0.0)
}

/// `{A(τ_A), B(τ_B)}(s)`: each observable's gradient, taken at the state
/// it is evaluated on, is pulled back to time `s` through the tangent map
/// of the flow `s → τ`, and the joint bracket is formed there.
pub fn bracket_nonequal_time<A, B>(
    a: &A,
    at_a: (&SystemState, &TangentMap),
    b: &B,
    at_b: (&SystemState, &TangentMap),
    cfg: &BracketConfig,
) -> Result<BracketReport>
where
    A: Observable + ?Sized,
    B: Observable + ?Sized,
{
    let ga = at_a.1.pullback(&a.gradient(at_a.0)?)?;
    let gb = at_b.1.pullback(&b.gradient(at_b.0)?)?;
    let mut r = joint_from_gradients(&ga, &gb, cfg)?;
    r.kind = BracketKind::NonEqualTime;
    Ok(r)
}

/// Summary of a tangent map for JSON output.
#[derive(Clone, Debug, Serialize)]
pub struct TangentSummary {
    pub dim: usize,
    pub duration: f64,
    pub determinant: f64,
    pub fd_discrepancy: f64,
}

impl From<&TangentMap> for TangentSummary {
    fn from(t: &TangentMap) -> Self {
        TangentSummary {
            dim: t.dim(),
            duration: t.duration,
            determinant: t.determinant,
            fd_discrepancy: t.fd_discrepancy,
        }
    }
}
