//! Finite-difference tangent maps of the evolution and the joint-bracket
//! symplecticity check built on them.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::integrate::evolve_real;
use super::EvolutionConfig;
use crate::bracket::{bracket_nonequal_time, BracketConfig, TangentMap, TangentSummary};
use crate::minkowski::{metric, Tensor2};
use crate::observable as catalog;
use crate::state::SystemState;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TangentOptions {
    /// Relative step; coordinate `i` is perturbed by `h·max(|zᵢ|, 1)`.
    pub h: f64,
    /// Largest accepted discrepancy between the `h` and `h/2` columns,
    /// relative to the largest Jacobian entry.
    pub tolerance: f64,
}

impl Default for TangentOptions {
    fn default() -> Self {
        TangentOptions { h: 1e-4, tolerance: 1e-4 }
    }
}

fn central_column(state: &SystemState, cfg: &EvolutionConfig, z0: &[f64], i: usize, step: f64) -> Result<Vec<f64>> {
    let mut plus = z0.to_vec();
    let mut minus = z0.to_vec();
    plus[i] += step;
    minus[i] -= step;
    evolve_real(state, cfg, &mut plus)?;
    evolve_real(state, cfg, &mut minus)?;
    Ok(plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * step)).collect())
}

/// Jacobian of the end state with respect to the initial coordinates.
///
/// Columns are central differences at steps `h` and `h/2`, combined by
/// Richardson extrapolation; their discrepancy is reported and checked
/// against `opts.tolerance`.
pub fn tangent_map(state: &SystemState, cfg: &EvolutionConfig, opts: &TangentOptions) -> Result<TangentMap> {
    cfg.validate()?;
    if !(opts.h.is_finite() && opts.h > 0.0) {
        return Err(Error::InvalidParameter(format!("finite-difference step must be positive, got {}", opts.h)));
    }
    let n = state.n_modes();
    if cfg.steps == 0 {
        return Ok(TangentMap::identity(n));
    }
    let z0 = state.to_real();
    let dim = z0.len();
    let columns: Vec<(Vec<f64>, f64)> = (0..dim)
        .into_par_iter()
        .map(|i| {
            let step = opts.h * z0[i].abs().max(1.0);
            let coarse = central_column(state, cfg, &z0, i, step)?;
            let fine = central_column(state, cfg, &z0, i, 0.5 * step)?;
            let mut gap = 0.0f64;
            let col = coarse
                .iter()
                .zip(&fine)
                .map(|(c, f)| {
                    gap = gap.max((c - f).abs());
                    (4.0 * f - c) / 3.0
                })
                .collect();
            Ok((col, gap))
        })
        .collect::<Result<_>>()?;
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    let mut gap = 0.0f64;
    for (j, (col, g)) in columns.iter().enumerate() {
        gap = gap.max(*g);
        for i in 0..dim {
            m[(i, j)] = col[i];
        }
    }
    let scale = m.amax().max(1.0);
    let discrepancy = gap / scale;
    if discrepancy > opts.tolerance {
        return Err(Error::TangentMap(format!(
            "finite differences not converged: h vs h/2 discrepancy {discrepancy:e} > {:e}",
            opts.tolerance
        )));
    }
    TangentMap::new(m, n, cfg.duration(), discrepancy)
}

#[derive(Clone, Debug, Serialize)]
pub struct SymplecticReport {
    /// `M[μ][ν] = {x_μ(τ), p_ν(τ)}` evaluated at the initial time.
    pub matrix: Tensor2,
    /// `max |M − η|`.
    pub deviation: f64,
    pub tangent: TangentSummary,
}

/// `{x_μ(τ), p_ν(τ)}_QP(s)` through the tangent map of `cfg` and the joint
/// bracket with constants taken from the field.
pub fn symplectic_check(state: &SystemState, cfg: &EvolutionConfig, opts: &TangentOptions) -> Result<SymplecticReport> {
    let map = tangent_map(state, cfg, opts)?;
    symplectic_matrix(state, cfg, &map)
}

/// Same as [`symplectic_check`] with a precomputed tangent map.
pub fn symplectic_matrix(state: &SystemState, cfg: &EvolutionConfig, map: &TangentMap) -> Result<SymplecticReport> {
    let end = super::evolve(state, cfg)?;
    let bcfg = BracketConfig::for_field(&state.field)?;
    let eta = metric();
    let mut matrix = [[0.0; 4]; 4];
    let mut deviation = 0.0f64;
    for mu in 0..4 {
        let xo = catalog::x_cov(mu);
        for nu in 0..4 {
            let po = catalog::p_cov(nu);
            let r = bracket_nonequal_time(&xo, (&end, map), &po, (&end, map), &bcfg)?;
            matrix[mu][nu] = r.value.re;
            deviation = deviation.max((r.value - eta[mu][nu]).norm());
        }
    }
    Ok(SymplecticReport {
        matrix,
        deviation,
        tangent: map.into(),
    })
}
