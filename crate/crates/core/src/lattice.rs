//! On-shell mode lattice.
//!
//! The invariant measure `∫d⁴k Θ(k₀) δ(k·k) f(k)` is discretized as
//! `Σ_j w_j f(k_j)` with `k⃗_j = Δk·n⃗_j` on the cube `[−n_max, n_max]³`
//! minus the origin and `w_j = Δk³ / (2k₀_j)`.

use serde::{Deserialize, Serialize};

use crate::minkowski::{FourVector, LorentzMap};
use crate::summation::NeumaierSum;
use crate::{Error, Result};

/// One light-like wavevector with its weight and polarization tetrad.
#[derive(Clone, Debug, PartialEq)]
pub struct Mode {
    pub index: usize,
    /// Integer lattice coordinates (unchanged by boosts).
    pub n: [i32; 3],
    pub k_spatial: [f64; 3],
    pub k0: f64,
    pub w: f64,
    /// `ε⁰ = (1,0,0,0)`, then `(0, e₁)`, `(0, e₂)`, `(0, e₃ = k̂)`.
    pub tetrad: [FourVector; 4],
}

impl Mode {
    /// Contravariant wavevector `(k₀, k⃗)`.
    pub fn k(&self) -> FourVector {
        FourVector::from_parts(self.k0, self.k_spatial)
    }

    /// Covariant component `k_μ`.
    pub fn k_cov(&self, mu: usize) -> f64 {
        if mu == 0 {
            self.k0
        } else {
            -self.k_spatial[mu - 1]
        }
    }

    /// `k·x` for a contravariant point `x`.
    pub fn phase(&self, x: &FourVector) -> f64 {
        self.k0 * x[0] - self.k_spatial[0] * x[1] - self.k_spatial[1] * x[2] - self.k_spatial[2] * x[3]
    }

    /// Spatial unit vector `e_i` of the tetrad, `i = 1..=3`.
    pub fn e(&self, i: usize) -> [f64; 3] {
        self.tetrad[i].spatial()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeParams {
    pub delta_k: f64,
    pub n_max: usize,
}

impl Default for LatticeParams {
    fn default() -> Self {
        LatticeParams {
            delta_k: 1.0,
            n_max: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeLattice {
    pub delta_k: f64,
    pub n_max: usize,
    pub modes: Vec<Mode>,
    /// Closed under `k⃗ → −k⃗` with partner index `len − 1 − j`.
    pub symmetric: bool,
}

impl ModeLattice {
    pub fn build(delta_k: f64, n_max: usize) -> Result<Self> {
        build_lattice(delta_k, n_max)
    }

    pub fn from_params(p: &LatticeParams) -> Result<Self> {
        build_lattice(p.delta_k, p.n_max)
    }

    /// Lattice without modes, for particle-only systems.
    pub fn empty() -> Self {
        ModeLattice {
            delta_k: 1.0,
            n_max: 0,
            modes: Vec::new(),
            symmetric: true,
        }
    }

    pub fn params(&self) -> LatticeParams {
        LatticeParams {
            delta_k: self.delta_k,
            n_max: self.n_max,
        }
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn mode(&self, j: usize) -> Result<&Mode> {
        self.modes.get(j).ok_or(Error::IndexOutOfRange {
            what: "mode",
            index: j,
            limit: self.modes.len(),
        })
    }

    /// Cell volume `Δk³`.
    pub fn cell_volume(&self) -> f64 {
        self.delta_k.powi(3)
    }

    /// Index of the mode at `−k⃗_j`.
    pub fn partner(&self, j: usize) -> Option<usize> {
        (self.symmetric && j < self.modes.len()).then(|| self.modes.len() - 1 - j)
    }

    /// Index of the mode with integer coordinates `n`.
    pub fn find(&self, n: [i32; 3]) -> Option<usize> {
        if !self.symmetric {
            return self.modes.iter().position(|m| m.n == n);
        }
        let side = 2 * self.n_max as i64 + 1;
        let h = self.n_max as i64;
        if n.iter().any(|&c| (c as i64).abs() > h) || n == [0, 0, 0] {
            return None;
        }
        let lin = ((n[0] as i64 + h) * side + (n[1] as i64 + h)) * side + (n[2] as i64 + h);
        let origin = (side * side * side) / 2;
        Some(if lin < origin { lin } else { lin - 1 } as usize)
    }

    /// `Σ_j w_j f(mode_j)` in lattice order with compensated summation.
    pub fn measure_sum<F: Fn(&Mode) -> f64>(&self, f: F) -> Result<f64> {
        measure_sum(self, f)
    }

    /// Apply `Λ` to every mode. The result is an irregular point set and is
    /// no longer marked symmetric.
    pub fn boosted(&self, map: &LorentzMap) -> Self {
        ModeLattice {
            delta_k: self.delta_k,
            n_max: self.n_max,
            modes: self.modes.iter().map(|m| boost_mode(map, m)).collect(),
            symmetric: false,
        }
    }
}

/// Full cube of modes, lexicographic in `(n₁, n₂, n₃)`, origin excluded.
pub fn build_lattice(delta_k: f64, n_max: usize) -> Result<ModeLattice> {
    if !(delta_k.is_finite() && delta_k > 0.0) {
        return Err(Error::InvalidParameter(format!("delta_k must be positive, got {delta_k}")));
    }
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let h = n_max as i32;
    let cell = delta_k.powi(3);
    let side = 2 * n_max + 1;
    let mut modes = Vec::with_capacity(side * side * side - 1);
    for n1 in -h..=h {
        for n2 in -h..=h {
            for n3 in -h..=h {
                if (n1, n2, n3) == (0, 0, 0) {
                    continue;
                }
                let k_spatial = [n1 as f64 * delta_k, n2 as f64 * delta_k, n3 as f64 * delta_k];
                let k0 = norm3(&k_spatial);
                modes.push(Mode {
                    index: modes.len(),
                    n: [n1, n2, n3],
                    k_spatial,
                    k0,
                    w: cell / (2.0 * k0),
                    tetrad: tetrad_for(k_spatial)?,
                });
            }
        }
    }
    Ok(ModeLattice {
        delta_k,
        n_max,
        modes,
        symmetric: true,
    })
}

/// Polarization tetrad for a nonzero spatial wavevector.
///
/// `e₃ = k̂`; `e₁` is Gram-Schmidt of the coordinate axis along which `k̂` has
/// the smallest magnitude (first such axis in x, y, z order); `e₂ = e₃ × e₁`.
pub fn tetrad_for(k_spatial: [f64; 3]) -> Result<[FourVector; 4]> {
    let len = norm3(&k_spatial);
    if !(len.is_finite() && len > 0.0) {
        return Err(Error::InvalidParameter("tetrad of a zero or non-finite wavevector".into()));
    }
    let e3 = k_spatial.map(|c| c / len);
    let mut axis = 0;
    for i in 1..3 {
        if e3[i].abs() < e3[axis].abs() {
            axis = i;
        }
    }
    let mut e1 = [0.0; 3];
    e1[axis] = 1.0;
    let proj = e3[axis];
    for i in 0..3 {
        e1[i] -= proj * e3[i];
    }
    let n1 = norm3(&e1);
    e1 = e1.map(|c| c / n1);
    let e2 = cross(&e3, &e1);
    Ok([
        FourVector::basis(0),
        FourVector::from_parts(0.0, e1),
        FourVector::from_parts(0.0, e2),
        FourVector::from_parts(0.0, e3),
    ])
}

pub fn measure_sum<F: Fn(&Mode) -> f64>(lattice: &ModeLattice, f: F) -> Result<f64> {
    let mut acc = NeumaierSum::new();
    for m in &lattice.modes {
        let v = f(m);
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("measure_sum integrand at mode {}", m.index)));
        }
        acc.add(m.w * v);
    }
    Ok(acc.value())
}

/// Boost a mode: `k' = Λk`, `k₀'` re-derived from `|k⃗'|`, weight kept
/// (`d³k/2k₀` is invariant), tetrad rebuilt from `k⃗'`.
pub fn boost_mode(map: &LorentzMap, m: &Mode) -> Mode {
    let kp = map.apply(&m.k());
    let k_spatial = kp.spatial();
    let k0 = norm3(&k_spatial);
    Mode {
        index: m.index,
        n: m.n,
        k_spatial,
        k0,
        w: m.w,
        tetrad: tetrad_for(k_spatial).expect("a proper Lorentz map sends nonzero null vectors to nonzero null vectors"),
    }
}

pub(crate) fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::Axis;

    #[test]
    fn counts_and_weights() {
        let l = build_lattice(1.0, 1).unwrap();
        assert_eq!(l.len(), 26);
        let j = l.find([0, 0, 1]).unwrap();
        assert_eq!(l.modes[j].n, [0, 0, 1]);
        assert_eq!(l.modes[j].k0, 1.0);
        assert_eq!(l.modes[j].w, 0.5);
        assert_eq!(build_lattice(0.5, 3).unwrap().len(), 7 * 7 * 7 - 1);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_lattice(0.0, 1).is_err());
        assert!(build_lattice(-1.0, 1).is_err());
        assert!(build_lattice(1.0, 0).is_err());
        assert!(tetrad_for([0.0; 3]).is_err());
    }

    #[test]
    fn partner_is_reflection_and_find_agrees() {
        let l = build_lattice(0.7, 2).unwrap();
        for m in &l.modes {
            let p = &l.modes[l.partner(m.index).unwrap()];
            assert_eq!(p.n, m.n.map(|c| -c));
            assert_eq!(l.find(m.n), Some(m.index));
        }
    }

    #[test]
    fn unit_measure_matches_integer_sum() {
        let l = build_lattice(1.0, 1).unwrap();
        let got = l.measure_sum(|_| 1.0).unwrap();
        let mut expect = 0.0;
        for a in -1i32..=1 {
            for b in -1i32..=1 {
                for c in -1i32..=1 {
                    if (a, b, c) != (0, 0, 0) {
                        expect += 1.0 / (2.0 * ((a * a + b * b + c * c) as f64).sqrt());
                    }
                }
            }
        }
        assert!((got - expect).abs() < 1e-14);
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let l = build_lattice(1.0, 1).unwrap();
        assert!(l.measure_sum(|m| if m.index == 3 { f64::NAN } else { 1.0 }).is_err());
    }

    #[test]
    fn axis_aligned_tetrad() {
        let t = tetrad_for([0.0, 0.0, 2.5]).unwrap();
        assert_eq!(t[1].spatial(), [1.0, 0.0, 0.0]);
        assert_eq!(t[2].spatial(), [0.0, 1.0, 0.0]);
        assert_eq!(t[3].spatial(), [0.0, 0.0, 1.0]);
    }

    #[test]
    fn boost_along_z_rescales_frequency() {
        let l = build_lattice(1.0, 1).unwrap();
        let chi = 0.6;
        let map = LorentzMap::boost(Axis::Z, chi);
        for m in &l.modes {
            let b = boost_mode(&map, m);
            let cos_t = m.k_spatial[2] / m.k0;
            let expect = m.k0 * (chi.cosh() + cos_t * chi.sinh());
            assert!((b.k0 - expect).abs() < 1e-12 * expect);
            assert!(b.k().norm_sq().abs() < 1e-12 * b.k0 * b.k0);
            assert_eq!(b.w, m.w);
        }
    }
}
