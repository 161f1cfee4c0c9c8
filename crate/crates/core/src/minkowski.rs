//! Four-vectors, covectors and Lorentz maps in signature (+,−,−,−).
//!
//! [`FourVector`] always stores contravariant components. Lowering an index
//! produces a [`CoVector`]; raising it again is exact because the metric only
//! flips signs.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Diagonal of the Minkowski metric.
pub const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Complex four-component array, used for mode amplitudes.
pub type CVec4 = [Complex64; 4];

/// Dense rank-2 array indexed `[mu][nu]`.
pub type Tensor2 = [[f64; 4]; 4];

#[inline]
pub fn eta(mu: usize) -> f64 {
    ETA[mu]
}

/// Metric tensor as a dense array.
pub fn metric() -> Tensor2 {
    let mut g = [[0.0; 4]; 4];
    for (mu, row) in g.iter_mut().enumerate() {
        row[mu] = ETA[mu];
    }
    g
}

/// Contravariant four-vector `(t, x, y, z)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FourVector(pub [f64; 4]);

/// Covariant four-vector, obtained from [`FourVector::lower`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoVector(pub [f64; 4]);

impl FourVector {
    pub const ZERO: FourVector = FourVector([0.0; 4]);

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector([t, x, y, z])
    }

    pub fn from_parts(t: f64, spatial: [f64; 3]) -> Self {
        FourVector([t, spatial[0], spatial[1], spatial[2]])
    }

    /// Unit vector along coordinate `mu`.
    pub fn basis(mu: usize) -> Self {
        let mut v = [0.0; 4];
        v[mu] = 1.0;
        FourVector(v)
    }

    pub fn t(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    pub fn lower(&self) -> CoVector {
        let v = self.0;
        CoVector([v[0], -v[1], -v[2], -v[3]])
    }

    /// `u⁰v⁰ − u·v`.
    pub fn dot(&self, other: &FourVector) -> f64 {
        minkowski_dot(self, other)
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

impl CoVector {
    pub fn raise(&self) -> FourVector {
        let v = self.0;
        FourVector([v[0], -v[1], -v[2], -v[3]])
    }

    /// Contraction `w_μ v^μ`, no metric involved.
    pub fn contract(&self, v: &FourVector) -> f64 {
        self.0[0] * v.0[0] + self.0[1] * v.0[1] + self.0[2] * v.0[2] + self.0[3] * v.0[3]
    }
}

/// Minkowski product of two contravariant vectors.
pub fn minkowski_dot(u: &FourVector, v: &FourVector) -> f64 {
    let (a, b) = (u.0, v.0);
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

/// Minkowski product of complex component arrays, bilinear (no conjugation).
pub fn cdot(u: &CVec4, v: &CVec4) -> Complex64 {
    u[0] * v[0] - u[1] * v[1] - u[2] * v[2] - u[3] * v[3]
}

/// `Σ_μ k_μ v^μ` for a real vector `k` and complex `v`.
pub fn dot_real_complex(k: &FourVector, v: &CVec4) -> Complex64 {
    v[0] * k.0[0] - v[1] * k.0[1] - v[2] * k.0[2] - v[3] * k.0[3]
}

macro_rules! vector_ops {
    ($ty:ident) => {
        impl Index<usize> for $ty {
            type Output = f64;
            fn index(&self, i: usize) -> &f64 {
                &self.0[i]
            }
        }

        impl IndexMut<usize> for $ty {
            fn index_mut(&mut self, i: usize) -> &mut f64 {
                &mut self.0[i]
            }
        }

        impl Add for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty {
                $ty(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
            }
        }

        impl AddAssign for $ty {
            fn add_assign(&mut self, rhs: $ty) {
                for i in 0..4 {
                    self.0[i] += rhs.0[i];
                }
            }
        }

        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty {
                $ty(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
            }
        }

        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty(self.0.map(|c| -c))
            }
        }

        impl Mul<f64> for $ty {
            type Output = $ty;
            fn mul(self, s: f64) -> $ty {
                $ty(self.0.map(|c| c * s))
            }
        }

        impl Mul<$ty> for f64 {
            type Output = $ty;
            fn mul(self, v: $ty) -> $ty {
                v * self
            }
        }
    };
}

vector_ops!(FourVector);
vector_ops!(CoVector);

impl fmt::Display for FourVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.0;
        write!(f, "({}, {}, {}, {})", v[0], v[1], v[2], v[3])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    /// Spatial component index (1, 2 or 3).
    pub fn index(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(crate::Error::InvalidParameter(format!("unknown axis {other:?}"))),
        }
    }
}

/// A proper orthochronous Lorentz transformation acting on contravariant
/// components.
///
/// Only boosts, rotations and their compositions can be built, so
/// `ΛᵀηΛ = η` holds up to rounding for every value of this type.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzMap {
    m: Matrix4<f64>,
}

impl LorentzMap {
    pub fn identity() -> Self {
        LorentzMap {
            m: Matrix4::identity(),
        }
    }

    pub fn boost(axis: Axis, rapidity: f64) -> Self {
        let i = axis.index();
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        let mut m = Matrix4::identity();
        m[(0, 0)] = ch;
        m[(i, i)] = ch;
        m[(0, i)] = sh;
        m[(i, 0)] = sh;
        LorentzMap { m }
    }

    /// Active right-handed rotation of the spatial part about `axis`.
    pub fn rotation(axis: Axis, angle: f64) -> Self {
        Self::rotation_cs(axis, angle.cos(), angle.sin())
    }

    /// Rotation by `quarter_turns · 90°` with exact integer entries.
    pub fn quarter_turn(axis: Axis, quarter_turns: i32) -> Self {
        let (c, s) = match quarter_turns.rem_euclid(4) {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
        Self::rotation_cs(axis, c, s)
    }

    fn rotation_cs(axis: Axis, c: f64, s: f64) -> Self {
        let (a, b) = match axis {
            Axis::X => (2, 3),
            Axis::Y => (3, 1),
            Axis::Z => (1, 2),
        };
        let mut m = Matrix4::identity();
        m[(a, a)] = c;
        m[(b, b)] = c;
        m[(a, b)] = -s;
        m[(b, a)] = s;
        LorentzMap { m }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &LorentzMap) -> Self {
        LorentzMap { m: self.m * other.m }
    }

    /// `Λ⁻¹ = η Λᵀ η`.
    pub fn inverse(&self) -> Self {
        let g = Matrix4::from_diagonal(&Vector4::from(ETA));
        LorentzMap {
            m: g * self.m.transpose() * g,
        }
    }

    pub fn apply(&self, v: &FourVector) -> FourVector {
        let out = self.m * Vector4::from(v.0);
        FourVector([out[0], out[1], out[2], out[3]])
    }

    /// Covariant components transform with `(Λ⁻¹)ᵀ = η Λ η`.
    pub fn apply_covector(&self, w: &CoVector) -> CoVector {
        let g = Matrix4::from_diagonal(&Vector4::from(ETA));
        let out = g * self.m * g * Vector4::from(w.0);
        CoVector([out[0], out[1], out[2], out[3]])
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.m[(row, col)]
    }

    /// Max-abs entry of `ΛᵀηΛ − η`.
    pub fn eta_residual(&self) -> f64 {
        let g = Matrix4::from_diagonal(&Vector4::from(ETA));
        (self.m.transpose() * g * self.m - g).amax()
    }
}

impl Default for LorentzMap {
    fn default() -> Self {
        Self::identity()
    }
}

impl Mul for LorentzMap {
    type Output = LorentzMap;
    fn mul(self, rhs: LorentzMap) -> LorentzMap {
        self.compose(&rhs)
    }
}

pub fn boost(axis: Axis, rapidity: f64) -> LorentzMap {
    LorentzMap::boost(axis, rapidity)
}

pub fn apply(map: &LorentzMap, v: &FourVector) -> FourVector {
    map.apply(v)
}
