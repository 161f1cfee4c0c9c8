//! Phase-space functionals with gradients.
//!
//! The primitive coordinates are the amplitudes `𝒜^μ(j)`, their conjugates
//! (treated as independent Wirtinger variables) and the particle's `x^μ`,
//! `p^μ`. Canonical `q`, `π`, polarization components and position-space
//! fields are all linear polynomials in these.

mod catalog;
mod parse;
mod random;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::minkowski::CVec4;
use crate::state::SystemState;
use crate::{Error, Result};

pub use catalog::*;
pub use parse::parse;
pub use random::{random_polynomial, PolySpec};

const C0: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A single phase-space coordinate. Lorentz indices are contravariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Amp { mode: usize, mu: u8 },
    AmpConj { mode: usize, mu: u8 },
    X(u8),
    P(u8),
}

impl Var {
    pub fn amp(mode: usize, mu: usize) -> Self {
        Var::Amp { mode, mu: mu as u8 }
    }

    pub fn amp_conj(mode: usize, mu: usize) -> Self {
        Var::AmpConj { mode, mu: mu as u8 }
    }

    pub fn conjugate(self) -> Self {
        match self {
            Var::Amp { mode, mu } => Var::AmpConj { mode, mu },
            Var::AmpConj { mode, mu } => Var::Amp { mode, mu },
            other => other,
        }
    }

    pub fn mode(self) -> Option<usize> {
        match self {
            Var::Amp { mode, .. } | Var::AmpConj { mode, .. } => Some(mode),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Var::Amp { mu, .. } | Var::AmpConj { mu, .. } | Var::X(mu) | Var::P(mu) => mu as usize,
        }
    }

    pub fn is_field(self) -> bool {
        self.mode().is_some()
    }

    fn value(self, state: &SystemState) -> Result<Complex64> {
        let mu = self.index();
        if mu > 3 {
            return Err(Error::IndexOutOfRange {
                what: "Lorentz index",
                index: mu,
                limit: 4,
            });
        }
        match self {
            Var::Amp { mode, .. } | Var::AmpConj { mode, .. } => {
                let v = state.field.amp.get(mode).ok_or(Error::IndexOutOfRange {
                    what: "mode",
                    index: mode,
                    limit: state.field.len(),
                })?[mu];
                Ok(if matches!(self, Var::Amp { .. }) { v } else { v.conj() })
            }
            Var::X(_) => Ok(Complex64::new(state.particle.x[mu], 0.0)),
            Var::P(_) => Ok(Complex64::new(state.particle.p[mu], 0.0)),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::Amp { mode, mu } => write!(f, "A[{mode},{mu}]"),
            Var::AmpConj { mode, mu } => write!(f, "Ac[{mode},{mu}]"),
            Var::X(mu) => write!(f, "x[{mu}]"),
            Var::P(mu) => write!(f, "p[{mu}]"),
        }
    }
}

/// Sorted multiset of variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<Var>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_vars(mut vars: Vec<Var>) -> Self {
        vars.sort_unstable();
        Monomial(vars)
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                out.push(self.0[i]);
                i += 1;
            } else {
                out.push(other.0[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    fn multiplicity(&self, v: Var) -> usize {
        self.0.iter().filter(|&&w| w == v).count()
    }

    /// Remove one occurrence of `v`, if present.
    fn without_one(&self, v: Var) -> Option<Monomial> {
        let pos = self.0.iter().position(|&w| w == v)?;
        let mut out = self.0.clone();
        out.remove(pos);
        Some(Monomial(out))
    }

    fn conjugate(&self) -> Monomial {
        Monomial::from_vars(self.0.iter().map(|v| v.conjugate()).collect())
    }

    /// Distinct variables with their multiplicities.
    fn powers(&self) -> impl Iterator<Item = (Var, usize)> + '_ {
        let mut i = 0;
        std::iter::from_fn(move || {
            let v = *self.0.get(i)?;
            let start = i;
            while i < self.0.len() && self.0[i] == v {
                i += 1;
            }
            Some((v, i - start))
        })
    }
}

/// Polynomial in the phase-space coordinates with complex coefficients.
///
/// Terms are kept in canonical (sorted) order and exact zeros are dropped.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolyObservable {
    terms: BTreeMap<Monomial, Complex64>,
}

impl PolyObservable {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn real(c: f64) -> Self {
        Self::constant(Complex64::new(c, 0.0))
    }

    pub fn var(v: Var) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial(vec![v]), Complex64::new(1.0, 0.0));
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Complex64)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Complex64) {
        if c == C0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == C0 {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or(C0)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Largest coefficient magnitude.
    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0_f64, |m, c| m.max(c.norm()))
    }

    /// Distinct variables appearing anywhere.
    pub fn variables(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self.terms.keys().flat_map(|m| m.0.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn scale(&self, s: Complex64) -> Self {
        if s == C0 {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * s)))
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Complex conjugate: conjugate coefficients and swap `𝒜 ↔ 𝒜*`.
    pub fn conjugate(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.conjugate(), c.conj())))
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let k = m.multiplicity(v);
            if k > 0 {
                out.add_term(m.without_one(v).expect("multiplicity > 0"), c * k as f64);
            }
        }
        out
    }

    pub fn evaluate(&self, state: &SystemState) -> Result<Complex64> {
        let mut cache: BTreeMap<Var, Complex64> = BTreeMap::new();
        let mut acc = crate::summation::ComplexSum::new();
        for (m, c) in &self.terms {
            let mut t = *c;
            for v in &m.0 {
                let val = match cache.get(v) {
                    Some(x) => *x,
                    None => {
                        let x = v.value(state)?;
                        cache.insert(*v, x);
                        x
                    }
                };
                t *= val;
            }
            acc.add(t);
        }
        Ok(acc.value())
    }

    /// Exact gradient at `state`.
    pub fn gradient(&self, state: &SystemState) -> Result<Gradient> {
        let mut g = Gradient::zeros(state.n_modes());
        for (m, c) in &self.terms {
            let vals: Vec<(Var, usize, Complex64)> = m
                .powers()
                .map(|(v, k)| v.value(state).map(|x| (v, k, x)))
                .collect::<Result<_>>()?;
            for (i, &(v, k, x)) in vals.iter().enumerate() {
                let mut t = c * k as f64 * x.powu(k as u32 - 1);
                for (l, &(_, k2, x2)) in vals.iter().enumerate() {
                    if l != i {
                        t *= x2.powu(k2 as u32);
                    }
                }
                g.add(v, t);
            }
        }
        Ok(g)
    }

    /// Drop terms whose coefficient magnitude is at most `tol`.
    pub fn prune(&self, tol: f64) -> Self {
        Self::from_terms(self.terms.iter().filter(|(_, c)| c.norm() > tol).map(|(m, c)| (m.clone(), *c)))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::real(1.0);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}

impl fmt::Display for PolyObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for v in &m.0 {
                write!(f, "*{v}")?;
            }
        }
        Ok(())
    }
}

impl Add for &PolyObservable {
    type Output = PolyObservable;
    fn add(self, rhs: &PolyObservable) -> PolyObservable {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }
}

impl Sub for &PolyObservable {
    type Output = PolyObservable;
    fn sub(self, rhs: &PolyObservable) -> PolyObservable {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -*c);
        }
        out
    }
}

impl Mul for &PolyObservable {
    type Output = PolyObservable;
    fn mul(self, rhs: &PolyObservable) -> PolyObservable {
        let mut out = PolyObservable::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.times(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &PolyObservable {
    type Output = PolyObservable;
    fn neg(self) -> PolyObservable {
        self.scale_real(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for PolyObservable {
            type Output = PolyObservable;
            fn $f(self, rhs: PolyObservable) -> PolyObservable {
                (&self).$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PolyObservable {
    type Output = PolyObservable;
    fn neg(self) -> PolyObservable {
        -&self
    }
}

/// Wirtinger gradient: `∂F/∂𝒜^μ`, `∂F/∂𝒜*^μ` per mode, and `∂F/∂x^μ`,
/// `∂F/∂p^μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradient {
    pub amp: Vec<CVec4>,
    pub amp_conj: Vec<CVec4>,
    pub x: CVec4,
    pub p: CVec4,
}

impl Gradient {
    pub fn zeros(n_modes: usize) -> Self {
        Gradient {
            amp: vec![[C0; 4]; n_modes],
            amp_conj: vec![[C0; 4]; n_modes],
            x: [C0; 4],
            p: [C0; 4],
        }
    }

    pub fn n_modes(&self) -> usize {
        self.amp.len()
    }

    pub fn get(&self, v: Var) -> Complex64 {
        let mu = v.index();
        match v {
            Var::Amp { mode, .. } => self.amp[mode][mu],
            Var::AmpConj { mode, .. } => self.amp_conj[mode][mu],
            Var::X(_) => self.x[mu],
            Var::P(_) => self.p[mu],
        }
    }

    pub fn add(&mut self, v: Var, val: Complex64) {
        let mu = v.index();
        match v {
            Var::Amp { mode, .. } => self.amp[mode][mu] += val,
            Var::AmpConj { mode, .. } => self.amp_conj[mode][mu] += val,
            Var::X(_) => self.x[mu] += val,
            Var::P(_) => self.p[mu] += val,
        }
    }

    pub fn is_finite(&self) -> bool {
        let f = |v: &CVec4| v.iter().all(|z| z.is_finite());
        f(&self.x) && f(&self.p) && self.amp.iter().all(f) && self.amp_conj.iter().all(f)
    }

    pub fn field_is_zero(&self) -> bool {
        let z = |v: &CVec4| v.iter().all(|c| *c == C0);
        self.amp.iter().all(z) && self.amp_conj.iter().all(z)
    }

    pub fn particle_is_zero(&self) -> bool {
        self.x.iter().chain(self.p.iter()).all(|c| *c == C0)
    }

    /// Gradient with respect to the real coordinates `(x, p, Re𝒜, Im𝒜)`:
    /// `∂F/∂u = F_z + F_z*`, `∂F/∂v = i(F_z − F_z*)`.
    pub fn to_real(&self) -> Vec<Complex64> {
        let n = self.n_modes();
        let mut out = Vec::with_capacity(8 + 8 * n);
        out.extend_from_slice(&self.x);
        out.extend_from_slice(&self.p);
        for j in 0..n {
            for mu in 0..4 {
                out.push(self.amp[j][mu] + self.amp_conj[j][mu]);
            }
        }
        for j in 0..n {
            for mu in 0..4 {
                out.push(I * (self.amp[j][mu] - self.amp_conj[j][mu]));
            }
        }
        out
    }

    /// Inverse of [`Self::to_real`]: `F_z = (F_u − iF_v)/2`,
    /// `F_z* = (F_u + iF_v)/2`.
    pub fn from_real(g: &[Complex64]) -> Self {
        assert!(g.len() >= 8 && (g.len() - 8).is_multiple_of(8), "real gradient length");
        let n = (g.len() - 8) / 8;
        let mut out = Gradient::zeros(n);
        out.x.copy_from_slice(&g[0..4]);
        out.p.copy_from_slice(&g[4..8]);
        for j in 0..n {
            for mu in 0..4 {
                let gu = g[8 + 4 * j + mu];
                let gv = g[8 + 4 * n + 4 * j + mu];
                out.amp[j][mu] = 0.5 * (gu - I * gv);
                out.amp_conj[j][mu] = 0.5 * (gu + I * gv);
            }
        }
        out
    }
}

/// Anything that can be evaluated on a phase-space point and differentiated.
pub trait Observable: Send + Sync {
    fn evaluate(&self, state: &SystemState) -> Result<Complex64>;
    fn gradient(&self, state: &SystemState) -> Result<Gradient>;
}

impl Observable for PolyObservable {
    fn evaluate(&self, state: &SystemState) -> Result<Complex64> {
        PolyObservable::evaluate(self, state)
    }

    fn gradient(&self, state: &SystemState) -> Result<Gradient> {
        PolyObservable::gradient(self, state)
    }
}

type Evaluator = dyn Fn(&SystemState) -> Complex64 + Send + Sync;

/// Black-box observable differentiated by central differences.
#[derive(Clone)]
pub struct GenericObservable {
    evaluator: Arc<Evaluator>,
    pub fd_step: f64,
}

impl fmt::Debug for GenericObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GenericObservable").field("fd_step", &self.fd_step).finish_non_exhaustive()
    }
}

impl GenericObservable {
    pub const DEFAULT_STEP: f64 = 1e-5;

    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&SystemState) -> Complex64 + Send + Sync + 'static,
    {
        GenericObservable {
            evaluator: Arc::new(f),
            fd_step: Self::DEFAULT_STEP,
        }
    }

    pub fn with_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }

    /// Wrap any observable as a black box.
    pub fn wrap<O: Observable + Clone + 'static>(o: O) -> Self {
        Self::new(move |s| o.evaluate(s).unwrap_or(Complex64::new(f64::NAN, f64::NAN)))
    }

    fn eval_checked(&self, state: &SystemState) -> Result<Complex64> {
        let v = (self.evaluator)(state);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite("generic observable evaluation".into()))
        }
    }

    /// Central difference along real coordinate `i` of `(x, p, Re𝒜, Im𝒜)`.
    fn real_partial(&self, state: &SystemState, z: &[f64], i: usize) -> Result<Complex64> {
        if !(self.fd_step > 0.0) {
            return Err(Error::InvalidParameter("fd_step must be positive".into()));
        }
        let h = self.fd_step * z[i].abs().max(1.0);
        let mut zp = z.to_vec();
        zp[i] += h;
        let mut zm = z.to_vec();
        zm[i] -= h;
        let fp = self.eval_checked(&state.with_real(&zp))?;
        let fm = self.eval_checked(&state.with_real(&zm))?;
        Ok((fp - fm) / (zp[i] - zm[i]))
    }

    /// Finite-difference derivative with respect to a single variable, in
    /// Wirtinger form for amplitude variables.
    pub fn fd_gradient(&self, state: &SystemState, v: Var) -> Result<Complex64> {
        let n = state.n_modes();
        let z = state.to_real();
        let mu = v.index();
        match v {
            Var::X(_) => self.real_partial(state, &z, mu),
            Var::P(_) => self.real_partial(state, &z, 4 + mu),
            Var::Amp { mode, .. } | Var::AmpConj { mode, .. } => {
                if mode >= n {
                    return Err(Error::IndexOutOfRange {
                        what: "mode",
                        index: mode,
                        limit: n,
                    });
                }
                let gu = self.real_partial(state, &z, 8 + 4 * mode + mu)?;
                let gv = self.real_partial(state, &z, 8 + 4 * n + 4 * mode + mu)?;
                Ok(if matches!(v, Var::Amp { .. }) {
                    0.5 * (gu - I * gv)
                } else {
                    0.5 * (gu + I * gv)
                })
            }
        }
    }
}

impl Observable for GenericObservable {
    fn evaluate(&self, state: &SystemState) -> Result<Complex64> {
        self.eval_checked(state)
    }

    fn gradient(&self, state: &SystemState) -> Result<Gradient> {
        let z = state.to_real();
        let real: Vec<Complex64> = (0..z.len())
            .into_par_iter()
            .map(|i| self.real_partial(state, &z, i))
            .collect::<Result<_>>()?;
        Ok(Gradient::from_real(&real))
    }
}
