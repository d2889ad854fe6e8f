//! Scalar abstraction and forward-mode automatic differentiation.
//!
//! All geometric evaluation code in this crate is generic over [`Scalar`], so
//! the same metric/frame/connection routines can run on plain `f64` or on
//! (arbitrarily nested) dual numbers. Nesting [`Dual`] k levels deep yields
//! exact k-th order directional derivatives: `Dual<f64>` gives first
//! derivatives, `Dual<Dual<f64>>` second derivatives, and so on.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field-like scalar supporting the elementary operations used by chart
/// evaluations. Implemented by `f64` and by [`Dual<S>`] for any scalar `S`.
pub trait Scalar:
    Copy
    + Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Embed a constant. Constants carry zero derivative at every level.
    fn from_f64(c: f64) -> Self;

    /// The underlying value with every derivative level stripped.
    fn re(self) -> f64;

    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    /// Multiply by an `f64` constant.
    fn scale(self, c: f64) -> Self {
        self * Self::from_f64(c)
    }

    /// Integer power by repeated multiplication (exact for AD purposes).
    fn powi(self, n: i32) -> Self {
        match n.cmp(&0) {
            std::cmp::Ordering::Equal => Self::one(),
            std::cmp::Ordering::Less => Self::one() / self.powi(-n),
            std::cmp::Ordering::Greater => {
                let mut acc = self;
                for _ in 1..n {
                    acc = acc * self;
                }
                acc
            }
        }
    }
}

impl Scalar for f64 {
    fn from_f64(c: f64) -> Self {
        c
    }

    fn re(self) -> f64 {
        self
    }

    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }

    fn exp(self) -> Self {
        f64::exp(self)
    }

    fn ln(self) -> Self {
        f64::ln(self)
    }
}

/// Dual number `v + ε d` with `ε² = 0`; forward-mode AD in one direction.
///
/// The derivative component tracks the directional derivative of every
/// computation along whatever seed was planted by [`seed`]. Nesting duals
/// (`Dual<Dual<f64>>`, ...) composes independent directions, giving mixed
/// higher-order partials without any truncation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<S> {
    /// Value component.
    pub v: S,
    /// Derivative component.
    pub d: S,
}

impl<S: Scalar> Dual<S> {
    pub fn new(v: S, d: S) -> Self {
        Dual { v, d }
    }

    /// A constant (zero derivative).
    pub fn constant(v: S) -> Self {
        Dual { v, d: S::zero() }
    }

    /// A variable with unit derivative: the seed of differentiation.
    pub fn variable(v: S) -> Self {
        Dual { v, d: S::one() }
    }
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.v + rhs.v, self.d + rhs.d)
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.v - rhs.v, self.d - rhs.d)
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Dual::new(self.v * rhs.v, self.v * rhs.d + self.d * rhs.v)
    }
}

impl<S: Scalar> Div for Dual<S> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let inv = S::one() / rhs.v;
        Dual::new(
            self.v * inv,
            (self.d * rhs.v - self.v * rhs.d) * inv * inv,
        )
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.v, -self.d)
    }
}

impl<S: Scalar> Scalar for Dual<S> {
    fn from_f64(c: f64) -> Self {
        Dual::constant(S::from_f64(c))
    }

    fn re(self) -> f64 {
        self.v.re()
    }

    fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        Dual::new(r, self.d / (r.scale(2.0)))
    }

    fn exp(self) -> Self {
        let e = self.v.exp();
        Dual::new(e, self.d * e)
    }

    fn ln(self) -> Self {
        Dual::new(self.v.ln(), self.d / self.v)
    }
}

/// Lift an `f64` point into any scalar type as constants.
pub fn lift<S: Scalar, const N: usize>(x: &[f64; N]) -> [S; N] {
    std::array::from_fn(|i| S::from_f64(x[i]))
}

/// Promote a point to dual numbers, seeding the derivative with the given
/// direction vector. Evaluating a function at the result and reading `.d`
/// yields its directional derivative along `dir`.
pub fn seed<S: Scalar, const N: usize>(x: &[S; N], dir: &[f64; N]) -> [Dual<S>; N] {
    std::array::from_fn(|i| Dual::new(x[i], S::from_f64(dir[i])))
}

/// Promote a point to dual numbers, seeding coordinate direction `axis`.
pub fn seed_axis<S: Scalar, const N: usize>(x: &[S; N], axis: usize) -> [Dual<S>; N] {
    std::array::from_fn(|i| {
        Dual::new(x[i], if i == axis { S::one() } else { S::zero() })
    })
}
