//! Bivector algebra of an oriented Euclidean 4-space.
//!
//! Components are always taken with respect to an oriented orthonormal frame
//! `(E1, E2, E3, E4)` and stored in the fixed order
//!
//! ```text
//! [e12, e13, e14, e23, e24, e34],   e_ij = E_i ∧ E_j
//! ```
//!
//! The induced inner product is `g(v1∧v2, v3∧v4) = (1/2) det[g(v_a, v_b)]`,
//! so each basis element `e_ij` has squared norm 1/2 and the self-dual basis
//!
//! ```text
//! s1 = e12 + e34,   s2 = e13 + e42,   s3 = e14 + e23
//! ```
//!
//! is orthonormal, as is the anti-self-dual basis `sb_i` with the sign of the
//! second summand flipped. `Λ² = Λ²₊ ⊕ Λ²₋` is the eigenspace splitting of
//! the Hodge star for the orientation in which `(E1, E2, E3, E4)` is positive.

use crate::scalar::Scalar;

/// Index pairs `(i, j)`, `i < j`, matching the component order.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// A 2-form (bivector) in frame components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Biv<S = f64>(pub [S; 6]);

/// A self-dual 2-form in components along `(s1, s2, s3)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SDual<S = f64>(pub [S; 3]);

/// An anti-self-dual 2-form in components along `(sb1, sb2, sb3)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ADual<S = f64>(pub [S; 3]);

/// Wedge product of two vectors given in frame components.
pub fn wedge<S: Scalar>(x: &[S; 4], y: &[S; 4]) -> Biv<S> {
    Biv(std::array::from_fn(|k| {
        let (i, j) = PAIRS[k];
        x[i] * y[j] - x[j] * y[i]
    }))
}

impl<S: Scalar> Biv<S> {
    pub fn zero() -> Self {
        Biv([S::zero(); 6])
    }

    /// Induced inner product (each `e_ij` has squared norm 1/2).
    pub fn inner(&self, other: &Biv<S>) -> S {
        let mut acc = S::zero();
        for k in 0..6 {
            acc = acc + self.0[k] * other.0[k];
        }
        acc.scale(0.5)
    }

    pub fn add(&self, other: &Biv<S>) -> Biv<S> {
        Biv(std::array::from_fn(|k| self.0[k] + other.0[k]))
    }

    pub fn sub(&self, other: &Biv<S>) -> Biv<S> {
        Biv(std::array::from_fn(|k| self.0[k] - other.0[k]))
    }

    pub fn scale(&self, c: S) -> Biv<S> {
        Biv(std::array::from_fn(|k| self.0[k] * c))
    }

    /// Split into self-dual and anti-self-dual parts (components in the
    /// `s_i` / `sb_i` bases).
    pub fn hodge_split(&self) -> (SDual<S>, ADual<S>) {
        let b = &self.0;
        let p = SDual([
            (b[0] + b[5]).scale(0.5),
            (b[1] - b[4]).scale(0.5),
            (b[2] + b[3]).scale(0.5),
        ]);
        let m = ADual([
            (b[0] - b[5]).scale(0.5),
            (b[1] + b[4]).scale(0.5),
            (b[2] - b[3]).scale(0.5),
        ]);
        (p, m)
    }

    /// Reassemble a bivector from its self-dual and anti-self-dual parts.
    pub fn from_parts(p: &SDual<S>, m: &ADual<S>) -> Biv<S> {
        Biv([
            p.0[0] + m.0[0],
            p.0[1] + m.0[1],
            p.0[2] + m.0[2],
            p.0[2] - m.0[2],
            -p.0[1] + m.0[1],
            p.0[0] - m.0[0],
        ])
    }

    /// Skew endomorphism `K_b` defined by `g(K_b X, Y) = 2 g(b, X ∧ Y)`,
    /// as a matrix acting on frame components: `(K_b x)_i = Σ_j M[i][j] x_j`.
    pub fn k_endo(&self) -> [[S; 4]; 4] {
        let mut m = [[S::zero(); 4]; 4];
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            // M[r][c] = g(K e_c, e_r) = 2 g(b, e_c ∧ e_r).
            m[j][i] = m[j][i] + self.0[k];
            m[i][j] = m[i][j] - self.0[k];
        }
        m
    }

    /// Apply `K_b` to a vector in frame components.
    pub fn k_apply(&self, x: &[S; 4]) -> [S; 4] {
        let m = self.k_endo();
        std::array::from_fn(|i| {
            let mut acc = S::zero();
            for j in 0..4 {
                acc = acc + m[i][j] * x[j];
            }
            acc
        })
    }

    /// Extension of `K_b` to 2-forms as a derivation:
    /// `K_b · (X ∧ Y) = K_b X ∧ Y + X ∧ K_b Y`.
    pub fn k_derivation(&self, c: &Biv<S>) -> Biv<S> {
        let m = self.k_endo();
        let mut out = Biv::zero();
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            // Images of the frame vectors under K_b.
            let ei: [S; 4] = std::array::from_fn(|r| m[r][i]);
            let ej: [S; 4] = std::array::from_fn(|r| m[r][j]);
            let mut unit_i = [S::zero(); 4];
            unit_i[i] = S::one();
            let mut unit_j = [S::zero(); 4];
            unit_j[j] = S::one();
            let term = wedge(&ei, &unit_j).add(&wedge(&unit_i, &ej)).scale(c.0[k]);
            out = out.add(&term);
        }
        out
    }
}

impl<S: Scalar> SDual<S> {
    pub fn zero() -> Self {
        SDual([S::zero(); 3])
    }

    /// Standard basis element `s_{k+1}`.
    pub fn axis(k: usize) -> Self {
        let mut c = [S::zero(); 3];
        c[k] = S::one();
        SDual(c)
    }

    pub fn add(&self, o: &SDual<S>) -> SDual<S> {
        SDual(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }

    pub fn sub(&self, o: &SDual<S>) -> SDual<S> {
        SDual(std::array::from_fn(|k| self.0[k] - o.0[k]))
    }

    pub fn neg(&self) -> SDual<S> {
        SDual(std::array::from_fn(|k| -self.0[k]))
    }

    pub fn scale(&self, c: S) -> SDual<S> {
        SDual(std::array::from_fn(|k| self.0[k] * c))
    }

    /// Inner product; the `s_i` are orthonormal, so this is the Euclidean dot.
    pub fn dot(&self, o: &SDual<S>) -> S {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn norm(&self) -> S {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> SDual<S> {
        let n = self.norm();
        SDual(std::array::from_fn(|k| self.0[k] / n))
    }

    /// Cross product for the orientation `s1 × s2 = s3` (cyclic).
    pub fn cross(&self, o: &SDual<S>) -> SDual<S> {
        let a = &self.0;
        let b = &o.0;
        SDual([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    pub fn to_biv(&self) -> Biv<S> {
        Biv::from_parts(self, &ADual([S::zero(); 3]))
    }

    /// `K_σ` for a self-dual form, acting on frame components.
    pub fn k_endo(&self) -> [[S; 4]; 4] {
        self.to_biv().k_endo()
    }

    pub fn k_apply(&self, x: &[S; 4]) -> [S; 4] {
        self.to_biv().k_apply(x)
    }
}

impl<S: Scalar> ADual<S> {
    pub fn zero() -> Self {
        ADual([S::zero(); 3])
    }

    pub fn norm(&self) -> S {
        (self.0[0] * self.0[0] + self.0[1] * self.0[1] + self.0[2] * self.0[2]).sqrt()
    }

    pub fn to_biv(&self) -> Biv<S> {
        Biv::from_parts(&SDual([S::zero(); 3]), self)
    }
}

impl SDual<f64> {
    pub fn approx_eq(&self, o: &SDual<f64>, tol: f64) -> bool {
        self.sub(o).norm() <= tol
    }
}
