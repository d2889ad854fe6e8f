//! Oriented orthonormal frames over a metric chart.
//!
//! A [`Frame4`] stores the chart components of four vectors `E_1..E_4` that
//! are orthonormal for the metric at one point and positively oriented for
//! the chart orientation. Bivector components ([`crate::bivector`]) are
//! always taken with respect to such a frame.

use crate::bivector::{wedge, Biv, SDual, PAIRS};
use crate::error::Error;
use crate::linalg::{det, dot, mat_vec};
use crate::scalar::Scalar;

/// An orthonormal frame at a point; `vecs[a]` holds the chart components of
/// `E_{a+1}`.
#[derive(Clone, Copy, Debug)]
pub struct Frame4<S = f64> {
    pub vecs: [[S; 4]; 4],
}

/// Which `s_i` an adapted frame aligns a given self-dual form with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdaptVariant {
    /// `(E, K_σ E, F, K_σ F)`: σ becomes `s1`.
    S1,
    /// `(E, F, K_σ E, -K_σ F)`: σ becomes `s2`.
    S2,
    /// `(E, F, K_σ F, K_σ E)`: σ becomes `s3`.
    S3,
}

impl<S: Scalar> Frame4<S> {
    /// Gram-Schmidt the coordinate basis of a chart at `x` into an
    /// orthonormal frame. Starting from `(∂_1, ∂_2, ∂_3, ∂_4)` with positive
    /// projection coefficients keeps the chart orientation.
    pub fn gram_schmidt(g: &[[S; 4]; 4]) -> Result<Frame4<S>, Error> {
        let mut seeds = [[S::zero(); 4]; 4];
        for (a, seed) in seeds.iter_mut().enumerate() {
            seed[a] = S::one();
        }
        Self::gram_schmidt_seeded(g, &seeds)
    }

    /// Gram-Schmidt arbitrary seed vectors; fails when they are numerically
    /// dependent. The caller is responsible for orientation of the seeds.
    pub fn gram_schmidt_seeded(g: &[[S; 4]; 4], seeds: &[[S; 4]; 4]) -> Result<Frame4<S>, Error> {
        let mut vecs = [[S::zero(); 4]; 4];
        for a in 0..4 {
            let mut v = seeds[a];
            for b in 0..4 {
                if b >= a {
                    break;
                }
                let coeff = metric_dot(g, &seeds[a], &vecs[b]);
                for r in 0..4 {
                    v[r] = v[r] - vecs[b][r] * coeff;
                }
            }
            let n2 = metric_dot(g, &v, &v);
            if !(n2.re() > 1e-20) {
                return Err(Error::DegenerateFrame);
            }
            let n = n2.sqrt();
            for r in 0..4 {
                vecs[a][r] = v[r] / n;
            }
        }
        Ok(Frame4 { vecs })
    }

    /// Components of a chart vector in this frame: `c_a = g(x, E_a)`.
    pub fn to_frame(&self, g: &[[S; 4]; 4], x: &[S; 4]) -> [S; 4] {
        let gx = mat_vec(g, x);
        std::array::from_fn(|a| dot(&gx, &self.vecs[a]))
    }

    /// Chart components of a frame-component vector.
    pub fn from_frame(&self, c: &[S; 4]) -> [S; 4] {
        std::array::from_fn(|r| {
            let mut acc = S::zero();
            for a in 0..4 {
                acc = acc + self.vecs[a][r] * c[a];
            }
            acc
        })
    }

    /// Components of an endomorphism (chart matrix `j`, acting on chart
    /// components) in this frame: `out[a][b] = g(J E_b, E_a)`.
    pub fn endo_to_frame(&self, g: &[[S; 4]; 4], j: &[[S; 4]; 4]) -> [[S; 4]; 4] {
        let mut out = [[S::zero(); 4]; 4];
        for b in 0..4 {
            let jb = mat_vec(j, &self.vecs[b]);
            let col = self.to_frame(g, &jb);
            for (a, row) in out.iter_mut().enumerate() {
                row[b] = col[a];
            }
        }
        out
    }

    /// Determinant of the frame's chart-component matrix; its sign is the
    /// frame orientation relative to the chart.
    pub fn orientation(&self) -> f64 {
        let m: [[S; 4]; 4] =
            std::array::from_fn(|a| std::array::from_fn(|r| self.vecs[a][r]));
        det(&m).re().signum()
    }
}

fn metric_dot<S: Scalar>(g: &[[S; 4]; 4], a: &[S; 4], b: &[S; 4]) -> S {
    dot(a, &mat_vec(g, b))
}

impl Frame4<f64> {
    /// Build a frame adapted to a unit self-dual form σ (given in this
    /// frame's own bivector components): the returned frame is orthonormal,
    /// positively oriented, and expresses σ as the basis form selected by
    /// `variant`.
    ///
    /// The construction works in frame components, where the metric is the
    /// identity: pick `E = E_1`, complete with `K_σ E` and a Gram-Schmidt
    /// candidate `F` orthogonal to both (automatically orthogonal to `K_σ F`).
    pub fn adapted(&self, g: &[[f64; 4]; 4], sigma: &SDual, variant: AdaptVariant) -> Result<Frame4, Error> {
        let k = sigma.k_endo();
        let e1 = [1.0, 0.0, 0.0, 0.0];
        let ke1 = apply4(&k, &e1);
        // First Gram-Schmidt candidate among E_2, E_3, E_4 with a residual
        // that is comfortably away from zero; the largest residual is always
        // at least sqrt(2/3), so threshold 0.5 must succeed.
        let mut second = None;
        for cand in 1..4 {
            let mut v = [0.0; 4];
            v[cand] = 1.0;
            let a = dot4(&v, &e1);
            let b = dot4(&v, &ke1);
            for r in 0..4 {
                v[r] -= a * e1[r] + b * ke1[r];
            }
            let n = dot4(&v, &v).sqrt();
            if n >= 0.5 {
                for r in &mut v {
                    *r /= n;
                }
                second = Some(v);
                break;
            }
        }
        let f = second.ok_or(Error::DegenerateFrame)?;
        let kf = apply4(&k, &f);
        let frame_comps: [[f64; 4]; 4] = match variant {
            AdaptVariant::S1 => [e1, ke1, f, kf],
            AdaptVariant::S2 => [e1, f, ke1, [-kf[0], -kf[1], -kf[2], -kf[3]]],
            AdaptVariant::S3 => [e1, f, kf, ke1],
        };
        // Map frame components back to chart components.
        let vecs = std::array::from_fn(|a| self.from_frame(&frame_comps[a]));
        let out = Frame4 { vecs };
        debug_assert!(out.is_orthonormal(g, 1e-9));
        Ok(out)
    }

    pub fn is_orthonormal(&self, g: &[[f64; 4]; 4], tol: f64) -> bool {
        for a in 0..4 {
            for b in 0..4 {
                let want = if a == b { 1.0 } else { 0.0 };
                if (metric_dot(g, &self.vecs[a], &self.vecs[b]) - want).abs() > tol {
                    return false;
                }
            }
        }
        true
    }
}

fn apply4(m: &[[f64; 4]; 4], x: &[f64; 4]) -> [f64; 4] {
    std::array::from_fn(|i| (0..4).map(|j| m[i][j] * x[j]).sum())
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Re-express a bivector given in frame `from` components in the components
/// of frame `to` (both orthonormal for the same metric `g`).
pub fn biv_change_frame<S: Scalar>(
    b: &Biv<S>,
    from: &Frame4<S>,
    to: &Frame4<S>,
    g: &[[S; 4]; 4],
) -> Biv<S> {
    // Overlap matrix O[a][c] = g(from_a, to_c).
    let o: [[S; 4]; 4] = std::array::from_fn(|a| to.to_frame(g, &from.vecs[a]));
    let mut out = [S::zero(); 6];
    for (kf, &(i, j)) in PAIRS.iter().enumerate() {
        // from_i ∧ from_j expressed in `to` components.
        let w = wedge(&o[i], &o[j]);
        for (kt, slot) in out.iter_mut().enumerate() {
            *slot = *slot + w.0[kt] * b.0[kf];
        }
    }
    Biv(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivector::ADual;

    fn euclid() -> [[f64; 4]; 4] {
        crate::linalg::identity()
    }

    fn skewed_metric() -> [[f64; 4]; 4] {
        [
            [2.0, 0.3, 0.0, 0.1],
            [0.3, 1.5, 0.2, 0.0],
            [0.0, 0.2, 1.8, 0.4],
            [0.1, 0.0, 0.4, 1.2],
        ]
    }

    #[test]
    fn gram_schmidt_produces_oriented_orthonormal_frame() {
        let g = skewed_metric();
        let f = Frame4::gram_schmidt(&g).unwrap();
        assert!(f.is_orthonormal(&g, 1e-12));
        assert!(f.orientation() > 0.0);
    }

    #[test]
    fn component_round_trip() {
        let g = skewed_metric();
        let f = Frame4::gram_schmidt(&g).unwrap();
        let x = [0.3, -1.0, 0.7, 0.2];
        let c = f.to_frame(&g, &x);
        let back = f.from_frame(&c);
        for r in 0..4 {
            assert!((back[r] - x[r]).abs() < 1e-12);
        }
    }

    #[test]
    fn adapted_frame_aligns_sigma_with_each_basis_form() {
        let g = euclid();
        let f = Frame4::gram_schmidt(&g).unwrap();
        let sigma = SDual([0.48, -0.6, 0.64]).normalized();
        for (variant, expect) in [
            (AdaptVariant::S1, SDual::axis(0)),
            (AdaptVariant::S2, SDual::axis(1)),
            (AdaptVariant::S3, SDual::axis(2)),
        ] {
            let adapted = f.adapted(&g, &sigma, variant).unwrap();
            assert!(adapted.is_orthonormal(&g, 1e-10));
            assert!(adapted.orientation() > 0.0, "variant {variant:?} reversed orientation");
            // σ re-expressed in the adapted frame must be the chosen axis.
            let moved = biv_change_frame(&sigma.to_biv(), &f, &adapted, &g);
            let (p, m) = moved.hodge_split();
            assert!(p.approx_eq(&expect, 1e-10), "variant {variant:?}: got {:?}", p);
            assert!(m.norm() < 1e-10);
        }
    }

    #[test]
    fn adapted_frame_works_when_sigma_is_near_an_axis() {
        // σ close to s1 makes K_σ E1 nearly E2; the candidate scan must then
        // pick E3 as the second seed.
        let g = euclid();
        let f = Frame4::gram_schmidt(&g).unwrap();
        let sigma = SDual([0.999, 0.03, -0.02]).normalized();
        let adapted = f.adapted(&g, &sigma, AdaptVariant::S1).unwrap();
        assert!(adapted.is_orthonormal(&g, 1e-10));
        let moved = biv_change_frame(&sigma.to_biv(), &f, &adapted, &g);
        let (p, _) = moved.hodge_split();
        assert!(p.approx_eq(&SDual::axis(0), 1e-10));
    }

    #[test]
    fn frame_change_preserves_duality_type_and_norm() {
        // Both frames oriented and orthonormal: Λ²₊ and Λ²₋ are invariant,
        // and the bivector inner product is preserved.
        let g = skewed_metric();
        let f1 = Frame4::gram_schmidt(&g).unwrap();
        let seeds = [
            [1.0, 0.2, 0.0, -0.3],
            [0.0, 1.0, 0.4, 0.0],
            [0.2, 0.0, 1.0, 0.1],
            [0.0, -0.1, 0.0, 1.0],
        ];
        let f2 = Frame4::gram_schmidt_seeded(&g, &seeds).unwrap();
        assert!(f2.orientation() > 0.0);

        let b = SDual([0.3, -0.8, 0.52]).to_biv();
        let moved = biv_change_frame(&b, &f1, &f2, &g);
        let (p, m) = moved.hodge_split();
        assert!(m.norm() < 1e-12, "self-dual forms stay self-dual");
        assert!((p.norm() - SDual([0.3, -0.8, 0.52]).norm()).abs() < 1e-12);

        let a = ADual([0.1, 0.9, -0.4]).to_biv();
        let moved_a = biv_change_frame(&a, &f1, &f2, &g);
        let (pa, ma) = moved_a.hodge_split();
        assert!(pa.norm() < 1e-12);
        assert!((ma.norm() - ADual([0.1, 0.9, -0.4]).norm()).abs() < 1e-12);
    }
}
