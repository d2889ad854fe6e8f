//! Curvature of a metric chart: Christoffel symbols by automatic
//! differentiation, the curvature operator on 2-forms, and its irreducible
//! decomposition.
//!
//! Sign conventions. The curvature endomorphism is
//! `R(X, Y) = ∇_{[X,Y]} - [∇_X, ∇_Y]`, under which the unit round 4-sphere
//! has curvature operator `+2 · Id` on 2-forms and scalar curvature 12. The
//! scalar curvature is the trace of the operator in an orthonormal basis of
//! 2-forms.

use crate::bivector::{Biv, SDual, PAIRS};
use crate::chart::MetricChart;
use crate::error::Error;
use crate::frame::Frame4;
use crate::linalg::{frobenius, mat_mul, transpose};
use crate::scalar::{seed_axis, Dual, Scalar};

/// Coefficients of the orthonormal 2-form basis `(s1, s2, s3, sb1, sb2, sb3)`
/// over the frame basis `(e12, e13, e14, e23, e24, e34)`.
pub const SBASIS: [[f64; 6]; 6] = [
    [1.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    [0.0, 1.0, 0.0, 0.0, -1.0, 0.0],
    [0.0, 0.0, 1.0, 1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0, 0.0, -1.0],
    [0.0, 1.0, 0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 1.0, -1.0, 0.0, 0.0],
];

/// Christoffel symbols `Γ^d_{ab}` (`out[d][a][b]`) of an arbitrary metric
/// field, computed by one forward-AD pass per coordinate direction.
pub fn christoffels_of<S: Scalar, const N: usize>(
    metric: impl Fn(&[Dual<S>; N]) -> [[Dual<S>; N]; N],
    x: &[S; N],
) -> Result<[[[S; N]; N]; N], Error> {
    // dg[c][a][b] = ∂_c g_{ab}
    let mut dg = [[[S::zero(); N]; N]; N];
    let mut g = [[S::zero(); N]; N];
    for c in 0..N {
        let gz = metric(&seed_axis(x, c));
        for a in 0..N {
            for b in 0..N {
                dg[c][a][b] = gz[a][b].d;
                if c == 0 {
                    g[a][b] = gz[a][b].v;
                }
            }
        }
    }
    let ginv = crate::linalg::mat_inv(&g).ok_or(Error::SingularMetric)?;
    let mut gamma = [[[S::zero(); N]; N]; N];
    for d in 0..N {
        for a in 0..N {
            for b in a..N {
                let mut acc = S::zero();
                for c in 0..N {
                    acc = acc + ginv[d][c] * (dg[a][c][b] + dg[b][c][a] - dg[c][a][b]);
                }
                let v = acc.scale(0.5);
                gamma[d][a][b] = v;
                gamma[d][b][a] = v;
            }
        }
    }
    Ok(gamma)
}

/// Christoffel symbols of a chart at `x`.
pub fn christoffels<S: Scalar, C: MetricChart>(
    chart: &C,
    x: &[S; 4],
) -> Result<[[[S; 4]; 4]; 4], Error> {
    christoffels_of(|z| chart.metric(z), x)
}

/// Covariant curvature tensor `R[a][b][c][d] = g(R(∂_a, ∂_b) ∂_c, ∂_d)` in
/// chart coordinates.
pub fn curvature_tensor<S: Scalar, C: MetricChart>(
    chart: &C,
    x: &[S; 4],
) -> Result<[[[[S; 4]; 4]; 4]; 4], Error> {
    // Γ and ∂Γ in one nested pass per direction.
    let mut dgamma = [[[[S::zero(); 4]; 4]; 4]; 4]; // dgamma[e][d][a][b] = ∂_e Γ^d_{ab}
    let mut gamma = [[[S::zero(); 4]; 4]; 4];
    for e in 0..4 {
        let gz: [[[Dual<S>; 4]; 4]; 4] = christoffels(chart, &seed_axis(x, e))?;
        for d in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    dgamma[e][d][a][b] = gz[d][a][b].d;
                    if e == 0 {
                        gamma[d][a][b] = gz[d][a][b].v;
                    }
                }
            }
        }
    }
    let g = chart.metric(x);
    let mut out = [[[[S::zero(); 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                // Coefficients of R(∂_a, ∂_b) ∂_c over ∂_δ.
                let mut coeff = [S::zero(); 4];
                for (d, slot) in coeff.iter_mut().enumerate() {
                    let mut acc = dgamma[b][d][a][c] - dgamma[a][d][b][c];
                    for e in 0..4 {
                        acc = acc + gamma[d][b][e] * gamma[e][a][c]
                            - gamma[d][a][e] * gamma[e][b][c];
                    }
                    *slot = acc;
                }
                for d in 0..4 {
                    let mut low = S::zero();
                    for m in 0..4 {
                        low = low + g[d][m] * coeff[m];
                    }
                    out[a][b][c][d] = low;
                }
            }
        }
    }
    Ok(out)
}

/// The curvature operator on 2-forms, as a symmetric 6x6 matrix in the
/// orthonormal basis `(s1, s2, s3, sb1, sb2, sb3)` of a frame:
/// `mat[i][j] = g(ℛ ŝ_i, ŝ_j)`.
#[derive(Clone, Copy, Debug)]
pub struct CurvOp {
    pub mat: [[f64; 6]; 6],
}

impl CurvOp {
    /// Apply the operator to a 2-form in frame components.
    pub fn apply(&self, b: &Biv) -> Biv {
        let (p, m) = b.hodge_split();
        let v = [p.0[0], p.0[1], p.0[2], m.0[0], m.0[1], m.0[2]];
        let mut out6 = [0.0; 6];
        for (j, slot) in out6.iter_mut().enumerate() {
            *slot = (0..6).map(|i| v[i] * self.mat[i][j]).sum();
        }
        Biv::from_parts(
            &SDual([out6[0], out6[1], out6[2]]),
            &crate::bivector::ADual([out6[3], out6[4], out6[5]]),
        )
    }

    /// Apply to a self-dual form; returns the (self-dual, anti-self-dual)
    /// parts of the image.
    pub fn apply_sd(&self, u: &SDual) -> (SDual, crate::bivector::ADual) {
        self.apply(&u.to_biv()).hodge_split()
    }

    pub fn scalar_curvature(&self) -> f64 {
        (0..6).map(|i| self.mat[i][i]).sum()
    }

    /// Largest deviation from symmetry (a numerical health indicator; the
    /// operator is symmetric in exact arithmetic).
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..6 {
            for j in 0..6 {
                worst = worst.max((self.mat[i][j] - self.mat[j][i]).abs());
            }
        }
        worst
    }

    pub fn decompose(&self) -> CurvDecomp {
        let s = self.scalar_curvature();
        let mut w_plus = [[0.0; 3]; 3];
        let mut w_minus = [[0.0; 3]; 3];
        let mut b = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                w_plus[i][j] = self.mat[i][j] - if i == j { s / 6.0 } else { 0.0 };
                w_minus[i][j] = self.mat[i + 3][j + 3] - if i == j { s / 6.0 } else { 0.0 };
                b[i][j] = self.mat[i][j + 3];
            }
        }
        CurvDecomp {
            scalar: s,
            b,
            w_plus,
            w_minus,
        }
    }
}

/// Irreducible pieces of the curvature operator: scalar part, traceless
/// Ricci part `b` (the block mapping Λ²₊ to Λ²₋, `b[i][j] = g(ℛ s_i, sb_j)`),
/// and the two Weyl halves.
#[derive(Clone, Copy, Debug)]
pub struct CurvDecomp {
    pub scalar: f64,
    pub b: [[f64; 3]; 3],
    pub w_plus: [[f64; 3]; 3],
    pub w_minus: [[f64; 3]; 3],
}

impl CurvDecomp {
    /// Reassemble the 6x6 operator from the pieces.
    pub fn reconstruct(&self) -> CurvOp {
        let mut mat = [[0.0; 6]; 6];
        for i in 0..3 {
            for j in 0..3 {
                mat[i][j] = self.w_plus[i][j] + if i == j { self.scalar / 6.0 } else { 0.0 };
                mat[i + 3][j + 3] =
                    self.w_minus[i][j] + if i == j { self.scalar / 6.0 } else { 0.0 };
                mat[i][j + 3] = self.b[i][j];
                mat[i + 3][j] = self.b[j][i];
            }
        }
        CurvOp { mat }
    }

    fn scale(&self) -> f64 {
        1.0 + self.reconstruct().mat.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Einstein ⟺ the mixed block vanishes.
    pub fn is_einstein(&self, tol: f64) -> bool {
        frobenius(&self.b) <= tol * self.scale()
    }

    /// Self-dual ⟺ `W₋ = 0`.
    pub fn is_self_dual(&self, tol: f64) -> bool {
        frobenius(&self.w_minus) <= tol * self.scale()
    }

    /// Anti-self-dual ⟺ `W₊ = 0`.
    pub fn is_anti_self_dual(&self, tol: f64) -> bool {
        frobenius(&self.w_plus) <= tol * self.scale()
    }

    pub fn is_scalar_flat(&self, tol: f64) -> bool {
        self.scalar.abs() <= tol * self.scale()
    }
}

/// Curvature 4-tensor contracted into an orthonormal frame:
/// `RF[a][b][c][d] = g(R(E_a, E_b) E_c, E_d)`.
pub fn frame_curvature<C: MetricChart>(
    chart: &C,
    x: &[f64; 4],
    frame: &Frame4,
) -> Result<[[[[f64; 4]; 4]; 4]; 4], Error> {
    let r4 = curvature_tensor(chart, x)?;
    let e = &frame.vecs;
    // Contract one index at a time: four O(4^5) passes instead of one O(4^8).
    let mut t1 = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for be in 0..4 {
            for ga in 0..4 {
                for de in 0..4 {
                    t1[a][be][ga][de] =
                        (0..4).map(|al| e[a][al] * r4[al][be][ga][de]).sum();
                }
            }
        }
    }
    let mut t2 = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for ga in 0..4 {
                for de in 0..4 {
                    t2[a][b][ga][de] = (0..4).map(|be| e[b][be] * t1[a][be][ga][de]).sum();
                }
            }
        }
    }
    let mut t3 = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for de in 0..4 {
                    t3[a][b][c][de] = (0..4).map(|ga| e[c][ga] * t2[a][b][ga][de]).sum();
                }
            }
        }
    }
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    out[a][b][c][d] = (0..4).map(|de| e[d][de] * t3[a][b][c][de]).sum();
                }
            }
        }
    }
    Ok(out)
}

/// Curvature operator in the 2-form basis of the given frame.
pub fn curvature_operator_in_frame<C: MetricChart>(
    chart: &C,
    x: &[f64; 4],
    frame: &Frame4,
) -> Result<CurvOp, Error> {
    let rf = frame_curvature(chart, x, frame)?;
    // Pairings in the e_I basis: RP[I][J] = g(ℛ e_I, e_J).
    let mut rp = [[0.0; 6]; 6];
    for (i, &(a, b)) in PAIRS.iter().enumerate() {
        for (j, &(c, d)) in PAIRS.iter().enumerate() {
            rp[i][j] = rf[a][b][c][d];
        }
    }
    let mut mat = [[0.0; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let mut acc = 0.0;
            for ii in 0..6 {
                for jj in 0..6 {
                    acc += SBASIS[i][ii] * SBASIS[j][jj] * rp[ii][jj];
                }
            }
            mat[i][j] = acc;
        }
    }
    Ok(CurvOp { mat })
}

/// Curvature operator in the Gram-Schmidt frame of the chart at `x`.
pub fn curvature_operator<C: MetricChart>(chart: &C, x: &[f64; 4]) -> Result<CurvOp, Error> {
    let g = chart.metric(x);
    let frame = Frame4::gram_schmidt(&g)?;
    curvature_operator_in_frame(chart, x, &frame)
}

pub fn scalar_curvature<C: MetricChart>(chart: &C, x: &[f64; 4]) -> Result<f64, Error> {
    Ok(curvature_operator(chart, x)?.scalar_curvature())
}

/// Largest component of `∇J` at `x`; zero (numerically) iff the chart's
/// complex structure is parallel there.
pub fn kahler_defect<C: MetricChart>(chart: &C, x: &[f64; 4]) -> Result<f64, Error> {
    let j0 = chart
        .complex_structure(&[x[0], x[1], x[2], x[3]])
        .ok_or(Error::MissingComplexStructure)?;
    let gamma = christoffels(chart, x)?;
    let mut dj = [[[0.0; 4]; 4]; 4]; // dj[e][a][b] = ∂_e J^a_b
    for e in 0..4 {
        let z = seed_axis(x, e);
        let jz = chart.complex_structure(&z).ok_or(Error::MissingComplexStructure)?;
        for a in 0..4 {
            for b in 0..4 {
                dj[e][a][b] = jz[a][b].d;
            }
        }
    }
    let mut worst = 0.0_f64;
    for e in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                let mut v = dj[e][a][b];
                for d in 0..4 {
                    v += gamma[a][e][d] * j0[d][b] - gamma[d][e][b] * j0[a][d];
                }
                worst = worst.max(v.abs());
            }
        }
    }
    Ok(worst)
}

/// Largest component of the Nijenhuis tensor of the chart's complex
/// structure on the base manifold; zero iff `J` is integrable at `x`.
pub fn integrability_defect<C: MetricChart>(chart: &C, x: &[f64; 4]) -> Result<f64, Error> {
    let j0 = chart
        .complex_structure(&[x[0], x[1], x[2], x[3]])
        .ok_or(Error::MissingComplexStructure)?;
    let mut dj = [[[0.0; 4]; 4]; 4];
    for e in 0..4 {
        let z = seed_axis(x, e);
        let jz = chart.complex_structure(&z).ok_or(Error::MissingComplexStructure)?;
        for a in 0..4 {
            for b in 0..4 {
                dj[e][a][b] = jz[a][b].d;
            }
        }
    }
    let mut worst = 0.0_f64;
    for al in 0..4 {
        for be in 0..4 {
            for ga in 0..4 {
                let mut v = 0.0;
                for de in 0..4 {
                    v += j0[de][al] * dj[de][ga][be] - j0[de][be] * dj[de][ga][al]
                        - j0[ga][de] * dj[al][de][be]
                        + j0[ga][de] * dj[be][de][al];
                }
                worst = worst.max(v.abs());
            }
        }
    }
    Ok(worst)
}

/// First Bianchi identity defect `max |R[a][b][c][d] + R[b][c][a][d] +
/// R[c][a][b][d]|`, useful as an internal health check.
pub fn bianchi_defect(r4: &[[[[f64; 4]; 4]; 4]; 4]) -> f64 {
    let mut worst = 0.0_f64;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let v = r4[a][b][c][d] + r4[b][c][a][d] + r4[c][a][b][d];
                    worst = worst.max(v.abs());
                }
            }
        }
    }
    worst
}

/// Pair-symmetry defect `max |R[a][b][c][d] - R[c][d][a][b]|`.
pub fn pair_symmetry_defect(r4: &[[[[f64; 4]; 4]; 4]; 4]) -> f64 {
    let mut worst = 0.0_f64;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    worst = worst.max((r4[a][b][c][d] - r4[c][d][a][b]).abs());
                }
            }
        }
    }
    worst
}

/// `g(ℛ(a), w)` for 2-forms in frame components, going through the operator
/// matrix. Convenience for the closed-form twistor formulas.
pub fn pair_with_image(op: &CurvOp, a: &Biv, w: &Biv) -> f64 {
    op.apply(a).inner(w)
}

/// Health-check helper: `J^T g J - g` and `J² + Id` deviations for a chart
/// carrying a complex structure.
pub fn compatibility_defect<C: MetricChart>(chart: &C, x: &[f64; 4]) -> Result<f64, Error> {
    let g = chart.metric(x);
    let j = chart
        .complex_structure(x)
        .ok_or(Error::MissingComplexStructure)?;
    let jj = mat_mul(&j, &j);
    let jt = transpose(&j);
    let jgj = mat_mul(&jt, &mat_mul(&g, &j));
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for k in 0..4 {
            let want = if i == k { -1.0 } else { 0.0 };
            worst = worst.max((jj[i][k] - want).abs());
            worst = worst.max((jgj[i][k] - g[i][k]).abs());
        }
    }
    Ok(worst)
}
