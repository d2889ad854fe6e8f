//! The twistor space of a metric chart: points, tangent vectors, the
//! one-parameter family of metrics `h_t`, and a six-coordinate chart that
//! exposes everything to automatic differentiation.
//!
//! A twistor point is a pair `(x, σ)` with σ a unit self-dual form at `x`
//! (components in the Gram-Schmidt frame). Tangent vectors split into a
//! horizontal part, identified with a tangent vector of the base, and a
//! vertical part tangent to the unit sphere in Λ²₊. The metric is
//!
//! ```text
//! h_t = g on horizontal ⊕ t ⟨·,·⟩ on vertical,   t > 0,
//! ```
//!
//! and each fibre map `f` induces the endomorphism `𝒥 = K_{f(σ)} ⊕ (σ ×)`.
//!
//! The [`TwistorChart`] provides honest coordinates `(x^α, u^1, u^2)` around
//! an anchor `(x0, σ0)`: the fibre coordinate is the central projection
//! `σ(u) = (σ0 + u^1 ν1 + u^2 ν2)/|…|` taken with *constant components* in
//! the moving self-dual basis. Evaluating the metric and fundamental 2-form
//! of `h_t` as plain functions of these six coordinates lets the engine
//! differentiate them with dual numbers and so compute covariant
//! derivatives, brackets and Nijenhuis tensors with no hand-derived
//! formulas — the reference ("oracle") path that the closed-form expressions
//! are tested against.

use crate::bivector::{wedge, Biv, SDual};
use crate::chart::MetricChart;
use crate::curvature::{christoffels, christoffels_of, CurvOp};
use crate::error::Error;
use crate::fibermaps::{omega_in_frame, FiberMap};
use crate::frame::Frame4;
use crate::linalg::{dot, mat_vec};
use crate::scalar::{lift, seed_axis, Scalar};

/// A point of the twistor space over a chart.
#[derive(Clone, Copy, Debug)]
pub struct TwistorPoint {
    pub x: [f64; 4],
    /// Unit self-dual form in the Gram-Schmidt frame at `x`.
    pub sigma: SDual,
}

/// A tangent vector at a twistor point: horizontal part in frame
/// components, vertical part tangent to the fibre sphere at σ.
#[derive(Clone, Copy, Debug)]
pub struct TwistorVec {
    pub hor: [f64; 4],
    pub ver: SDual,
}

/// The metric `h_t` on twistor tangent vectors.
pub fn ht_inner(t: f64, a: &TwistorVec, b: &TwistorVec) -> f64 {
    dot(&a.hor, &b.hor) + t * a.ver.dot(&b.ver)
}

/// The almost complex structure induced by a fibre map value `fσ = f(σ)`:
/// `K_{fσ}` on horizontal vectors, `σ ×` on vertical ones.
pub fn jf_apply(f_sigma: &SDual, sigma: &SDual, v: &TwistorVec) -> TwistorVec {
    TwistorVec {
        hor: f_sigma.k_apply(&v.hor),
        ver: sigma.cross(&v.ver),
    }
}

/// Fundamental 2-form of `(h_t, 𝒥)`: `Ω(A, B) = h_t(𝒥A, B)`.
pub fn fundamental_form(t: f64, f_sigma: &SDual, sigma: &SDual, a: &TwistorVec, b: &TwistorVec) -> f64 {
    ht_inner(t, &jf_apply(f_sigma, sigma, a), b)
}

/// Orthonormal tangent basis of the fibre sphere at σ. The axis entering
/// the construction is the coordinate direction least aligned with σ (first
/// such on ties); `ν2 = σ × ν1`.
pub fn vertical_frame(sigma: &SDual) -> (SDual, SDual) {
    let mut k = 0;
    for i in 1..3 {
        if sigma.0[i].abs() < sigma.0[k].abs() {
            k = i;
        }
    }
    let e = SDual::<f64>::axis(k);
    let nu1 = e.sub(&sigma.scale(sigma.0[k])).normalized();
    let nu2 = sigma.cross(&nu1);
    (nu1, nu2)
}

/// Connection of the self-dual bundle in the Gram-Schmidt basis:
/// `G[α][i][k] = g(∇_{∂α} s_i, s_k)`, an so(3)-valued 1-form.
pub fn sd_connection<S: Scalar, C: MetricChart>(
    chart: &C,
    x: &[S; 4],
) -> Result<[[[S; 3]; 3]; 4], Error> {
    let gamma = christoffels(chart, x)?;
    let g = chart.metric(x);
    let frame = Frame4::gram_schmidt(&g)?;

    // Frame connection form W[α][a][c] = g(∇_{∂α} E_a, E_c).
    let mut w = [[[S::zero(); 4]; 4]; 4];
    for al in 0..4 {
        let z = seed_axis(x, al);
        let gz = chart.metric(&z);
        let fz = Frame4::gram_schmidt(&gz)?;
        for a in 0..4 {
            // ∇_α E_a in chart components: ∂_α E_a + Γ·E_a.
            let nabla: [S; 4] = std::array::from_fn(|r| {
                let mut acc = fz.vecs[a][r].d;
                for dl in 0..4 {
                    acc = acc + gamma[r][al][dl] * frame.vecs[a][dl];
                }
                acc
            });
            let gn = mat_vec(&g, &nabla);
            for c in 0..4 {
                w[al][a][c] = dot(&gn, &frame.vecs[c]);
            }
        }
    }

    // ∇_α s_i through the derivation rule on the defining wedges.
    const S_PAIRS: [[(usize, usize, f64); 2]; 3] = [
        [(0, 1, 1.0), (2, 3, 1.0)],
        [(0, 2, 1.0), (1, 3, -1.0)],
        [(0, 3, 1.0), (1, 2, 1.0)],
    ];
    let mut out = [[[S::zero(); 3]; 3]; 4];
    for al in 0..4 {
        for (i, pairs) in S_PAIRS.iter().enumerate() {
            let mut nabla_biv = Biv::<S>::zero();
            for &(a, b, sign) in pairs {
                for c in 0..4 {
                    let mut unit_c = [S::zero(); 4];
                    unit_c[c] = S::one();
                    let mut unit_a = [S::zero(); 4];
                    unit_a[a] = S::one();
                    let mut unit_b = [S::zero(); 4];
                    unit_b[b] = S::one();
                    let term = wedge(&unit_c, &unit_b)
                        .scale(w[al][a][c])
                        .add(&wedge(&unit_a, &unit_c).scale(w[al][b][c]));
                    nabla_biv = nabla_biv.add(&term.scale(S::from_f64(sign)));
                }
            }
            let (sd, asd) = nabla_biv.hodge_split();
            debug_assert!(
                asd.norm().re() < 1e-8,
                "covariant derivative left the self-dual bundle"
            );
            for k in 0..3 {
                out[al][i][k] = sd.0[k];
            }
        }
    }
    Ok(out)
}

/// Six-coordinate chart on the twistor space around an anchor `(x0, σ0)`.
pub struct TwistorChart<'a, C: MetricChart> {
    pub chart: &'a C,
    pub x0: [f64; 4],
    pub sigma0: SDual,
    pub nu: (SDual, SDual),
}

impl<'a, C: MetricChart> TwistorChart<'a, C> {
    pub fn new(chart: &'a C, x0: [f64; 4], sigma0: SDual) -> Result<Self, Error> {
        if (sigma0.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidParameter(
                "fibre point must be a unit self-dual form".to_string(),
            ));
        }
        let sigma0 = sigma0.normalized();
        let nu = vertical_frame(&sigma0);
        Ok(TwistorChart { chart, x0, sigma0, nu })
    }

    pub fn anchor(&self) -> [f64; 6] {
        [self.x0[0], self.x0[1], self.x0[2], self.x0[3], 0.0, 0.0]
    }

    /// Fibre direction of the chart: σ-components `a(u)` and the tangent
    /// vectors `A_m = ∂a/∂u^m`.
    fn fiber_dir<S: Scalar>(&self, u: &[S; 2]) -> ([S; 3], [[S; 3]; 2]) {
        let s0: [S; 3] = lift(&self.sigma0.0);
        let n1: [S; 3] = lift(&self.nu.0 .0);
        let n2: [S; 3] = lift(&self.nu.1 .0);
        let v: [S; 3] = std::array::from_fn(|k| s0[k] + n1[k] * u[0] + n2[k] * u[1]);
        let n2v = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        let n = n2v.sqrt();
        let a: [S; 3] = std::array::from_fn(|k| v[k] / n);
        let n3 = n * n2v;
        let mk = |nu: &[S; 3]| -> [S; 3] {
            let vdotnu = v[0] * nu[0] + v[1] * nu[1] + v[2] * nu[2];
            std::array::from_fn(|k| nu[k] / n - v[k] * vdotnu / n3)
        };
        (a, [mk(&n1), mk(&n2)])
    }

    /// σ-components of the vertical parts `P_α` of the coordinate fields
    /// `∂x_α` at `(x, u)`: `P_α = ∇_{∂α} s` for the section with constant
    /// components `a(u)`.
    fn vertical_parts<S: Scalar>(
        conn: &[[[S; 3]; 3]; 4],
        a: &[S; 3],
    ) -> [[S; 3]; 4] {
        std::array::from_fn(|al| {
            std::array::from_fn(|k| {
                let mut acc = S::zero();
                for i in 0..3 {
                    acc = acc + a[i] * conn[al][i][k];
                }
                acc
            })
        })
    }

    /// Components of the twistor metric `h_t` in the chart coordinates.
    pub fn h_field<S: Scalar>(&self, t: f64, z: &[S; 6]) -> Result<[[S; 6]; 6], Error> {
        let x: [S; 4] = [z[0], z[1], z[2], z[3]];
        let u: [S; 2] = [z[4], z[5]];
        let g = self.chart.metric(&x);
        let conn = sd_connection(self.chart, &x)?;
        let (a, big_a) = self.fiber_dir(&u);
        let p = Self::vertical_parts(&conn, &a);
        let mut h = [[S::zero(); 6]; 6];
        for al in 0..4 {
            for be in 0..4 {
                h[al][be] = g[al][be] + dot3(&p[al], &p[be]).scale(t);
            }
            for m in 0..2 {
                let v = dot3(&p[al], &big_a[m]).scale(t);
                h[al][4 + m] = v;
                h[4 + m][al] = v;
            }
        }
        for m in 0..2 {
            for n in 0..2 {
                h[4 + m][4 + n] = dot3(&big_a[m], &big_a[n]).scale(t);
            }
        }
        Ok(h)
    }

    /// Components of the fundamental 2-form `Ω(·,·) = h_t(𝒥·, ·)` in the
    /// chart coordinates.
    pub fn o_field<S: Scalar>(
        &self,
        fmap: &FiberMap,
        t: f64,
        z: &[S; 6],
    ) -> Result<[[S; 6]; 6], Error> {
        let x: [S; 4] = [z[0], z[1], z[2], z[3]];
        let u: [S; 2] = [z[4], z[5]];
        let g = self.chart.metric(&x);
        let frame = Frame4::gram_schmidt(&g)?;
        let conn = sd_connection(self.chart, &x)?;
        let (a, big_a) = self.fiber_dir(&u);
        let p = Self::vertical_parts(&conn, &a);
        let sigma = SDual(a);
        let f_sigma = self.eval_map(fmap, &sigma, &g, &frame, &x)?;
        let kf = f_sigma.to_biv().k_endo();

        // Frame components of the coordinate vectors.
        let c: [[S; 4]; 4] = std::array::from_fn(|al| {
            let mut unit = [S::zero(); 4];
            unit[al] = S::one();
            frame.to_frame(&g, &unit)
        });

        let cross_p: [[S; 3]; 4] = std::array::from_fn(|al| sigma.cross(&SDual(p[al])).0);
        let cross_a: [[S; 3]; 2] = std::array::from_fn(|m| sigma.cross(&SDual(big_a[m])).0);

        let mut o = [[S::zero(); 6]; 6];
        for al in 0..4 {
            for be in 0..4 {
                let kc = apply44(&kf, &c[al]);
                o[al][be] = dot(&kc, &c[be]) + dot3(&cross_p[al], &p[be]).scale(t);
            }
            for m in 0..2 {
                o[al][4 + m] = dot3(&cross_p[al], &big_a[m]).scale(t);
                o[4 + m][al] = dot3(&cross_a[m], &p[al]).scale(t);
            }
        }
        for m in 0..2 {
            for n in 0..2 {
                o[4 + m][4 + n] = dot3(&cross_a[m], &big_a[n]).scale(t);
            }
        }
        Ok(o)
    }

    fn eval_map<S: Scalar>(
        &self,
        fmap: &FiberMap,
        sigma: &SDual<S>,
        g: &[[S; 4]; 4],
        frame: &Frame4<S>,
        x: &[S; 4],
    ) -> Result<SDual<S>, Error> {
        let omega = if fmap.needs_omega() {
            let j = self
                .chart
                .complex_structure(x)
                .ok_or(Error::MissingComplexStructure)?;
            Some(omega_in_frame(g, frame, &j).0)
        } else {
            None
        };
        fmap.apply(sigma, omega.as_ref())
    }

    /// Coordinate components of the almost complex structure:
    /// `𝒥 ∂_I = Σ_L JC[L][I] ∂_L`. Independent of `t`.
    pub fn j_field<S: Scalar>(&self, fmap: &FiberMap, z: &[S; 6]) -> Result<[[S; 6]; 6], Error> {
        let x: [S; 4] = [z[0], z[1], z[2], z[3]];
        let u: [S; 2] = [z[4], z[5]];
        let g = self.chart.metric(&x);
        let frame = Frame4::gram_schmidt(&g)?;
        let conn = sd_connection(self.chart, &x)?;
        let (a, big_a) = self.fiber_dir(&u);
        let p = Self::vertical_parts(&conn, &a);
        let sigma = SDual(a);
        let f_sigma = self.eval_map(fmap, &sigma, &g, &frame, &x)?;
        let kf = f_sigma.to_biv().k_endo();

        let gram_inv = gram2_inv(&big_a)?;
        let ucoords = |w: &[S; 3]| -> [S; 2] {
            let rhs = [dot3(w, &big_a[0]), dot3(w, &big_a[1])];
            [
                gram_inv[0][0] * rhs[0] + gram_inv[0][1] * rhs[1],
                gram_inv[1][0] * rhs[0] + gram_inv[1][1] * rhs[1],
            ]
        };

        let mut jc = [[S::zero(); 6]; 6];
        for al in 0..4 {
            let mut unit = [S::zero(); 4];
            unit[al] = S::one();
            let c = frame.to_frame(&g, &unit);
            let y = frame.from_frame(&apply44(&kf, &c));
            for be in 0..4 {
                jc[be][al] = y[be];
            }
            // Vertical correction: σ × P_α minus the vertical part carried
            // by the coordinate expression of the horizontal lift of K_f ∂_α.
            let p_y: [S; 3] = std::array::from_fn(|k| {
                let mut acc = S::zero();
                for be in 0..4 {
                    acc = acc + y[be] * p[be][k];
                }
                acc
            });
            let w: [S; 3] =
                std::array::from_fn(|k| sigma.cross(&SDual(p[al])).0[k] - p_y[k]);
            let uc = ucoords(&w);
            jc[4][al] = uc[0];
            jc[5][al] = uc[1];
        }
        for m in 0..2 {
            let w = sigma.cross(&SDual(big_a[m])).0;
            let uc = ucoords(&w);
            jc[4][4 + m] = uc[0];
            jc[5][4 + m] = uc[1];
        }
        Ok(jc)
    }

    /// Coordinate components of the horizontal lift of the constant chart
    /// field `x_dir`, as a function on the twistor chart.
    pub fn lift_field<S: Scalar>(&self, x_dir: &[f64; 4], z: &[S; 6]) -> Result<[S; 6], Error> {
        let x: [S; 4] = [z[0], z[1], z[2], z[3]];
        let u: [S; 2] = [z[4], z[5]];
        let conn = sd_connection(self.chart, &x)?;
        let (a, big_a) = self.fiber_dir(&u);
        let p = Self::vertical_parts(&conn, &a);
        let p_x: [S; 3] = std::array::from_fn(|k| {
            let mut acc = S::zero();
            for al in 0..4 {
                acc = acc + p[al][k].scale(x_dir[al]);
            }
            acc
        });
        let gram_inv = gram2_inv(&big_a)?;
        let rhs = [dot3(&p_x, &big_a[0]), dot3(&p_x, &big_a[1])];
        let c0 = gram_inv[0][0] * rhs[0] + gram_inv[0][1] * rhs[1];
        let c1 = gram_inv[1][0] * rhs[0] + gram_inv[1][1] * rhs[1];
        Ok([
            S::from_f64(x_dir[0]),
            S::from_f64(x_dir[1]),
            S::from_f64(x_dir[2]),
            S::from_f64(x_dir[3]),
            -c0,
            -c1,
        ])
    }

    /// Split a coordinate tangent vector at the anchor into its horizontal
    /// part (chart components on the base) and vertical part (σ-tangent).
    pub fn split_at_anchor(&self, v: &[f64; 6]) -> Result<([f64; 4], SDual), Error> {
        let x: [f64; 4] = self.x0;
        let conn = sd_connection(self.chart, &x)?;
        let (a, _) = self.fiber_dir(&[0.0, 0.0]);
        let p = Self::vertical_parts(&conn, &a);
        let hor = [v[0], v[1], v[2], v[3]];
        let mut ver = SDual::zero();
        for al in 0..4 {
            ver = ver.add(&SDual(p[al]).scale(v[al]));
        }
        ver = ver.add(&self.nu.0.scale(v[4]));
        ver = ver.add(&self.nu.1.scale(v[5]));
        Ok((hor, ver))
    }

    /// `h_t`-orthonormal tangent basis at the anchor, in chart coordinates:
    /// the horizontal lifts of the Gram-Schmidt frame followed by the two
    /// normalized vertical directions.
    pub fn anchor_basis(&self, t: f64) -> Result<[[f64; 6]; 6], Error> {
        let g = self.chart.metric(&self.x0);
        let frame = Frame4::gram_schmidt(&g)?;
        let mut b = [[0.0; 6]; 6];
        for a in 0..4 {
            b[a] = self.lift_field(&frame.vecs[a], &self.anchor())?;
        }
        let rt = t.sqrt();
        b[4] = [0.0, 0.0, 0.0, 0.0, 1.0 / rt, 0.0];
        b[5] = [0.0, 0.0, 0.0, 0.0, 0.0, 1.0 / rt];
        Ok(b)
    }

    /// Christoffel symbols of `h_t` at the anchor.
    pub fn christoffels_h(&self, t: f64) -> Result<[[[f64; 6]; 6]; 6], Error> {
        let z0 = self.anchor();
        christoffels_of(|z| self.h_field(t, z).expect("h_t inside sample box"), &z0)
    }

    /// Reference covariant derivative of Ω at the anchor, in coordinate
    /// indices: `T[I][J][K] = (D_{∂_I} Ω)(∂_J, ∂_K)`. Obtained purely by
    /// differentiating the coordinate fields `h` and `Ω`.
    pub fn d_omega_oracle(&self, fmap: &FiberMap, t: f64) -> Result<[[[f64; 6]; 6]; 6], Error> {
        let z0 = self.anchor();
        let gh = self.christoffels_h(t)?;
        let o0 = self.o_field(fmap, t, &z0)?;
        let mut d_o = [[[0.0; 6]; 6]; 6];
        for i in 0..6 {
            let oz = self.o_field(fmap, t, &seed_axis(&z0, i))?;
            for j in 0..6 {
                for k in 0..6 {
                    d_o[i][j][k] = oz[j][k].d;
                }
            }
        }
        let mut out = [[[0.0; 6]; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                for k in 0..6 {
                    let mut v = d_o[i][j][k];
                    for l in 0..6 {
                        v -= gh[l][i][j] * o0[l][k] + gh[l][i][k] * o0[j][l];
                    }
                    out[i][j][k] = v;
                }
            }
        }
        Ok(out)
    }

    /// Reference Nijenhuis tensor at the anchor, lowered with `h_t`:
    /// `NT[I][J][M] = h_t(N(∂_I, ∂_J), ∂_M)` with
    /// `N(A,B) = [𝒥A, 𝒥B] - 𝒥[𝒥A, B] - 𝒥[A, 𝒥B] - [A, B]`.
    pub fn nijenhuis_oracle(&self, fmap: &FiberMap, t: f64) -> Result<[[[f64; 6]; 6]; 6], Error> {
        let z0 = self.anchor();
        let h0 = self.h_field(t, &z0)?;
        let jc0 = self.j_field(fmap, &z0)?;
        let mut djc = [[[0.0; 6]; 6]; 6]; // djc[k][l][i] = ∂_k JC[l][i]
        for k in 0..6 {
            let jz = self.j_field(fmap, &seed_axis(&z0, k))?;
            for l in 0..6 {
                for i in 0..6 {
                    djc[k][l][i] = jz[l][i].d;
                }
            }
        }
        let mut n = [[[0.0; 6]; 6]; 6]; // n[l][i][j] = N^L_{IJ}
        for l in 0..6 {
            for i in 0..6 {
                for j in 0..6 {
                    let mut acc = 0.0;
                    for k in 0..6 {
                        acc += jc0[k][i] * djc[k][l][j] - jc0[k][j] * djc[k][l][i]
                            + jc0[l][k] * (djc[j][k][i] - djc[i][k][j]);
                    }
                    n[l][i][j] = acc;
                }
            }
        }
        let mut out = [[[0.0; 6]; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                for m in 0..6 {
                    out[i][j][m] = (0..6).map(|l| n[l][i][j] * h0[l][m]).sum();
                }
            }
        }
        Ok(out)
    }

    /// Reference Levi-Civita derivative `D_{X^h} Y^h` at the anchor for
    /// constant chart fields `X`, `Y`, in chart coordinates.
    pub fn lc_oracle_lift_lift(&self, t: f64, x_dir: &[f64; 4], y_dir: &[f64; 4]) -> Result<[f64; 6], Error> {
        let z0 = self.anchor();
        let gh = self.christoffels_h(t)?;
        let fx = self.lift_field::<f64>(x_dir, &z0)?;
        let fy = self.lift_field::<f64>(y_dir, &z0)?;
        let mut dfy = [[0.0; 6]; 6]; // dfy[i][l] = ∂_I F_Y^L
        for i in 0..6 {
            let fz = self.lift_field(y_dir, &seed_axis(&z0, i))?;
            for l in 0..6 {
                dfy[i][l] = fz[l].d;
            }
        }
        Ok(std::array::from_fn(|l| {
            let mut acc = 0.0;
            for i in 0..6 {
                acc += fx[i] * dfy[i][l];
                for j in 0..6 {
                    acc += fx[i] * fy[j] * gh[l][i][j];
                }
            }
            acc
        }))
    }

    /// Reference `D_{X^h} ∂u_m` at the anchor.
    pub fn lc_oracle_lift_vertical(&self, t: f64, x_dir: &[f64; 4], m: usize) -> Result<[f64; 6], Error> {
        let z0 = self.anchor();
        let gh = self.christoffels_h(t)?;
        let fx = self.lift_field::<f64>(x_dir, &z0)?;
        Ok(std::array::from_fn(|l| {
            (0..6).map(|i| fx[i] * gh[l][i][4 + m]).sum()
        }))
    }

    /// Reference `D_{∂u_m} ∂u_n` at the anchor.
    pub fn lc_oracle_vertical_vertical(&self, t: f64, m: usize, n: usize) -> Result<[f64; 6], Error> {
        let gh = self.christoffels_h(t)?;
        Ok(std::array::from_fn(|l| gh[l][4 + m][4 + n]))
    }

    /// Coordinate bracket `[X^h, Y^h]` of the lifted fields at the anchor.
    pub fn lift_bracket(&self, x_dir: &[f64; 4], y_dir: &[f64; 4]) -> Result<[f64; 6], Error> {
        let z0 = self.anchor();
        let fx = self.lift_field::<f64>(x_dir, &z0)?;
        let fy = self.lift_field::<f64>(y_dir, &z0)?;
        let mut dfx = [[0.0; 6]; 6];
        let mut dfy = [[0.0; 6]; 6];
        for i in 0..6 {
            let zx = self.lift_field(x_dir, &seed_axis(&z0, i))?;
            let zy = self.lift_field(y_dir, &seed_axis(&z0, i))?;
            for l in 0..6 {
                dfx[i][l] = zx[l].d;
                dfy[i][l] = zy[l].d;
            }
        }
        Ok(std::array::from_fn(|l| {
            (0..6)
                .map(|i| fx[i] * dfy[i][l] - fy[i] * dfx[i][l])
                .sum()
        }))
    }

    /// Closed-form `D_{X^h} Y^h` at the anchor: horizontal part `∇_X Y`
    /// (chart components), vertical part `(1/2) (ℛ(X∧Y))₊ × σ`.
    pub fn lc_closed_lift_lift(
        &self,
        op: &CurvOp,
        x_dir: &[f64; 4],
        y_dir: &[f64; 4],
    ) -> Result<([f64; 4], SDual), Error> {
        let gamma = christoffels(self.chart, &self.x0)?;
        let hor: [f64; 4] = std::array::from_fn(|c| {
            let mut acc = 0.0;
            for al in 0..4 {
                for be in 0..4 {
                    acc += x_dir[al] * y_dir[be] * gamma[c][al][be];
                }
            }
            acc
        });
        let g = self.chart.metric(&self.x0);
        let frame = Frame4::gram_schmidt(&g)?;
        let xf = frame.to_frame(&g, x_dir);
        let yf = frame.to_frame(&g, y_dir);
        let (sd, _) = op.apply(&wedge(&xf, &yf)).hodge_split();
        let ver = sd.cross(&self.sigma0).scale(0.5);
        Ok((hor, ver))
    }

    /// Closed-form horizontal part of `D_{X^h} V` for a vertical vector `V`
    /// at the anchor: `-(t/2) R(σ × V) X`, returned in chart components.
    pub fn lc_closed_lift_vertical(
        &self,
        op: &CurvOp,
        t: f64,
        x_dir: &[f64; 4],
        v: &SDual,
    ) -> Result<[f64; 4], Error> {
        let g = self.chart.metric(&self.x0);
        let frame = Frame4::gram_schmidt(&g)?;
        let xf = frame.to_frame(&g, x_dir);
        let a = self.sigma0.cross(v);
        let img = curv_contract(op, &a, &xf);
        let scaled: [f64; 4] = std::array::from_fn(|i| -(t / 2.0) * img[i]);
        Ok(frame.from_frame(&scaled))
    }
}

/// `R(a) X` in frame components for a self-dual `a`:
/// `g(R(a)X, Y) = g(ℛ(a), X ∧ Y)` through the curvature operator.
pub fn curv_contract(op: &CurvOp, a: &SDual, x_frame: &[f64; 4]) -> [f64; 4] {
    // g(K_b X, Y) = 2 g(b, X∧Y) for any 2-form b, so the endomorphism with
    // g(R(a)X, Y) = g(ℛ(a), X∧Y) is half the skew map of ℛ(a).
    let img = op.apply(&a.to_biv());
    let kx = img.k_apply(x_frame);
    std::array::from_fn(|i| 0.5 * kx[i])
}

fn dot3<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> S {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn apply44<S: Scalar>(m: &[[S; 4]; 4], x: &[S; 4]) -> [S; 4] {
    std::array::from_fn(|i| {
        let mut acc = S::zero();
        for j in 0..4 {
            acc = acc + m[i][j] * x[j];
        }
        acc
    })
}

fn gram2_inv<S: Scalar>(big_a: &[[S; 3]; 2]) -> Result<[[S; 2]; 2], Error> {
    let g00 = dot3(&big_a[0], &big_a[0]);
    let g01 = dot3(&big_a[0], &big_a[1]);
    let g11 = dot3(&big_a[1], &big_a[1]);
    let det = g00 * g11 - g01 * g01;
    if !(det.re().abs() > 1e-30) {
        return Err(Error::SingularMetric);
    }
    let inv = S::one() / det;
    Ok([[g11 * inv, -g01 * inv], [-g01 * inv, g00 * inv]])
}
