//! Gray–Hervella analysis of twistor almost-Hermitian structures.
//!
//! For a base chart, a fibre map and a parameter `t`, this module evaluates
//! the closed-form structure tensors of `(𝒵, h_t, 𝒥_f)` — the covariant
//! derivative of the fundamental 2-form, its exterior derivative and
//! codifferential, and the Nijenhuis tensor — in an `h_t`-orthonormal basis
//! `(E_1^h, …, E_4^h, ν₁/√t, ν₂/√t)` at each sample point. The residuals of
//! the sixteen-class defining identities are folded (by maximum) over a
//! deterministic sample grid and classified into a component pattern.
//!
//! Index convention for all rank-3 tensors: `T[A][B][C]` with `A,B,C ∈ 0..6`,
//! indices `0..4` horizontal (frame order) and `4..6` vertical. For the
//! covariant-derivative tensor `T[A][B][C] = (D_A Ω)(B, C)`; for the
//! Nijenhuis tensor `NT[A][B][C] = h_t(N(A, B), C)`.

use crate::bivector::{wedge, Biv, SDual};
use crate::chart::MetricChart;
use crate::curvature::{curvature_operator, CurvOp};
use crate::error::Error;
use crate::fibermaps::{fiber_differential, omega_at, pushforward_horizontal, FiberMap};
use crate::frame::Frame4;
use crate::linalg::frobenius3;
use crate::sample::{base_points, fiber_sample};
use crate::twistor::vertical_frame;

/// Everything needed at one `(x, σ)` to evaluate the structure tensors for
/// any `t` (all fields are `t`-independent).
#[derive(Clone, Debug)]
pub struct SampleCore {
    pub sigma: SDual,
    pub nu: (SDual, SDual),
    /// `f(σ)`.
    pub f_sigma: SDual,
    /// Curvature operator in the Gram-Schmidt frame at `x`.
    pub op: CurvOp,
    /// Vertical parts `𝒱f_*(E_a^h)` of the pushed-forward horizontal frame.
    pub vf: [SDual; 4],
    /// Fibre differentials `f_*(ν_m)`.
    pub fnu: [SDual; 2],
}

/// Assemble the point data for one base point and fibre point.
pub fn assemble<C: MetricChart>(
    chart: &C,
    x: &[f64; 4],
    sigma: &SDual,
    fmap: &FiberMap,
) -> Result<SampleCore, Error> {
    let g = chart.metric(x);
    let frame = Frame4::gram_schmidt(&g)?;
    let op = curvature_operator(chart, x)?;
    let omega = omega_at(chart, x)?;
    if fmap.needs_omega() && omega.is_none() {
        return Err(Error::MissingComplexStructure);
    }
    let f_sigma = fmap.apply(sigma, omega.as_ref())?;
    let nu = vertical_frame(sigma);
    let vf = [
        pushforward_horizontal(chart, x, sigma, fmap, &frame.vecs[0])?,
        pushforward_horizontal(chart, x, sigma, fmap, &frame.vecs[1])?,
        pushforward_horizontal(chart, x, sigma, fmap, &frame.vecs[2])?,
        pushforward_horizontal(chart, x, sigma, fmap, &frame.vecs[3])?,
    ];
    let fnu = [
        fiber_differential(fmap, sigma, &nu.0, omega.as_ref())?,
        fiber_differential(fmap, sigma, &nu.1, omega.as_ref())?,
    ];
    Ok(SampleCore { sigma: *sigma, nu, f_sigma, op, vf, fnu })
}

fn axis4(i: usize) -> [f64; 4] {
    let mut v = [0.0; 4];
    v[i] = 1.0;
    v
}

/// Matrix of `𝒥_f` in the orthonormal basis: `𝒥 e_B = Σ_A JM[A][B] e_A`.
/// Horizontal block `K_{f(σ)}`, vertical block the rotation `σ ×`.
pub fn j_matrix(core: &SampleCore) -> [[f64; 6]; 6] {
    let kf = core.f_sigma.to_biv().k_endo();
    let mut jm = [[0.0; 6]; 6];
    for r in 0..4 {
        for c in 0..4 {
            jm[r][c] = kf[r][c];
        }
    }
    // σ × ν₁ = ν₂ and σ × ν₂ = −ν₁ by the vertical-frame construction.
    jm[5][4] = 1.0;
    jm[4][5] = -1.0;
    jm
}

/// Closed-form covariant derivative `T[A][B][C] = (D_A Ω)(B, C)` in the
/// orthonormal basis. Nonzero blocks: three horizontal slots; two
/// horizontal + one vertical (in slot 2 or 3); one vertical in slot 1.
pub fn cov_deriv_closed(core: &SampleCore, t: f64) -> [[[f64; 6]; 6]; 6] {
    let rt = t.sqrt();
    let kf = core.f_sigma.to_biv().k_endo();
    let kcol: [[f64; 4]; 4] = std::array::from_fn(|a| std::array::from_fn(|r| kf[r][a]));
    let nu = [core.nu.0, core.nu.1];
    // σ × ν₁ = ν₂, σ × ν₂ = −ν₁.
    let chi = [core.nu.1, core.nu.0.neg()];
    let r_nu: [Biv; 2] = std::array::from_fn(|m| core.op.apply(&nu[m].to_biv()));
    let r_chi: [Biv; 2] = std::array::from_fn(|m| core.op.apply(&chi[m].to_biv()));
    let vf_biv: [Biv; 4] = std::array::from_fn(|a| core.vf[a].to_biv());
    let fnu_biv: [Biv; 2] = std::array::from_fn(|m| core.fnu[m].to_biv());

    let mut tt = [[[0.0; 6]; 6]; 6];
    for a in 0..4 {
        for b in 0..4 {
            let w_ab = wedge(&axis4(a), &axis4(b));
            // (D_{E_a^h} Ω)(E_b^h, E_c^h) = 2 g(𝒱f_*(E_a^h), E_b ∧ E_c)
            for c in 0..4 {
                tt[a][b][c] = 2.0 * vf_biv[a].inner(&wedge(&axis4(b), &axis4(c)));
            }
            // (D_{E_a^h} Ω)(E_b^h, ν̂_m) =
            //   (√t/2) [ −g(ℛ ν_m, E_a∧E_b) + g(ℛ(σ×ν_m), E_a ∧ K_f E_b) ]
            for m in 0..2 {
                let v = (rt / 2.0)
                    * (-r_nu[m].inner(&w_ab) + r_chi[m].inner(&wedge(&axis4(a), &kcol[b])));
                tt[a][b][4 + m] = v;
                tt[a][4 + m][b] = -v;
            }
        }
    }
    // (D_{ν̂_m} Ω)(E_b^h, E_c^h) = (1/√t) [ −(t/2) g(ℛ(σ×ν_m),
    //   E_b ∧ K_f E_c + K_f E_b ∧ E_c) + 2 g(f_*(ν_m), E_b ∧ E_c) ]
    for m in 0..2 {
        for b in 0..4 {
            for c in 0..4 {
                let mixed = wedge(&axis4(b), &kcol[c]).add(&wedge(&kcol[b], &axis4(c)));
                tt[4 + m][b][c] = (-(t / 2.0) * r_chi[m].inner(&mixed)
                    + 2.0 * fnu_biv[m].inner(&wedge(&axis4(b), &axis4(c))))
                    / rt;
            }
        }
    }
    tt
}

/// Closed-form codifferential `δΩ` in the orthonormal basis.
pub fn codifferential_closed(core: &SampleCore, t: f64) -> [f64; 6] {
    let rt = t.sqrt();
    let chi = [core.nu.1, core.nu.0.neg()];
    let mut d = [0.0; 6];
    for c in 0..4 {
        let mut acc = 0.0;
        for a in 0..4 {
            acc += 2.0 * core.vf[a].to_biv().inner(&wedge(&axis4(c), &axis4(a)));
        }
        d[c] = acc;
    }
    for m in 0..2 {
        d[4 + m] = -rt * core.op.apply(&chi[m].to_biv()).inner(&core.f_sigma.to_biv());
    }
    d
}

/// Closed-form Nijenhuis tensor `NT[A][B][C] = h_t(N(A,B), C)`.
pub fn nijenhuis_closed(core: &SampleCore, t: f64) -> [[[f64; 6]; 6]; 6] {
    let rt = t.sqrt();
    let kf = core.f_sigma.to_biv().k_endo();
    let kcol: [[f64; 4]; 4] = std::array::from_fn(|a| std::array::from_fn(|r| kf[r][a]));
    let nu = [core.nu.0, core.nu.1];
    // 𝒱f_*((K_f E_a)^h) by linearity of the vertical pushforward.
    let vf_k: [SDual; 4] = std::array::from_fn(|a| {
        let mut acc = SDual::zero();
        for b in 0..4 {
            acc = acc.add(&core.vf[b].scale(kcol[a][b]));
        }
        acc
    });
    // f_*(σ × ν_m): σ×ν₁ = ν₂, σ×ν₂ = −ν₁, and the fibre differential is
    // linear in the fibre tangent.
    let f_chi = [core.fnu[1], core.fnu[0].neg()];

    let mut nt = [[[0.0; 6]; 6]; 6];
    for a in 0..4 {
        for b in 0..4 {
            let w_ab = wedge(&axis4(a), &axis4(b));
            for c in 0..4 {
                let w_ac = wedge(&axis4(a), &axis4(c));
                let w_bc = wedge(&axis4(b), &axis4(c));
                nt[a][b][c] = 2.0 * core.vf[a].to_biv().inner(&wedge(&kcol[b], &axis4(c)))
                    - 2.0 * core.vf[b].to_biv().inner(&wedge(&kcol[a], &axis4(c)))
                    + 2.0 * vf_k[a].to_biv().inner(&w_bc)
                    - 2.0 * vf_k[b].to_biv().inner(&w_ac);
            }
            // Vertical value of N(E_a^h, E_b^h):
            //   −(ℛ(E_a∧K_fE_b + K_fE_a∧E_b))₊ + σ × (ℛ(E_a∧E_b − K_fE_a∧K_fE_b))₊
            let mixed = wedge(&axis4(a), &kcol[b]).add(&wedge(&kcol[a], &axis4(b)));
            let pure = w_ab.sub(&wedge(&kcol[a], &kcol[b]));
            let sd1 = core.op.apply(&mixed).hodge_split().0;
            let sd2 = core.op.apply(&pure).hodge_split().0;
            let n_v = core.sigma.cross(&sd2).sub(&sd1);
            for m in 0..2 {
                nt[a][b][4 + m] = rt * n_v.dot(&nu[m]);
            }
        }
        // h_t(N(E_a^h, ν̂_m), E_c^h) = (1/√t) [ 2 g(f(σ)×f_*ν_m, E_a∧E_c)
        //   − 2 g(f_*(σ×ν_m), E_a∧E_c) ].
        // Orientation fixed by the bracket definition of N through the
        // covariant-derivative formula; the block vanishes exactly when the
        // fibre restriction of f is holomorphic.
        for m in 0..2 {
            let cross = core.f_sigma.cross(&core.fnu[m]);
            for c in 0..4 {
                let w_ac = wedge(&axis4(a), &axis4(c));
                let v = (2.0 * cross.to_biv().inner(&w_ac)
                    - 2.0 * f_chi[m].to_biv().inner(&w_ac))
                    / rt;
                nt[a][4 + m][c] = v;
                nt[4 + m][a][c] = -v;
            }
        }
    }
    nt
}

/// Nijenhuis tensor from the covariant derivative of Ω:
/// `h_t(N(A,B),C) = (D_AΩ)(𝒥B,C) − (D_{𝒥B}Ω)(A,C) − (D_BΩ)(𝒥A,C) + (D_{𝒥A}Ω)(B,C)`.
pub fn nijenhuis_from_cov(tt: &[[[f64; 6]; 6]; 6], jm: &[[f64; 6]; 6]) -> [[[f64; 6]; 6]; 6] {
    let mut nt = [[[0.0; 6]; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                let mut acc = 0.0;
                for p in 0..6 {
                    acc += jm[p][b] * (tt[a][p][c] - tt[p][a][c])
                        + jm[p][a] * (tt[p][b][c] - tt[b][p][c]);
                }
                nt[a][b][c] = acc;
            }
        }
    }
    nt
}

/// Exterior derivative of Ω as the cyclic sum of its covariant derivative.
pub fn exterior_d(tt: &[[[f64; 6]; 6]; 6]) -> [[[f64; 6]; 6]; 6] {
    let mut d = [[[0.0; 6]; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                d[a][b][c] = tt[a][b][c] + tt[b][c][a] + tt[c][a][b];
            }
        }
    }
    d
}

/// Residuals of the Gray–Hervella defining identities, each the Frobenius
/// norm of an identity's defect tensor (max-folded over samples by callers).
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GHResiduals {
    /// ‖DΩ‖ — vanishes exactly for the Kähler class.
    pub r_total: f64,
    /// ‖N‖ — vanishes exactly for the Hermitian class W₃⊕W₄.
    pub r_n: f64,
    /// ‖δΩ‖ — vanishes exactly for the semi-Kähler class W₁⊕W₂⊕W₃.
    pub r_sk: f64,
    /// Quasi-Kähler defect: ‖(D_AΩ)(B,C) + (D_{𝒥A}Ω)(𝒥B,C)‖.
    pub r_qk: f64,
    /// W₁⊕W₂⊕W₄ defect: quasi-Kähler combination minus its codifferential
    /// right side.
    pub r_124: f64,
    /// Nearly-Kähler defect: ‖(D_AΩ)(B,C) + (D_BΩ)(A,C)‖.
    pub r_w1: f64,
    /// Almost-Kähler defect: ‖dΩ‖.
    pub r_d_omega: f64,
    /// 𝒢₁ defect from DΩ (polarized form).
    pub r_g1: f64,
    /// 𝒢₂ defect from DΩ (cyclic form).
    pub r_g2: f64,
    /// 𝒢₁ defect from N: ‖h(N(A,B),C) + h(N(C,B),A)‖.
    pub r_g1_n: f64,
    /// 𝒢₂ defect from N: ‖𝔖 h(N(A,B),𝒥C)‖.
    pub r_g2_n: f64,
}

impl GHResiduals {
    pub fn zero() -> Self {
        GHResiduals {
            r_total: 0.0,
            r_n: 0.0,
            r_sk: 0.0,
            r_qk: 0.0,
            r_124: 0.0,
            r_w1: 0.0,
            r_d_omega: 0.0,
            r_g1: 0.0,
            r_g2: 0.0,
            r_g1_n: 0.0,
            r_g2_n: 0.0,
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        GHResiduals {
            r_total: self.r_total.max(other.r_total),
            r_n: self.r_n.max(other.r_n),
            r_sk: self.r_sk.max(other.r_sk),
            r_qk: self.r_qk.max(other.r_qk),
            r_124: self.r_124.max(other.r_124),
            r_w1: self.r_w1.max(other.r_w1),
            r_d_omega: self.r_d_omega.max(other.r_d_omega),
            r_g1: self.r_g1.max(other.r_g1),
            r_g2: self.r_g2.max(other.r_g2),
            r_g1_n: self.r_g1_n.max(other.r_g1_n),
            r_g2_n: self.r_g2_n.max(other.r_g2_n),
        }
    }
}

fn norm6(v: &[f64; 6]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Apply `𝒥 ⊗ 𝒥` to the first two slots: out[A][B][C] = Σ JM[A'][A] JM[B'][B] T[A'][B'][C].
fn jj_slots12(tt: &[[[f64; 6]; 6]; 6], jm: &[[f64; 6]; 6]) -> [[[f64; 6]; 6]; 6] {
    let mut tmp = [[[0.0; 6]; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                let mut acc = 0.0;
                for ap in 0..6 {
                    acc += jm[ap][a] * tt[ap][b][c];
                }
                tmp[a][b][c] = acc;
            }
        }
    }
    let mut out = [[[0.0; 6]; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                let mut acc = 0.0;
                for bp in 0..6 {
                    acc += jm[bp][b] * tmp[a][bp][c];
                }
                out[a][b][c] = acc;
            }
        }
    }
    out
}

fn cyclic(tt: &[[[f64; 6]; 6]; 6]) -> [[[f64; 6]; 6]; 6] {
    let mut out = [[[0.0; 6]; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                out[a][b][c] = tt[a][b][c] + tt[b][c][a] + tt[c][a][b];
            }
        }
    }
    out
}

/// Residuals of all tracked identities at one sample.
pub fn residuals_at(core: &SampleCore, t: f64) -> GHResiduals {
    let tt = cov_deriv_closed(core, t);
    let nt = nijenhuis_closed(core, t);
    let delta = codifferential_closed(core, t);
    let jm = j_matrix(core);

    let jj_t = jj_slots12(&tt, &jm);
    // Quasi-Kähler: (D_AΩ)(B,C) + (D_{𝒥A}Ω)(𝒥B,C).
    let mut q = [[[0.0; 6]; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                q[a][b][c] = tt[a][b][c] + jj_t[a][b][c];
            }
        }
    }

    // δΩ ∘ 𝒥.
    let dj: [f64; 6] = std::array::from_fn(|c| (0..6).map(|cp| jm[cp][c] * delta[cp]).sum());

    // W₁⊕W₂⊕W₄: Q = −½ { h(A,B) δΩ(C) − h(A,C) δΩ(B)
    //                    − h(A,𝒥B) δΩ(𝒥C) + h(A,𝒥C) δΩ(𝒥B) }.
    let mut d124 = [[[0.0; 6]; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                let id_ab = if a == b { 1.0 } else { 0.0 };
                let id_ac = if a == c { 1.0 } else { 0.0 };
                d124[a][b][c] = q[a][b][c]
                    + 0.5 * (id_ab * delta[c] - id_ac * delta[b] - jm[a][b] * dj[c]
                        + jm[a][c] * dj[b]);
            }
        }
    }

    // Nearly-Kähler defect and 𝒢₁ (polarization of (D_AΩ)(A,B) − (D_{𝒥A}Ω)(𝒥A,B)).
    let mut p = [[[0.0; 6]; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                p[a][b][c] = tt[a][b][c] + tt[b][a][c];
            }
        }
    }
    let jj_p = jj_slots12(&p, &jm);
    let mut g1 = [[[0.0; 6]; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                g1[a][b][c] = p[a][b][c] - jj_p[a][b][c];
            }
        }
    }

    // 𝒢₂: 𝔖 { (D_AΩ)(B,C) − (D_{𝒥A}Ω)(𝒥B,C) }.
    let mut u = [[[0.0; 6]; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                u[a][b][c] = tt[a][b][c] - jj_t[a][b][c];
            }
        }
    }
    let g2 = cyclic(&u);

    // N-based 𝒢₁: h(N(A,B),C) + h(N(C,B),A).
    let mut g1n = [[[0.0; 6]; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                g1n[a][b][c] = nt[a][b][c] + nt[c][b][a];
            }
        }
    }
    // N-based 𝒢₂: 𝔖 h(N(A,B), 𝒥C).
    let mut nj = [[[0.0; 6]; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                nj[a][b][c] = (0..6).map(|cp| nt[a][b][cp] * jm[cp][c]).sum();
            }
        }
    }
    let g2n = cyclic(&nj);

    GHResiduals {
        r_total: frobenius3(&tt),
        r_n: frobenius3(&nt),
        r_sk: norm6(&delta),
        r_qk: frobenius3(&q),
        r_124: frobenius3(&d124),
        r_w1: frobenius3(&p),
        r_d_omega: frobenius3(&exterior_d(&tt)),
        r_g1: frobenius3(&g1),
        r_g2: frobenius3(&g2),
        r_g1_n: frobenius3(&g1n),
        r_g2_n: frobenius3(&g2n),
    }
}

/// Sample-grid specification for a residual run.
#[derive(Clone, Debug)]
pub struct RunGrid {
    pub base_points: usize,
    pub fiber_points: usize,
    pub seed: u64,
}

impl Default for RunGrid {
    fn default() -> Self {
        RunGrid { base_points: 4, fiber_points: 8, seed: 0 }
    }
}

/// Max-fold the identity residuals over the sample grid, for each `t`.
/// Evaluation order is fixed (base point, fibre point, t) so results are
/// bitwise reproducible for a given configuration.
pub fn gh_residuals<C: MetricChart>(
    chart: &C,
    fmap: &FiberMap,
    t_values: &[f64],
    grid: &RunGrid,
) -> Result<GHResiduals, Error> {
    if t_values.is_empty() || grid.base_points == 0 || grid.fiber_points == 0 {
        return Err(Error::InvalidParameter(
            "residual run needs at least one base point, fibre point and t value".to_string(),
        ));
    }
    for &t in t_values {
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "fibre scale t must be positive, got {t}"
            )));
        }
    }
    let mut folded = GHResiduals::zero();
    for x in base_points(&chart.sample_box(), grid.base_points) {
        for sigma in fiber_sample(grid.fiber_points, grid.seed) {
            let core = assemble(chart, &x, &sigma, fmap)?;
            for &t in t_values {
                folded = folded.max(&residuals_at(&core, t));
            }
        }
    }
    Ok(folded)
}

/// Outcome of classification: the Gray–Hervella component pattern and the
/// class name it corresponds to.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Classification {
    pub class: String,
    /// Bits `w1 w2 w3 w4`, `1` = component present.
    pub pattern: String,
}

fn component_bit(name: &str, r: f64, tol: f64, margin: f64) -> Result<bool, Error> {
    if r <= tol {
        Ok(false)
    } else if r > margin {
        Ok(true)
    } else {
        Err(Error::AmbiguousClass(format!(
            "{name} residual {r:.3e} lies in the ambiguity window ({tol:.1e}, {margin:.1e}]"
        )))
    }
}

/// Decide the component pattern from the residuals.
///
/// Each component `Wᵢ` is *present* iff the defect of the complementary
/// codimension-one class exceeds `10·tol`, and *absent* iff it is at most
/// `tol`; residuals inside the window are refused as ambiguous rather than
/// rounded. `r_total ≤ tol` short-circuits to the Kähler class after
/// checking that no component residual contradicts it.
pub fn classify(res: &GHResiduals, tol: f64) -> Result<Classification, Error> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let margin = 10.0 * tol;
    // The derivative-based and Nijenhuis-based forms of the 𝒢-identities
    // vanish together in exact arithmetic; a hard contradiction between the
    // two is an internal inconsistency, never silently resolved.
    for (name, d_form, n_form) in [("G1", res.r_g1, res.r_g1_n), ("G2", res.r_g2, res.r_g2_n)] {
        let contradiction = (d_form <= tol && n_form > 10.0 * margin)
            || (n_form <= tol && d_form > 10.0 * margin);
        if contradiction {
            return Err(Error::InconsistentClass(format!(
                "{name} formulations disagree: derivative form {d_form:.3e} vs Nijenhuis form {n_form:.3e}"
            )));
        }
    }
    let comps = [
        ("W1", res.r_g2),
        ("W2", res.r_g1),
        ("W3", res.r_124),
        ("W4", res.r_sk),
    ];
    if res.r_total <= tol {
        for (name, r) in comps {
            if r > tol {
                return Err(Error::InconsistentClass(format!(
                    "total defect {:.3e} is Kahler-small but the {name} test residual is {r:.3e}",
                    res.r_total
                )));
            }
        }
        return Ok(Classification { class: "K".to_string(), pattern: "0000".to_string() });
    }
    if res.r_total <= margin {
        return Err(Error::AmbiguousClass(format!(
            "total defect {:.3e} lies in the ambiguity window ({tol:.1e}, {margin:.1e}]",
            res.r_total
        )));
    }
    let mut bits = [false; 4];
    for (k, (name, r)) in comps.iter().enumerate() {
        bits[k] = component_bit(name, *r, tol, margin)?;
    }
    if bits.iter().all(|b| !b) {
        return Err(Error::InconsistentClass(format!(
            "total defect {:.3e} exceeds the margin but every component residual is small",
            res.r_total
        )));
    }
    let pattern: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
    let class = match pattern.as_str() {
        "1100" => "W1+W2 (quasi-Kahler)".to_string(),
        "1110" => "W1+W2+W3 (semi-Kahler)".to_string(),
        "0011" => "W3+W4 (Hermitian)".to_string(),
        "1011" => "W1+W3+W4 (G1)".to_string(),
        "0111" => "W2+W3+W4 (G2)".to_string(),
        "1111" => "W".to_string(),
        _ => {
            let names: Vec<&str> = bits
                .iter()
                .zip(["W1", "W2", "W3", "W4"])
                .filter_map(|(&b, n)| if b { Some(n) } else { None })
                .collect();
            names.join("+")
        }
    };
    Ok(Classification { class, pattern })
}

// ---------------------------------------------------------------------------
// Verification suites
//
// Defect functionals behind the `verify` front-end and the regression tests:
// frame-level algebra, curvature-decomposition structure, and the
// equivalence of the closed structure tensors with their differentiation
// oracles.

/// Max defects of the frame-level algebra identities over seeded samples.
#[derive(Clone, Copy, Debug)]
pub struct AlgebraDefects {
    /// `g(K_a X, Y) = 2 g(a, X∧Y)` for arbitrary 2-forms `a`.
    pub contraction: f64,
    /// `K_a K_b = −g(a,b) Id + K_{a×b}` for unit self-dual `a`, `b`.
    pub composition: f64,
    /// `g(σ×V, X ∧ K_σY) = g(σ×V, K_σX ∧ Y) = g(V, X∧Y)` for `V ⊥ σ`.
    pub vertical_pairing: f64,
    /// `g(R(a)b, c) = g(ℛ(b×c), a)` with `R(a)b = (ℛa)₊ × b`.
    pub curvature_transfer: f64,
}

impl AlgebraDefects {
    pub fn max(&self) -> f64 {
        self.contraction
            .max(self.composition)
            .max(self.vertical_pairing)
            .max(self.curvature_transfer)
    }
}

pub fn algebra_defects(op: &CurvOp, samples: usize, seed: u64) -> AlgebraDefects {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let v4 = |rng: &mut rand_chacha::ChaCha8Rng| -> [f64; 4] {
        std::array::from_fn(|_| rng.gen_range(-1.0..1.0))
    };
    let mut out = AlgebraDefects {
        contraction: 0.0,
        composition: 0.0,
        vertical_pairing: 0.0,
        curvature_transfer: 0.0,
    };
    for _ in 0..samples {
        let a_biv = Biv(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        let x = v4(&mut rng);
        let y = v4(&mut rng);
        let w_xy = wedge(&x, &y);

        // Contraction pairing.
        let kax = a_biv.k_apply(&x);
        let lhs: f64 = (0..4).map(|i| kax[i] * y[i]).sum();
        out.contraction = out.contraction.max((lhs - 2.0 * a_biv.inner(&w_xy)).abs());

        // Composition rule on unit self-dual forms.
        let a = SDual(std::array::from_fn(|_| rng.gen_range(-1.0_f64..1.0))).normalized();
        let b = SDual(std::array::from_fn(|_| rng.gen_range(-1.0_f64..1.0))).normalized();
        let ka = a.k_endo();
        let kb = b.k_endo();
        let kab = a.cross(&b).k_endo();
        let dot = a.dot(&b);
        let mut comp = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0.0;
                for l in 0..4 {
                    acc += ka[i][l] * kb[l][j];
                }
                let want = kab[i][j] - if i == j { dot } else { 0.0 };
                comp = comp.max((acc - want).abs());
            }
        }
        out.composition = out.composition.max(comp);

        // Vertical pairing: V tangent to the fibre at a unit σ.
        let sigma = a;
        let raw = SDual(std::array::from_fn(|_| rng.gen_range(-1.0_f64..1.0)));
        let v = raw.sub(&sigma.scale(raw.dot(&sigma)));
        let sv = sigma.cross(&v).to_biv();
        let ks = sigma.k_endo();
        let ksy: [f64; 4] = std::array::from_fn(|i| (0..4).map(|l| ks[i][l] * y[l]).sum());
        let ksx: [f64; 4] = std::array::from_fn(|i| (0..4).map(|l| ks[i][l] * x[l]).sum());
        let want = v.to_biv().inner(&w_xy);
        out.vertical_pairing = out
            .vertical_pairing
            .max((sv.inner(&wedge(&x, &ksy)) - want).abs())
            .max((sv.inner(&wedge(&ksx, &y)) - want).abs());

        // Curvature transfer: a arbitrary, b, c self-dual.
        let c = SDual(std::array::from_fn(|_| rng.gen_range(-1.0_f64..1.0))).normalized();
        let ra_sd = op.apply(&a_biv).hodge_split().0;
        let lhs = ra_sd.cross(&b).dot(&c);
        let rhs = op.apply(&b.cross(&c).to_biv()).inner(&a_biv);
        out.curvature_transfer = out.curvature_transfer.max((lhs - rhs).abs());
    }
    out
}

/// Structural defects of the curvature-operator decomposition.
#[derive(Clone, Copy, Debug)]
pub struct DecompositionDefects {
    /// Reassembling scalar part + traceless Ricci block + Weyl halves.
    pub reconstruction: f64,
    /// Symmetry of the 6×6 operator (the two off-diagonal blocks are
    /// mutual transposes, i.e. the Ricci block maps Λ²₊ ↔ Λ²₋ coherently).
    pub symmetry: f64,
    /// Equality of the self-dual and anti-self-dual block traces.
    pub trace_balance: f64,
    /// Trace-freeness of both Weyl blocks.
    pub weyl_trace: f64,
}

impl DecompositionDefects {
    pub fn max(&self) -> f64 {
        self.reconstruction
            .max(self.symmetry)
            .max(self.trace_balance)
            .max(self.weyl_trace)
    }
}

pub fn decomposition_defects(op: &CurvOp) -> DecompositionDefects {
    let d = op.decompose();
    let rec = d.reconstruct();
    let mut recon = 0.0_f64;
    for i in 0..6 {
        for j in 0..6 {
            recon = recon.max((op.mat[i][j] - rec.mat[i][j]).abs());
        }
    }
    let tr_sd: f64 = (0..3).map(|i| op.mat[i][i]).sum();
    let tr_asd: f64 = (3..6).map(|i| op.mat[i][i]).sum();
    let wp_tr: f64 = (0..3).map(|i| d.w_plus[i][i]).sum();
    let wm_tr: f64 = (0..3).map(|i| d.w_minus[i][i]).sum();
    DecompositionDefects {
        reconstruction: recon,
        symmetry: op.asymmetry(),
        trace_balance: (tr_sd - tr_asd).abs(),
        weyl_trace: wp_tr.abs().max(wm_tr.abs()),
    }
}

/// Relative Frobenius distance between two rank-3 tensors.
pub fn rel_defect3(a: &[[[f64; 6]; 6]; 6], b: &[[[f64; 6]; 6]; 6]) -> f64 {
    let mut diff = [[[0.0; 6]; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                diff[i][j][k] = a[i][j][k] - b[i][j][k];
            }
        }
    }
    frobenius3(&diff) / (1.0 + frobenius3(a).max(frobenius3(b)))
}

/// Closed-form vs differentiation-oracle defects at one `(x, σ, f, t)`.
#[derive(Clone, Copy, Debug)]
pub struct OracleDefects {
    /// Relative defect between the closed covariant-derivative tensor and
    /// the Christoffel-based oracle.
    pub cov_deriv_rel: f64,
    /// Relative defect between the closed Nijenhuis tensor and the
    /// bracket-based oracle.
    pub nijenhuis_rel: f64,
    /// Largest entry of the oracle tensor in the blocks that the closed
    /// form proves to vanish (two or more vertical form slots).
    pub zero_blocks: f64,
}

pub fn oracle_defects<C: MetricChart>(
    chart: &C,
    x: &[f64; 4],
    sigma: &SDual,
    fmap: &FiberMap,
    t: f64,
) -> Result<OracleDefects, Error> {
    let core = assemble(chart, x, sigma, fmap)?;
    let closed_t = cov_deriv_closed(&core, t);
    let closed_n = nijenhuis_closed(&core, t);
    let tw = crate::twistor::TwistorChart::new(chart, *x, *sigma)?;
    let basis = tw.anchor_basis(t)?;
    let oracle_t = crate::linalg::contract3(&tw.d_omega_oracle(fmap, t)?, &basis);
    let oracle_n = crate::linalg::contract3(&tw.nijenhuis_oracle(fmap, t)?, &basis);

    let mut zero = 0.0_f64;
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                let vertical_slots =
                    (if a >= 4 { 1 } else { 0 }) + (if b >= 4 { 1 } else { 0 }) + (if c >= 4 { 1 } else { 0 });
                let in_zero_block = if a < 4 {
                    b >= 4 && c >= 4
                } else {
                    vertical_slots >= 2
                };
                if in_zero_block {
                    zero = zero.max(oracle_t[a][b][c].abs());
                }
            }
        }
    }
    Ok(OracleDefects {
        cov_deriv_rel: rel_defect3(&closed_t, &oracle_t),
        nijenhuis_rel: rel_defect3(&closed_n, &oracle_n),
        zero_blocks: zero,
    })
}
