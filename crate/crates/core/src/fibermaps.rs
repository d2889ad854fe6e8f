//! Fibre-wise sphere maps and their differentials.
//!
//! A fibre map assigns to each unit self-dual form σ another unit self-dual
//! form `f(σ)`, smoothly in the base point. The built-in family:
//!
//! * `Identity`: `f(σ) = σ`;
//! * `Antipodal`: `f(σ) = -σ`;
//! * `ConstOmega`: `f(σ) = ω`, the Kähler form of the chart's complex
//!   structure;
//! * `Lambda { λ = a + ib, ± }`: the Möbius transformation `ζ ↦ λζ` read
//!   through stereographic charts centred on `ω`. The `+` family conjugates
//!   by the same chart on both sides (degree `+1`, holomorphic on fibres);
//!   the `-` family projects from opposite poles (degree `-1`,
//!   anti-holomorphic on fibres). `λ = 1, +` is the identity and
//!   `λ = -1, -` is the antipodal map.
//!
//! All evaluation is generic over [`Scalar`] so fibre maps can sit inside
//! automatically differentiated twistor computations.

use crate::bivector::{ADual, SDual, PAIRS};
use crate::chart::MetricChart;
use crate::error::Error;
use crate::frame::Frame4;
use crate::scalar::{seed, Dual, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapSign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FiberMap {
    Identity,
    Antipodal,
    ConstOmega,
    Lambda { re: f64, im: f64, sign: MapSign },
}

impl FiberMap {
    /// Whether evaluating this map requires the chart's Kähler form.
    pub fn needs_omega(&self) -> bool {
        matches!(self, FiberMap::ConstOmega | FiberMap::Lambda { .. })
    }

    /// Evaluate the map on a unit self-dual form. `omega` must be supplied
    /// (and unit) for the maps that depend on it.
    pub fn apply<S: Scalar>(
        &self,
        sigma: &SDual<S>,
        omega: Option<&SDual<S>>,
    ) -> Result<SDual<S>, Error> {
        match self {
            FiberMap::Identity => Ok(*sigma),
            FiberMap::Antipodal => Ok(sigma.neg()),
            FiberMap::ConstOmega => omega.copied().ok_or(Error::MissingComplexStructure),
            FiberMap::Lambda { re, im, sign } => {
                let omega = omega.ok_or(Error::MissingComplexStructure)?;
                let a = *re;
                let b = *im;
                let big_a = a * a + b * b;
                if big_a == 0.0 {
                    // λ = 0 collapses the fibre to a pole of the chart.
                    return Ok(match sign {
                        MapSign::Plus => omega.neg(),
                        MapSign::Minus => *omega,
                    });
                }
                let q = sigma.dot(omega);
                // Common denominator (A + 1) + (A - 1) q; positive for all
                // q in [-1, 1] since A > 0.
                let denom = q.scale(big_a - 1.0) + S::from_f64(big_a + 1.0);
                let omega_coeff = {
                    let swing = q.scale(big_a + 1.0) + S::from_f64(big_a - 1.0);
                    let signed = match sign {
                        MapSign::Plus => swing,
                        MapSign::Minus => swing.neg(),
                    };
                    signed - q.scale(2.0 * a)
                };
                let mut out = sigma.scale(S::from_f64(2.0 * a));
                out = out.sub(&sigma.cross(omega).scale(S::from_f64(2.0 * b)));
                out = out.add(&omega.scale(omega_coeff));
                Ok(out.scale(S::one() / denom))
            }
        }
    }

    /// Parse the command-line form: `id`, `antipodal`, `omega`,
    /// `lambda:+:<re>,<im>` or `lambda:-:<re>,<im>`.
    pub fn parse(text: &str) -> Result<FiberMap, Error> {
        let t = text.trim();
        match t {
            "id" => return Ok(FiberMap::Identity),
            "antipodal" => return Ok(FiberMap::Antipodal),
            "omega" => return Ok(FiberMap::ConstOmega),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix("lambda:") {
            let (sign, nums) = if let Some(r) = rest.strip_prefix("+:") {
                (MapSign::Plus, r)
            } else if let Some(r) = rest.strip_prefix("-:") {
                (MapSign::Minus, r)
            } else {
                return Err(Error::UnknownFiberMap(text.to_string()));
            };
            let mut parts = nums.split(',');
            let re = parts
                .next()
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::UnknownFiberMap(text.to_string()))?;
            let im = parts
                .next()
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::UnknownFiberMap(text.to_string()))?;
            if parts.next().is_some() {
                return Err(Error::UnknownFiberMap(text.to_string()));
            }
            return Ok(FiberMap::Lambda { re, im, sign });
        }
        Err(Error::UnknownFiberMap(text.to_string()))
    }

    /// Canonical label, matching the format accepted by [`FiberMap::parse`].
    pub fn label(&self) -> String {
        match self {
            FiberMap::Identity => "id".to_string(),
            FiberMap::Antipodal => "antipodal".to_string(),
            FiberMap::ConstOmega => "omega".to_string(),
            FiberMap::Lambda { re, im, sign } => {
                let s = match sign {
                    MapSign::Plus => '+',
                    MapSign::Minus => '-',
                };
                format!("lambda:{s}:{re},{im}")
            }
        }
    }
}

/// Stereographic chart centred opposite ω: `Φ(τ) = (τ - ⟨τ,ω⟩ω)/(1 - ⟨τ,ω⟩)`,
/// mapping the fibre minus `{ω}` onto the plane `ω^⊥`.
pub fn stereo_phi<S: Scalar>(tau: &SDual<S>, omega: &SDual<S>) -> SDual<S> {
    let q = tau.dot(omega);
    tau.sub(&omega.scale(q)).scale(S::one() / (S::one() - q))
}

pub fn stereo_phi_inv<S: Scalar>(zeta: &SDual<S>, omega: &SDual<S>) -> SDual<S> {
    let n2 = zeta.dot(zeta);
    zeta.scale(S::from_f64(2.0))
        .add(&omega.scale(n2 - S::one()))
        .scale(S::one() / (n2 + S::one()))
}

/// Stereographic chart centred on ω: `Ψ(τ) = (τ - ⟨τ,ω⟩ω)/(1 + ⟨τ,ω⟩)`,
/// mapping the fibre minus `{-ω}` onto `ω^⊥`.
pub fn stereo_psi<S: Scalar>(tau: &SDual<S>, omega: &SDual<S>) -> SDual<S> {
    let q = tau.dot(omega);
    tau.sub(&omega.scale(q)).scale(S::one() / (S::one() + q))
}

pub fn stereo_psi_inv<S: Scalar>(zeta: &SDual<S>, omega: &SDual<S>) -> SDual<S> {
    let n2 = zeta.dot(zeta);
    zeta.scale(S::from_f64(2.0))
        .add(&omega.scale(S::one() - n2))
        .scale(S::one() / (n2 + S::one()))
}

/// Complex multiplication by `λ = a + ib` on the plane `ω^⊥`, oriented by ω:
/// `λ · ζ = aζ + b (ω × ζ)`.
pub fn lambda_rotate<S: Scalar>(zeta: &SDual<S>, omega: &SDual<S>, re: f64, im: f64) -> SDual<S> {
    zeta.scale(S::from_f64(re))
        .add(&omega.cross(zeta).scale(S::from_f64(im)))
}

/// The Kähler form of a chart endomorphism, in the bivector components of
/// the given frame: returns the self-dual and anti-self-dual parts of the
/// 2-form `ω(X, Y) = g(JX, Y)`. For a compatible, correctly oriented `J` the
/// self-dual part is unit and the anti-self-dual part vanishes.
pub fn omega_in_frame<S: Scalar>(
    g: &[[S; 4]; 4],
    frame: &Frame4<S>,
    j: &[[S; 4]; 4],
) -> (SDual<S>, ADual<S>) {
    let jf = frame.endo_to_frame(g, j);
    let mut comps = [S::zero(); 6];
    for (k, &(i, jdx)) in PAIRS.iter().enumerate() {
        comps[k] = jf[jdx][i];
    }
    crate::bivector::Biv(comps).hodge_split()
}

/// Kähler form of the chart at `x` (self-dual part), or `None` when the
/// chart carries no complex structure.
pub fn omega_at<S: Scalar, C: MetricChart>(
    chart: &C,
    x: &[S; 4],
) -> Result<Option<SDual<S>>, Error> {
    let Some(j) = chart.complex_structure(x) else {
        return Ok(None);
    };
    let g = chart.metric(x);
    let frame = Frame4::gram_schmidt(&g)?;
    Ok(Some(omega_in_frame(&g, &frame, &j).0))
}

/// Derivative of the fibre map along the fibre: `d/dt f(σ_t)|_0` with
/// `σ_t = (σ + t v)/|σ + t v|`, for `v` tangent to the fibre at σ.
pub fn fiber_differential(
    fmap: &FiberMap,
    sigma: &SDual,
    v: &SDual,
    omega: Option<&SDual>,
) -> Result<SDual, Error> {
    if v.dot(sigma).abs() > 1e-8 * (1.0 + v.norm()) {
        return Err(Error::NotTangentToFibre);
    }
    let sd: SDual<Dual<f64>> = SDual(std::array::from_fn(|k| Dual::new(sigma.0[k], v.0[k])));
    let sd = sd.normalized();
    let od: Option<SDual<Dual<f64>>> =
        omega.map(|w| SDual(std::array::from_fn(|k| Dual::constant(w.0[k]))));
    let out = fmap.apply(&sd, od.as_ref())?;
    Ok(SDual(std::array::from_fn(|k| out.0[k].d)))
}

/// Vertical part of the differential of the full twistor-space map induced
/// by `fmap`, applied to the horizontal lift of the chart vector `x_dir` at
/// `(x, σ)`.
///
/// Computed from the section picture: transport σ as a section with constant
/// components in the moving self-dual basis, push it through the fibre map,
/// take the covariant derivative of the image section, and subtract the
/// fibre-differential of the transported input.
pub fn pushforward_horizontal<C: MetricChart>(
    chart: &C,
    x: &[f64; 4],
    sigma: &SDual,
    fmap: &FiberMap,
    x_dir: &[f64; 4],
) -> Result<SDual, Error> {
    // Connection matrices G[α][i][k] = g(∇_α s_i, s_k) and their contraction
    // along the direction.
    let conn = crate::twistor::sd_connection(chart, x)?;
    let mut g_x = [[0.0_f64; 3]; 3];
    for al in 0..4 {
        for i in 0..3 {
            for k in 0..3 {
                g_x[i][k] += x_dir[al] * conn[al][i][k];
            }
        }
    }
    // ∇_X s for the constant-component section through σ.
    let nab_s = SDual(std::array::from_fn(|k| {
        (0..3).map(|i| sigma.0[i] * g_x[i][k]).sum()
    }));

    // φ(x) = components of f(s(x)) in the moving basis, differentiated
    // along the direction.
    let z = seed::<f64, 4>(x, x_dir);
    let sig_d: SDual<Dual<f64>> = SDual(std::array::from_fn(|k| Dual::constant(sigma.0[k])));
    let omega_d: Option<SDual<Dual<f64>>> = if fmap.needs_omega() {
        match omega_at(chart, &z)? {
            Some(w) => Some(w),
            None => return Err(Error::MissingComplexStructure),
        }
    } else {
        None
    };
    let phi_d = fmap.apply(&sig_d, omega_d.as_ref())?;
    let phi0 = SDual(std::array::from_fn(|k| phi_d.0[k].v));
    let dphi = SDual(std::array::from_fn(|k| phi_d.0[k].d));

    // Covariant derivative of the image section: X(φ_k) + Σ_i φ_i G^X_{ik}.
    let cov_img = SDual(std::array::from_fn(|k| {
        dphi.0[k] + (0..3).map(|i| phi0.0[i] * g_x[i][k]).sum::<f64>()
    }));

    // Fibre differential of f along the motion of the input section.
    let omega0 = if fmap.needs_omega() {
        Some(
            omega_at::<f64, C>(chart, x)?
                .ok_or(Error::MissingComplexStructure)?,
        )
    } else {
        None
    };
    let fd = fiber_differential(fmap, sigma, &nab_s, omega0.as_ref())?;
    Ok(cov_img.sub(&fd))
}

/// Covariant derivative `∇_X ω` of the chart's unit fundamental form along
/// the chart direction `x_dir`, in components of the moving self-dual basis.
pub fn omega_cov_deriv<C: MetricChart>(
    chart: &C,
    x: &[f64; 4],
    x_dir: &[f64; 4],
) -> Result<SDual, Error> {
    let z = seed::<f64, 4>(x, x_dir);
    let wd = omega_at(chart, &z)?.ok_or(Error::MissingComplexStructure)?;
    let w0 = SDual(std::array::from_fn(|k| wd.0[k].v));
    let dw = SDual(std::array::from_fn(|k| wd.0[k].d));
    let conn = crate::twistor::sd_connection(chart, x)?;
    Ok(SDual(std::array::from_fn(|k| {
        let transport: f64 = (0..3)
            .map(|i| {
                w0.0[i] * (0..4).map(|al| x_dir[al] * conn[al][i][k]).sum::<f64>()
            })
            .sum();
        dw.0[k] + transport
    })))
}

/// Closed-form vertical pushforward of a horizontal lift through a unit
/// `λ`-dilation (`|λ| = 1`, `λ = a + bi`):
///
/// `𝒱(f_λ^±)_*(X^h) = −b σ×∇_Xω + (±1 − a) [ g(σ,∇_Xω) ω + g(σ,ω) ∇_Xω ]`.
///
/// Only valid on the unit circle; rejected otherwise.
pub fn unit_lambda_pushforward<C: MetricChart>(
    chart: &C,
    x: &[f64; 4],
    sigma: &SDual,
    re: f64,
    im: f64,
    sign: MapSign,
    x_dir: &[f64; 4],
) -> Result<SDual, Error> {
    if (re * re + im * im - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "closed-form pushforward needs |lambda| = 1, got |lambda|^2 = {}",
            re * re + im * im
        )));
    }
    let omega = omega_at::<f64, C>(chart, x)?.ok_or(Error::MissingComplexStructure)?;
    let nab = omega_cov_deriv(chart, x, x_dir)?;
    let s = match sign {
        MapSign::Plus => 1.0,
        MapSign::Minus => -1.0,
    };
    let first = sigma.cross(&nab).scale(-im);
    let second = omega
        .scale(sigma.dot(&nab))
        .add(&nab.scale(sigma.dot(&omega)))
        .scale(s - re);
    Ok(first.add(&second))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega() -> SDual {
        SDual([0.0, 0.0, 1.0])
    }

    #[test]
    fn parse_round_trips() {
        for text in ["id", "antipodal", "omega", "lambda:+:2,1", "lambda:-:0.6,0.8"] {
            let m = FiberMap::parse(text).unwrap();
            assert_eq!(m.label(), text);
            assert_eq!(FiberMap::parse(&m.label()).unwrap(), m);
        }
        assert!(FiberMap::parse("lambda:*:1,0").is_err());
        assert!(FiberMap::parse("lambda:+:1").is_err());
        assert!(FiberMap::parse("mystery").is_err());
    }

    #[test]
    fn unit_lambda_plus_is_identity() {
        let m = FiberMap::Lambda { re: 1.0, im: 0.0, sign: MapSign::Plus };
        let w = omega();
        for sigma in crate::sample::fiber_points(6, 5) {
            let out = m.apply(&sigma, Some(&w)).unwrap();
            assert!(out.approx_eq(&sigma, 1e-14), "{sigma:?} -> {out:?}");
        }
    }

    #[test]
    fn minus_one_lambda_minus_is_antipodal() {
        let m = FiberMap::Lambda { re: -1.0, im: 0.0, sign: MapSign::Minus };
        let w = omega();
        for sigma in crate::sample::fiber_points(6, 5) {
            let out = m.apply(&sigma, Some(&w)).unwrap();
            assert!(out.approx_eq(&sigma.neg(), 1e-14), "{sigma:?} -> {out:?}");
        }
    }

    #[test]
    fn zero_lambda_collapses_to_signed_omega() {
        let w = omega();
        let plus = FiberMap::Lambda { re: 0.0, im: 0.0, sign: MapSign::Plus };
        let minus = FiberMap::Lambda { re: 0.0, im: 0.0, sign: MapSign::Minus };
        let sigma = SDual([0.6, 0.8, 0.0]);
        assert!(plus.apply(&sigma, Some(&w)).unwrap().approx_eq(&w.neg(), 0.0));
        assert!(minus.apply(&sigma, Some(&w)).unwrap().approx_eq(&w, 0.0));
    }

    #[test]
    fn lambda_maps_preserve_the_unit_sphere() {
        let w = SDual([0.48, -0.6, 0.64]).normalized();
        for (re, im, sign) in [
            (2.0, 1.0, MapSign::Plus),
            (2.0, 1.0, MapSign::Minus),
            (0.6, 0.8, MapSign::Plus),
            (-0.3, 0.4, MapSign::Minus),
        ] {
            let m = FiberMap::Lambda { re, im, sign };
            for sigma in crate::sample::fiber_points(10, 2) {
                let out = m.apply(&sigma, Some(&w)).unwrap();
                assert!(
                    (out.norm() - 1.0).abs() < 1e-12,
                    "|f(σ)| = {} for λ=({re},{im}) {sign:?}",
                    out.norm()
                );
            }
        }
    }

    #[test]
    fn explicit_formula_matches_stereographic_composition() {
        let w = SDual([0.2, -0.4, 0.6]).normalized();
        for (re, im) in [(2.0, 1.0), (0.6, 0.8), (-1.3, 0.25)] {
            for sigma in crate::sample::fiber_points(10, 9) {
                if (sigma.dot(&w) - 1.0).abs() < 1e-6 || (sigma.dot(&w) + 1.0).abs() < 1e-6 {
                    continue; // stereographic poles
                }
                // Degree +1: same chart on both sides.
                let plus = FiberMap::Lambda { re, im, sign: MapSign::Plus }
                    .apply(&sigma, Some(&w))
                    .unwrap();
                let via_phi =
                    stereo_phi_inv(&lambda_rotate(&stereo_phi(&sigma, &w), &w, re, im), &w);
                assert!(plus.approx_eq(&via_phi, 1e-12), "plus map at {sigma:?}");
                // Degree -1: project from one pole, return through the other.
                let minus = FiberMap::Lambda { re, im, sign: MapSign::Minus }
                    .apply(&sigma, Some(&w))
                    .unwrap();
                let via_mixed =
                    stereo_psi_inv(&lambda_rotate(&stereo_phi(&sigma, &w), &w, re, im), &w);
                assert!(minus.approx_eq(&via_mixed, 1e-12), "minus map at {sigma:?}");
            }
        }
    }

    #[test]
    fn stereographic_charts_round_trip() {
        let w = SDual([0.0, 0.6, 0.8]).normalized();
        for sigma in crate::sample::fiber_points(12, 4) {
            let q = sigma.dot(&w);
            if (q - 1.0).abs() > 1e-6 {
                let back = stereo_phi_inv(&stereo_phi(&sigma, &w), &w);
                assert!(back.approx_eq(&sigma, 1e-11));
            }
            if (q + 1.0).abs() > 1e-6 {
                let back = stereo_psi_inv(&stereo_psi(&sigma, &w), &w);
                assert!(back.approx_eq(&sigma, 1e-11));
            }
        }
        // The two charts are related by inversion: |Φ| · |Ψ| = 1.
        let sigma = SDual([0.3, -0.7, 0.1]).normalized();
        let p = stereo_phi(&sigma, &w).norm();
        let q = stereo_psi(&sigma, &w).norm();
        assert!((p * q - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fiber_differential_rejects_non_tangent_directions() {
        let sigma = SDual([1.0, 0.0, 0.0]);
        let err = fiber_differential(&FiberMap::Identity, &sigma, &sigma, None);
        assert!(matches!(err, Err(Error::NotTangentToFibre)));
    }

    #[test]
    fn fiber_differential_of_identity_is_identity() {
        let sigma = SDual([0.6, -0.48, 0.64]).normalized();
        for v in crate::sample::fiber_tangents(&sigma, 4, 8) {
            let d = fiber_differential(&FiberMap::Identity, &sigma, &v, None).unwrap();
            assert!(d.approx_eq(&v, 1e-12));
        }
    }

    #[test]
    fn fiber_differential_at_omega_matches_closed_form() {
        // At σ = ω, the degree -1 map scales tangents by conjugation:
        // direction s1 goes to (2a s1 + 2b s2) / (2(a² + b²)) when ω = s3.
        let w = omega();
        let (a, b) = (2.0_f64, 1.0_f64);
        let m = FiberMap::Lambda { re: a, im: b, sign: MapSign::Minus };
        let v = SDual([1.0, 0.0, 0.0]);
        let d = fiber_differential(&m, &w, &v, Some(&w)).unwrap();
        let big_a = a * a + b * b;
        let expect = SDual([2.0 * a, 2.0 * b, 0.0]).scale(1.0 / (2.0 * big_a));
        assert!(d.approx_eq(&expect, 1e-12), "got {d:?}, want {expect:?}");
    }

    #[test]
    fn plus_maps_commute_with_fibre_rotation_minus_maps_anticommute() {
        // Holomorphy dichotomy: f⁺_* (σ × V) = f(σ) × f⁺_* V, while the
        // degree -1 family reverses the sign.
        let w = SDual([0.1, 0.55, -0.8]).normalized();
        for (sign, expect_sign) in [(MapSign::Plus, 1.0), (MapSign::Minus, -1.0)] {
            let m = FiberMap::Lambda { re: 1.7, im: -0.4, sign };
            for sigma in crate::sample::fiber_points(6, 21) {
                let fs = m.apply(&sigma, Some(&w)).unwrap();
                for v in crate::sample::fiber_tangents(&sigma, 2, 17) {
                    let lhs =
                        fiber_differential(&m, &sigma, &sigma.cross(&v), Some(&w)).unwrap();
                    let rhs = fs
                        .cross(&fiber_differential(&m, &sigma, &v, Some(&w)).unwrap())
                        .scale(expect_sign);
                    assert!(
                        lhs.approx_eq(&rhs, 1e-10),
                        "{sign:?} at σ={sigma:?}: {lhs:?} vs {rhs:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn omega_of_constant_j_is_s1() {
        let chart = crate::catalog::CatalogMetric::Flat;
        let w = omega_at::<f64, _>(&chart, &[0.1, 0.2, 0.3, 0.4])
            .unwrap()
            .unwrap();
        assert!(w.approx_eq(&SDual([1.0, 0.0, 0.0]), 1e-14));
    }

    #[test]
    fn omega_is_unit_self_dual_across_catalog() {
        for entry in crate::catalog::all_default() {
            let x = [0.15, -0.2, 0.31, 0.12];
            let g = entry.metric.metric(&x);
            let frame = Frame4::gram_schmidt(&g).unwrap();
            let j = entry.metric.complex_structure(&x).unwrap();
            let (sd, asd) = omega_in_frame(&g, &frame, &j);
            assert!((sd.norm() - 1.0).abs() < 1e-10, "{}", entry.name);
            assert!(asd.norm() < 1e-10, "{}: ASD residue {}", entry.name, asd.norm());
        }
    }

    #[test]
    fn lift_helper_promotes_constants() {
        let v: [Dual<f64>; 4] = crate::scalar::lift(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(v[2].v, 3.0);
        assert_eq!(v[2].d, 0.0);
    }
}
