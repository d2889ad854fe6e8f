//! Built-in metric charts with known geometry.
//!
//! Every entry evaluates on an approximately unit coordinate box around the
//! origin and carries a compatible almost complex structure, so each can be
//! fed to the whole pipeline. `expected` records the entry's classical
//! curvature properties; the test suite re-derives them numerically from the
//! curvature operator rather than trusting the table.

use crate::bivector::SDual;
use crate::chart::MetricChart;
use crate::error::Error;
use crate::frame::Frame4;
use crate::scalar::Scalar;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Constant complex structure rotating `∂1 → ∂2` and `∂3 → ∂4`.
const J0: [[f64; 4]; 4] = [
    [0.0, -1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
];

fn j0<S: Scalar>() -> [[S; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| S::from_f64(J0[i][j])))
}

/// Classical curvature properties of a catalog metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpectedFlags {
    pub einstein: bool,
    pub self_dual: bool,
    pub anti_self_dual: bool,
    pub scalar_flat: bool,
    pub kahler: bool,
    pub hermitian: bool,
}

/// A metric chart from the built-in catalog.
#[derive(Clone, Debug)]
pub enum CatalogMetric {
    /// Euclidean metric, constant `J0`.
    Flat,
    /// Round 4-sphere of the given radius in stereographic projection.
    RoundSphere { radius: f64 },
    /// Conformally flat metric `e^{2u} δ` with a localized bump
    /// `u = amp / (1 + |x|²/4)`.
    ConformalFlat { amp: f64 },
    /// Product of a 2-sphere of curvature `c` and a hyperbolic plane of
    /// curvature `-c`: scalar-flat Kähler, conformally flat, not Einstein.
    S2xH2 { c: f64 },
    /// Product of two round 2-spheres with curvatures `c1`, `c2`.
    S2xS2 { c1: f64, c2: f64 },
    /// Complex projective plane in a holomorphic chart, Kähler potential
    /// `ln(1 + |z|²)`.
    FubiniStudy,
    /// Random polynomial perturbation of the flat metric, degree two in the
    /// coordinates, with `J` taken from the Gram-Schmidt frame. With
    /// `eps = 0` the evaluation is bit-identical to `Flat`.
    PerturbedFlat { seed: u64, eps: f64, coeffs: Box<PerturbCoeffs> },
}

/// Symmetric polynomial coefficients for `PerturbedFlat`, normalized so each
/// matrix entry stays within [-1, 1] on the sample box.
#[derive(Clone, Debug)]
pub struct PerturbCoeffs {
    pub c0: [[f64; 4]; 4],
    pub c1: [[[f64; 4]; 4]; 4],
    pub c2: [[[[f64; 4]; 4]; 4]; 4],
}

impl PerturbCoeffs {
    fn generate(seed: u64) -> Box<PerturbCoeffs> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c0 = [[0.0_f64; 4]; 4];
        let mut c1 = [[[0.0_f64; 4]; 4]; 4];
        let mut c2 = [[[[0.0_f64; 4]; 4]; 4]; 4];
        for a in 0..4 {
            for b in a..4 {
                let v = rng.gen_range(-1.0..1.0);
                c0[a][b] = v;
                c0[b][a] = v;
                for c in 0..4 {
                    let v = rng.gen_range(-1.0..1.0);
                    c1[a][b][c] = v;
                    c1[b][a][c] = v;
                }
                for c in 0..4 {
                    for d in c..4 {
                        let v = rng.gen_range(-1.0..1.0);
                        c2[a][b][c][d] = v;
                        c2[b][a][c][d] = v;
                        c2[a][b][d][c] = v;
                        c2[b][a][d][c] = v;
                    }
                }
            }
        }
        // Normalize so |h_ab(x)| <= 1 when |x_c| <= 0.8.
        let l = 0.8;
        let mut bound = 0.0_f64;
        for a in 0..4 {
            for b in 0..4 {
                let mut s = c0[a][b].abs();
                for c in 0..4 {
                    s += c1[a][b][c].abs() * l;
                }
                for c in 0..4 {
                    for d in 0..4 {
                        s += c2[a][b][c][d].abs() * l * l;
                    }
                }
                bound = bound.max(s);
            }
        }
        let inv = 1.0 / bound;
        for a in 0..4 {
            for b in 0..4 {
                c0[a][b] *= inv;
                for c in 0..4 {
                    c1[a][b][c] *= inv;
                    for d in 0..4 {
                        c2[a][b][c][d] *= inv;
                    }
                }
            }
        }
        Box::new(PerturbCoeffs { c0, c1, c2 })
    }

    fn eval<S: Scalar>(&self, a: usize, b: usize, x: &[S; 4]) -> S {
        let mut acc = S::from_f64(self.c0[a][b]);
        for c in 0..4 {
            acc = acc + x[c].scale(self.c1[a][b][c]);
        }
        for c in 0..4 {
            for d in 0..4 {
                acc = acc + (x[c] * x[d]).scale(self.c2[a][b][c][d]);
            }
        }
        acc
    }
}

impl MetricChart for CatalogMetric {
    fn metric<S: Scalar>(&self, x: &[S; 4]) -> [[S; 4]; 4] {
        match self {
            CatalogMetric::Flat => crate::linalg::identity(),
            CatalogMetric::RoundSphere { radius } => {
                let norm2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
                let f = S::one() + norm2.scale(1.0 / (4.0 * radius * radius));
                let lam2 = (S::one() / f).powi(2);
                conformal(lam2)
            }
            CatalogMetric::ConformalFlat { amp } => {
                let norm2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
                let u = S::from_f64(*amp) / (S::one() + norm2.scale(0.25));
                let lam2 = (u.scale(2.0)).exp();
                conformal(lam2)
            }
            CatalogMetric::S2xH2 { c } => {
                let r2p = x[0] * x[0] + x[1] * x[1];
                let r2m = x[2] * x[2] + x[3] * x[3];
                let lp = S::one() + r2p.scale(c / 4.0);
                let lm = S::one() - r2m.scale(c / 4.0);
                product_surfaces((S::one() / lp).powi(2), (S::one() / lm).powi(2))
            }
            CatalogMetric::S2xS2 { c1, c2 } => {
                let r2p = x[0] * x[0] + x[1] * x[1];
                let r2m = x[2] * x[2] + x[3] * x[3];
                let lp = S::one() + r2p.scale(c1 / 4.0);
                let lm = S::one() + r2m.scale(c2 / 4.0);
                product_surfaces((S::one() / lp).powi(2), (S::one() / lm).powi(2))
            }
            CatalogMetric::FubiniStudy => fubini_study_metric(x),
            CatalogMetric::PerturbedFlat { eps, coeffs, .. } => {
                let mut g: [[S; 4]; 4] = crate::linalg::identity();
                for a in 0..4 {
                    for b in 0..4 {
                        g[a][b] = g[a][b] + coeffs.eval(a, b, x).scale(*eps);
                    }
                }
                g
            }
        }
    }

    fn complex_structure<S: Scalar>(&self, x: &[S; 4]) -> Option<[[S; 4]; 4]> {
        match self {
            CatalogMetric::PerturbedFlat { .. } => {
                // K of the first self-dual basis form of the Gram-Schmidt
                // frame, conjugated back to chart components. Smooth in x and
                // compatible with the metric by construction.
                let g = self.metric(x);
                let frame = Frame4::gram_schmidt(&g).ok()?;
                let k = SDual::<S>::axis(0).k_endo();
                let mut j = [[S::zero(); 4]; 4];
                for col in 0..4 {
                    let mut unit = [S::zero(); 4];
                    unit[col] = S::one();
                    let c = frame.to_frame(&g, &unit);
                    let kc: [S; 4] = std::array::from_fn(|i| {
                        let mut acc = S::zero();
                        for m in 0..4 {
                            acc = acc + k[i][m] * c[m];
                        }
                        acc
                    });
                    let chart_vec = frame.from_frame(&kc);
                    for (row, jr) in j.iter_mut().enumerate() {
                        jr[col] = chart_vec[row];
                    }
                }
                Some(j)
            }
            _ => Some(j0()),
        }
    }

    fn name(&self) -> String {
        match self {
            CatalogMetric::Flat => "flat".to_string(),
            CatalogMetric::RoundSphere { .. } => "round_sphere".to_string(),
            CatalogMetric::ConformalFlat { .. } => "conformal_flat".to_string(),
            CatalogMetric::S2xH2 { .. } => "s2xh2".to_string(),
            CatalogMetric::S2xS2 { .. } => "s2xs2".to_string(),
            CatalogMetric::FubiniStudy => "fubini_study".to_string(),
            CatalogMetric::PerturbedFlat { .. } => "perturbed_flat".to_string(),
        }
    }
}

fn conformal<S: Scalar>(lam2: S) -> [[S; 4]; 4] {
    let mut g = [[S::zero(); 4]; 4];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = lam2;
    }
    g
}

fn product_surfaces<S: Scalar>(lam2p: S, lam2m: S) -> [[S; 4]; 4] {
    let mut g = [[S::zero(); 4]; 4];
    g[0][0] = lam2p;
    g[1][1] = lam2p;
    g[2][2] = lam2m;
    g[3][3] = lam2m;
    g
}

/// Fubini-Study metric in the affine chart `z = (x1 + i x2, x3 + i x4)`,
/// normalized to the identity at the origin. Real and imaginary parts of the
/// complex Hessian of `ln(1 + |z|²)` fill the symmetric 4x4 matrix.
fn fubini_study_metric<S: Scalar>(x: &[S; 4]) -> [[S; 4]; 4] {
    let a = [x[0], x[2]];
    let b = [x[1], x[3]];
    let rho = S::one() + x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    let inv = S::one() / rho;
    let inv2 = inv * inv;
    let mut g = [[S::zero(); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            let delta = if i == j { S::one() } else { S::zero() };
            let re = delta * inv - (a[i] * a[j] + b[i] * b[j]) * inv2;
            let im = -(a[i] * b[j] - b[i] * a[j]) * inv2;
            g[2 * i][2 * j] = re;
            g[2 * i + 1][2 * j + 1] = re;
            g[2 * i][2 * j + 1] = im;
            g[2 * i + 1][2 * j] = -im;
        }
    }
    g
}

/// One catalog entry: the chart plus its classical properties.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub metric: CatalogMetric,
    pub expected: ExpectedFlags,
}

fn get_f64(params: &serde_json::Value, key: &str, default: f64) -> Result<f64, Error> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_f64()
            .ok_or_else(|| Error::InvalidParameter(format!("'{key}' must be a number"))),
    }
}

fn get_u64(params: &serde_json::Value, key: &str, default: u64) -> Result<u64, Error> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_u64()
            .ok_or_else(|| Error::InvalidParameter(format!("'{key}' must be a non-negative integer"))),
    }
}

fn check_keys(params: &serde_json::Value, allowed: &[&str]) -> Result<(), Error> {
    match params {
        serde_json::Value::Null => Ok(()),
        serde_json::Value::Object(map) => {
            for key in map.keys() {
                if !allowed.contains(&key.as_str()) {
                    return Err(Error::InvalidParameter(format!(
                        "unknown parameter '{key}' (allowed: {})",
                        allowed.join(", ")
                    )));
                }
            }
            Ok(())
        }
        _ => Err(Error::InvalidParameter(
            "parameters must be a JSON object".to_string(),
        )),
    }
}

/// Build a catalog entry by name, applying defaults for missing parameters.
pub fn build(name: &str, params: &serde_json::Value) -> Result<CatalogEntry, Error> {
    match name {
        "flat" => {
            check_keys(params, &[])?;
            Ok(CatalogEntry {
                name: "flat",
                summary: "Euclidean metric with a constant compatible complex structure",
                metric: CatalogMetric::Flat,
                expected: ExpectedFlags {
                    einstein: true,
                    self_dual: true,
                    anti_self_dual: true,
                    scalar_flat: true,
                    kahler: true,
                    hermitian: true,
                },
            })
        }
        "round_sphere" => {
            check_keys(params, &["radius"])?;
            let radius = get_f64(params, "radius", 1.0)?;
            if !(radius > 0.0) {
                return Err(Error::InvalidParameter("'radius' must be positive".into()));
            }
            Ok(CatalogEntry {
                name: "round_sphere",
                summary: "round 4-sphere (stereographic chart): Einstein, conformally flat",
                metric: CatalogMetric::RoundSphere { radius },
                expected: ExpectedFlags {
                    einstein: true,
                    self_dual: true,
                    anti_self_dual: true,
                    scalar_flat: false,
                    kahler: false,
                    hermitian: true,
                },
            })
        }
        "conformal_flat" => {
            check_keys(params, &["amp"])?;
            let amp = get_f64(params, "amp", 0.3)?;
            Ok(CatalogEntry {
                name: "conformal_flat",
                summary: "conformally flat bump metric: Weyl-flat, generically not Einstein",
                metric: CatalogMetric::ConformalFlat { amp },
                expected: ExpectedFlags {
                    einstein: false,
                    self_dual: true,
                    anti_self_dual: true,
                    scalar_flat: false,
                    kahler: false,
                    hermitian: true,
                },
            })
        }
        "s2xh2" => {
            check_keys(params, &["c"])?;
            let c = get_f64(params, "c", 1.0)?;
            if !(c > 0.0) {
                return Err(Error::InvalidParameter("'c' must be positive".into()));
            }
            Ok(CatalogEntry {
                name: "s2xh2",
                summary: "S²(c) × H²(-c): scalar-flat Kähler, conformally flat, not Einstein",
                metric: CatalogMetric::S2xH2 { c },
                expected: ExpectedFlags {
                    einstein: false,
                    self_dual: true,
                    anti_self_dual: true,
                    scalar_flat: true,
                    kahler: true,
                    hermitian: true,
                },
            })
        }
        "s2xs2" => {
            check_keys(params, &["c1", "c2"])?;
            let c1 = get_f64(params, "c1", 1.0)?;
            let c2 = get_f64(params, "c2", 1.0)?;
            if !(c1 > 0.0 && c2 > 0.0) {
                return Err(Error::InvalidParameter("'c1', 'c2' must be positive".into()));
            }
            Ok(CatalogEntry {
                name: "s2xs2",
                summary: "product of round 2-spheres: Kähler, Einstein iff c1 = c2",
                metric: CatalogMetric::S2xS2 { c1, c2 },
                expected: ExpectedFlags {
                    einstein: (c1 - c2).abs() < 1e-12,
                    self_dual: false,
                    anti_self_dual: false,
                    scalar_flat: false,
                    kahler: true,
                    hermitian: true,
                },
            })
        }
        "fubini_study" => {
            check_keys(params, &[])?;
            Ok(CatalogEntry {
                name: "fubini_study",
                summary: "complex projective plane: Kähler-Einstein, self-dual orientation",
                metric: CatalogMetric::FubiniStudy,
                expected: ExpectedFlags {
                    einstein: true,
                    self_dual: true,
                    anti_self_dual: false,
                    scalar_flat: false,
                    kahler: true,
                    hermitian: true,
                },
            })
        }
        "perturbed_flat" => {
            check_keys(params, &["seed", "eps"])?;
            let seed = get_u64(params, "seed", 7)?;
            let eps = get_f64(params, "eps", 0.02)?;
            if !(0.0..=0.1).contains(&eps) {
                return Err(Error::InvalidParameter(
                    "'eps' must lie in [0, 0.1] to keep the metric positive".into(),
                ));
            }
            Ok(CatalogEntry {
                name: "perturbed_flat",
                summary: "random degree-2 perturbation of the flat metric; fully generic curvature",
                metric: CatalogMetric::PerturbedFlat {
                    seed,
                    eps,
                    coeffs: PerturbCoeffs::generate(seed),
                },
                expected: ExpectedFlags {
                    einstein: false,
                    self_dual: false,
                    anti_self_dual: false,
                    scalar_flat: false,
                    kahler: false,
                    hermitian: false,
                },
            })
        }
        other => Err(Error::UnknownMetric(other.to_string())),
    }
}

/// All catalog entries with default parameters.
pub fn all_default() -> Vec<CatalogEntry> {
    NAMES
        .iter()
        .map(|n| build(n, &serde_json::Value::Null).expect("default catalog entry"))
        .collect()
}

pub const NAMES: [&str; 7] = [
    "flat",
    "round_sphere",
    "conformal_flat",
    "s2xh2",
    "s2xs2",
    "fubini_study",
    "perturbed_flat",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::check_compatible;

    #[test]
    fn all_entries_build_with_defaults() {
        assert_eq!(all_default().len(), 7);
    }

    #[test]
    fn unknown_metric_is_rejected() {
        assert!(matches!(
            build("klein_bottle", &serde_json::Value::Null),
            Err(Error::UnknownMetric(_))
        ));
    }

    #[test]
    fn unknown_parameter_is_rejected() {
        let params = serde_json::json!({"radius": 2.0, "twist": 1.0});
        assert!(matches!(
            build("round_sphere", &params),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn complex_structures_are_compatible_off_origin() {
        let x = [0.21, -0.34, 0.11, 0.4];
        for entry in all_default() {
            let g = entry.metric.metric(&x);
            let j = entry.metric.complex_structure(&x).unwrap();
            check_compatible(&g, &j, 1e-10)
                .unwrap_or_else(|e| panic!("{}: {e}", entry.name));
        }
    }

    #[test]
    fn perturbed_flat_with_zero_eps_is_bitwise_flat() {
        let entry = build("perturbed_flat", &serde_json::json!({"eps": 0.0})).unwrap();
        let flat = CatalogMetric::Flat;
        for x in [[0.0; 4], [0.3, -0.2, 0.5, 0.1], [0.59, 0.59, -0.59, 0.59]] {
            let a: [[f64; 4]; 4] = entry.metric.metric(&x);
            let b: [[f64; 4]; 4] = flat.metric(&x);
            assert_eq!(a, b, "metric must agree bit-for-bit at {x:?}");
        }
    }

    #[test]
    fn perturbed_flat_is_deterministic_in_the_seed() {
        let e1 = build("perturbed_flat", &serde_json::json!({"seed": 42})).unwrap();
        let e2 = build("perturbed_flat", &serde_json::json!({"seed": 42})).unwrap();
        let e3 = build("perturbed_flat", &serde_json::json!({"seed": 43})).unwrap();
        let x = [0.2, 0.1, -0.3, 0.45];
        let a: [[f64; 4]; 4] = e1.metric.metric(&x);
        let b: [[f64; 4]; 4] = e2.metric.metric(&x);
        let c: [[f64; 4]; 4] = e3.metric.metric(&x);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn perturbed_flat_stays_positive_definite_on_box() {
        let entry = build("perturbed_flat", &serde_json::json!({"eps": 0.1, "seed": 3})).unwrap();
        for x in [
            [0.6, 0.6, 0.6, 0.6],
            [-0.6, 0.6, -0.6, 0.6],
            [0.6, -0.6, -0.6, -0.6],
        ] {
            let g: [[f64; 4]; 4] = entry.metric.metric(&x);
            // All leading principal minors positive.
            for k in 1..=4 {
                let minor = leading_minor(&g, k);
                assert!(minor > 0.0, "minor {k} at {x:?} is {minor}");
            }
        }
    }

    fn leading_minor(g: &[[f64; 4]; 4], k: usize) -> f64 {
        match k {
            1 => g[0][0],
            2 => g[0][0] * g[1][1] - g[0][1] * g[1][0],
            3 => {
                let m = [
                    [g[0][0], g[0][1], g[0][2]],
                    [g[1][0], g[1][1], g[1][2]],
                    [g[2][0], g[2][1], g[2][2]],
                ];
                crate::linalg::det(&m)
            }
            _ => crate::linalg::det(g),
        }
    }

    #[test]
    fn fubini_study_is_identity_at_origin() {
        let g: [[f64; 4]; 4] = CatalogMetric::FubiniStudy.metric(&[0.0; 4]);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g[i][j] - want).abs() < 1e-15);
            }
        }
    }
}
