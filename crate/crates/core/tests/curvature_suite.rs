//! Curvature pipeline checks: the operator against an independent
//! finite-difference oracle, the constant-curvature closed form, the
//! block decomposition, and the catalog's advertised curvature flags.

use twistor_gh::catalog::{self, CatalogEntry};
use twistor_gh::curvature::{
    christoffels, curvature_operator, curvature_tensor, integrability_defect, kahler_defect,
};
use twistor_gh::fibermaps::omega_at;
use twistor_gh::linalg::{frobenius, sym_eigen3};
use twistor_gh::sample::base_points;
use twistor_gh::MetricChart;

/// Nested forward-mode derivatives are exact to rounding, so identities that
/// hold in exact arithmetic are checked at a small multiple of f64 epsilon
/// scaled by the operator norms involved.
const EXACT_TOL: f64 = 1e-10;
/// Central differences with step h = 1e-3 carry an O(h^2) truncation error;
/// curvature components here are O(1), so 1e-4 leaves two orders of margin
/// over the expected ~1e-6 defect without masking real sign errors.
const FD_TOL: f64 = 1e-4;
/// Relative tolerance for spectral data of the self-dual Weyl operator.
const SPECTRUM_TOL: f64 = 1e-6;
/// A curvature feature counts as genuinely absent only when its defect
/// clears this floor, far above the noise of the exact pipeline.
const ABSENT_FLOOR: f64 = 1e-6;

fn entry(name: &str) -> CatalogEntry {
    catalog::build(name, &serde_json::Value::Null).expect("default catalog entry")
}

fn probe_points(chart: &impl MetricChart, n: usize) -> Vec<[f64; 4]> {
    base_points(&chart.sample_box(), n)
}

#[test]
fn round_sphere_operator_is_twice_identity() {
    let e = entry("round_sphere");
    for x in probe_points(&e.metric, 3) {
        let op = curvature_operator(&e.metric, &x).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { 2.0 } else { 0.0 };
                assert!(
                    (op.mat[i][j] - want).abs() < 1e-8,
                    "sphere operator entry ({i},{j}) = {} at {x:?}",
                    op.mat[i][j]
                );
            }
        }
        assert!((op.scalar_curvature() - 12.0).abs() < 1e-8);
    }
}

#[test]
fn sphere_radius_scales_the_operator_inversely_squared() {
    let params = serde_json::json!({ "radius": 2.0 });
    let e = catalog::build("round_sphere", &params).unwrap();
    let x = [0.2, -0.1, 0.05, 0.3];
    let op = curvature_operator(&e.metric, &x).unwrap();
    // Scalar curvature 12 / r^2 and operator (2 / r^2) Id.
    assert!((op.scalar_curvature() - 3.0).abs() < 1e-8);
    assert!((op.mat[0][0] - 0.5).abs() < 1e-8);
}

/// Rebuild the covariant curvature tensor from first-derivative Christoffel
/// symbols by central differences and compare with the nested-dual tensor.
#[test]
fn curvature_tensor_matches_central_differences() {
    let h = 1e-3;
    for name in ["conformal_flat", "s2xs2", "perturbed_flat"] {
        let e = entry(name);
        let x = [0.11, -0.17, 0.23, -0.05];
        let exact = curvature_tensor(&e.metric, &x).unwrap();
        let gamma = christoffels(&e.metric, &x).unwrap();
        let g = e.metric.metric(&x);

        // dgamma[e][d][a][b] = d_e Gamma^d_{ab} by central differences.
        let mut dgamma = [[[[0.0; 4]; 4]; 4]; 4];
        for dir in 0..4 {
            let mut xp = x;
            let mut xm = x;
            xp[dir] += h;
            xm[dir] -= h;
            let gp = christoffels(&e.metric, &xp).unwrap();
            let gm = christoffels(&e.metric, &xm).unwrap();
            for d in 0..4 {
                for a in 0..4 {
                    for b in 0..4 {
                        dgamma[dir][d][a][b] = (gp[d][a][b] - gm[d][a][b]) / (2.0 * h);
                    }
                }
            }
        }

        let mut worst = 0.0_f64;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let mut coeff = [0.0; 4];
                    for (d, slot) in coeff.iter_mut().enumerate() {
                        let mut acc = dgamma[b][d][a][c] - dgamma[a][d][b][c];
                        for m in 0..4 {
                            acc += gamma[d][b][m] * gamma[m][a][c]
                                - gamma[d][a][m] * gamma[m][b][c];
                        }
                        *slot = acc;
                    }
                    for d in 0..4 {
                        let low: f64 = (0..4).map(|m| g[d][m] * coeff[m]).sum();
                        worst = worst.max((low - exact[a][b][c][d]).abs());
                    }
                }
            }
        }
        assert!(worst < FD_TOL, "{name}: finite-difference defect {worst:.3e}");
    }
}

#[test]
fn decomposition_reconstructs_on_every_catalog_metric() {
    for name in catalog::NAMES {
        let e = entry(name);
        for x in probe_points(&e.metric, 3) {
            let op = curvature_operator(&e.metric, &x).unwrap();
            let d = twistor_gh::analysis::decomposition_defects(&op);
            assert!(
                d.max() < EXACT_TOL,
                "{name}: decomposition defect {:.3e} at {x:?}",
                d.max()
            );
        }
    }
}

#[test]
fn kahler_metrics_have_the_degenerate_self_dual_weyl_spectrum() {
    for name in ["fubini_study", "s2xs2"] {
        let e = entry(name);
        for x in probe_points(&e.metric, 2) {
            let op = curvature_operator(&e.metric, &x).unwrap();
            let d = op.decompose();
            let s = d.scalar;
            assert!(s.abs() > 0.1, "{name}: expected nonzero scalar curvature");
            let (vals, vecs) = sym_eigen3(&d.w_plus);
            let want = [s / 3.0, -s / 6.0, -s / 6.0];
            for k in 0..3 {
                let rel = (vals[k] - want[k]).abs() / (1.0 + s.abs());
                assert!(
                    rel < SPECTRUM_TOL,
                    "{name}: W+ eigenvalue {k} = {} want {} at {x:?}",
                    vals[k],
                    want[k]
                );
            }
            // The top eigenvector is the Kahler form, up to sign.
            let omega = omega_at(&e.metric, &x).unwrap().expect("complex structure");
            let dot: f64 = (0..3).map(|k| vecs[0][k] * omega.0[k]).sum();
            assert!(
                (dot.abs() - 1.0).abs() < SPECTRUM_TOL,
                "{name}: top W+ eigenvector misaligned with omega (|dot| = {})",
                dot.abs()
            );
            // The full operator sends omega to (s/2) omega plus an
            // anti-self-dual remainder.
            let (sd_part, _) = op.apply_sd(&omega);
            let mut defect = 0.0_f64;
            for k in 0..3 {
                defect = defect.max((sd_part.0[k] - 0.5 * s * omega.0[k]).abs());
            }
            assert!(
                defect / (1.0 + s.abs()) < SPECTRUM_TOL,
                "{name}: R(omega) self-dual part defect {defect:.3e}"
            );
        }
    }
}

#[test]
fn catalog_flags_match_computed_curvature() {
    for name in catalog::NAMES {
        let e = entry(name);
        let mut max_b = 0.0_f64;
        let mut max_wp = 0.0_f64;
        let mut max_wm = 0.0_f64;
        let mut max_s = 0.0_f64;
        let mut max_kahler = 0.0_f64;
        let mut max_herm = 0.0_f64;
        for x in probe_points(&e.metric, 3) {
            let d = curvature_operator(&e.metric, &x).unwrap().decompose();
            max_b = max_b.max(frobenius(&d.b));
            max_wp = max_wp.max(frobenius(&d.w_plus));
            max_wm = max_wm.max(frobenius(&d.w_minus));
            max_s = max_s.max(d.scalar.abs());
            max_kahler = max_kahler.max(kahler_defect(&e.metric, &x).unwrap());
            max_herm = max_herm.max(integrability_defect(&e.metric, &x).unwrap());
        }
        let checks = [
            ("einstein", e.expected.einstein, max_b),
            ("self_dual", e.expected.self_dual, max_wm),
            ("anti_self_dual", e.expected.anti_self_dual, max_wp),
            ("scalar_flat", e.expected.scalar_flat, max_s),
            ("kahler", e.expected.kahler, max_kahler),
            ("hermitian", e.expected.hermitian, max_herm),
        ];
        for (flag, expected, defect) in checks {
            if expected {
                assert!(
                    defect < EXACT_TOL,
                    "{name}: flag {flag} promised but defect is {defect:.3e}"
                );
            } else {
                assert!(
                    defect > ABSENT_FLOOR,
                    "{name}: flag {flag} absent but defect is only {defect:.3e}"
                );
            }
        }
    }
}
