//! Twistor-chart geometry checks: the closed-form Levi-Civita derivatives
//! against coordinate-differentiation references, bracket consistency of the
//! horizontal lift, and the vanishing oracle blocks of the covariant
//! derivative of the fundamental form.

use twistor_gh::analysis::oracle_defects;
use twistor_gh::bivector::SDual;
use twistor_gh::catalog;
use twistor_gh::curvature::curvature_operator;
use twistor_gh::sample::fiber_sample;
use twistor_gh::twistor::TwistorChart;
use twistor_gh::FiberMap;

/// Both sides of each comparison come from exact forward-mode derivatives;
/// the tolerance only absorbs rounding in the 6x6 contractions.
const EXACT_TOL: f64 = 1e-9;


#[test]
fn closed_lift_lift_derivative_matches_coordinate_reference() {
    let dirs: [[f64; 4]; 3] = [
        [1.0, 0.0, 0.0, 0.0],
        [0.3, -1.0, 0.5, 0.2],
        [0.0, 0.4, -0.2, 1.0],
    ];
    for name in ["round_sphere", "s2xs2", "perturbed_flat"] {
        let e = catalog::build(name, &serde_json::Value::Null).unwrap();
        let x = [0.12, -0.2, 0.31, 0.04];
        let op = curvature_operator(&e.metric, &x).unwrap();
        for sigma in fiber_sample(4, 11) {
            let tc = TwistorChart::new(&e.metric, x, sigma).unwrap();
            for t in [0.5, 2.0] {
                for xd in &dirs {
                    for yd in &dirs {
                        let oracle = tc.lc_oracle_lift_lift(t, xd, yd).unwrap();
                        let (hor_o, ver_o) = tc.split_at_anchor(&oracle).unwrap();
                        let (hor_c, ver_c) = tc.lc_closed_lift_lift(&op, xd, yd).unwrap();
                        let dh: f64 = (0..4)
                            .map(|i| (hor_o[i] - hor_c[i]).powi(2))
                            .sum::<f64>()
                            .sqrt();
                        let dv = ver_o.sub(&ver_c).norm();
                        assert!(
                            dh < EXACT_TOL && dv < EXACT_TOL,
                            "{name} t={t}: lift/lift defect hor {dh:.3e} ver {dv:.3e}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn closed_lift_vertical_derivative_matches_coordinate_reference() {
    let e = catalog::build("s2xh2", &serde_json::Value::Null).unwrap();
    let x = [0.25, 0.1, -0.3, 0.15];
    let op = curvature_operator(&e.metric, &x).unwrap();
    for sigma in fiber_sample(3, 23) {
        let tc = TwistorChart::new(&e.metric, x, sigma).unwrap();
        for t in [0.5, 1.0, 2.0] {
            for m in 0..2 {
                let oracle = tc.lc_oracle_lift_vertical(t, &[0.7, -0.2, 1.0, 0.3], m).unwrap();
                let (hor_o, _) = tc.split_at_anchor(&oracle).unwrap();
                let v = if m == 0 { tc.nu.0 } else { tc.nu.1 };
                let hor_c = tc
                    .lc_closed_lift_vertical(&op, t, &[0.7, -0.2, 1.0, 0.3], &v)
                    .unwrap();
                let dh: f64 = (0..4)
                    .map(|i| (hor_o[i] - hor_c[i]).powi(2))
                    .sum::<f64>()
                    .sqrt();
                assert!(dh < EXACT_TOL, "t={t} m={m}: lift/vertical defect {dh:.3e}");
            }
        }
    }
}

#[test]
fn fibres_are_geodesic_at_the_anchor() {
    let e = catalog::build("conformal_flat", &serde_json::Value::Null).unwrap();
    let tc = TwistorChart::new(&e.metric, [0.1, 0.2, -0.1, 0.3], SDual([0.0, 1.0, 0.0])).unwrap();
    for t in [0.5, 1.0, 2.0] {
        for m in 0..2 {
            for n in 0..2 {
                let d = tc.lc_oracle_vertical_vertical(t, m, n).unwrap();
                let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
                assert!(norm < EXACT_TOL, "t={t}: D_u{m} u{n} = {d:?}");
            }
        }
    }
}

#[test]
fn horizontal_lift_bracket_has_no_horizontal_torsion() {
    // [X^h, Y^h] of constant chart fields is purely vertical plus the lift
    // of [X, Y] = 0, so its horizontal part must vanish; its vertical part
    // is measured by the curvature through the lift/lift closed form.
    let e = catalog::build("s2xs2", &serde_json::Value::Null).unwrap();
    let x = [0.12, -0.2, 0.31, 0.04];
    let op = curvature_operator(&e.metric, &x).unwrap();
    let xd = [1.0, 0.2, -0.4, 0.0];
    let yd = [0.1, -1.0, 0.0, 0.6];
    for sigma in fiber_sample(3, 29) {
        let tc = TwistorChart::new(&e.metric, x, sigma).unwrap();
        let br = tc.lift_bracket(&xd, &yd).unwrap();
        let (hor, ver) = tc.split_at_anchor(&br).unwrap();
        let hn: f64 = hor.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(hn < EXACT_TOL, "horizontal bracket part {hn:.3e}");
        // Torsion-freeness: [X^h, Y^h] = D_{X^h} Y^h - D_{Y^h} X^h.
        let (_, vxy) = tc.lc_closed_lift_lift(&op, &xd, &yd).unwrap();
        let (_, vyx) = tc.lc_closed_lift_lift(&op, &yd, &xd).unwrap();
        let defect = ver.sub(&vxy.sub(&vyx)).norm();
        assert!(defect < EXACT_TOL, "vertical bracket defect {defect:.3e}");
    }
}

#[test]
fn cov_deriv_oracle_zero_blocks_vanish_for_every_map_shape() {
    let e = catalog::build("fubini_study", &serde_json::Value::Null).unwrap();
    let x = [0.18, -0.07, 0.22, 0.12];
    let maps = [
        FiberMap::Identity,
        FiberMap::ConstOmega,
        FiberMap::parse("lambda:-:2,1").unwrap(),
    ];
    for fmap in &maps {
        for sigma in fiber_sample(4, 41) {
            let d = oracle_defects(&e.metric, &x, &sigma, fmap, 1.5).unwrap();
            assert!(
                d.zero_blocks < EXACT_TOL,
                "map {}: zero-block defect {:.3e}",
                fmap.label(),
                d.zero_blocks
            );
            assert!(
                d.cov_deriv_rel < EXACT_TOL && d.nijenhuis_rel < EXACT_TOL,
                "map {}: oracle defects {:.3e} / {:.3e}",
                fmap.label(),
                d.cov_deriv_rel,
                d.nijenhuis_rel
            );
        }
    }
}
