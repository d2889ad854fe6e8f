//! Deterministic sample-point generation.
//!
//! Base points come from a Halton sequence mapped into the chart's sample
//! box; fibre points are the six signed basis forms plus seeded random unit
//! forms. Everything is reproducible from the seed alone.

use crate::bivector::SDual;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Radical-inverse (van der Corput) value of `k` in the given base.
fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while k > 0 {
        out += (k % base) as f64 * inv;
        k /= base;
        inv /= base as f64;
    }
    out
}

/// `n` low-discrepancy points in the box (Halton bases 2, 3, 5, 7), skipping
/// the degenerate first term so the origin is not over-represented.
pub fn base_points(sample_box: &[[f64; 2]; 4], n: usize) -> Vec<[f64; 4]> {
    const BASES: [u64; 4] = [2, 3, 5, 7];
    (1..=n as u64)
        .map(|k| {
            std::array::from_fn(|i| {
                let t = radical_inverse(k, BASES[i]);
                sample_box[i][0] + (sample_box[i][1] - sample_box[i][0]) * t
            })
        })
        .collect()
}

/// Fibre sample points: all six signed basis forms followed by `extra`
/// seeded random unit self-dual forms.
pub fn fiber_points(extra: usize, seed: u64) -> Vec<SDual> {
    let mut out = vec![
        SDual([1.0, 0.0, 0.0]),
        SDual([0.0, 1.0, 0.0]),
        SDual([0.0, 0.0, 1.0]),
        SDual([-1.0, 0.0, 0.0]),
        SDual([0.0, -1.0, 0.0]),
        SDual([0.0, 0.0, -1.0]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < 6 + extra {
        let v = SDual([
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ]);
        let n2 = v.dot(&v);
        if (1e-4..=1.0).contains(&n2) {
            out.push(v.normalized());
        }
    }
    out
}

/// Exactly `count` fibre points: the six signed basis forms first (truncated
/// if `count < 6`), then seeded random unit forms to make up the total.
pub fn fiber_sample(count: usize, seed: u64) -> Vec<SDual> {
    let mut pts = fiber_points(count.saturating_sub(6), seed);
    pts.truncate(count);
    pts
}

/// Random unit tangent directions on the fibre at σ (orthogonal to σ).
pub fn fiber_tangents(sigma: &SDual, count: usize, seed: u64) -> Vec<SDual> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = SDual([
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ]);
        let tangent = v.sub(&sigma.scale(v.dot(sigma)));
        let n2 = tangent.dot(&tangent);
        if (1e-4..=1.0).contains(&n2) {
            out.push(tangent.normalized());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_points_stay_in_box_and_are_deterministic() {
        let bx = [[-0.6, 0.6], [-0.5, 0.5], [0.0, 1.0], [-1.0, 0.0]];
        let pts = base_points(&bx, 16);
        assert_eq!(pts.len(), 16);
        for p in &pts {
            for i in 0..4 {
                assert!(p[i] >= bx[i][0] - 1e-12 && p[i] <= bx[i][1] + 1e-12);
            }
        }
        assert_eq!(pts, base_points(&bx, 16));
        // Distinct points.
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                assert!(pts[i] != pts[j]);
            }
        }
    }

    #[test]
    fn fiber_points_start_with_signed_axes_and_are_unit() {
        let pts = fiber_points(8, 11);
        assert_eq!(pts.len(), 14);
        assert_eq!(pts[0].0, [1.0, 0.0, 0.0]);
        assert_eq!(pts[5].0, [0.0, 0.0, -1.0]);
        for p in &pts {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
        assert_eq!(pts, fiber_points(8, 11));
        assert_ne!(pts[6].0, fiber_points(8, 12)[6].0);
    }

    #[test]
    fn fiber_tangents_are_unit_and_orthogonal_to_sigma() {
        let sigma = SDual([0.6, -0.48, 0.64]).normalized();
        for v in fiber_tangents(&sigma, 5, 3) {
            assert!((v.norm() - 1.0).abs() < 1e-12);
            assert!(v.dot(&sigma).abs() < 1e-12);
        }
    }
}
