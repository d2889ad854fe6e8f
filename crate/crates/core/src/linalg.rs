//! Small dense linear algebra, generic over the scalar type.
//!
//! Everything here operates on fixed-size arrays so it can run on dual
//! numbers as well as `f64`. Pivoting decisions use the value part only,
//! which is the correct choice for forward-mode AD: the derivative of a
//! branch follows the branch taken at the evaluation point.

use crate::scalar::Scalar;

pub fn identity<S: Scalar, const N: usize>() -> [[S; N]; N] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { S::one() } else { S::zero() }))
}

pub fn transpose<S: Scalar, const N: usize>(m: &[[S; N]; N]) -> [[S; N]; N] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i]))
}

pub fn mat_vec<S: Scalar, const N: usize>(m: &[[S; N]; N], v: &[S; N]) -> [S; N] {
    std::array::from_fn(|i| {
        let mut acc = S::zero();
        for j in 0..N {
            acc = acc + m[i][j] * v[j];
        }
        acc
    })
}

pub fn mat_mul<S: Scalar, const N: usize>(a: &[[S; N]; N], b: &[[S; N]; N]) -> [[S; N]; N] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = S::zero();
            for k in 0..N {
                acc = acc + a[i][k] * b[k][j];
            }
            acc
        })
    })
}

pub fn dot<S: Scalar, const N: usize>(a: &[S; N], b: &[S; N]) -> S {
    let mut acc = S::zero();
    for i in 0..N {
        acc = acc + a[i] * b[i];
    }
    acc
}

/// Bilinear form `a^T m b`.
pub fn quad_form<S: Scalar, const N: usize>(m: &[[S; N]; N], a: &[S; N], b: &[S; N]) -> S {
    dot(a, &mat_vec(m, b))
}

/// Matrix inverse by Gauss-Jordan elimination with partial pivoting.
///
/// Returns `None` when a pivot degenerates (matrix numerically singular).
pub fn mat_inv<S: Scalar, const N: usize>(m: &[[S; N]; N]) -> Option<[[S; N]; N]> {
    let mut a = *m;
    let mut inv = identity::<S, N>();
    for col in 0..N {
        // Pick the row with the largest value-part pivot.
        let mut best = col;
        let mut best_mag = a[col][col].re().abs();
        for row in (col + 1)..N {
            let mag = a[row][col].re().abs();
            if mag > best_mag {
                best = row;
                best_mag = mag;
            }
        }
        if !(best_mag > 1e-300) || !best_mag.is_finite() {
            return None;
        }
        a.swap(col, best);
        inv.swap(col, best);
        let pivot = a[col][col];
        for j in 0..N {
            a[col][j] = a[col][j] / pivot;
            inv[col][j] = inv[col][j] / pivot;
        }
        for row in 0..N {
            if row == col {
                continue;
            }
            let factor = a[row][col];
            for j in 0..N {
                a[row][j] = a[row][j] - factor * a[col][j];
                inv[row][j] = inv[row][j] - factor * inv[col][j];
            }
        }
    }
    Some(inv)
}

/// Solve the linear system `m x = rhs` (small N, partial pivoting).
pub fn solve<S: Scalar, const N: usize>(m: &[[S; N]; N], rhs: &[S; N]) -> Option<[S; N]> {
    mat_inv(m).map(|inv| mat_vec(&inv, rhs))
}

/// Determinant via LU with partial pivoting on the value part.
pub fn det<S: Scalar, const N: usize>(m: &[[S; N]; N]) -> S {
    let mut a = *m;
    let mut d = S::one();
    for col in 0..N {
        let mut best = col;
        let mut best_mag = a[col][col].re().abs();
        for row in (col + 1)..N {
            let mag = a[row][col].re().abs();
            if mag > best_mag {
                best = row;
                best_mag = mag;
            }
        }
        if best != col {
            a.swap(col, best);
            d = -d;
        }
        if !(best_mag > 0.0) {
            return S::zero();
        }
        d = d * a[col][col];
        for row in (col + 1)..N {
            let factor = a[row][col] / a[col][col];
            for j in col..N {
                a[row][j] = a[row][j] - factor * a[col][j];
            }
        }
    }
    d
}

pub fn frobenius<const A: usize, const B: usize>(m: &[[f64; B]; A]) -> f64 {
    let mut acc = 0.0;
    for row in m {
        for v in row {
            acc += v * v;
        }
    }
    acc.sqrt()
}

pub fn frobenius3<const N: usize>(t: &[[[f64; N]; N]; N]) -> f64 {
    let mut acc = 0.0;
    for a in t {
        for b in a {
            for v in b {
                acc += v * v;
            }
        }
    }
    acc.sqrt()
}

/// Pull a rank-3 coordinate tensor back along a basis: `out[A][B][C] =
/// Σ_{IJK} b[A][I] b[B][J] b[C][K] t[I][J][K]`, with `b[A]` the coordinate
/// components of the A-th basis vector. Evaluated in three staged passes.
pub fn contract3<const N: usize>(t: &[[[f64; N]; N]; N], b: &[[f64; N]; N]) -> [[[f64; N]; N]; N] {
    let mut s1 = [[[0.0; N]; N]; N];
    for a in 0..N {
        for j in 0..N {
            for k in 0..N {
                let mut acc = 0.0;
                for i in 0..N {
                    acc += b[a][i] * t[i][j][k];
                }
                s1[a][j][k] = acc;
            }
        }
    }
    let mut s2 = [[[0.0; N]; N]; N];
    for a in 0..N {
        for bb in 0..N {
            for k in 0..N {
                let mut acc = 0.0;
                for j in 0..N {
                    acc += b[bb][j] * s1[a][j][k];
                }
                s2[a][bb][k] = acc;
            }
        }
    }
    let mut out = [[[0.0; N]; N]; N];
    for a in 0..N {
        for bb in 0..N {
            for c in 0..N {
                let mut acc = 0.0;
                for k in 0..N {
                    acc += b[c][k] * s2[a][bb][k];
                }
                out[a][bb][c] = acc;
            }
        }
    }
    out
}

pub fn max_abs<const A: usize, const B: usize>(m: &[[f64; B]; A]) -> f64 {
    let mut acc = 0.0_f64;
    for row in m {
        for v in row {
            acc = acc.max(v.abs());
        }
    }
    acc
}

/// Eigen-decomposition of a symmetric 3x3 matrix.
///
/// Returns eigenvalues in descending order together with matching unit
/// eigenvectors (`vecs[k]` belongs to `vals[k]`).
pub fn sym_eigen3(m: &[[f64; 3]; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let sym = nalgebra::Matrix3::from_fn(|i, j| 0.5 * (m[i][j] + m[j][i]));
    let eig = nalgebra::SymmetricEigen::new(sym);
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let vals = std::array::from_fn(|k| eig.eigenvalues[idx[k]]);
    let vecs = std::array::from_fn(|k| {
        let col = eig.eigenvectors.column(idx[k]);
        [col[0], col[1], col[2]]
    });
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{seed_axis, Dual};

    #[test]
    fn inverse_of_known_matrix() {
        let m = [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]];
        let inv = mat_inv(&m).expect("invertible");
        let prod = mat_mul(&m, &inv);
        let id = identity::<f64, 3>();
        for i in 0..3 {
            for j in 0..3 {
                assert!((prod[i][j] - id[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = [[1.0, 2.0], [2.0, 4.0]];
        assert!(mat_inv(&m).is_none());
    }

    #[test]
    fn inverse_derivative_matches_identity_rule() {
        // d(M^{-1}) = -M^{-1} (dM) M^{-1}, checked through dual numbers on a
        // parameter-dependent matrix M(t) = [[1+t, t], [t, 2]].
        let t = 0.3_f64;
        let z = seed_axis::<f64, 1>(&[t], 0);
        let tt = z[0];
        let one = Dual::constant(1.0);
        let two = Dual::constant(2.0);
        let m = [[one + tt, tt], [tt, two]];
        let inv = mat_inv(&m).expect("invertible");

        let mf = [[1.0 + t, t], [t, 2.0]];
        let invf = mat_inv(&mf).unwrap();
        let dm = [[1.0, 1.0], [1.0, 0.0]];
        // -inv * dm * inv
        let tmp = mat_mul(&invf, &dm);
        let expect = mat_mul(&tmp, &invf);
        for i in 0..2 {
            for j in 0..2 {
                assert!((inv[i][j].v - invf[i][j]).abs() < 1e-14);
                assert!((inv[i][j].d + expect[i][j]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn symmetric_eigen_sorted_descending() {
        let m = [[2.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 5.0]];
        let (vals, vecs) = sym_eigen3(&m);
        assert!((vals[0] - 5.0).abs() < 1e-12);
        assert!((vals[1] - 2.0).abs() < 1e-12);
        assert!((vals[2] + 1.0).abs() < 1e-12);
        assert!(vecs[0][2].abs() > 0.999);
    }

    #[test]
    fn determinant_tracks_sign_of_orientation() {
        let m = [
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        assert!((det(&m) + 1.0).abs() < 1e-14);
    }
}
