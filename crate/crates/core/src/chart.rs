//! The chart abstraction: a metric (and optionally an almost complex
//! structure) given in one coordinate patch of a 4-manifold.

use crate::error::Error;
use crate::linalg;
use crate::scalar::Scalar;

/// A Riemannian metric presented in a single coordinate chart.
///
/// Implementations must be evaluable on any [`Scalar`], which is what lets
/// the engine differentiate them automatically to any order it needs.
pub trait MetricChart {
    /// Metric components `g_{αβ}(x)` in chart coordinates.
    fn metric<S: Scalar>(&self, x: &[S; 4]) -> [[S; 4]; 4];

    /// Chart components of an almost complex structure `J^α_β(x)` (acting as
    /// `(JX)^α = Σ_β J[α][β] X^β`), when the chart carries one.
    fn complex_structure<S: Scalar>(&self, x: &[S; 4]) -> Option<[[S; 4]; 4]> {
        let _ = x;
        None
    }

    /// Coordinate box on which the chart is valid and well conditioned;
    /// sample points are drawn from here.
    fn sample_box(&self) -> [[f64; 2]; 4] {
        [[-0.6, 0.6]; 4]
    }

    fn name(&self) -> String {
        "chart".to_string()
    }
}

impl<C: MetricChart + ?Sized> MetricChart for &C {
    fn metric<S: Scalar>(&self, x: &[S; 4]) -> [[S; 4]; 4] {
        (**self).metric(x)
    }

    fn complex_structure<S: Scalar>(&self, x: &[S; 4]) -> Option<[[S; 4]; 4]> {
        (**self).complex_structure(x)
    }

    fn sample_box(&self) -> [[f64; 2]; 4] {
        (**self).sample_box()
    }

    fn name(&self) -> String {
        (**self).name()
    }
}

/// Inverse metric, with a proper error on degeneracy.
pub fn inverse_metric<S: Scalar>(g: &[[S; 4]; 4]) -> Result<[[S; 4]; 4], Error> {
    linalg::mat_inv(g).ok_or(Error::SingularMetric)
}

/// Validate that `j` is an almost complex structure compatible with `g` at
/// one point: `J² = -Id` and `g(JX, JY) = g(X, Y)`.
pub fn check_compatible(g: &[[f64; 4]; 4], j: &[[f64; 4]; 4], tol: f64) -> Result<(), Error> {
    let jj = linalg::mat_mul(j, j);
    for i in 0..4 {
        for k in 0..4 {
            let want = if i == k { -1.0 } else { 0.0 };
            if (jj[i][k] - want).abs() > tol {
                return Err(Error::IncompatibleComplexStructure(format!(
                    "J^2 deviates from -Id by {:.2e}",
                    (jj[i][k] - want).abs()
                )));
            }
        }
    }
    // g(JX, JY) = (J^T g J)(X, Y).
    let jt = linalg::transpose(j);
    let jgj = linalg::mat_mul(&jt, &linalg::mat_mul(g, j));
    for i in 0..4 {
        for k in 0..4 {
            if (jgj[i][k] - g[i][k]).abs() > tol {
                return Err(Error::IncompatibleComplexStructure(format!(
                    "J is not an isometry: deviation {:.2e}",
                    (jgj[i][k] - g[i][k]).abs()
                )));
            }
        }
    }
    Ok(())
}
