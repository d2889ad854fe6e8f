//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("metric is numerically singular at the sample point")]
    SingularMetric,

    #[error("could not build an orthonormal frame (degenerate input vectors)")]
    DegenerateFrame,

    #[error("chart provides no compatible complex structure")]
    MissingComplexStructure,

    #[error("complex structure fails compatibility checks: {0}")]
    IncompatibleComplexStructure(String),

    #[error("vector is not tangent to the fibre sphere at the given point")]
    NotTangentToFibre,

    #[error("unknown metric '{0}'")]
    UnknownMetric(String),

    #[error("unknown fibre map '{0}'")]
    UnknownFiberMap(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("classification ambiguous: {0}")]
    AmbiguousClass(String),

    #[error("residual pattern inconsistent: {0}")]
    InconsistentClass(String),
}
