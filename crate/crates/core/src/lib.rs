//! Numerical engine for twistor spaces of oriented Riemannian 4-manifolds.
//!
//! Given a metric in a coordinate chart, the crate builds the associated
//! 2-sphere bundle of unit self-dual 2-forms, equips it with the family of
//! metrics `h_t` (horizontal lift plus `t`-scaled round fibres) and the
//! almost Hermitian structures `𝒥_f` induced by fibre maps `f`, and measures
//! which Gray–Hervella class the result lands in.
//!
//! The layering is strictly bottom-up:
//!
//! * [`scalar`] — forward-mode automatic differentiation on a scalar trait,
//!   nestable to the depth the curvature oracles need.
//! * [`linalg`] — small dense matrix/tensor helpers over any scalar.
//! * [`bivector`] — the 6-dimensional algebra of 2-forms on an oriented
//!   Euclidean 4-space: wedge, Hodge split, the cross product on self-dual
//!   forms, and the endomorphisms `K_a`.
//! * [`frame`] — orthonormal frames by Gram-Schmidt, frame/chart transport.
//! * [`chart`] — the `MetricChart` trait: a metric (and optionally an almost
//!   complex structure) in one coordinate patch.
//! * [`curvature`] — Christoffels, the curvature operator on 2-forms, and
//!   its irreducible decomposition (scalar part, traceless Ricci block,
//!   Weyl halves), all by automatic differentiation.
//! * [`twistor`] — the 6-coordinate chart of the unit self-dual sphere
//!   bundle: `h_t`, the fundamental form, horizontal lifts, and
//!   differentiation oracles for connection and structure tensors.
//! * [`fibermaps`] — the fibre maps `f` (identity, antipodal, constant
//!   section, stereographic `λ`-dilations) and their differentials.
//! * [`analysis`] — closed-form structure tensors (covariant derivative of
//!   the fundamental form, exterior derivative, codifferential, Nijenhuis
//!   tensor), identity residuals, and the class decision.
//! * [`catalog`] — ready-made metrics with their classical properties.
//! * [`sample`] — deterministic sample grids (low-discrepancy base points,
//!   fixed-plus-seeded fibre points).
//! * [`report`] — versioned machine-readable run reports.

pub mod analysis;
pub mod bivector;
pub mod catalog;
pub mod chart;
pub mod curvature;
pub mod error;
pub mod fibermaps;
pub mod frame;
pub mod linalg;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod twistor;

pub use analysis::{classify, gh_residuals, Classification, GHResiduals, RunGrid};
pub use bivector::{wedge, ADual, Biv, SDual};
pub use chart::MetricChart;
pub use curvature::{curvature_operator, CurvDecomp, CurvOp};
pub use error::Error;
pub use fibermaps::FiberMap;
pub use report::{GHReport, VerifyReport};
pub use scalar::{Dual, Scalar};
