//! Exact verification of upper bounds on the number of independent sets.
//!
//! * [`graph`]: simple graphs, the extremal families, tensor products,
//!   bipartite double covers, bipartite views and the edge-list file format.
//! * [`count`]: exact enumeration and arbitrary-precision counting.
//! * [`bounds`]: product-form bounds with rational exponents and exact
//!   comparison against counts and against each other.
//! * [`entropy`]: entropies of the uniform independent-set distribution and
//!   a step-by-step audit of the entropy argument behind the irregular
//!   bipartite bound.
//! * [`injection`]: the swap injection from pairs of independent sets of
//!   `G` into independent sets of `G x K_2`.
//! * [`report`] and [`sweep`]: the JSON reports and exhaustive sweeps
//!   driven by the `indset` binary, whose commands live in [`cli`].
//!
//! Floating-point code is generic over [`Scalar`]; the aliases below fix
//! it to `f64` (the default everywhere in reports) or `f32`.

pub mod bounds;
pub mod cli;
pub mod count;
pub mod entropy;
pub mod graph;
pub mod injection;
pub mod report;
mod scalar;
pub mod sweep;
mod vertex_set;

pub use scalar::Scalar;
pub use vertex_set::VertexSet;

pub use bounds::{compare_bound_vs_count, compare_bounds, BoundExpr, Verdict};
pub use count::{count_independent_sets, enumerate_independent_sets, IndSetFamily};
pub use graph::{BipartiteView, Graph};

pub type AuditReport = entropy::AuditReport<f64>;
pub type AuditReportF32 = entropy::AuditReport<f32>;
pub type AuditStep = entropy::AuditStep<f64>;
pub type ShearerOutcome = entropy::ShearerOutcome<f64>;

/// Tolerance for every floating-point comparison in `f64` audits.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
