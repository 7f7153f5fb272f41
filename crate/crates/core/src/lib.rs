//! Degree-constrained graph orientations and bipartite degree-constrained
//! factors.
//!
//! * [`feasibility`] decides and builds `(p, q)`-orientations (lower and
//!   upper out-degree bounds per vertex) through a flow with lower bounds,
//!   checks the Frank–Gyárfás subset condition exhaustively, and builds
//!   balanced orientations from Euler circuits.
//! * [`boundary`] turns any `(p, q)`-orientation of a simple graph into one
//!   whose out-degrees all lie in `{p, p+1, q-1, q}` by repeated path and
//!   in-edge reversals.
//! * [`factor`] moves between orientations and factors of bipartite graphs
//!   and solves `(g, f)`-factor and boundary-factor problems with it.
//! * [`oracle`] enumerates orientations and edge subsets as ground truth.
//! * [`io`], [`generate`] and [`verify`] provide text formats, seeded
//!   instances and result checking for the `pq-orient` CLI.

pub mod boundary;
pub mod bounds;
pub mod error;
pub mod factor;
pub mod feasibility;
pub mod flow;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod verify;

pub use boundary::{
    improve_to_boundary, interior_set, orient_boundary, orient_corollary, potential, push_step,
    BoundaryOptions, BoundaryRun, PushState, StepKind, StepOutcome, StepRecord,
};
pub use bounds::{check_hypotheses, validate_bounds, BoundsRole, DegreeBounds, HypothesisReport};
pub use error::{Error, Result};
pub use factor::{
    factor_boundary, factor_boundary_with, factor_gf, factor_gf_with, factor_to_orientation,
    near_half_factor, orientation_to_factor, transform_lists, DegreeListFunction, Factor,
};
pub use feasibility::{
    balanced_orientation, frank_gyarfas_check, orient_pq, orient_pq_relaxed, SubsetVerdict,
};
pub use graph::{Bipartition, EdgeId, Graph, Orientation, Side, VertexId, VertexSet};
pub use oracle::{cross_validate, enum_factors, enum_orientations, Caps, DegreePredicate, OracleReport};
