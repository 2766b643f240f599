//! Robust orienteering with stochastic arc weights.
//!
//! A vehicle leaves the depot (node 0), collects scores at customer nodes and
//! must be back within a length limit. Arc weights are uncertain: the route is
//! fixed in a first stage and a recourse policy drops the tail of the route
//! once the realized weights would break the limit.

pub mod error;
pub mod experiments;
pub mod instance;
pub mod matrix;
pub mod models;
pub mod recourse;
pub mod solver;
pub mod uncertainty;

pub use error::{Error, Result};
pub use instance::{Instance, Node, WeightModel, DEPOT};
pub use matrix::SquareMatrix;
pub use models::{MilpModel, ModelKind};
pub use recourse::{Path, Policy, RecourseContext, RecourseOutcome};
pub use uncertainty::{BoxUncertainty, Scenario};
pub use solver::{branch_and_bound, evaluate_objective, RobustSolution, SearchLimits};
