//! Variational formulas on the positive-definite cone, the matrix-pair
//! equation and joint convexity probes.

mod convexity;
mod gradcheck;
mod optimize;
mod pair;
mod problem;
mod special;

pub use convexity::{
    convexity_probe, g_h, g_h_probe, h_h, h_h_probe, lieb_functional, psi_bridge, BridgeReport, ConvexityReport,
};
pub use gradcheck::{finite_difference_check, GradientCheck};
pub use optimize::{multi_start, optimize_pd, random_start, OptimizeOptions, OptimizeResult, StepDirection, StepRule};
pub use pair::{solve_pair_equation, PairEquation, PairResiduals};
pub use problem::{
    closed_form_max, closed_form_min, random_invertible, random_problem, ClosedForm, Sense, TripleExponents,
    VariationalProblem,
};
pub use special::{special_max, special_max_objective, special_min, special_min_objective, SpecialOptimum};
