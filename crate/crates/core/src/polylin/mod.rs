//! Exact rational arithmetic, a deterministic simplex solver, and norms
//! presented as the max of finitely many linear functionals. Everything above
//! this layer reduces its "for all coefficient vectors" questions to the three
//! queries exported here.

pub mod lp;
pub mod pwl;
pub mod rat;

pub use lp::{Constraint, LinearProgram, LpSolution, Relation, solve_lp};
pub use pwl::{
    DominanceReport, DominanceViolation, PwlNorm, SupOverBall, WeightedL1, check_pwl_dominance,
    min_norm_over_l1_sphere, sup_norm_over_unit_ball,
};
pub use rat::Rat;
