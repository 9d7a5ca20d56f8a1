//! Fuzzy multi-objective linear programming.
//!
//! A dense two-phase simplex ([`lp`]) underlies a crisp max-min compromise
//! solver ([`crisp`]) and a fuzzy solver with soft constraints and
//! goal-form objectives ([`fuzzy`]). [`case_study`] embeds a concrete plant
//! delivery dataset, and [`io`] and [`cli`] read problem files and print
//! result documents.

mod auxiliary;
pub mod case_study;
pub mod cli;
pub mod crisp;
pub mod fuzzy;
pub mod io;
pub mod lp;
pub mod membership;
pub mod model;

pub use auxiliary::SolveError;
pub use crisp::{
    individual_optima, satisfaction, solve_augmented, solve_maxmin, two_phase_refine,
    CompromiseMode, CompromiseSolution, ObjectiveRange,
};
pub use fuzzy::{alpha_sweep, relax, solve_fuzzy_augmented, FuzzySolution, SweepRow, SweepTable};
pub use lp::{LinearProgram, LpError, LpOutcome, LpSolution, Relation, Row, Sense};
pub use membership::{MembershipError, MembershipSpec, SoftRelation};
pub use model::{
    validate, ConstraintRelation, DecisionProblem, FuzzyConstraint, Objective, SolverConfig,
    ValidationReport, WeightPolicy, WorstValuePolicy,
};
