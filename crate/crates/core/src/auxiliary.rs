//! Auxiliary programs over `(x, α)` shared by the crisp and fuzzy solvers.

use thiserror::Error;

use crate::lp::{self, LinearProgram, LpError, LpOutcome, Row, Sense};
use crate::membership::{MembershipError, MembershipSpec};
use crate::model::{SolverConfig, ValidationReport, WeightError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid problem:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Membership(#[from] MembershipError),
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error("the constraint set is empty")]
    InfeasibleProblem,
    #[error("objective {objective:?} is unbounded over the feasible set")]
    UnboundedObjective { objective: String },
    #[error("objective {objective:?} has best value {best} not better than worst value {worst}")]
    InvertedRamp {
        objective: String,
        best: f64,
        worst: f64,
    },
    #[error("no solution reaches the required acceptability alpha >= {alpha_lower}")]
    InfeasibleAtAlphaLower { alpha_lower: f64 },
    #[error("the membership-weighted objective is unbounded")]
    UnboundedAuxiliary,
    #[error("objective {objective:?} has best value 0, satisfaction is undefined")]
    ZeroBestValue { objective: String },
    #[error("problem has no soft constraints and no goal-form objectives")]
    NoFuzzyContent,
    #[error("alpha grid is empty")]
    EmptyGrid,
    #[error("invalid alpha grid: {0}")]
    InvalidGrid(String),
}

impl SolveError {
    /// Reported solver outcome rather than a defect of the input or solver.
    pub fn is_infeasibility(&self) -> bool {
        matches!(
            self,
            SolveError::InfeasibleProblem
                | SolveError::UnboundedObjective { .. }
                | SolveError::InfeasibleAtAlphaLower { .. }
                | SolveError::UnboundedAuxiliary
        )
    }
}

/// One membership `μ(coefficients · x) ≥ α`, weighted in the sum term.
#[derive(Debug, Clone)]
pub(crate) struct MembershipTerm {
    pub spec: MembershipSpec,
    pub coefficients: Vec<f64>,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct AuxiliaryProgram {
    pub n_vars: usize,
    pub terms: Vec<MembershipTerm>,
    pub hard_rows: Vec<Row>,
}

/// How the objective trades `α` against the membership sum.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AuxObjective {
    pub alpha_lower: f64,
    pub alpha_upper: f64,
    pub alpha_coef: f64,
    pub sum_coef: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct AuxPoint {
    pub x: Vec<f64>,
    pub lp_alpha: f64,
    pub iterations: usize,
}

impl AuxiliaryProgram {
    pub fn build(&self, obj: AuxObjective) -> Result<LinearProgram, SolveError> {
        let n = self.n_vars;
        let width = n + 1;
        let mut objective = vec![0.0; width];
        objective[n] = obj.alpha_coef;
        let mut rows = Vec::with_capacity(self.terms.len() + self.hard_rows.len() + 2);

        for term in &self.terms {
            rows.extend(term.spec.as_lp_rows(&term.coefficients, n)?);
            if obj.sum_coef != 0.0 && term.weight != 0.0 {
                let (g, _) = term.spec.linear_form(&term.coefficients)?;
                for (o, gi) in objective.iter_mut().zip(g) {
                    *o += obj.sum_coef * term.weight * gi;
                }
            }
        }
        for row in &self.hard_rows {
            let mut coeffs = row.coefficients.clone();
            coeffs.push(0.0);
            rows.push(Row::new(coeffs, row.relation, row.rhs));
        }
        let mut alpha_row = vec![0.0; width];
        alpha_row[n] = 1.0;
        if obj.alpha_lower > 0.0 {
            rows.push(Row::ge(alpha_row.clone(), obj.alpha_lower));
        }
        rows.push(Row::le(alpha_row, obj.alpha_upper));

        Ok(LinearProgram::new(Sense::Maximize, objective, rows))
    }

    /// `None` when no `(x, α)` meets the rows and the `α` bounds.
    pub fn solve(
        &self,
        cfg: &SolverConfig,
        obj: AuxObjective,
    ) -> Result<Option<AuxPoint>, SolveError> {
        let lp = self.build(obj)?;
        match lp::solve(&lp, cfg)? {
            LpOutcome::Optimal(sol) => {
                let mut x = sol.x;
                let lp_alpha = x.pop().unwrap_or(0.0);
                Ok(Some(AuxPoint {
                    x,
                    lp_alpha,
                    iterations: sol.iterations,
                }))
            }
            LpOutcome::Infeasible => Ok(None),
            LpOutcome::Unbounded => Err(SolveError::UnboundedAuxiliary),
        }
    }
}
