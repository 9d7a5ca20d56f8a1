//! Single-objective linear programs over nonnegative variables.
//!
//! [`solve`] is a dense two-phase simplex; [`enumerate_vertices`] is a
//! brute-force reference that visits every basic point of the feasible
//! polyhedron and is used to cross-check the simplex on small instances.

mod simplex;
mod vertex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use simplex::solve;
pub use vertex::{enumerate_vertices, MAX_ENUMERATION_VARS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Maximize,
    Minimize,
}

impl Sense {
    /// `+1` for maximization, `-1` for minimization.
    pub fn sign(self) -> f64 {
        match self {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Sense::Maximize => Sense::Minimize,
            Sense::Minimize => Sense::Maximize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

/// One linear row `coefficients · x  (relation)  rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coefficients: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Row {
    pub fn new(coefficients: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Self {
            coefficients,
            relation,
            rhs,
        }
    }

    pub fn le(coefficients: Vec<f64>, rhs: f64) -> Self {
        Self::new(coefficients, Relation::Le, rhs)
    }

    pub fn ge(coefficients: Vec<f64>, rhs: f64) -> Self {
        Self::new(coefficients, Relation::Ge, rhs)
    }

    pub fn eq(coefficients: Vec<f64>, rhs: f64) -> Self {
        Self::new(coefficients, Relation::Eq, rhs)
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        dot(&self.coefficients, x)
    }

    /// Amount by which `x` violates the row; zero when satisfied.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let g = self.activity(x);
        match self.relation {
            Relation::Le => (g - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - g).max(0.0),
            Relation::Eq => (g - self.rhs).abs(),
        }
    }
}

/// `sense objective · x` subject to `rows` and `x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub n_vars: usize,
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<f64>, rows: Vec<Row>) -> Self {
        Self {
            n_vars: objective.len(),
            sense,
            objective,
            rows,
        }
    }

    pub fn check(&self) -> Result<(), LpError> {
        if self.objective.len() != self.n_vars {
            return Err(LpError::MalformedProblem(format!(
                "objective has {} coefficients, expected {}",
                self.objective.len(),
                self.n_vars
            )));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::MalformedProblem(
                "objective has a non-finite coefficient".into(),
            ));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.coefficients.len() != self.n_vars {
                return Err(LpError::MalformedProblem(format!(
                    "row {i} has {} coefficients, expected {}",
                    row.coefficients.len(),
                    self.n_vars
                )));
            }
            if !row.rhs.is_finite() || row.coefficients.iter().any(|c| !c.is_finite()) {
                return Err(LpError::MalformedProblem(format!(
                    "row {i} has a non-finite entry"
                )));
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        dot(&self.objective, x)
    }

    /// Largest row violation or negative component of `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self
            .rows
            .iter()
            .map(|r| r.violation(x))
            .fold(0.0, f64::max);
        let bounds = x.iter().map(|&v| (-v).max(0.0)).fold(0.0, f64::max);
        rows.max(bounds)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Simplex pivots across both phases; zero for the vertex oracle.
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal(_) => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn solution(&self) -> Option<&LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn into_solution(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<f64> {
        self.solution().map(|s| s.value)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    MalformedProblem(String),
    #[error("vertex enumeration supports at most {limit} variables, got {n_vars}")]
    TooLarge { n_vars: usize, limit: usize },
    #[error("simplex did not terminate within {0} pivots")]
    IterationLimit(usize),
    #[error("simplex returned a point violating the constraints by {violation:e}")]
    NumericalFailure { violation: f64 },
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}
