//! Fuzzy multi-objective problem data and solver configuration.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{Relation, Row, Sense};

/// A linear objective, optionally carrying an aspiration level.
///
/// When both `goal` and `tolerance` are set the fuzzy solver uses the goal
/// form of the membership (1 at the goal, 0 one tolerance short of it).
#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub name: String,
    pub coefficients: Vec<f64>,
    pub sense: Sense,
    pub goal: Option<f64>,
    pub tolerance: Option<f64>,
    pub weight: Option<f64>,
}

impl Objective {
    pub fn new(name: impl Into<String>, sense: Sense, coefficients: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            coefficients,
            sense,
            goal: None,
            tolerance: None,
            weight: None,
        }
    }

    pub fn with_goal(mut self, goal: f64, tolerance: f64) -> Self {
        self.goal = Some(goal);
        self.tolerance = Some(tolerance);
        self
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = Some(weight);
        self
    }

    /// Goal and tolerance, when the objective is in goal form.
    pub fn goal_form(&self) -> Option<(f64, f64)> {
        self.goal.zip(self.tolerance)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        crate::lp::dot(&self.coefficients, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstraintRelation {
    #[serde(rename = "<=~")]
    SoftLe,
    #[serde(rename = ">=~")]
    SoftGe,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl ConstraintRelation {
    pub fn is_soft(self) -> bool {
        matches!(self, ConstraintRelation::SoftLe | ConstraintRelation::SoftGe)
    }

    /// The crisp relation read at the row's own right-hand side.
    pub fn hardened(self) -> Relation {
        match self {
            ConstraintRelation::SoftLe | ConstraintRelation::Le => Relation::Le,
            ConstraintRelation::SoftGe | ConstraintRelation::Ge => Relation::Ge,
            ConstraintRelation::Eq => Relation::Eq,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            ConstraintRelation::SoftLe => "<=~",
            ConstraintRelation::SoftGe => ">=~",
            ConstraintRelation::Le => "<=",
            ConstraintRelation::Ge => ">=",
            ConstraintRelation::Eq => "=",
        }
    }
}

impl fmt::Display for ConstraintRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A constraint row; soft relations may be violated by up to `tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyConstraint {
    pub name: String,
    pub coefficients: Vec<f64>,
    pub relation: ConstraintRelation,
    pub rhs: f64,
    /// Zero means the row is crisp even when its relation is soft.
    pub tolerance: f64,
    pub weight: Option<f64>,
}

impl FuzzyConstraint {
    pub fn new(
        name: impl Into<String>,
        coefficients: Vec<f64>,
        relation: ConstraintRelation,
        rhs: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            name: name.into(),
            coefficients,
            relation,
            rhs,
            tolerance,
            weight: None,
        }
    }

    /// True when the row carries a membership function of its own.
    pub fn has_membership(&self) -> bool {
        self.relation.is_soft() && self.tolerance > 0.0
    }

    /// The crisp row at relaxation level `theta` (0 = rhs `b`, 1 = `b ± d`).
    pub fn row_at(&self, theta: f64) -> Row {
        let rhs = match self.relation {
            ConstraintRelation::SoftLe => self.rhs + theta * self.tolerance,
            ConstraintRelation::SoftGe => self.rhs - theta * self.tolerance,
            _ => self.rhs,
        };
        Row::new(self.coefficients.clone(), self.relation.hardened(), rhs)
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        crate::lp::dot(&self.coefficients, x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionProblem {
    pub variable_names: Vec<String>,
    pub objectives: Vec<Objective>,
    pub constraints: Vec<FuzzyConstraint>,
}

impl DecisionProblem {
    pub fn n_vars(&self) -> usize {
        self.variable_names.len()
    }

    /// Every constraint as a crisp row at relaxation level `theta`.
    pub fn rows_at(&self, theta: f64) -> Vec<Row> {
        self.constraints.iter().map(|c| c.row_at(theta)).collect()
    }

    /// Soft relations or goal-form objectives are present.
    pub fn has_fuzzy_content(&self) -> bool {
        self.constraints.iter().any(|c| c.relation.is_soft())
            || self.objectives.iter().any(|o| o.goal_form().is_some())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorstValuePolicy {
    /// Every `z⁻` is taken as zero.
    Zero,
    /// `z⁻` is the objective optimized in the opposite sense.
    ComputedMin,
    UserSupplied(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightPolicy {
    EqualNormalized,
    AsGiven,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Weight of the membership sum next to `α` in augmented objectives.
    pub delta: f64,
    pub alpha_lower: f64,
    pub alpha_upper: f64,
    pub worst_value_policy: WorstValuePolicy,
    pub weight_policy: WeightPolicy,
    pub eps_feas: f64,
    pub eps_opt: f64,
    /// Relaxation level of the region over which fuzzy `z⁺` is computed.
    pub fuzzy_best_theta: f64,
    /// Relaxation level of the region over which fuzzy `z⁻` is computed.
    pub fuzzy_worst_theta: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            delta: 1e-4,
            alpha_lower: 0.0,
            alpha_upper: 1.0,
            worst_value_policy: WorstValuePolicy::Zero,
            weight_policy: WeightPolicy::EqualNormalized,
            eps_feas: 1e-9,
            eps_opt: 1e-9,
            fuzzy_best_theta: 1.0,
            fuzzy_worst_theta: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn has(&self, message: &str) -> bool {
        self.issues.iter().any(|i| i.message.contains(message))
    }

    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.issues.push(ValidationIssue {
            path: path.into(),
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

/// Checks every invariant of `problem` and `cfg`; never fails.
pub fn validate(problem: &DecisionProblem, cfg: &SolverConfig) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = problem.n_vars();

    if n == 0 {
        report.push("variables", "at least one variable required (n ≥ 1)");
    }
    for (i, name) in problem.variable_names.iter().enumerate() {
        if problem.variable_names[..i].contains(name) {
            report.push(format!("variables[{i}]"), format!("duplicate variable name {name:?}"));
        }
    }
    if problem.objectives.is_empty() {
        report.push("objectives", "at least one objective required (k ≥ 1)");
    }
    if problem.constraints.is_empty() {
        report.push("constraints", "at least one constraint required (m ≥ 1)");
    }

    for (i, obj) in problem.objectives.iter().enumerate() {
        let path = format!("objectives[{i}]");
        check_coefficients(&mut report, &path, &obj.coefficients, n);
        match (obj.goal, obj.tolerance) {
            (None, Some(_)) => report.push(format!("{path}.tolerance"), "tolerance without goal"),
            (_, Some(t)) if !(t.is_finite() && t > 0.0) => {
                report.push(format!("{path}.tolerance"), "tolerance must be positive")
            }
            _ => {}
        }
        if obj.goal.is_some_and(|g| !g.is_finite()) {
            report.push(format!("{path}.goal"), "goal must be finite");
        }
        check_weight(&mut report, &path, obj.weight);
    }

    for (j, con) in problem.constraints.iter().enumerate() {
        let path = format!("constraints[{j}]");
        check_coefficients(&mut report, &path, &con.coefficients, n);
        if !con.rhs.is_finite() {
            report.push(format!("{path}.rhs"), "rhs must be finite");
        }
        if !(con.tolerance.is_finite() && con.tolerance >= 0.0) {
            report.push(format!("{path}.tolerance"), "tolerance must be nonnegative");
        }
        check_weight(&mut report, &path, con.weight);
    }

    if !(cfg.delta.is_finite() && cfg.delta > 0.0) {
        report.push("config.delta", "delta must be positive");
    }
    for (name, v) in [("alpha_lower", cfg.alpha_lower), ("alpha_upper", cfg.alpha_upper)] {
        if !(0.0..=1.0).contains(&v) {
            report.push(format!("config.{name}"), "must lie in [0, 1]");
        }
    }
    if cfg.alpha_lower > cfg.alpha_upper {
        report.push("config.alpha_lower", "alpha_lower exceeds alpha_upper");
    }
    for (name, v) in [("eps_feas", cfg.eps_feas), ("eps_opt", cfg.eps_opt)] {
        if !(v.is_finite() && v > 0.0) {
            report.push(format!("config.{name}"), "tolerance must be positive");
        }
    }
    for (name, v) in [
        ("fuzzy_best_theta", cfg.fuzzy_best_theta),
        ("fuzzy_worst_theta", cfg.fuzzy_worst_theta),
    ] {
        if !(0.0..=1.0).contains(&v) {
            report.push(format!("config.{name}"), "must lie in [0, 1]");
        }
    }
    if let WorstValuePolicy::UserSupplied(values) = &cfg.worst_value_policy {
        if values.len() != problem.objectives.len() {
            report.push(
                "config.worst_value_policy",
                format!(
                    "dimension mismatch: {} worst values for {} objectives",
                    values.len(),
                    problem.objectives.len()
                ),
            );
        }
        if values.iter().any(|v| !v.is_finite()) {
            report.push("config.worst_value_policy", "worst values must be finite");
        }
    }
    if cfg.weight_policy == WeightPolicy::AsGiven
        && !problem.objectives.is_empty()
        && problem.objectives.iter().all(|o| o.weight == Some(0.0))
    {
        report.push("objectives", "all objective weights are zero");
    }

    report
}

fn check_coefficients(report: &mut ValidationReport, path: &str, coeffs: &[f64], n: usize) {
    if coeffs.len() != n {
        report.push(
            format!("{path}.coefficients"),
            format!("dimension mismatch: {} coefficients for {n} variables", coeffs.len()),
        );
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        report.push(format!("{path}.coefficients"), "coefficients must be finite");
    }
}

fn check_weight(report: &mut ValidationReport, path: &str, weight: Option<f64>) {
    if let Some(w) = weight {
        if !(w.is_finite() && w >= 0.0) {
            report.push(format!("{path}.weight"), "weight must be nonnegative");
        }
    }
}

/// Which memberships share the unit weight budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightScope {
    ObjectivesOnly,
    /// Objectives together with every constraint that has a membership.
    Joint,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightError {
    #[error("all participating weights are zero")]
    AllZeroWeights,
    #[error("weight {0} is negative or not finite")]
    InvalidWeight(f64),
}

/// Objective weights `w` and constraint weights `q`, summing jointly to one.
///
/// Constraints without a membership (hard rows, or soft rows with zero
/// tolerance) get `q = 0`, as do all constraints under
/// [`WeightScope::ObjectivesOnly`]. Under [`WeightPolicy::AsGiven`] a
/// missing weight counts as 1.
pub fn normalize_weights(
    problem: &DecisionProblem,
    cfg: &SolverConfig,
    scope: WeightScope,
) -> Result<(Vec<f64>, Vec<f64>), WeightError> {
    let participates: Vec<bool> = problem
        .constraints
        .iter()
        .map(|c| scope == WeightScope::Joint && c.has_membership())
        .collect();

    let raw = |weight: Option<f64>| -> Result<f64, WeightError> {
        match cfg.weight_policy {
            WeightPolicy::EqualNormalized => Ok(1.0),
            WeightPolicy::AsGiven => {
                let w = weight.unwrap_or(1.0);
                if w.is_finite() && w >= 0.0 {
                    Ok(w)
                } else {
                    Err(WeightError::InvalidWeight(w))
                }
            }
        }
    };

    let w = problem
        .objectives
        .iter()
        .map(|o| raw(o.weight))
        .collect::<Result<Vec<_>, _>>()?;
    let q = problem
        .constraints
        .iter()
        .zip(&participates)
        .map(|(c, &p)| if p { raw(c.weight) } else { Ok(0.0) })
        .collect::<Result<Vec<_>, _>>()?;

    let total: f64 = w.iter().chain(&q).sum();
    if total <= 0.0 {
        return Err(WeightError::AllZeroWeights);
    }
    Ok((
        w.into_iter().map(|v| v / total).collect(),
        q.into_iter().map(|v| v / total).collect(),
    ))
}
