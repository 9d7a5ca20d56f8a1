//! Problem files and result documents, both in JSON.
//!
//! A problem file looks like
//!
//! ```json
//! {
//!   "variables": ["x1", "x2"],
//!   "objectives": [
//!     {"name": "profit", "sense": "maximize", "coefficients": [3, 2], "goal": 12, "tolerance": 2}
//!   ],
//!   "constraints": [
//!     {"name": "capacity", "coefficients": [1, 1], "relation": "<=~", "rhs": 4, "tolerance": 1}
//!   ],
//!   "config": {"alpha_lower": 0.5}
//! }
//! ```
//!
//! Unknown keys are rejected anywhere in the document.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::case_study::ReproductionReport;
use crate::crisp::CompromiseSolution;
use crate::fuzzy::{FuzzySolution, SweepTable};
use crate::lp::Sense;
use crate::model::{
    validate, ConstraintRelation, DecisionProblem, FuzzyConstraint, Objective, SolverConfig,
    ValidationReport, WeightPolicy, WorstValuePolicy,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemFileError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid problem:\n{0}")]
    Validation(ValidationReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    variables: Vec<String>,
    objectives: Vec<ObjectiveEntry>,
    constraints: Vec<ConstraintEntry>,
    #[serde(default)]
    config: ConfigEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectiveEntry {
    name: String,
    sense: Sense,
    coefficients: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    goal: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintEntry {
    name: String,
    coefficients: Vec<f64>,
    relation: ConstraintRelation,
    rhs: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha_lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha_upper: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    worst_value_policy: Option<WorstValuePolicy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight_policy: Option<WeightPolicy>,
}

impl ProblemFile {
    fn into_model(self) -> (DecisionProblem, SolverConfig) {
        let objectives = self
            .objectives
            .into_iter()
            .map(|o| Objective {
                name: o.name,
                coefficients: o.coefficients,
                sense: o.sense,
                goal: o.goal,
                tolerance: o.tolerance,
                weight: o.weight,
            })
            .collect();
        let constraints = self
            .constraints
            .into_iter()
            .map(|c| FuzzyConstraint {
                name: c.name,
                coefficients: c.coefficients,
                relation: c.relation,
                rhs: c.rhs,
                tolerance: c.tolerance.unwrap_or(0.0),
                weight: c.weight,
            })
            .collect();
        let defaults = SolverConfig::default();
        let c = self.config;
        let cfg = SolverConfig {
            delta: c.delta.unwrap_or(defaults.delta),
            alpha_lower: c.alpha_lower.unwrap_or(defaults.alpha_lower),
            alpha_upper: c.alpha_upper.unwrap_or(defaults.alpha_upper),
            worst_value_policy: c.worst_value_policy.unwrap_or(defaults.worst_value_policy.clone()),
            weight_policy: c.weight_policy.unwrap_or(defaults.weight_policy),
            ..defaults
        };
        let problem = DecisionProblem {
            variable_names: self.variables,
            objectives,
            constraints,
        };
        (problem, cfg)
    }

    fn from_model(problem: &DecisionProblem, cfg: &SolverConfig) -> Self {
        let objectives = problem
            .objectives
            .iter()
            .map(|o| ObjectiveEntry {
                name: o.name.clone(),
                sense: o.sense,
                coefficients: o.coefficients.clone(),
                goal: o.goal,
                tolerance: o.tolerance,
                weight: o.weight,
            })
            .collect();
        let constraints = problem
            .constraints
            .iter()
            .map(|c| ConstraintEntry {
                name: c.name.clone(),
                coefficients: c.coefficients.clone(),
                relation: c.relation,
                rhs: c.rhs,
                tolerance: (c.relation.is_soft() || c.tolerance != 0.0).then_some(c.tolerance),
                weight: c.weight,
            })
            .collect();
        ProblemFile {
            variables: problem.variable_names.clone(),
            objectives,
            constraints,
            config: ConfigEntry {
                delta: Some(cfg.delta),
                alpha_lower: Some(cfg.alpha_lower),
                alpha_upper: Some(cfg.alpha_upper),
                worst_value_policy: Some(cfg.worst_value_policy.clone()),
                weight_policy: Some(cfg.weight_policy),
            },
        }
    }
}

/// Parses and validates a problem file.
///
/// Solver tolerances not present in the file keep their defaults.
pub fn parse_problem(text: &str) -> Result<(DecisionProblem, SolverConfig), ProblemFileError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: ProblemFile = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        match inner.classify() {
            serde_json::error::Category::Data => ProblemFileError::Schema {
                path,
                message: strip_position(&inner.to_string()),
            },
            _ => syntax_error(&inner),
        }
    })?;
    de.end().map_err(|e| syntax_error(&e))?;
    let (problem, cfg) = file.into_model();
    let report = validate(&problem, &cfg);
    if !report.is_ok() {
        return Err(ProblemFileError::Validation(report));
    }
    Ok((problem, cfg))
}

fn syntax_error(err: &serde_json::Error) -> ProblemFileError {
    ProblemFileError::Syntax {
        line: err.line(),
        column: err.column(),
        message: strip_position(&err.to_string()),
    }
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

/// Pretty-printed problem file; [`parse_problem`] reads it back exactly.
pub fn serialize_problem(problem: &DecisionProblem, cfg: &SolverConfig) -> String {
    let file = ProblemFile::from_model(problem, cfg);
    let mut text = serde_json::to_string_pretty(&file).expect("problem file serializes");
    text.push('\n');
    text
}

/// Hex SHA-256 of the canonical serialization, so whitespace and key order
/// in the source file do not matter.
pub fn problem_hash(problem: &DecisionProblem, cfg: &SolverConfig) -> String {
    hex::encode(Sha256::digest(serialize_problem(problem, cfg).as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResultPayload {
    Compromise(CompromiseSolution),
    Fuzzy(FuzzySolution),
    Sweep(SweepTable),
    CaseStudy(ReproductionReport),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultDocument {
    pub mode: String,
    pub problem_sha256: String,
    pub variables: Vec<String>,
    pub objectives: Vec<String>,
    pub config: SolverConfig,
    pub iterations: usize,
    pub wall_time_seconds: f64,
    pub result: ResultPayload,
}

impl ResultDocument {
    pub fn new(
        mode: impl Into<String>,
        problem: &DecisionProblem,
        cfg: &SolverConfig,
        result: ResultPayload,
        wall_time_seconds: f64,
    ) -> Self {
        let iterations = match &result {
            ResultPayload::Compromise(s) => s.iterations,
            ResultPayload::Fuzzy(s) => s.iterations,
            ResultPayload::Sweep(s) => s.iterations,
            ResultPayload::CaseStudy(r) => {
                r.crisp.as_ref().map_or(0, |s| s.iterations)
                    + r.fuzzy.as_ref().map_or(0, |s| s.iterations)
            }
        };
        Self {
            mode: mode.into(),
            problem_sha256: problem_hash(problem, cfg),
            variables: problem.variable_names.clone(),
            objectives: problem.objectives.iter().map(|o| o.name.clone()).collect(),
            config: cfg.clone(),
            iterations,
            wall_time_seconds,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("result document serializes");
        text.push('\n');
        text
    }
}
