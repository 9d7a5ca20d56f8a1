//! Fully fuzzy solves: goal-form objectives and tolerance-relaxed resources.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::auxiliary::{AuxObjective, AuxPoint, AuxiliaryProgram, MembershipTerm, SolveError};
use crate::crisp::{ensure_valid, ranges_over, satisfaction_partial, ObjectiveRange};
use crate::membership::{MembershipSpec, SoftRelation};
use crate::model::{
    normalize_weights, ConstraintRelation, DecisionProblem, FuzzyConstraint, SolverConfig,
    WeightScope,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzySolution {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub mu_obj: Vec<f64>,
    /// Membership of each constraint that has one; `None` for crisp rows.
    pub mu_con: Vec<Option<f64>>,
    /// Smallest membership over objectives and soft constraints.
    pub alpha: f64,
    pub lp_alpha: f64,
    pub phi: Vec<Option<f64>>,
    /// Fraction of each soft tolerance consumed at `x`.
    pub slack_report: Vec<Option<f64>>,
    pub ranges: Vec<ObjectiveRange>,
    pub iterations: usize,
}

/// Copy of `problem` with each soft rhs moved `theta` tolerances outward and
/// every relation hardened.
pub fn relax(problem: &DecisionProblem, theta: f64) -> DecisionProblem {
    let constraints = problem
        .constraints
        .iter()
        .map(|c| {
            let row = c.row_at(theta);
            let relation = match c.relation {
                ConstraintRelation::SoftLe => ConstraintRelation::Le,
                ConstraintRelation::SoftGe => ConstraintRelation::Ge,
                other => other,
            };
            FuzzyConstraint {
                relation,
                rhs: row.rhs,
                tolerance: 0.0,
                ..c.clone()
            }
        })
        .collect();
    DecisionProblem {
        constraints,
        ..problem.clone()
    }
}

/// Ranges with `z⁺` over the relaxed region and `z⁻` over the crisp one
/// (levels set by `cfg.fuzzy_best_theta` / `cfg.fuzzy_worst_theta`).
pub fn fuzzy_individual_optima(
    problem: &DecisionProblem,
    cfg: &SolverConfig,
) -> Result<Vec<ObjectiveRange>, SolveError> {
    ensure_valid(problem, cfg)?;
    Ok(ranges_over(problem, cfg, cfg.fuzzy_best_theta, cfg.fuzzy_worst_theta)?.0)
}

fn objective_spec(problem: &DecisionProblem, i: usize, range: &ObjectiveRange) -> Option<MembershipSpec> {
    let obj = &problem.objectives[i];
    match obj.goal_form() {
        Some((goal, tolerance)) => Some(MembershipSpec::ObjectiveGoal {
            goal,
            tolerance,
            sense: obj.sense,
        }),
        None => range.membership(),
    }
}

fn constraint_spec(c: &FuzzyConstraint) -> Option<MembershipSpec> {
    if !c.has_membership() {
        return None;
    }
    let relation = match c.relation {
        ConstraintRelation::SoftLe => SoftRelation::Le,
        _ => SoftRelation::Ge,
    };
    Some(MembershipSpec::ConstraintSoft {
        rhs: c.rhs,
        tolerance: c.tolerance,
        relation,
    })
}

fn fuzzy_program(
    problem: &DecisionProblem,
    cfg: &SolverConfig,
    ranges: &[ObjectiveRange],
) -> Result<AuxiliaryProgram, SolveError> {
    let (w, q) = normalize_weights(problem, cfg, WeightScope::Joint)?;
    let mut terms = Vec::new();
    for (i, (range, &weight)) in ranges.iter().zip(&w).enumerate() {
        if let Some(spec) = objective_spec(problem, i, range) {
            terms.push(MembershipTerm {
                spec,
                coefficients: problem.objectives[i].coefficients.clone(),
                weight,
            });
        }
    }
    let mut hard_rows = Vec::new();
    for (c, &weight) in problem.constraints.iter().zip(&q) {
        match constraint_spec(c) {
            Some(spec) => terms.push(MembershipTerm {
                spec,
                coefficients: c.coefficients.clone(),
                weight,
            }),
            None => hard_rows.push(c.row_at(0.0)),
        }
    }
    Ok(AuxiliaryProgram {
        n_vars: problem.n_vars(),
        terms,
        hard_rows,
    })
}

fn assemble(
    problem: &DecisionProblem,
    ranges: Vec<ObjectiveRange>,
    point: AuxPoint,
    iterations: usize,
) -> Result<FuzzySolution, SolveError> {
    let x = point.x;
    let z: Vec<f64> = problem.objectives.iter().map(|o| o.value(&x)).collect();
    let mut alpha = 1.0f64;
    let mut mu_obj = Vec::with_capacity(z.len());
    for (i, range) in ranges.iter().enumerate() {
        match objective_spec(problem, i, range) {
            Some(spec) => {
                let m = spec.eval(z[i])?;
                alpha = alpha.min(m);
                mu_obj.push(m);
            }
            None => mu_obj.push(1.0),
        }
    }
    let mut mu_con = Vec::with_capacity(problem.constraints.len());
    let mut slack_report = Vec::with_capacity(problem.constraints.len());
    for c in &problem.constraints {
        match constraint_spec(c) {
            Some(spec) => {
                let g = c.activity(&x);
                let m = spec.eval(g)?;
                alpha = alpha.min(m);
                mu_con.push(Some(m));
                let excess = match c.relation {
                    ConstraintRelation::SoftLe => g - c.rhs,
                    _ => c.rhs - g,
                };
                slack_report.push(Some(excess.max(0.0) / c.tolerance));
            }
            None => {
                mu_con.push(None);
                slack_report.push(None);
            }
        }
    }
    let phi = satisfaction_partial(&z, &ranges);
    Ok(FuzzySolution {
        x,
        z,
        mu_obj,
        mu_con,
        alpha,
        lp_alpha: point.lp_alpha,
        phi,
        slack_report,
        ranges,
        iterations,
    })
}

/// Maximizes `α + δ [Σ wᵢ μᵢ + Σ qⱼ μⱼ]` with every objective and soft
/// constraint membership at least `α`.
///
/// Objectives with a goal and tolerance use the goal form; the others ramp
/// between their fuzzy individual worst and best values.
pub fn solve_fuzzy_augmented(
    problem: &DecisionProblem,
    cfg: &SolverConfig,
) -> Result<FuzzySolution, SolveError> {
    ensure_valid(problem, cfg)?;
    if !problem.has_fuzzy_content() {
        return Err(SolveError::NoFuzzyContent);
    }
    let (ranges, iterations) =
        ranges_over(problem, cfg, cfg.fuzzy_best_theta, cfg.fuzzy_worst_theta)?;
    let program = fuzzy_program(problem, cfg, &ranges)?;
    let point = program
        .solve(
            cfg,
            AuxObjective {
                alpha_lower: cfg.alpha_lower,
                alpha_upper: cfg.alpha_upper,
                alpha_coef: 1.0,
                sum_coef: cfg.delta,
            },
        )?
        .ok_or(SolveError::InfeasibleAtAlphaLower {
            alpha_lower: cfg.alpha_lower,
        })?;
    let iterations = iterations + point.iterations;
    assemble(problem, ranges, point, iterations)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub feasible: bool,
    pub x: Option<Vec<f64>>,
    pub z: Option<Vec<f64>>,
    pub phi: Option<Vec<Option<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub ranges: Vec<ObjectiveRange>,
    pub iterations: usize,
}

impl SweepTable {
    /// Largest feasible grid level, if any.
    pub fn max_feasible_alpha(&self) -> Option<f64> {
        self.rows.iter().rev().find(|r| r.feasible).map(|r| r.alpha)
    }
}

/// Solves at each fixed acceptability level in `grid`, maximizing the
/// weighted membership sum with every membership at least that level.
pub fn alpha_sweep(
    problem: &DecisionProblem,
    cfg: &SolverConfig,
    grid: &[f64],
) -> Result<SweepTable, SolveError> {
    if grid.is_empty() {
        return Err(SolveError::EmptyGrid);
    }
    if let Some(a) = grid.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return Err(SolveError::InvalidGrid(format!("{a} lies outside [0, 1]")));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(SolveError::InvalidGrid("levels must be ascending".into()));
    }
    ensure_valid(problem, cfg)?;
    let (ranges, base_iterations) =
        ranges_over(problem, cfg, cfg.fuzzy_best_theta, cfg.fuzzy_worst_theta)?;
    let program = fuzzy_program(problem, cfg, &ranges)?;

    let points: Vec<Result<Option<AuxPoint>, SolveError>> = grid
        .par_iter()
        .map(|&level| {
            program.solve(
                cfg,
                AuxObjective {
                    alpha_lower: level,
                    alpha_upper: level,
                    alpha_coef: 0.0,
                    sum_coef: cfg.delta,
                },
            )
        })
        .collect();

    let mut iterations = base_iterations;
    let mut rows = Vec::with_capacity(grid.len());
    for (&level, point) in grid.iter().zip(points) {
        rows.push(match point? {
            Some(p) => {
                iterations += p.iterations;
                let z: Vec<f64> = problem.objectives.iter().map(|o| o.value(&p.x)).collect();
                let phi = satisfaction_partial(&z, &ranges);
                SweepRow {
                    alpha: level,
                    feasible: true,
                    x: Some(p.x),
                    z: Some(z),
                    phi: Some(phi),
                }
            }
            None => SweepRow {
                alpha: level,
                feasible: false,
                x: None,
                z: None,
                phi: None,
            },
        });
    }
    Ok(SweepTable {
        rows,
        ranges,
        iterations,
    })
}
