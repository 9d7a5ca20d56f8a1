//! Multi-objective solves over the crisp feasible set.
//!
//! Soft constraints are read at their right-hand side with the tolerance
//! ignored; only the objectives are fuzzified, as linear ramps between each
//! objective's individual worst and best values.

use serde::{Deserialize, Serialize};

use crate::auxiliary::{AuxObjective, AuxiliaryProgram, MembershipTerm, SolveError};
use crate::lp::{self, LinearProgram, LpOutcome, Sense};
use crate::membership::MembershipSpec;
use crate::model::{
    normalize_weights, validate, DecisionProblem, SolverConfig, WeightScope, WorstValuePolicy,
};

/// Individual best (`z_plus`) and worst (`z_minus`) value of one objective.
///
/// "Best" follows the objective's sense, so for a minimization objective
/// `z_plus <= z_minus`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveRange {
    pub sense: Sense,
    pub z_plus: f64,
    pub z_minus: f64,
    pub argmax_x: Vec<f64>,
    pub argmin_x: Option<Vec<f64>>,
}

impl ObjectiveRange {
    pub fn is_degenerate(&self) -> bool {
        (self.z_plus - self.z_minus).abs() <= 1e-9 * (1.0 + self.z_plus.abs())
    }

    /// Ramp membership; `None` for a degenerate range.
    pub fn membership(&self) -> Option<MembershipSpec> {
        (!self.is_degenerate()).then_some(MembershipSpec::ObjectiveRange {
            worst: self.z_minus,
            best: self.z_plus,
            sense: self.sense,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompromiseMode {
    MaxMin,
    TwoPhase,
    Augmented,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompromiseSolution {
    pub mode: CompromiseMode,
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    /// Per-objective membership; degenerate ranges report 1.
    pub mu: Vec<f64>,
    /// Smallest membership over objectives with a nondegenerate range.
    pub alpha: f64,
    /// Value of the `α` column in the final auxiliary program.
    pub lp_alpha: f64,
    /// `zᵢ / zᵢ⁺`; `None` where `zᵢ⁺ = 0`.
    pub phi: Vec<Option<f64>>,
    pub ranges: Vec<ObjectiveRange>,
    pub iterations: usize,
}

pub(crate) fn ensure_valid(problem: &DecisionProblem, cfg: &SolverConfig) -> Result<(), SolveError> {
    let report = validate(problem, cfg);
    if report.is_ok() {
        Ok(())
    } else {
        Err(SolveError::Invalid(report))
    }
}

/// Individual best and worst values over the crisp feasible set.
pub fn individual_optima(
    problem: &DecisionProblem,
    cfg: &SolverConfig,
) -> Result<Vec<ObjectiveRange>, SolveError> {
    ensure_valid(problem, cfg)?;
    Ok(ranges_over(problem, cfg, 0.0, 0.0)?.0)
}

/// Ranges with `z⁺` over the region relaxed to `best_theta` and `z⁻` over
/// the region relaxed to `worst_theta`. Also returns the simplex pivot count.
pub(crate) fn ranges_over(
    problem: &DecisionProblem,
    cfg: &SolverConfig,
    best_theta: f64,
    worst_theta: f64,
) -> Result<(Vec<ObjectiveRange>, usize), SolveError> {
    let best_rows = problem.rows_at(best_theta);
    let worst_rows = problem.rows_at(worst_theta);
    let mut iterations = 0;
    let mut optimize = |coeffs: &[f64], sense: Sense, rows, name: &str| {
        let lp = LinearProgram::new(sense, coeffs.to_vec(), rows);
        match lp::solve(&lp, cfg)? {
            LpOutcome::Optimal(sol) => {
                iterations += sol.iterations;
                Ok(sol)
            }
            LpOutcome::Infeasible => Err(SolveError::InfeasibleProblem),
            LpOutcome::Unbounded => Err(SolveError::UnboundedObjective {
                objective: name.to_string(),
            }),
        }
    };

    let mut ranges = Vec::with_capacity(problem.objectives.len());
    for (i, obj) in problem.objectives.iter().enumerate() {
        let best = optimize(&obj.coefficients, obj.sense, best_rows.clone(), &obj.name)?;
        let (z_minus, argmin_x) = match &cfg.worst_value_policy {
            WorstValuePolicy::Zero => (0.0, None),
            WorstValuePolicy::UserSupplied(values) => (values[i], None),
            WorstValuePolicy::ComputedMin => {
                let worst = optimize(
                    &obj.coefficients,
                    obj.sense.opposite(),
                    worst_rows.clone(),
                    &obj.name,
                )?;
                (worst.value, Some(worst.x))
            }
        };
        let range = ObjectiveRange {
            sense: obj.sense,
            z_plus: best.value,
            z_minus,
            argmax_x: best.x,
            argmin_x,
        };
        if !range.is_degenerate() && obj.sense.sign() * (range.z_plus - range.z_minus) < 0.0 {
            return Err(SolveError::InvertedRamp {
                objective: obj.name.clone(),
                best: range.z_plus,
                worst: range.z_minus,
            });
        }
        ranges.push(range);
    }
    Ok((ranges, iterations))
}

/// `φᵢ = zᵢ / zᵢ⁺`.
pub fn satisfaction(z: &[f64], ranges: &[ObjectiveRange]) -> Result<Vec<f64>, SolveError> {
    z.iter()
        .zip(ranges)
        .enumerate()
        .map(|(i, (&zi, r))| {
            if r.z_plus == 0.0 {
                Err(SolveError::ZeroBestValue {
                    objective: format!("#{i}"),
                })
            } else {
                Ok(zi / r.z_plus)
            }
        })
        .collect()
}

fn crisp_program(
    problem: &DecisionProblem,
    ranges: &[ObjectiveRange],
    weights: &[f64],
) -> AuxiliaryProgram {
    let terms = problem
        .objectives
        .iter()
        .zip(ranges)
        .zip(weights)
        .filter_map(|((obj, range), &weight)| {
            range.membership().map(|spec| MembershipTerm {
                spec,
                coefficients: obj.coefficients.clone(),
                weight,
            })
        })
        .collect();
    AuxiliaryProgram {
        n_vars: problem.n_vars(),
        terms,
        hard_rows: problem.rows_at(0.0),
    }
}

fn assemble(
    problem: &DecisionProblem,
    ranges: Vec<ObjectiveRange>,
    mode: CompromiseMode,
    x: Vec<f64>,
    lp_alpha: f64,
    iterations: usize,
) -> Result<CompromiseSolution, SolveError> {
    let z: Vec<f64> = problem.objectives.iter().map(|o| o.value(&x)).collect();
    let mut mu = Vec::with_capacity(z.len());
    let mut alpha = 1.0f64;
    for (zi, range) in z.iter().zip(&ranges) {
        match range.membership() {
            Some(spec) => {
                let m = spec.eval(*zi)?;
                alpha = alpha.min(m);
                mu.push(m);
            }
            None => mu.push(1.0),
        }
    }
    let phi = satisfaction_partial(&z, &ranges);
    Ok(CompromiseSolution {
        mode,
        x,
        z,
        mu,
        alpha,
        lp_alpha,
        phi,
        ranges,
        iterations,
    })
}

pub(crate) fn satisfaction_partial(z: &[f64], ranges: &[ObjectiveRange]) -> Vec<Option<f64>> {
    z.iter()
        .zip(ranges)
        .map(|(&zi, r)| (r.z_plus != 0.0).then(|| zi / r.z_plus))
        .collect()
}

fn solve_with(
    problem: &DecisionProblem,
    cfg: &SolverConfig,
    mode: CompromiseMode,
) -> Result<CompromiseSolution, SolveError> {
    ensure_valid(problem, cfg)?;
    let (ranges, mut iterations) = ranges_over(problem, cfg, 0.0, 0.0)?;
    let (weights, _) = normalize_weights(problem, cfg, WeightScope::ObjectivesOnly)?;
    let program = crisp_program(problem, &ranges, &weights);
    let sum_coef = match mode {
        CompromiseMode::Augmented => cfg.delta,
        _ => 0.0,
    };
    let point = program
        .solve(
            cfg,
            AuxObjective {
                alpha_lower: cfg.alpha_lower,
                alpha_upper: cfg.alpha_upper,
                alpha_coef: 1.0,
                sum_coef,
            },
        )?
        .ok_or(SolveError::InfeasibleAtAlphaLower {
            alpha_lower: cfg.alpha_lower,
        })?;
    iterations += point.iterations;
    assemble(problem, ranges, mode, point.x, point.lp_alpha, iterations)
}

/// Maximizes `α` subject to every objective membership being at least `α`.
pub fn solve_maxmin(
    problem: &DecisionProblem,
    cfg: &SolverConfig,
) -> Result<CompromiseSolution, SolveError> {
    solve_with(problem, cfg, CompromiseMode::MaxMin)
}

/// Maximizes `α + δ Σ wᵢ μᵢ(x)` over the max-min feasible set.
pub fn solve_augmented(
    problem: &DecisionProblem,
    cfg: &SolverConfig,
) -> Result<CompromiseSolution, SolveError> {
    solve_with(problem, cfg, CompromiseMode::Augmented)
}

/// Max-min solve followed by maximizing the mean membership while keeping
/// every membership at least the phase-one `α`.
pub fn two_phase_refine(
    problem: &DecisionProblem,
    cfg: &SolverConfig,
) -> Result<CompromiseSolution, SolveError> {
    let first = solve_maxmin(problem, cfg)?;
    let active = first.ranges.iter().filter(|r| !r.is_degenerate()).count();
    if active == 0 {
        return Ok(CompromiseSolution {
            mode: CompromiseMode::TwoPhase,
            ..first
        });
    }
    let mean_weights = vec![1.0 / active as f64; problem.objectives.len()];
    let program = crisp_program(problem, &first.ranges, &mean_weights);
    let floor = (first.lp_alpha - cfg.eps_feas).max(0.0);
    let point = program
        .solve(
            cfg,
            AuxObjective {
                alpha_lower: floor,
                alpha_upper: cfg.alpha_upper.max(floor),
                alpha_coef: 0.0,
                sum_coef: 1.0,
            },
        )?
        .ok_or(SolveError::InfeasibleAtAlphaLower { alpha_lower: floor })?;
    let iterations = first.iterations + point.iterations;
    assemble(
        problem,
        first.ranges,
        CompromiseMode::TwoPhase,
        point.x,
        point.lp_alpha,
        iterations,
    )
}
