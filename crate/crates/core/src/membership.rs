//! Linear membership functions and their LP linearizations.
//!
//! Each [`MembershipSpec`] maps the value of a linear expression to a
//! satisfaction degree in `[0, 1]`. The same spec also yields the affine
//! form `μ(x) = g·x + h` used in augmented objectives and the row encoding
//! `μ(expr(x)) ≥ α` used in auxiliary programs.

use thiserror::Error;

use crate::lp::{Relation, Row, Sense};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoftRelation {
    Le,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MembershipSpec {
    /// Ramp from the worst value (μ = 0) to the best value (μ = 1).
    ObjectiveRange { worst: f64, best: f64, sense: Sense },
    /// μ = 1 at the goal, 0 one tolerance short of it.
    ObjectiveGoal { goal: f64, tolerance: f64, sense: Sense },
    /// μ = 1 up to the rhs, 0 one tolerance beyond it.
    ConstraintSoft {
        rhs: f64,
        tolerance: f64,
        relation: SoftRelation,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MembershipError {
    #[error("invalid membership: {0}")]
    InvalidSpec(String),
}

impl MembershipSpec {
    pub fn check(&self) -> Result<(), MembershipError> {
        let bad = |msg: String| Err(MembershipError::InvalidSpec(msg));
        match *self {
            MembershipSpec::ObjectiveRange { worst, best, sense } => {
                if !(worst.is_finite() && best.is_finite()) {
                    return bad("range endpoints must be finite".into());
                }
                if sense.sign() * (best - worst) <= 0.0 {
                    return bad(format!(
                        "best value {best} is not strictly better than worst value {worst}"
                    ));
                }
            }
            MembershipSpec::ObjectiveGoal { goal, tolerance, .. } => {
                if !goal.is_finite() || !(tolerance.is_finite() && tolerance > 0.0) {
                    return bad(format!("goal {goal} with tolerance {tolerance}"));
                }
            }
            MembershipSpec::ConstraintSoft { rhs, tolerance, .. } => {
                if !rhs.is_finite() || !(tolerance.is_finite() && tolerance > 0.0) {
                    return bad(format!("soft row at {rhs} with tolerance {tolerance}"));
                }
            }
        }
        Ok(())
    }

    /// `(scale, offset)` with unclamped `μ(v) = scale · v + offset`.
    fn affine(&self) -> (f64, f64) {
        match *self {
            MembershipSpec::ObjectiveRange { worst, best, .. } => {
                let width = best - worst;
                (1.0 / width, -worst / width)
            }
            MembershipSpec::ObjectiveGoal {
                goal,
                tolerance,
                sense,
            } => {
                // max: 1 − (z⁰ − z)/t ; min: 1 − (z − z⁰)/t
                let s = sense.sign();
                (s / tolerance, 1.0 - s * goal / tolerance)
            }
            MembershipSpec::ConstraintSoft {
                rhs,
                tolerance,
                relation,
            } => match relation {
                SoftRelation::Le => (-1.0 / tolerance, 1.0 + rhs / tolerance),
                SoftRelation::Ge => (1.0 / tolerance, 1.0 - rhs / tolerance),
            },
        }
    }

    /// Membership of an expression value, clamped to `[0, 1]`.
    pub fn eval(&self, value: f64) -> Result<f64, MembershipError> {
        self.check()?;
        let (a, b) = self.affine();
        Ok((a * value + b).clamp(0.0, 1.0))
    }

    /// Coefficients `g` and constant `h` of the unclamped `μ(x) = g·x + h`.
    pub fn linear_form(&self, coefficients: &[f64]) -> Result<(Vec<f64>, f64), MembershipError> {
        self.check()?;
        let (a, b) = self.affine();
        Ok((coefficients.iter().map(|c| a * c).collect(), b))
    }

    /// Rows over `(x, α)` equivalent to `μ(coefficients · x) ≥ α`.
    ///
    /// Columns beyond `coefficients` are zero except the one at
    /// `alpha_index`; the row width is `max(coefficients.len(), alpha_index + 1)`.
    pub fn as_lp_rows(
        &self,
        coefficients: &[f64],
        alpha_index: usize,
    ) -> Result<Vec<Row>, MembershipError> {
        self.check()?;
        if alpha_index < coefficients.len() && coefficients[alpha_index] != 0.0 {
            return Err(MembershipError::InvalidSpec(format!(
                "alpha column {alpha_index} overlaps a nonzero coefficient"
            )));
        }
        let width = coefficients.len().max(alpha_index + 1);
        let mut coeffs = vec![0.0; width];
        coeffs[..coefficients.len()].copy_from_slice(coefficients);

        let (relation, alpha_coef, rhs) = match *self {
            // c·x − (z⁺ − z⁻)α ≥ z⁻ ; flips for minimization because z⁺ < z⁻.
            MembershipSpec::ObjectiveRange { worst, best, sense } => match sense {
                Sense::Maximize => (Relation::Ge, -(best - worst), worst),
                Sense::Minimize => (Relation::Le, worst - best, worst),
            },
            MembershipSpec::ObjectiveGoal {
                goal,
                tolerance,
                sense,
            } => match sense {
                Sense::Maximize => (Relation::Ge, -tolerance, goal - tolerance),
                Sense::Minimize => (Relation::Le, tolerance, goal + tolerance),
            },
            MembershipSpec::ConstraintSoft {
                rhs,
                tolerance,
                relation,
            } => match relation {
                SoftRelation::Le => (Relation::Le, tolerance, rhs + tolerance),
                SoftRelation::Ge => (Relation::Ge, -tolerance, rhs - tolerance),
            },
        };
        coeffs[alpha_index] = alpha_coef;
        Ok(vec![Row::new(coeffs, relation, rhs)])
    }
}
