use super::{LinearProgram, LpError, LpOutcome, LpSolution, Relation};
use crate::model::SolverConfig;

/// Smallest tableau entry accepted as a pivot.
const PIVOT_TOL: f64 = 1e-11;
/// Entry size below which a basic artificial variable cannot be pivoted out.
const DRIVE_OUT_TOL: f64 = 1e-9;

/// Solves `lp` with a dense two-phase simplex.
///
/// Entering columns follow Dantzig's largest-reduced-cost rule until a run
/// of `2 (n + m)` consecutive degenerate pivots is seen, after which Bland's
/// smallest-index rule takes over for the rest of the phase. The leaving row
/// always breaks ratio ties by smallest basic index.
pub fn solve(lp: &LinearProgram, cfg: &SolverConfig) -> Result<LpOutcome, LpError> {
    lp.check()?;
    let mut tableau = Tableau::new(lp);
    let limit = 1_000 + 100 * (tableau.rows.len() + tableau.ncols);

    if tableau.has_artificials() {
        tableau.load_phase_one_costs();
        match tableau.run(cfg.eps_opt, limit)? {
            PhaseEnd::Optimal => {}
            // Phase one is bounded below by zero.
            PhaseEnd::Unbounded => unreachable!("phase one objective is bounded"),
        }
        let scale = 1.0 + lp.rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);
        if tableau.artificial_mass() > cfg.eps_feas * scale {
            return Ok(LpOutcome::Infeasible);
        }
        tableau.drive_out_artificials();
    }

    tableau.load_phase_two_costs(lp);
    if let PhaseEnd::Unbounded = tableau.run(cfg.eps_opt, limit)? {
        return Ok(LpOutcome::Unbounded);
    }

    let x = tableau.primal(lp.n_vars);
    let violation = lp.max_violation(&x);
    if violation > cfg.eps_feas {
        return Err(LpError::NumericalFailure { violation });
    }
    Ok(LpOutcome::Optimal(LpSolution {
        value: lp.evaluate(&x),
        x,
        iterations: tableau.iterations,
    }))
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

struct Tableau {
    /// Constraint rows; the last entry of each is the right-hand side.
    rows: Vec<Vec<f64>>,
    /// Reduced costs for a maximization; the last entry is minus the objective.
    costs: Vec<f64>,
    basis: Vec<usize>,
    ncols: usize,
    artificial_start: usize,
    blocked: Vec<bool>,
    iterations: usize,
}

impl Tableau {
    fn new(lp: &LinearProgram) -> Self {
        let n = lp.n_vars;
        // Flip rows so every rhs is nonnegative.
        let normalized: Vec<(Vec<f64>, Relation, f64)> = lp
            .rows
            .iter()
            .map(|r| {
                if r.rhs < 0.0 {
                    let rel = match r.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (r.coefficients.iter().map(|c| -c).collect(), rel, -r.rhs)
                } else {
                    (r.coefficients.clone(), r.relation, r.rhs)
                }
            })
            .collect();

        let n_slack = normalized
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Eq)
            .count();
        let n_art = normalized
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Le)
            .count();
        let artificial_start = n + n_slack;
        let ncols = artificial_start + n_art;

        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let mut next_slack = n;
        let mut next_art = artificial_start;
        for (coeffs, rel, rhs) in normalized {
            let mut row = vec![0.0; ncols + 1];
            row[..n].copy_from_slice(&coeffs);
            row[ncols] = rhs;
            match rel {
                Relation::Le => {
                    row[next_slack] = 1.0;
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_art] = 1.0;
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = 1.0;
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }

        Self {
            rows,
            costs: vec![0.0; ncols + 1],
            basis,
            ncols,
            artificial_start,
            blocked: vec![false; ncols],
            iterations: 0,
        }
    }

    fn has_artificials(&self) -> bool {
        self.artificial_start < self.ncols
    }

    fn artificial_mass(&self) -> f64 {
        self.rows
            .iter()
            .zip(&self.basis)
            .filter(|(_, &b)| b >= self.artificial_start)
            .map(|(row, _)| row[self.ncols].max(0.0))
            .sum()
    }

    /// Maximize minus the sum of artificials.
    fn load_phase_one_costs(&mut self) {
        let cost: Vec<f64> = (0..self.ncols)
            .map(|j| if j >= self.artificial_start { -1.0 } else { 0.0 })
            .collect();
        self.price(&cost);
    }

    fn load_phase_two_costs(&mut self, lp: &LinearProgram) {
        let sign = lp.sense.sign();
        let mut cost = vec![0.0; self.ncols];
        for (c, &o) in cost.iter_mut().zip(&lp.objective) {
            *c = sign * o;
        }
        self.price(&cost);
    }

    fn price(&mut self, cost: &[f64]) {
        let rhs = self.ncols;
        let mut costs = vec![0.0; self.ncols + 1];
        costs[..self.ncols].copy_from_slice(cost);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost[b];
            if cb != 0.0 {
                for (z, &a) in costs[..self.ncols].iter_mut().zip(row) {
                    *z -= cb * a;
                }
                costs[rhs] -= cb * row[rhs];
            }
        }
        self.costs = costs;
    }

    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.artificial_start {
                let col = (0..self.artificial_start)
                    .find(|&j| !self.blocked[j] && self.rows[i][j].abs() > DRIVE_OUT_TOL);
                match col {
                    Some(j) => self.pivot(i, j),
                    None => {
                        // Redundant row: every structural entry vanished.
                        self.rows.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for j in self.artificial_start..self.ncols {
            self.blocked[j] = true;
        }
    }

    fn run(&mut self, eps_opt: f64, limit: usize) -> Result<PhaseEnd, LpError> {
        let stall_limit = 2 * (self.ncols + self.rows.len());
        let mut stalled = 0usize;
        let mut bland = false;
        loop {
            let Some(col) = self.entering(eps_opt, bland) else {
                return Ok(PhaseEnd::Optimal);
            };
            let Some((row, ratio)) = self.leaving(col) else {
                return Ok(PhaseEnd::Unbounded);
            };
            self.pivot(row, col);
            self.iterations += 1;
            if self.iterations > limit {
                return Err(LpError::IterationLimit(limit));
            }
            if ratio <= PIVOT_TOL {
                stalled += 1;
                if stalled > stall_limit {
                    bland = true;
                }
            } else {
                stalled = 0;
            }
        }
    }

    fn entering(&self, eps_opt: f64, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.ncols {
            let d = self.costs[j];
            if self.blocked[j] || d <= eps_opt {
                continue;
            }
            if bland {
                return Some(j);
            }
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((j, d));
            }
        }
        best.map(|(j, _)| j)
    }

    fn leaving(&self, col: usize) -> Option<(usize, f64)> {
        let rhs = self.ncols;
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            let a = row[col];
            if a <= PIVOT_TOL {
                continue;
            }
            let ratio = row[rhs].max(0.0) / a;
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                    if ratio < br && !tie || tie && self.basis[i] < self.basis[bi] {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        best
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let width = self.ncols + 1;
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        self.rows[r][c] = 1.0;
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for k in 0..width {
                    row[k] -= f * pivot_row[k];
                }
                row[c] = 0.0;
            }
        }
        let f = self.costs[c];
        if f != 0.0 {
            for k in 0..width {
                self.costs[k] -= f * pivot_row[k];
            }
            self.costs[c] = 0.0;
        }
        self.basis[r] = c;
    }

    fn primal(&self, n_vars: usize) -> Vec<f64> {
        let mut x = vec![0.0; n_vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < n_vars {
                x[b] = row[self.ncols];
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{Row, Sense};

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn single_binding_bound() {
        let lp = LinearProgram::new(Sense::Maximize, vec![1.0], vec![Row::le(vec![1.0], 1.0)]);
        let sol = solve(&lp, &cfg()).unwrap().into_solution().unwrap();
        assert_eq!(sol.x, vec![1.0]);
        assert_eq!(sol.value, 1.0);
    }

    #[test]
    fn no_rows() {
        let lp = LinearProgram::new(Sense::Minimize, vec![1.0, 2.0], vec![]);
        let sol = solve(&lp, &cfg()).unwrap().into_solution().unwrap();
        assert_eq!(sol.value, 0.0);
        let lp = LinearProgram::new(Sense::Maximize, vec![1.0, 0.0], vec![]);
        assert_eq!(solve(&lp, &cfg()).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram::new(Sense::Maximize, vec![1.0], vec![Row::le(vec![1.0], -1.0)]);
        assert_eq!(solve(&lp, &cfg()).unwrap(), LpOutcome::Infeasible);
        let lp = LinearProgram::new(
            Sense::Maximize,
            vec![1.0, 1.0],
            vec![Row::ge(vec![1.0, -1.0], 1.0)],
        );
        assert_eq!(solve(&lp, &cfg()).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_and_ge_rows() {
        // min 2x + 3y  s.t. x + y = 4, x >= 1, y >= 1
        let lp = LinearProgram::new(
            Sense::Minimize,
            vec![2.0, 3.0],
            vec![
                Row::eq(vec![1.0, 1.0], 4.0),
                Row::ge(vec![1.0, 0.0], 1.0),
                Row::ge(vec![0.0, 1.0], 1.0),
            ],
        );
        let sol = solve(&lp, &cfg()).unwrap().into_solution().unwrap();
        assert!((sol.value - 9.0).abs() < 1e-12);
        assert!((sol.x[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn redundant_equalities() {
        let lp = LinearProgram::new(
            Sense::Maximize,
            vec![1.0, 1.0],
            vec![
                Row::eq(vec![1.0, 1.0], 2.0),
                Row::eq(vec![2.0, 2.0], 4.0),
                Row::le(vec![1.0, 0.0], 1.5),
            ],
        );
        let sol = solve(&lp, &cfg()).unwrap().into_solution().unwrap();
        assert!((sol.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn classic_cycling_example_terminates() {
        // Beale's example cycles under the textbook Dantzig rule without safeguards.
        let lp = LinearProgram::new(
            Sense::Minimize,
            vec![-0.75, 150.0, -0.02, 6.0],
            vec![
                Row::le(vec![0.25, -60.0, -0.04, 9.0], 0.0),
                Row::le(vec![0.5, -90.0, -0.02, 3.0], 0.0),
                Row::le(vec![0.0, 0.0, 1.0, 0.0], 1.0),
            ],
        );
        let sol = solve(&lp, &cfg()).unwrap().into_solution().unwrap();
        assert!((sol.value + 0.05).abs() < 1e-9);
    }

    #[test]
    fn malformed_rows_rejected() {
        let lp = LinearProgram::new(Sense::Maximize, vec![1.0], vec![Row::le(vec![1.0, 2.0], 1.0)]);
        assert!(matches!(solve(&lp, &cfg()), Err(LpError::MalformedProblem(_))));
        let lp = LinearProgram::new(Sense::Maximize, vec![f64::NAN], vec![]);
        assert!(matches!(solve(&lp, &cfg()), Err(LpError::MalformedProblem(_))));
    }

    #[test]
    fn sense_duality_is_exact() {
        let rows = vec![
            Row::le(vec![1.0, 2.0, -1.0], 7.0),
            Row::ge(vec![3.0, -1.0, 2.0], 1.0),
            Row::le(vec![1.0, 1.0, 1.0], 5.0),
        ];
        let c = vec![1.5, -2.0, 0.5];
        let neg: Vec<f64> = c.iter().map(|v| -v).collect();
        let a = solve(&LinearProgram::new(Sense::Minimize, c, rows.clone()), &cfg()).unwrap();
        let b = solve(&LinearProgram::new(Sense::Maximize, neg, rows), &cfg()).unwrap();
        let (a, b) = (a.into_solution().unwrap(), b.into_solution().unwrap());
        assert_eq!(a.x, b.x);
        assert_eq!(a.value, -b.value);
    }
}
