use itertools::Itertools;

use super::{dot, LinearProgram, LpError, LpOutcome, LpSolution, Relation, Row};

/// Largest variable count [`enumerate_vertices`] accepts.
pub const MAX_ENUMERATION_VARS: usize = 10;

const SINGULAR_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-7;

/// Brute-force LP solve by visiting every basic point.
///
/// Each choice of `n` hyperplanes from the rows and the coordinate planes
/// `x_j = 0` is intersected; feasible intersections are the vertices of the
/// polyhedron (it is pointed because `x >= 0`). Unboundedness is decided on
/// the recession cone `{d >= 0 : A d (rel) 0}` normalized by `sum(d) = 1`,
/// whose vertices are its extreme rays.
pub fn enumerate_vertices(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.check()?;
    if lp.n_vars > MAX_ENUMERATION_VARS {
        return Err(LpError::TooLarge {
            n_vars: lp.n_vars,
            limit: MAX_ENUMERATION_VARS,
        });
    }
    let sign = lp.sense.sign();

    let Some(best) = polytope_vertices(lp.n_vars, &lp.rows)
        .into_iter()
        .map(|x| (sign * lp.evaluate(&x), x))
        .max_by(|a, b| a.0.total_cmp(&b.0))
    else {
        return Ok(LpOutcome::Infeasible);
    };

    let mut cone: Vec<Row> = lp
        .rows
        .iter()
        .map(|r| Row::new(r.coefficients.clone(), r.relation, 0.0))
        .collect();
    cone.push(Row::eq(vec![1.0; lp.n_vars], 1.0));
    let improving_ray = polytope_vertices(lp.n_vars, &cone)
        .iter()
        .any(|d| sign * dot(&lp.objective, d) > FEAS_TOL);
    if improving_ray {
        return Ok(LpOutcome::Unbounded);
    }

    let x = best.1;
    Ok(LpOutcome::Optimal(LpSolution {
        value: lp.evaluate(&x),
        x,
        iterations: 0,
    }))
}

/// All feasible basic points of `{x >= 0 : rows}`.
fn polytope_vertices(n: usize, rows: &[Row]) -> Vec<Vec<f64>> {
    if n == 0 {
        return Vec::new();
    }
    let planes: Vec<(Vec<f64>, f64)> = rows
        .iter()
        .map(|r| (r.coefficients.clone(), r.rhs))
        .chain((0..n).map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            (e, 0.0)
        }))
        .collect();

    let mut out = Vec::new();
    for active in (0..planes.len()).combinations(n) {
        let a: Vec<Vec<f64>> = active.iter().map(|&k| planes[k].0.clone()).collect();
        let b: Vec<f64> = active.iter().map(|&k| planes[k].1).collect();
        let Some(x) = solve_square(a, b) else { continue };
        if is_feasible(&x, rows) {
            out.push(x);
        }
    }
    out
}

fn is_feasible(x: &[f64], rows: &[Row]) -> bool {
    x.iter().all(|&v| v >= -FEAS_TOL)
        && rows.iter().all(|r| {
            let scale = 1.0 + r.rhs.abs() + r.coefficients.iter().map(|c| c.abs()).sum::<f64>();
            let g = r.activity(x);
            match r.relation {
                Relation::Le => g <= r.rhs + FEAS_TOL * scale,
                Relation::Ge => g >= r.rhs - FEAS_TOL * scale,
                Relation::Eq => (g - r.rhs).abs() <= FEAS_TOL * scale,
            }
        })
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flatten()
        .map(|v| v.abs())
        .fold(0.0, f64::max)
        .max(1.0);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= SINGULAR_TOL * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[r][k] -= f * a[col][k];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}
