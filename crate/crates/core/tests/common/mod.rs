//! Seeded instance generators, independent oracles and property checks
//! shared by the integration and acceptance tests.

#![allow(dead_code)]

use fuzzylp::case_study::{concrete_plant_dataset, CaseStudyVariant};
use fuzzylp::io::{parse_problem, serialize_problem};
use fuzzylp::lp::{enumerate_vertices, solve, LinearProgram, LpOutcome, Relation, Row, Sense};
use fuzzylp::membership::{MembershipSpec, SoftRelation};
use fuzzylp::model::{
    ConstraintRelation, DecisionProblem, FuzzyConstraint, Objective, SolverConfig,
    WorstValuePolicy,
};
use fuzzylp::{
    alpha_sweep, individual_optima, solve_augmented, solve_fuzzy_augmented, solve_maxmin, SolveError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<String, String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * 1f64.max(a.abs()).max(b.abs())
}

// ---------------------------------------------------------------- LPs

pub fn random_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(1..=8);
    let int = |rng: &mut ChaCha8Rng| rng.gen_range(-9..=9) as f64;
    let rows = (0..m)
        .map(|_| {
            let coeffs: Vec<f64> = (0..n).map(|_| int(rng)).collect();
            let relation = match rng.gen_range(0..20) {
                0..=11 => Relation::Le,
                12..=16 => Relation::Ge,
                _ => Relation::Eq,
            };
            let rhs = match relation {
                Relation::Le => rng.gen_range(0..=20),
                _ => rng.gen_range(-5..=10),
            } as f64;
            Row::new(coeffs, relation, rhs)
        })
        .collect();
    let sense = if rng.gen_bool(0.5) {
        Sense::Maximize
    } else {
        Sense::Minimize
    };
    let objective = (0..n).map(|_| int(rng)).collect();
    LinearProgram::new(sense, objective, rows)
}

/// Simplex against vertex enumeration on `count` seeded LPs.
pub fn lp_oracle_agreement(seed: u64, count: usize) -> Check {
    let cfg = SolverConfig::default();
    let mut r = rng(seed);
    let mut tally = [0usize; 3];
    for i in 0..count {
        let lp = random_lp(&mut r);
        let got = solve(&lp, &cfg).map_err(|e| format!("instance {i}: simplex error {e}"))?;
        let want = enumerate_vertices(&lp).map_err(|e| format!("instance {i}: oracle error {e}"))?;
        match (&got, &want) {
            (LpOutcome::Optimal(a), LpOutcome::Optimal(b)) => {
                if !close(a.value, b.value, 1e-6) {
                    return Err(format!(
                        "instance {i}: value {} vs oracle {}\n{lp:?}",
                        a.value, b.value
                    ));
                }
                if lp.max_violation(&a.x) > 1e-7 {
                    return Err(format!("instance {i}: simplex point infeasible"));
                }
                tally[0] += 1;
            }
            (LpOutcome::Infeasible, LpOutcome::Infeasible) => tally[1] += 1,
            (LpOutcome::Unbounded, LpOutcome::Unbounded) => tally[2] += 1,
            _ => {
                return Err(format!(
                    "instance {i}: status {:?} vs oracle {:?}\n{lp:?}",
                    got.status(),
                    want.status()
                ))
            }
        }
    }
    Ok(format!(
        "{count} LPs agree ({} optimal, {} infeasible, {} unbounded)",
        tally[0], tally[1], tally[2]
    ))
}

// ---------------------------------------------------------------- multi-objective instances

/// Bounded crisp instance: nonnegative rows with positive rhs, objectives of
/// either sense.
pub fn random_momp(rng: &mut ChaCha8Rng, n: usize) -> DecisionProblem {
    let k = rng.gen_range(2..=3);
    let m = rng.gen_range(1..=4);
    let objectives = (0..k)
        .map(|i| {
            let sense = if rng.gen_bool(0.75) {
                Sense::Maximize
            } else {
                Sense::Minimize
            };
            let coeffs = (0..n).map(|_| rng.gen_range(-3.0..9.0)).collect();
            Objective::new(format!("z{i}"), sense, coeffs)
        })
        .collect();
    let mut constraints: Vec<FuzzyConstraint> = (0..m)
        .map(|j| {
            let coeffs = (0..n).map(|_| rng.gen_range(0.0..6.0)).collect();
            let rhs = rng.gen_range(5.0..40.0);
            FuzzyConstraint::new(format!("r{j}"), coeffs, ConstraintRelation::Le, rhs, 0.0)
        })
        .collect();
    // Keeps the region bounded whatever the random rows are.
    constraints.push(FuzzyConstraint::new(
        "box",
        vec![1.0; n],
        ConstraintRelation::Le,
        rng.gen_range(5.0..30.0),
        0.0,
    ));
    DecisionProblem {
        variable_names: (0..n).map(|j| format!("x{j}")).collect(),
        objectives,
        constraints,
    }
}

fn intersect(a: (f64, f64, f64), b: (f64, f64, f64)) -> Option<(f64, f64)> {
    let det = a.0 * b.1 - a.1 * b.0;
    if det.abs() < 1e-12 {
        return None;
    }
    Some(((a.2 * b.1 - a.1 * b.2) / det, (a.0 * b.2 - a.2 * b.0) / det))
}

fn feasible_2d(p: &DecisionProblem, x: (f64, f64)) -> bool {
    let pt = [x.0, x.1];
    x.0 >= -1e-9
        && x.1 >= -1e-9
        && p
            .constraints
            .iter()
            .all(|c| c.row_at(0.0).violation(&pt) <= 1e-9 * (1.0 + c.rhs.abs()))
}

/// Affine `μᵢ` before clamping, from oracle-computed ramp endpoints.
struct Ramp {
    g: (f64, f64),
    h: f64,
}

impl Ramp {
    fn at(&self, x: (f64, f64)) -> f64 {
        self.g.0 * x.0 + self.g.1 * x.1 + self.h
    }
}

/// Exact `maxₓ minᵢ μᵢ(x)` for a two-variable crisp instance under the
/// computed-min worst values, by the arrangement of constraint lines and
/// membership crossings. `None` when some ramp is degenerate.
pub fn maxmin_oracle_2d(p: &DecisionProblem) -> Option<f64> {
    let mut lines: Vec<(f64, f64, f64)> = p
        .constraints
        .iter()
        .map(|c| (c.coefficients[0], c.coefficients[1], c.rhs))
        .collect();
    lines.push((1.0, 0.0, 0.0));
    lines.push((0.0, 1.0, 0.0));

    let mut vertices = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some(x) = intersect(lines[i], lines[j]) {
                if feasible_2d(p, x) {
                    vertices.push(x);
                }
            }
        }
    }
    let mut ramps = Vec::new();
    for o in &p.objectives {
        let z = |x: &(f64, f64)| o.coefficients[0] * x.0 + o.coefficients[1] * x.1;
        let hi = vertices.iter().map(z).fold(f64::NEG_INFINITY, f64::max);
        let lo = vertices.iter().map(z).fold(f64::INFINITY, f64::min);
        if hi - lo <= 1e-6 * (1.0 + hi.abs()) {
            return None;
        }
        let (best, worst) = match o.sense {
            Sense::Maximize => (hi, lo),
            Sense::Minimize => (lo, hi),
        };
        let s = 1.0 / (best - worst);
        ramps.push(Ramp {
            g: (o.coefficients[0] * s, o.coefficients[1] * s),
            h: -worst * s,
        });
    }
    // minᵢ clamp(aᵢ) = clamp(minᵢ aᵢ), and minᵢ aᵢ peaks on the arrangement.
    let mut candidates = vertices.clone();
    for a in 0..ramps.len() {
        for b in a + 1..ramps.len() {
            let cross = (
                ramps[a].g.0 - ramps[b].g.0,
                ramps[a].g.1 - ramps[b].g.1,
                ramps[b].h - ramps[a].h,
            );
            for line in &lines {
                if let Some(x) = intersect(cross, *line) {
                    if feasible_2d(p, x) {
                        candidates.push(x);
                    }
                }
            }
        }
    }
    if ramps.len() >= 3 {
        for a in 0..ramps.len() {
            for b in a + 1..ramps.len() {
                for c in b + 1..ramps.len() {
                    let ab = (
                        ramps[a].g.0 - ramps[b].g.0,
                        ramps[a].g.1 - ramps[b].g.1,
                        ramps[b].h - ramps[a].h,
                    );
                    let ac = (
                        ramps[a].g.0 - ramps[c].g.0,
                        ramps[a].g.1 - ramps[c].g.1,
                        ramps[c].h - ramps[a].h,
                    );
                    if let Some(x) = intersect(ab, ac) {
                        if feasible_2d(p, x) {
                            candidates.push(x);
                        }
                    }
                }
            }
        }
    }
    let best = candidates
        .iter()
        .map(|x| ramps.iter().map(|r| r.at(*x)).fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max);
    Some(best.clamp(0.0, 1.0))
}

/// Coarser sanity oracle: the best grid point of `maxₓ minᵢ μᵢ`.
pub fn maxmin_grid_2d(p: &DecisionProblem, ranges: &[(f64, f64)], steps: usize) -> f64 {
    let xmax = p.constraints.last().unwrap().rhs;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=steps {
        for j in 0..=steps {
            let x = (xmax * i as f64 / steps as f64, xmax * j as f64 / steps as f64);
            if !feasible_2d(p, x) {
                continue;
            }
            let m = p
                .objectives
                .iter()
                .zip(ranges)
                .map(|(o, &(best, worst))| {
                    let z = o.coefficients[0] * x.0 + o.coefficients[1] * x.1;
                    ((z - worst) / (best - worst)).clamp(0.0, 1.0)
                })
                .fold(f64::INFINITY, f64::min);
            best = best.max(m);
        }
    }
    best
}

pub fn computed_min_config() -> SolverConfig {
    SolverConfig {
        worst_value_policy: WorstValuePolicy::ComputedMin,
        ..SolverConfig::default()
    }
}

/// `solve_maxmin` against the exact arrangement oracle on `count`
/// nondegenerate two-variable instances.
pub fn maxmin_oracle_agreement(seed: u64, count: usize) -> Check {
    let cfg = computed_min_config();
    let mut r = rng(seed);
    let (mut checked, mut skipped) = (0, 0);
    let mut worst_gap: f64 = 0.0;
    while checked < count {
        let p = random_momp(&mut r, 2);
        let Some(want) = maxmin_oracle_2d(&p) else {
            skipped += 1;
            continue;
        };
        let got = solve_maxmin(&p, &cfg).map_err(|e| format!("instance {checked}: {e}"))?;
        let gap = (got.alpha - want).abs();
        worst_gap = worst_gap.max(gap);
        if gap > 1e-4 {
            return Err(format!(
                "instance {checked}: alpha {} vs oracle {want}\n{p:?}",
                got.alpha
            ));
        }
        checked += 1;
    }
    Ok(format!(
        "{count} instances match (max gap {worst_gap:.2e}, {skipped} degenerate skipped)"
    ))
}

// ---------------------------------------------------------------- property checks

fn random_spec(rng: &mut ChaCha8Rng) -> MembershipSpec {
    let a = rng.gen_range(-50.0..50.0);
    let w = rng.gen_range(0.5..20.0);
    let sense = if rng.gen_bool(0.5) {
        Sense::Maximize
    } else {
        Sense::Minimize
    };
    let relation = if rng.gen_bool(0.5) {
        SoftRelation::Le
    } else {
        SoftRelation::Ge
    };
    match rng.gen_range(0..3) {
        0 => MembershipSpec::ObjectiveRange {
            worst: if sense == Sense::Maximize { a } else { a + w },
            best: if sense == Sense::Maximize { a + w } else { a },
            sense,
        },
        1 => MembershipSpec::ObjectiveGoal {
            goal: a,
            tolerance: w,
            sense,
        },
        _ => MembershipSpec::ConstraintSoft {
            rhs: a,
            tolerance: w,
            relation,
        },
    }
}

/// The LP rows hold at `(x, α)` exactly when `μ(c·x) ≥ α`, for `α ∈ (0, 1]`.
pub fn membership_row_consistency(seed: u64, count: usize) -> Check {
    let mut r = rng(seed);
    let mut agree = 0;
    for i in 0..count {
        let spec = random_spec(&mut r);
        let n = r.gen_range(1..=4);
        let c: Vec<f64> = (0..n).map(|_| r.gen_range(-5.0..5.0)).collect();
        let x: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..10.0)).collect();
        let alpha: f64 = r.gen_range(1e-3..=1.0);
        let rows = spec.as_lp_rows(&c, n).map_err(|e| e.to_string())?;
        let mut point = x.clone();
        point.push(alpha);
        let value: f64 = c.iter().zip(&x).map(|(a, b)| a * b).sum();
        let mu = spec.eval(value).map_err(|e| e.to_string())?;
        let margin: f64 = rows.iter().map(|row| row.violation(&point)).fold(0.0, f64::max);
        // Skip points on the boundary, where rounding decides either way.
        if (mu - alpha).abs() < 1e-9 {
            continue;
        }
        let rows_hold = margin <= 1e-9;
        if rows_hold != (mu >= alpha) {
            return Err(format!(
                "case {i}: {spec:?} rows hold = {rows_hold}, mu = {mu}, alpha = {alpha}"
            ));
        }
        agree += 1;
    }
    Ok(format!("{agree} random (spec, x, alpha) cases agree"))
}

fn softened(p: &DecisionProblem, d_scale: f64) -> DecisionProblem {
    let mut q = p.clone();
    for c in &mut q.constraints {
        c.relation = ConstraintRelation::SoftLe;
        c.tolerance = d_scale * c.rhs.abs().max(1.0);
    }
    q
}

/// With every tolerance zero and no goals the fuzzy solver reproduces the
/// crisp augmented solution.
pub fn crisp_limit(seed: u64, count: usize) -> Check {
    let cfg = computed_min_config();
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < count {
        let n = r.gen_range(2..=4);
        let p = random_momp(&mut r, n);
        let crisp = match solve_augmented(&p, &cfg) {
            Ok(s) => s,
            Err(SolveError::InvertedRamp { .. }) => continue,
            Err(e) => return Err(format!("crisp: {e}")),
        };
        if crisp.ranges.iter().any(|r| r.is_degenerate()) {
            continue;
        }
        let fuzzy = solve_fuzzy_augmented(&softened(&p, 0.0), &cfg)
            .map_err(|e| format!("fuzzy: {e}"))?;
        for (a, b) in crisp.z.iter().zip(&fuzzy.z) {
            worst = worst.max((a - b).abs() / 1f64.max(a.abs()));
            if !close(*a, *b, 1e-6) {
                return Err(format!("z {:?} vs fuzzy {:?}\n{p:?}", crisp.z, fuzzy.z));
            }
        }
        if (crisp.alpha - fuzzy.alpha).abs() > 1e-6 {
            return Err(format!("alpha {} vs fuzzy {}", crisp.alpha, fuzzy.alpha));
        }
        done += 1;
    }
    Ok(format!("{count} instances, max relative z gap {worst:.2e}"))
}

fn goal_problem(rng: &mut ChaCha8Rng) -> DecisionProblem {
    let n = rng.gen_range(2..=4);
    let mut p = softened(&random_momp(rng, n), 0.0);
    for o in &mut p.objectives {
        o.sense = Sense::Maximize;
        o.coefficients.iter_mut().for_each(|c| *c = c.abs() + 0.1);
    }
    let best = individual_optima(&p, &SolverConfig::default()).expect("bounded instance");
    for (o, r) in p.objectives.iter_mut().zip(&best) {
        let goal = r.z_plus * rng.gen_range(0.9..1.4);
        o.goal = Some(goal);
        o.tolerance = Some(rng.gen_range(0.3..0.7) * goal);
    }
    for c in &mut p.constraints {
        c.tolerance = rng.gen_range(0.0..0.3) * c.rhs;
    }
    p
}

/// Enlarging every tolerance never lowers `α` by more than `δ`, the most the
/// augmentation term can trade away.
pub fn relaxation_monotonicity(seed: u64, count: usize) -> Check {
    let cfg = SolverConfig::default();
    let mut r = rng(seed);
    let (mut gains, mut skipped) = (0, 0);
    for i in 0..count {
        let small = goal_problem(&mut r);
        let mut big = small.clone();
        let grow = r.gen_range(1.0..2.0);
        for o in &mut big.objectives {
            o.tolerance = o.tolerance.map(|t| t * r.gen_range(1.0..grow));
        }
        for c in &mut big.constraints {
            c.tolerance *= r.gen_range(1.0..grow);
        }
        // No point reaches every lower goal bound; relaxing can only help.
        let a = match solve_fuzzy_augmented(&small, &cfg) {
            Err(SolveError::InfeasibleAtAlphaLower { .. }) => {
                skipped += 1;
                continue;
            }
            other => other.map_err(|e| format!("case {i}: {e}"))?,
        };
        let b = solve_fuzzy_augmented(&big, &cfg).map_err(|e| format!("case {i}: {e}"))?;
        if b.alpha < a.alpha - cfg.delta - 1e-9 {
            return Err(format!(
                "case {i}: alpha fell from {} to {} after relaxing",
                a.alpha, b.alpha
            ));
        }
        if b.alpha > a.alpha + 1e-9 {
            gains += 1;
        }
    }
    Ok(format!(
        "{} relaxations monotone ({gains} strictly improved, {skipped} infeasible before relaxing)",
        count - skipped
    ))
}

pub fn augmented_vs_maxmin(seed: u64, count: usize) -> Check {
    let cfg = computed_min_config();
    let mut r = rng(seed);
    let mut done = 0;
    let mut min_margin = f64::INFINITY;
    while done < count {
        let n = r.gen_range(2..=4);
        let p = random_momp(&mut r, n);
        let (plain, aug) = match (solve_maxmin(&p, &cfg), solve_augmented(&p, &cfg)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(SolveError::InvertedRamp { .. }), _) => continue,
            (a, b) => return Err(format!("{:?} / {:?}", a.err(), b.err())),
        };
        min_margin = min_margin.min(aug.alpha - plain.alpha);
        if aug.alpha < plain.alpha - cfg.delta {
            return Err(format!(
                "augmented alpha {} below max-min {} - delta",
                aug.alpha, plain.alpha
            ));
        }
        done += 1;
    }
    Ok(format!("{count} instances, min alpha_aug - alpha_maxmin = {min_margin:.2e}"))
}

pub const SWEEP_GRID: [f64; 5] = [0.80, 0.85, 0.90, 0.95, 1.0];

/// Profit falls (weakly) as the required acceptability rises.
pub fn sweep_profit_monotone() -> Check {
    let data = concrete_plant_dataset(&CaseStudyVariant::canonical());
    let cfg = SolverConfig {
        alpha_lower: 0.0,
        ..data.config
    };
    let table = alpha_sweep(&data.problem, &cfg, &SWEEP_GRID).map_err(|e| e.to_string())?;
    let feasible: Vec<bool> = table.rows.iter().map(|r| r.feasible).collect();
    if feasible.windows(2).any(|w| w[1] && !w[0]) {
        return Err(format!("feasibility not monotone: {feasible:?}"));
    }
    let profits: Vec<f64> = table
        .rows
        .iter()
        .filter_map(|r| r.z.as_ref().map(|z| z[0]))
        .collect();
    if profits.is_empty() {
        return Err("no feasible level".into());
    }
    if profits.windows(2).any(|w| w[1] > w[0] + 1e-6) {
        return Err(format!("profit rises with alpha: {profits:?}"));
    }
    Ok(format!(
        "profit {:?} over feasible levels of {:?}",
        profits.iter().map(|p| (p * 100.0).round() / 100.0).collect::<Vec<_>>(),
        &SWEEP_GRID[..profits.len()]
    ))
}

pub fn random_problem_file(rng: &mut ChaCha8Rng) -> (DecisionProblem, SolverConfig) {
    let n = rng.gen_range(1..=5);
    let real = |rng: &mut ChaCha8Rng| {
        // Awkward binary fractions exercise shortest round-trip printing.
        rng.gen_range(-1e3..1e3) * if rng.gen_bool(0.2) { 1e-7 } else { 1.0 }
    };
    let k = rng.gen_range(1..=3);
    let objectives = (0..k)
        .map(|i| {
            let sense = if rng.gen_bool(0.5) {
                Sense::Maximize
            } else {
                Sense::Minimize
            };
            let mut o = Objective::new(
                format!("obj \"{i}\""),
                sense,
                (0..n).map(|_| real(rng)).collect(),
            );
            if rng.gen_bool(0.5) {
                o = o.with_goal(real(rng), rng.gen_range(0.1..50.0));
            }
            if rng.gen_bool(0.3) {
                o = o.with_weight(rng.gen_range(0.1..5.0));
            }
            o
        })
        .collect();
    let relations = [
        ConstraintRelation::SoftLe,
        ConstraintRelation::SoftGe,
        ConstraintRelation::Le,
        ConstraintRelation::Ge,
        ConstraintRelation::Eq,
    ];
    let m = rng.gen_range(1..=5);
    let constraints = (0..m)
        .map(|j| {
            let relation = relations[rng.gen_range(0..relations.len())];
            let tolerance = if relation.is_soft() && rng.gen_bool(0.8) {
                rng.gen_range(0.01..30.0)
            } else {
                0.0
            };
            let mut c = FuzzyConstraint::new(
                format!("c{j}"),
                (0..n).map(|_| real(rng)).collect(),
                relation,
                real(rng),
                tolerance,
            );
            if relation.is_soft() && rng.gen_bool(0.3) {
                c.weight = Some(rng.gen_range(0.1..5.0));
            }
            c
        })
        .collect();
    let lower = rng.gen_range(0.0..0.5);
    let cfg = SolverConfig {
        delta: rng.gen_range(1e-6..1e-2),
        alpha_lower: lower,
        alpha_upper: rng.gen_range(lower..=1.0),
        worst_value_policy: match rng.gen_range(0..3) {
            0 => WorstValuePolicy::Zero,
            1 => WorstValuePolicy::ComputedMin,
            _ => WorstValuePolicy::UserSupplied((0..k).map(|_| real(rng)).collect()),
        },
        ..SolverConfig::default()
    };
    let problem = DecisionProblem {
        variable_names: (0..n).map(|j| format!("x{j}")).collect(),
        objectives,
        constraints,
    };
    (problem, cfg)
}

pub fn problem_file_round_trip(seed: u64, count: usize) -> Check {
    let mut r = rng(seed);
    for i in 0..count {
        let (p, cfg) = random_problem_file(&mut r);
        let text = serialize_problem(&p, &cfg);
        let (q, cfg2) = parse_problem(&text).map_err(|e| format!("case {i}: {e}\n{text}"))?;
        if q != p || cfg2 != cfg {
            return Err(format!("case {i}: round trip changed the problem\n{text}"));
        }
        if serialize_problem(&q, &cfg2) != text {
            return Err(format!("case {i}: second serialization differs"));
        }
    }
    Ok(format!("{count} random problem files round-trip exactly"))
}
