//! Concrete plant delivery planning: three construction sites supplied by
//! one plant, with profit, quality and worker-satisfaction objectives.
//!
//! The dataset is embedded with a source note per item, and
//! [`reproduce_tables`] compares computed results against the published
//! reference values.

use std::fmt;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::crisp::{individual_optima, solve_augmented, CompromiseSolution, ObjectiveRange};
use crate::fuzzy::{solve_fuzzy_augmented, FuzzySolution};
use crate::lp::Sense;
use crate::model::{
    ConstraintRelation, DecisionProblem, FuzzyConstraint, Objective, SolverConfig,
    WorstValuePolicy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConstraintSet {
    /// Rates in hours per m³, as in the "written in full" row list.
    #[default]
    FullList,
    /// Rounded narrative rows; the worker row is in worker-hours per m³ and
    /// makes the region empty.
    Narrative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SiteCDemand {
    #[default]
    M903,
    /// Value from the narrative bullet, which disagrees with the capacity table.
    M756,
}

impl SiteCDemand {
    pub fn cubic_metres(self) -> f64 {
        match self {
            SiteCDemand::M903 => 903.0,
            SiteCDemand::M756 => 756.0,
        }
    }
}

/// Site A coefficient of the full-list mixer row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MixerRow {
    /// 0.1183 h/m³ = 1 / 8.45 m³/h; this reproduces the reference optima.
    #[default]
    CapacityDerived,
    /// 0.118 h/m³, as rounded in the printed row.
    AsPrinted,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CaseStudyVariant {
    pub constraint_set: ConstraintSet,
    pub site_c_demand: SiteCDemand,
    pub mixer_row: MixerRow,
    pub worst_value_policy: Option<WorstValuePolicy>,
}

impl CaseStudyVariant {
    pub fn canonical() -> Self {
        Self::default()
    }

    pub fn narrative() -> Self {
        Self {
            constraint_set: ConstraintSet::Narrative,
            ..Self::default()
        }
    }
}

/// Where one embedded item comes from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub item: String,
    pub source: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseStudyDataset {
    pub problem: DecisionProblem,
    pub config: SolverConfig,
    pub provenance: Vec<Provenance>,
}

/// Minimum acceptability prescribed for the plant.
pub const ALPHA_LOWER: f64 = 0.80;

pub fn concrete_plant_dataset(variant: &CaseStudyVariant) -> CaseStudyDataset {
    let mut provenance = Vec::new();
    let mut note = |item: &str, source: &'static str| {
        provenance.push(Provenance {
            item: item.to_string(),
            source,
        })
    };

    let objectives = vec![
        Objective::new("profit", Sense::Maximize, vec![12.0, 10.0, 11.0]).with_goal(27000.0, 2100.0),
        Objective::new("quality", Sense::Maximize, vec![9.0, 10.0, 7.5]).with_goal(21400.0, 1700.0),
        Objective::new("worker_satisfaction", Sense::Maximize, vec![8.0, 7.0, 9.0])
            .with_goal(18000.0, 1400.0),
    ];
    note("profit", "expected profit table (AU$/m3 per site); weekly goal AU$27,000, tolerance AU$2,100");
    note("quality", "index-of-quality table (points/m3); weekly goal 21,400, tolerance 1,700");
    note(
        "worker_satisfaction",
        "objective as written in the model (8, 7, 9); the satisfaction table repeats the quality row; weekly goal 18,000, tolerance 1,400",
    );

    let soft_le = ConstraintRelation::SoftLe;
    let soft_ge = ConstraintRelation::SoftGe;
    let mut constraints = vec![FuzzyConstraint::new(
        "plant_capacity",
        vec![1.0, 1.0, 1.0],
        soft_le,
        2520.0,
        200.0,
    )];
    note("plant_capacity", "capacity table: 60 m3/h x 42 h = 2520 m3/week, tolerance 200 m3");

    match variant.constraint_set {
        ConstraintSet::FullList => {
            let mixer_a = match variant.mixer_row {
                MixerRow::CapacityDerived => 0.1183,
                MixerRow::AsPrinted => 0.118,
            };
            constraints.extend([
                FuzzyConstraint::new("transit_mixers", vec![mixer_a, 0.108, 0.139], soft_le, 294.0, 23.0),
                FuzzyConstraint::new("concrete_pumps", vec![0.063, 0.045, 0.038], soft_le, 126.0, 10.0),
                FuzzyConstraint::new("workers", vec![0.100, 0.117, 0.150], soft_le, 924.0, 74.0),
                FuzzyConstraint::new("resource_5", vec![0.033, 0.033, 0.055], soft_le, 294.0, 0.0),
            ]);
            note(
                "transit_mixers",
                "full row list: 7 mixers x 42 h = 294 h, tolerance 23 h; site A rate 1/8.45 h/m3 from the capacity table (printed rounded to 0.118)",
            );
            note("concrete_pumps", "full row list: 3 pumps x 42 h = 126 h, tolerance 10 h");
            note("workers", "full row list: 22 workers, rhs 924, tolerance 74");
            note("resource_5", "full row list, fifth row; no tolerance given, so crisp");
        }
        ConstraintSet::Narrative => {
            constraints.extend([
                FuzzyConstraint::new("transit_mixers", vec![0.12, 0.11, 0.14], soft_le, 294.0, 23.0),
                FuzzyConstraint::new("concrete_pumps", vec![0.06, 0.05, 0.04], soft_le, 126.0, 10.0),
                FuzzyConstraint::new("workers", vec![6.0, 7.0, 9.0], soft_le, 924.0, 74.0),
            ]);
            note("transit_mixers", "narrative row: 0.12/0.11/0.14 h/m3, 294 h, tolerance 23 h");
            note("concrete_pumps", "narrative row: 0.06/0.05/0.04 h/m3, 126 h, tolerance 10 h");
            note("workers", "narrative row: worker counts 6/7/9 per site, 924, tolerance 74");
        }
    }

    let site_c = variant.site_c_demand.cubic_metres();
    constraints.extend([
        FuzzyConstraint::new("site_a_demand", vec![1.0, 0.0, 0.0], soft_ge, 588.0, 47.0),
        FuzzyConstraint::new("site_b_demand", vec![0.0, 1.0, 0.0], soft_ge, 756.0, 60.0),
        FuzzyConstraint::new("site_c_demand", vec![0.0, 0.0, 1.0], soft_ge, site_c, 72.0),
    ]);
    note("site_a_demand", "capacity table: 14.0 m3/h x 42 h = 588 m3/week, tolerance 47 m3");
    note("site_b_demand", "capacity table: 18.0 m3/h x 42 h = 756 m3/week, tolerance 60 m3");
    note(
        "site_c_demand",
        match variant.site_c_demand {
            SiteCDemand::M903 => "capacity table: 21.5 m3/h x 42 h = 903 m3/week, tolerance 72 m3",
            SiteCDemand::M756 => "narrative bullet: 756 m3/week, tolerance 72 m3",
        },
    );
    note("alpha_lower", "prescribed minimal degree of acceptability 0.80");

    let config = SolverConfig {
        alpha_lower: ALPHA_LOWER,
        worst_value_policy: variant
            .worst_value_policy
            .clone()
            .unwrap_or(WorstValuePolicy::Zero),
        ..SolverConfig::default()
    };

    CaseStudyDataset {
        problem: DecisionProblem {
            variable_names: vec!["site_a".into(), "site_b".into(), "site_c".into()],
            objectives,
            constraints,
        },
        config,
        provenance,
    }
}

pub fn concrete_plant_problem(variant: &CaseStudyVariant) -> DecisionProblem {
    concrete_plant_dataset(variant).problem
}

/// Published reference values.
pub mod reference {
    pub const BEST: [f64; 3] = [26301.29, 21224.00, 19291.00];
    pub const WORST: [f64; 3] = [0.0, 0.0, 0.0];
    pub const ARGMAX: [[f64; 3]; 3] = [
        [734.02, 756.00, 903.00],
        [588.00, 915.95, 903.00],
        [734.02, 756.00, 903.00],
    ];
    pub const CRISP_X: [f64; 3] = [635.94, 863.43, 903.0];
    pub const CRISP_Z: [f64; 3] = [26199.0, 21130.0, 19259.0];
    pub const CRISP_PHI: [f64; 3] = [0.996, 0.996, 0.998];
    /// Printed crisp acceptability; inconsistent with `CRISP_PHI` when `z⁻ = 0`.
    pub const CRISP_ALPHA_PRINTED: f64 = 0.941;
    pub const FUZZY_ALPHA: f64 = 0.852;
    pub const FUZZY_ALPHA_BAND: f64 = 0.05;
    pub const MAX_GAP: f64 = 0.02;

    pub const BEST_ABS_TOL: f64 = 0.5;
    pub const Z_REL_TOL: f64 = 0.01;
    pub const PHI_ABS_TOL: f64 = 0.002;
    pub const X3_ABS_TOL: f64 = 0.5;
    pub const ALPHA_IDENTITY_TOL: f64 = 1e-6;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Criterion {
    Absolute(f64),
    Relative(f64),
    AtLeast(f64),
    Below(f64),
    Within(f64, f64),
    /// Known mismatch, documented rather than asserted.
    Documented,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Criterion::Absolute(t) => write!(f, "±{t}"),
            Criterion::Relative(t) => write!(f, "±{}%", t * 100.0),
            Criterion::AtLeast(v) => write!(f, "≥ {v:.4}"),
            Criterion::Below(v) => write!(f, "< {v}"),
            Criterion::Within(lo, hi) => write!(f, "in [{lo}, {hi}]"),
            Criterion::Documented => f.write_str("expected mismatch"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Pass,
    Fail,
    ExpectedMismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub quantity: String,
    pub reference: Option<f64>,
    pub computed: Option<f64>,
    pub rel_error: Option<f64>,
    pub criterion: Criterion,
    pub status: EntryStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproductionReport {
    pub entries: Vec<ReportEntry>,
    pub ranges: Option<Vec<ObjectiveRange>>,
    pub crisp: Option<CompromiseSolution>,
    pub fuzzy: Option<FuzzySolution>,
    /// Solver failures, one message per failed solve.
    pub errors: Vec<String>,
}

impl ReproductionReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.entries.iter().all(|e| e.status != EntryStatus::Fail)
    }

    pub fn entry(&self, quantity: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.quantity == quantity)
    }

    fn check(
        &mut self,
        quantity: impl Into<String>,
        reference: Option<f64>,
        computed: Option<f64>,
        criterion: Criterion,
    ) {
        let rel_error = reference
            .zip(computed)
            .filter(|(r, _)| *r != 0.0)
            .map(|(r, c)| (c - r).abs() / r.abs());
        let ok = match (criterion, computed) {
            (Criterion::Documented, _) => None,
            (_, None) => Some(false),
            (Criterion::Absolute(t), Some(c)) => reference.map(|r| (c - r).abs() <= t),
            (Criterion::Relative(t), Some(_)) => rel_error.map(|e| e <= t),
            (Criterion::AtLeast(v), Some(c)) => Some(c >= v),
            (Criterion::Below(v), Some(c)) => Some(c < v),
            (Criterion::Within(lo, hi), Some(c)) => Some((lo..=hi).contains(&c)),
        };
        let status = match ok {
            None => EntryStatus::ExpectedMismatch,
            Some(true) => EntryStatus::Pass,
            Some(false) => EntryStatus::Fail,
        };
        self.entries.push(ReportEntry {
            quantity: quantity.into(),
            reference,
            computed,
            rel_error,
            criterion,
            status,
        });
    }
}

/// Solves the canonical plant problem and checks it against the reference
/// tables. Solver failures become failing rows, not errors.
pub fn reproduce_tables(cfg: &SolverConfig) -> ReproductionReport {
    use reference::*;

    let problem = concrete_plant_problem(&CaseStudyVariant::canonical());
    let mut report = ReproductionReport {
        entries: Vec::new(),
        ranges: None,
        crisp: None,
        fuzzy: None,
        errors: Vec::new(),
    };

    match individual_optima(&problem, cfg) {
        Ok(r) => report.ranges = Some(r),
        Err(e) => report.errors.push(format!("individual optima: {e}")),
    }
    match solve_augmented(&problem, cfg) {
        Ok(s) => report.crisp = Some(s),
        Err(e) => report.errors.push(format!("crisp augmented: {e}")),
    }
    match solve_fuzzy_augmented(&problem, cfg) {
        Ok(s) => report.fuzzy = Some(s),
        Err(e) => report.errors.push(format!("fuzzy augmented: {e}")),
    }

    let ranges = report.ranges.clone();
    let crisp = report.crisp.clone();
    let fuzzy = report.fuzzy.clone();
    let rows = problem.rows_at(0.0);

    for i in 0..3 {
        let r = ranges.as_ref().map(|r| &r[i]);
        report.check(
            format!("z{}+", i + 1),
            Some(BEST[i]),
            r.map(|r| r.z_plus),
            Criterion::Absolute(BEST_ABS_TOL),
        );
        report.check(
            format!("z{}-", i + 1),
            Some(WORST[i]),
            r.map(|r| r.z_minus),
            Criterion::Absolute(BEST_ABS_TOL),
        );
        let violation = r.map(|r| {
            rows.iter()
                .map(|row| row.violation(&r.argmax_x))
                .fold(0.0, f64::max)
        });
        report.check(
            format!("argmax z{} violation", i + 1),
            None,
            violation,
            Criterion::Below(cfg.eps_feas * 10.0),
        );
    }

    for (i, &x) in CRISP_X.iter().enumerate() {
        let criterion = if i == 2 {
            Criterion::Absolute(X3_ABS_TOL)
        } else {
            Criterion::Relative(Z_REL_TOL)
        };
        report.check(
            format!("crisp x{}", i + 1),
            Some(x),
            crisp.as_ref().map(|s| s.x[i]),
            criterion,
        );
    }
    for i in 0..3 {
        report.check(
            format!("crisp z{}", i + 1),
            Some(CRISP_Z[i]),
            crisp.as_ref().map(|s| s.z[i]),
            Criterion::Relative(Z_REL_TOL),
        );
    }
    for i in 0..3 {
        report.check(
            format!("crisp phi{}", i + 1),
            Some(CRISP_PHI[i]),
            crisp.as_ref().and_then(|s| s.phi[i]),
            Criterion::Absolute(PHI_ABS_TOL),
        );
    }
    report.check(
        "crisp |lp alpha - min mu|",
        None,
        crisp.as_ref().map(|s| {
            let min_mu = s.mu.iter().copied().fold(f64::INFINITY, f64::min);
            (s.lp_alpha - min_mu).abs()
        }),
        Criterion::Below(ALPHA_IDENTITY_TOL),
    );
    report.check(
        "crisp alpha (printed)",
        Some(CRISP_ALPHA_PRINTED),
        crisp.as_ref().map(|s| s.alpha),
        Criterion::Documented,
    );

    report.check(
        "fuzzy alpha bound",
        None,
        fuzzy.as_ref().map(|s| s.alpha),
        Criterion::Within(ALPHA_LOWER, 1.0),
    );
    report.check(
        "fuzzy alpha",
        Some(FUZZY_ALPHA),
        fuzzy.as_ref().map(|s| s.alpha),
        Criterion::Absolute(FUZZY_ALPHA_BAND),
    );
    if let Some(c) = &crisp {
        report.check(
            "fuzzy z1 >= crisp z1",
            Some(c.z[0]),
            fuzzy.as_ref().map(|f| f.z[0]),
            Criterion::AtLeast(c.z[0]),
        );
    } else {
        report.check("fuzzy z1 >= crisp z1", None, None, Criterion::AtLeast(0.0));
    }
    for i in 0..3 {
        let gap = crisp
            .as_ref()
            .zip(fuzzy.as_ref())
            .map(|(c, f)| (f.z[i] - c.z[i]).abs() / c.z[i].abs());
        report.check(
            format!("fuzzy-crisp gap z{}", i + 1),
            None,
            gap,
            Criterion::Below(MAX_GAP),
        );
    }

    report
}

/// Writes the per-objective crisp/fuzzy comparison as CSV.
pub fn write_comparison<W: Write>(report: &ReproductionReport, mut out: W) -> io::Result<()> {
    let (Some(crisp), Some(fuzzy)) = (&report.crisp, &report.fuzzy) else {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            "comparison needs both crisp and fuzzy solutions",
        ));
    };
    let names = ["profit", "quality", "worker_satisfaction"];
    let cell = |v: Option<f64>| v.map(|v| format!("{v:.4}")).unwrap_or_default();
    out.write_all(b"objective,crisp_z,fuzzy_z,crisp_phi,fuzzy_phi,crisp_alpha,fuzzy_alpha\n")?;
    for i in 0..crisp.z.len() {
        writeln!(
            out,
            "{},{:.4},{:.4},{},{},{:.4},{:.4}",
            names.get(i).copied().unwrap_or("objective"),
            crisp.z[i],
            fuzzy.z[i],
            cell(crisp.phi[i]),
            cell(fuzzy.phi[i]),
            crisp.alpha,
            fuzzy.alpha,
        )?;
    }
    Ok(())
}

pub fn export_comparison(report: &ReproductionReport, path: &Path) -> io::Result<()> {
    let mut buf = Vec::new();
    write_comparison(report, &mut buf)?;
    std::fs::write(path, buf)
}
