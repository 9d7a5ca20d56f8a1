//! Command-line front end.
//!
//! Exit codes: 0 success, 1 infeasible or unbounded, 2 input error,
//! 3 internal error.

use std::ffi::OsString;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::auxiliary::SolveError;
use crate::case_study::{
    concrete_plant_dataset, reproduce_tables, write_comparison, CaseStudyVariant, EntryStatus,
    ReproductionReport,
};
use crate::crisp::{
    individual_optima, solve_augmented, solve_maxmin, two_phase_refine, CompromiseSolution,
    ObjectiveRange,
};
use crate::fuzzy::{alpha_sweep, relax, solve_fuzzy_augmented, FuzzySolution, SweepTable};
use crate::io::{parse_problem, ResultDocument, ResultPayload};
use crate::lp::LpError;
use crate::model::{DecisionProblem, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fuzzylp", version, about = "Fuzzy multi-objective linear programming")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a problem file without solving it.
    Validate { file: PathBuf },
    /// Solve a problem file.
    Solve {
        file: PathBuf,
        /// Defaults to `fuzzy` when the problem has soft rows or goals, else `augmented`.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Solve at each level of an evenly spaced acceptability grid.
    Sweep {
        file: PathBuf,
        #[arg(long)]
        alpha_from: f64,
        #[arg(long)]
        alpha_to: f64,
        /// Number of intervals; the grid has `steps + 1` levels.
        #[arg(long)]
        steps: usize,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Reproduce the concrete plant delivery study.
    CaseStudy {
        #[arg(long, value_enum, default_value_t = Variant::Full)]
        variant: Variant,
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Maxmin,
    Augmented,
    TwoPhase,
    Fuzzy,
    /// Goal-form objectives over the crisp constraint set.
    Goal,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Maxmin => "maxmin",
            Mode::Augmented => "augmented",
            Mode::TwoPhase => "two-phase",
            Mode::Fuzzy => "fuzzy",
            Mode::Goal => "goal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Full,
    Narrative,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let code = match &e {
            e if e.is_infeasibility() => EXIT_INFEASIBLE,
            SolveError::Invalid(_)
            | SolveError::InvertedRamp { .. }
            | SolveError::NoFuzzyContent
            | SolveError::EmptyGrid
            | SolveError::InvalidGrid(_)
            | SolveError::Weights(_) => EXIT_INPUT,
            SolveError::Lp(LpError::TooLarge { .. }) => EXIT_INPUT,
            _ => EXIT_INTERNAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let color = stdout.is_terminal() && std::env::var_os("NO_COLOR").is_none();
    run_with(args, &mut stdout.lock(), &mut io::stderr().lock(), color)
}

/// [`run_cli`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut printer = Printer { out, color };
    match dispatch(cli.command, &mut printer) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, p: &mut Printer<'_>) -> Result<i32, Failure> {
    match command {
        Command::Validate { file } => {
            let (problem, _) = load(&file)?;
            p.line(&format!(
                "ok: {} variables, {} objectives, {} constraints",
                problem.n_vars(),
                problem.objectives.len(),
                problem.constraints.len()
            ))?;
            Ok(EXIT_OK)
        }
        Command::Solve { file, mode, json } => {
            let (problem, cfg) = load(&file)?;
            let mode = mode.unwrap_or(if problem.has_fuzzy_content() {
                Mode::Fuzzy
            } else {
                Mode::Augmented
            });
            // Goal mode keeps the fuzzy goals but reads soft rows at their rhs.
            let hardened = relax(&problem, 0.0);
            let start = Instant::now();
            let payload = match mode {
                Mode::Maxmin => ResultPayload::Compromise(solve_maxmin(&problem, &cfg)?),
                Mode::Augmented => ResultPayload::Compromise(solve_augmented(&problem, &cfg)?),
                Mode::TwoPhase => ResultPayload::Compromise(two_phase_refine(&problem, &cfg)?),
                Mode::Fuzzy => ResultPayload::Fuzzy(solve_fuzzy_augmented(&problem, &cfg)?),
                Mode::Goal => ResultPayload::Fuzzy(solve_fuzzy_augmented(&hardened, &cfg)?),
            };
            let elapsed = start.elapsed().as_secs_f64();
            p.line(&format!("mode: {}", mode.name()))?;
            match &payload {
                ResultPayload::Compromise(s) => p.compromise(&problem, s)?,
                ResultPayload::Fuzzy(s) if mode == Mode::Goal => p.fuzzy(&hardened, s)?,
                ResultPayload::Fuzzy(s) => p.fuzzy(&problem, s)?,
                _ => unreachable!("solve yields a single solution"),
            }
            if let Some(path) = json {
                let doc = ResultDocument::new(mode.name(), &problem, &cfg, payload, elapsed);
                write_file(&path, doc.to_json().as_bytes())?;
            }
            Ok(EXIT_OK)
        }
        Command::Sweep {
            file,
            alpha_from,
            alpha_to,
            steps,
            json,
        } => {
            let (problem, cfg) = load(&file)?;
            let grid = grid(alpha_from, alpha_to, steps)?;
            let start = Instant::now();
            let table = alpha_sweep(&problem, &cfg, &grid)?;
            let elapsed = start.elapsed().as_secs_f64();
            p.sweep(&problem, &table)?;
            if let Some(path) = json {
                let doc = ResultDocument::new(
                    "sweep",
                    &problem,
                    &cfg,
                    ResultPayload::Sweep(table),
                    elapsed,
                );
                write_file(&path, doc.to_json().as_bytes())?;
            }
            Ok(EXIT_OK)
        }
        Command::CaseStudy { variant, csv, json } => match variant {
            Variant::Full => case_study_full(p, csv, json),
            Variant::Narrative => case_study_narrative(p, csv, json),
        },
    }
}

fn case_study_full(
    p: &mut Printer<'_>,
    csv: Option<PathBuf>,
    json: Option<PathBuf>,
) -> Result<i32, Failure> {
    let data = concrete_plant_dataset(&CaseStudyVariant::canonical());
    let start = Instant::now();
    let report = reproduce_tables(&data.config);
    let elapsed = start.elapsed().as_secs_f64();

    if let Some(ranges) = &report.ranges {
        p.heading("individual optima")?;
        p.ranges(&data.problem, ranges)?;
    }
    if let Some(s) = &report.crisp {
        p.heading("crisp compromise (augmented max-min)")?;
        p.compromise(&data.problem, s)?;
    }
    if let Some(s) = &report.fuzzy {
        p.heading("fuzzy compromise")?;
        p.fuzzy(&data.problem, s)?;
    }
    p.heading("reference comparison")?;
    p.report(&report)?;

    let code = if report.errors.is_empty() {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    };
    if let Some(path) = csv {
        write_csv(&report, &path)?;
    }
    if let Some(path) = json {
        let doc = ResultDocument::new(
            "case-study",
            &data.problem,
            &data.config,
            ResultPayload::CaseStudy(report),
            elapsed,
        );
        write_file(&path, doc.to_json().as_bytes())?;
    }
    Ok(code)
}

fn case_study_narrative(
    p: &mut Printer<'_>,
    csv: Option<PathBuf>,
    json: Option<PathBuf>,
) -> Result<i32, Failure> {
    let data = concrete_plant_dataset(&CaseStudyVariant::narrative());
    let start = Instant::now();
    let ranges = individual_optima(&data.problem, &data.config)?;
    p.heading("individual optima")?;
    p.ranges(&data.problem, &ranges)?;
    let crisp = solve_augmented(&data.problem, &data.config)?;
    p.heading("crisp compromise (augmented max-min)")?;
    p.compromise(&data.problem, &crisp)?;
    let fuzzy = solve_fuzzy_augmented(&data.problem, &data.config)?;
    p.heading("fuzzy compromise")?;
    p.fuzzy(&data.problem, &fuzzy)?;
    let elapsed = start.elapsed().as_secs_f64();

    let report = ReproductionReport {
        entries: Vec::new(),
        ranges: Some(ranges),
        crisp: Some(crisp),
        fuzzy: Some(fuzzy),
        errors: Vec::new(),
    };
    if let Some(path) = csv {
        write_csv(&report, &path)?;
    }
    if let Some(path) = json {
        let doc = ResultDocument::new(
            "case-study",
            &data.problem,
            &data.config,
            ResultPayload::CaseStudy(report),
            elapsed,
        );
        write_file(&path, doc.to_json().as_bytes())?;
    }
    Ok(EXIT_OK)
}

fn load(path: &Path) -> Result<(DecisionProblem, SolverConfig), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, Failure> {
    if steps == 0 {
        return Err(Failure::input("--steps must be at least 1"));
    }
    if from.is_nan() || to.is_nan() || from >= to {
        return Err(Failure::input("--alpha-from must be below --alpha-to"));
    }
    let h = (to - from) / steps as f64;
    Ok((0..=steps)
        .map(|i| if i == steps { to } else { from + i as f64 * h })
        .collect())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn write_csv(report: &ReproductionReport, path: &Path) -> Result<(), Failure> {
    let mut buf = Vec::new();
    write_comparison(report, &mut buf).map_err(|e| Failure {
        code: EXIT_INTERNAL,
        message: e.to_string(),
    })?;
    write_file(path, &buf)
}

fn num(v: f64) -> String {
    format!("{v:.4}")
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), num)
}

struct Printer<'a> {
    out: &'a mut dyn Write,
    color: bool,
}

impl Printer<'_> {
    fn line(&mut self, text: &str) -> Result<(), Failure> {
        writeln!(self.out, "{text}").map_err(output_failure)
    }

    fn heading(&mut self, text: &str) -> Result<(), Failure> {
        self.line("")?;
        self.line(&format!("== {text} =="))
    }

    /// First column left-aligned, the rest right-aligned.
    fn table(&mut self, headers: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
        let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
        for row in rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let render = |cells: &mut dyn Iterator<Item = &str>| {
            cells
                .zip(&widths)
                .enumerate()
                .map(|(i, (c, &w))| {
                    if i == 0 {
                        format!("{c:<w$}")
                    } else {
                        format!("{c:>w$}")
                    }
                })
                .collect::<Vec<_>>()
                .join("  ")
        };
        let header = render(&mut headers.iter().copied());
        if self.color {
            self.line(&format!("\x1b[1m{header}\x1b[0m"))?;
        } else {
            self.line(&header)?;
        }
        for row in rows {
            self.line(render(&mut row.iter().map(String::as_str)).trim_end())?;
        }
        Ok(())
    }

    fn variables(&mut self, problem: &DecisionProblem, x: &[f64]) -> Result<(), Failure> {
        let rows: Vec<_> = problem
            .variable_names
            .iter()
            .zip(x)
            .map(|(n, v)| vec![n.clone(), num(*v)])
            .collect();
        self.table(&["variable", "value"], &rows)
    }

    fn ranges(&mut self, problem: &DecisionProblem, ranges: &[ObjectiveRange]) -> Result<(), Failure> {
        let rows: Vec<_> = problem
            .objectives
            .iter()
            .zip(ranges)
            .map(|(o, r)| {
                let mut row = vec![o.name.clone(), num(r.z_plus), num(r.z_minus)];
                row.extend(r.argmax_x.iter().map(|v| num(*v)));
                row
            })
            .collect();
        let mut headers = vec!["objective".to_string(), "z+".into(), "z-".into()];
        headers.extend(problem.variable_names.iter().map(|n| format!("{n}@z+")));
        let headers: Vec<&str> = headers.iter().map(String::as_str).collect();
        self.table(&headers, &rows)
    }

    fn objectives(
        &mut self,
        problem: &DecisionProblem,
        z: &[f64],
        mu: &[f64],
        phi: &[Option<f64>],
        ranges: &[ObjectiveRange],
    ) -> Result<(), Failure> {
        let rows: Vec<_> = (0..problem.objectives.len())
            .map(|i| {
                vec![
                    problem.objectives[i].name.clone(),
                    num(z[i]),
                    num(ranges[i].z_plus),
                    num(ranges[i].z_minus),
                    num(mu[i]),
                    opt(phi[i]),
                ]
            })
            .collect();
        self.table(&["objective", "z", "z+", "z-", "mu", "phi"], &rows)
    }

    fn compromise(&mut self, problem: &DecisionProblem, s: &CompromiseSolution) -> Result<(), Failure> {
        self.line(&format!("alpha: {}", num(s.alpha)))?;
        self.variables(problem, &s.x)?;
        self.objectives(problem, &s.z, &s.mu, &s.phi, &s.ranges)
    }

    fn fuzzy(&mut self, problem: &DecisionProblem, s: &FuzzySolution) -> Result<(), Failure> {
        self.line(&format!("alpha: {}", num(s.alpha)))?;
        self.variables(problem, &s.x)?;
        self.objectives(problem, &s.z, &s.mu_obj, &s.phi, &s.ranges)?;
        let rows: Vec<_> = problem
            .constraints
            .iter()
            .enumerate()
            .map(|(j, c)| {
                vec![
                    c.name.clone(),
                    num(c.activity(&s.x)),
                    c.relation.symbol().to_string(),
                    num(c.rhs),
                    num(c.tolerance),
                    opt(s.mu_con[j]),
                ]
            })
            .collect();
        self.table(&["constraint", "activity", "rel", "rhs", "tolerance", "mu"], &rows)
    }

    fn sweep(&mut self, problem: &DecisionProblem, table: &SweepTable) -> Result<(), Failure> {
        let mut headers = vec!["alpha".to_string(), "feasible".into()];
        headers.extend(problem.variable_names.iter().cloned());
        headers.extend(problem.objectives.iter().map(|o| o.name.clone()));
        let headers: Vec<&str> = headers.iter().map(String::as_str).collect();
        let width = problem.n_vars() + problem.objectives.len();
        let rows: Vec<_> = table
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![num(r.alpha), if r.feasible { "yes" } else { "no" }.into()];
                match (&r.x, &r.z) {
                    (Some(x), Some(z)) => row.extend(x.iter().chain(z).map(|v| num(*v))),
                    _ => row.extend(std::iter::repeat_n("-".to_string(), width)),
                }
                row
            })
            .collect();
        self.table(&headers, &rows)
    }

    fn report(&mut self, report: &ReproductionReport) -> Result<(), Failure> {
        let rows: Vec<_> = report
            .entries
            .iter()
            .map(|e| {
                vec![
                    e.quantity.clone(),
                    opt(e.reference),
                    opt(e.computed),
                    e.criterion.to_string(),
                    match e.status {
                        EntryStatus::Pass => "pass",
                        EntryStatus::Fail => "FAIL",
                        EntryStatus::ExpectedMismatch => "expected mismatch",
                    }
                    .to_string(),
                ]
            })
            .collect();
        self.table(&["quantity", "reference", "computed", "criterion", "status"], &rows)?;
        for e in &report.errors {
            self.line(&format!("solver error: {e}"))?;
        }
        Ok(())
    }
}

fn output_failure(e: io::Error) -> Failure {
    Failure {
        code: EXIT_INTERNAL,
        message: format!("cannot write output: {e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(
            std::iter::once("fuzzylp").chain(args.iter().copied()),
            &mut out,
            &mut err,
            false,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn missing_file_is_input_error() {
        let (code, _, err) = run(&["solve", "/nonexistent/missing.json"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("cannot read"));
    }

    #[test]
    fn bad_arguments_are_input_errors() {
        assert_eq!(run(&["solve"]).0, EXIT_INPUT);
        assert_eq!(run(&["bogus"]).0, EXIT_INPUT);
        assert_eq!(run(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn grid_has_steps_plus_one_levels() {
        let g = grid(0.8, 1.0, 4).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g[4], 1.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(grid(0.5, 0.5, 3).is_err());
        assert!(grid(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn case_study_prints_tables() {
        let (code, out, _) = run(&["case-study"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("26301.2840"));
        assert!(out.contains("expected mismatch"));
        assert!(!out.contains("FAIL"));
        assert!(!out.contains('\x1b'));
    }

    #[test]
    fn narrative_variant_is_infeasible() {
        let (code, _, err) = run(&["case-study", "--variant", "narrative"]);
        assert_eq!(code, EXIT_INFEASIBLE);
        assert!(err.contains("empty"));
    }
}
