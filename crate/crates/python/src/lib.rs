//! Python bindings for `fuzzylp`.
//!
//! Solutions are returned as plain dictionaries with the same fields as the
//! JSON result documents.

use fuzzylp::case_study::{concrete_plant_dataset, reproduce_tables, CaseStudyVariant};
use fuzzylp::io::{parse_problem, serialize_problem};
use fuzzylp::lp::{self, LinearProgram, LpOutcome, Relation, Row, Sense};
use fuzzylp::{DecisionProblem, SolveError, SolverConfig};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(pyfuzzylp, FuzzyLpError, PyException);
create_exception!(pyfuzzylp, InfeasibleError, FuzzyLpError);

fn solve_err(e: SolveError) -> PyErr {
    if e.is_infeasibility() {
        InfeasibleError::new_err(e.to_string())
    } else {
        FuzzyLpError::new_err(e.to_string())
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| FuzzyLpError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A validated problem together with its solver configuration.
#[pyclass(name = "Problem", module = "pyfuzzylp")]
struct PyProblem {
    problem: DecisionProblem,
    config: SolverConfig,
}

#[pymethods]
impl PyProblem {
    /// Parses a JSON problem file.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let (problem, config) =
            parse_problem(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self { problem, config })
    }

    /// The concrete plant delivery study, `"full"` or `"narrative"`.
    #[staticmethod]
    #[pyo3(signature = (variant = "full"))]
    fn case_study(variant: &str) -> PyResult<Self> {
        let v = match variant {
            "full" => CaseStudyVariant::canonical(),
            "narrative" => CaseStudyVariant::narrative(),
            other => return Err(PyValueError::new_err(format!("unknown variant {other:?}"))),
        };
        let data = concrete_plant_dataset(&v);
        Ok(Self {
            problem: data.problem,
            config: data.config,
        })
    }

    fn to_json(&self) -> String {
        serialize_problem(&self.problem, &self.config)
    }

    /// Validation messages; empty when the problem is well formed.
    fn validate(&self) -> Vec<String> {
        fuzzylp::validate(&self.problem, &self.config)
            .issues
            .iter()
            .map(|i| i.to_string())
            .collect()
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.problem.variable_names.clone()
    }

    #[getter]
    fn objectives(&self) -> Vec<String> {
        self.problem.objectives.iter().map(|o| o.name.clone()).collect()
    }

    #[getter]
    fn alpha_lower(&self) -> f64 {
        self.config.alpha_lower
    }

    #[setter]
    fn set_alpha_lower(&mut self, value: f64) {
        self.config.alpha_lower = value;
    }

    fn __repr__(&self) -> String {
        format!(
            "Problem(n={}, k={}, m={})",
            self.problem.n_vars(),
            self.problem.objectives.len(),
            self.problem.constraints.len()
        )
    }
}

#[pyfunction]
fn solve_maxmin<'py>(py: Python<'py>, problem: &PyProblem) -> PyResult<Bound<'py, PyAny>> {
    let s = fuzzylp::solve_maxmin(&problem.problem, &problem.config).map_err(solve_err)?;
    to_py(py, &s)
}

#[pyfunction]
fn solve_augmented<'py>(py: Python<'py>, problem: &PyProblem) -> PyResult<Bound<'py, PyAny>> {
    let s = fuzzylp::solve_augmented(&problem.problem, &problem.config).map_err(solve_err)?;
    to_py(py, &s)
}

#[pyfunction]
fn two_phase_refine<'py>(py: Python<'py>, problem: &PyProblem) -> PyResult<Bound<'py, PyAny>> {
    let s = fuzzylp::two_phase_refine(&problem.problem, &problem.config).map_err(solve_err)?;
    to_py(py, &s)
}

#[pyfunction]
fn individual_optima<'py>(py: Python<'py>, problem: &PyProblem) -> PyResult<Bound<'py, PyAny>> {
    let r = fuzzylp::individual_optima(&problem.problem, &problem.config).map_err(solve_err)?;
    to_py(py, &r)
}

#[pyfunction]
fn solve_fuzzy<'py>(py: Python<'py>, problem: &PyProblem) -> PyResult<Bound<'py, PyAny>> {
    let s = fuzzylp::solve_fuzzy_augmented(&problem.problem, &problem.config).map_err(solve_err)?;
    to_py(py, &s)
}

#[pyfunction]
fn alpha_sweep<'py>(
    py: Python<'py>,
    problem: &PyProblem,
    grid: Vec<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let t = fuzzylp::alpha_sweep(&problem.problem, &problem.config, &grid).map_err(solve_err)?;
    to_py(py, &t)
}

/// Checks the embedded case study against its reference tables.
#[pyfunction(name = "reproduce_tables")]
fn py_reproduce_tables(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    let cfg = concrete_plant_dataset(&CaseStudyVariant::canonical()).config;
    to_py(py, &reproduce_tables(&cfg))
}

/// Solves `sense cᵀx` subject to `rows` and `x ≥ 0`; each row is
/// `(coefficients, relation, rhs)` with relation `"<="`, `">="` or `"="`.
#[pyfunction]
#[pyo3(signature = (objective, rows, sense = "maximize"))]
fn solve_lp<'py>(
    py: Python<'py>,
    objective: Vec<f64>,
    rows: Vec<(Vec<f64>, String, f64)>,
    sense: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let sense = match sense {
        "maximize" => Sense::Maximize,
        "minimize" => Sense::Minimize,
        other => return Err(PyValueError::new_err(format!("unknown sense {other:?}"))),
    };
    let rows = rows
        .into_iter()
        .map(|(c, rel, rhs)| {
            let relation = match rel.as_str() {
                "<=" => Relation::Le,
                ">=" => Relation::Ge,
                "=" => Relation::Eq,
                other => return Err(PyValueError::new_err(format!("unknown relation {other:?}"))),
            };
            Ok(Row::new(c, relation, rhs))
        })
        .collect::<PyResult<Vec<_>>>()?;
    let lp = LinearProgram::new(sense, objective, rows);
    let outcome =
        lp::solve(&lp, &SolverConfig::default()).map_err(|e| FuzzyLpError::new_err(e.to_string()))?;
    #[derive(Serialize)]
    struct Out {
        status: &'static str,
        x: Option<Vec<f64>>,
        value: Option<f64>,
    }
    let out = match outcome {
        LpOutcome::Optimal(s) => Out {
            status: "optimal",
            x: Some(s.x),
            value: Some(s.value),
        },
        LpOutcome::Infeasible => Out {
            status: "infeasible",
            x: None,
            value: None,
        },
        LpOutcome::Unbounded => Out {
            status: "unbounded",
            x: None,
            value: None,
        },
    };
    to_py(py, &out)
}

#[pymodule]
fn pyfuzzylp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProblem>()?;
    m.add("FuzzyLpError", m.py().get_type::<FuzzyLpError>())?;
    m.add("InfeasibleError", m.py().get_type::<InfeasibleError>())?;
    m.add_function(wrap_pyfunction!(solve_maxmin, m)?)?;
    m.add_function(wrap_pyfunction!(solve_augmented, m)?)?;
    m.add_function(wrap_pyfunction!(two_phase_refine, m)?)?;
    m.add_function(wrap_pyfunction!(individual_optima, m)?)?;
    m.add_function(wrap_pyfunction!(solve_fuzzy, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(py_reproduce_tables, m)?)?;
    m.add_function(wrap_pyfunction!(solve_lp, m)?)?;
    Ok(())
}
