//! Python bindings: `pyequihom`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use equihom::coefficients::{point_homology as point_table, CoeffRing};
use equihom::grading::DegreeC2;
use equihom::groups::subgroups;
use equihom::io::{emit_result, OutputFormat, ResultFile};

fn err(e: equihom::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Runs the command line; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let mut argv = vec!["equihom".to_string()];
    argv.extend(args);
    let out = equihom::cli::run(&argv);
    (out.code, out.stdout, out.stderr)
}

/// The BBU_ℝ presentation as a result file in JSON.
#[pyfunction]
#[pyo3(signature = (truncation = 12, coeff = "z"))]
fn bbur(truncation: i64, coeff: &str) -> PyResult<String> {
    let coeff = CoeffRing::parse(coeff).map_err(err)?;
    equihom::specseq::check_truncation(truncation).map_err(err)?;
    let (_, pres) = equihom::cli::bbur_presentation(coeff, truncation).map_err(err)?;
    let mut r = ResultFile::new("bbur", &format!("bbur coeff={} trunc={truncation}", coeff.tag()));
    r.add_presentation(&pres);
    Ok(emit_result(&r, OutputFormat::Json))
}

/// `H_{a+bσ}(pt)` as a list of `(level, group)` from the top level down.
#[pyfunction]
#[pyo3(signature = (a, b, coeff = "f2"))]
fn point_homology(a: i64, b: i64, coeff: &str) -> PyResult<Vec<(String, String)>> {
    let coeff = CoeffRing::parse(coeff).map_err(err)?;
    let table = point_table(coeff, DegreeC2::new(a, b)).map_err(err)?;
    Ok(subgroups(table.group())
        .into_iter()
        .rev()
        .map(|h| (h.to_string(), table.level(h).to_string()))
        .collect())
}

/// Runs the self-checks; returns `(id, name, passed, detail)` per criterion.
#[pyfunction]
fn check() -> Vec<(String, String, bool, String)> {
    equihom::check::run_all()
        .into_iter()
        .map(|c| (c.id, c.name, c.passed, c.detail))
        .collect()
}

#[pymodule]
fn pyequihom(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(bbur, m)?)?;
    m.add_function(wrap_pyfunction!(point_homology, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}
