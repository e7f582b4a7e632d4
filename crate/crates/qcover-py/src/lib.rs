//! Python bindings. The plain functions in [`api`] do the work and are usable
//! from Rust; the module below wraps them for Python.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

pub mod api {
    use qcover::braid::{Braid, BraidWord};
    use qcover::cover::Cover;
    use qcover::expr::{Evaluator, Value};
    use qcover::root::CartanDatum;
    use qcover::scalar::qbinom_at;
    use qcover::verify::{self, Suite};
    use std::sync::Arc;

    /// A preset name (b2super, a2, spin, rank1-odd) or datum JSON text.
    pub fn datum(spec: &str) -> Result<CartanDatum, String> {
        match spec.trim() {
            "b2super" | "b2-super" => Ok(CartanDatum::b2_super()),
            "a2" => Ok(CartanDatum::a2()),
            "spin" => Ok(CartanDatum::spin_rank2()),
            "rank1-odd" => Ok(CartanDatum::rank1_odd()),
            text if text.starts_with('{') => CartanDatum::from_json(text).map_err(|e| e.to_string()),
            other => Err(format!("unknown datum '{other}'")),
        }
    }

    fn braid(spec: &str) -> Result<Braid, String> {
        Ok(Braid::new(Arc::new(Cover::new(Arc::new(datum(spec)?)))))
    }

    pub fn validate(spec: &str) -> Result<String, String> {
        datum(spec).map(|d| d.to_json())
    }

    pub fn evaluate(expr: &str, spec: &str) -> Result<String, String> {
        let b = braid(spec)?;
        let ev = Evaluator::new(&b);
        ev.eval_str(expr).map(|v| ev.render(&v)).map_err(|e| e.to_string())
    }

    pub fn apply_braid(word: &str, expr: &str, spec: &str) -> Result<String, String> {
        let b = braid(spec)?;
        let w = BraidWord::parse(word, b.cover().rank()).map_err(|e| e.to_string())?;
        let ev = Evaluator::new(&b);
        let x = match ev.eval_str(expr).map_err(|e| e.to_string())? {
            Value::Scalar(c) => b.cover().scalar(c),
            Value::Cover(x) => x,
            Value::Half(_) => return Err("braid symmetries act on U, not on the half algebra".into()),
        };
        Ok(ev.render(&Value::Cover(b.apply_word(&w, &x))))
    }

    pub fn qbinom(n: i64, k: i64, d: i64) -> Result<String, String> {
        if k < 0 || d < 1 {
            return Err("need k >= 0 and d >= 1".into());
        }
        Ok(qbinom_at(n, k, d, d).to_string())
    }

    /// Report of one suite (or all, for `None`) as JSON.
    pub fn verify(suite: Option<&str>, spec: &str) -> Result<String, String> {
        let cover = Arc::new(Cover::new(Arc::new(datum(spec)?)));
        let reports = match suite {
            Some(name) => vec![verify::run(name.parse::<Suite>().map_err(|e| e.to_string())?, &cover)],
            None => verify::run_all(&cover),
        };
        let passed = reports.iter().all(|r| r.passed());
        let j = serde_json::json!({ "schema": 1, "passed": passed, "suites": reports });
        Ok(j.to_string())
    }
}

fn wrap<T>(r: Result<T, String>) -> PyResult<T> {
    r.map_err(PyValueError::new_err)
}

/// Canonical JSON of a datum given as a preset name or JSON text.
#[pyfunction]
#[pyo3(signature = (datum = "b2super"))]
fn validate(datum: &str) -> PyResult<String> {
    wrap(api::validate(datum))
}

/// Normal form of an expression, as text.
#[pyfunction]
#[pyo3(signature = (expr, datum = "b2super"))]
fn evaluate(expr: &str, datum: &str) -> PyResult<String> {
    wrap(api::evaluate(expr, datum))
}

#[pyfunction]
#[pyo3(signature = (word, expr, datum = "b2super"))]
fn apply_braid(word: &str, expr: &str, datum: &str) -> PyResult<String> {
    wrap(api::apply_braid(word, expr, datum))
}

#[pyfunction]
#[pyo3(signature = (n, k, d = 1))]
fn qbinom(n: i64, k: i64, d: i64) -> PyResult<String> {
    wrap(api::qbinom(n, k, d))
}

/// JSON report; pass `suite=None` for every suite.
#[pyfunction]
#[pyo3(signature = (suite = None, datum = "b2super"))]
fn verify(suite: Option<&str>, datum: &str) -> PyResult<String> {
    wrap(api::verify(suite, datum))
}

#[pymodule]
fn qcover_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(apply_braid, m)?)?;
    m.add_function(wrap_pyfunction!(qbinom, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
