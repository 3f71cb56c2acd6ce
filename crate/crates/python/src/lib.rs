//! Python bindings: `import flatmodels`.
//!
//! Counts come back as Python ints (arbitrary precision); records come back
//! as dicts with the same keys the CLI uses in its JSON output.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use flatmodels::census as census_mod;
use flatmodels::verify::{run_suite, Suite};
use flatmodels::{formula, oracle, BigUint, Error, LaurentPoly, RamificationInput};

fn py_err(err: Error) -> PyErr {
    if err.is_inconsistency() {
        PyRuntimeError::new_err(err.to_string())
    } else {
        PyValueError::new_err(err.to_string())
    }
}

/// GF(p^k) with its smallest-lex monic irreducible modulus. Elements are
/// lists of k residues, constant coordinate first.
#[pyclass(name = "FieldSpec", frozen)]
struct PyFieldSpec {
    inner: Arc<flatmodels::FieldSpec>,
}

impl PyFieldSpec {
    fn el(&self, coeffs: Vec<u32>) -> PyResult<flatmodels::FieldElement> {
        self.inner.element(&coeffs).map_err(py_err)
    }
}

#[pymethods]
impl PyFieldSpec {
    #[new]
    #[pyo3(signature = (p, k=1))]
    fn new(p: u32, k: u32) -> PyResult<Self> {
        let inner = flatmodels::FieldSpec::new(p, k).map_err(py_err)?;
        Ok(PyFieldSpec {
            inner: Arc::new(inner),
        })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    /// Modulus coefficients, constant term first.
    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.inner.modulus().to_vec()
    }

    fn elements(&self) -> Vec<Vec<u32>> {
        self.inner
            .elements()
            .into_iter()
            .map(|e| e.coeffs().to_vec())
            .collect()
    }

    fn add(&self, a: Vec<u32>, b: Vec<u32>) -> PyResult<Vec<u32>> {
        Ok(self.inner.add(&self.el(a)?, &self.el(b)?).coeffs().to_vec())
    }

    fn mul(&self, a: Vec<u32>, b: Vec<u32>) -> PyResult<Vec<u32>> {
        Ok(self.inner.mul(&self.el(a)?, &self.el(b)?).coeffs().to_vec())
    }

    fn inv(&self, a: Vec<u32>) -> PyResult<Vec<u32>> {
        let inv = self.inner.inv(&self.el(a)?).map_err(py_err)?;
        Ok(inv.coeffs().to_vec())
    }

    fn __repr__(&self) -> String {
        format!("FieldSpec(p={}, k={})", self.inner.p(), self.inner.k())
    }
}

/// A ramification datum (p, e) with e = (p-1) e0 + e1.
#[pyclass(name = "Ramification", frozen)]
struct PyRamification {
    inner: RamificationInput,
}

#[pymethods]
impl PyRamification {
    #[new]
    fn new(p: u32, e: u32) -> PyResult<Self> {
        let inner = RamificationInput::new(p, e).map_err(py_err)?;
        Ok(PyRamification { inner })
    }

    #[getter]
    fn p(&self) -> i64 {
        self.inner.p()
    }

    #[getter]
    fn e(&self) -> i64 {
        self.inner.e()
    }

    #[getter]
    fn e0(&self) -> i64 {
        self.inner.e0()
    }

    #[getter]
    fn e1(&self) -> i64 {
        self.inner.e1()
    }

    /// (n0, n1, n0', n1') for weight n.
    fn decompose_n(&self, n: u32) -> (i64, i64, i64, i64) {
        let w = formula::decompose_n(&self.inner, n);
        (w.n0, w.n1, w.n0p, w.n1p)
    }

    fn coeff_a(&self, n: u32) -> u64 {
        formula::coeff_a(&self.inner, n)
    }

    fn coeff_a_prime(&self, n: u32) -> u64 {
        formula::coeff_a_prime(&self.inner, n)
    }

    /// The list c_n = a_n + a'_n for n = 0..=e.
    fn coefficients(&self) -> PyResult<Vec<u64>> {
        let table = formula::coefficient_table(&self.inner).map_err(py_err)?;
        Ok(table.coefficients())
    }

    fn model_count(&self, q: u64) -> PyResult<BigUint> {
        let c = formula::model_count(&self.inner, q).map_err(py_err)?;
        Ok(c.0)
    }

    fn census_count(&self, q: u64) -> PyResult<BigUint> {
        let c = census_mod::census_count(&self.inner, q).map_err(py_err)?;
        Ok(c.0)
    }

    /// [(n, c_n)] with c_n > 0.
    fn zeta_factors(&self, q: u64) -> PyResult<Vec<(u32, u64)>> {
        let z = formula::zeta_factors(&self.inner, q).map_err(py_err)?;
        Ok(z.factors)
    }

    fn dimension(&self) -> PyResult<u32> {
        formula::moduli_dimension(&self.inner).map_err(py_err)
    }

    fn r_st(&self, s: i64, t: i64) -> PyResult<i64> {
        census_mod::r_st(&self.inner, s, t).map_err(py_err)
    }

    /// Cells as dicts with keys s, t, case, r, h.
    fn census<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let cells = census_mod::census(&self.inner).map_err(py_err)?;
        cells
            .into_iter()
            .map(|c| {
                let d = PyDict::new(py);
                d.set_item("s", c.s)?;
                d.set_item("t", c.t)?;
                d.set_item("case", c.case_tag.as_str())?;
                d.set_item("r", c.r)?;
                d.set_item("h", c.h)?;
                Ok(d)
            })
            .collect()
    }

    /// (|S_n1|, |S_n2|, |S'_n1|, |S'_n2|).
    fn partition_sizes(&self, n: u32) -> PyResult<(u64, u64, u64, u64)> {
        let s = census_mod::partition_sizes(&self.inner, n).map_err(py_err)?;
        Ok((s.s_n1, s.s_n2, s.s_n1p, s.s_n2p))
    }

    /// Brute-force count over GF(p^k); same keys as the CLI's oracle JSON.
    #[pyo3(signature = (k=1))]
    fn oracle<'py>(&self, py: Python<'py>, k: u32) -> PyResult<Bound<'py, PyDict>> {
        let spec = flatmodels::FieldSpec::new(self.inner.p() as u32, k).map_err(py_err)?;
        let report = oracle::oracle_count(&self.inner, &Arc::new(spec)).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("p", report.p)?;
        d.set_item("e", report.e)?;
        d.set_item("q", report.q)?;
        let cells: Vec<(i64, i64, u64)> =
            report.cells.iter().map(|c| (c.s, c.t, c.count)).collect();
        d.set_item("cells", cells)?;
        d.set_item("total", report.total.0)?;
        d.set_item("cross_check_failures", report.cross_check_failures)?;
        Ok(d)
    }

    /// Evaluates both forms of the lattice condition on the twist
    /// `v = sum coeff * u^exp`, given as {exp: coordinates}.
    fn conditions(
        &self,
        field: &PyFieldSpec,
        s: i64,
        t: i64,
        twist: std::collections::BTreeMap<i64, Vec<u32>>,
    ) -> PyResult<(bool, bool)> {
        let terms = twist
            .into_iter()
            .map(|(exp, c)| Ok((exp, field.el(c)?)))
            .collect::<PyResult<Vec<_>>>()?;
        let v = LaurentPoly::from_terms(field.inner.clone(), terms).map_err(py_err)?;
        Ok((
            oracle::valuation_condition(&self.inner, s, t, &v),
            oracle::matrix_condition(&self.inner, s, t, &v),
        ))
    }

    fn __repr__(&self) -> String {
        format!("Ramification(p={}, e={})", self.inner.p(), self.inner.e())
    }
}

/// Total, Aut(C) order and middle orbit size for K = Q_p(zeta_p), F = F_p.
#[pyfunction]
fn example_decomposition(py: Python<'_>, p: u32) -> PyResult<Bound<'_, PyDict>> {
    let d = formula::example_decomposition(p).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("total", d.total.0)?;
    out.set_item("aut_order", d.aut_order)?;
    out.set_item("middle_orbit", d.middle_orbit)?;
    Ok(out)
}

/// Runs the cross-check suite; returns [(name, passed, detail)].
#[pyfunction]
#[pyo3(signature = (suite="quick"))]
fn verify(py: Python<'_>, suite: &str) -> PyResult<Vec<(String, bool, String)>> {
    let suite: Suite = suite.parse().map_err(PyValueError::new_err)?;
    let outcomes = py.detach(|| run_suite(suite));
    Ok(outcomes
        .into_iter()
        .map(|o| (o.name.to_string(), o.passed, o.detail))
        .collect())
}

#[pymodule]
#[pyo3(name = "flatmodels")]
fn flatmodels_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFieldSpec>()?;
    m.add_class::<PyRamification>()?;
    m.add_function(wrap_pyfunction!(example_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pyo3::types::PyModule;

    #[test]
    fn module_round_trip() {
        Python::initialize();
        Python::attach(|py| {
            let m = PyModule::new(py, "flatmodels").unwrap();
            flatmodels_py(&m).unwrap();
            let r = m.getattr("Ramification").unwrap().call1((5, 4)).unwrap();
            let count: u64 = r.call_method1("model_count", (5,)).unwrap().extract().unwrap();
            assert_eq!(count, 8);
            let err = r.call_method1("model_count", (9,)).unwrap_err();
            assert!(err.is_instance_of::<PyValueError>(py));
        });
    }
}
