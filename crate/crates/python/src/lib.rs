//! Python bindings: build reports from JSON data, multiply in the affine
//! Hecke algebra, run the identity suite and count extended quotients.

use std::sync::Arc;

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twisted_hecke::hecke_algebras::relations::{random_vectors, run_suite};
use twisted_hecke::hecke_algebras::{AffineDescriptor, HeckeElement};
use twisted_hecke::langlands_pipeline::{self, HeckeReport, InertialDatum, EXAMPLES};
use twisted_hecke::parameter_engine;
use twisted_hecke::spectra::{extended_quotient_count, FiniteTorusPoint};
use twisted_hecke::Error;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// The algebra attached to an inertial datum, with its summary data.
#[pyclass(frozen, name = "Report")]
struct PyReport {
    inner: HeckeReport,
    algebra: Arc<AffineDescriptor>,
}

#[pymethods]
impl PyReport {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let datum = InertialDatum::from_json(text).map_err(py_err)?;
        let inner = langlands_pipeline::assemble(&datum).map_err(py_err)?;
        let algebra = Arc::new(inner.descriptor.clone());
        Ok(PyReport { inner, algebra })
    }

    #[staticmethod]
    fn example(name: &str) -> PyResult<Self> {
        let datum = langlands_pipeline::example(name).map_err(|e| PyKeyError::new_err(e.to_string()))?;
        let inner = langlands_pipeline::assemble(&datum).map_err(py_err)?;
        let algebra = Arc::new(inner.descriptor.clone());
        Ok(PyReport { inner, algebra })
    }

    #[getter]
    fn root_system(&self) -> String {
        self.inner.root_system.clone()
    }

    #[getter]
    fn reduced_root_system(&self) -> String {
        self.inner.reduced_root_system.clone()
    }

    #[getter]
    fn weyl_order(&self) -> usize {
        self.inner.weyl_order
    }

    #[getter]
    fn rgroup_order(&self) -> usize {
        self.inner.rgroup_order
    }

    #[getter]
    fn torus_dim(&self) -> usize {
        self.inner.torus_dim
    }

    /// `(label, λ, λ*)` per simple root.
    #[getter]
    fn parameters(&self) -> Vec<(String, i64, Option<i64>)> {
        self.inner.simple_roots.iter().map(|s| (s.label.clone(), s.lambda, s.lambda_star)).collect()
    }

    #[getter]
    fn relations(&self) -> Vec<String> {
        self.inner.specialization.iter().map(|r| r.latex.clone()).collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn algebra(&self) -> PyAlgebra {
        PyAlgebra { desc: self.algebra.clone() }
    }

    /// Size of the twisted extended quotient over points of order dividing `order`.
    fn count(&self, order: usize) -> PyResult<usize> {
        if order == 0 {
            return Err(PyValueError::new_err("order must be positive"));
        }
        let d = &self.algebra;
        let pts = FiniteTorusPoint::all_of_order_dividing(d.rank(), order);
        Ok(extended_quotient_count(d.group(), d.cocycle(), &pts).map_err(py_err)?.total)
    }

    fn __repr__(&self) -> String {
        format!("Report({}, |W| = {}, |R| = {})", self.inner.root_system, self.inner.weyl_order, self.inner.rgroup_order)
    }
}

#[pyclass(frozen, name = "Algebra")]
struct PyAlgebra {
    desc: Arc<AffineDescriptor>,
}

#[pymethods]
impl PyAlgebra {
    #[getter]
    fn rank(&self) -> usize {
        self.desc.rank()
    }

    #[getter]
    fn num_simple(&self) -> usize {
        self.desc.num_simple()
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.desc.nvars()
    }

    fn one(&self) -> PyElement {
        self.wrap(HeckeElement::one(&self.desc))
    }

    fn simple(&self, k: usize) -> PyResult<PyElement> {
        if k >= self.desc.num_simple() {
            return Err(PyValueError::new_err(format!("no simple reflection {k}")));
        }
        Ok(self.wrap(HeckeElement::simple(&self.desc, k)))
    }

    fn theta(&self, x: Vec<i64>) -> PyResult<PyElement> {
        if x.len() != self.desc.rank() {
            return Err(PyValueError::new_err(format!("expected {} coordinates", self.desc.rank())));
        }
        Ok(self.wrap(HeckeElement::theta(&self.desc, x)))
    }

    /// Runs the relation suite; returns `(name, passed, detail)` rows.
    #[pyo3(signature = (seed = 7, triples = 20))]
    fn check(&self, seed: u64, triples: usize) -> PyResult<Vec<(String, bool, String)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs = random_vectors(&mut rng, self.desc.rank(), 10, 2);
        let rows = run_suite("algebra", &self.desc, &mut rng, &xs, triples).map_err(py_err)?;
        Ok(rows.into_iter().map(|c| (c.name, c.passed, c.detail)).collect())
    }
}

impl PyAlgebra {
    fn wrap(&self, e: HeckeElement) -> PyElement {
        PyElement { desc: self.desc.clone(), elem: e }
    }
}

#[pyclass(frozen, name = "Element")]
struct PyElement {
    desc: Arc<AffineDescriptor>,
    elem: HeckeElement,
}

impl PyElement {
    fn same_algebra(&self, other: &PyElement) -> PyResult<()> {
        if Arc::ptr_eq(&self.desc, &other.desc) {
            Ok(())
        } else {
            Err(PyValueError::new_err("elements belong to different algebras"))
        }
    }
}

#[pymethods]
impl PyElement {
    fn __mul__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.same_algebra(other)?;
        let elem = self.desc.multiply(&self.elem, &other.elem).map_err(py_err)?;
        Ok(PyElement { desc: self.desc.clone(), elem })
    }

    fn __add__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.same_algebra(other)?;
        Ok(PyElement { desc: self.desc.clone(), elem: &self.elem + &other.elem })
    }

    fn __sub__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.same_algebra(other)?;
        Ok(PyElement { desc: self.desc.clone(), elem: &self.elem - &other.elem })
    }

    fn __neg__(&self) -> PyElement {
        PyElement { desc: self.desc.clone(), elem: -&self.elem }
    }

    fn __eq__(&self, other: &PyElement) -> bool {
        Arc::ptr_eq(&self.desc, &other.desc) && self.elem == other.elem
    }

    fn is_zero(&self) -> bool {
        self.elem.is_zero()
    }

    fn __repr__(&self) -> String {
        self.desc.format(&self.elem)
    }
}

#[pyfunction]
fn examples() -> Vec<&'static str> {
    EXAMPLES.iter().map(|(n, _)| *n).collect()
}

/// `(λ, λ*)` from the largest Jordan blocks `a, a′`.
#[pyfunction]
fn lambda_from_jordan(a: i64, a_prime: i64) -> PyResult<(i64, i64)> {
    let p = parameter_engine::lambda_from_jordan(a, a_prime).map_err(py_err)?;
    Ok((p.pair.lambda, p.pair.lambda_star))
}

#[pymodule]
fn twisted_hecke_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyReport>()?;
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyElement>()?;
    m.add_function(wrap_pyfunction!(examples, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_from_jordan, m)?)?;
    Ok(())
}
