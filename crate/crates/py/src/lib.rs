//! Python bindings. Structured reports come back as plain dicts.

use std::f64::consts::PI;
use std::fs::File;
use std::io::BufWriter;

use cmc1_core::classifier::{enumerate_low_ta, gauss_bonnet_ta, minimal_surface_table, odd_ends_bound, render_table};
use cmc1_core::expr::BranchState;
use cmc1_core::families::{
    make_catenoid_cousin, make_catenoid_cover, make_enneper_cousin, make_horosphere, make_warped_catenoid, WeierstrassData,
};
use cmc1_core::frobenius::o23_log_term;
use cmc1_core::invariants::{metric_product_check, schwarzian_identity_check, total_absolute_curvature, QuadratureSpec};
use cmc1_core::lift::{IntegratorOptions, LiftSource};
use cmc1_core::mesh::{sample_mesh, GridSpec, MeshDiagnostics, SurfaceMesh};
use cmc1_core::monodromy::{check_trig_lemma, fuzz, FuzzKind};
use cmc1_core::Error;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    match e {
        Error::InvalidParams(_) | Error::Hypothesis(_) => PyValueError::new_err(e.to_string()),
        e => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn source(data: &WeierstrassData, closed_form: bool, tol: f64) -> PyResult<LiftSource> {
    if !closed_form {
        return Ok(LiftSource::Numeric(IntegratorOptions { tol, ..Default::default() }));
    }
    if data.closed_form.is_none() {
        return Err(PyValueError::new_err(format!("{} has no closed-form lift", data.name)));
    }
    Ok(LiftSource::ClosedForm)
}

/// Weierstrass data `(g, omega)` of one of the built-in families.
#[pyclass(frozen, module = "cmc1")]
struct Family {
    data: WeierstrassData,
}

#[pymethods]
impl Family {
    #[staticmethod]
    fn horosphere() -> Self {
        Family { data: make_horosphere() }
    }

    #[staticmethod]
    fn enneper_cousin() -> Self {
        Family { data: make_enneper_cousin() }
    }

    #[staticmethod]
    fn catenoid_cousin(mu: f64) -> PyResult<Self> {
        Ok(Family { data: make_catenoid_cousin(mu).map_err(err)? })
    }

    #[staticmethod]
    fn catenoid_cover(mu: f64, delta: u32) -> PyResult<Self> {
        Ok(Family { data: make_catenoid_cover(mu, delta).map_err(err)? })
    }

    #[staticmethod]
    fn warped_catenoid(delta: u32, l: u32, b: f64) -> PyResult<Self> {
        Ok(Family { data: make_warped_catenoid(delta, l, b).map_err(err)? })
    }

    #[getter]
    fn name(&self) -> String {
        self.data.name.clone()
    }

    #[getter]
    fn flat(&self) -> bool {
        self.data.flat
    }

    #[getter]
    fn cover_degree(&self) -> u32 {
        self.data.cover_degree
    }

    #[getter]
    fn type_label(&self) -> String {
        self.data.type_spec().type_label()
    }

    /// Principal branch.
    fn gauss_map(&self, z: Complex64) -> Complex64 {
        self.data.g.eval(z)
    }

    /// Coefficient of `dz^2` in the Hopf differential.
    fn hopf(&self, z: Complex64) -> Complex64 {
        self.data.hopf().eval(z)
    }

    #[pyo3(signature = (abs_tol = 1e-9, rel_tol = 1e-8, max_cells = 2000))]
    fn total_absolute_curvature(&self, py: Python<'_>, abs_tol: f64, rel_tol: f64, max_cells: usize) -> PyResult<Py<PyAny>> {
        let spec = QuadratureSpec { abs_tol, rel_tol, max_cells, ..Default::default() };
        let r = py.detach(|| total_absolute_curvature(&self.data, &spec)).map_err(err)?;
        to_py(py, &r)
    }

    /// Total absolute curvature from the end and umbilic orders alone.
    fn gauss_bonnet_ta(&self) -> PyResult<f64> {
        gauss_bonnet_ta(&self.data.type_spec()).map_err(err)
    }

    fn metric_product(&self, py: Python<'_>, z: Complex64) -> PyResult<Py<PyAny>> {
        to_py(py, &metric_product_check(&self.data, z).map_err(err)?)
    }

    #[pyo3(signature = (z, closed_form = false))]
    fn schwarzian(&self, py: Python<'_>, z: Complex64, closed_form: bool) -> PyResult<Py<PyAny>> {
        let src = source(&self.data, closed_form, IntegratorOptions::default().tol)?;
        to_py(py, &schwarzian_identity_check(&self.data, src, &BranchState::new(z)).map_err(err)?)
    }

    #[pyo3(signature = (r_min = 0.25, r_max = 4.0, nr = 24, ntheta = 48, theta = None, closed_form = false, tol = 1e-13))]
    #[allow(clippy::too_many_arguments)]
    fn mesh(
        &self,
        py: Python<'_>,
        r_min: f64,
        r_max: f64,
        nr: usize,
        ntheta: usize,
        theta: Option<(f64, f64)>,
        closed_form: bool,
        tol: f64,
    ) -> PyResult<Mesh> {
        let src = source(&self.data, closed_form, tol)?;
        let grid = GridSpec { r_min, r_max, nr, ntheta, theta };
        let mesh = py.detach(|| sample_mesh(&self.data, src, &grid)).map_err(err)?;
        Ok(Mesh { mesh, data: self.data.clone(), source: src })
    }

    fn __repr__(&self) -> String {
        format!("Family({}, {})", self.data.name, self.data.type_spec().type_label())
    }
}

/// Polar-grid mesh in the ball model.
#[pyclass(frozen, module = "cmc1")]
struct Mesh {
    mesh: SurfaceMesh,
    data: WeierstrassData,
    source: LiftSource,
}

#[pymethods]
impl Mesh {
    #[getter]
    fn vertices(&self) -> Vec<(f64, f64, f64)> {
        self.mesh.vertices.iter().map(|p| (p.x, p.y, p.z)).collect()
    }

    /// Zero-based quads.
    #[getter]
    fn faces(&self) -> Vec<[usize; 4]> {
        self.mesh.faces.clone()
    }

    #[getter]
    fn det_drift(&self) -> f64 {
        self.mesh.det_drift
    }

    fn write_obj(&self, path: &str) -> PyResult<()> {
        let f = File::create(path).map_err(|e| PyRuntimeError::new_err(format!("{path}: {e}")))?;
        self.mesh.write_obj(BufWriter::new(f)).map_err(|e| PyRuntimeError::new_err(format!("{path}: {e}")))
    }

    /// Mean-curvature estimates at about `count` vertices, plus summary diagnostics.
    #[pyo3(signature = (count = 64, h_rel = 0.02))]
    fn curvature_survey(&self, py: Python<'_>, count: usize, h_rel: f64) -> PyResult<Py<PyAny>> {
        let survey = py.detach(|| self.mesh.curvature_survey(&self.data, self.source, count, h_rel)).map_err(err)?;
        let diag = MeshDiagnostics::new(&self.mesh, &survey);
        to_py(py, &serde_json::json!({ "diagnostics": diag, "samples": survey }))
    }

    fn __len__(&self) -> usize {
        self.mesh.vertices.len()
    }
}

/// Text rendering of the classification table: `"4pi"` or `"minimal"`.
#[pyfunction]
#[pyo3(signature = (table = "4pi"))]
fn classify_table(table: &str) -> PyResult<String> {
    match table {
        "4pi" => Ok(enumerate_low_ta(4.0 * PI).map_err(err)?.render_table()),
        "minimal" => Ok(render_table(&minimal_surface_table())),
        other => Err(PyValueError::new_err(format!("unknown table {other:?}; use \"4pi\" or \"minimal\""))),
    }
}

/// Full case analysis below `bound` (default 4 pi), including rejected branches.
#[pyfunction]
#[pyo3(signature = (bound = 4.0 * PI))]
fn classify(py: Python<'_>, bound: f64) -> PyResult<Py<PyAny>> {
    to_py(py, &enumerate_low_ta(bound).map_err(err)?)
}

#[pyfunction]
fn threenoid(py: Python<'_>, mu: [f64; 3], mu_sharp: [u32; 3]) -> PyResult<Py<PyAny>> {
    to_py(py, &cmc1_core::classifier::threenoid_contradiction(mu, mu_sharp).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (count, seed = 42))]
fn threenoid_sweep(py: Python<'_>, count: u64, seed: u64) -> PyResult<Py<PyAny>> {
    let r = py.detach(|| cmc1_core::classifier::threenoid_sweep(count, seed));
    to_py(py, &r)
}

#[pyfunction]
fn odd_ends_bound_ta(n: u32) -> PyResult<f64> {
    Ok(odd_ends_bound(n).map_err(err)?.bound)
}

/// Log-term report for `O(-2,-3)` data, or `None` when there is no integer resonance.
#[pyfunction]
fn log_term(py: Python<'_>, mu: f64, theta: f64) -> PyResult<Py<PyAny>> {
    to_py(py, &o23_log_term(mu, theta).map_err(err)?)
}

#[pyfunction]
fn trig_lemma(py: Python<'_>, t1: f64, t2: f64, t3: f64) -> PyResult<Py<PyAny>> {
    let r = check_trig_lemma(t1, t2, t3);
    to_py(py, &serde_json::json!({ "e": r.e, "applicable": r.applicable, "holds": r.holds(), "margin": r.margin() }))
}

/// Randomized SU(2) suite: `"trig"`, `"product"` or `"odd-product"`.
#[pyfunction]
#[pyo3(signature = (kind, count, seed = 42, m = 3))]
fn fuzz_su2(py: Python<'_>, kind: &str, count: u64, seed: u64, m: usize) -> PyResult<Py<PyAny>> {
    let kind = match kind {
        "trig" => FuzzKind::Trig,
        "product" => FuzzKind::Product,
        "odd-product" => FuzzKind::OddProduct,
        other => return Err(PyValueError::new_err(format!("unknown suite {other:?}"))),
    };
    let r = py.detach(|| fuzz(kind, count, seed, m));
    to_py(py, &r)
}

#[pymodule]
fn cmc1(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Family>()?;
    m.add_class::<Mesh>()?;
    m.add_function(wrap_pyfunction!(classify_table, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(threenoid, m)?)?;
    m.add_function(wrap_pyfunction!(threenoid_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(odd_ends_bound_ta, m)?)?;
    m.add_function(wrap_pyfunction!(log_term, m)?)?;
    m.add_function(wrap_pyfunction!(trig_lemma, m)?)?;
    m.add_function(wrap_pyfunction!(fuzz_su2, m)?)?;
    Ok(())
}
