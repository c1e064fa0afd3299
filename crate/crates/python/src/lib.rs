//! Python bindings. Reports cross the boundary as dictionaries decoded from
//! the same JSON the CLI prints.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use semilin::commutation::{check_gl_mapping, check_pgl_mapping, exhaustive_gl_search, sampled_gl_search, CheckMode};
use semilin::extendability::{
    classify_linear_subset, classify_projective_subset, transposition_report_linear, transposition_report_projective,
};
use semilin::gf::{enumerate_homs, FieldHom};
use semilin::io;
use semilin::linalg::{Matrix, Vector, VectorSpace};
use semilin::projective::{normalize, ProjectiveSpace};
use semilin::reconstruct::reconstruct_semilinear;
use semilin::suites::{run_suite as run_named_suite, SuiteConfig};

fn err(e: semilin::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_dict<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (value.to_string(),))
}

fn mode(exhaustive: bool) -> CheckMode {
    if exhaustive {
        CheckMode::Exhaustive
    } else {
        CheckMode::Generators
    }
}

/// A finite field GF(p^k) with q ≤ 81; elements are integers 0..q.
#[pyclass(frozen, eq, hash, skip_from_py_object, name = "Field")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyField(semilin::gf::Field);

#[pymethods]
impl PyField {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        spec.parse().map(PyField).map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.0.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.0.degree()
    }

    fn add(&self, a: u8, b: u8) -> PyResult<u8> {
        self.check(&[a, b])?;
        Ok(self.0.add(a, b))
    }

    fn mul(&self, a: u8, b: u8) -> PyResult<u8> {
        self.check(&[a, b])?;
        Ok(self.0.mul(a, b))
    }

    fn inv(&self, a: u8) -> PyResult<u8> {
        self.check(&[a])?;
        if a == 0 {
            return Err(PyValueError::new_err("zero has no inverse"));
        }
        Ok(self.0.inv(a))
    }

    /// Generator images of every embedding of this field into `target`.
    fn homomorphisms_into(&self, target: &PyField) -> Vec<u8> {
        enumerate_homs(&self.0, &target.0).iter().map(FieldHom::generator_image).collect()
    }

    fn __repr__(&self) -> String {
        format!("Field('{}')", self.0)
    }
}

impl PyField {
    fn check(&self, values: &[u8]) -> PyResult<()> {
        for &v in values {
            self.0.element(v).map_err(err)?;
        }
        Ok(())
    }
}

/// A map V → V' given by the image of every vector of V.
#[pyclass(frozen, name = "MappingTable")]
struct PyMappingTable(semilin::maps::MappingTable);

#[pymethods]
impl PyMappingTable {
    /// Build from `domain`/`codomain` such as "GF(2)^3" and one image per
    /// domain vector, in index order (first coordinate most significant).
    #[new]
    fn new(domain: &str, codomain: &str, images: Vec<Vec<u8>>) -> PyResult<Self> {
        let dom: VectorSpace = domain.parse().map_err(err)?;
        let cod: VectorSpace = codomain.parse().map_err(err)?;
        if let Some(bad) = images.iter().find(|r| r.len() != cod.dim()) {
            return Err(PyValueError::new_err(format!("image {bad:?} does not have {} coordinates", cod.dim())));
        }
        semilin::maps::MappingTable::from_raw(&dom, &cod, images.concat()).map(PyMappingTable).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::mapping_table_from_str(text).map(PyMappingTable).map_err(err)
    }

    fn to_json(&self) -> String {
        io::mapping_table_to_json(&self.0).to_string()
    }

    fn images(&self) -> Vec<Vec<u8>> {
        self.0.images().map(<[u8]>::to_vec).collect()
    }

    #[pyo3(signature = (exhaustive = false))]
    fn check_gl<'py>(&self, py: Python<'py>, exhaustive: bool) -> PyResult<Bound<'py, PyAny>> {
        let report = py.detach(|| check_gl_mapping(&self.0, mode(exhaustive))).map_err(err)?;
        to_dict(py, &io::gl_report_to_json(&report))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

/// A map between point sets of projective spaces, as point indices.
#[pyclass(frozen, name = "PointMap")]
struct PyPointMap(semilin::maps::PointMap);

#[pymethods]
impl PyPointMap {
    #[new]
    fn new(domain: &str, codomain: &str, table: Vec<usize>) -> PyResult<Self> {
        let dom: VectorSpace = domain.parse().map_err(err)?;
        let cod: VectorSpace = codomain.parse().map_err(err)?;
        semilin::maps::PointMap::new(&ProjectiveSpace::of(&dom), &ProjectiveSpace::of(&cod), table)
            .map(PyPointMap)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::point_map_from_str(text).map(PyPointMap).map_err(err)
    }

    fn to_json(&self) -> String {
        io::point_map_to_json(&self.0).to_string()
    }

    fn table(&self) -> Vec<usize> {
        self.0.table().to_vec()
    }

    #[pyo3(signature = (exhaustive = false))]
    fn check_pgl<'py>(&self, py: Python<'py>, exhaustive: bool) -> PyResult<Bound<'py, PyAny>> {
        let report = py.detach(|| check_pgl_mapping(&self.0, mode(exhaustive))).map_err(err)?;
        to_dict(py, &io::pgl_report_to_json(&report))
    }

    /// The semilinear map inducing this point map; raises ValueError carrying
    /// the failure certificate when there is none.
    fn reconstruct(&self) -> PyResult<PySemilinearMap> {
        reconstruct_semilinear(&self.0).map(PySemilinearMap).map_err(|e| {
            let cert = serde_json::to_value(&e).map(|v| v.to_string()).unwrap_or_default();
            PyValueError::new_err(format!("{e}: {cert}"))
        })
    }
}

/// x ↦ M·σ(x) for a field embedding σ and a matrix M over the target field.
#[pyclass(frozen, name = "SemilinearMap")]
struct PySemilinearMap(semilin::semilinear::SemilinearMap);

#[pymethods]
impl PySemilinearMap {
    #[new]
    fn new(source: &PyField, target: &PyField, generator_image: u8, matrix: Vec<Vec<u8>>) -> PyResult<Self> {
        let sigma = FieldHom::new(&source.0, &target.0, generator_image).map_err(err)?;
        let m = Matrix::from_rows(&target.0, &matrix).map_err(err)?;
        semilin::semilinear::SemilinearMap::new(sigma, m).map(PySemilinearMap).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::semilinear_from_str(text).map(PySemilinearMap).map_err(err)
    }

    fn to_json(&self) -> String {
        io::semilinear_to_json(&self.0).to_string()
    }

    fn apply(&self, x: Vec<u8>) -> PyResult<Vec<u8>> {
        let v = Vector::new(self.0.sigma().source(), x).map_err(err)?;
        self.0.apply(&v).map(Vector::into_coords).map_err(err)
    }

    fn matrix(&self) -> Vec<Vec<u8>> {
        self.0.matrix().row_vecs()
    }

    #[getter]
    fn generator_image(&self) -> u8 {
        self.0.sigma().generator_image()
    }

    fn is_strong_embedding(&self) -> bool {
        self.0.is_strong_embedding()
    }

    fn to_table(&self) -> PyResult<PyMappingTable> {
        self.0.to_table().map(PyMappingTable).map_err(err)
    }

    fn induced_point_map(&self) -> PyResult<PyPointMap> {
        self.0.induced_projective().map(PyPointMap).map_err(err)
    }

    /// The scalar a with self = a·other as maps, if any.
    fn scalar_multiple_of(&self, other: &PySemilinearMap) -> PyResult<Option<u8>> {
        let table = self.0.to_table().map_err(err)?;
        Ok(semilin::semilinear::scalar_multiple_of(&table, &other.0).map(|a| a.value()))
    }
}

/// Classify a subset of vectors (or projective points) by whether every
/// permutation of it extends to a linear automorphism.
#[pyfunction]
#[pyo3(signature = (field, dim, points, projective = false))]
fn classify<'py>(
    py: Python<'py>,
    field: &PyField,
    dim: usize,
    points: Vec<Vec<u8>>,
    projective: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let vs = points
        .into_iter()
        .map(|p| {
            if p.len() != dim {
                return Err(semilin::Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            Vector::new(&field.0, p)
        })
        .collect::<semilin::Result<Vec<_>>>()
        .map_err(err)?;
    let (class, report) = if projective {
        let space = ProjectiveSpace::new(&field.0, dim);
        let ps = vs.iter().map(normalize).collect::<semilin::Result<Vec<_>>>().map_err(err)?;
        let class = classify_projective_subset(&space, &ps).map_err(err)?;
        (serde_json::to_value(class), transposition_report_projective(&space, &ps).map_err(err)?)
    } else {
        let class = classify_linear_subset(&vs).map_err(err)?;
        (serde_json::to_value(class), transposition_report_linear(&vs).map_err(err)?)
    };
    let mut v = class.map_err(|e| PyValueError::new_err(e.to_string()))?;
    v["fully_extendable"] = report.fully_extendable.into();
    v["failing_transposition"] = serde_json::json!(report.failing_transposition);
    to_dict(py, &v)
}

/// Count GL-mappings between two spaces, exhaustively or over seeded samples.
#[pyfunction]
#[pyo3(signature = (domain, codomain, samples = None, seed = 1, threads = 0))]
fn search<'py>(
    py: Python<'py>,
    domain: &str,
    codomain: &str,
    samples: Option<u64>,
    seed: u64,
    threads: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let dom: VectorSpace = domain.parse().map_err(err)?;
    let cod: VectorSpace = codomain.parse().map_err(err)?;
    let report = py
        .detach(|| match samples {
            Some(s) => sampled_gl_search(&dom, &cod, s, seed, threads),
            None => exhaustive_gl_search(&dom, &cod, threads),
        })
        .map_err(err)?;
    to_dict(py, &io::search_report_to_json(&report))
}

/// Run a named verification suite and return its report.
#[pyfunction]
#[pyo3(signature = (name, seed = 1, threads = 0, samples = None, max_size = None))]
fn run_suite<'py>(
    py: Python<'py>,
    name: &str,
    seed: u64,
    threads: usize,
    samples: Option<u64>,
    max_size: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = SuiteConfig { threads, seed, timing: false, samples, max_size, ..SuiteConfig::default() };
    let report = py.detach(|| run_named_suite(name, &cfg)).map_err(err)?;
    to_dict(py, &report.to_json())
}

#[pymodule]
fn pysemilin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyMappingTable>()?;
    m.add_class::<PyPointMap>()?;
    m.add_class::<PySemilinearMap>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add("SUITES", semilin::suites::SUITES.to_vec())?;
    Ok(())
}
