//! Python module `twoweight`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use twoweight::analysis::{self, intersection_counts};
use twoweight::construction::{self, Correspondence};
use twoweight::pipeline::{self, ConstructionChoice, RunConfig};
use twoweight::singer::SingerGeometry;
use twoweight::{Error, TowerOptions};

fn py_err(e: Error) -> PyErr {
    match e.exit_code() {
        2 => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// PG(3n-1, q) with the tower GF(q) ⊆ GF(q^n) ⊆ GF(q^{2n}).
#[pyclass(frozen)]
struct Space {
    inner: twoweight::Space,
    geom: SingerGeometry,
}

/// A point set with its provenance.
#[pyclass(frozen)]
struct PointSet {
    inner: twoweight::TwoWeightSet,
}

#[pymethods]
impl PointSet {
    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Dense point indices, sorted.
    fn indices(&self) -> Vec<u32> {
        self.inner.points.indices().to_vec()
    }

    #[getter]
    fn construction(&self) -> String {
        serde_json::to_value(self.inner.provenance.construction)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default()
    }

    fn __eq__(&self, other: &PointSet) -> bool {
        self.inner.params == other.inner.params && self.inner.points == other.inner.points
    }
}

#[pymethods]
impl Space {
    #[new]
    #[pyo3(signature = (p, n, e = 1, modulus = None))]
    fn new(p: u32, n: u32, e: u32, modulus: Option<Vec<u32>>) -> PyResult<Self> {
        let opts = TowerOptions {
            modulus,
            ..TowerOptions::default()
        };
        let tower = twoweight::Tower::build(p, e, n, &opts).map_err(py_err)?;
        let inner = twoweight::Space::new(tower).map_err(py_err)?;
        let geom = SingerGeometry::build(&inner).map_err(py_err)?;
        Ok(Space { inner, geom })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.inner.tower().modulus().to_vec()
    }

    #[getter]
    fn point_count(&self) -> u32 {
        self.inner.point_count()
    }

    /// Canonical coordinates of a point, `3n` GF(q) digits.
    fn point_coords(&self, index: u32) -> PyResult<Vec<u32>> {
        if index >= self.inner.point_count() {
            return Err(PyValueError::new_err(format!("no point {index}")));
        }
        Ok(self.inner.point_coords(index))
    }

    /// Index of the point with these coordinates.
    fn point_index(&self, coords: Vec<u32>) -> PyResult<u32> {
        Ok(self.inner.point_from_coords(&coords).map_err(py_err)?.index)
    }

    fn algebraic_set(&self) -> PyResult<PointSet> {
        Ok(PointSet {
            inner: construction::algebraic_set(&self.inner).map_err(py_err)?,
        })
    }

    /// Cone construction; `correspondence` maps Π-point `j` to orbit
    /// `correspondence[j]`, and defaults to alpha.
    #[pyo3(signature = (correspondence = None))]
    fn geometric_set(&self, correspondence: Option<Vec<u32>>) -> PyResult<PointSet> {
        let corr = match correspondence {
            None => Correspondence::alpha(&self.inner, &self.geom),
            Some(map) => Correspondence::from_permutation(&self.inner, &self.geom, map),
        }
        .map_err(py_err)?;
        Ok(PointSet {
            inner: construction::geometric_set(&self.inner, &self.geom, &corr).map_err(py_err)?,
        })
    }

    fn lambda_set(&self) -> PointSet {
        PointSet {
            inner: construction::lambda_set(&self.inner),
        }
    }

    /// `{|H ∩ set|: number of hyperplanes H}`.
    fn spectrum(&self, set: &PointSet) -> PyResult<BTreeMap<u32, u64>> {
        Ok(analysis::hyperplane_spectrum(&self.inner, &set.inner)
            .map_err(py_err)?
            .histogram)
    }

    /// `(n, k, {weight: count})` of the projective code of a two-weight set.
    fn code(&self, set: &PointSet) -> PyResult<(usize, usize, BTreeMap<u64, u64>)> {
        let counts = intersection_counts(&self.inner, &set.inner.points);
        let cert = analysis::spectrum_from_counts(&self.inner, &set.inner, &counts).map_err(py_err)?;
        let code = analysis::export_code(&self.inner, &set.inner, &cert, &counts, analysis::DEFAULT_SPOT_CHECKS, 0)
            .map_err(py_err)?;
        Ok((code.length(), code.dimension(), code.weights))
    }

    /// `(v, k, lambda, mu)` of the Cayley graph; raises if not strongly regular.
    #[pyo3(signature = (set, vertex_cap = 20_000))]
    fn srg(&self, set: &PointSet, vertex_cap: u64) -> PyResult<(u64, u64, u64, u64)> {
        let g = analysis::export_graph(&self.inner, &set.inner, vertex_cap, 0).map_err(py_err)?;
        Ok((g.v, g.k, g.lambda, g.mu))
    }
}

#[pyfunction]
fn expected_weights(q: u64, n: u32) -> PyResult<(u64, u64)> {
    twoweight::expected_weights(q, n).map_err(py_err)
}

#[pyfunction]
fn blowup_weights(q: u64, n: u32, d: u64) -> PyResult<(u64, u64)> {
    twoweight::blowup_weights(q, n, d).map_err(py_err)
}

/// Runs the full certification and returns `(passed, certificate_json)`.
/// Artifacts are written to `out_dir`.
#[pyfunction]
#[pyo3(signature = (p, n, out_dir, e = 1, construction = "algebraic", vertex_cap = pipeline::DEFAULT_VERTEX_CAP))]
fn certify(p: u32, n: u32, out_dir: PathBuf, e: u32, construction: &str, vertex_cap: u64) -> PyResult<(bool, String)> {
    let mut cfg = RunConfig::new(p, e, n);
    cfg.construction = match construction {
        "algebraic" => ConstructionChoice::Algebraic,
        "geometric" => ConstructionChoice::Geometric,
        "both" => ConstructionChoice::Both,
        "lambda" => ConstructionChoice::Lambda,
        other => return Err(PyValueError::new_err(format!("unknown construction {other:?}"))),
    };
    cfg.out_dir = out_dir;
    cfg.vertex_cap = vertex_cap;
    let (cert, outcome) = pipeline::cmd_certify(&cfg).map_err(py_err)?;
    Ok((outcome == pipeline::Outcome::Pass, cert.to_json().map_err(py_err)?))
}

#[pymodule(name = "twoweight")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Space>()?;
    m.add_class::<PointSet>()?;
    m.add_function(wrap_pyfunction!(expected_weights, m)?)?;
    m.add_function(wrap_pyfunction!(blowup_weights, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    Ok(())
}
