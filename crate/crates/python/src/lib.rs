//! Python bindings: `Collection`, `PointCloud`, `PcaModel`, and
//! `PersistenceDiagram` wrappers plus the pipeline operations.

use std::path::PathBuf;

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use echotopo_core::embed::LagSet;
use echotopo_core::features::{feature_report, FeatureParams};
use echotopo_core::io;
use echotopo_core::persistence::{rips_persistence, DistanceMatrix, RipsParams};
use echotopo_core::simulate as sim;
use echotopo_core::simulate::{Scatterer, ScattererTarget, SimConfig};
use echotopo_core::{Error as CoreError, LookAngle};

fn err(e: CoreError) -> PyErr {
    match e {
        CoreError::Io { .. } => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A uniformly angle-sampled CSAS collection.
#[pyclass(frozen)]
struct Collection {
    inner: echotopo_core::Collection,
}

#[pymethods]
impl Collection {
    /// Builds a collection from per-angle rows of complex range samples.
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let profiles = rows.into_iter().map(echotopo_core::EchoVector::new).collect();
        Ok(Collection { inner: echotopo_core::Collection::new(profiles).map_err(err)? })
    }

    /// Reads a `.csas` binary file, or delimited text for other extensions.
    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Ok(Collection { inner: io::read_collection(&path).map_err(err)? })
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        io::write_collection(&self.inner, &path).map_err(err)
    }

    #[getter]
    fn n_angles(&self) -> usize {
        self.inner.n_angles()
    }

    #[getter]
    fn n_range(&self) -> usize {
        self.inner.n_range()
    }

    /// Angular step in degrees.
    #[getter]
    fn step(&self) -> f64 {
        self.inner.step()
    }

    fn mean_center(&self) -> Collection {
        Collection { inner: self.inner.mean_center() }
    }

    /// The stored profile at a sampled angle, circularly indexed.
    fn profile_at(&self, angle_deg: f64) -> PyResult<Vec<Complex64>> {
        let p = self.inner.profile_at(LookAngle::new(angle_deg)).map_err(err)?;
        Ok(p.samples().to_vec())
    }

    /// Per-angle profile norms.
    fn norms(&self) -> Vec<f64> {
        self.inner.profile_norms()
    }

    /// The sampled signature space: one realified point per look angle.
    fn signature_cloud(&self) -> PointCloud {
        PointCloud { inner: self.inner.as_point_cloud() }
    }

    /// The sampled phase space built from angle-lagged copies.
    fn embed(&self, lags_deg: Vec<f64>) -> PyResult<PointCloud> {
        let lags = LagSet::from_degrees(&lags_deg).map_err(err)?;
        Ok(PointCloud {
            inner: echotopo_core::embed::embed(&self.inner, &lags).map_err(err)?,
        })
    }

    /// Noise floor, excursions, critical angles, and flare/loop classes.
    #[pyo3(signature = (quantile=0.5, factor=3.0, half_window=5, symmetry_threshold=0.9, critical_tol=0.25))]
    fn feature_report(
        &self,
        py: Python<'_>,
        quantile: f64,
        factor: f64,
        half_window: usize,
        symmetry_threshold: f64,
        critical_tol: f64,
    ) -> PyResult<Py<PyAny>> {
        let params = FeatureParams {
            noise_quantile: quantile,
            factor,
            half_window,
            symmetry_threshold,
            critical_tol,
        };
        let report = feature_report(&self.inner, &params).map_err(err)?;
        let dict = pyo3::types::PyDict::new(py);
        dict.set_item("noise_floor", report.noise_floor.level)?;
        dict.set_item(
            "critical_angles_deg",
            report.critical.angles.iter().map(|a| a.degrees()).collect::<Vec<_>>(),
        )?;
        dict.set_item("non_isolated_critical", report.critical.non_isolated)?;
        let excursions: Vec<Py<PyAny>> = report
            .features
            .iter()
            .map(|f| {
                let e = pyo3::types::PyDict::new(py);
                e.set_item("start_deg", f.excursion.start.degrees())?;
                e.set_item("end_deg", f.excursion.end.degrees())?;
                e.set_item("peak_deg", f.excursion.peak_angle.degrees())?;
                e.set_item("peak_norm", f.excursion.peak_norm)?;
                e.set_item("full_circle", f.excursion.full_circle)?;
                e.set_item("symmetry_score", f.symmetry_score)?;
                e.set_item("class", format!("{:?}", f.class))?;
                Ok(e.into_any().unbind())
            })
            .collect::<PyResult<_>>()?;
        dict.set_item("excursions", excursions)?;
        Ok(dict.into_any().unbind())
    }

    fn __repr__(&self) -> String {
        format!(
            "Collection(n_angles={}, n_range={}, step={}°)",
            self.inner.n_angles(),
            self.inner.n_range(),
            self.inner.step()
        )
    }
}

/// Points in R^d with optional look-angle labels.
#[pyclass(frozen)]
struct PointCloud {
    inner: echotopo_core::PointCloud,
}

#[pymethods]
impl PointCloud {
    #[new]
    #[pyo3(signature = (points, labels_deg=None))]
    fn new(points: Vec<Vec<f64>>, labels_deg: Option<Vec<f64>>) -> PyResult<Self> {
        let inner = match labels_deg {
            Some(degs) => echotopo_core::PointCloud::with_labels(
                points,
                degs.into_iter().map(LookAngle::new).collect(),
            ),
            None => echotopo_core::PointCloud::new(points),
        }
        .map_err(err)?;
        Ok(PointCloud { inner })
    }

    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Ok(PointCloud { inner: io::read_cloud(&path).map_err(err)? })
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        io::write_cloud(&self.inner, &path).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn points(&self) -> Vec<Vec<f64>> {
        self.inner.points().to_vec()
    }

    fn labels_deg(&self) -> Option<Vec<f64>> {
        self.inner.labels().map(|l| l.iter().map(|a| a.degrees()).collect())
    }

    /// H0/H1 Vietoris-Rips persistence of this cloud.
    #[pyo3(signature = (max_radius=None, max_points=2000))]
    fn rips_persistence(
        &self,
        max_radius: Option<f64>,
        max_points: usize,
    ) -> PyResult<PersistenceDiagram> {
        let params = RipsParams {
            max_radius: max_radius.unwrap_or(f64::INFINITY),
            max_points,
        };
        let dm = DistanceMatrix::from_cloud(&self.inner);
        Ok(PersistenceDiagram { inner: rips_persistence(&dm, &params).map_err(err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("PointCloud(len={}, dim={})", self.inner.len(), self.inner.dim())
    }
}

/// Principal components basis fitted to a cloud.
#[pyclass(frozen)]
struct PcaModel {
    inner: echotopo_core::PcaModel,
}

#[pymethods]
impl PcaModel {
    #[staticmethod]
    fn fit(cloud: &PointCloud, k: usize) -> PyResult<Self> {
        Ok(PcaModel { inner: echotopo_core::PcaModel::fit(&cloud.inner, k).map_err(err)? })
    }

    #[getter]
    fn mean(&self) -> Vec<f64> {
        self.inner.mean().to_vec()
    }

    #[getter]
    fn components(&self) -> Vec<Vec<f64>> {
        self.inner.components().to_vec()
    }

    #[getter]
    fn explained_variance(&self) -> Vec<f64> {
        self.inner.explained_variance().to_vec()
    }

    fn project(&self, cloud: &PointCloud) -> PyResult<PointCloud> {
        Ok(PointCloud { inner: self.inner.project(&cloud.inner).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("PcaModel(dim={}, k={})", self.inner.dim(), self.inner.k())
    }
}

/// Multiset of (dim, birth, death, censored) persistence pairs.
#[pyclass(frozen)]
struct PersistenceDiagram {
    inner: echotopo_core::PersistenceDiagram,
}

#[pymethods]
impl PersistenceDiagram {
    /// Pairs as `(dim, birth, death, censored)` tuples; infinite deaths come
    /// through as `float("inf")`.
    fn pairs(&self) -> Vec<(u8, f64, f64, bool)> {
        self.inner
            .pairs()
            .iter()
            .map(|p| (p.dim, p.birth, p.death, p.censored))
            .collect()
    }

    /// Descending finite lifetimes and the infinite-class count for `dim`.
    fn lifetimes(&self, dim: u8) -> (Vec<f64>, usize) {
        let lt = self.inner.lifetimes(dim);
        (lt.finite, lt.infinite)
    }

    /// Classes separated from the rest by a multiplicative lifetime gap.
    #[pyo3(signature = (dim=1, ratio=5.0, noise_quantile=0.5))]
    fn dominant_count(&self, dim: u8, ratio: f64, noise_quantile: f64) -> usize {
        self.inner.dominant_count(dim, ratio, noise_quantile)
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        io::write_diagram(&self.inner, &path).map_err(err)
    }

    fn write_svg(&self, path: PathBuf) -> PyResult<()> {
        io::write_text(&path, &io::svg::diagram_svg(&self.inner)).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.pairs().len()
    }

    fn __repr__(&self) -> String {
        format!("PersistenceDiagram(pairs={})", self.inner.pairs().len())
    }
}

/// Simulates a CSAS collection of point scatterers given as
/// `(radius_m, angle_deg, reflectivity)` triples.
#[pyfunction]
#[pyo3(signature = (
    scatterers, n_angles=360, n_range=1000, standoff=10.0, range_window=(9.0, 11.0),
    pulse_center_freq=2.0, pulse_width=0.05, noise_sigma=0.0, rng_seed=0
))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    scatterers: Vec<(f64, f64, f64)>,
    n_angles: usize,
    n_range: usize,
    standoff: f64,
    range_window: (f64, f64),
    pulse_center_freq: f64,
    pulse_width: f64,
    noise_sigma: f64,
    rng_seed: u64,
) -> PyResult<Collection> {
    let target = ScattererTarget::new(
        scatterers
            .into_iter()
            .map(|(radius, angle, reflectivity)| Scatterer {
                radius,
                angle: LookAngle::new(angle),
                reflectivity,
            })
            .collect(),
    )
    .map_err(err)?;
    let config = SimConfig {
        n_angles,
        n_range,
        standoff,
        range_window,
        pulse_center_freq,
        pulse_width,
        noise_sigma,
        rng_seed,
    };
    Ok(Collection { inner: sim::synthesize(&target, &config).map_err(err)? })
}

/// The built-in target: a 2-group and a 5-group of equal scatterers on one
/// circle, as `(radius_m, angle_deg, reflectivity)` triples.
#[pyfunction]
fn seven_scatterer_target(group_offset_deg: f64) -> PyResult<Vec<(f64, f64, f64)>> {
    let target =
        sim::seven_scatterer_target(LookAngle::new(group_offset_deg)).map_err(err)?;
    Ok(target
        .scatterers()
        .iter()
        .map(|s| (s.radius, s.angle.degrees(), s.reflectivity))
        .collect())
}

#[pymodule]
fn echotopo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Collection>()?;
    m.add_class::<PointCloud>()?;
    m.add_class::<PcaModel>()?;
    m.add_class::<PersistenceDiagram>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(seven_scatterer_target, m)?)?;
    Ok(())
}
