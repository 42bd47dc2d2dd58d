//! Python bindings: exact rational maps, lifts through φ and the chaos-game
//! numerics of `semidyn_core`.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use semidyn_core::dynamics::{self, PointCloud, SemigroupSpec, SpherePoint};
use semidyn_core::exact::{self, MoebiusMap, Parity};
use semidyn_core::experiments::{self, ExperimentOptions};
use semidyn_core::expr::parse_rational_map;
use semidyn_core::lift;
use semidyn_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::RootSolver { .. } | Error::PreimageResidual { .. } | Error::LiftVerification(_) | Error::Internal(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// An exact rational map with Gaussian-rational coefficients.
#[pyclass(name = "RationalMap", module = "semidyn", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyRationalMap {
    inner: exact::RationalMap,
}

impl From<exact::RationalMap> for PyRationalMap {
    fn from(inner: exact::RationalMap) -> Self {
        Self { inner }
    }
}

/// A generator given either as an expression string or a `RationalMap`.
#[derive(FromPyObject)]
enum MapArg {
    Map(PyRationalMap),
    Text(String),
}

impl MapArg {
    fn into_map(self) -> PyResult<exact::RationalMap> {
        match self {
            MapArg::Map(m) => Ok(m.inner),
            MapArg::Text(s) => parse_rational_map(&s).map_err(py_err),
        }
    }
}

fn to_point(z: Option<Complex64>) -> SpherePoint {
    z.map_or(SpherePoint::Infinity, SpherePoint::from_complex)
}

fn from_cloud(cloud: &PointCloud) -> Vec<Option<Complex64>> {
    cloud.points.iter().map(|p| p.finite()).collect()
}

fn to_cloud(points: Vec<Option<Complex64>>) -> PointCloud {
    PointCloud::new(points.into_iter().map(to_point).collect(), "python")
}

fn semigroup(generators: Vec<MapArg>) -> PyResult<SemigroupSpec> {
    let gens = generators.into_iter().map(MapArg::into_map).collect::<PyResult<Vec<_>>>()?;
    SemigroupSpec::new(gens).map_err(py_err)
}

#[pymethods]
impl PyRationalMap {
    #[new]
    fn new(expr: &str) -> PyResult<Self> {
        parse_rational_map(expr).map(Self::from).map_err(py_err)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    /// `"even"`, `"odd"` or `"neither"`.
    fn parity(&self) -> &'static str {
        match self.inner.parity() {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Neither => "neither",
        }
    }

    /// `self ∘ inner`.
    fn compose(&self, inner: MapArg) -> PyResult<Self> {
        self.inner.checked_compose(&inner.into_map()?).map(Self::from).map_err(py_err)
    }

    /// The map `h` with `self(z) = h(z²)`; raises for maps that are not even.
    fn even_decompose(&self) -> PyResult<Self> {
        self.inner.even_decompose().map(Self::from).map_err(py_err)
    }

    /// Floating-point value at `z`; `None` stands for ∞.
    fn __call__(&self, z: Option<Complex64>) -> Option<Complex64> {
        dynamics::FloatMap::new(&self.inner).eval(to_point(z)).finite()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("RationalMap('{}')", self.inner)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{DefaultHasher, Hash, Hasher};
        let mut h = DefaultHasher::new();
        self.inner.to_string().hash(&mut h);
        h.finish()
    }
}

/// φ(z) = (z²-1)/(z²+1).
#[pyfunction]
fn phi() -> PyRationalMap {
    exact::phi().into()
}

/// Lift an odd map through φ.
#[pyfunction(name = "lift")]
fn lift_map(f: MapArg) -> PyResult<PyRationalMap> {
    lift::lift(&f.into_map()?).map(PyRationalMap::from).map_err(py_err)
}

/// Exact check of `link ∘ lower = upper ∘ link`, with φ as the default link.
#[pyfunction]
#[pyo3(signature = (lower, upper, link = None))]
fn verify_semiconjugacy(lower: MapArg, upper: MapArg, link: Option<MapArg>) -> PyResult<bool> {
    let link = match link {
        Some(l) => l.into_map()?,
        None => exact::phi(),
    };
    Ok(lift::verify_semiconjugacy(&lower.into_map()?, &upper.into_map()?, &link))
}

/// `m ∘ f ∘ m⁻¹` for a degree-one map `m`.
#[pyfunction]
fn conjugate(f: MapArg, by: MapArg) -> PyResult<PyRationalMap> {
    let m = MoebiusMap::from_map(&by.into_map()?).map_err(py_err)?;
    exact::try_conjugate(&f.into_map()?, &m).map(PyRationalMap::from).map_err(py_err)
}

/// A Möbius map `m` with `f ∘ g = m ∘ g ∘ f`, or `None`.
#[pyfunction]
fn find_commutation_moebius(f: MapArg, g: MapArg) -> PyResult<Option<PyRationalMap>> {
    Ok(exact::find_commutation_moebius(&f.into_map()?, &g.into_map()?).map(|m| m.to_map().into()))
}

/// Chaos-game approximation of the Julia set of the semigroup generated by
/// `generators`. Points at ∞ are returned as `None`.
#[pyfunction]
#[pyo3(signature = (generators, orbit_length = 100_000, burn_in = 100, seed = 42, workers = 1, z0 = Some(Complex64::new(0.37, 0.19))))]
fn backward_orbit(
    py: Python<'_>,
    generators: Vec<MapArg>,
    orbit_length: usize,
    burn_in: usize,
    seed: u64,
    workers: usize,
    z0: Option<Complex64>,
) -> PyResult<Vec<Option<Complex64>>> {
    let mut spec = semigroup(generators)?;
    spec.orbit_length = orbit_length;
    spec.burn_in = burn_in;
    spec.seed = seed;
    spec.workers = workers;
    let cloud = py.detach(|| dynamics::random_backward_orbit(&spec, to_point(z0))).map_err(py_err)?;
    Ok(from_cloud(&cloud))
}

/// Repelling fixed points of all words of length at most `word_length`.
#[pyfunction]
#[pyo3(signature = (generators, word_length = 4))]
fn repelling_fixed_points(generators: Vec<MapArg>, word_length: usize) -> PyResult<Vec<Option<Complex64>>> {
    let mut spec = semigroup(generators)?;
    spec.word_length_max = word_length;
    dynamics::repelling_fixed_points(&spec).map(|c| from_cloud(&c)).map_err(py_err)
}

/// Spherical Hausdorff distance between two point sets (`None` is ∞).
#[pyfunction]
fn hausdorff(a: Vec<Option<Complex64>>, b: Vec<Option<Complex64>>) -> PyResult<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(PyValueError::new_err("hausdorff needs two nonempty point sets"));
    }
    Ok(dynamics::hausdorff(&to_cloud(a), &to_cloud(b)))
}

/// Chordal distance on the Riemann sphere (`None` is ∞).
#[pyfunction]
fn spherical_dist(p: Option<Complex64>, q: Option<Complex64>) -> f64 {
    dynamics::spherical_dist(to_point(p), to_point(q))
}

/// Run example experiment 1, 2 or 3 and return its report as JSON text.
#[pyfunction]
#[pyo3(signature = (which, seed = 42, orbit_length = 100_000, resolution = 400, workers = 1))]
fn run_example(
    py: Python<'_>,
    which: u8,
    seed: u64,
    orbit_length: usize,
    resolution: usize,
    workers: usize,
) -> PyResult<String> {
    let opts = ExperimentOptions { seed, orbit_length, resolution, workers, ..ExperimentOptions::default() };
    let report = py.detach(|| experiments::run(which, &opts)).map_err(py_err)?;
    Ok(report.to_json())
}

#[pymodule]
pub fn semidyn(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRationalMap>()?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(lift_map, m)?)?;
    m.add_function(wrap_pyfunction!(verify_semiconjugacy, m)?)?;
    m.add_function(wrap_pyfunction!(conjugate, m)?)?;
    m.add_function(wrap_pyfunction!(find_commutation_moebius, m)?)?;
    m.add_function(wrap_pyfunction!(backward_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(repelling_fixed_points, m)?)?;
    m.add_function(wrap_pyfunction!(hausdorff, m)?)?;
    m.add_function(wrap_pyfunction!(spherical_dist, m)?)?;
    m.add_function(wrap_pyfunction!(run_example, m)?)?;
    Ok(())
}
