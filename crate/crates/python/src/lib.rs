//! Python bindings. Importable as `qutrit_dephasing`.

use num_complex::Complex64 as C64;
use pyo3::exceptions::{PyKeyError, PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use qutrit_dephasing::baths::{self, BathKind};
use qutrit_dephasing::dynamics;
use qutrit_dephasing::experiments;
use qutrit_dephasing::linalg::ComplexMatrix;
use qutrit_dephasing::states::{self, SzLabel, DIM};
use qutrit_dephasing::witnesses::{self, Subsystem, WitnessPair};
use qutrit_dephasing::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        Error::UnknownPreset(name) => PyKeyError::new_err(format!("unknown preset '{name}'")),
        Error::InvariantViolation(_) | Error::NoConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn label(v: i32) -> PyResult<SzLabel> {
    SzLabel::new(v).map_err(to_py)
}

fn kind(name: &str) -> PyResult<BathKind> {
    name.parse().map_err(to_py)
}

/// Validated 9x9 two-qutrit density matrix.
#[pyclass(name = "DensityMatrix", frozen)]
struct PyDensityMatrix(states::DensityMatrix);

#[pymethods]
impl PyDensityMatrix {
    #[new]
    fn new(rows: Vec<Vec<C64>>) -> PyResult<Self> {
        if rows.len() != DIM || rows.iter().any(|r| r.len() != DIM) {
            return Err(PyValueError::new_err("expected a 9x9 nested list"));
        }
        let data = rows.into_iter().flatten().collect();
        let m = ComplexMatrix::new(DIM, DIM, data).map_err(to_py)?;
        Ok(Self(states::DensityMatrix::new(m).map_err(to_py)?))
    }

    #[staticmethod]
    fn horodecki(a: f64) -> PyResult<Self> {
        Ok(Self(states::horodecki_state(a).map_err(to_py)?))
    }

    #[staticmethod]
    fn upb() -> Self {
        Self(states::upb_state())
    }

    #[staticmethod]
    fn maximally_mixed() -> Self {
        Self(states::DensityMatrix::maximally_mixed())
    }

    fn to_list(&self) -> Vec<Vec<C64>> {
        (0..DIM).map(|i| (0..DIM).map(|j| self.0.entry(i, j)).collect()).collect()
    }

    fn populations(&self) -> Vec<f64> {
        self.0.populations()
    }

    #[pyo3(signature = (subsystem = 1))]
    fn negativity(&self, subsystem: u8) -> PyResult<f64> {
        let s = Subsystem::try_from(subsystem).map_err(to_py)?;
        witnesses::negativity_wrt(&self.0, s).map_err(to_py)
    }

    fn realignment(&self) -> PyResult<f64> {
        witnesses::realignment_witness(&self.0).map_err(to_py)
    }

    /// "free", "bound" or "separable-compatible".
    fn classify(&self) -> PyResult<String> {
        Ok(WitnessPair::of(&self.0).map_err(to_py)?.class().to_string())
    }

    fn dephase(&self, table: &PyFactorTable) -> PyResult<Self> {
        Ok(Self(dynamics::dephase(&self.0, &table.0).map_err(to_py)?))
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(trace={:.6})", self.0.matrix().trace().re)
    }
}

/// Decoherence factors F[M, N] for total-Sz labels -2..2 at one time.
#[pyclass(name = "FactorTable", frozen)]
struct PyFactorTable(baths::FactorTable);

#[pymethods]
impl PyFactorTable {
    #[staticmethod]
    fn identity(time: f64) -> Self {
        Self(baths::FactorTable::identity(time))
    }

    #[staticmethod]
    fn from_horodecki_factors(time: f64, f1: C64, f2: C64, f3: C64) -> PyResult<Self> {
        Ok(Self(baths::FactorTable::from_horodecki_factors(time, f1, f2, f3).map_err(to_py)?))
    }

    #[getter]
    fn time(&self) -> f64 {
        self.0.time()
    }

    fn get(&self, m: i32, n: i32) -> PyResult<C64> {
        Ok(self.0.get(label(m)?, label(n)?))
    }

    fn f1(&self) -> C64 {
        self.0.f1()
    }

    fn f2(&self) -> C64 {
        self.0.f2()
    }

    fn f3(&self) -> C64 {
        self.0.f3()
    }

    fn to_list(&self) -> Vec<Vec<C64>> {
        SzLabel::ALL
            .iter()
            .map(|&m| SzLabel::ALL.iter().map(|&n| self.0.get(m, n)).collect())
            .collect()
    }
}

/// Thermal environment: "bosonic", "spin", "analytic_gaussian" or "analytic_exponential".
#[pyclass(name = "Bath", frozen)]
struct PyBath(baths::BathSpec);

#[pymethods]
impl PyBath {
    #[new]
    fn new(kind_name: &str, coupling: f64, temperature: f64, frequencies: Vec<f64>) -> PyResult<Self> {
        Ok(Self(baths::BathSpec::new(kind(kind_name)?, coupling, temperature, frequencies).map_err(to_py)?))
    }

    #[staticmethod]
    #[pyo3(signature = (kind_name, size, coupling, temperature, lo, delta, seed = experiments::DEFAULT_SEED))]
    fn sampled(
        kind_name: &str,
        size: usize,
        coupling: f64,
        temperature: f64,
        lo: f64,
        delta: f64,
        seed: u64,
    ) -> PyResult<Self> {
        let spec = baths::BathSpec::sampled(kind(kind_name)?, size, coupling, temperature, lo, delta, seed);
        Ok(Self(spec.map_err(to_py)?))
    }

    #[staticmethod]
    fn analytic(kind_name: &str, rate: f64) -> PyResult<Self> {
        Ok(Self(baths::BathSpec::analytic(kind(kind_name)?, rate).map_err(to_py)?))
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind().name()
    }

    #[getter]
    fn coupling(&self) -> f64 {
        self.0.coupling()
    }

    #[getter]
    fn temperature(&self) -> f64 {
        self.0.temperature()
    }

    #[getter]
    fn frequencies(&self) -> Vec<f64> {
        self.0.frequencies()
    }

    fn with_temperature(&self, temperature: f64) -> PyResult<Self> {
        Ok(Self(self.0.with_temperature(temperature).map_err(to_py)?))
    }

    fn factor(&self, t: f64, m: i32, n: i32) -> PyResult<C64> {
        self.0.factor(t, label(m)?, label(n)?).map_err(to_py)
    }

    fn factor_table(&self, t: f64) -> PyResult<PyFactorTable> {
        Ok(PyFactorTable(self.0.factor_table(t).map_err(to_py)?))
    }

    #[pyo3(signature = (cutoff = None))]
    fn gaussian_rate(&self, cutoff: Option<usize>) -> PyResult<f64> {
        baths::gaussian_rate(&self.0, cutoff.unwrap_or(self.0.size())).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.0.size()
    }
}

#[pyfunction]
#[pyo3(signature = (lo, delta, size, seed = experiments::DEFAULT_SEED))]
fn sample_frequencies(lo: f64, delta: f64, size: usize, seed: u64) -> PyResult<Vec<f64>> {
    baths::sample_frequencies(lo, delta, size, seed).map_err(to_py)
}

#[pyfunction]
fn thermal_occupation(omega: f64, temperature: f64) -> f64 {
    baths::thermal_occupation(omega, temperature)
}

#[pyfunction]
fn analytic_factor(kind_name: &str, rate: f64, t: f64, m: i32, n: i32) -> PyResult<f64> {
    baths::analytic_factor(kind(kind_name)?, rate, t, label(m)?, label(n)?).map_err(to_py)
}

#[pyfunction]
fn interval_bound(coupling: f64, n_modes: usize, omega1: f64, omega2: f64, t: f64) -> PyResult<f64> {
    baths::interval_bound(coupling, n_modes, omega1, omega2, t).map_err(to_py)
}

#[pyfunction]
fn horodecki_r_closed(a: f64, f1: f64, f2: f64, f3: f64) -> PyResult<f64> {
    dynamics::horodecki_r_closed(a, f1, f2, f3).map_err(to_py)
}

#[pyfunction]
fn horodecki_n_closed(a: f64, f1: f64, f2: f64, f3: f64) -> PyResult<f64> {
    dynamics::horodecki_n_closed(a, f1, f2, f3).map_err(to_py)
}

#[pyfunction]
fn f1_threshold() -> f64 {
    dynamics::f1_threshold()
}

#[pyfunction]
fn death_time_gaussian(gamma: f64) -> PyResult<f64> {
    dynamics::death_time_gaussian(gamma).map_err(to_py)
}

#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    experiments::PRESET_NAMES.to_vec()
}

/// Runs a figure preset; returns `(columns, rows)`.
#[pyfunction]
#[pyo3(signature = (name, seed = None))]
fn run_preset(py: Python<'_>, name: &str, seed: Option<u64>) -> PyResult<(Vec<String>, Vec<Vec<f64>>)> {
    let mut cfg = experiments::figure_preset(name).map_err(to_py)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let res = py.detach(|| experiments::run_scenario(&cfg)).map_err(to_py)?;
    let rows = res
        .rows
        .into_iter()
        .map(|r| r.axis_values.into_iter().chain(r.values).collect())
        .collect();
    Ok((res.columns, rows))
}

/// Runs a scenario given as config text; returns `(columns, rows)`.
#[pyfunction]
fn run_config(py: Python<'_>, text: &str) -> PyResult<(Vec<String>, Vec<Vec<f64>>)> {
    let cfg = experiments::ScenarioConfig::parse(text).map_err(to_py)?;
    let res = py.detach(|| experiments::run_scenario(&cfg)).map_err(to_py)?;
    let rows = res
        .rows
        .into_iter()
        .map(|r| r.axis_values.into_iter().chain(r.values).collect())
        .collect();
    Ok((res.columns, rows))
}

#[pymodule(name = "qutrit_dephasing")]
fn qutrit_dephasing_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyFactorTable>()?;
    m.add_class::<PyBath>()?;
    m.add_function(wrap_pyfunction!(sample_frequencies, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_occupation, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_factor, m)?)?;
    m.add_function(wrap_pyfunction!(interval_bound, m)?)?;
    m.add_function(wrap_pyfunction!(horodecki_r_closed, m)?)?;
    m.add_function(wrap_pyfunction!(horodecki_n_closed, m)?)?;
    m.add_function(wrap_pyfunction!(f1_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(death_time_gaussian, m)?)?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add_function(wrap_pyfunction!(run_preset, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add("PRNG", baths::PRNG_ID)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
