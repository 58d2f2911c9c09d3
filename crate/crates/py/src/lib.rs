//! Python bindings: `import scg_tfd`.
//!
//! Signals are passed as sequences of floats plus a sample rate. Parameter
//! blocks (`config=`) are dicts merged key by key onto the Rust defaults,
//! and structured results come back as plain dicts.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use scg_tfd::eval::{self, resolve_wvd_fft_length, CompareConfig, GroundTruth};
use scg_tfd::io::TruthFile;
use scg_tfd::pct::pct_auto;
use scg_tfd::synth::{self, SyntheticSignal};
use scg_tfd::tfd::{self, psd_from_tfd, resolution_report};
use scg_tfd::{IfTrajectory, Method, PctConfig, SampledSignal, TfdError, TfdGrid, WindowSpec};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

trait OrPyErr<T> {
    fn or_py(self) -> PyResult<T>;
}

impl<T> OrPyErr<T> for scg_tfd::Result<T> {
    fn or_py(self) -> PyResult<T> {
        self.map_err(|e| match e {
            TfdError::Io(io) => PyOSError::new_err(io.to_string()),
            other => PyValueError::new_err(other.to_string()),
        })
    }
}

fn to_dict<'py>(py: Python<'py>, v: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

fn from_dict(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let s: String = obj
        .py()
        .import("json")?
        .call_method1("dumps", (obj,))?
        .extract()?;
    serde_json::from_str(&s).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn merge(dst: &mut Value, src: &Value) {
    match (dst, src) {
        (Value::Object(d), Value::Object(s)) => {
            for (k, v) in s {
                match d.get_mut(k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        d.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (d, s) => *d = s.clone(),
    }
}

fn overlay<T: Serialize + DeserializeOwned>(
    base: T,
    patch: Option<&Bound<'_, PyAny>>,
) -> PyResult<T> {
    let Some(patch) = patch else { return Ok(base) };
    let mut v = serde_json::to_value(&base).expect("config serializes");
    merge(&mut v, &from_dict(patch)?);
    serde_json::from_value(v).map_err(|e| PyValueError::new_err(format!("config: {e}")))
}

/// An int is a Hann window of that length; a dict is a full window spec
/// such as `{"kind": "gaussian", "alpha": 2.5, "length": 65}`.
fn window_arg(obj: Option<&Bound<'_, PyAny>>, default: WindowSpec) -> PyResult<WindowSpec> {
    match obj {
        None => Ok(default),
        Some(o) => match o.extract::<usize>() {
            Ok(len) => Ok(WindowSpec::hann(len)),
            Err(_) => serde_json::from_value(from_dict(o)?)
                .map_err(|e| PyValueError::new_err(format!("window: {e}"))),
        },
    }
}

fn signal(samples: Vec<f64>, sample_rate_hz: f64) -> PyResult<SampledSignal> {
    SampledSignal::new(samples, sample_rate_hz).or_py()
}

fn method(name: &str) -> PyResult<Method> {
    name.parse::<Method>().or_py()
}

/// Instantaneous-frequency trajectory; `valid` marks samples where it is defined.
#[pyclass(name = "Trajectory", module = "scg_tfd", frozen)]
pub struct PyTrajectory {
    inner: IfTrajectory,
}

#[pymethods]
impl PyTrajectory {
    #[new]
    #[pyo3(signature = (times_s, freqs_hz, valid=None))]
    fn new(times_s: Vec<f64>, freqs_hz: Vec<f64>, valid: Option<Vec<bool>>) -> PyResult<Self> {
        let valid = valid.unwrap_or_else(|| vec![true; freqs_hz.len()]);
        Ok(Self {
            inner: IfTrajectory::new(times_s, freqs_hz, valid).or_py()?,
        })
    }

    #[getter]
    fn times_s(&self) -> Vec<f64> {
        self.inner.times_s.clone()
    }

    #[getter]
    fn freqs_hz(&self) -> Vec<f64> {
        self.inner.freqs_hz.clone()
    }

    #[getter]
    fn valid(&self) -> Vec<bool> {
        self.inner.valid.clone()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Trajectory(len={}, valid={})",
            self.inner.len(),
            self.inner.valid_count()
        )
    }
}

/// Synthetic test signal with its exact IF per component.
#[pyclass(name = "Synthetic", module = "scg_tfd", frozen)]
pub struct PySynthetic {
    inner: SyntheticSignal,
}

#[pymethods]
impl PySynthetic {
    #[getter]
    fn id(&self) -> String {
        self.inner.id.clone()
    }

    #[getter]
    fn samples(&self) -> Vec<f64> {
        self.inner.signal.samples().to_vec()
    }

    #[getter]
    fn sample_rate_hz(&self) -> f64 {
        self.inner.signal.sample_rate_hz()
    }

    #[getter]
    fn times_s(&self) -> Vec<f64> {
        self.inner.signal.times()
    }

    #[getter]
    fn component_labels(&self) -> Vec<String> {
        self.inner.component_labels.clone()
    }

    #[getter]
    fn dominant_component(&self) -> usize {
        self.inner.dominant_component
    }

    fn true_if(&self, component: usize) -> PyResult<PyTrajectory> {
        Ok(PyTrajectory {
            inner: self.inner.true_if(component).or_py()?.clone(),
        })
    }

    /// Ground truth in the JSON layout the command line reads.
    fn truth_json(&self) -> String {
        TruthFile::from_synthetic(&self.inner).to_json()
    }

    fn __len__(&self) -> usize {
        self.inner.signal.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Synthetic(id={:?}, n={}, rate={} Hz)",
            self.inner.id,
            self.inner.signal.len(),
            self.inner.signal.sample_rate_hz()
        )
    }
}

/// Time-frequency grid: `values[t][f]` at `times_s[t]`, `freqs_hz[f]`.
#[pyclass(name = "Grid", module = "scg_tfd", frozen)]
pub struct PyGrid {
    inner: TfdGrid,
}

#[pymethods]
impl PyGrid {
    #[getter]
    fn method(&self) -> String {
        self.inner.method.to_string()
    }

    #[getter]
    fn times_s(&self) -> Vec<f64> {
        self.inner.times_s.clone()
    }

    #[getter]
    fn freqs_hz(&self) -> Vec<f64> {
        self.inner.freqs_hz.clone()
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.inner.n_times(), self.inner.n_freqs())
    }

    #[getter]
    fn values(&self) -> Vec<Vec<f64>> {
        (0..self.inner.n_times())
            .map(|t| self.inner.row(t).to_vec())
            .collect()
    }

    fn meta<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &self.inner.meta)
    }

    /// Time-marginal spectrum normalised to unit sum: `(freqs_hz, power)`.
    fn psd(&self) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let p = psd_from_tfd(&self.inner).or_py()?;
        Ok((p.freqs_hz, p.power))
    }

    #[pyo3(signature = (band_hz=None, amp_threshold_frac=0.05))]
    fn ridge(
        &self,
        band_hz: Option<(f64, f64)>,
        amp_threshold_frac: f64,
    ) -> PyResult<PyTrajectory> {
        Ok(PyTrajectory {
            inner: eval::extract_ridge(&self.inner, band_hz, amp_threshold_frac).or_py()?,
        })
    }

    #[pyo3(signature = (band_hz=None))]
    fn dominant_frequency(&self, band_hz: Option<(f64, f64)>) -> PyResult<f64> {
        eval::dominant_frequency(&self.inner, band_hz).or_py()
    }

    fn resolution<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &resolution_report(&self.inner).or_py()?)
    }

    fn __repr__(&self) -> String {
        format!(
            "Grid(method={}, shape=({}, {}))",
            self.inner.method,
            self.inner.n_times(),
            self.inner.n_freqs()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (sample_rate_hz=320.0, duration_s=1.0))]
fn gen_x1(sample_rate_hz: f64, duration_s: f64) -> PyResult<PySynthetic> {
    Ok(PySynthetic {
        inner: synth::gen_x1(sample_rate_hz, duration_s).or_py()?,
    })
}

#[pyfunction]
#[pyo3(signature = (sample_rate_hz=320.0, duration_s=1.0, snr=10.0, seed=0))]
fn gen_x2(sample_rate_hz: f64, duration_s: f64, snr: f64, seed: u64) -> PyResult<PySynthetic> {
    Ok(PySynthetic {
        inner: synth::gen_x2(sample_rate_hz, duration_s, snr, seed).or_py()?,
    })
}

#[pyfunction]
#[pyo3(signature = (samples, sample_rate_hz, window=None, hop_samples=4, fft_length=512))]
fn stft(
    py: Python<'_>,
    samples: Vec<f64>,
    sample_rate_hz: f64,
    window: Option<&Bound<'_, PyAny>>,
    hop_samples: usize,
    fft_length: usize,
) -> PyResult<PyGrid> {
    let x = signal(samples, sample_rate_hz)?;
    let w = window_arg(window, WindowSpec::hann(128))?;
    let g = py
        .detach(|| tfd::stft(&x, &w, hop_samples, fft_length))
        .or_py()?;
    Ok(PyGrid { inner: g })
}

#[pyfunction]
#[pyo3(signature = (samples, sample_rate_hz, fft_length=None, analytic=true))]
fn wvd(
    py: Python<'_>,
    samples: Vec<f64>,
    sample_rate_hz: f64,
    fft_length: Option<usize>,
    analytic: bool,
) -> PyResult<PyGrid> {
    let x = signal(samples, sample_rate_hz)?;
    let m = resolve_wvd_fft_length(fft_length, x.len());
    let g = py.detach(|| tfd::wvd(&x, m, analytic)).or_py()?;
    Ok(PyGrid { inner: g })
}

#[pyfunction]
#[pyo3(signature = (samples, sample_rate_hz, freq_window=None, fft_length=None))]
fn pwvd(
    py: Python<'_>,
    samples: Vec<f64>,
    sample_rate_hz: f64,
    freq_window: Option<&Bound<'_, PyAny>>,
    fft_length: Option<usize>,
) -> PyResult<PyGrid> {
    let x = signal(samples, sample_rate_hz)?;
    let h = window_arg(freq_window, WindowSpec::hann(63))?;
    let m = resolve_wvd_fft_length(fft_length, x.len());
    let g = py.detach(|| tfd::pwvd(&x, &h, m)).or_py()?;
    Ok(PyGrid { inner: g })
}

#[pyfunction]
#[pyo3(signature = (samples, sample_rate_hz, time_window=None, freq_window=None, fft_length=None))]
fn spwvd(
    py: Python<'_>,
    samples: Vec<f64>,
    sample_rate_hz: f64,
    time_window: Option<&Bound<'_, PyAny>>,
    freq_window: Option<&Bound<'_, PyAny>>,
    fft_length: Option<usize>,
) -> PyResult<PyGrid> {
    let x = signal(samples, sample_rate_hz)?;
    let g_win = window_arg(time_window, WindowSpec::hann(31))?;
    let h = window_arg(freq_window, WindowSpec::hann(63))?;
    let m = resolve_wvd_fft_length(fft_length, x.len());
    let g = py.detach(|| tfd::spwvd(&x, &g_win, &h, m)).or_py()?;
    Ok(PyGrid { inner: g })
}

/// Polynomial chirplet transform with an estimated kernel; the kernel
/// coefficients and iteration count are in `grid.meta()`.
#[pyfunction]
#[pyo3(signature = (samples, sample_rate_hz, config=None))]
fn pct(
    py: Python<'_>,
    samples: Vec<f64>,
    sample_rate_hz: f64,
    config: Option<&Bound<'_, PyAny>>,
) -> PyResult<PyGrid> {
    let x = signal(samples, sample_rate_hz)?;
    let cfg: PctConfig = overlay(PctConfig::default(), config)?;
    cfg.validate().or_py()?;
    let g = py.detach(|| pct_auto(&x, &cfg)).or_py()?;
    Ok(PyGrid { inner: g })
}

/// Any method by name with the comparison defaults for `signal_id`.
#[pyfunction]
#[pyo3(signature = (samples, sample_rate_hz, method, signal_id="", config=None))]
fn analyze(
    py: Python<'_>,
    samples: Vec<f64>,
    sample_rate_hz: f64,
    method: &str,
    signal_id: &str,
    config: Option<&Bound<'_, PyAny>>,
) -> PyResult<PyGrid> {
    let x = signal(samples, sample_rate_hz)?;
    let m = self::method(method)?;
    let cfg = overlay(CompareConfig::for_signal(signal_id), config)?;
    let g = py.detach(|| eval::compute_tfd(&x, m, &cfg)).or_py()?;
    Ok(PyGrid { inner: g })
}

#[pyfunction]
fn rmse(actual: &PyTrajectory, estimated: &PyTrajectory) -> PyResult<f64> {
    eval::rmse(&actual.inner, &estimated.inner).or_py()
}

#[pyfunction]
fn nrmse(actual: &PyTrajectory, estimated: &PyTrajectory) -> PyResult<f64> {
    eval::nrmse(&actual.inner, &estimated.inner).or_py()
}

/// Run several methods on one signal and score them. With `truth` (the
/// synthetic the samples came from) each entry carries an `nrmse`.
#[pyfunction]
#[pyo3(signature = (synthetic, methods=None, config=None, with_truth=true))]
fn compare<'py>(
    py: Python<'py>,
    synthetic: &PySynthetic,
    methods: Option<Vec<String>>,
    config: Option<&Bound<'py, PyAny>>,
    with_truth: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let sig = &synthetic.inner;
    let methods = match methods {
        Some(names) => names
            .iter()
            .map(|n| method(n))
            .collect::<PyResult<Vec<_>>>()?,
        None => vec![Method::Stft, Method::Pct, Method::Wvd, Method::Spwvd],
    };
    let cfg = overlay(CompareConfig::for_signal(&sig.id), config)?;
    let truth = GroundTruth {
        components: sig.true_if.clone(),
        dominant: sig.dominant_component,
    };
    let truth = with_truth.then_some(&truth);
    let report = py
        .detach(|| eval::compare_methods(&sig.id, &sig.signal, truth, &methods, &cfg))
        .or_py()?;
    to_dict(py, &report)
}

#[pymodule]
#[pyo3(name = "scg_tfd")]
pub fn scg_tfd_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTrajectory>()?;
    m.add_class::<PySynthetic>()?;
    m.add_class::<PyGrid>()?;
    m.add_function(wrap_pyfunction!(gen_x1, m)?)?;
    m.add_function(wrap_pyfunction!(gen_x2, m)?)?;
    m.add_function(wrap_pyfunction!(stft, m)?)?;
    m.add_function(wrap_pyfunction!(wvd, m)?)?;
    m.add_function(wrap_pyfunction!(pwvd, m)?)?;
    m.add_function(wrap_pyfunction!(spwvd, m)?)?;
    m.add_function(wrap_pyfunction!(pct, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(rmse, m)?)?;
    m.add_function(wrap_pyfunction!(nrmse, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    Ok(())
}
