//! IF ridge extraction, error metrics and the method-comparison harness.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, TfdError};
use crate::pct::{pct_auto, PctConfig};
use crate::signal::SampledSignal;
use crate::tfd::{self, psd_from_tfd, resolution_report, ResolutionReport, TfdGrid};
use crate::window::WindowSpec;

pub use crate::tfd::Method;

/// Per-instant frequency estimate with a validity mask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IfTrajectory {
    pub times_s: Vec<f64>,
    pub freqs_hz: Vec<f64>,
    pub valid: Vec<bool>,
}

impl IfTrajectory {
    pub fn new(times_s: Vec<f64>, freqs_hz: Vec<f64>, valid: Vec<bool>) -> Result<Self> {
        if times_s.len() != freqs_hz.len() || times_s.len() != valid.len() {
            return invalid(format!(
                "trajectory lengths differ: {} times, {} freqs, {} mask",
                times_s.len(),
                freqs_hz.len(),
                valid.len()
            ));
        }
        if times_s.windows(2).any(|w| !(w[1] > w[0])) {
            return invalid("trajectory times are not strictly increasing");
        }
        if freqs_hz
            .iter()
            .zip(&valid)
            .any(|(f, v)| *v && !f.is_finite())
        {
            return invalid("valid trajectory points must be finite");
        }
        Ok(Self {
            times_s,
            freqs_hz,
            valid,
        })
    }

    pub fn len(&self) -> usize {
        self.times_s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times_s.is_empty()
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    /// Nearest-neighbour lookup onto `times`. Points outside this
    /// trajectory's span (by more than half a step) are invalid.
    pub fn resample_nearest(&self, times: &[f64]) -> Result<IfTrajectory> {
        if self.is_empty() {
            return invalid("cannot resample an empty trajectory");
        }
        let n = self.len();
        let half_step = if n > 1 {
            0.5 * (self.times_s[n - 1] - self.times_s[0]) / (n - 1) as f64
        } else {
            0.0
        };
        let lo = self.times_s[0] - half_step * 1.000_001;
        let hi = self.times_s[n - 1] + half_step * 1.000_001;
        let mut freqs = Vec::with_capacity(times.len());
        let mut valid = Vec::with_capacity(times.len());
        for &t in times {
            let idx = match self.times_s.binary_search_by(|p| p.total_cmp(&t)) {
                Ok(i) => i,
                Err(0) => 0,
                Err(i) if i >= n => n - 1,
                Err(i) => {
                    if t - self.times_s[i - 1] <= self.times_s[i] - t {
                        i - 1
                    } else {
                        i
                    }
                }
            };
            freqs.push(self.freqs_hz[idx]);
            valid.push(self.valid[idx] && t >= lo && t <= hi);
        }
        IfTrajectory::new(times.to_vec(), freqs, valid)
    }
}

/// Per-frame argmax ridge; see [`extract_ridge`].
pub fn ridge_with_peaks(
    g: &TfdGrid,
    band_hz: Option<(f64, f64)>,
    amp_threshold_frac: f64,
) -> Result<(IfTrajectory, Vec<f64>)> {
    if g.is_empty() {
        return invalid("grid is empty");
    }
    if !(0.0..1.0).contains(&amp_threshold_frac) {
        return invalid(format!(
            "amplitude threshold {amp_threshold_frac} is outside [0, 1)"
        ));
    }
    let (lo, hi) = band_hz.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    let bins: Vec<usize> = (0..g.n_freqs())
        .filter(|&k| g.freqs_hz[k] >= lo && g.freqs_hz[k] <= hi)
        .collect();
    if bins.is_empty() {
        return invalid(format!(
            "band ({lo}, {hi}) Hz does not intersect the grid frequency axis"
        ));
    }

    let mut freqs = Vec::with_capacity(g.n_times());
    let mut peaks = Vec::with_capacity(g.n_times());
    for t in 0..g.n_times() {
        let (k, v) = bins.iter().map(|&k| (k, g.peak_value(t, k))).fold(
            (bins[0], f64::NEG_INFINITY),
            |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            },
        );
        freqs.push(g.freqs_hz[k]);
        peaks.push(v);
    }
    let global = peaks.iter().fold(0.0f64, |m, v| m.max(*v));
    let valid = peaks
        .iter()
        .map(|&p| global > 0.0 && p >= amp_threshold_frac * global)
        .collect();
    Ok((IfTrajectory::new(g.times_s.clone(), freqs, valid)?, peaks))
}

/// IF estimate as the per-frame frequency of the largest value inside
/// `band_hz` (magnitude for Wigner-family grids). Frames whose band maximum
/// is below `amp_threshold_frac` of the global band maximum are invalid.
pub fn extract_ridge(
    g: &TfdGrid,
    band_hz: Option<(f64, f64)>,
    amp_threshold_frac: f64,
) -> Result<IfTrajectory> {
    ridge_with_peaks(g, band_hz, amp_threshold_frac).map(|r| r.0)
}

fn joint_errors(actual: &IfTrajectory, estimated: &IfTrajectory) -> Result<Vec<(f64, f64)>> {
    if actual.len() != estimated.len() {
        return invalid(format!(
            "trajectories have different lengths ({} vs {})",
            actual.len(),
            estimated.len()
        ));
    }
    let same_grid = actual
        .times_s
        .iter()
        .zip(&estimated.times_s)
        .all(|(a, b)| (a - b).abs() <= 1e-9 * a.abs().max(1.0));
    if !same_grid {
        return invalid("trajectories are on different time grids");
    }
    let pairs: Vec<(f64, f64)> = (0..actual.len())
        .filter(|&i| actual.valid[i] && estimated.valid[i])
        .map(|i| (actual.freqs_hz[i], estimated.freqs_hz[i]))
        .collect();
    if pairs.is_empty() {
        return Err(TfdError::InsufficientData(
            "no time index is valid in both trajectories".into(),
        ));
    }
    Ok(pairs)
}

/// Root-mean-square IF error over indices valid in both trajectories.
pub fn rmse(actual: &IfTrajectory, estimated: &IfTrajectory) -> Result<f64> {
    let pairs = joint_errors(actual, estimated)?;
    let sum: f64 = pairs.iter().map(|(a, e)| (a - e) * (a - e)).sum();
    Ok((sum / pairs.len() as f64).sqrt())
}

/// [`rmse`] divided by the mean actual IF over the jointly valid indices.
pub fn nrmse(actual: &IfTrajectory, estimated: &IfTrajectory) -> Result<f64> {
    let pairs = joint_errors(actual, estimated)?;
    let n = pairs.len() as f64;
    let mean = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    if mean == 0.0 {
        return invalid("mean actual IF is zero");
    }
    let sum: f64 = pairs.iter().map(|(a, e)| (a - e) * (a - e)).sum();
    Ok((sum / n).sqrt() / mean)
}

/// Frequency of the PSD maximum inside `band_hz`.
pub fn dominant_frequency(g: &TfdGrid, band_hz: Option<(f64, f64)>) -> Result<f64> {
    let psd = psd_from_tfd(g)?;
    if psd.all_zero {
        return Err(TfdError::InsufficientData("grid carries no energy".into()));
    }
    match psd.argmax_in(band_hz) {
        Some(k) => Ok(psd.freqs_hz[k]),
        None => invalid("band does not intersect the grid frequency axis"),
    }
}

/// How a ridge is scored when the truth has several components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoringMode {
    /// Each frame is compared with whichever active component is closest
    /// to the estimate.
    #[default]
    Nearest,
    /// Only the dominant component is scored.
    Dominant,
}

/// Ground-truth IF components of a signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub components: Vec<IfTrajectory>,
    pub dominant: usize,
}

impl GroundTruth {
    /// Truth matched to `estimated` frame by frame, on its time grid.
    pub fn matched(&self, estimated: &IfTrajectory, mode: ScoringMode) -> Result<IfTrajectory> {
        if self.components.is_empty() {
            return invalid("ground truth has no components");
        }
        if self.dominant >= self.components.len() {
            return invalid("dominant component index out of range");
        }
        let resampled = self
            .components
            .iter()
            .map(|c| c.resample_nearest(&estimated.times_s))
            .collect::<Result<Vec<_>>>()?;
        let mut freqs = Vec::with_capacity(estimated.len());
        let mut valid = Vec::with_capacity(estimated.len());
        for i in 0..estimated.len() {
            let candidates: Vec<f64> = match mode {
                ScoringMode::Nearest => resampled
                    .iter()
                    .filter(|c| c.valid[i])
                    .map(|c| c.freqs_hz[i])
                    .collect(),
                ScoringMode::Dominant => {
                    let c = &resampled[self.dominant];
                    if c.valid[i] {
                        vec![c.freqs_hz[i]]
                    } else {
                        vec![]
                    }
                }
            };
            let est = estimated.freqs_hz[i];
            let best = candidates
                .into_iter()
                .fold(None, |best: Option<f64>, f| match best {
                    Some(b) if (b - est).abs() <= (f - est).abs() => Some(b),
                    _ => Some(f),
                });
            freqs.push(best.unwrap_or(0.0));
            valid.push(best.is_some());
        }
        IfTrajectory::new(estimated.times_s.clone(), freqs, valid)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StftConfig {
    pub window: WindowSpec,
    pub hop_samples: usize,
    pub fft_length: usize,
}

impl Default for StftConfig {
    fn default() -> Self {
        Self {
            window: WindowSpec::hann(128),
            hop_samples: 4,
            fft_length: 512,
        }
    }
}

/// Default lag-DFT length of the Wigner family (0.1231 Hz bins at 320 Hz).
pub const DEFAULT_WVD_FFT_LENGTH: usize = 1300;

/// `fft_length` if given, else the default, stretched to cover every lag of
/// an `n`-sample record.
pub fn resolve_wvd_fft_length(fft_length: Option<usize>, n: usize) -> usize {
    fft_length.unwrap_or(DEFAULT_WVD_FFT_LENGTH.max(n + 1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WvdConfig {
    pub fft_length: Option<usize>,
    pub use_analytic: bool,
}

impl Default for WvdConfig {
    fn default() -> Self {
        Self {
            fft_length: None,
            use_analytic: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PwvdConfig {
    pub freq_window: WindowSpec,
    pub fft_length: Option<usize>,
}

impl Default for PwvdConfig {
    fn default() -> Self {
        Self {
            freq_window: WindowSpec::hann(63),
            fft_length: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpwvdConfig {
    pub time_window: WindowSpec,
    pub freq_window: WindowSpec,
    pub fft_length: Option<usize>,
}

impl Default for SpwvdConfig {
    fn default() -> Self {
        Self {
            time_window: WindowSpec::hann(31),
            freq_window: WindowSpec::hann(63),
            fft_length: None,
        }
    }
}

/// Parameters for every estimator plus the scoring rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CompareConfig {
    pub stft: StftConfig,
    pub wvd: WvdConfig,
    pub pwvd: PwvdConfig,
    pub spwvd: SpwvdConfig,
    pub pct: PctConfig,
    /// Band searched for ridges and dominant frequencies.
    pub band_hz: Option<(f64, f64)>,
    pub amp_threshold_frac: f64,
    pub scoring: ScoringMode,
}

impl Default for CompareConfig {
    fn default() -> Self {
        Self {
            stft: StftConfig::default(),
            wvd: WvdConfig::default(),
            pwvd: PwvdConfig::default(),
            spwvd: SpwvdConfig::default(),
            pct: PctConfig::default(),
            band_hz: Some((0.0, 70.0)),
            amp_threshold_frac: 0.05,
            scoring: ScoringMode::Nearest,
        }
    }
}

impl CompareConfig {
    /// Defaults tuned to a synthetic signal id: `x2` uses a 128-point STFT
    /// (2.5 Hz bins) and scores only its dominant chirp, everything else the
    /// 512-point STFT (0.625 Hz) and nearest-component scoring.
    pub fn for_signal(id: &str) -> Self {
        let mut cfg = Self::default();
        if id == "x2" {
            cfg.stft.fft_length = 128;
            cfg.scoring = ScoringMode::Dominant;
        }
        cfg
    }
}

/// Run one estimator with its configured parameters.
pub fn compute_tfd(x: &SampledSignal, method: Method, cfg: &CompareConfig) -> Result<TfdGrid> {
    let n = x.len();
    match method {
        Method::Stft => tfd::stft(
            x,
            &cfg.stft.window,
            cfg.stft.hop_samples,
            cfg.stft.fft_length,
        ),
        Method::Wvd => tfd::wvd(
            x,
            resolve_wvd_fft_length(cfg.wvd.fft_length, n),
            cfg.wvd.use_analytic,
        ),
        Method::Pwvd => tfd::pwvd(
            x,
            &cfg.pwvd.freq_window,
            resolve_wvd_fft_length(cfg.pwvd.fft_length, n),
        ),
        Method::Spwvd => tfd::spwvd(
            x,
            &cfg.spwvd.time_window,
            &cfg.spwvd.freq_window,
            resolve_wvd_fft_length(cfg.spwvd.fft_length, n),
        ),
        Method::Pct => pct_auto(x, &cfg.pct),
    }
}

/// One row of a [`ComparisonReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodResult {
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nrmse: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rmse_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominant_freq_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<ResolutionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl MethodResult {
    fn failed(method: Method, err: TfdError) -> Self {
        Self {
            method,
            nrmse: None,
            rmse_hz: None,
            dominant_freq_hz: None,
            resolution: None,
            kernel: None,
            converged: None,
            error: Some(err.to_string()),
            warnings: vec![],
        }
    }
}

/// Per-method accuracy and spectral summary of one signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub signal_id: String,
    pub scoring: ScoringMode,
    pub entries: Vec<MethodResult>,
}

impl ComparisonReport {
    pub fn entry(&self, method: Method) -> Option<&MethodResult> {
        self.entries.iter().find(|e| e.method == method)
    }

    pub fn nrmse(&self, method: Method) -> Option<f64> {
        self.entry(method).and_then(|e| e.nrmse)
    }

    /// Aligned text table: one row per method.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "signal: {}  (scoring: {:?})",
            self.signal_id, self.scoring
        );
        let _ = writeln!(
            out,
            "{:<7} {:>8} {:>14} {:>13} {:>13} {:>11}  status",
            "method", "NRMSE", "dominant (Hz)", "temporal (ms)", "spectral (Hz)", "folding (Hz)"
        );
        for e in &self.entries {
            let num = |v: Option<f64>, p: usize| v.map_or("-".to_string(), |v| format!("{v:.p$}"));
            let status = match (&e.error, e.converged) {
                (Some(err), _) => format!("error: {err}"),
                (None, Some(false)) => "not converged".to_string(),
                _ => "ok".to_string(),
            };
            let _ = writeln!(
                out,
                "{:<7} {:>8} {:>14} {:>13} {:>13} {:>11}  {}",
                e.method.as_str().to_uppercase(),
                num(e.nrmse, 4),
                num(e.dominant_freq_hz, 2),
                num(e.resolution.map(|r| r.temporal_resolution_ms), 3),
                num(e.resolution.map(|r| r.spectral_resolution_hz), 4),
                num(e.resolution.map(|r| r.folding_hz), 1),
                status
            );
        }
        out
    }
}

/// Run each requested estimator, extract its ridge and score it.
///
/// A failing method becomes an entry with `error` set; the others still run.
pub fn compare_methods(
    signal_id: &str,
    x: &SampledSignal,
    truth: Option<&GroundTruth>,
    methods: &[Method],
    cfg: &CompareConfig,
) -> Result<ComparisonReport> {
    if methods.is_empty() {
        return invalid("no methods requested");
    }
    let entries = methods
        .par_iter()
        .map(|&m| evaluate_method(x, truth, m, cfg).unwrap_or_else(|e| MethodResult::failed(m, e)))
        .collect();
    Ok(ComparisonReport {
        signal_id: signal_id.to_string(),
        scoring: cfg.scoring,
        entries,
    })
}

fn evaluate_method(
    x: &SampledSignal,
    truth: Option<&GroundTruth>,
    method: Method,
    cfg: &CompareConfig,
) -> Result<MethodResult> {
    let grid = compute_tfd(x, method, cfg)?;
    let (nrmse_v, rmse_v) = match truth {
        Some(truth) => {
            let ridge = extract_ridge(&grid, cfg.band_hz, cfg.amp_threshold_frac)?;
            let actual = truth.matched(&ridge, cfg.scoring)?;
            (Some(nrmse(&actual, &ridge)?), Some(rmse(&actual, &ridge)?))
        }
        None => (None, None),
    };
    Ok(MethodResult {
        method,
        nrmse: nrmse_v,
        rmse_hz: rmse_v,
        dominant_freq_hz: dominant_frequency(&grid, cfg.band_hz).ok(),
        resolution: resolution_report(&grid).ok(),
        kernel: grid.meta.kernel.clone(),
        converged: grid.meta.kernel_converged,
        error: None,
        warnings: grid.meta.warnings.clone(),
    })
}
