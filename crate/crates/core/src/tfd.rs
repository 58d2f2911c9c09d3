//! Fourier-family time-frequency distributions: STFT and the Wigner-Ville
//! family (WVD, pseudo-WVD, smoothed pseudo-WVD).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, TfdError};
use crate::fft;
use crate::signal::{analytic_signal, ComplexSignal, SampledSignal};
use crate::window::{make_window, WindowSpec};

/// Largest tolerated `|imag| / max|real|` of a WVD row before it is dropped.
pub const WVD_IMAG_TOLERANCE: f64 = 1e-9;

/// Which estimator produced a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Stft,
    Pct,
    Wvd,
    Pwvd,
    Spwvd,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Stft,
        Method::Pct,
        Method::Wvd,
        Method::Pwvd,
        Method::Spwvd,
    ];

    /// Wigner-Ville family grids carry signed values.
    pub fn is_wigner(self) -> bool {
        matches!(self, Method::Wvd | Method::Pwvd | Method::Spwvd)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Stft => "stft",
            Method::Pct => "pct",
            Method::Wvd => "wvd",
            Method::Pwvd => "pwvd",
            Method::Spwvd => "spwvd",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = TfdError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                TfdError::InvalidArgument(format!(
                    "unknown method '{s}' (expected one of stft, pct, wvd, pwvd, spwvd)"
                ))
            })
    }
}

/// Parameters a grid was computed with.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GridMeta {
    pub sample_rate_hz: f64,
    pub hop_samples: usize,
    pub fft_length: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_window: Option<WindowSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq_window: Option<WindowSpec>,
    /// Whether the transform ran on the analytic associate.
    pub analytic: bool,
    /// Frequency above which components fold back into the grid.
    pub folding_hz: f64,
    /// PCT kernel coefficients `α₁..αₙ` (Hz/sᵏ).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_converged: Option<bool>,
    /// Largest discarded imaginary residue relative to the peak (WVD family).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imag_residue: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimation_factor: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Time × frequency matrix of distribution values.
///
/// `values` is stored row-major by time: `values[t * n_freqs + f]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TfdGrid {
    pub times_s: Vec<f64>,
    pub freqs_hz: Vec<f64>,
    values: Vec<f64>,
    pub method: Method,
    pub meta: GridMeta,
}

impl TfdGrid {
    pub fn new(
        times_s: Vec<f64>,
        freqs_hz: Vec<f64>,
        values: Vec<f64>,
        method: Method,
        meta: GridMeta,
    ) -> Result<Self> {
        if values.len() != times_s.len() * freqs_hz.len() {
            return invalid(format!(
                "grid has {} values for {} x {} axes",
                values.len(),
                times_s.len(),
                freqs_hz.len()
            ));
        }
        for (name, axis) in [("time", &times_s), ("frequency", &freqs_hz)] {
            if axis.windows(2).any(|w| !(w[1] > w[0])) {
                return invalid(format!("{name} axis is not strictly increasing"));
            }
        }
        Ok(Self {
            times_s,
            freqs_hz,
            values,
            method,
            meta,
        })
    }

    pub fn n_times(&self) -> usize {
        self.times_s.len()
    }

    pub fn n_freqs(&self) -> usize {
        self.freqs_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn row(&self, t: usize) -> &[f64] {
        let nf = self.n_freqs();
        &self.values[t * nf..(t + 1) * nf]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.n_freqs().max(1))
    }

    pub fn value(&self, t: usize, f: usize) -> f64 {
        self.values[t * self.n_freqs() + f]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Grid with every value multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut g = self.clone();
        g.values.iter_mut().for_each(|v| *v *= c);
        g
    }

    /// Values used for peak picking: magnitudes for signed (Wigner) grids.
    pub fn peak_value(&self, t: usize, f: usize) -> f64 {
        let v = self.value(t, f);
        if self.method.is_wigner() {
            v.abs()
        } else {
            v
        }
    }
}

/// Sliding windowed DFT power on a complex sequence.
///
/// `modulate(center, i)` returns a factor applied to sample `i` inside the
/// frame whose center sample position is `center`; `None` leaves the samples
/// untouched.
#[allow(clippy::too_many_arguments)]
pub(crate) fn sliding_power<F>(
    samples: &[Complex64],
    sample_rate_hz: f64,
    start_time_s: f64,
    window: &WindowSpec,
    hop: usize,
    fft_length: usize,
    modulate: Option<F>,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)>
where
    F: Fn(f64, usize) -> Complex64 + Sync,
{
    let win = make_window(window)?;
    let len = win.len();
    if hop == 0 {
        return invalid("hop must be at least 1 sample");
    }
    if len > fft_length {
        return invalid(format!(
            "window length {len} exceeds fft length {fft_length}"
        ));
    }
    if len > samples.len() {
        return invalid(format!(
            "window length {len} exceeds signal length {}",
            samples.len()
        ));
    }

    let frames = (samples.len() - len) / hop + 1;
    let n_freqs = fft_length / 2 + 1;
    let plan = fft::forward(fft_length);
    let half = (len - 1) as f64 / 2.0;

    let rows: Vec<Vec<f64>> = (0..frames)
        .into_par_iter()
        .map(|k| {
            let start = k * hop;
            let center = start as f64 + half;
            let mut buf = fft::zeros(fft_length);
            for (j, (b, w)) in buf.iter_mut().zip(&win).enumerate() {
                let i = start + j;
                let s = samples[i] * *w;
                *b = match &modulate {
                    Some(m) => s * m(center, i),
                    None => s,
                };
            }
            plan.process(&mut buf);
            buf[..n_freqs].iter().map(|c| c.norm_sqr()).collect()
        })
        .collect();

    let times = (0..frames)
        .map(|k| start_time_s + (k * hop) as f64 / sample_rate_hz + half / sample_rate_hz)
        .collect();
    let freqs = (0..n_freqs)
        .map(|k| k as f64 * sample_rate_hz / fft_length as f64)
        .collect();
    Ok((times, freqs, rows.concat()))
}

/// Short-time Fourier transform power (spectrogram).
///
/// Frame `k` covers samples `[k·hop, k·hop + window.length)` and is stamped
/// with the time of its window center. Bins run from 0 to `fs / 2` with a
/// spacing of `fs / fft_length`.
pub fn stft(
    x: &SampledSignal,
    window: &WindowSpec,
    hop_samples: usize,
    fft_length: usize,
) -> Result<TfdGrid> {
    let z = ComplexSignal::from_real(x);
    stft_complex(&z, window, hop_samples, fft_length)
}

/// [`stft`] of a complex sequence; only the non-negative half of the
/// spectrum is kept.
pub fn stft_complex(
    z: &ComplexSignal,
    window: &WindowSpec,
    hop_samples: usize,
    fft_length: usize,
) -> Result<TfdGrid> {
    let (times, freqs, values) = sliding_power(
        z.samples(),
        z.sample_rate_hz(),
        z.start_time_s(),
        window,
        hop_samples,
        fft_length,
        None::<fn(f64, usize) -> Complex64>,
    )?;
    let rate = z.sample_rate_hz();
    TfdGrid::new(
        times,
        freqs,
        values,
        Method::Stft,
        GridMeta {
            sample_rate_hz: rate,
            hop_samples,
            fft_length,
            window: Some(*window),
            analytic: false,
            folding_hz: rate / 2.0,
            ..GridMeta::default()
        },
    )
}

/// Wigner-Ville distribution, one row per input sample.
///
/// Row `n` is the DFT over lag `m` of `z[n+m] · conj(z[n−m])`, with lags
/// truncated at the signal edges. Bin `k` sits at `k · fs / (2 · fft_length)`,
/// so the grid spans `[0, fs/2)`. With `use_analytic == false` the real input
/// is used directly and anything above `fs/4` folds back.
pub fn wvd(x: &SampledSignal, fft_length: usize, use_analytic: bool) -> Result<TfdGrid> {
    if x.len() < 4 {
        return invalid("WVD needs at least 4 samples");
    }
    let z = if use_analytic {
        analytic_signal(x)?
    } else {
        ComplexSignal::from_real(x)
    };
    let mut g = smoothed_wvd(&z, None, None, fft_length, Method::Wvd)?;
    g.meta.analytic = use_analytic;
    g.meta.folding_hz = folding(x.sample_rate_hz(), use_analytic);
    Ok(g)
}

/// WVD of an already complex sequence (e.g. a precomputed analytic signal).
pub fn wvd_complex(z: &ComplexSignal, fft_length: usize) -> Result<TfdGrid> {
    if z.len() < 4 {
        return invalid("WVD needs at least 4 samples");
    }
    let mut g = smoothed_wvd(z, None, None, fft_length, Method::Wvd)?;
    g.meta.analytic = true;
    Ok(g)
}

/// Pseudo-WVD: the lag product is tapered by `freq_window` (centered on lag
/// zero) before the DFT, which smooths along frequency.
pub fn pwvd(x: &SampledSignal, freq_window: &WindowSpec, fft_length: usize) -> Result<TfdGrid> {
    let h = odd_window(freq_window, "frequency")?;
    if x.len() < 4 {
        return invalid("WVD needs at least 4 samples");
    }
    let z = analytic_signal(x)?;
    let mut g = smoothed_wvd(&z, None, Some(&h), fft_length, Method::Pwvd)?;
    g.meta.freq_window = Some(*freq_window);
    Ok(g)
}

/// Smoothed pseudo-WVD with a separable kernel.
///
/// For each lag the product `z[n+p+m] · conj(z[n+p−m])` is averaged over
/// `p` with weights `time_window(p)` (renormalised over the samples that
/// exist), tapered by `freq_window(m)` and transformed over lag.
pub fn spwvd(
    x: &SampledSignal,
    time_window: &WindowSpec,
    freq_window: &WindowSpec,
    fft_length: usize,
) -> Result<TfdGrid> {
    let g_win = odd_window(time_window, "time")?;
    let h_win = odd_window(freq_window, "frequency")?;
    if x.len() < 4 {
        return invalid("WVD needs at least 4 samples");
    }
    let z = analytic_signal(x)?;
    let mut g = smoothed_wvd(&z, Some(&g_win), Some(&h_win), fft_length, Method::Spwvd)?;
    g.meta.time_window = Some(*time_window);
    g.meta.freq_window = Some(*freq_window);
    Ok(g)
}

fn odd_window(spec: &WindowSpec, which: &str) -> Result<Vec<f64>> {
    if spec.length.is_multiple_of(2) {
        return invalid(format!(
            "{which} window length must be odd, got {}",
            spec.length
        ));
    }
    make_window(spec)
}

fn folding(rate: f64, analytic: bool) -> f64 {
    if analytic {
        rate / 2.0
    } else {
        rate / 4.0
    }
}

fn smoothed_wvd(
    z: &ComplexSignal,
    time_window: Option<&[f64]>,
    lag_window: Option<&[f64]>,
    fft_length: usize,
    method: Method,
) -> Result<TfdGrid> {
    let n = z.len();
    let s = z.samples();
    let lg = time_window.map_or(0, |g| g.len() / 2) as isize;
    let lh = lag_window.map_or(usize::MAX, |h| h.len() / 2);

    let max_lag = ((n - 1) / 2 + lg as usize).min(lh).min(n - 1);
    if fft_length < 2 * max_lag + 1 {
        return invalid(format!(
            "fft length {fft_length} is too short for {} lags; need at least {}",
            2 * max_lag + 1,
            2 * max_lag + 1
        ));
    }

    let plan = fft::forward(fft_length);
    let ni = n as isize;
    let rows: Vec<(Vec<f64>, f64)> = (0..ni)
        .into_par_iter()
        .map(|t| {
            let mut buf = fft::zeros(fft_length);
            let lag_limit = (t + lg).min(ni - 1 - t + lg).min(max_lag as isize).max(0);
            for m in -lag_limit..=lag_limit {
                let product = match time_window {
                    None => s[(t + m) as usize] * s[(t - m) as usize].conj(),
                    Some(g) => {
                        let mut acc = Complex64::new(0.0, 0.0);
                        let mut weight = 0.0;
                        for p in -lg..=lg {
                            let a = t + p + m;
                            let b = t + p - m;
                            if a < 0 || b < 0 || a >= ni || b >= ni {
                                continue;
                            }
                            let w = g[(p + lg) as usize];
                            acc += s[a as usize] * s[b as usize].conj() * w;
                            weight += w;
                        }
                        if weight > 0.0 {
                            acc / weight
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    }
                };
                let taper = lag_window.map_or(1.0, |h| h[(m + lh as isize) as usize]);
                buf[m.rem_euclid(fft_length as isize) as usize] = product * taper;
            }
            plan.process(&mut buf);
            let peak = buf.iter().fold(0.0f64, |a, c| a.max(c.re.abs()));
            let imag = buf.iter().fold(0.0f64, |a, c| a.max(c.im.abs()));
            let residue = if peak > 0.0 { imag / peak } else { 0.0 };
            (buf.iter().map(|c| c.re).collect(), residue)
        })
        .collect();

    let residue = rows.iter().fold(0.0f64, |a, r| a.max(r.1));
    debug_assert!(
        residue < WVD_IMAG_TOLERANCE,
        "WVD imaginary residue {residue} exceeds tolerance"
    );
    let values: Vec<f64> = rows.into_iter().flat_map(|r| r.0).collect();
    let rate = z.sample_rate_hz();
    let times = (0..n).map(|i| z.time_at(i)).collect();
    let freqs = (0..fft_length)
        .map(|k| k as f64 * rate / (2.0 * fft_length as f64))
        .collect();
    let mut meta = GridMeta {
        sample_rate_hz: rate,
        hop_samples: 1,
        fft_length,
        analytic: true,
        folding_hz: rate / 2.0,
        imag_residue: Some(residue),
        ..GridMeta::default()
    };
    if residue >= WVD_IMAG_TOLERANCE {
        meta.warnings.push(format!(
            "imaginary residue {residue:e} exceeds {WVD_IMAG_TOLERANCE:e}"
        ));
    }
    TfdGrid::new(times, freqs, values, method, meta)
}

/// Normalised frequency marginal of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Psd {
    pub freqs_hz: Vec<f64>,
    pub power: Vec<f64>,
    /// Set when the grid carried no energy; `power` is then all zero.
    pub all_zero: bool,
}

impl Psd {
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.freqs_hz
            .iter()
            .copied()
            .zip(self.power.iter().copied())
            .collect()
    }

    pub fn argmax_in(&self, band: Option<(f64, f64)>) -> Option<usize> {
        let (lo, hi) = band.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
        self.freqs_hz
            .iter()
            .enumerate()
            .filter(|(_, f)| **f >= lo && **f <= hi)
            .fold(None, |best: Option<usize>, (i, _)| match best {
                Some(b) if self.power[b] >= self.power[i] => Some(b),
                _ => Some(i),
            })
    }
}

/// Time-averaged frequency marginal, normalised to unit sum.
///
/// Wigner-family grids are averaged in magnitude so oscillating cross-terms
/// show up instead of cancelling.
pub fn psd_from_tfd(g: &TfdGrid) -> Result<Psd> {
    if g.is_empty() {
        return invalid("cannot take the PSD of an empty grid");
    }
    let nf = g.n_freqs();
    let mut power = vec![0.0; nf];
    for row in g.rows() {
        for (p, v) in power.iter_mut().zip(row) {
            *p += if g.method.is_wigner() { v.abs() } else { *v };
        }
    }
    let nt = g.n_times() as f64;
    power.iter_mut().for_each(|p| *p /= nt);
    let total: f64 = power.iter().sum();
    let all_zero = total == 0.0;
    if !all_zero {
        power.iter_mut().for_each(|p| *p /= total);
    }
    Ok(Psd {
        freqs_hz: g.freqs_hz.clone(),
        power,
        all_zero,
    })
}

/// Grid spacing and folding summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub temporal_resolution_ms: f64,
    pub spectral_resolution_hz: f64,
    pub nyquist_hz: f64,
    pub folding_hz: f64,
}

pub fn resolution_report(g: &TfdGrid) -> Result<ResolutionReport> {
    if g.n_times() < 2 || g.n_freqs() < 2 {
        return invalid("resolution needs at least 2 points on each axis");
    }
    let rate = g.meta.sample_rate_hz;
    if !(rate > 0.0) {
        return invalid("grid meta has no sample rate");
    }
    Ok(ResolutionReport {
        temporal_resolution_ms: 1000.0 * g.meta.hop_samples as f64 / rate,
        spectral_resolution_hz: g.freqs_hz[1] - g.freqs_hz[0],
        nyquist_hz: rate / 2.0,
        folding_hz: g.meta.folding_hz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tone(freq: f64, rate: f64, n: usize) -> SampledSignal {
        let s = (0..n)
            .map(|i| (2.0 * PI * freq * i as f64 / rate).cos())
            .collect();
        SampledSignal::new(s, rate).unwrap()
    }

    #[test]
    fn stft_tone_localisation_and_axes() {
        let x = tone(20.0, 320.0, 320);
        let g = stft(&x, &WindowSpec::hann(128), 4, 512).unwrap();
        assert_eq!(g.n_freqs(), 257);
        assert_eq!(g.n_times(), (320 - 128) / 4 + 1);
        assert!((g.times_s[1] - g.times_s[0] - 0.0125).abs() < 1e-12);
        assert!((g.times_s[0] - 63.5 / 320.0).abs() < 1e-12);
        for t in 0..g.n_times() {
            let row = g.row(t);
            let k = (0..row.len())
                .max_by(|&a, &b| row[a].total_cmp(&row[b]))
                .unwrap();
            assert!((g.freqs_hz[k] - 20.0).abs() <= 0.625);
        }
    }

    #[test]
    fn stft_rejects_bad_shapes() {
        let x = tone(20.0, 320.0, 100);
        assert!(stft(&x, &WindowSpec::hann(128), 4, 512).is_err());
        assert!(stft(&x, &WindowSpec::hann(64), 0, 512).is_err());
        assert!(stft(&x, &WindowSpec::hann(64), 4, 32).is_err());
    }

    #[test]
    fn zero_input_gives_zero_grids() {
        let x = SampledSignal::new(vec![0.0; 64], 320.0).unwrap();
        let grids = [
            stft(&x, &WindowSpec::hann(16), 2, 32).unwrap(),
            wvd(&x, 64, true).unwrap(),
            pwvd(&x, &WindowSpec::hann(15), 64).unwrap(),
            spwvd(&x, &WindowSpec::hann(5), &WindowSpec::hann(15), 64).unwrap(),
        ];
        for g in grids {
            assert!(g.values().iter().all(|v| *v == 0.0), "{}", g.method);
            let psd = psd_from_tfd(&g).unwrap();
            assert!(psd.all_zero);
            assert!(psd.power.iter().all(|p| *p == 0.0));
        }
    }

    #[test]
    fn even_smoothing_windows_rejected() {
        let x = tone(20.0, 320.0, 64);
        assert!(pwvd(&x, &WindowSpec::hann(16), 128).is_err());
        assert!(spwvd(&x, &WindowSpec::hann(4), &WindowSpec::hann(15), 128).is_err());
        assert!(spwvd(&x, &WindowSpec::hann(5), &WindowSpec::hann(14), 128).is_err());
    }

    #[test]
    fn wvd_requires_long_enough_fft() {
        let x = tone(20.0, 320.0, 64);
        assert!(wvd(&x, 32, true).is_err());
        assert!(wvd(&x, 64, true).is_ok());
        assert!(wvd(&tone(20.0, 320.0, 3), 64, true).is_err());
    }

    #[test]
    fn pwvd_with_full_rectangular_lag_window_equals_wvd() {
        let x = tone(33.0, 320.0, 101);
        let a = wvd(&x, 256, true).unwrap();
        let b = pwvd(&x, &WindowSpec::rectangular(2 * 101 - 1), 256).unwrap();
        let peak = a.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (u, v) in a.values().iter().zip(b.values()) {
            assert!((u - v).abs() <= 1e-9 * peak);
        }
    }

    #[test]
    fn wvd_of_pure_tone_is_a_line() {
        let x = tone(40.0, 320.0, 256);
        let g = wvd(&x, 512, true).unwrap();
        let spacing = g.freqs_hz[1];
        let hits = (0..g.n_times())
            .filter(|&t| {
                let row = g.row(t);
                let k = (0..row.len())
                    .max_by(|&a, &b| row[a].abs().total_cmp(&row[b].abs()))
                    .unwrap();
                (g.freqs_hz[k] - 40.0).abs() <= spacing
            })
            .count();
        assert!(hits as f64 >= 0.95 * g.n_times() as f64);
    }

    #[test]
    fn resolution_reports() {
        let x = tone(20.0, 320.0, 320);
        let s = resolution_report(&stft(&x, &WindowSpec::hann(128), 4, 512).unwrap()).unwrap();
        assert!((s.temporal_resolution_ms - 12.5).abs() < 1e-12);
        assert!((s.spectral_resolution_hz - 0.625).abs() < 1e-12);
        assert_eq!(s.folding_hz, 160.0);
        let w = resolution_report(&wvd(&x, 1300, false).unwrap()).unwrap();
        assert!((w.temporal_resolution_ms - 3.125).abs() < 1e-12);
        assert_eq!(w.folding_hz, 80.0);
        assert_eq!(w.nyquist_hz, 160.0);
        assert!((w.spectral_resolution_hz - 320.0 / 2600.0).abs() < 1e-12);
    }

    #[test]
    fn psd_normalises_to_one() {
        let x = tone(20.0, 320.0, 320);
        let g = stft(&x, &WindowSpec::hann(128), 4, 512).unwrap();
        let psd = psd_from_tfd(&g).unwrap();
        assert!((psd.power.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let k = psd.argmax_in(None).unwrap();
        assert!((psd.freqs_hz[k] - 20.0).abs() < 1e-9);
        assert_eq!(psd.pairs().len(), g.n_freqs());
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("cwt".parse::<Method>().is_err());
        assert_eq!("SPWVD".parse::<Method>().unwrap(), Method::Spwvd);
    }

    #[test]
    fn grid_shape_is_checked() {
        assert!(TfdGrid::new(
            vec![0.0, 1.0],
            vec![0.0],
            vec![1.0],
            Method::Stft,
            GridMeta::default()
        )
        .is_err());
        assert!(TfdGrid::new(
            vec![1.0, 0.0],
            vec![0.0],
            vec![1.0, 2.0],
            Method::Stft,
            GridMeta::default()
        )
        .is_err());
    }
}
