//! File formats: signal CSV/WAV, TFD matrix CSV with JSON sidecar, PGM
//! heatmaps and ground-truth sidecars.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TfdError};
use crate::eval::{GroundTruth, IfTrajectory};
use crate::signal::SampledSignal;
use crate::synth::SyntheticSignal;
use crate::tfd::{GridMeta, Method, TfdGrid};

/// Header of the signal CSV format.
pub const SIGNAL_CSV_HEADER: &str = "time_s,amplitude";

fn format_err(msg: impl Into<String>) -> TfdError {
    TfdError::Format(msg.into())
}

pub fn signal_to_csv(x: &SampledSignal) -> String {
    let mut out = String::with_capacity(24 * x.len() + 32);
    out.push_str(SIGNAL_CSV_HEADER);
    out.push('\n');
    for (i, v) in x.samples().iter().enumerate() {
        let _ = writeln!(out, "{},{}", x.time_at(i), v);
    }
    out
}

/// Parse `time_s,amplitude` CSV. The sample rate is recovered from the time
/// column, which must be uniformly spaced.
pub fn signal_from_csv(text: &str) -> Result<SampledSignal> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| format_err(format!("unreadable CSV header: {e}")))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| format_err(format!("CSV header lacks column '{name}'")))
    };
    let (ti, ai) = (col("time_s")?, col("amplitude")?);

    let mut times = Vec::new();
    let mut samples = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format_err(format!("CSV row {}: {e}", line + 2)))?;
        let parse = |i: usize| -> Result<f64> {
            record
                .get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| format_err(format!("CSV row {}: bad number", line + 2)))
        };
        times.push(parse(ti)?);
        samples.push(parse(ai)?);
    }
    if times.len() < 2 {
        return Err(format_err("signal CSV needs at least 2 rows"));
    }
    let n = times.len();
    let dt = (times[n - 1] - times[0]) / (n - 1) as f64;
    if !(dt > 0.0) {
        return Err(format_err("time column must be increasing"));
    }
    if times
        .windows(2)
        .any(|w| ((w[1] - w[0]) - dt).abs() > 1e-3 * dt)
    {
        return Err(format_err("time column is not uniformly sampled"));
    }
    let mut rate = 1.0 / dt;
    if (rate - rate.round()).abs() < 1e-6 * rate {
        rate = rate.round();
    }
    Ok(SampledSignal::new(samples, rate)?.with_start_time(times[0]))
}

pub fn read_signal_csv(path: &Path) -> Result<SampledSignal> {
    signal_from_csv(&fs::read_to_string(path)?)
}

pub fn write_signal_csv(path: &Path, x: &SampledSignal) -> Result<()> {
    fs::write(path, signal_to_csv(x))?;
    Ok(())
}

/// Read a single-channel WAV (16-bit integer or 32-bit float PCM).
pub fn read_wav(path: &Path) -> Result<SampledSignal> {
    let mut reader = hound::WavReader::open(path).map_err(wav_err)?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(format_err(format!(
            "expected a single-channel WAV, found {} channels",
            spec.channels
        )));
    }
    let samples: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16) => reader
            .samples::<i16>()
            .map(|s| s.map(|v| v as f64 / 32768.0))
            .collect::<std::result::Result<_, _>>()
            .map_err(wav_err)?,
        (hound::SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .map(|s| s.map(|v| v as f64))
            .collect::<std::result::Result<_, _>>()
            .map_err(wav_err)?,
        (fmt, bits) => {
            return Err(format_err(format!(
                "unsupported WAV encoding: {bits}-bit {fmt:?}"
            )))
        }
    };
    SampledSignal::new(samples, spec.sample_rate as f64)
}

/// Write a 32-bit float mono WAV; the rate is rounded to whole hertz.
pub fn write_wav(path: &Path, x: &SampledSignal) -> Result<()> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: x.sample_rate_hz().round() as u32,
        bits_per_sample: 32,
        sample_format: hound::SampleFormat::Float,
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(wav_err)?;
    for &v in x.samples() {
        writer.write_sample(v as f32).map_err(wav_err)?;
    }
    writer.finalize().map_err(wav_err)
}

fn wav_err(e: hound::Error) -> TfdError {
    match e {
        hound::Error::IoError(io) => TfdError::Io(io),
        other => format_err(format!("WAV: {other}")),
    }
}

/// Read a signal, choosing the format from the file extension.
pub fn read_signal(path: &Path) -> Result<SampledSignal> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .as_deref()
    {
        Some("wav") => read_wav(path),
        _ => read_signal_csv(path),
    }
}

/// TFD matrix as CSV: the first row holds the frequency axis (after a
/// corner label), each further row a time stamp followed by its values.
pub fn grid_to_csv(g: &TfdGrid) -> String {
    let mut out = String::new();
    out.push_str("time_s\\freq_hz");
    for f in &g.freqs_hz {
        let _ = write!(out, ",{f}");
    }
    out.push('\n');
    for (t, row) in g.times_s.iter().zip(g.rows()) {
        let _ = write!(out, "{t}");
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

pub fn grid_from_csv(text: &str, method: Method, meta: GridMeta) -> Result<TfdGrid> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| format_err("empty grid CSV"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format_err(format!("bad number '{s}' in grid CSV")))
    };
    let freqs = header
        .split(',')
        .skip(1)
        .map(parse)
        .collect::<Result<Vec<_>>>()?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for line in lines {
        let mut cells = line.split(',');
        times.push(parse(cells.next().unwrap_or(""))?);
        for c in cells {
            values.push(parse(c)?);
        }
    }
    TfdGrid::new(times, freqs, values, method, meta)
}

/// JSON sidecar describing a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSidecar {
    pub method: Method,
    pub n_times: usize,
    pub n_freqs: usize,
    pub meta: GridMeta,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pgm_scale: Option<String>,
}

impl GridSidecar {
    pub fn of(g: &TfdGrid) -> Self {
        Self {
            method: g.method,
            n_times: g.n_times(),
            n_freqs: g.n_freqs(),
            meta: g.meta.clone(),
            pgm_scale: None,
        }
    }
}

/// dB floor of heatmap rendering.
pub const PGM_DB_FLOOR: f64 = -60.0;

/// How [`render_pgm`] mapped values to gray levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PgmScale {
    Linear,
    Decibel,
    /// Signed values: mid-gray is zero, white the largest positive
    /// magnitude and black the largest negative one.
    SignedLinear,
    SignedDecibel,
}

/// Binary P5 heatmap: one row per frequency bin (highest first), one column
/// per time frame. Frequencies above `max_freq_hz` are cropped when given.
pub fn render_pgm(g: &TfdGrid, db: bool, max_freq_hz: Option<f64>) -> (Vec<u8>, PgmScale) {
    let nf = g
        .freqs_hz
        .iter()
        .take_while(|f| max_freq_hz.is_none_or(|m| **f <= m))
        .count()
        .max(1)
        .min(g.n_freqs());
    let nt = g.n_times();
    let signed = g.values().iter().any(|v| *v < 0.0);
    let peak = g.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = match (signed, db) {
        (false, false) => PgmScale::Linear,
        (false, true) => PgmScale::Decibel,
        (true, false) => PgmScale::SignedLinear,
        (true, true) => PgmScale::SignedDecibel,
    };

    let level = |v: f64| -> f64 {
        if peak == 0.0 {
            return 0.0;
        }
        let mag = v.abs() / peak;
        let m = if db {
            if mag > 0.0 {
                ((10.0 * mag.log10()).max(PGM_DB_FLOOR) - PGM_DB_FLOOR) / -PGM_DB_FLOOR
            } else {
                0.0
            }
        } else {
            mag
        };
        if signed {
            0.5 + 0.5 * m * v.signum()
        } else {
            m
        }
    };

    let mut out = format!("P5\n{nt} {nf}\n255\n").into_bytes();
    for f in (0..nf).rev() {
        for t in 0..nt {
            out.push((level(g.value(t, f)) * 255.0).round().clamp(0.0, 255.0) as u8);
        }
    }
    (out, scale)
}

/// One component of a truth sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthComponent {
    pub label: String,
    pub freqs_hz: Vec<f64>,
    pub valid: Vec<bool>,
}

/// Ground-truth sidecar written next to a synthetic signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthFile {
    pub signal_id: String,
    pub sample_rate_hz: f64,
    pub start_time_s: f64,
    pub n_samples: usize,
    pub dominant_component: usize,
    pub components: Vec<TruthComponent>,
    pub generation: serde_json::Value,
}

impl TruthFile {
    pub fn from_synthetic(sig: &SyntheticSignal) -> Self {
        Self {
            signal_id: sig.id.clone(),
            sample_rate_hz: sig.signal.sample_rate_hz(),
            start_time_s: sig.signal.start_time_s(),
            n_samples: sig.signal.len(),
            dominant_component: sig.dominant_component,
            components: sig
                .true_if
                .iter()
                .zip(&sig.component_labels)
                .map(|(t, label)| TruthComponent {
                    label: label.clone(),
                    freqs_hz: t.freqs_hz.clone(),
                    valid: t.valid.clone(),
                })
                .collect(),
            generation: sig.params.clone(),
        }
    }

    /// Check the sidecar against the signal it is meant to describe.
    pub fn validate_against(&self, x: &SampledSignal) -> Result<()> {
        if self.n_samples != x.len() {
            return Err(TfdError::InvalidArgument(format!(
                "truth describes {} samples but the signal has {}",
                self.n_samples,
                x.len()
            )));
        }
        if (self.sample_rate_hz - x.sample_rate_hz()).abs() > 1e-6 * self.sample_rate_hz {
            return Err(TfdError::InvalidArgument(format!(
                "truth sample rate {} Hz differs from signal rate {} Hz",
                self.sample_rate_hz,
                x.sample_rate_hz()
            )));
        }
        Ok(())
    }

    pub fn to_ground_truth(&self) -> Result<GroundTruth> {
        let times: Vec<f64> = (0..self.n_samples)
            .map(|i| self.start_time_s + i as f64 / self.sample_rate_hz)
            .collect();
        let components = self
            .components
            .iter()
            .map(|c| {
                if c.freqs_hz.len() != self.n_samples || c.valid.len() != self.n_samples {
                    return Err(TfdError::InvalidArgument(format!(
                        "truth component '{}' does not have {} samples",
                        c.label, self.n_samples
                    )));
                }
                IfTrajectory::new(times.clone(), c.freqs_hz.clone(), c.valid.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        if self.dominant_component >= components.len() {
            return Err(TfdError::InvalidArgument(
                "dominant component index out of range".into(),
            ));
        }
        Ok(GroundTruth {
            components,
            dominant: self.dominant_component,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("truth serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| format_err(format!("truth JSON: {e}")))
    }
}
