//! Sampled signal containers, analytic-signal construction, decimation and
//! calibrated noise injection.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fft;

/// Uniformly sampled real-valued time series.
///
/// Sample `i` sits at `start_time_s + i / sample_rate_hz`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    samples: Vec<f64>,
    sample_rate_hz: f64,
    start_time_s: f64,
}

impl SampledSignal {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        check_rate(sample_rate_hz)?;
        Ok(Self {
            samples,
            sample_rate_hz,
            start_time_s: 0.0,
        })
    }

    pub fn with_start_time(mut self, start_time_s: f64) -> Self {
        self.start_time_s = start_time_s;
        self
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn start_time_s(&self) -> f64 {
        self.start_time_s
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time_at(&self, index: usize) -> f64 {
        self.start_time_s + index as f64 / self.sample_rate_hz
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time_at(i)).collect()
    }

    /// Mean square amplitude.
    pub fn power(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|v| v * v).sum::<f64>() / self.samples.len() as f64
    }

    pub(crate) fn require_non_empty(&self) -> Result<()> {
        if self.samples.is_empty() {
            return invalid("signal has no samples");
        }
        Ok(())
    }
}

/// Uniformly sampled complex time series, typically the analytic associate
/// of a [`SampledSignal`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSignal {
    samples: Vec<Complex64>,
    sample_rate_hz: f64,
    start_time_s: f64,
}

impl ComplexSignal {
    pub fn new(samples: Vec<Complex64>, sample_rate_hz: f64) -> Result<Self> {
        check_rate(sample_rate_hz)?;
        Ok(Self {
            samples,
            sample_rate_hz,
            start_time_s: 0.0,
        })
    }

    /// Complex signal with zero imaginary part.
    pub fn from_real(x: &SampledSignal) -> Self {
        Self {
            samples: x.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            sample_rate_hz: x.sample_rate_hz,
            start_time_s: x.start_time_s,
        }
    }

    pub fn with_start_time(mut self, start_time_s: f64) -> Self {
        self.start_time_s = start_time_s;
        self
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn start_time_s(&self) -> f64 {
        self.start_time_s
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time_at(&self, index: usize) -> f64 {
        self.start_time_s + index as f64 / self.sample_rate_hz
    }

    pub fn real(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.re).collect()
    }

    pub fn imag(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.im).collect()
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if !(rate > 0.0 && rate.is_finite()) {
        return invalid(format!("sample rate must be positive, got {rate}"));
    }
    Ok(())
}

/// Analytic associate `x + jH[x]` by the frequency-domain method.
///
/// The negative-frequency half of the DFT is zeroed and the positive half
/// doubled; DC (and Nyquist, for even lengths) are left untouched. The real
/// part of the result is the input, bit for bit.
pub fn analytic_signal(x: &SampledSignal) -> Result<ComplexSignal> {
    x.require_non_empty()?;
    let n = x.len();
    if n < 2 {
        return invalid("analytic signal needs at least 2 samples");
    }
    let mut buf: Vec<Complex64> = x.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft::forward(n).process(&mut buf);

    let positive_end = n.div_ceil(2);
    for b in buf.iter_mut().take(positive_end).skip(1) {
        *b *= 2.0;
    }
    // even n: buf[n / 2] is Nyquist and stays as is
    let negative_start = n / 2 + 1;
    for b in buf.iter_mut().skip(negative_start) {
        *b = Complex64::new(0.0, 0.0);
    }

    fft::inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let samples = buf
        .iter()
        .zip(&x.samples)
        .map(|(c, &re)| Complex64::new(re, c.im * scale))
        .collect();
    Ok(ComplexSignal {
        samples,
        sample_rate_hz: x.sample_rate_hz,
        start_time_s: x.start_time_s,
    })
}

/// FIR taps per unit of decimation factor.
pub const DECIMATION_TAPS_PER_FACTOR: usize = 64;

/// Anti-alias cutoff as a fraction of the post-decimation Nyquist frequency.
pub const DECIMATION_CUTOFF_FRACTION: f64 = 0.8;

/// Low-pass, then keep every `factor`-th sample.
///
/// The anti-alias stage is a Hamming-windowed sinc run forward and backward
/// (zero phase), so events keep their timing after decimation.
pub fn decimate(x: &SampledSignal, factor: usize) -> Result<SampledSignal> {
    if factor < 1 {
        return invalid("decimation factor must be at least 1");
    }
    x.require_non_empty()?;
    if factor == 1 {
        return Ok(x.clone());
    }
    let out_len = x.len().div_ceil(factor);
    if out_len < 2 {
        return invalid(format!(
            "decimating {} samples by {factor} leaves fewer than 2 samples",
            x.len()
        ));
    }

    let cutoff = DECIMATION_CUTOFF_FRACTION * 0.5 / factor as f64;
    let taps = lowpass_taps(DECIMATION_TAPS_PER_FACTOR * factor + 1, cutoff);
    let filtered = filtfilt(&taps, &x.samples);
    let samples = filtered.into_iter().step_by(factor).collect();
    Ok(SampledSignal {
        samples,
        sample_rate_hz: x.sample_rate_hz / factor as f64,
        start_time_s: x.start_time_s,
    })
}

/// Hamming-windowed sinc with unit DC gain; `cutoff` in cycles per sample.
fn lowpass_taps(len: usize, cutoff: f64) -> Vec<f64> {
    let center = (len - 1) as f64 / 2.0;
    let span = (len - 1) as f64;
    let mut taps: Vec<f64> = (0..len)
        .map(|k| {
            let m = k as f64 - center;
            let sinc = if m == 0.0 {
                2.0 * cutoff
            } else {
                (2.0 * PI * cutoff * m).sin() / (PI * m)
            };
            sinc * (0.54 - 0.46 * (2.0 * PI * k as f64 / span).cos())
        })
        .collect();
    let gain: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= gain);
    taps
}

fn fir(taps: &[f64], x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            taps.iter()
                .take(i + 1)
                .enumerate()
                .map(|(j, h)| h * x[i - j])
                .sum()
        })
        .collect()
}

/// Forward-backward FIR filtering with odd-reflection edge padding.
fn filtfilt(taps: &[f64], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let pad = (3 * taps.len()).min(n - 1);
    let first = x[0];
    let last = x[n - 1];
    let mut ext = Vec::with_capacity(n + 2 * pad);
    ext.extend((1..=pad).rev().map(|i| 2.0 * first - x[i]));
    ext.extend_from_slice(x);
    ext.extend((1..=pad).map(|i| 2.0 * last - x[n - 1 - i]));

    let mut y = fir(taps, &ext);
    y.reverse();
    let mut y = fir(taps, &y);
    y.reverse();
    y[pad..pad + n].to_vec()
}

/// How an SNR figure is to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrScale {
    /// Signal power over noise power.
    #[default]
    Linear,
    /// `10 log10` of the linear ratio.
    Decibel,
}

impl SnrScale {
    pub fn to_linear(self, snr: f64) -> f64 {
        match self {
            SnrScale::Linear => snr,
            SnrScale::Decibel => 10f64.powf(snr / 10.0),
        }
    }
}

/// Add zero-mean white Gaussian noise with variance `power(x) / snr`.
///
/// `snr` is a linear power ratio. The noise stream is a ChaCha8 sequence
/// seeded with `seed`, so equal seeds give bit-identical output.
pub fn add_white_noise(x: &SampledSignal, snr: f64, seed: u64) -> Result<SampledSignal> {
    x.require_non_empty()?;
    if !(snr > 0.0) || snr.is_nan() {
        return invalid(format!("snr must be positive, got {snr}"));
    }
    let sigma = (x.power() / snr).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = x
        .samples
        .iter()
        .map(|&v| {
            let n: f64 = StandardNormal.sample(&mut rng);
            v + sigma * n
        })
        .collect();
    Ok(SampledSignal {
        samples,
        sample_rate_hz: x.sample_rate_hz,
        start_time_s: x.start_time_s,
    })
}
