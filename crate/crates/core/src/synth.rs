//! Synthetic seismocardiogram-like test signals with known instantaneous
//! frequency.
//!
//! Two signals are provided:
//!
//! * `x1`: 20 Hz and 40 Hz tones sharing two raised-cosine bursts
//!   (0.25–0.40 s and 0.70–0.83 s), the 40 Hz tone at 0.9 of the 20 Hz
//!   amplitude.
//! * `x2`: a 40 Hz tone plus a quadratic-IF chirp
//!   (`IF(τ) = 2610τ² − 430τ + 20` Hz, τ = time since burst onset) on the
//!   same burst support, with white noise added.
//!
//! Every coefficient is exposed through [`X1Config`] / [`X2Config`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::eval::IfTrajectory;
use crate::signal::{add_white_noise, SampledSignal, SnrScale};

/// Minimum sample rate accepted by the generators: both tones must sit
/// below Nyquist.
pub const MIN_SAMPLE_RATE_HZ: f64 = 160.0;

/// Burst windows on the envelope time axis, `(start, end]` in seconds.
pub const BURSTS_S: [(f64, f64); 2] = [(0.25, 0.40), (0.70, 0.83)];

/// Raised-cosine repetition rate of the envelope (`14π` rad/s).
pub const ENVELOPE_RATE_HZ: f64 = 7.0;

/// Phase reference used by the printed envelope formula for both bursts.
pub const LITERAL_ENVELOPE_T_REF_S: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum EnvelopeForm {
    Zero,
    /// `peak * (0.5 - 0.5 cos(2π rate (t - t_ref)))`
    RaisedCosine {
        peak: f64,
        rate_hz: f64,
        t_ref_s: f64,
    },
}

/// One piece of a piecewise envelope, active on `(t_start_s, t_end_s]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSegment {
    pub t_start_s: f64,
    pub t_end_s: f64,
    #[serde(flatten)]
    pub form: EnvelopeForm,
}

impl EnvelopeSegment {
    pub fn contains(&self, t: f64) -> bool {
        t > self.t_start_s && t <= self.t_end_s
    }

    pub fn value(&self, t: f64) -> f64 {
        match self.form {
            EnvelopeForm::Zero => 0.0,
            EnvelopeForm::RaisedCosine {
                peak,
                rate_hz,
                t_ref_s,
            } => peak * (0.5 - 0.5 * (2.0 * PI * rate_hz * (t - t_ref_s)).cos()),
        }
    }
}

/// Piecewise envelope; zero outside every segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub segments: Vec<EnvelopeSegment>,
}

impl Envelope {
    pub fn new(segments: Vec<EnvelopeSegment>) -> Result<Self> {
        for s in &segments {
            if !(s.t_start_s < s.t_end_s) {
                return invalid(format!(
                    "envelope segment ({}, {}] is empty",
                    s.t_start_s, s.t_end_s
                ));
            }
        }
        Ok(Self { segments })
    }

    /// Two raised-cosine bursts with the given peaks, zero elsewhere.
    pub fn bursts(peaks: [f64; 2], reference: PhaseReference) -> Self {
        let mut segments = Vec::with_capacity(5);
        let mut last_end = 0.0;
        for (&(start, end), peak) in BURSTS_S.iter().zip(peaks) {
            segments.push(EnvelopeSegment {
                t_start_s: last_end,
                t_end_s: start,
                form: EnvelopeForm::Zero,
            });
            let t_ref_s = match reference {
                PhaseReference::BurstOnset => start,
                PhaseReference::Literal => LITERAL_ENVELOPE_T_REF_S,
            };
            segments.push(EnvelopeSegment {
                t_start_s: start,
                t_end_s: end,
                form: EnvelopeForm::RaisedCosine {
                    peak,
                    rate_hz: ENVELOPE_RATE_HZ,
                    t_ref_s,
                },
            });
            last_end = end;
        }
        segments.push(EnvelopeSegment {
            t_start_s: last_end,
            t_end_s: f64::INFINITY,
            form: EnvelopeForm::Zero,
        });
        Self { segments }
    }

    pub fn segment_at(&self, t: f64) -> Option<&EnvelopeSegment> {
        self.segments.iter().find(|s| s.contains(t))
    }

    pub fn value(&self, t: f64) -> f64 {
        self.segment_at(t).map_or(0.0, |s| s.value(t))
    }
}

/// Where the raised-cosine phase of each burst is anchored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseReference {
    /// Each burst rises from zero at its own onset.
    #[default]
    BurstOnset,
    /// Both bursts use `t_ref = 0.75 s`; the first then starts at its peak.
    Literal,
}

/// A generated test signal with its ground truth.
#[derive(Debug, Clone)]
pub struct SyntheticSignal {
    pub id: String,
    pub signal: SampledSignal,
    /// One trajectory per component, on the signal's own time grid.
    pub true_if: Vec<IfTrajectory>,
    pub component_masks: Vec<Vec<bool>>,
    pub component_labels: Vec<String>,
    /// Index of the strongest component.
    pub dominant_component: usize,
    /// Generation parameters, as recorded in truth sidecars.
    pub params: serde_json::Value,
}

impl SyntheticSignal {
    pub fn true_if(&self, component: usize) -> Result<&IfTrajectory> {
        true_if(self, component)
    }
}

/// Ground-truth IF of one component.
pub fn true_if(sig: &SyntheticSignal, component: usize) -> Result<&IfTrajectory> {
    sig.true_if.get(component).ok_or_else(|| {
        crate::TfdError::InvalidArgument(format!(
            "component {component} out of range (signal has {})",
            sig.true_if.len()
        ))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct X1Config {
    pub sample_rate_hz: f64,
    pub duration_s: f64,
    pub phase_reference: PhaseReference,
    pub burst_peaks: [f64; 2],
    pub tone_freqs_hz: [f64; 2],
    pub tone_weights: [f64; 2],
    /// Phase offsets in radians.
    pub phase_offsets: [f64; 2],
}

impl Default for X1Config {
    fn default() -> Self {
        Self {
            sample_rate_hz: 320.0,
            duration_s: 1.0,
            phase_reference: PhaseReference::BurstOnset,
            burst_peaks: [1.0, 0.9],
            tone_freqs_hz: [20.0, 40.0],
            tone_weights: [-1.0, 0.9],
            phase_offsets: [94.0, 188.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct X2Config {
    pub sample_rate_hz: f64,
    pub duration_s: f64,
    pub snr: f64,
    pub snr_scale: SnrScale,
    pub seed: u64,
    pub phase_reference: PhaseReference,
    pub burst_peaks: [f64; 2],
    pub tone_freq_hz: f64,
    pub tone_weight: f64,
    pub chirp_weight: f64,
    /// Phase polynomial in cycles, `c[0] τ³ + c[1] τ² + c[2] τ`.
    pub chirp_phase_coeffs: [f64; 3],
}

impl Default for X2Config {
    fn default() -> Self {
        Self {
            sample_rate_hz: 320.0,
            duration_s: 1.0,
            snr: 10.0,
            snr_scale: SnrScale::Linear,
            seed: 0,
            phase_reference: PhaseReference::BurstOnset,
            burst_peaks: [1.0, 0.5],
            tone_freq_hz: 40.0,
            tone_weight: -0.5,
            chirp_weight: 1.0,
            chirp_phase_coeffs: [870.0, -215.0, 20.0],
        }
    }
}

impl X2Config {
    /// Chirp IF at local time `tau` (derivative of the phase polynomial).
    pub fn chirp_if(&self, tau: f64) -> f64 {
        let [c3, c2, c1] = self.chirp_phase_coeffs;
        3.0 * c3 * tau * tau + 2.0 * c2 * tau + c1
    }

    fn chirp_phase_cycles(&self, tau: f64) -> f64 {
        let [c3, c2, c1] = self.chirp_phase_coeffs;
        ((c3 * tau + c2) * tau + c1) * tau
    }
}

fn check_grid(sample_rate_hz: f64, duration_s: f64) -> Result<usize> {
    if !(sample_rate_hz >= MIN_SAMPLE_RATE_HZ) {
        return invalid(format!(
            "sample rate {sample_rate_hz} Hz is below {MIN_SAMPLE_RATE_HZ} Hz; the 40 Hz component would not be representable"
        ));
    }
    if !(duration_s >= 1.0) || !duration_s.is_finite() {
        return invalid(format!("duration must be at least 1 s, got {duration_s}"));
    }
    Ok((duration_s * sample_rate_hz).round() as usize)
}

fn trajectory(times: &[f64], values: Vec<f64>, mask: &[bool]) -> IfTrajectory {
    IfTrajectory::new(times.to_vec(), values, mask.to_vec())
        .expect("generator trajectories are well formed")
}

/// Two-tone burst signal (20 Hz and 40 Hz) on the default grid conventions.
pub fn gen_x1(sample_rate_hz: f64, duration_s: f64) -> Result<SyntheticSignal> {
    X1Config {
        sample_rate_hz,
        duration_s,
        ..X1Config::default()
    }
    .generate()
}

impl X1Config {
    pub fn generate(&self) -> Result<SyntheticSignal> {
        let n = check_grid(self.sample_rate_hz, self.duration_s)?;
        let envelope = Envelope::bursts(self.burst_peaks, self.phase_reference);
        let times: Vec<f64> = (0..n).map(|i| i as f64 / self.sample_rate_hz).collect();
        let amp: Vec<f64> = times.iter().map(|&t| envelope.value(t)).collect();

        let samples = times
            .iter()
            .zip(&amp)
            .map(|(&t, &a)| {
                (0..2)
                    .map(|c| {
                        let phase = 2.0 * PI * self.tone_freqs_hz[c] * t + self.phase_offsets[c];
                        self.tone_weights[c] * a * phase.sin()
                    })
                    .sum()
            })
            .collect();

        let mask: Vec<bool> = amp.iter().map(|&a| a > 0.0).collect();
        let true_if = self
            .tone_freqs_hz
            .iter()
            .map(|&f| {
                let values = mask.iter().map(|&m| if m { f } else { 0.0 }).collect();
                trajectory(&times, values, &mask)
            })
            .collect();
        let dominant_component = if self.tone_weights[0].abs() >= self.tone_weights[1].abs() {
            0
        } else {
            1
        };

        Ok(SyntheticSignal {
            id: "x1".into(),
            signal: SampledSignal::new(samples, self.sample_rate_hz)?,
            true_if,
            component_masks: vec![mask.clone(), mask],
            component_labels: self
                .tone_freqs_hz
                .iter()
                .map(|f| format!("tone {f} Hz"))
                .collect(),
            dominant_component,
            params: serde_json::to_value(self).expect("config serializes"),
        })
    }
}

/// Tone-plus-quadratic-chirp burst signal with white noise at `snr`
/// (linear power ratio).
pub fn gen_x2(
    sample_rate_hz: f64,
    duration_s: f64,
    snr: f64,
    seed: u64,
) -> Result<SyntheticSignal> {
    X2Config {
        sample_rate_hz,
        duration_s,
        snr,
        seed,
        ..X2Config::default()
    }
    .generate()
}

impl X2Config {
    /// Noiseless realisation; used for ground-truth checks.
    pub fn generate_clean(&self) -> Result<SyntheticSignal> {
        let n = check_grid(self.sample_rate_hz, self.duration_s)?;
        let envelope = Envelope::bursts(self.burst_peaks, self.phase_reference);
        let times: Vec<f64> = (0..n).map(|i| i as f64 / self.sample_rate_hz).collect();

        let mut samples = Vec::with_capacity(n);
        let mut mask = Vec::with_capacity(n);
        let mut chirp_if = Vec::with_capacity(n);
        for &t in &times {
            let a = envelope.value(t);
            let active = a > 0.0;
            let onset = BURSTS_S
                .iter()
                .find(|(s, e)| t > *s && t <= *e)
                .map(|b| b.0);
            let tone = self.tone_weight * a * (2.0 * PI * self.tone_freq_hz * t).sin();
            let (chirp, f) = match onset {
                Some(onset) => {
                    let tau = t - onset;
                    let phase = 2.0 * PI * self.chirp_phase_cycles(tau);
                    (self.chirp_weight * a * phase.sin(), self.chirp_if(tau))
                }
                None => (0.0, 0.0),
            };
            samples.push(tone + chirp);
            mask.push(active);
            chirp_if.push(if active { f } else { 0.0 });
        }

        let tone_if = mask
            .iter()
            .map(|&m| if m { self.tone_freq_hz } else { 0.0 })
            .collect();
        let dominant_component = if self.tone_weight.abs() > self.chirp_weight.abs() {
            0
        } else {
            1
        };
        Ok(SyntheticSignal {
            id: "x2".into(),
            signal: SampledSignal::new(samples, self.sample_rate_hz)?,
            true_if: vec![
                trajectory(&times, tone_if, &mask),
                trajectory(&times, chirp_if, &mask),
            ],
            component_masks: vec![mask.clone(), mask],
            component_labels: vec![
                format!("tone {} Hz", self.tone_freq_hz),
                "quadratic chirp".into(),
            ],
            dominant_component,
            params: serde_json::to_value(self).expect("config serializes"),
        })
    }

    pub fn generate(&self) -> Result<SyntheticSignal> {
        let mut sig = self.generate_clean()?;
        let snr = self.snr_scale.to_linear(self.snr);
        sig.signal = add_white_noise(&sig.signal, snr, self.seed)?;
        Ok(sig)
    }
}
