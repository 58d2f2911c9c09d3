//! Polynomial chirplet transform (PCT) with iterative kernel estimation.
//!
//! A kernel `K(t) = α₁t + α₂t² + … + αₙtⁿ` describes the expected IF trend
//! (the constant term is carried by the frequency axis). Each analysis frame
//! centered at `t₀` sees
//!
//! ```text
//! z(t) · exp(−j2π Σ αₖ t^{k+1}/(k+1)) · exp(+j2π K(t₀) t)
//! ```
//!
//! so a component whose IF follows `c + K(t)` is flattened to the constant
//! `c + K(t₀)` inside the frame and concentrates into a narrow ridge at its
//! true instantaneous frequency.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Result, TfdError};
use crate::eval::{ridge_with_peaks, IfTrajectory};
use crate::signal::{analytic_signal, ComplexSignal, SampledSignal};
use crate::tfd::{sliding_power, GridMeta, Method, TfdGrid};
use crate::window::WindowSpec;

/// Polynomial IF kernel, `coeffs[k-1] = αₖ` in Hz/sᵏ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialKernel {
    coeffs: Vec<f64>,
}

impl PolynomialKernel {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return invalid("kernel order must be at least 1");
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return invalid("kernel coefficients must be finite");
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(order: usize) -> Result<Self> {
        Self::new(vec![0.0; order])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `K(t) = Σ αₖ tᵏ`.
    pub fn trend(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, a| (acc + a) * t)
    }

    /// `Σ αₖ t^{k+1} / (k+1)`, the phase (in cycles) whose derivative is
    /// [`trend`](Self::trend).
    pub fn phase_cycles(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let power = (i + 2) as i32;
                a * t.powi(power) / power as f64
            })
            .sum()
    }
}

/// Settings of the transform and of the kernel estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PctConfig {
    pub order: usize,
    pub max_iterations: usize,
    pub ridge_band_hz: Option<(f64, f64)>,
    pub convergence_tol_hz: f64,
    pub window: WindowSpec,
    pub hop_samples: usize,
    pub fft_length: usize,
    /// Frames whose ridge amplitude is below this fraction of the global
    /// ridge peak are left out of the polynomial fit.
    pub amp_threshold_frac: f64,
}

impl Default for PctConfig {
    fn default() -> Self {
        Self {
            order: 2,
            max_iterations: 10,
            ridge_band_hz: Some((5.0, 70.0)),
            convergence_tol_hz: 0.1,
            window: WindowSpec::hann(65),
            hop_samples: 1,
            fft_length: 1300,
            amp_threshold_frac: 0.05,
        }
    }
}

impl PctConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order < 1 {
            return invalid("PCT order must be at least 1");
        }
        if self.max_iterations < 1 {
            return invalid("max_iterations must be at least 1");
        }
        if !(self.convergence_tol_hz > 0.0) {
            return invalid("convergence tolerance must be positive");
        }
        if !(0.0..1.0).contains(&self.amp_threshold_frac) {
            return invalid("amplitude threshold must lie in [0, 1)");
        }
        if let Some((lo, hi)) = self.ridge_band_hz {
            if !(lo < hi) {
                return invalid(format!("ridge band ({lo}, {hi}) is empty"));
            }
        }
        self.window.validate()
    }
}

/// Polynomial chirplet transform of `z` with a fixed kernel.
///
/// Uses the same framing as [`crate::tfd::stft`]: frames of
/// `cfg.window.length` samples every `cfg.hop_samples`, stamped at the
/// window center, bins `0..=fft_length/2` spaced `fs / fft_length`.
pub fn pct_transform(
    z: &ComplexSignal,
    kernel: &PolynomialKernel,
    cfg: &PctConfig,
) -> Result<TfdGrid> {
    if kernel.coeffs.iter().any(|c| !c.is_finite()) {
        return invalid("kernel coefficients must be finite");
    }
    let rate = z.sample_rate_hz();
    let start = z.start_time_s();
    let modulate = |center: f64, i: usize| {
        let t = z.time_at(i);
        let t0 = start + center / rate;
        let cycles = -kernel.phase_cycles(t) + kernel.trend(t0) * t;
        Complex64::from_polar(1.0, 2.0 * PI * cycles)
    };
    let (times, freqs, values) = sliding_power(
        z.samples(),
        rate,
        start,
        &cfg.window,
        cfg.hop_samples,
        cfg.fft_length,
        Some(modulate),
    )?;
    TfdGrid::new(
        times,
        freqs,
        values,
        Method::Pct,
        GridMeta {
            sample_rate_hz: rate,
            hop_samples: cfg.hop_samples,
            fft_length: cfg.fft_length,
            window: Some(cfg.window),
            analytic: true,
            folding_hz: rate / 2.0,
            kernel: Some(kernel.coeffs.clone()),
            ..GridMeta::default()
        },
    )
}

/// Outcome of [`estimate_kernel`].
#[derive(Debug, Clone)]
pub struct KernelEstimate {
    pub kernel: PolynomialKernel,
    /// Constant term of the fitted IF polynomial (Hz).
    pub offset_hz: f64,
    /// Transform computed with `kernel`.
    pub grid: TfdGrid,
    pub iterations: usize,
    /// False when `max_iterations` ran out; the most concentrated iterate is
    /// returned in that case.
    pub converged: bool,
}

impl KernelEstimate {
    /// Fitted IF polynomial `offset + K(t)` at time `t`.
    pub fn fitted_if(&self, t: f64) -> f64 {
        self.offset_hz + self.kernel.trend(t)
    }

    /// Fitted IF on the grid's time axis.
    pub fn fitted_trajectory(&self) -> IfTrajectory {
        let times = self.grid.times_s.clone();
        let freqs = times.iter().map(|&t| self.fitted_if(t)).collect();
        let valid = vec![true; times.len()];
        IfTrajectory::new(times, freqs, valid).expect("grid axis is increasing")
    }
}

/// Iteratively fit the kernel to the dominant ridge.
///
/// Starting from a zero kernel: transform, pick the ridge inside
/// `cfg.ridge_band_hz`, fit an amplitude-weighted least-squares polynomial of
/// degree `cfg.order` to it, adopt the non-constant coefficients as the new
/// kernel, and stop once the fitted IF moves by less than
/// `cfg.convergence_tol_hz` at every frame.
pub fn estimate_kernel(z: &ComplexSignal, cfg: &PctConfig) -> Result<KernelEstimate> {
    cfg.validate()?;
    let mut kernel = PolynomialKernel::zeros(cfg.order)?;
    let mut previous_fit: Option<Vec<f64>> = None;
    let mut best: Option<(f64, KernelEstimate)> = None;
    let amp_frac = cfg.amp_threshold_frac;

    for iteration in 1..=cfg.max_iterations {
        let grid = pct_transform(z, &kernel, cfg)?;
        let (ridge, peaks) = ridge_with_peaks(&grid, cfg.ridge_band_hz, amp_frac * amp_frac)?;

        let mut ts = Vec::new();
        let mut fs = Vec::new();
        let mut ws = Vec::new();
        for i in 0..ridge.len() {
            if ridge.valid[i] {
                ts.push(ridge.times_s[i]);
                fs.push(ridge.freqs_hz[i]);
                ws.push(peaks[i].sqrt());
            }
        }
        if ts.len() < cfg.order + 1 {
            if let Some((_, est)) = best {
                return Ok(est);
            }
            return Err(TfdError::InsufficientData(format!(
                "{} ridge frames above threshold, need at least {}",
                ts.len(),
                cfg.order + 1
            )));
        }

        let coeffs = weighted_polyfit(&ts, &fs, &ws, cfg.order)?;
        let fit: Vec<f64> = ridge
            .times_s
            .iter()
            .map(|&t| poly_eval(&coeffs, t))
            .collect();
        let current = KernelEstimate {
            kernel: kernel.clone(),
            offset_hz: coeffs[0],
            grid,
            iterations: iteration,
            converged: false,
        };

        let change = previous_fit.as_ref().map(|prev| {
            prev.iter()
                .zip(&fit)
                .zip(&ridge.valid)
                .filter(|(_, v)| **v)
                .fold(0.0f64, |m, ((a, b), _)| m.max((a - b).abs()))
        });
        if change.is_some_and(|c| c < cfg.convergence_tol_hz) {
            return Ok(KernelEstimate {
                converged: true,
                ..current
            });
        }

        let score = concentration(&current.grid);
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, current));
        }
        kernel = PolynomialKernel::new(coeffs[1..].to_vec())?;
        previous_fit = Some(fit);
    }

    Ok(best.expect("at least one iteration ran").1)
}

/// `analytic_signal → estimate_kernel`, returning the final grid with the
/// kernel recorded in its meta.
pub fn pct_auto(x: &SampledSignal, cfg: &PctConfig) -> Result<TfdGrid> {
    let z = analytic_signal(x)?;
    let est = estimate_kernel(&z, cfg)?;
    let mut grid = est.grid;
    grid.meta.kernel_iterations = Some(est.iterations);
    grid.meta.kernel_converged = Some(est.converged);
    if !est.converged {
        grid.meta.warnings.push(format!(
            "kernel estimate did not converge in {} iterations",
            est.iterations
        ));
    }
    Ok(grid)
}

/// `Σv² / (Σv)²`; larger means energy is packed into fewer cells.
fn concentration(g: &TfdGrid) -> f64 {
    let (sum, sum_sq) = g
        .values()
        .iter()
        .fold((0.0, 0.0), |(s, q), v| (s + v.abs(), q + v * v));
    if sum > 0.0 {
        sum_sq / (sum * sum)
    } else {
        0.0
    }
}

fn poly_eval(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Weighted least squares for `f ≈ Σ cₖ tᵏ`, `k = 0..=order`.
pub(crate) fn weighted_polyfit(t: &[f64], f: &[f64], w: &[f64], order: usize) -> Result<Vec<f64>> {
    let rows = t.len();
    let cols = order + 1;
    if rows < cols {
        return Err(TfdError::InsufficientData(format!(
            "{rows} points cannot determine a degree-{order} polynomial"
        )));
    }
    let a = DMatrix::from_fn(rows, cols, |r, c| w[r].sqrt() * t[r].powi(c as i32));
    let b = DVector::from_fn(rows, |r, _| w[r].sqrt() * f[r]);
    let solution = a
        .svd(true, true)
        .solve(&b, 1e-12)
        .map_err(|e| TfdError::InsufficientData(format!("polynomial fit failed: {e}")))?;
    Ok(solution.iter().copied().collect())
}
