use num_complex::Complex64;
use scg_tfd::eval::{extract_ridge, Method};
use scg_tfd::pct::{estimate_kernel, pct_auto, pct_transform, PctConfig, PolynomialKernel};
use scg_tfd::signal::{ComplexSignal, SampledSignal};
use scg_tfd::synth::gen_x1;
use scg_tfd::tfd::{psd_from_tfd, stft_complex};
use scg_tfd::{TfdError, TfdGrid, WindowSpec};
use std::f64::consts::PI;

const RATE: f64 = 320.0;

fn linear_chirp() -> ComplexSignal {
    let z = (0..320)
        .map(|i| {
            let t = i as f64 / RATE;
            Complex64::from_polar(1.0, 2.0 * PI * (20.0 * t + 15.0 * t * t))
        })
        .collect();
    ComplexSignal::new(z, RATE).unwrap()
}

/// Number of contiguous bins around the frame peak at or above half power.
fn half_power_width(row: &[f64]) -> usize {
    let (k, peak) = row.iter().enumerate().fold(
        (0, f64::MIN),
        |b, (k, v)| if *v > b.1 { (k, *v) } else { b },
    );
    let mut lo = k;
    while lo > 0 && row[lo - 1] >= 0.5 * peak {
        lo -= 1;
    }
    let mut hi = k;
    while hi + 1 < row.len() && row[hi + 1] >= 0.5 * peak {
        hi += 1;
    }
    hi - lo + 1
}

fn interior_widths(g: &TfdGrid) -> Vec<usize> {
    (0..g.n_times())
        .filter(|&t| (0.2..=0.8).contains(&g.times_s[t]))
        .map(|t| half_power_width(g.row(t)))
        .collect()
}

fn mean(v: &[usize]) -> f64 {
    v.iter().sum::<usize>() as f64 / v.len() as f64
}

#[test]
fn matched_kernel_narrows_ridge_and_tracks_chirp() {
    let z = linear_chirp();
    let cfg = PctConfig {
        window: WindowSpec::hann(127),
        ..PctConfig::default()
    };
    let matched = pct_transform(&z, &PolynomialKernel::new(vec![30.0]).unwrap(), &cfg).unwrap();
    let mismatched = pct_transform(&z, &PolynomialKernel::new(vec![-30.0]).unwrap(), &cfg).unwrap();
    let plain = stft_complex(&z, &cfg.window, cfg.hop_samples, cfg.fft_length).unwrap();

    let wm = interior_widths(&matched);
    let ws = interior_widths(&plain);
    let wx = interior_widths(&mismatched);
    assert!(wm.iter().zip(&ws).all(|(m, s)| m <= s));
    assert!(mean(&wm) < mean(&ws), "{} vs {}", mean(&wm), mean(&ws));
    assert!(mean(&wx) > mean(&wm), "{} vs {}", mean(&wx), mean(&wm));

    let r = extract_ridge(&matched, None, 0.0).unwrap();
    let bin = RATE / cfg.fft_length as f64;
    for (t, f) in r.times_s.iter().zip(&r.freqs_hz) {
        assert!((f - (20.0 + 30.0 * t)).abs() <= bin, "t {t}: {f}");
    }
}

#[test]
fn stationary_tone_gives_flat_kernel() {
    let z = (0..320)
        .map(|i| Complex64::from_polar(1.0, 2.0 * PI * 40.0 * i as f64 / RATE))
        .collect();
    let z = ComplexSignal::new(z, RATE).unwrap();
    let cfg = PctConfig {
        order: 1,
        ..PctConfig::default()
    };
    let est = estimate_kernel(&z, &cfg).unwrap();
    assert!(est.kernel.coeffs()[0].abs() < 1.0, "{:?}", est.kernel);
    assert!((est.fitted_if(0.5) - 40.0).abs() < 0.25);
}

#[test]
fn linear_chirp_recovery_is_tight() {
    let z = linear_chirp();
    let cfg = PctConfig::default();
    let est = estimate_kernel(&z, &cfg).unwrap();
    assert!(est.converged);
    assert!(est.iterations <= cfg.max_iterations);
    assert!(est.kernel.coeffs()[1].abs() < 5.0, "{:?}", est.kernel);
    let sq: f64 = (15..=85)
        .map(|k| {
            let t = k as f64 / 100.0;
            (est.fitted_if(t) - (20.0 + 30.0 * t)).powi(2)
        })
        .sum();
    let rms = (sq / 71.0).sqrt();
    assert!(rms < 5.0 * cfg.convergence_tol_hz, "rms {rms}");
}

#[test]
fn estimation_is_deterministic() {
    let z = linear_chirp();
    let a = estimate_kernel(&z, &PctConfig::default()).unwrap();
    let b = estimate_kernel(&z, &PctConfig::default()).unwrap();
    assert_eq!(a.kernel, b.kernel);
    assert_eq!(a.iterations, b.iterations);
    assert_eq!(a.grid, b.grid);
}

#[test]
fn silent_input_has_no_ridge() {
    let x = SampledSignal::new(vec![0.0; 320], RATE).unwrap();
    match pct_auto(&x, &PctConfig::default()) {
        Err(TfdError::InsufficientData(_)) => {}
        other => panic!("expected insufficient data, got {other:?}"),
    }
}

#[test]
fn auto_pipeline_records_kernel_and_keeps_both_x1_tones() {
    let x1 = gen_x1(RATE, 1.0).unwrap();
    let g = pct_auto(&x1.signal, &PctConfig::default()).unwrap();
    assert_eq!(g.method, Method::Pct);
    assert_eq!(g.meta.kernel.as_ref().map(|k| k.len()), Some(2));
    assert!(g.meta.kernel_iterations.is_some());

    let psd = psd_from_tfd(&g).unwrap();
    let peak = psd.power.iter().cloned().fold(0.0, f64::max);
    let maxima: Vec<f64> = (1..psd.power.len() - 1)
        .filter(|&k| {
            let p = &psd.power;
            p[k] > p[k - 1] && p[k] >= p[k + 1] && p[k] > 0.01 * peak
        })
        .map(|k| psd.freqs_hz[k])
        .collect();
    assert_eq!(maxima.len(), 2, "{maxima:?}");
    assert!((maxima[0] - 20.0).abs() < 0.5 && (maxima[1] - 40.0).abs() < 0.5);
}
