//! Acceptance criteria. Runs as a plain binary so every criterion prints its
//! own PASS/FAIL line; exits non-zero if any criterion fails.

use num_complex::Complex64;
use scg_tfd::eval::{
    compare_methods, nrmse, rmse, CompareConfig, GroundTruth, IfTrajectory, Method,
};
use scg_tfd::pct::{estimate_kernel, pct_transform, PctConfig, PolynomialKernel};
use scg_tfd::signal::{analytic_signal, ComplexSignal, SampledSignal};
use scg_tfd::synth::{gen_x1, gen_x2, SyntheticSignal};
use scg_tfd::tfd::{
    psd_from_tfd, resolution_report, spwvd, stft, stft_complex, wvd, wvd_complex, Psd,
};
use scg_tfd::WindowSpec;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

const RATE: f64 = 320.0;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn truth(s: &SyntheticSignal) -> GroundTruth {
    GroundTruth {
        components: s.true_if.clone(),
        dominant: s.dominant_component,
    }
}

fn x1_ordering() -> Outcome {
    let x1 = gen_x1(RATE, 1.0).map_err(|e| e.to_string())?;
    let methods = [Method::Stft, Method::Pct, Method::Wvd, Method::Spwvd];
    let start = Instant::now();
    let report = compare_methods(
        "x1",
        &x1.signal,
        Some(&truth(&x1)),
        &methods,
        &CompareConfig::for_signal("x1"),
    )
    .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let v: Vec<f64> = methods
        .iter()
        .map(|m| report.nrmse(*m).unwrap_or(f64::NAN))
        .collect();
    check(
        v[0] < 0.10
            && v[1] < 0.10
            && v[3] < 0.10
            && v[2] > 0.30
            && elapsed < Duration::from_secs(10),
        format!(
            "STFT {:.4}, PCT {:.4}, SPWVD {:.4} (< 0.10); WVD {:.4} (> 0.30); {:.2} s",
            v[0],
            v[1],
            v[3],
            v[2],
            elapsed.as_secs_f64()
        ),
    )
}

fn x2_ordering() -> Outcome {
    let methods = [Method::Stft, Method::Pct, Method::Wvd, Method::Spwvd];
    let cfg = CompareConfig::for_signal("x2");
    let mut held = 0;
    let mut rows = Vec::new();
    for seed in 0..5 {
        let x2 = gen_x2(RATE, 1.0, 10.0, seed).map_err(|e| e.to_string())?;
        let report = compare_methods("x2", &x2.signal, Some(&truth(&x2)), &methods, &cfg)
            .map_err(|e| e.to_string())?;
        let n = |m| report.nrmse(m).unwrap_or(f64::NAN);
        let (s, p, w, sp) = (
            n(Method::Stft),
            n(Method::Pct),
            n(Method::Wvd),
            n(Method::Spwvd),
        );
        if p < s && s < w && sp < s {
            held += 1;
        }
        rows.push(format!("seed {seed}: {s:.3}/{p:.3}/{w:.3}/{sp:.3}"));
    }
    check(
        held >= 4,
        format!(
            "ordering held in {held}/5 seeds (STFT/PCT/WVD/SPWVD) {}",
            rows.join(", ")
        ),
    )
}

fn local_maxima_db(psd: &Psd, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let peak = psd.power.iter().cloned().fold(0.0, f64::max);
    let p = &psd.power;
    (1..p.len() - 1)
        .filter(|&k| psd.freqs_hz[k] >= lo && psd.freqs_hz[k] <= hi)
        .filter(|&k| p[k] > p[k - 1] && p[k] >= p[k + 1])
        .map(|k| (psd.freqs_hz[k], 10.0 * (p[k] / peak).log10()))
        .filter(|(_, db)| *db > -20.0)
        .collect()
}

fn cross_term() -> Outcome {
    let x1 = gen_x1(RATE, 1.0).map_err(|e| e.to_string())?;
    let cfg = CompareConfig::for_signal("x1");
    let mut lines = Vec::new();
    let mut ok = true;
    for m in [Method::Wvd, Method::Stft, Method::Pct, Method::Spwvd] {
        let g = scg_tfd::eval::compute_tfd(&x1.signal, m, &cfg).map_err(|e| e.to_string())?;
        let psd = psd_from_tfd(&g).map_err(|e| e.to_string())?;
        if m == Method::Wvd {
            let near = local_maxima_db(&psd, 29.0, 31.0);
            ok &= !near.is_empty();
            lines.push(format!("WVD maxima near 30 Hz {near:.1?}"));
        } else {
            let band = local_maxima_db(&psd, 25.0, 35.0);
            ok &= band.is_empty();
            lines.push(format!("{m} maxima in 25-35 Hz {band:.1?}"));
        }
    }
    check(ok, lines.join("; "))
}

fn grid_spacings() -> Outcome {
    let x1 = gen_x1(RATE, 1.0).map_err(|e| e.to_string())?;
    let x2 = gen_x2(RATE, 1.0, 10.0, 0).map_err(|e| e.to_string())?;
    let round4 = |v: f64| (v * 1e4).round() / 1e4;
    let mut ok = true;
    let mut lines = Vec::new();
    let mut expect = |label: &str, got: f64, want: f64| {
        ok &= round4(got) == round4(want);
        lines.push(format!("{label} {got:.4}"));
    };
    for (id, x) in [("x1", &x1.signal), ("x2", &x2.signal)] {
        let cfg = CompareConfig::for_signal(id);
        for m in [
            Method::Stft,
            Method::Wvd,
            Method::Pwvd,
            Method::Spwvd,
            Method::Pct,
        ] {
            let g = scg_tfd::eval::compute_tfd(x, m, &cfg).map_err(|e| e.to_string())?;
            let r = resolution_report(&g).map_err(|e| e.to_string())?;
            let constructed = g.freqs_hz[1] - g.freqs_hz[0];
            expect(
                &format!("{id} {m} df(axis)"),
                r.spectral_resolution_hz,
                constructed,
            );
            match m {
                Method::Stft => {
                    expect(&format!("{id} {m} dt"), r.temporal_resolution_ms, 12.5);
                    let df = if id == "x1" { 0.625 } else { 2.5 };
                    expect(&format!("{id} {m} df"), r.spectral_resolution_hz, df);
                }
                _ => expect(&format!("{id} {m} dt"), r.temporal_resolution_ms, 3.125),
            }
        }
    }
    check(ok, lines.join(", "))
}

/// Naive DFT power |Z(f)|² on `bins` equally spaced frequencies in [0, 1)
/// cycles/sample.
fn dft_power(z: &[Complex64], bins: usize) -> Vec<f64> {
    (0..bins)
        .map(|k| {
            let nu = k as f64 / bins as f64;
            z.iter()
                .enumerate()
                .map(|(n, v)| v * Complex64::from_polar(1.0, -2.0 * PI * nu * n as f64))
                .sum::<Complex64>()
                .norm_sqr()
        })
        .collect()
}

fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

fn wvd_marginals() -> Outcome {
    let n = 128;
    let m = 256;
    // Gaussian-enveloped analytic tone: its spectrum is negligible in the
    // upper half band, so the half-band alias of the lag-2m sampling is too.
    let z: Vec<Complex64> = (0..n)
        .map(|i| {
            let u = (i as f64 - 63.5) / 16.0;
            Complex64::from_polar((-0.5 * u * u).exp(), 2.0 * PI * 0.1 * i as f64)
        })
        .collect();
    let zs = ComplexSignal::new(z.clone(), RATE).map_err(|e| e.to_string())?;
    let g = wvd_complex(&zs, m).map_err(|e| e.to_string())?;

    let spectrum = dft_power(&z, 2 * m);
    let expected_f: Vec<f64> = (0..m).map(|k| 0.5 * spectrum[k]).collect();
    let got_f: Vec<f64> = (0..g.n_freqs())
        .map(|k| (0..g.n_times()).map(|t| g.value(t, k)).sum())
        .collect();

    let interior = 8..n - 8;
    let expected_t: Vec<f64> = interior
        .clone()
        .map(|i| m as f64 * z[i].norm_sqr())
        .collect();
    let got_t: Vec<f64> = interior.map(|i| g.row(i).iter().sum()).collect();

    let ef = rel_l2(&got_f, &expected_f);
    let et = rel_l2(&got_t, &expected_t);
    check(
        ef < 1e-6 && et < 1e-6,
        format!("frequency marginal rel L2 {ef:.2e}, time marginal rel L2 {et:.2e}"),
    )
}

fn degenerate_identities() -> Outcome {
    let x1 = gen_x1(RATE, 1.0).map_err(|e| e.to_string())?;
    let z = analytic_signal(&x1.signal).map_err(|e| e.to_string())?;
    let cfg = PctConfig::default();
    let p =
        pct_transform(&z, &PolynomialKernel::zeros(2).unwrap(), &cfg).map_err(|e| e.to_string())?;
    let s = stft_complex(&z, &cfg.window, cfg.hop_samples, cfg.fft_length)
        .map_err(|e| e.to_string())?;
    let scale = s.values().iter().cloned().fold(0.0, f64::max);
    let d_pct = p
        .values()
        .iter()
        .zip(s.values())
        .fold(0.0f64, |mx, (a, b)| mx.max((a - b).abs()))
        / scale;

    let n = x1.signal.len();
    let fft = 2 * n;
    let w = wvd(&x1.signal, fft, true).map_err(|e| e.to_string())?;
    let sp = spwvd(
        &x1.signal,
        &WindowSpec::rectangular(1),
        &WindowSpec::rectangular(2 * n - 1),
        fft,
    )
    .map_err(|e| e.to_string())?;
    let wscale = w.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let d_sp = w
        .values()
        .iter()
        .zip(sp.values())
        .fold(0.0f64, |mx, (a, b)| mx.max((a - b).abs()))
        / wscale;
    check(
        d_pct <= 1e-12 && d_sp <= 1e-9 && p.times_s == s.times_s,
        format!("PCT(0) vs STFT max rel diff {d_pct:.2e}; SPWVD(degenerate) vs WVD {d_sp:.2e}"),
    )
}

fn traj(freqs: &[f64]) -> IfTrajectory {
    let times = (0..freqs.len()).map(|i| i as f64).collect();
    IfTrajectory::new(times, freqs.to_vec(), vec![true; freqs.len()]).unwrap()
}

fn metric_oracle() -> Outcome {
    let a = traj(&[20.0; 7]);
    let e = traj(&[22.0; 7]);
    let b = traj(&[10.0, 20.0]);
    let f = traj(&[12.0, 16.0]);
    let got = [
        rmse(&a, &e).map_err(|e| e.to_string())?,
        nrmse(&a, &e).map_err(|e| e.to_string())?,
        rmse(&b, &f).map_err(|e| e.to_string())?,
        nrmse(&b, &f).map_err(|e| e.to_string())?,
    ];
    let want = [2.0, 0.1, 10f64.sqrt(), 10f64.sqrt() / 15.0];
    let worst = got
        .iter()
        .zip(&want)
        .fold(0.0f64, |m, (g, w)| m.max((g - w).abs()));
    check(
        worst <= 1e-12,
        format!("values {got:?}, max abs error {worst:.1e}"),
    )
}

fn fit_rms(est: &scg_tfd::pct::KernelEstimate, times: &[f64], truth: impl Fn(f64) -> f64) -> f64 {
    let sq: f64 = times
        .iter()
        .map(|&t| (est.fitted_if(t) - truth(t)).powi(2))
        .sum();
    (sq / times.len() as f64).sqrt()
}

fn kernel_recovery() -> Outcome {
    let n = RATE as usize;
    let linear: Vec<Complex64> = (0..n)
        .map(|i| {
            let t = i as f64 / RATE;
            Complex64::from_polar(1.0, 2.0 * PI * (20.0 * t + 15.0 * t * t))
        })
        .collect();
    let z = ComplexSignal::new(linear, RATE).map_err(|e| e.to_string())?;
    let est = estimate_kernel(&z, &PctConfig::default()).map_err(|e| e.to_string())?;
    let interior: Vec<f64> = est
        .grid
        .times_s
        .iter()
        .copied()
        .filter(|t| (0.15..=0.85).contains(t))
        .collect();
    let rms_linear = fit_rms(&est, &interior, |t| 20.0 + 30.0 * t);

    // One burst of the quadratic chirp, 2610τ² − 430τ + 20 Hz over 0.15 s.
    // Its IF dips to 2.3 Hz, so the ridge band has to reach down to 0; the
    // window is kept shorter than the burst.
    let onset = 0.25;
    let chirp_if = |tau: f64| 2610.0 * tau * tau - 430.0 * tau + 20.0;
    let burst: Vec<Complex64> = (0..n)
        .map(|i| {
            let tau = i as f64 / RATE - onset;
            if tau > 0.0 && tau <= 0.15 {
                Complex64::from_polar(1.0, 2.0 * PI * ((870.0 * tau - 215.0) * tau + 20.0) * tau)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let z = ComplexSignal::new(burst, RATE).map_err(|e| e.to_string())?;
    let cfg = PctConfig {
        window: WindowSpec::hann(33),
        ridge_band_hz: Some((0.0, 70.0)),
        convergence_tol_hz: 0.01,
        max_iterations: 30,
        ..PctConfig::default()
    };
    let est = estimate_kernel(&z, &cfg).map_err(|e| e.to_string())?;
    let interior: Vec<f64> = (0..=100)
        .map(|k| onset + 0.02 + 0.11 * k as f64 / 100.0)
        .collect();
    let rms_quad = fit_rms(&est, &interior, |t| chirp_if(t - onset));

    check(
        rms_linear < 0.5 && rms_quad < 1.0,
        format!(
            "linear chirp RMS {rms_linear:.3} Hz (< 0.5); quadratic burst RMS {rms_quad:.3} Hz (< 1.0), {} iterations",
            est.iterations
        ),
    )
}

fn analytic_contract() -> Outcome {
    let n = 1024;
    let x: Vec<f64> = (0..n)
        .map(|i| (2.0 * PI * 37.0 * i as f64 / n as f64).cos())
        .collect();
    let z = analytic_signal(&SampledSignal::new(x, RATE).unwrap()).map_err(|e| e.to_string())?;
    let spectrum = dft_power(z.samples(), n);
    let peak = spectrum.iter().cloned().fold(0.0, f64::max).sqrt();
    let negative = spectrum[n / 2 + 1..]
        .iter()
        .cloned()
        .fold(0.0, f64::max)
        .sqrt();
    let suppression = (peak / negative.max(f64::MIN_POSITIVE)).log10();

    let err = (16..n - 16)
        .map(|i| {
            let expected = Complex64::from_polar(1.0, 2.0 * PI * 37.0 * i as f64 / n as f64);
            (z.samples()[i] - expected).norm()
        })
        .fold(0.0f64, f64::max);
    check(
        suppression > 9.0 && err < 1e-6,
        format!(
            "negative-frequency suppression {suppression:.1} orders; max interior error {err:.1e}"
        ),
    )
}

fn aliasing() -> Outcome {
    let n = RATE as usize;
    let x: Vec<f64> = (0..n)
        .map(|i| (2.0 * PI * 100.0 * i as f64 / RATE).cos())
        .collect();
    let x = SampledSignal::new(x, RATE).unwrap();
    let level_db = |psd: &Psd, lo: f64, hi: f64| {
        let peak = psd.power.iter().cloned().fold(0.0, f64::max);
        let low = psd
            .freqs_hz
            .iter()
            .zip(&psd.power)
            .filter(|(f, _)| **f >= lo && **f < hi)
            .fold(0.0f64, |m, (_, p)| m.max(*p));
        10.0 * (low / peak).log10()
    };
    let w = wvd(&x, 2 * n, false).map_err(|e| e.to_string())?;
    let s = stft(&x, &WindowSpec::hann(128), 4, 512).map_err(|e| e.to_string())?;
    let w_psd = psd_from_tfd(&w).map_err(|e| e.to_string())?;
    let s_psd = psd_from_tfd(&s).map_err(|e| e.to_string())?;
    // -100 Hz lands on 160 - 100 = 60 Hz in the lag-doubled WVD.
    let w_folded = level_db(&w_psd, 59.0, 61.0);
    let w_db = level_db(&w_psd, 0.0, 80.0);
    let s_db = level_db(&s_psd, 0.0, 80.0);
    check(
        w_db > -20.0 && w_folded > -20.0 && s_db < -20.0 && w.meta.folding_hz == 80.0,
        format!(
            "WVD strongest level below 80 Hz {w_db:.1} dB, at 60 Hz {w_folded:.1} dB; STFT below 80 Hz {s_db:.1} dB"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("x1 NRMSE ordering and runtime", x1_ordering),
        ("x2 NRMSE ordering over 5 seeds", x2_ordering),
        ("WVD cross-term in x1 PSD", cross_term),
        ("grid spacings", grid_spacings),
        ("WVD marginals", wvd_marginals),
        ("degenerate identities", degenerate_identities),
        ("metric oracle", metric_oracle),
        ("kernel recovery", kernel_recovery),
        ("analytic signal contract", analytic_contract),
        ("WVD aliasing of real input", aliasing),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
