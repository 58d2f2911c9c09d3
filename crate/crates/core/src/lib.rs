//! Time-frequency analysis of cardiac vibration signals.
//!
//! The crate provides four time-frequency distribution (TFD) estimators
//! (short-time Fourier transform, Wigner-Ville distribution with its pseudo
//! and smoothed-pseudo variants, and the polynomial chirplet transform),
//! synthetic seismocardiogram-like test signals with exactly known
//! instantaneous frequency (IF), ridge-based IF estimation, and the
//! NRMSE comparison harness that ranks the estimators.
//!
//! ```
//! use scg_tfd::{synth, tfd, window::WindowSpec, eval};
//!
//! let x1 = synth::gen_x1(320.0, 1.0).unwrap();
//! let grid = tfd::stft(&x1.signal, &WindowSpec::hann(128), 4, 512).unwrap();
//! let dominant = eval::dominant_frequency(&grid, Some((0.0, 70.0))).unwrap();
//! assert!((dominant - 20.0).abs() < 1.0);
//! ```

// `!(a > b)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod eval;
pub mod io;
pub mod pct;
pub mod signal;
pub mod synth;
pub mod tfd;
pub mod window;

mod fft;

pub use error::{Result, TfdError};
pub use eval::{ComparisonReport, IfTrajectory, Method};
pub use pct::{PctConfig, PolynomialKernel};
pub use signal::{ComplexSignal, SampledSignal};
pub use tfd::{ResolutionReport, TfdGrid};
pub use window::{WindowKind, WindowSpec};
