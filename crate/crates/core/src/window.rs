//! Analysis window functions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Window shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WindowKind {
    Rectangular,
    Hann,
    Hamming,
    /// `exp(-0.5 * (alpha * k / half_width)^2)`, `k` measured from the center.
    Gaussian {
        alpha: f64,
    },
}

/// Shape plus length of a window.
///
/// Windows are symmetric by default (`w[k] == w[len - 1 - k]`). Setting
/// `periodic` produces the DFT-even variant: the symmetric window of length
/// `len + 1` with its last sample dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    #[serde(flatten)]
    pub kind: WindowKind,
    pub length: usize,
    #[serde(default)]
    pub periodic: bool,
}

impl WindowSpec {
    pub fn new(kind: WindowKind, length: usize) -> Self {
        Self {
            kind,
            length,
            periodic: false,
        }
    }

    pub fn rectangular(length: usize) -> Self {
        Self::new(WindowKind::Rectangular, length)
    }

    pub fn hann(length: usize) -> Self {
        Self::new(WindowKind::Hann, length)
    }

    pub fn hamming(length: usize) -> Self {
        Self::new(WindowKind::Hamming, length)
    }

    pub fn gaussian(length: usize, alpha: f64) -> Self {
        Self::new(WindowKind::Gaussian { alpha }, length)
    }

    pub fn periodic(mut self) -> Self {
        self.periodic = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return invalid("window length must be at least 1");
        }
        if let WindowKind::Gaussian { alpha } = self.kind {
            if !(alpha > 0.0 && alpha.is_finite()) {
                return invalid(format!("gaussian alpha must be positive, got {alpha}"));
            }
        }
        Ok(())
    }
}

/// Evaluate the window described by `spec`.
pub fn make_window(spec: &WindowSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    if spec.periodic {
        let mut w = symmetric(spec.kind, spec.length + 1);
        w.pop();
        Ok(w)
    } else {
        Ok(symmetric(spec.kind, spec.length))
    }
}

fn symmetric(kind: WindowKind, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    let span = (n - 1) as f64;
    (0..n)
        .map(|k| {
            let k = k as f64;
            match kind {
                WindowKind::Rectangular => 1.0,
                WindowKind::Hann => 0.5 - 0.5 * (2.0 * PI * k / span).cos(),
                WindowKind::Hamming => 0.54 - 0.46 * (2.0 * PI * k / span).cos(),
                WindowKind::Gaussian { alpha } => {
                    let half = span / 2.0;
                    let u = alpha * (k - half) / half;
                    (-0.5 * u * u).exp()
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rectangular_is_all_ones() {
        assert_eq!(
            make_window(&WindowSpec::rectangular(4)).unwrap(),
            vec![1.0; 4]
        );
    }

    #[test]
    fn short_hann_windows() {
        let w3 = make_window(&WindowSpec::hann(3)).unwrap();
        assert_abs_diff_eq!(w3.as_slice(), [0.0, 1.0, 0.0].as_slice(), epsilon = 1e-15);
        let w5 = make_window(&WindowSpec::hann(5)).unwrap();
        assert_abs_diff_eq!(
            w5.as_slice(),
            [0.0, 0.5, 1.0, 0.5, 0.0].as_slice(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn zero_length_rejected() {
        assert!(make_window(&WindowSpec::hann(0)).is_err());
        assert!(make_window(&WindowSpec::gaussian(9, 0.0)).is_err());
    }

    #[test]
    fn odd_windows_peak_at_one_and_are_symmetric() {
        for spec in [
            WindowSpec::hann(31),
            WindowSpec::hamming(63),
            WindowSpec::gaussian(17, 2.5),
            WindowSpec::rectangular(7),
        ] {
            let w = make_window(&spec).unwrap();
            let n = w.len();
            assert_eq!(n, spec.length);
            assert_abs_diff_eq!(w[n / 2], 1.0, epsilon = 1e-15);
            for k in 0..n {
                assert_abs_diff_eq!(w[k], w[n - 1 - k], epsilon = 1e-15);
                assert!(w[k] >= 0.0);
            }
        }
    }

    #[test]
    fn periodic_hann_matches_dft_even_definition() {
        let w = make_window(&WindowSpec::hann(8).periodic()).unwrap();
        for (k, v) in w.iter().enumerate() {
            let expected = 0.5 - 0.5 * (2.0 * PI * k as f64 / 8.0).cos();
            assert_abs_diff_eq!(*v, expected, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(w[4], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn serde_shape() {
        let spec: WindowSpec =
            serde_json::from_str(r#"{"kind":"gaussian","alpha":2.5,"length":33}"#).unwrap();
        assert_eq!(spec, WindowSpec::gaussian(33, 2.5));
        let spec: WindowSpec = serde_json::from_str(r#"{"kind":"hann","length":63}"#).unwrap();
        assert_eq!(spec, WindowSpec::hann(63));
    }
}
