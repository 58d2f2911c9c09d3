//! JSON run configuration shared by all subcommands.
//!
//! ```json
//! { "seed": 3, "band_hz": [0, 70], "methods": ["stft", "pct"],
//!   "params": { "pct": { "order": 3 } }, "synth": { "snr": 5 } }
//! ```
//!
//! `params` is merged key by key onto the method defaults, `synth` onto the
//! generator defaults; anything left out keeps its default.

use crate::CliError;
use scg_tfd::Method;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub methods: Option<Vec<Method>>,
    pub seed: Option<u64>,
    pub band_hz: Option<(f64, f64)>,
    pub order: Option<usize>,
    pub pgm: Option<bool>,
    pub db: Option<bool>,
    pub params: Option<Value>,
    pub synth: Option<Value>,
}

pub fn load_run_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let cfg: RunConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    if let Some(b) = cfg.band_hz {
        check_band(b).map_err(CliError::Validation)?;
    }
    Ok(cfg)
}

/// Overlay `patch` onto the serialized `base`, recursing into objects.
pub fn merge_into<T>(base: T, patch: Option<&Value>) -> Result<T, CliError>
where
    T: Serialize + DeserializeOwned,
{
    let Some(patch) = patch else { return Ok(base) };
    let mut v = serde_json::to_value(&base).expect("config serializes");
    merge(&mut v, patch);
    serde_json::from_value(v).map_err(|e| CliError::Validation(format!("config: {e}")))
}

fn merge(dst: &mut Value, src: &Value) {
    match (dst, src) {
        (Value::Object(d), Value::Object(s)) => {
            for (k, v) in s {
                match d.get_mut(k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        d.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (d, s) => *d = s.clone(),
    }
}

/// Parse `lo:hi` in Hz.
pub fn parse_band(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower edge {lo:?}"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper edge {hi:?}"))?;
    check_band((lo, hi))?;
    Ok((lo, hi))
}

fn check_band((lo, hi): (f64, f64)) -> Result<(), String> {
    if lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi {
        Ok(())
    } else {
        Err(format!("band {lo}:{hi} must satisfy 0 <= lo < hi"))
    }
}
