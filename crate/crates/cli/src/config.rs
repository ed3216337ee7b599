use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Flat experiment configuration. Every key is optional; each command
/// reads the keys it needs and falls back to its own defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,

    // sdof-curve
    pub cross_min: Option<f64>,
    pub cross_max: Option<f64>,
    pub cross_step: Option<f64>,
    pub max_q: Option<u64>,
    /// Restricts the nested column to these `(p, q)` decompositions.
    pub pairs: Option<Vec<[u64; 2]>>,
    pub eav_sign: Option<String>,

    // rate-curve and complex
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub db_min: Option<f64>,
    pub db_max: Option<f64>,
    pub db_step: Option<f64>,
    pub max_layers: Option<u32>,
    pub eps_step: Option<f64>,
    pub log10_p_step: Option<f64>,
    pub log10_p_max: Option<f64>,

    // simulate
    pub q: Option<f64>,
    pub m: Option<usize>,
    pub p0_over_b: Option<Vec<f64>>,
    pub noise_var: Option<f64>,
    pub trials: Option<u64>,
    pub streams: Option<u64>,
    pub theorem8_m: Option<usize>,
    pub theorem8_p0_over_b: Option<Vec<f64>>,

    // verify
    pub tie_break: Option<String>,
    pub basis_file: Option<PathBuf>,
    pub k: Option<u64>,
    pub grid_den: Option<u32>,
    pub max_f_q: Option<u64>,

    // mismatch
    pub nested_p: Option<u64>,
    pub nested_q: Option<u64>,
    pub gamma: Option<f64>,
    pub layers: Option<Vec<usize>>,
    pub penalty_c: Option<Vec<f64>>,

    // complex
    pub psi: Option<Vec<f64>>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }
}

/// `min, min + step, ..., max` computed as integer multiples so that
/// decimal grid points such as 1.5 come out exact.
pub fn grid(name: &str, min: f64, max: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(min.is_finite() && max.is_finite() && step.is_finite() && step > 0.0) {
        return Err(format!(
            "{name}: bounds and step must be finite with step > 0"
        ));
    }
    if max < min {
        return Err(format!("{name}: max {max} is below min {min}"));
    }
    let inv = 1.0 / step;
    let den = inv.round();
    let exact = (inv - den).abs() < 1e-9 * inv && den >= 1.0;
    let points = |k: i64| {
        if exact {
            k as f64 / den
        } else {
            k as f64 * step
        }
    };
    let k0 = (min / step - 1e-9).ceil() as i64;
    let k1 = (max / step + 1e-9).floor() as i64;
    if k1 - k0 > 10_000_000 {
        return Err(format!("{name}: grid has too many points"));
    }
    let out: Vec<f64> = (k0..=k1).map(points).collect();
    if out.is_empty() {
        return Err(format!("{name}: grid is empty"));
    }
    Ok(out)
}

/// Rejects empty or non-increasing lists.
pub fn check_increasing(name: &str, values: &[f64]) -> Result<(), String> {
    if values.is_empty() {
        return Err(format!("{name}: list is empty"));
    }
    if values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(format!("{name}: values must be strictly increasing"));
    }
    Ok(())
}
