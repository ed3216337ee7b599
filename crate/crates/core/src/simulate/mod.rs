//! Seeded Monte Carlo of the integer expansion codes over AWGN.
//!
//! Every trial draws the digits of both users, adds Gaussian noise to
//! `X1 + c X2` and decodes the received value by exact ML. A trial is an
//! error when any digit of either user comes back wrong.

mod code;
mod leakage;
mod rng;

pub use code::{DigitMask, ExpansionCode, MAX_CONSTELLATION};
pub use leakage::{leakage_cross_check, LeakageCheck, MAX_JOINT_PAIRS};
pub use rng::SampleStream;

use crate::channel::{CanonicalChannel, INTEGER_TOL};
use crate::error::{Error, Result};
use crate::fmt::sig12;
use rayon::prelude::*;
use std::time::{Duration, Instant};

/// Two-sided 97.5% standard normal quantile.
pub const WILSON_Z: f64 = 1.959963984540054;

/// Slack allowed between the Wilson upper limit and the analytic bound.
pub const BOUND_INFLATION: f64 = 1.1;

/// CSV header matching [`SimReport::to_csv_record`].
pub const CSV_HEADER: &str =
    "scheme,Q,M,P0,b,trials,seed,errors,rate,wilson_lo,wilson_hi,bound,pass";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialConfig {
    pub trials: u64,
    pub seed: u64,
    /// Receiver noise variance `b`.
    pub noise_var: f64,
    /// Independent substreams; the split of trials depends only on this
    /// number, never on the thread count.
    pub streams: u64,
}

impl TrialConfig {
    pub fn new(trials: u64, seed: u64, noise_var: f64) -> Self {
        TrialConfig {
            trials,
            seed,
            noise_var,
            streams: 8,
        }
    }

    pub fn with_streams(mut self, streams: u64) -> Self {
        self.streams = streams;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::Domain("at least one trial is required".into()));
        }
        if self.streams < 1 {
            return Err(Error::Domain("at least one stream is required".into()));
        }
        if !(self.noise_var >= 0.0 && self.noise_var.is_finite()) {
            return Err(Error::Domain(format!(
                "noise variance must be nonnegative, got {}",
                self.noise_var
            )));
        }
        Ok(())
    }

    /// Trial range `[start, end)` of stream `s`.
    fn range(&self, s: u64) -> (u64, u64) {
        let per = |k: u64| ((self.trials as u128 * k as u128) / self.streams as u128) as u64;
        (per(s), per(s + 1))
    }
}

/// Wilson score interval for `errors` successes in `trials`.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if errors == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub scheme: String,
    pub q: f64,
    pub m: usize,
    pub p0: f64,
    pub b: f64,
    pub trials: u64,
    pub seed: u64,
    pub errors: u64,
    pub rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    /// Analytic bound `2 exp(-(d sqrt(P0))^2 / (8b))` for minimum distance
    /// `d sqrt(P0)`.
    pub bound: f64,
    pub pass: bool,
    /// Not part of the CSV record, which must be reproducible.
    pub wall_time: Duration,
}

impl SimReport {
    pub fn to_csv_record(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.scheme,
            sig12(self.q),
            self.m,
            sig12(self.p0),
            sig12(self.b),
            self.trials,
            self.seed,
            self.errors,
            sig12(self.rate),
            sig12(self.wilson_lo),
            sig12(self.wilson_hi),
            sig12(self.bound),
            self.pass
        )
    }
}

/// Bound on the symbol error rate of nearest-point decoding with minimum
/// distance `d sqrt(P0)`: the noise must reach half the distance.
pub fn tail_bound(min_distance: f64, p0: f64, b: f64) -> f64 {
    if b == 0.0 {
        return 0.0;
    }
    (2.0 * (-(min_distance * min_distance) * p0 / (8.0 * b)).exp()).min(1.0)
}

/// Runs one stream and counts errors.
fn run_stream(code: &ExpansionCode, sigma: f64, cfg: &TrialConfig, s: u64) -> u64 {
    let (start, end) = cfg.range(s);
    let mut rng = SampleStream::new(cfg.seed, s);
    let cdfs: [Vec<f64>; 2] = [0, 1].map(|u| {
        let mut acc = 0.0;
        let mut c: Vec<f64> = code
            .digit_pmf(u)
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        *c.last_mut().unwrap() = 1.0;
        c
    });
    let m = code.num_digits();
    let mut digits = [vec![0usize; m], vec![0usize; m]];
    let mut errors = 0;
    for _ in start..end {
        for (u, cdf) in cdfs.iter().enumerate() {
            for slot in digits[u].iter_mut() {
                *slot = rng.categorical(cdf);
            }
        }
        let sent = code.level_indices(&digits);
        let r = code.value(&sent) + sigma * rng.normal();
        if code.decode(r) != sent {
            errors += 1;
        }
    }
    errors
}

fn run(code: &ExpansionCode, scheme: &str, cfg: &TrialConfig) -> Result<SimReport> {
    cfg.validate()?;
    let started = Instant::now();
    // received value in units of sqrt(P0)
    let sigma = (cfg.noise_var / code.p0()).sqrt();
    let errors: u64 = (0..cfg.streams)
        .into_par_iter()
        .map(|s| run_stream(code, sigma, cfg, s))
        .sum();
    let rate = errors as f64 / cfg.trials as f64;
    let (wilson_lo, wilson_hi) = wilson_interval(errors, cfg.trials);
    let bound = tail_bound(code.min_distance(), code.p0(), cfg.noise_var);
    // without noise the error probability is exactly zero
    let pass = if cfg.noise_var == 0.0 {
        errors == 0
    } else {
        wilson_hi <= BOUND_INFLATION * bound
    };
    Ok(SimReport {
        scheme: scheme.to_string(),
        q: code.cross_gain(),
        m: code.num_digits(),
        p0: code.p0(),
        b: cfg.noise_var,
        trials: cfg.trials,
        seed: cfg.seed,
        errors,
        rate,
        wilson_lo,
        wilson_hi,
        bound,
        pass,
        wall_time: started.elapsed(),
    })
}

/// Simulates a `Q`-level expansion code. The channel's cross gain must be
/// `Q` or `1/Q`; both give the same received constellation. Noise comes
/// from `cfg.noise_var`.
pub fn simulate_expansion(
    code: &ExpansionCode,
    ch: &CanonicalChannel,
    cfg: &TrialConfig,
) -> Result<SimReport> {
    if code.mask() != DigitMask::All {
        return Err(Error::Precondition(
            "use simulate_theorem8 for the sparse binary code".into(),
        ));
    }
    let q = code.q();
    let c = ch.cross_coeff;
    if (c - q).abs() > INTEGER_TOL && (c - 1.0 / q).abs() > INTEGER_TOL {
        return Err(Error::Precondition(format!(
            "cross gain {c} is not aligned with Q = {q} (need Q or 1/Q)"
        )));
    }
    run(code, "expansion", cfg)
}

/// Simulates the sparse binary code at cross gain 1.5.
pub fn simulate_theorem8(code: &ExpansionCode, cfg: &TrialConfig) -> Result<SimReport> {
    if code.mask() != DigitMask::EveryThird {
        return Err(Error::Precondition(
            "code is not the sparse binary code".into(),
        ));
    }
    run(code, "theorem8", cfg)
}
