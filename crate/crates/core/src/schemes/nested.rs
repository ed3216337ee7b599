//! Layered nested-lattice scheme.
//!
//! Each layer carries a nested lattice code. The receiver decodes the
//! integer combination `q u1 + p u2` of every layer, then `u2` from the
//! residual, and peels the layer off before moving down. Equalizing the two
//! rate constraints fixes every layer's power at `alpha` times the
//! interference-plus-noise it sees, which makes the powers geometric in the
//! layer index.

use crate::channel::{decompose, RationalDecomposition};
use crate::error::{Error, Result};

#[cfg(test)]
/// `log2(2^a + 2^b)` without overflow.
fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (1.0 + (lo - hi).exp2()).log2()
}

fn check_gamma(gamma: f64, allow_half: bool) -> Result<()> {
    let g = gamma.abs();
    let ok = gamma.is_finite() && g > 0.0 && (g < 0.5 || (allow_half && g == 0.5));
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "nested lattice scheme needs 0 < |gamma| < 0.5, got {gamma}"
        )))
    }
}

/// Power-to-interference ratio `alpha = (1 - 2g^2 + sqrt(1 - 4g^2)) / (2 g^4)`.
///
/// This is the root of `P / (g^2 P + A) = 1 + g^2 P / A` in `P / A` that
/// yields a positive rate; `|gamma| = 0.5` gives `alpha = 4`.
pub fn nested_alpha(gamma: f64) -> Result<f64> {
    check_gamma(gamma, true)?;
    let g2 = gamma * gamma;
    let disc = (1.0 - 4.0 * g2).max(0.0).sqrt();
    Ok((1.0 - 2.0 * g2 + disc) / (2.0 * g2 * g2))
}

/// The other root of the layer power equation.
pub fn nested_alpha_other_root(gamma: f64) -> Result<f64> {
    check_gamma(gamma, true)?;
    let g2 = gamma * gamma;
    let disc = (1.0 - 4.0 * g2).max(0.0).sqrt();
    Ok((1.0 - 2.0 * g2 - disc) / (2.0 * g2 * g2))
}

/// `beta = q^2 + (p + gamma)^2`, the power gain of one decoded layer on the
/// layers below it.
pub fn nested_beta(p: u64, q: u64, gamma: f64) -> f64 {
    let q = q as f64;
    let pg = p as f64 + gamma;
    q * q + pg * pg
}

/// Per-layer rate `1/4 log2 alpha`.
pub fn layer_rate(alpha: f64) -> f64 {
    0.25 * alpha.log2()
}

/// One layer of the allocation. Powers are kept in `log2` so that deep
/// stacks do not overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer {
    /// `log2 A_i`, interference plus noise seen when decoding this layer.
    pub log2_interference: f64,
    /// `log2 P_i`.
    pub log2_power: f64,
    /// Rate in bits per channel use.
    pub rate: f64,
    /// Optimal scaling `k = g^2 P / (g^2 P + A)` before the second modulo.
    pub mmse_scale: f64,
    /// `log2` of the minimal effective noise variance `g^2 P A / (g^2 P + A)`.
    pub log2_effective_noise: f64,
}

impl Layer {
    pub fn interference(&self) -> f64 {
        self.log2_interference.exp2()
    }

    pub fn power(&self) -> f64 {
        self.log2_power.exp2()
    }

    pub fn effective_noise(&self) -> f64 {
        self.log2_effective_noise.exp2()
    }
}

/// Power and rate allocation of the layered scheme for one decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredAllocation {
    pub p: u64,
    pub q: u64,
    pub gamma: f64,
    /// Receiver noise variance.
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub layers: Vec<Layer>,
    /// `log2` of the total power of either transmitter.
    pub log2_total_power: f64,
}

impl LayeredAllocation {
    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    /// Total power `((alpha beta + 1)^M - 1) q^2 b / beta`; may be `inf` for
    /// deep stacks, see [`Self::log2_total_power`].
    pub fn total_power(&self) -> f64 {
        if self.layers.is_empty() {
            0.0
        } else {
            self.log2_total_power.exp2()
        }
    }

    pub fn total_power_db(&self) -> f64 {
        10.0 * std::f64::consts::LOG10_2 * self.log2_total_power
    }

    pub fn sum_rate(&self) -> f64 {
        self.layers.iter().map(|l| l.rate).sum()
    }

    /// `[(1/4 log2 alpha - 1) M]^+`: every layer leaks at most one bit.
    pub fn secrecy_rate(&self) -> f64 {
        ((layer_rate(self.alpha) - 1.0) * self.layers.len() as f64).max(0.0)
    }

    /// Secure degrees of freedom in the `M -> infinity` limit.
    pub fn sdof(&self) -> f64 {
        sdof_from(self.alpha, self.beta)
    }

    /// `secrecy_rate / (1/2 log2 total_power)` at this finite depth.
    pub fn finite_sdof(&self) -> f64 {
        if self.layers.is_empty() || self.log2_total_power <= 0.0 {
            return 0.0;
        }
        self.secrecy_rate() / (0.5 * self.log2_total_power)
    }
}

/// Allocation for the decomposition `(p, q, gamma)` over `m` layers with
/// receiver noise variance `b`.
pub fn layered_allocation(
    p: u64,
    q: u64,
    gamma: f64,
    b: f64,
    m: usize,
) -> Result<LayeredAllocation> {
    check_gamma(gamma, false)?;
    if p < 1 || q < 1 {
        return Err(Error::Domain("p and q must be positive integers".into()));
    }
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::Domain(format!(
            "noise variance must be positive, got {b}"
        )));
    }
    let alpha = nested_alpha(gamma)?;
    let beta = nested_beta(p, q, gamma);
    let g2 = gamma * gamma;
    let growth = (alpha * beta + 1.0).log2();
    let base = ((q * q) as f64 * b).log2();
    let rate = layer_rate(alpha);
    let mmse_scale = g2 * alpha / (g2 * alpha + 1.0);
    let noise_ratio = (g2 * alpha / (g2 * alpha + 1.0)).log2();
    let layers = (0..m)
        .map(|i| {
            let log2_a = base + i as f64 * growth;
            Layer {
                log2_interference: log2_a,
                log2_power: alpha.log2() + log2_a,
                rate,
                mmse_scale,
                log2_effective_noise: log2_a + noise_ratio,
            }
        })
        .collect();
    // ((ab+1)^M - 1) q^2 b / beta, with (ab+1)^M - 1 = (ab+1)^M (1 - (ab+1)^-M)
    let log2_total_power = if m == 0 {
        f64::NEG_INFINITY
    } else {
        let tail = -(-(m as f64) * growth).exp2();
        m as f64 * growth + tail.ln_1p() / std::f64::consts::LN_2 + base - beta.log2()
    };
    Ok(LayeredAllocation {
        p,
        q,
        gamma,
        b,
        alpha,
        beta,
        layers,
        log2_total_power,
    })
}

fn sdof_from(alpha: f64, beta: f64) -> f64 {
    ((layer_rate(alpha) - 1.0) / (0.5 * (alpha * beta + 1.0).log2())).max(0.0)
}

/// `[(1/4 log2 alpha - 1) / (1/2 log2(alpha beta + 1))]^+` for
/// `0 < |gamma| <= 0.5`.
pub fn nested_sdof(p: u64, q: u64, gamma: f64) -> Result<f64> {
    Ok(nested_sdof_unclamped(p, q, gamma)?.max(0.0))
}

/// [`nested_sdof`] before clamping at zero.
pub fn nested_sdof_unclamped(p: u64, q: u64, gamma: f64) -> Result<f64> {
    check_gamma(gamma, true)?;
    let alpha = nested_alpha(gamma)?;
    let beta = nested_beta(p, q, gamma);
    Ok((layer_rate(alpha) - 1.0) / (0.5 * (alpha * beta + 1.0).log2()))
}

/// Best secure degrees of freedom over all decompositions with `q <= max_q`
/// and `|gamma| < 0.5`. Returns zero and `None` when no decomposition
/// qualifies or none is positive.
pub fn best_nested_sdof(cross_coeff: f64, max_q: u64) -> (f64, Option<RationalDecomposition>) {
    best_nested_sdof_over(decompose(cross_coeff, max_q))
}

/// Like [`best_nested_sdof`] restricted to the listed `(p, q)` pairs.
pub fn best_nested_sdof_for_pairs(
    cross_coeff: f64,
    pairs: &[(u64, u64)],
) -> (f64, Option<RationalDecomposition>) {
    let max_q = pairs.iter().map(|&(_, q)| q).max().unwrap_or(0);
    best_nested_sdof_over(
        decompose(cross_coeff, max_q)
            .into_iter()
            .filter(|d| pairs.contains(&(d.p, d.q))),
    )
}

fn best_nested_sdof_over(
    candidates: impl IntoIterator<Item = RationalDecomposition>,
) -> (f64, Option<RationalDecomposition>) {
    let mut best = (0.0, None);
    for d in candidates {
        if d.gamma.abs() >= 0.5 {
            continue;
        }
        if let Ok(s) = nested_sdof(d.p, d.q, d.gamma) {
            if s > best.0 {
                best = (s, Some(d));
            }
        }
    }
    best
}
