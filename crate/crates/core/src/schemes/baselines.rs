use super::nested::{layer_rate, LayeredAllocation};
use crate::error::{Error, Result};

/// `C(x) = 1/2 log2(1 + x)`.
pub fn capacity(x: f64) -> f64 {
    0.5 * x.ln_1p() / std::f64::consts::LN_2
}

/// Power-unconstrained secrecy rate of Gaussian random codebooks,
/// `1/2 log2(1/(ab))`, for `ab < 1`. Other regimes are not covered and
/// return `None`.
pub fn gaussian_baseline_limit(a: f64, b: f64) -> Option<f64> {
    let ab = a * b;
    if a > 0.0 && b > 0.0 && ab < 1.0 {
        Some(-0.5 * ab.log2())
    } else {
        None
    }
}

/// Rate lost to imperfect eavesdropper channel knowledge, `C(alpha_max^2 P1)`.
pub fn mismatch_penalty(alpha_max: f64, p1: f64) -> Result<f64> {
    if !(alpha_max >= 0.0 && alpha_max.is_finite()) {
        return Err(Error::Domain(format!(
            "alpha_max must be nonnegative, got {alpha_max}"
        )));
    }
    if !(p1 > 0.0) {
        return Err(Error::Domain(format!("P1 must be positive, got {p1}")));
    }
    Ok(capacity(alpha_max * alpha_max * p1))
}

/// `[(1/4 log2 alpha - 1) M - C(alpha_max^2 P1)]^+` with `P1` the total
/// power of the allocation.
pub fn adjusted_rate(alloc: &LayeredAllocation, alpha_max: f64) -> Result<f64> {
    if !(alpha_max >= 0.0 && alpha_max.is_finite()) {
        return Err(Error::Domain(format!(
            "alpha_max must be nonnegative, got {alpha_max}"
        )));
    }
    let m = alloc.num_layers() as f64;
    let unadjusted = (layer_rate(alloc.alpha) - 1.0) * m;
    if alloc.num_layers() == 0 {
        return Ok(0.0);
    }
    // C(alpha_max^2 P1) computed in the log domain so deep stacks stay finite.
    let log2_x = 2.0 * alpha_max.log2() + alloc.log2_total_power;
    let penalty = if alpha_max == 0.0 {
        0.0
    } else if log2_x > 60.0 {
        0.5 * (log2_x + (1.0 + (-log2_x).exp2()).log2())
    } else {
        capacity(log2_x.exp2())
    };
    Ok((unadjusted - penalty).max(0.0))
}

/// [`adjusted_rate`] with `alpha_max^2 = c / P1`, where the penalty is the
/// constant `C(c)` whatever the power.
pub fn adjusted_rate_scaled(alloc: &LayeredAllocation, c: f64) -> Result<f64> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!(
            "penalty constant must be nonnegative, got {c}"
        )));
    }
    let unadjusted = (layer_rate(alloc.alpha) - 1.0) * alloc.num_layers() as f64;
    Ok((unadjusted - capacity(c)).max(0.0))
}

/// Rate of the complex-gain scheme with secure degrees of freedom under both
/// normalizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexRate {
    pub secrecy_rate: f64,
    /// `Re / (1/2 log2(P1 + P2))`.
    pub sdof: f64,
    /// `Re / log2(P1 + P2)`, counting real and imaginary parts separately.
    pub sdof_per_real_dim: f64,
}

/// `[C(P1 / (b csc^2(psi) / 2)) - C(P1 / (P2 + 1/2))]^+`.
pub fn complex_gain_rate(p1: f64, p2: f64, b: f64, psi: f64) -> Result<ComplexRate> {
    let r = psi.rem_euclid(std::f64::consts::PI);
    if r < 1e-9 || std::f64::consts::PI - r < 1e-9 {
        return Err(Error::Domain(format!(
            "phase {psi} is a multiple of pi; the gains are aligned"
        )));
    }
    if !(p1 > 0.0 && p2 > 0.0 && b > 0.0) {
        return Err(Error::Domain(
            "powers and noise variance must be positive".into(),
        ));
    }
    let s = psi.sin();
    let noise = b / (2.0 * s * s);
    let rate = (capacity(p1 / noise) - capacity(p1 / (p2 + 0.5))).max(0.0);
    let log_total = (p1 + p2).log2();
    let (sdof, alt) = if log_total > 0.0 {
        (rate / (0.5 * log_total), rate / log_total)
    } else {
        (0.0, 0.0)
    };
    Ok(ComplexRate {
        secrecy_rate: rate,
        sdof,
        sdof_per_real_dim: alt,
    })
}
