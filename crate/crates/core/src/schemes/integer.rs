//! Integer-lattice schemes: digits sent at geometrically spaced power levels
//! so the receiver separates its own digits from the jammer's.

use crate::error::{Error, Result};
use crate::infotheory::{
    f_leakage, f_leakage_real, optimize_asymmetric_leakage, AsymmetricOptimum,
};
use std::sync::OnceLock;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive, got {v}")))
    }
}

fn check_layers(m: u32) -> Result<()> {
    if m >= 1 {
        Ok(())
    } else {
        Err(Error::Domain("at least one digit level is required".into()))
    }
}

/// `2 exp(-P0 / (8 b))`, the probability bound of a digit decoding error.
pub fn digit_error_bound(p0: f64, b: f64) -> f64 {
    2.0 * (-p0 / (8.0 * b)).exp()
}

/// Which side of the channel carries the larger gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `sqrt(ab) = Q >= 2`: level spacing `Q^2`, power as computed.
    Direct,
    /// `1 / sqrt(ab) = Q >= 2`: the same digits with an extra factor `Q^2`
    /// in power.
    Inverse,
}

/// `Q` and orientation for a cross gain, or a domain error when neither the
/// gain nor its inverse reaches 2.
pub fn expansion_base(cross_coeff: f64) -> Result<(f64, Orientation)> {
    check_positive("cross gain", cross_coeff)?;
    if cross_coeff >= 2.0 {
        Ok((cross_coeff, Orientation::Direct))
    } else if 1.0 / cross_coeff >= 2.0 {
        Ok((1.0 / cross_coeff, Orientation::Inverse))
    } else {
        Err(Error::Domain(format!(
            "expansion scheme needs Q >= 2, cross gain {cross_coeff} gives Q = {}",
            cross_coeff.max(1.0 / cross_coeff)
        )))
    }
}

/// Secure degrees of freedom of the `Q`-level expansion with the analytic
/// lower bound that replaces `f` by its Gaussian bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionSdof {
    pub q: f64,
    pub floor_q: u64,
    pub sdof: f64,
    pub lower_bound: f64,
}

/// `[log2 floor(Q) / (2 log2 Q) - f(floor(Q)) / (2 log2 Q)]^+` with
/// `Q = max(cross, 1 / cross)`.
pub fn expansion_sdof(cross_coeff: f64) -> Result<ExpansionSdof> {
    let (q, _) = expansion_base(cross_coeff)?;
    let fq = q.floor();
    let den = 2.0 * q.log2();
    let f = f_leakage_real(fq)?;
    let sdof = ((fq.log2() - f) / den).max(0.0);
    let e = std::f64::consts::E;
    let pi = std::f64::consts::PI;
    let gauss = (2.0 * pi * e * (1.0 / 6.0 - 1.0 / (12.0 * fq * fq))).log2();
    let lower_bound = (fq.log2() / den - gauss / (2.0 * den)).max(0.0);
    Ok(ExpansionSdof {
        q,
        floor_q: fq as u64,
        sdof,
        lower_bound,
    })
}

/// Finite-parameter rate and power of a scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePower {
    pub secrecy_rate: f64,
    pub total_power: f64,
}

impl RatePower {
    /// `secrecy_rate / (1/2 log2 total_power)`, zero when the power is at
    /// most 1.
    pub fn sdof_ratio(&self) -> f64 {
        if self.total_power > 1.0 {
            self.secrecy_rate / (0.5 * self.total_power.log2())
        } else {
            0.0
        }
    }
}

/// Rate and power of `M` expansion levels with base power `P0`:
/// `[M (1 - 2e^{-P0/8b}) log2 floor(Q) - 1 - M f(floor(Q))]^+` and
/// `P0 (floor(Q)^2 - 1)/12 (Q^{4M} - 1)/(Q^4 - 1)`, times `Q^2` in the
/// inverse orientation.
pub fn expansion_rate(
    q: f64,
    orientation: Orientation,
    p0: f64,
    b: f64,
    m: u32,
) -> Result<RatePower> {
    if !(q.is_finite() && q >= 2.0) {
        return Err(Error::Domain(format!(
            "expansion scheme needs Q >= 2, got {q}"
        )));
    }
    check_positive("P0", p0)?;
    check_positive("b", b)?;
    check_layers(m)?;
    let fq = q.floor();
    let mf = m as f64;
    let rate = mf * (1.0 - digit_error_bound(p0, b)) * fq.log2() - 1.0 - mf * f_leakage_real(fq)?;
    let q4 = q.powi(4);
    let mut power = p0 * (fq * fq - 1.0) / 12.0 * (q4.powf(mf) - 1.0) / (q4 - 1.0);
    if orientation == Orientation::Inverse {
        power *= q * q;
    }
    Ok(RatePower {
        secrecy_rate: rate.max(0.0),
        total_power: power,
    })
}

/// One point of the algebraic-irrational family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraicPoint {
    /// Odd alphabet size `2 floor(P^{1/4 - eps}) + 1`.
    pub q: f64,
    pub secrecy_rate: f64,
    pub total_power: f64,
    /// The caller asserts that `sqrt(ab)` is algebraic irrational; nothing
    /// here can check it.
    pub requires_algebraic_irrational: bool,
}

impl AlgebraicPoint {
    pub fn sdof_ratio(&self) -> f64 {
        RatePower {
            secrecy_rate: self.secrecy_rate,
            total_power: self.total_power,
        }
        .sdof_ratio()
    }
}

/// `Q = 2 floor(P^{1/4-eps}) + 1`,
/// `Re = [(1 - 2e^{-P^{2eps}/(8b)})(1/4 - eps) log2 P - 1 - f(Q)]^+` and
/// power `P^{1/2+2eps} (Q^2 - 1)/12`.
pub fn algebraic_irrational_rate(p: f64, eps: f64, a: f64, b: f64) -> Result<AlgebraicPoint> {
    if !(eps > 0.0 && eps < 0.25) {
        return Err(Error::Domain(format!(
            "eps must lie in (0, 1/4), got {eps}"
        )));
    }
    check_positive("a", a)?;
    check_positive("b", b)?;
    check_positive("P", p)?;
    let threshold = 1.0 / (a * a * b * b);
    if p <= threshold {
        return Err(Error::Precondition(format!(
            "P = {p} must exceed 1/(a^2 b^2) = {threshold}"
        )));
    }
    let q = 2.0 * p.powf(0.25 - eps).floor() + 1.0;
    let reliability = 1.0 - digit_error_bound(p.powf(2.0 * eps), b);
    let rate = reliability * (0.25 - eps) * p.log2() - 1.0 - f_leakage_real(q)?;
    Ok(AlgebraicPoint {
        q,
        secrecy_rate: rate.max(0.0),
        total_power: p.powf(0.5 + 2.0 * eps) * (q * q - 1.0) / 12.0,
        requires_algebraic_irrational: true,
    })
}

/// Largest finite-`P` ratio `Re / (1/2 log2 power)` over `eps` in a uniform
/// grid of `steps` interior points of `(0, 1/4)`.
pub fn algebraic_irrational_sup(p: f64, a: f64, b: f64, steps: usize) -> Result<(f64, f64)> {
    let mut best = (0.0, 0.0);
    for i in 1..=steps {
        let eps = 0.25 * i as f64 / (steps + 1) as f64;
        let r = algebraic_irrational_rate(p, eps, a, b)?.sdof_ratio();
        if r > best.0 {
            best = (r, eps);
        }
    }
    Ok(best)
}

/// Scheme output with the large-`M` secure degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeLimit {
    pub secrecy_rate: f64,
    pub total_power: f64,
    pub sdof_limit: f64,
}

static ASYMMETRIC: OnceLock<AsymmetricOptimum> = OnceLock::new();

/// Optimal Bernoulli digit parameters for the `cross = 1`, minus-sign
/// channel (grid 0.001, 30 refinement rounds), computed once.
pub fn asymmetric_optimum() -> AsymmetricOptimum {
    *ASYMMETRIC.get_or_init(|| optimize_asymmetric_leakage(0.001, 30).expect("valid grid step"))
}

/// Binary digits with unequal priors at cross gain 1, minus sign.
///
/// `Re = [M gap - 1 - 2e^{-P0/8b} M H(a1 + a2)]^+`, power
/// `P0 V (2^{4M} - 1)/3` with `V` the larger digit variance, and
/// `sdof_limit = [gap/2 - e^{-P0/8b} H(a1 + a2)]^+`.
pub fn theorem7_scheme(p0: f64, b: f64, m: u32) -> Result<SchemeLimit> {
    check_positive("P0", p0)?;
    check_positive("b", b)?;
    check_layers(m)?;
    let opt = asymmetric_optimum();
    let h = opt.sum_entropy();
    let mf = m as f64;
    let e = (-p0 / (8.0 * b)).exp();
    let rate = mf * opt.gap - 1.0 - 2.0 * e * mf * h;
    let v = (opt.p1 * (1.0 - opt.p1)).max(opt.p2 * (1.0 - opt.p2));
    let q: f64 = 2.0;
    let power = p0 * v * (q.powf(4.0 * mf) - 1.0) / (q * q - 1.0);
    Ok(SchemeLimit {
        secrecy_rate: rate.max(0.0),
        total_power: power,
        sdof_limit: (opt.gap / 2.0 - e * h).max(0.0),
    })
}

/// Binary digits on every third level at cross gain 1.5.
///
/// `Re = [(1 - 2e^{-P0/8b}) M - 1 - M/2]^+`, power `(P0/4)(2^{6M} - 1)/63`
/// and `sdof_limit = [(1/2 - 2e^{-P0/8b})/3]^+`.
pub fn theorem8_scheme(p0: f64, b: f64, m: u32) -> Result<SchemeLimit> {
    check_positive("P0", p0)?;
    check_positive("b", b)?;
    check_layers(m)?;
    let mf = m as f64;
    let eb = digit_error_bound(p0, b);
    let leak = mf * f_leakage(2)?;
    Ok(SchemeLimit {
        secrecy_rate: ((1.0 - eb) * mf - 1.0 - leak).max(0.0),
        total_power: p0 / 4.0 * (2f64.powf(6.0 * mf) - 1.0) / 63.0,
        sdof_limit: ((0.5 - eb) / 3.0).max(0.0),
    })
}
