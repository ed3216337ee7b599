//! The two-user Gaussian wiretap channel with a cooperative jammer.
//!
//! The physical model is
//!
//! ```text
//! Y1 = X1~ + sqrt(a) X2 + Z1
//! Y2 = sqrt(b) X1~ ± X2 + Z2
//! ```
//!
//! After scaling the source signal by `sqrt(b)` the legitimate receiver sees
//! `X1 + sqrt(ab) X2 + sqrt(b) Z1`, so only the product `ab` and the
//! eavesdropper sign matter for the coding schemes. [`CanonicalChannel`] holds
//! that scaled form.

use crate::error::{Error, Result};

/// Default absolute tolerance for "is `q * cross` an integer" tests.
pub const INTEGER_TOL: f64 = 1e-9;

/// Sign of the jammer term at the eavesdropper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EavSign {
    Plus,
    Minus,
}

impl EavSign {
    pub fn as_f64(self) -> f64 {
        match self {
            EavSign::Plus => 1.0,
            EavSign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            EavSign::Plus => '+',
            EavSign::Minus => '-',
        }
    }
}

impl std::str::FromStr for EavSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "plus" | "+1" | "1" => Ok(EavSign::Plus),
            "-" | "minus" | "-1" => Ok(EavSign::Minus),
            other => Err(Error::Parse(format!("unknown eavesdropper sign `{other}`"))),
        }
    }
}

/// Squared cross gains of the physical channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGains {
    /// Squared gain jammer -> legitimate receiver.
    pub a: f64,
    /// Squared gain source -> eavesdropper.
    pub b: f64,
    pub eav_sign: EavSign,
    /// Phase `psi_a + psi_b` of the complex-gain model, if any.
    pub phase_psi: Option<f64>,
}

impl ChannelGains {
    pub fn new(a: f64, b: f64, eav_sign: EavSign) -> Result<Self> {
        let gains = ChannelGains {
            a,
            b,
            eav_sign,
            phase_psi: None,
        };
        gains.validate()?;
        Ok(gains)
    }

    pub fn with_phase(mut self, psi: f64) -> Self {
        self.phase_psi = Some(psi);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a > 0.0) || !(self.b.is_finite() && self.b > 0.0) {
            return Err(Error::NotFullyConnected(format!(
                "gains must be positive, got a = {}, b = {}",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

/// The scaled channel `Y1 = X1 + cross_coeff X2 + sqrt(rx_noise_var) Z1`,
/// `Y2 = X1 ± X2 + Z2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalChannel {
    pub cross_coeff: f64,
    pub rx_noise_var: f64,
    pub eav_sign: EavSign,
}

impl CanonicalChannel {
    /// Builds a canonical channel directly from its cross coefficient.
    pub fn new(cross_coeff: f64, rx_noise_var: f64, eav_sign: EavSign) -> Result<Self> {
        if !(cross_coeff.is_finite() && cross_coeff > 0.0) {
            return Err(Error::NotFullyConnected(format!(
                "cross coefficient must be positive, got {cross_coeff}"
            )));
        }
        if !(rx_noise_var.is_finite() && rx_noise_var > 0.0) {
            return Err(Error::Domain(format!(
                "receiver noise variance must be positive, got {rx_noise_var}"
            )));
        }
        Ok(CanonicalChannel {
            cross_coeff,
            rx_noise_var,
            eav_sign,
        })
    }
}

/// Rescales the physical channel so that the source link to the eavesdropper
/// has unit gain.
pub fn scale_to_canonical(gains: &ChannelGains) -> Result<CanonicalChannel> {
    gains.validate()?;
    Ok(CanonicalChannel {
        cross_coeff: (gains.a * gains.b).sqrt(),
        rx_noise_var: gains.b,
        eav_sign: gains.eav_sign,
    })
}

/// True for the degraded configuration `sqrt(ab) = 1` with a `+` sign at the
/// eavesdropper.
pub fn is_degraded(ch: &CanonicalChannel, tol: f64) -> bool {
    (ch.cross_coeff - 1.0).abs() <= tol && ch.eav_sign == EavSign::Plus
}

/// `cross = p/q + gamma/q` with integers `p, q >= 1` and `0 < |gamma| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalDecomposition {
    pub p: u64,
    pub q: u64,
    pub gamma: f64,
}

impl RationalDecomposition {
    pub fn value(&self) -> f64 {
        (self.p as f64 + self.gamma) / self.q as f64
    }
}

/// All decompositions with `q <= max_q`, using the default integer tolerance.
pub fn decompose(cross_coeff: f64, max_q: u64) -> Vec<RationalDecomposition> {
    decompose_with_tol(cross_coeff, max_q, INTEGER_TOL)
}

/// All decompositions with `q <= max_q`, sorted by `(q, p)`.
///
/// Only `p = floor(q c)` and `p = ceil(q c)` can give `|gamma| < 1`. A
/// candidate whose `|gamma|` is within `tol` of zero is treated as `gamma = 0`
/// and dropped.
pub fn decompose_with_tol(cross_coeff: f64, max_q: u64, tol: f64) -> Vec<RationalDecomposition> {
    if !(cross_coeff.is_finite() && cross_coeff > 0.0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for q in 1..=max_q {
        let scaled = q as f64 * cross_coeff;
        let lo = scaled.floor();
        let hi = scaled.ceil();
        for p in [lo, hi] {
            if p < 1.0 {
                continue;
            }
            let gamma = scaled - p;
            if gamma.abs() <= tol || gamma.abs() >= 1.0 {
                continue;
            }
            out.push(RationalDecomposition {
                p: p as u64,
                q,
                gamma,
            });
        }
    }
    out.sort_by_key(|d| (d.q, d.p));
    out.dedup_by(|x, y| x.q == y.q && x.p == y.p);
    out
}
