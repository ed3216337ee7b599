//! Closed-form rate, power and secure-degree-of-freedom calculators.

mod baselines;
mod integer;
mod nested;

pub use baselines::{
    adjusted_rate, adjusted_rate_scaled, capacity, complex_gain_rate, gaussian_baseline_limit,
    mismatch_penalty, ComplexRate,
};
pub use integer::{
    algebraic_irrational_rate, algebraic_irrational_sup, asymmetric_optimum, digit_error_bound,
    expansion_base, expansion_rate, expansion_sdof, theorem7_scheme, theorem8_scheme,
    AlgebraicPoint, ExpansionSdof, Orientation, RatePower, SchemeLimit,
};
pub use nested::{
    best_nested_sdof, best_nested_sdof_for_pairs, layer_rate, layered_allocation, nested_alpha,
    nested_alpha_other_root, nested_beta, nested_sdof, nested_sdof_unclamped, Layer,
    LayeredAllocation,
};

/// Default cap on the denominator searched by [`best_nested_sdof`].
pub const DEFAULT_MAX_Q: u64 = 20;

/// Power in decibels, `10 log10 P`.
pub fn to_db(power: f64) -> f64 {
    10.0 * power.log10()
}

/// Identifies the scheme behind a [`SchemeReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    Nested,
    Expansion,
    AlgebraicIrrational,
    AsymmetricBinary,
    SparseBinary,
    Gaussian,
    Mismatch,
    ComplexGain,
}

impl SchemeId {
    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Nested => "nested",
            SchemeId::Expansion => "expansion",
            SchemeId::AlgebraicIrrational => "algebraic",
            SchemeId::AsymmetricBinary => "theorem7",
            SchemeId::SparseBinary => "theorem8",
            SchemeId::Gaussian => "gaussian",
            SchemeId::Mismatch => "mismatch",
            SchemeId::ComplexGain => "complex",
        }
    }
}

/// A condition the result depends on, and whether it holds.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    pub name: &'static str,
    pub holds: bool,
    pub reason: String,
}

/// One evaluated scheme, ready for tabulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeReport {
    pub scheme: SchemeId,
    pub params: Vec<(&'static str, f64)>,
    pub secrecy_rate: f64,
    pub total_power: f64,
    pub sdof: f64,
    pub flags: Vec<Flag>,
}

impl SchemeReport {
    pub fn new(scheme: SchemeId, secrecy_rate: f64, total_power: f64, sdof: f64) -> Self {
        SchemeReport {
            scheme,
            params: Vec::new(),
            secrecy_rate: secrecy_rate.max(0.0),
            total_power,
            sdof: sdof.clamp(0.0, 1.0),
            flags: Vec::new(),
        }
    }

    pub fn param(mut self, name: &'static str, value: f64) -> Self {
        self.params.push((name, value));
        self
    }

    pub fn flag(mut self, name: &'static str, holds: bool, reason: impl Into<String>) -> Self {
        self.flags.push(Flag {
            name,
            holds,
            reason: reason.into(),
        });
        self
    }

    pub fn total_power_db(&self) -> f64 {
        to_db(self.total_power)
    }

    /// True when every flag holds.
    pub fn feasible(&self) -> bool {
        self.flags.iter().all(|f| f.holds)
    }
}

/// Report for a layered allocation, with the feasibility condition
/// `(1 - gamma^2) alpha > 1`.
pub fn nested_report(alloc: &LayeredAllocation) -> SchemeReport {
    let g2 = alloc.gamma * alloc.gamma;
    let margin = (1.0 - g2) * alloc.alpha;
    SchemeReport::new(
        SchemeId::Nested,
        alloc.secrecy_rate(),
        alloc.total_power(),
        alloc.sdof(),
    )
    .param("p", alloc.p as f64)
    .param("q", alloc.q as f64)
    .param("gamma", alloc.gamma)
    .param("M", alloc.num_layers() as f64)
    .flag(
        "feasible",
        margin > 1.0,
        format!("(1 - gamma^2) alpha = {margin}"),
    )
}

/// Report for one point of the algebraic-irrational family.
pub fn algebraic_report(p: f64, eps: f64, a: f64, b: f64) -> crate::Result<SchemeReport> {
    let pt = algebraic_irrational_rate(p, eps, a, b)?;
    Ok(SchemeReport::new(
        SchemeId::AlgebraicIrrational,
        pt.secrecy_rate,
        pt.total_power,
        pt.sdof_ratio(),
    )
    .param("P", p)
    .param("eps", eps)
    .param("Q", pt.q)
    .flag(
        "algebraic_irrational",
        true,
        "requires sqrt(ab) algebraic irrational (asserted by the caller)",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_clamps_and_flags() {
        let r = SchemeReport::new(SchemeId::Gaussian, -1.0, 100.0, 2.0).flag("x", false, "no");
        assert_eq!(r.secrecy_rate, 0.0);
        assert_eq!(r.sdof, 1.0);
        assert!((r.total_power_db() - 20.0).abs() < 1e-12);
        assert!(!r.feasible());
    }

    #[test]
    fn nested_report_is_feasible() {
        let a = layered_allocation(1, 1, 0.3, 1.0, 3).unwrap();
        let r = nested_report(&a);
        assert!(r.feasible());
        assert_eq!(r.scheme.name(), "nested");
        assert_eq!(r.params.len(), 4);
    }

    #[test]
    fn algebraic_report_carries_assertion() {
        let r = algebraic_report(1e12, 0.1, 1.0, 1.0).unwrap();
        assert_eq!(r.flags[0].name, "algebraic_irrational");
    }
}
