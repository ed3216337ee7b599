use super::code::ExpansionCode;
use crate::error::{Error, Result};
use crate::infotheory::{mi_signed_sum, DiscretePmf};
use crate::EavSign;
use std::collections::HashMap;

/// Cap on the number of `(X1, X2)` pairs enumerated.
pub const MAX_JOINT_PAIRS: u64 = 1 << 22;

/// Exact eavesdropper leakage of a whole expansion codeword against the sum
/// of per-digit leakages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageCheck {
    /// `I(X1; X1 ± X2)` in bits.
    pub leakage: f64,
    /// `sum_i I(a_{1,i}; a_{1,i} ± a_{2,i})`, equal to `M f(floor(Q))` for
    /// uniform digits.
    pub digit_bound: f64,
    pub slack: f64,
}

/// Distribution of one user's codeword `sum_i a_i w_i` (units of `sqrt(P0)`).
fn codeword_pmf(code: &ExpansionCode, user: usize) -> Result<DiscretePmf> {
    let pmf = code.digit_pmf(user);
    let mut dist = vec![(0.0, 1.0)];
    for pos in 0..code.num_digits() {
        let w = code.user_weight(pos);
        dist = dist
            .iter()
            .flat_map(|&(v, p)| {
                pmf.iter()
                    .enumerate()
                    .map(move |(a, &pa)| (v + w * a as f64, p * pa))
            })
            .filter(|&(_, p)| p > 0.0)
            .collect();
    }
    DiscretePmf::from_weighted(dist)
}

/// `H` of `X1 ± X2` by exact enumeration, keyed on a fine grid.
fn sum_entropy(x1: &DiscretePmf, x2: &DiscretePmf, sign: EavSign) -> f64 {
    let s = sign.as_f64();
    let mut counts: HashMap<i64, f64> = HashMap::new();
    for (a, pa) in x1.iter() {
        for (b, pb) in x2.iter() {
            *counts
                .entry(((a + s * b) * 1e6).round() as i64)
                .or_insert(0.0) += pa * pb;
        }
    }
    let probs: Vec<f64> = counts.into_values().collect();
    crate::infotheory::entropy_of_probs(&probs)
}

/// Computes `I(X1; X1 ± X2) = H(X1 ± X2) - H(X2)` over the full digit
/// vectors and checks it against the digit-wise sum.
pub fn leakage_cross_check(code: &ExpansionCode, sign: EavSign) -> Result<LeakageCheck> {
    let pairs = (code.alphabet() as f64).powi(2 * code.num_digits() as i32);
    if pairs > MAX_JOINT_PAIRS as f64 {
        return Err(Error::ResourceLimit(format!(
            "{pairs} codeword pairs exceed the enumeration cap of {MAX_JOINT_PAIRS}"
        )));
    }
    let x1 = codeword_pmf(code, 0)?;
    let x2 = codeword_pmf(code, 1)?;
    let leakage = (sum_entropy(&x1, &x2, sign) - x2.entropy()).max(0.0);
    let support: Vec<f64> = (0..code.alphabet()).map(|a| a as f64).collect();
    let a1 = DiscretePmf::new(support.clone(), code.digit_pmf(0).to_vec())?;
    let a2 = DiscretePmf::new(support, code.digit_pmf(1).to_vec())?;
    let per_digit = mi_signed_sum(&a1, &a2, sign);
    let digit_bound = per_digit * code.num_digits() as f64;
    if leakage > digit_bound + 1e-9 {
        return Err(Error::Invariant(format!(
            "codeword leakage {leakage} exceeds the digit-wise sum {digit_bound}"
        )));
    }
    Ok(LeakageCheck {
        leakage,
        digit_bound,
        slack: digit_bound - leakage,
    })
}
