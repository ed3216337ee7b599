//! Exact entropy and mutual information over finite real-valued alphabets.
//!
//! Everything is in bits. The eavesdropper leakage of the integer-lattice
//! schemes reduces to `I(X; X ± Y)` for independent discrete `X`, `Y`, which is
//! `H(X ± Y) - H(Y)`.

use crate::error::{Error, Result};
use crate::EavSign;

/// Values closer than this are treated as the same support point.
pub const MERGE_TOL: f64 = 1e-12;

/// Size above which [`f_leakage`] switches from direct summation to the
/// hyperfactorial asymptotic expansion.
const DIRECT_SUM_LIMIT: f64 = 1e6;

/// `ln A` for the Glaisher–Kinkelin constant.
const LN_GLAISHER: f64 = 0.248_754_477_033_784_26;

/// A probability mass function on a finite, strictly increasing support.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePmf {
    support: Vec<f64>,
    probs: Vec<f64>,
}

impl DiscretePmf {
    /// Validates and wraps a support/probability pair.
    pub fn new(support: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidPmf("empty support".into()));
        }
        if support.len() != probs.len() {
            return Err(Error::InvalidPmf(format!(
                "support has {} values but {} probabilities",
                support.len(),
                probs.len()
            )));
        }
        if support.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPmf("non-finite support value".into()));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPmf(
                "support must be strictly increasing".into(),
            ));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidPmf(
                "probabilities must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPmf(format!("probabilities sum to {total}")));
        }
        Ok(DiscretePmf { support, probs })
    }

    /// Builds a pmf from unnormalized `(value, weight)` pairs, merging values
    /// that agree within [`MERGE_TOL`].
    pub fn from_weighted(mut pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs
            .iter()
            .any(|(v, w)| !v.is_finite() || !(w.is_finite() && *w >= 0.0))
        {
            return Err(Error::InvalidPmf(
                "non-finite value or negative weight".into(),
            ));
        }
        let total: f64 = pairs.iter().map(|(_, w)| w).sum();
        if !(total > 0.0) {
            return Err(Error::InvalidPmf("total weight must be positive".into()));
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut support: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut probs: Vec<f64> = Vec::with_capacity(pairs.len());
        for (v, w) in pairs {
            match support.last() {
                Some(&last) if (v - last).abs() <= MERGE_TOL => {
                    *probs.last_mut().unwrap() += w;
                }
                _ => {
                    support.push(v);
                    probs.push(w);
                }
            }
        }
        probs.iter_mut().for_each(|p| *p /= total);
        Ok(DiscretePmf { support, probs })
    }

    /// Uniform over the given distinct values.
    pub fn uniform(values: &[f64]) -> Result<Self> {
        Self::from_weighted(values.iter().map(|&v| (v, 1.0)).collect())
    }

    /// Uniform over `{0, 1, ..., q - 1}`.
    pub fn uniform_int(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidPmf("alphabet size must be at least 1".into()));
        }
        let values: Vec<f64> = (0..q).map(|k| k as f64).collect();
        Self::uniform(&values)
    }

    /// `P(1) = p`, `P(0) = 1 - p`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidPmf(format!(
                "Bernoulli parameter {p} outside [0, 1]"
            )));
        }
        Self::new(vec![0.0, 1.0], vec![1.0 - p, p])
    }

    pub fn point_mass(value: f64) -> Result<Self> {
        Self::new(vec![value], vec![1.0])
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.support.iter().copied().zip(self.probs.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(v, p)| v * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.iter().map(|(v, p)| p * (v - mu) * (v - mu)).sum()
    }

    pub fn entropy(&self) -> f64 {
        entropy_of_probs(&self.probs)
    }
}

/// Shannon entropy in bits of a probability vector, with `0 log 0 = 0`.
pub fn entropy_of_probs(probs: &[f64]) -> f64 {
    let h: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    h.max(0.0)
}

pub fn entropy(pmf: &DiscretePmf) -> f64 {
    pmf.entropy()
}

/// Exact distribution of `X + sign * Y` for independent `X`, `Y`.
pub fn signed_sum_pmf(x: &DiscretePmf, y: &DiscretePmf, sign: EavSign) -> DiscretePmf {
    let s = sign.as_f64();
    let mut pairs = Vec::with_capacity(x.len() * y.len());
    for (xv, xp) in x.iter() {
        for (yv, yp) in y.iter() {
            pairs.push((xv + s * yv, xp * yp));
        }
    }
    DiscretePmf::from_weighted(pairs).expect("product of valid pmfs is a valid pmf")
}

/// `I(X; X ± Y) = H(X ± Y) - H(Y)` for independent `X`, `Y`.
pub fn mi_signed_sum(x: &DiscretePmf, y: &DiscretePmf, sign: EavSign) -> f64 {
    (signed_sum_pmf(x, y, sign).entropy() - y.entropy()).max(0.0)
}

/// `f(Q) = I(X1; X1 ± X2)` for `X1`, `X2` independent and uniform over
/// `{0, ..., Q - 1}`.
///
/// The sum has the triangular counts `1, 2, ..., Q, ..., 2, 1` over `Q^2`, so
/// `f(Q) = log2 Q - (2 sum_{k<Q} k log2 k + Q log2 Q) / Q^2`. The difference
/// has the same counts, hence the same value for either sign.
pub fn f_leakage(q: u64) -> Result<f64> {
    if q < 1 {
        return Err(Error::Domain("f(Q) needs Q >= 1".into()));
    }
    f_leakage_real(q as f64)
}

/// [`f_leakage`] for alphabet sizes that may exceed `u64`. `q` must be an
/// integer value `>= 1`.
pub fn f_leakage_real(q: f64) -> Result<f64> {
    if !(q.is_finite() && q >= 1.0 && q.fract() == 0.0) {
        return Err(Error::Domain(format!(
            "f(Q) needs an integer Q >= 1, got {q}"
        )));
    }
    if q <= DIRECT_SUM_LIMIT {
        let n = q as u64;
        let mut tail = 0.0;
        for k in 2..n {
            let k = k as f64;
            tail += k * k.log2();
        }
        let total = 2.0 * tail + q * q.log2();
        Ok((q.log2() - total / (q * q)).max(0.0))
    } else {
        // sum_{k<=n} k ln k = (n^2/2 + n/2 + 1/12) ln n - n^2/4 + ln A + O(n^-2)
        let ln2 = std::f64::consts::LN_2;
        Ok(0.5 / ln2 - (q.ln() / 6.0 + 2.0 * LN_GLAISHER) / (q * q * ln2))
    }
}

/// The upper bound `1/2 log2(2 pi e (1/6 - 1/(12 Q^2)))` on `f(Q)`.
pub fn f_leakage_bound(q: f64) -> f64 {
    let e = std::f64::consts::E;
    let pi = std::f64::consts::PI;
    0.5 * (2.0 * pi * e * (1.0 / 6.0 - 1.0 / (12.0 * q * q))).log2()
}

/// `1/2 log2(pi e / 3)`, the `Q`-independent relaxation of [`f_leakage_bound`].
pub fn f_leakage_limit_bound() -> f64 {
    0.5 * (std::f64::consts::PI * std::f64::consts::E / 3.0).log2()
}

/// Maximizer of `I(a1; a1 + a2) - I(a1; a1 - a2)` over independent Bernoulli
/// digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymmetricOptimum {
    pub p1: f64,
    pub p2: f64,
    pub gap: f64,
}

impl AsymmetricOptimum {
    /// `H(a1 + a2)` at the optimum.
    pub fn sum_entropy(&self) -> f64 {
        let (q1, q2) = (1.0 - self.p1, 1.0 - self.p2);
        entropy_of_probs(&[q1 * q2, self.p1 * q2 + q1 * self.p2, self.p1 * self.p2])
    }
}

/// `I(a1; a1 + a2) - I(a1; a1 - a2)` for `a1 ~ Bern(p1)`, `a2 ~ Bern(p2)`.
///
/// Both informations subtract the same `H(a2)`, so the gap is
/// `H(a1 + a2) - H(a1 - a2)`.
pub fn asymmetric_gap(p1: f64, p2: f64) -> f64 {
    let (q1, q2) = (1.0 - p1, 1.0 - p2);
    let plus = [q1 * q2, p1 * q2 + q1 * p2, p1 * p2];
    let minus = [q1 * p2, q1 * q2 + p1 * p2, p1 * q2];
    entropy_of_probs(&plus) - entropy_of_probs(&minus)
}

/// Grid search over `(0, 1)^2` followed by coordinate-wise golden-section
/// refinement.
///
/// The objective is invariant under `(p1, p2) -> (1 - p1, 1 - p2)`; the
/// representative with the smaller `p1` is returned.
pub fn optimize_asymmetric_leakage(
    grid_step: f64,
    refine_iters: usize,
) -> Result<AsymmetricOptimum> {
    if !(grid_step > 0.0 && grid_step <= 0.01) {
        return Err(Error::Domain(format!(
            "grid step must lie in (0, 0.01], got {grid_step}"
        )));
    }
    let n = (1.0 / grid_step).round() as usize;
    let mut best = (f64::NEG_INFINITY, 0.5, 0.5);
    for i in 1..n {
        let p1 = i as f64 / n as f64;
        for j in 1..n {
            let p2 = j as f64 / n as f64;
            let g = asymmetric_gap(p1, p2);
            if g > best.0 {
                best = (g, p1, p2);
            }
        }
    }
    let (_, mut p1, mut p2) = best;
    let width = 1.0 / n as f64;
    for _ in 0..refine_iters {
        p1 = golden_max(|x| asymmetric_gap(x, p2), p1 - width, p1 + width);
        p2 = golden_max(|y| asymmetric_gap(p1, y), p2 - width, p2 + width);
    }
    if p1 > 0.5 {
        p1 = 1.0 - p1;
        p2 = 1.0 - p2;
    }
    Ok(AsymmetricOptimum {
        p1,
        p2,
        gap: asymmetric_gap(p1, p2),
    })
}

fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let eps = 1e-12;
    let (mut a, mut b) = (lo.max(eps), hi.min(1.0 - eps));
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Entropy of a pmf given by integer counts, evaluated independently of
    /// the library routines.
    fn count_entropy(counts: &[u64]) -> f64 {
        let total: u64 = counts.iter().sum();
        let t = total as f64;
        counts
            .iter()
            .map(|&c| {
                let p = c as f64 / t;
                -p * p.log2()
            })
            .sum()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(DiscretePmf::uniform_int(4).unwrap().entropy(), 2.0);
        assert_eq!(DiscretePmf::point_mass(3.5).unwrap().entropy(), 0.0);
        let p = DiscretePmf::new(vec![0.0, 1.0, 2.0], vec![0.25, 0.5, 0.25]).unwrap();
        assert!((p.entropy() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn invalid_pmfs_are_rejected() {
        assert!(DiscretePmf::new(vec![0.0, 1.0], vec![0.5, 0.6]).is_err());
        assert!(DiscretePmf::new(vec![1.0, 0.0], vec![0.5, 0.5]).is_err());
        assert!(DiscretePmf::new(vec![0.0, 1.0], vec![1.5, -0.5]).is_err());
        assert!(DiscretePmf::new(vec![0.0], vec![0.5, 0.5]).is_err());
        assert!(DiscretePmf::new(vec![], vec![]).is_err());
    }

    #[test]
    fn coin_sums() {
        let c = DiscretePmf::uniform_int(2).unwrap();
        let plus = signed_sum_pmf(&c, &c, EavSign::Plus);
        assert_eq!(plus.support(), &[0.0, 1.0, 2.0]);
        assert_eq!(plus.probs(), &[0.25, 0.5, 0.25]);
        let minus = signed_sum_pmf(&c, &c, EavSign::Minus);
        assert_eq!(minus.support(), &[-1.0, 0.0, 1.0]);
        assert_eq!(minus.probs(), &[0.25, 0.5, 0.25]);
    }

    #[test]
    fn four_ary_sum_counts() {
        let u = DiscretePmf::uniform_int(4).unwrap();
        let s = signed_sum_pmf(&u, &u, EavSign::Plus);
        let counts: Vec<f64> = s.probs().iter().map(|p| p * 16.0).collect();
        assert_eq!(counts, vec![1.0, 2.0, 3.0, 4.0, 3.0, 2.0, 1.0]);
    }

    #[test]
    fn mi_examples() {
        let c = DiscretePmf::uniform_int(2).unwrap();
        assert!((mi_signed_sum(&c, &c, EavSign::Plus) - 0.5).abs() < 1e-15);
        let x = DiscretePmf::uniform_int(5).unwrap();
        let y = DiscretePmf::point_mass(7.0).unwrap();
        assert!((mi_signed_sum(&x, &y, EavSign::Plus) - 5f64.log2()).abs() < 1e-15);
        let t = DiscretePmf::uniform_int(3).unwrap();
        let expected = count_entropy(&[1, 2, 3, 2, 1]) - 3f64.log2();
        let got = mi_signed_sum(&t, &t, EavSign::Plus);
        assert!((got - expected).abs() < 1e-14);
        assert!((got - 0.6122).abs() < 1e-4);
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_leakage(1).unwrap(), 0.0);
        assert!((f_leakage(2).unwrap() - 0.5).abs() < 1e-15);
        let expected = count_entropy(&[1, 2, 3, 4, 3, 2, 1]) - 2.0;
        assert!((f_leakage(4).unwrap() - expected).abs() < 1e-14);
        assert!((f_leakage(4).unwrap() - 0.6556).abs() < 1e-4);
        assert!(matches!(f_leakage(0), Err(Error::Domain(_))));
    }

    #[test]
    fn f_matches_generic_enumeration_for_both_signs() {
        for q in 1..=40u64 {
            let u = DiscretePmf::uniform_int(q).unwrap();
            let f = f_leakage(q).unwrap();
            for sign in [EavSign::Plus, EavSign::Minus] {
                assert!((mi_signed_sum(&u, &u, sign) - f).abs() < 1e-12, "q = {q}");
            }
        }
    }

    #[test]
    fn asymptotic_branch_is_continuous_with_direct_sum() {
        let direct = f_leakage_real(1e6).unwrap();
        let asym = {
            let q = 1e6f64;
            0.5 / std::f64::consts::LN_2
                - (q.ln() / 6.0 + 2.0 * LN_GLAISHER) / (q * q * std::f64::consts::LN_2)
        };
        assert!((direct - asym).abs() < 1e-10);
        let huge = f_leakage_real(1e40).unwrap();
        assert!((huge - 0.5 / std::f64::consts::LN_2).abs() < 1e-15);
        assert!(f_leakage_real(2.5).is_err());
    }

    #[test]
    fn f_is_monotone_and_bounded() {
        let mut prev = 0.0;
        for q in 1..=2000u64 {
            let f = f_leakage(q).unwrap();
            assert!(f >= prev - 1e-15);
            assert!(f <= f_leakage_bound(q as f64) + 1e-12);
            assert!(f_leakage_bound(q as f64) <= f_leakage_limit_bound());
            assert!(f < 0.8);
            prev = f;
        }
    }

    #[test]
    fn gap_matches_generic_route() {
        for &(p1, p2) in &[(0.1443, 0.8557), (0.3, 0.6), (0.9, 0.05)] {
            let a1 = DiscretePmf::bernoulli(p1).unwrap();
            let a2 = DiscretePmf::bernoulli(p2).unwrap();
            let generic =
                mi_signed_sum(&a1, &a2, EavSign::Plus) - mi_signed_sum(&a1, &a2, EavSign::Minus);
            assert!((generic - asymmetric_gap(p1, p2)).abs() < 1e-14);
        }
    }

    #[test]
    fn gap_vanishes_for_fair_digits() {
        assert!(asymmetric_gap(0.5, 0.5).abs() < 1e-15);
    }

    #[test]
    fn optimizer_reproduces_reported_optimum() {
        let opt = optimize_asymmetric_leakage(0.001, 30).unwrap();
        assert!((opt.gap - 0.1095).abs() < 5e-4);
        assert!((opt.p1 - 0.1443).abs() < 2e-3);
        assert!((opt.p2 - 0.8557).abs() < 2e-3);
        assert!(optimize_asymmetric_leakage(0.02, 1).is_err());
    }

    fn pmf_strategy() -> impl Strategy<Value = DiscretePmf> {
        prop::collection::vec((-20i32..20, 0.01f64..1.0), 1..6).prop_map(|pairs| {
            DiscretePmf::from_weighted(
                pairs
                    .into_iter()
                    .map(|(v, w)| (v as f64 * 0.5, w))
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn sum_entropy_dominates(x in pmf_strategy(), y in pmf_strategy(), minus in any::<bool>()) {
            let sign = if minus { EavSign::Minus } else { EavSign::Plus };
            let s = signed_sum_pmf(&x, &y, sign).entropy();
            prop_assert!(s >= x.entropy().max(y.entropy()) - 1e-12);
        }

        #[test]
        fn gap_complement_symmetry(p1 in 0.001f64..0.999, p2 in 0.001f64..0.999) {
            prop_assert!((asymmetric_gap(p1, p2) - asymmetric_gap(1.0 - p1, 1.0 - p2)).abs() < 1e-12);
        }

        #[test]
        fn symmetric_jammer_makes_signs_agree(x in pmf_strategy(), half in prop::collection::vec(0.01f64..1.0, 1..4)) {
            // y symmetric about its midpoint
            let n = half.len();
            let mut pairs = Vec::new();
            for (i, w) in half.iter().enumerate() {
                pairs.push((i as f64, *w));
                pairs.push(((2 * n - 1 - i) as f64, *w));
            }
            let y = DiscretePmf::from_weighted(pairs).unwrap();
            let plus = mi_signed_sum(&x, &y, EavSign::Plus);
            let minus = mi_signed_sum(&x, &y, EavSign::Minus);
            prop_assert!((plus - minus).abs() < 1e-12);
        }
    }
}
