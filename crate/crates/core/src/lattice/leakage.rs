use super::{coset_index_of_sum, enumerate_codebook, mod_lattice, NestedPair, Point};
use crate::error::{Error, Result};
use crate::infotheory::entropy_of_probs;
use crate::EavSign;
use std::collections::{HashMap, HashSet};

/// Largest codebook for which the `index^2` joint enumeration is attempted.
pub const MAX_LEAKAGE_INDEX: u64 = 10_000;

/// Exact leakage of one nested-lattice layer to an eavesdropper observing
/// `X1 ± X2`, together with the terms of the `H(T) <= N` chain.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedLeakage {
    /// `I(u1; X1 ± X2)` in bits.
    pub leakage: f64,
    /// `I(u1; (u1 ± u2) mod coarse)`, zero for a group code.
    pub mod_sum_leakage: f64,
    /// Number of distinct coset labels `T` observed with `K = 2`.
    pub distinct_t: usize,
    pub dim: usize,
    pub codebook_size: usize,
}

impl NestedLeakage {
    /// `mod_sum_leakage + log2(distinct_t)`, the bound on `leakage`.
    pub fn chain_bound(&self) -> f64 {
        self.mod_sum_leakage + (self.distinct_t as f64).log2()
    }
}

fn key(p: &Point) -> Vec<i64> {
    p.iter().map(|v| (v * 1e9).round() as i64).collect()
}

fn entropy_of_counts<K>(counts: &HashMap<K, u64>, total: u64) -> f64 {
    let probs: Vec<f64> = counts.values().map(|&c| c as f64 / total as f64).collect();
    entropy_of_probs(&probs)
}

/// `I(u1; X1 ± X2)` with `Xi = (ui + di) mod coarse` and `u1`, `u2`
/// independent and uniform over the codebook.
///
/// Given `u1`, the observation is a shift of `±X2`, which is uniform over
/// `index` distinct values, so the leakage is `H(X1 ± X2) - log2(index)`.
pub fn exact_nested_leakage(
    np: &NestedPair,
    sign: EavSign,
    dithers: (&Point, &Point),
) -> Result<NestedLeakage> {
    if np.index() > MAX_LEAKAGE_INDEX {
        return Err(Error::ResourceLimit(format!(
            "joint enumeration of {}^2 codeword pairs exceeds the cap",
            np.index()
        )));
    }
    let n = np.dim();
    for d in [dithers.0, dithers.1] {
        if d.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: d.len(),
            });
        }
    }
    let codebook = enumerate_codebook(np)?;
    let size = codebook.len();
    let s = sign.as_f64();
    let x1: Vec<Point> = codebook
        .iter()
        .map(|c| mod_lattice(&(&c.u + dithers.0), &np.coarse))
        .collect::<Result<_>>()?;
    let x2: Vec<Point> = codebook
        .iter()
        .map(|c| mod_lattice(&(&c.u + dithers.1), &np.coarse))
        .collect::<Result<_>>()?;

    let mut sums: HashMap<Vec<i64>, u64> = HashMap::new();
    let mut mod_sums: HashMap<Vec<i64>, u64> = HashMap::new();
    let mut labels: HashSet<u64> = HashSet::new();
    for (i, a) in x1.iter().enumerate() {
        for (j, b) in x2.iter().enumerate() {
            let obs = a + b * s;
            *sums.entry(key(&obs)).or_insert(0) += 1;
            let (_, t) = coset_index_of_sum(&obs, &np.coarse, 2)?;
            labels.insert(t.t);
            let ms = mod_lattice(&(&codebook[i].u + &codebook[j].u * s), &np.coarse)?;
            *mod_sums.entry(key(&ms)).or_insert(0) += 1;
        }
    }
    let total = (size * size) as u64;
    let log_size = (size as f64).log2();
    Ok(NestedLeakage {
        leakage: (entropy_of_counts(&sums, total) - log_size).max(0.0),
        mod_sum_leakage: (entropy_of_counts(&mod_sums, total) - log_size).max(0.0),
        distinct_t: labels.len(),
        dim: n,
        codebook_size: size,
    })
}
