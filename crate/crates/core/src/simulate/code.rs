use crate::error::{Error, Result};
use std::cmp::Ordering;

/// Largest constellation enumerated by the brute-force decoder and the
/// exhaustive audit.
pub const MAX_CONSTELLATION: u64 = 1 << 20;

/// Which digit positions carry data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DigitMask {
    /// Every level of a base-`Q` expansion; the two users interleave.
    All,
    /// Binary digits on every third power of two, at cross gain 1.5.
    EveryThird,
}

/// A group of digits that share one power level at the receiver. Its
/// composite values are sorted and kept with the digit tuples that produce
/// them.
/// `(user, digit position, digit)`.
type DigitRef = (usize, usize, usize);

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Level {
    pub weight: f64,
    pub values: Vec<f64>,
    /// Digits behind each value, one entry per value.
    pub tuples: Vec<Vec<DigitRef>>,
}

/// Integer expansion code in units of `sqrt(P0)`.
///
/// `X_k = sqrt(P0) sum_i a_{k,i} w_i` with digits `a_{k,i}` in
/// `{0, ..., D - 1}`. The receiver sees `X1 + c X2` and resolves every
/// digit of both users.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCode {
    q: f64,
    m: usize,
    p0: f64,
    alphabet: usize,
    mask: DigitMask,
    /// Digit distributions of the two users over `{0, ..., D - 1}`.
    pmfs: [Vec<f64>; 2],
    pub(crate) levels: Vec<Level>,
    min_distance: f64,
    monotone: bool,
}

impl ExpansionCode {
    /// `Q`-level expansion with `M` digits per user and alphabet `floor(Q)`.
    pub fn new(q: f64, m: usize, p0: f64) -> Result<Self> {
        if !(q.is_finite() && q >= 2.0) {
            return Err(Error::Domain(format!(
                "expansion scheme needs Q >= 2, got {q}"
            )));
        }
        let d = q.floor() as usize;
        let uniform = vec![1.0 / d as f64; d];
        Self::build(q, m, p0, d, DigitMask::All, [uniform.clone(), uniform])
    }

    /// Binary digits at levels `8^j` for the cross gain 1.5.
    pub fn theorem8(m: usize, p0: f64) -> Result<Self> {
        Self::build(
            2.0,
            m,
            p0,
            2,
            DigitMask::EveryThird,
            [vec![0.5; 2], vec![0.5; 2]],
        )
    }

    /// Replaces the uniform digit distributions.
    pub fn with_digit_pmfs(self, pmf1: Vec<f64>, pmf2: Vec<f64>) -> Result<Self> {
        for pmf in [&pmf1, &pmf2] {
            let total: f64 = pmf.iter().sum();
            if pmf.len() != self.alphabet
                || pmf.iter().any(|&p| !(p >= 0.0))
                || (total - 1.0).abs() > 1e-12
            {
                return Err(Error::InvalidPmf(format!(
                    "digit pmf must have {} nonnegative entries summing to 1",
                    self.alphabet
                )));
            }
        }
        Self::build(
            self.q,
            self.m,
            self.p0,
            self.alphabet,
            self.mask,
            [pmf1, pmf2],
        )
    }

    fn build(
        q: f64,
        m: usize,
        p0: f64,
        alphabet: usize,
        mask: DigitMask,
        pmfs: [Vec<f64>; 2],
    ) -> Result<Self> {
        if m < 1 {
            return Err(Error::Domain("at least one digit is required".into()));
        }
        if !(p0.is_finite() && p0 > 0.0) {
            return Err(Error::Domain(format!("P0 must be positive, got {p0}")));
        }
        let points = (alphabet as f64).powi(2 * m as i32);
        if !points.is_finite() || q.powi(2 * m as i32).is_infinite() {
            return Err(Error::ResourceLimit(
                "expansion too deep for f64 arithmetic".into(),
            ));
        }
        let levels = match mask {
            DigitMask::All => (0..2 * m)
                .rev()
                .map(|j| Level {
                    weight: q.powi(j as i32),
                    values: (0..alphabet).map(|a| a as f64).collect(),
                    tuples: (0..alphabet).map(|a| vec![(j % 2, j / 2, a)]).collect(),
                })
                .collect(),
            DigitMask::EveryThird => {
                let mut pairs: Vec<(f64, Vec<DigitRef>)> = Vec::new();
                for a2 in 0..2 {
                    for a1 in 0..2 {
                        pairs.push((a1 as f64 + 1.5 * a2 as f64, vec![(0, 0, a1), (1, 0, a2)]));
                    }
                }
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
                (0..m)
                    .rev()
                    .map(|j| Level {
                        weight: 8f64.powi(j as i32),
                        values: pairs.iter().map(|p| p.0).collect(),
                        tuples: pairs
                            .iter()
                            .map(|p| p.1.iter().map(|&(u, _, a)| (u, j, a)).collect())
                            .collect(),
                    })
                    .collect()
            }
        };
        let mut code = ExpansionCode {
            q,
            m,
            p0,
            alphabet,
            mask,
            pmfs,
            levels,
            min_distance: 0.0,
            monotone: false,
        };
        code.audit()?;
        Ok(code)
    }

    /// Checks that each level's smallest gap exceeds the span of everything
    /// below it. This makes the constellation increasing in the
    /// most-significant-first order of level indices, and bounds its minimum
    /// distance from below; small constellations are also checked
    /// pairwise.
    fn audit(&mut self) -> Result<()> {
        let mut span_below = 0.0;
        let mut analytic_min = f64::INFINITY;
        let mut monotone = true;
        for level in self.levels.iter().rev() {
            let gap = level
                .values
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min);
            let margin = level.weight * gap - span_below;
            monotone &= margin > 0.0;
            analytic_min = analytic_min.min(margin);
            let span = level.values.last().unwrap() - level.values[0];
            span_below += level.weight * span;
        }
        self.monotone = monotone;
        self.min_distance = analytic_min;
        if self.size() <= MAX_CONSTELLATION as f64 {
            let mut pts = self.enumerate();
            pts.sort_by(|a, b| a.total_cmp(b));
            let exact = pts
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min);
            if monotone && exact + 1e-9 * exact.abs().max(1.0) < analytic_min {
                return Err(Error::Invariant(format!(
                    "pairwise minimum distance {exact} below the level bound {analytic_min}"
                )));
            }
            self.min_distance = exact;
        } else if !monotone {
            return Err(Error::ResourceLimit(
                "constellation fails the level audit and is too large for brute force".into(),
            ));
        }
        Ok(())
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn num_digits(&self) -> usize {
        self.m
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn mask(&self) -> DigitMask {
        self.mask
    }

    pub fn digit_pmf(&self, user: usize) -> &[f64] {
        &self.pmfs[user]
    }

    /// Cross gain the receiver must see, `Q` for the plain expansion and
    /// 1.5 for the sparse binary code.
    pub fn cross_gain(&self) -> f64 {
        match self.mask {
            DigitMask::All => self.q,
            DigitMask::EveryThird => 1.5,
        }
    }

    /// Minimum distance of the received constellation in units of
    /// `sqrt(P0)`.
    pub fn min_distance(&self) -> f64 {
        self.min_distance
    }

    /// True when the most-significant-first decoder is exact ML.
    pub fn greedy_is_ml(&self) -> bool {
        self.monotone
    }

    /// Number of received constellation points.
    pub fn size(&self) -> f64 {
        self.levels.iter().map(|l| l.values.len() as f64).product()
    }

    /// Weight of digit `pos` of `user` in that user's own signal, in units
    /// of `sqrt(P0)`.
    pub fn user_weight(&self, pos: usize) -> f64 {
        match self.mask {
            DigitMask::All => self.q.powi(2 * pos as i32),
            DigitMask::EveryThird => 8f64.powi(pos as i32),
        }
    }

    /// Received value, in units of `sqrt(P0)`, of the level indices `idx`
    /// (most significant level first).
    pub fn value(&self, idx: &[usize]) -> f64 {
        self.levels
            .iter()
            .zip(idx)
            .map(|(l, &i)| l.weight * l.values[i])
            .sum()
    }

    fn enumerate(&self) -> Vec<f64> {
        let mut out = vec![0.0];
        for level in &self.levels {
            out = out
                .iter()
                .flat_map(|&v| level.values.iter().map(move |&x| v + level.weight * x))
                .collect();
        }
        out
    }

    /// Exact ML decision for `r` (units of `sqrt(P0)`), ties to the smaller
    /// point.
    pub fn decode(&self, r: f64) -> Vec<usize> {
        if self.monotone {
            self.decode_greedy(r)
        } else {
            self.decode_brute(r)
        }
    }

    /// Most-significant-first descent to the largest point `<= r`, then a
    /// comparison with its successor.
    pub fn decode_greedy(&self, r: f64) -> Vec<usize> {
        let n = self.levels.len();
        let mut min_below = vec![0.0; n + 1];
        for j in (0..n).rev() {
            min_below[j] = min_below[j + 1] + self.levels[j].weight * self.levels[j].values[0];
        }
        let mut idx = vec![0usize; n];
        let mut partial = 0.0;
        for (j, level) in self.levels.iter().enumerate() {
            let rest = min_below[j + 1];
            let fits = level
                .values
                .iter()
                .rposition(|&v| partial + level.weight * v + rest <= r);
            match fits {
                Some(i) => {
                    idx[j] = i;
                    partial += level.weight * level.values[i];
                }
                // r lies below the smallest point
                None => return vec![0; n],
            }
        }
        let mut next = idx.clone();
        let mut carried = true;
        for j in (0..n).rev() {
            if next[j] + 1 < self.levels[j].values.len() {
                next[j] += 1;
                carried = false;
                break;
            }
            next[j] = 0;
        }
        if carried {
            return idx;
        }
        let lo = (r - self.value(&idx)).abs();
        let hi = (self.value(&next) - r).abs();
        if hi < lo {
            next
        } else {
            idx
        }
    }

    /// Argmin over every constellation point, first minimum in level-index
    /// order among equal distances.
    pub fn decode_brute(&self, r: f64) -> Vec<usize> {
        let n = self.levels.len();
        let mut idx = vec![0usize; n];
        let mut best = (f64::INFINITY, 0.0, idx.clone());
        loop {
            let v = self.value(&idx);
            let d = (r - v).abs();
            let better = match d.partial_cmp(&best.0) {
                Some(Ordering::Less) => true,
                Some(Ordering::Equal) => v < best.1,
                _ => false,
            };
            if better {
                best = (d, v, idx.clone());
            }
            let mut j = n;
            loop {
                if j == 0 {
                    return best.2;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < self.levels[j].values.len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }

    /// Digits of both users behind the level indices `idx`, as
    /// `[user][position]`.
    pub fn digits(&self, idx: &[usize]) -> [Vec<usize>; 2] {
        let mut out = [vec![0; self.m], vec![0; self.m]];
        for (level, &i) in self.levels.iter().zip(idx) {
            for &(u, pos, a) in &level.tuples[i] {
                out[u][pos] = a;
            }
        }
        out
    }

    /// Level indices for the given digits of both users.
    pub fn level_indices(&self, digits: &[Vec<usize>; 2]) -> Vec<usize> {
        self.levels
            .iter()
            .map(|level| {
                level
                    .tuples
                    .iter()
                    .position(|t| t.iter().all(|&(u, pos, a)| digits[u][pos] == a))
                    .expect("every digit combination is a composite value")
            })
            .collect()
    }
}
