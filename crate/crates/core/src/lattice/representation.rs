//! Recovering a real sum of Voronoi-region points from its value modulo the
//! lattice plus a coset label.
//!
//! For `t_1, ..., t_K` in `V(L)` write `s = sum t_k` and `m = s mod L`. The
//! offset `m - s` is a lattice point; its class in `L / K L` (coordinates
//! modulo `K`) takes at most `K^N` values and, together with `m`, pins down
//! `s` because `s` lies in `K V(L)` and the translates of `K V(L)` by one
//! coset of `K L` tile space.

use super::{box_points, LatticeBasis, Point};
use crate::error::{Error, Result};
use crate::EavSign;

/// Largest `K^N` accepted by the encoder.
const MAX_COSETS: u64 = 1_000_000;

/// Coset label `T` in `1..=K^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RepIndex {
    pub t: u64,
    pub k: u64,
    pub n: usize,
}

impl RepIndex {
    pub fn new(t: u64, k: u64, n: usize) -> Result<Self> {
        let count = coset_count(k, n)?;
        if t < 1 || t > count {
            return Err(Error::Domain(format!(
                "coset label {t} outside 1..={count}"
            )));
        }
        Ok(RepIndex { t, k, n })
    }

    /// Coset digits (coordinates modulo `K`), most significant first.
    pub fn digits(&self) -> Vec<i64> {
        let mut rest = self.t - 1;
        let mut out = vec![0i64; self.n];
        for slot in out.iter_mut().rev() {
            *slot = (rest % self.k) as i64;
            rest /= self.k;
        }
        out
    }
}

fn coset_count(k: u64, n: usize) -> Result<u64> {
    let count = k
        .checked_pow(n as u32)
        .filter(|&c| c <= MAX_COSETS)
        .ok_or_else(|| Error::ResourceLimit(format!("K^N = {k}^{n} is too large")))?;
    Ok(count)
}

fn check_k(k: u64, n: usize) -> Result<()> {
    if !(2..=4).contains(&k) {
        return Err(Error::Domain(format!("K must be 2, 3 or 4, got {k}")));
    }
    coset_count(k, n).map(|_| ())
}

/// `(s mod L, T)` for an arbitrary real vector `s`, with no precondition on
/// how `s` was formed.
pub fn coset_index_of_sum(
    sum: &Point,
    lattice: &LatticeBasis,
    k: u64,
) -> Result<(Point, RepIndex)> {
    if k < 1 {
        return Err(Error::Domain("K must be positive".into()));
    }
    let n = lattice.dim();
    coset_count(k, n)?;
    let c = lattice.nearest_coords(sum)?;
    let m = sum - lattice.lattice_point(&c);
    // m - s = -G c
    let t = c
        .iter()
        .fold(0u64, |acc, &ci| acc * k + (-ci).rem_euclid(k as i64) as u64);
    Ok((m, RepIndex { t: t + 1, k, n }))
}

/// Encodes the sum of `K` points of `V(L)` as `(sum mod L, T)`.
pub fn representation_encode(
    points: &[Point],
    lattice: &LatticeBasis,
    k: u64,
) -> Result<(Point, RepIndex)> {
    let signs = vec![EavSign::Plus; points.len()];
    representation_encode_signed(points, &signs, lattice, k)
}

/// Like [`representation_encode`] for `sum sign_k t_k`; since `-L = L`, each
/// `-t_k` is again a fundamental-region point of the lattice.
pub fn representation_encode_signed(
    points: &[Point],
    signs: &[EavSign],
    lattice: &LatticeBasis,
    k: u64,
) -> Result<(Point, RepIndex)> {
    let n = lattice.dim();
    check_k(k, n)?;
    if points.len() as u64 != k || signs.len() != points.len() {
        return Err(Error::Precondition(format!(
            "expected {k} points and signs, got {} and {}",
            points.len(),
            signs.len()
        )));
    }
    let mut sum = Point::zeros(n);
    for (t, s) in points.iter().zip(signs) {
        if !lattice.in_voronoi(t)? {
            return Err(Error::Precondition(format!(
                "point {:?} is outside the fundamental region",
                t.as_slice()
            )));
        }
        sum += t * s.as_f64();
    }
    coset_index_of_sum(&sum, lattice, k)
}

/// Recovers `sum t_k` from `(m, T)`.
///
/// Searches the lattice points `x` of coset `T` near the natural candidate
/// and keeps those with `(m - x) / K` in `V(L)`; exactly one must survive.
pub fn representation_decode(
    m: &Point,
    t: RepIndex,
    lattice: &LatticeBasis,
    k: u64,
) -> Result<Point> {
    let n = lattice.dim();
    if t.k != k || t.n != n {
        return Err(Error::Domain(format!(
            "coset label was built for K = {}, N = {}",
            t.k, t.n
        )));
    }
    check_k(k, n)?;
    if !lattice.in_voronoi(m)? {
        return Err(Error::Precondition(format!(
            "m = {:?} is outside the fundamental region",
            m.as_slice()
        )));
    }
    let kf = k as f64;
    let digits = t.digits();
    let rep = lattice.lattice_point(&digits);
    let guess: Vec<i64> = lattice
        .coords(&((m - &rep) / kf))
        .iter()
        .map(|v| v.round() as i64)
        .collect();
    let mut found: Vec<Point> = Vec::with_capacity(1);
    let base: Vec<i64> = digits
        .iter()
        .zip(&guess)
        .map(|(d, g)| d + k as i64 * g)
        .collect();
    let g = lattice.generator();
    let mut s = [0.0; super::MAX_DIM];
    let mut scaled = [0.0; super::MAX_DIM];
    for off in box_points(&vec![2; n]) {
        // s = m - G (base + K off)
        for i in 0..n {
            let lx: f64 = (0..n)
                .map(|j| g[(i, j)] * (base[j] + k as i64 * off[j]) as f64)
                .sum();
            s[i] = m[i] - lx;
            scaled[i] = s[i] / kf;
        }
        if lattice.in_voronoi_array(&scaled[..n]) {
            found.push(Point::from_row_slice(&s[..n]));
        }
    }
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        0 => Err(Error::Invariant(format!(
            "no sum consistent with m = {:?}, T = {}",
            m.as_slice(),
            t.t
        ))),
        c => Err(Error::Invariant(format!(
            "{c} sums consistent with m = {:?}, T = {}",
            m.as_slice(),
            t.t
        ))),
    }
}
