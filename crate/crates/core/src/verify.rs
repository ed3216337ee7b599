//! Exhaustive checks of the algebraic claims the rate formulas rely on.

use crate::error::Result;
use crate::infotheory::{f_leakage, f_leakage_bound};
use crate::lattice::{
    coset_index_of_sum, exact_nested_leakage, point, representation_decode, LatticeBasis,
    NestedPair, Point, TieBreak,
};
use crate::schemes::nested_alpha;
use crate::EavSign;
use std::collections::{HashMap, HashSet};

/// Violations kept verbatim in a [`CheckOutcome`]; the rest are counted.
const MAX_REPORTED: usize = 5;

/// Result of one family of checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub checked: u64,
    pub violation_count: u64,
    /// The first few offending instances.
    pub violations: Vec<String>,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            checked: 0,
            violation_count: 0,
            violations: Vec::new(),
            detail: String::new(),
        }
    }

    fn violate(&mut self, what: String) {
        self.violation_count += 1;
        if self.violations.len() < MAX_REPORTED {
            self.violations.push(what);
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    /// One line per check, followed by its recorded violations.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed() { "ok  " } else { "FAIL" };
            out.push_str(&format!(
                "{status} {}: {} checked; {}\n",
                c.name, c.checked, c.detail
            ));
            for v in &c.violations {
                out.push_str(&format!("       violation: {v}\n"));
            }
            if c.violation_count > c.violations.len() as u64 {
                out.push_str(&format!(
                    "       ... {} more\n",
                    c.violation_count - c.violations.len() as u64
                ));
            }
        }
        out
    }
}

/// Options for [`run_all`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VerifyOptions {
    /// Boundary rule applied to every lattice in the representation checks.
    /// [`TieBreak::TowardOrigin`] is a negative control and must fail.
    pub tie_break: TieBreak,
}

fn key(p: &Point) -> Vec<i64> {
    p.iter().map(|v| (v * 1e6).round() as i64).collect()
}

/// Points of a grid with spacing `1/den` that lie in `V(L)`.
pub fn voronoi_grid(lattice: &LatticeBasis, den: u32) -> Result<Vec<Point>> {
    let n = lattice.dim();
    let r = (lattice.covering_bound() * den as f64).ceil() as i64 + 1;
    let mut out = Vec::new();
    for c in crate::lattice::box_points(&vec![r; n]) {
        let x = point(&c.iter().map(|&v| v as f64 / den as f64).collect::<Vec<_>>());
        if lattice.in_voronoi(&x)? {
            out.push(x);
        }
    }
    Ok(out)
}

/// Nondecreasing index tuples of length `k` over `0..n`; sums only depend on
/// the multiset.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![0usize; k];
    if n == 0 {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut j = k;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if cur[j] + 1 < n {
                let v = cur[j] + 1;
                for slot in cur[j..].iter_mut() {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// Encodes every multiset of `k` grid points of `V(L)`, decodes it back and
/// counts the distinct sums sharing each value modulo `L`.
pub fn representation_grid_check(lattice: &LatticeBasis, k: u64, den: u32) -> Result<CheckOutcome> {
    let n = lattice.dim();
    let grid = voronoi_grid(lattice, den)?;
    let bound = k.pow(n as u32);
    let mut out = CheckOutcome::new(format!(
        "representation N={n} K={k} step=1/{den} basis={:?}",
        lattice.generator().as_slice()
    ));
    let mut by_mod: HashMap<Vec<i64>, HashSet<Vec<i64>>> = HashMap::new();
    let mut labels: HashMap<Vec<i64>, HashSet<u64>> = HashMap::new();
    let mut max_err: f64 = 0.0;
    for idx in multisets(grid.len(), k as usize) {
        out.checked += 1;
        let mut sum = Point::zeros(n);
        for &i in &idx {
            sum += &grid[i];
        }
        let (m, t) = coset_index_of_sum(&sum, lattice, k)?;
        match representation_decode(&m, t, lattice, k) {
            Ok(s) => {
                let err = (&s - &sum).amax();
                max_err = max_err.max(err);
                if err > 1e-12 {
                    out.violate(format!(
                        "sum {:?} decoded as {:?}",
                        sum.as_slice(),
                        s.as_slice()
                    ));
                }
            }
            Err(e) => out.violate(format!("sum {:?}: {e}", sum.as_slice())),
        }
        by_mod.entry(key(&m)).or_default().insert(key(&sum));
        labels.entry(key(&m)).or_default().insert(t.t);
    }
    let max_mult = by_mod.values().map(HashSet::len).max().unwrap_or(0) as u64;
    let max_labels = labels.values().map(HashSet::len).max().unwrap_or(0);
    if max_mult > bound {
        out.violate(format!(
            "{max_mult} distinct sums share one value modulo L, bound {bound}"
        ));
    }
    out.detail = format!(
        "{} grid points, max round-trip error {max_err:e}, max distinct sums per mod value {max_mult} (bound {bound}), max labels per mod value {max_labels}",
        grid.len()
    );
    Ok(out)
}

/// `f(Q) < 0.8` and `f(Q) <= 1/2 log2(2 pi e (1/6 - 1/(12 Q^2)))` for
/// `Q = 1..=max_q`, plus `f(2) = 1/2`.
pub fn f_leakage_sweep(max_q: u64) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new(format!("f(Q) bounds for Q <= {max_q}"));
    // running sum of k log2 k keeps the sweep linear
    let mut tail = 0.0;
    let mut min_margin = f64::INFINITY;
    let mut worst_bound_gap = f64::INFINITY;
    for q in 1..=max_q {
        let qf = q as f64;
        if q >= 3 {
            let k = (q - 1) as f64;
            tail += k * k.log2();
        }
        let f = (qf.log2() - (2.0 * tail + qf * qf.log2()) / (qf * qf)).max(0.0);
        out.checked += 1;
        if f >= 0.8 {
            out.violate(format!("f({q}) = {f} >= 0.8"));
        }
        let gap = f_leakage_bound(qf) - f;
        if gap < -1e-12 {
            out.violate(format!("f({q}) = {f} exceeds its bound by {}", -gap));
        }
        min_margin = min_margin.min(0.8 - f);
        worst_bound_gap = worst_bound_gap.min(gap);
    }
    let f2 = f_leakage(2)?;
    if f2 != 0.5 {
        out.violate(format!("f(2) = {f2}, expected 0.5"));
    }
    let fmax = f_leakage(max_q)?;
    out.detail = format!(
        "f({max_q}) = {fmax:.6} (margin to 0.8: {:.6}); smallest margin to 0.8 {min_margin:.6}; smallest gap to the Gaussian bound {worst_bound_gap:.3e}",
        0.8 - fmax
    );
    Ok(out)
}

/// `(1 - gamma^2) alpha(gamma) > 1` on a grid of `gamma` in `(0, 1/2)`.
pub fn feasibility_sweep(step: f64) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new(format!("layer feasibility, gamma step {step}"));
    let n = (0.5 / step).round() as u64;
    let mut min_margin = f64::INFINITY;
    for i in 1..n {
        let g = i as f64 * step;
        let margin = (1.0 - g * g) * nested_alpha(g)? - 1.0;
        out.checked += 1;
        min_margin = min_margin.min(margin);
        if margin <= 0.0 {
            out.violate(format!(
                "gamma = {g}: (1 - gamma^2) alpha = {}",
                margin + 1.0
            ));
        }
    }
    out.detail = format!("smallest (1 - gamma^2) alpha - 1 = {min_margin:.6}");
    Ok(out)
}

/// Exact layer leakage of scaled-integer nested pairs: at most `N` bits,
/// never above the chain bound, and zero leakage through the modulo sum.
pub fn nested_leakage_sweep(pairs: &[(usize, u64)]) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("nested layer leakage");
    let mut worst: f64 = 0.0;
    for &(n, index) in pairs {
        let per_dim = (index as f64).powf(1.0 / n as f64).round();
        let np = NestedPair::new(
            LatticeBasis::scaled_integer(n, 1.0 / per_dim)?,
            LatticeBasis::scaled_integer(n, 1.0)?,
        )?;
        let zero = Point::zeros(n);
        let d1 = point(&[0.1234, -0.3071, 0.2718][..n]);
        let d2 = point(&[-0.2771, 0.0517, -0.4142][..n]);
        for sign in [EavSign::Plus, EavSign::Minus] {
            for (label, dithers) in [("zero", (&zero, &zero)), ("nonzero", (&d1, &d2))] {
                out.checked += 1;
                let l = exact_nested_leakage(&np, sign, dithers)?;
                let ctx = format!("N={n} index={index} sign={} dither={label}", sign.symbol());
                worst = worst.max(l.leakage / n as f64);
                if l.leakage > n as f64 + 1e-12 {
                    out.violate(format!("{ctx}: leakage {} > {n}", l.leakage));
                }
                if l.mod_sum_leakage.abs() > 1e-12 {
                    out.violate(format!("{ctx}: modulo-sum leakage {}", l.mod_sum_leakage));
                }
                if l.leakage > l.chain_bound() + 1e-12 {
                    out.violate(format!(
                        "{ctx}: leakage {} above chain bound {}",
                        l.leakage,
                        l.chain_bound()
                    ));
                }
            }
        }
    }
    out.detail = format!("largest leakage per dimension {worst:.6} bits");
    Ok(out)
}

/// Lattices and alphabet sizes of the representation grid checks:
/// `(basis rows, K, grid denominator)`.
pub fn default_representation_cases() -> Vec<(Vec<Vec<f64>>, u64, u32)> {
    vec![
        (vec![vec![1.0]], 2, 100),
        (vec![vec![1.0]], 3, 100),
        (vec![vec![1.0, 0.0], vec![0.0, 1.0]], 2, 10),
        (vec![vec![2.0, 1.0], vec![0.0, 1.0]], 2, 10),
    ]
}

/// Fine/coarse index pairs `(N, index)` of the leakage sweep.
pub fn default_leakage_cases() -> Vec<(usize, u64)> {
    vec![(1, 2), (1, 4), (1, 8), (1, 16), (1, 64), (2, 4), (2, 16)]
}

/// Runs every check.
pub fn run_all(opts: VerifyOptions) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for (rows, k, den) in default_representation_cases() {
        let rows: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let lattice = LatticeBasis::from_rows(&rows)?.with_tie_break(opts.tie_break);
        report
            .checks
            .push(representation_grid_check(&lattice, k, den)?);
    }
    report
        .checks
        .push(nested_leakage_sweep(&default_leakage_cases())?);
    report.checks.push(f_leakage_sweep(10_000)?);
    report.checks.push(feasibility_sweep(1e-3)?);
    Ok(report)
}
