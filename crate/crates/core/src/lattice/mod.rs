//! Small-dimension lattice algebra.
//!
//! Lattices here have dimension 1 to 3. The closest-point search rounds the
//! coordinate vector and scans integer offsets in `{-2..2}^N` around it, which
//! is exact for the reasonably reduced bases used throughout. Ties are broken
//! toward the lexicographically smallest coordinate vector, which makes the
//! Voronoi region half-open and turns `{lambda + V}` into a true partition of
//! space.

mod leakage;
mod representation;

pub use leakage::{exact_nested_leakage, NestedLeakage};
pub use representation::{
    coset_index_of_sum, representation_decode, representation_encode, representation_encode_signed,
    RepIndex,
};

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use std::cmp::Ordering;

pub type Point = DVector<f64>;

pub const MAX_DIM: usize = 3;

/// Squared distances closer than this (relative) are treated as ties.
const TIE_TOL: f64 = 1e-9;

/// Largest codebook [`enumerate_codebook`] will build.
pub const MAX_CODEBOOK: u64 = 1_000_000;

/// Builds a point from its coordinates.
pub fn point(coords: &[f64]) -> Point {
    DVector::from_row_slice(coords)
}

/// Rule for choosing among equidistant lattice points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Lexicographically smallest coordinate vector. Translation invariant,
    /// so the Voronoi regions tile space.
    #[default]
    Lexicographic,
    /// Smallest `|coordinates|_1`, then lexicographic. Not translation
    /// invariant: both faces of a boundary are claimed by the origin. Kept as
    /// a negative control for the verifier.
    TowardOrigin,
}

/// An `N x N` generator matrix whose columns are the basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeBasis {
    generator: DMatrix<f64>,
    inverse: DMatrix<f64>,
    tie_break: TieBreak,
    // Fixed-size copies for the allocation-free closest-point search.
    g: [[f64; MAX_DIM]; MAX_DIM],
    g_inv: [[f64; MAX_DIM]; MAX_DIM],
    // Offsets in {-2..2}^N, lexicographic, with their images under G.
    shifts: Vec<([i64; MAX_DIM], [f64; MAX_DIM])>,
}

impl LatticeBasis {
    pub fn new(generator: DMatrix<f64>) -> Result<Self> {
        let n = generator.nrows();
        if n == 0 || n > MAX_DIM {
            return Err(Error::Domain(format!(
                "lattice dimension must be 1..=3, got {n}"
            )));
        }
        if generator.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: generator.ncols(),
            });
        }
        if generator.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("generator has non-finite entries".into()));
        }
        if generator.determinant().abs() <= 1e-12 {
            return Err(Error::Domain("generator matrix is singular".into()));
        }
        let inverse = generator
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Domain("generator matrix is singular".into()))?;
        let mut g = [[0.0; MAX_DIM]; MAX_DIM];
        let mut g_inv = [[0.0; MAX_DIM]; MAX_DIM];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = generator[(i, j)];
                g_inv[i][j] = inverse[(i, j)];
            }
        }
        let shifts = offsets(n, 2)
            .into_iter()
            .map(|o| {
                let mut c = [0i64; MAX_DIM];
                c[..n].copy_from_slice(&o);
                (c, mat_vec(&g, &c.map(|v| v as f64), n))
            })
            .collect();
        Ok(LatticeBasis {
            generator,
            inverse,
            tie_break: TieBreak::Lexicographic,
            g,
            g_inv,
            shifts,
        })
    }

    /// Generator given row by row.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows.iter().map(|r| r.len()).find(|&l| l != n).unwrap_or(n),
            });
        }
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(DMatrix::from_row_slice(n, n, &flat))
    }

    /// `scale * Z^n`.
    pub fn scaled_integer(n: usize, scale: f64) -> Result<Self> {
        Self::new(DMatrix::identity(n, n) * scale)
    }

    pub fn with_tie_break(mut self, tie_break: TieBreak) -> Self {
        self.tie_break = tie_break;
        self
    }

    /// The same lattice scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Ok(Self::new(&self.generator * factor)?.with_tie_break(self.tie_break))
    }

    pub fn dim(&self) -> usize {
        self.generator.nrows()
    }

    pub fn generator(&self) -> &DMatrix<f64> {
        &self.generator
    }

    pub fn tie_break(&self) -> TieBreak {
        self.tie_break
    }

    /// Volume of the fundamental region.
    pub fn volume(&self) -> f64 {
        self.generator.determinant().abs()
    }

    /// Real coordinates of `x` in this basis.
    pub fn coords(&self, x: &Point) -> DVector<f64> {
        &self.inverse * x
    }

    /// The lattice point with integer coordinates `c`.
    pub fn lattice_point(&self, c: &[i64]) -> Point {
        let cf = DVector::from_iterator(c.len(), c.iter().map(|&v| v as f64));
        &self.generator * cf
    }

    fn check_dim(&self, x: &Point) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Integer coordinates of the closest lattice point to `x`.
    pub fn nearest_coords(&self, x: &Point) -> Result<Vec<i64>> {
        self.check_dim(x)?;
        let n = self.dim();
        Ok(self.nearest_array(x.as_slice())[..n].to_vec())
    }

    /// Closest-point search on a coordinate slice of length `dim()`.
    pub(crate) fn nearest_array(&self, x: &[f64]) -> [i64; MAX_DIM] {
        let n = self.dim();
        let mut xa = [0.0; MAX_DIM];
        xa[..n].copy_from_slice(x);
        let base = mat_vec(&self.g_inv, &xa, n).map(|v| v.round() as i64);
        let bp = mat_vec(&self.g, &base.map(|v| v as f64), n);
        let mut r = [0.0; MAX_DIM];
        for i in 0..n {
            r[i] = xa[i] - bp[i];
        }
        let mut best: Option<(f64, [i64; MAX_DIM])> = None;
        for (o, go) in &self.shifts {
            let d: f64 = (0..n).map(|i| (r[i] - go[i]) * (r[i] - go[i])).sum();
            let mut cand = [0i64; MAX_DIM];
            for i in 0..n {
                cand[i] = base[i] + o[i];
            }
            best = Some(match best {
                None => (d, cand),
                Some((bd, bc)) => {
                    let scale = bd.max(d).max(1.0);
                    if d < bd - TIE_TOL * scale {
                        (d, cand)
                    } else if d <= bd + TIE_TOL * scale && self.prefer(&cand[..n], &bc[..n]) {
                        (d.min(bd), cand)
                    } else {
                        (bd, bc)
                    }
                }
            });
        }
        best.expect("offset set is nonempty").1
    }

    /// Allocation-free membership test for the half-open Voronoi region.
    pub(crate) fn in_voronoi_array(&self, x: &[f64]) -> bool {
        self.nearest_array(x).iter().all(|&c| c == 0)
    }

    fn prefer(&self, a: &[i64], b: &[i64]) -> bool {
        match self.tie_break {
            TieBreak::Lexicographic => a.cmp(b) == Ordering::Less,
            TieBreak::TowardOrigin => {
                let na: i64 = a.iter().map(|v| v.abs()).sum();
                let nb: i64 = b.iter().map(|v| v.abs()).sum();
                (na, a).cmp(&(nb, b)) == Ordering::Less
            }
        }
    }

    /// Whether `x` lies in the (half-open) Voronoi region of the origin.
    pub fn in_voronoi(&self, x: &Point) -> Result<bool> {
        Ok(self.nearest_coords(x)?.iter().all(|&c| c == 0))
    }

    /// Half the sum of basis-vector lengths; every point of the Voronoi
    /// region lies within this distance of the origin.
    pub(crate) fn covering_bound(&self) -> f64 {
        0.5 * self.generator.column_iter().map(|c| c.norm()).sum::<f64>()
    }

    /// Per-coordinate bound on `|coords(x)|` for `|x| <= radius`.
    pub(crate) fn coord_bounds(&self, radius: f64) -> Vec<i64> {
        self.inverse
            .row_iter()
            .map(|r| (r.iter().map(|v| v.abs()).sum::<f64>() * radius).ceil() as i64 + 1)
            .collect()
    }
}

fn mat_vec(m: &[[f64; MAX_DIM]; MAX_DIM], v: &[f64; MAX_DIM], n: usize) -> [f64; MAX_DIM] {
    let mut out = [0.0; MAX_DIM];
    for i in 0..n {
        out[i] = (0..n).map(|j| m[i][j] * v[j]).sum();
    }
    out
}

/// All integer vectors in `{-r..r}^n`, in lexicographic order.
pub(crate) fn offsets(n: usize, r: i64) -> Vec<Vec<i64>> {
    box_points(&vec![r; n])
}

/// All integer vectors `c` with `|c_i| <= bounds[i]`, lexicographic.
pub(crate) fn box_points(bounds: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(bounds.len())];
    for &b in bounds {
        let mut next = Vec::with_capacity(out.len() * (2 * b as usize + 1));
        for prefix in &out {
            for v in -b..=b {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Closest point of `lattice` to `x`.
pub fn nearest_point(lattice: &LatticeBasis, x: &Point) -> Result<Point> {
    let c = lattice.nearest_coords(x)?;
    Ok(lattice.lattice_point(&c))
}

/// `x mod L = x - nearest_point(L, x)`.
pub fn mod_lattice(x: &Point, lattice: &LatticeBasis) -> Result<Point> {
    Ok(x - nearest_point(lattice, x)?)
}

/// A fine lattice and a coarse sublattice `coarse = fine * J`.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedPair {
    pub fine: LatticeBasis,
    pub coarse: LatticeBasis,
    nesting: DMatrix<i64>,
    index: u64,
}

impl NestedPair {
    pub fn new(fine: LatticeBasis, coarse: LatticeBasis) -> Result<Self> {
        if fine.dim() != coarse.dim() {
            return Err(Error::DimensionMismatch {
                expected: fine.dim(),
                got: coarse.dim(),
            });
        }
        let j = &fine.inverse * &coarse.generator;
        if j.iter().any(|v| (v - v.round()).abs() > 1e-9) {
            return Err(Error::Domain(
                "coarse lattice is not a sublattice of the fine lattice".into(),
            ));
        }
        let nesting = j.map(|v| v.round() as i64);
        let index = nesting.map(|v| v as f64).determinant().abs().round() as u64;
        if index == 0 {
            return Err(Error::Domain("nesting matrix is singular".into()));
        }
        Ok(NestedPair {
            fine,
            coarse,
            nesting,
            index,
        })
    }

    /// `|det J|`, the number of codewords.
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn nesting_matrix(&self) -> &DMatrix<i64> {
        &self.nesting
    }

    pub fn dim(&self) -> usize {
        self.fine.dim()
    }

    /// Rate in bits per dimension, `(1/N) log2 |codebook|`.
    pub fn rate(&self) -> f64 {
        (self.index as f64).log2() / self.dim() as f64
    }
}

/// One codeword of a nested lattice code.
#[derive(Debug, Clone, PartialEq)]
pub struct CodebookPoint {
    pub u: Point,
    pub index: usize,
}

/// `fine ∩ V(coarse)`, sorted lexicographically by coordinates.
pub fn enumerate_codebook(np: &NestedPair) -> Result<Vec<CodebookPoint>> {
    if np.index > MAX_CODEBOOK {
        return Err(Error::ResourceLimit(format!(
            "codebook of {} points exceeds the cap of {MAX_CODEBOOK}",
            np.index
        )));
    }
    let bounds = np.fine.coord_bounds(np.coarse.covering_bound());
    let box_size: f64 = bounds.iter().map(|&b| (2 * b + 1) as f64).product();
    if box_size > 64.0 * MAX_CODEBOOK as f64 {
        return Err(Error::ResourceLimit(format!(
            "search box of {box_size} fine points is too large"
        )));
    }
    let mut points = Vec::with_capacity(np.index as usize);
    for c in box_points(&bounds) {
        let u = np.fine.lattice_point(&c);
        if np.coarse.in_voronoi(&u)? {
            points.push(u);
        }
    }
    if points.len() as u64 != np.index {
        return Err(Error::Invariant(format!(
            "found {} codewords, expected {}",
            points.len(),
            np.index
        )));
    }
    points.sort_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    });
    Ok(points
        .into_iter()
        .enumerate()
        .map(|(index, u)| CodebookPoint { u, index })
        .collect())
}

/// Reads a basis from the plain-text format: `N` followed by `N` rows of `N`
/// numbers. Rows are rows of the generator matrix; `#` starts a comment.
pub fn parse_basis(text: &str) -> Result<LatticeBasis> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(|c: char| c.is_whitespace() || c == ','))
        .filter(|t| !t.is_empty());
    let n: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("missing dimension".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad dimension: {e}")))?;
    if n == 0 || n > MAX_DIM {
        return Err(Error::Parse(format!("dimension must be 1..=3, got {n}")));
    }
    let mut values = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        let t = tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {} matrix entries", n * n)))?;
        values.push(
            t.parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad entry `{t}`: {e}")))?,
        );
    }
    if let Some(extra) = tokens.next() {
        return Err(Error::Parse(format!("unexpected trailing token `{extra}`")));
    }
    LatticeBasis::new(DMatrix::from_row_slice(n, n, &values))
}

/// Writes a basis in the format read by [`parse_basis`].
pub fn format_basis(basis: &LatticeBasis) -> String {
    let n = basis.dim();
    let mut out = format!("{n}\n");
    for r in 0..n {
        let row: Vec<String> = (0..n)
            .map(|c| format!("{}", basis.generator[(r, c)]))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z1() -> LatticeBasis {
        LatticeBasis::scaled_integer(1, 1.0).unwrap()
    }

    #[test]
    fn nearest_integer() {
        assert_eq!(nearest_point(&z1(), &point(&[0.7])).unwrap()[0], 1.0);
        assert_eq!(nearest_point(&z1(), &point(&[-2.2])).unwrap()[0], -2.0);
    }

    #[test]
    fn ties_go_to_smaller_coordinate() {
        assert_eq!(nearest_point(&z1(), &point(&[0.5])).unwrap()[0], 0.0);
        assert_eq!(nearest_point(&z1(), &point(&[-0.5])).unwrap()[0], -1.0);
    }

    #[test]
    fn nearest_in_scaled_square_lattice() {
        let l = LatticeBasis::scaled_integer(2, 2.0).unwrap();
        let p = nearest_point(&l, &point(&[1.9, -0.2])).unwrap();
        // brute force over a wide window
        let mut best = (f64::INFINITY, (0, 0));
        for i in -5..=5 {
            for j in -5..=5 {
                let d = (1.9 - 2.0 * i as f64).powi(2) + (-0.2 - 2.0 * j as f64).powi(2);
                if d < best.0 {
                    best = (d, (i, j));
                }
            }
        }
        assert_eq!(best.1, (1, 0));
        assert_eq!(p, point(&[2.0, 0.0]));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            nearest_point(&z1(), &point(&[0.1, 0.2])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn singular_and_oversized_bases_rejected() {
        assert!(LatticeBasis::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).is_err());
        assert!(LatticeBasis::scaled_integer(4, 1.0).is_err());
    }

    #[test]
    fn mod_examples() {
        let m = mod_lattice(&point(&[0.7]), &z1()).unwrap();
        assert!((m[0] + 0.3).abs() < 1e-15);
        let l = LatticeBasis::from_rows(&[&[2.0, 1.0], &[0.0, 1.0]]).unwrap();
        let lam = l.lattice_point(&[3, -2]);
        assert_eq!(mod_lattice(&lam, &l).unwrap().norm(), 0.0);
    }

    #[test]
    fn quarter_integer_codebook() {
        let np = NestedPair::new(
            LatticeBasis::scaled_integer(1, 0.25).unwrap(),
            LatticeBasis::scaled_integer(1, 1.0).unwrap(),
        )
        .unwrap();
        let cb = enumerate_codebook(&np).unwrap();
        let values: Vec<f64> = cb.iter().map(|c| c.u[0]).collect();
        assert_eq!(values, vec![-0.25, 0.0, 0.25, 0.5]);
        assert_eq!(
            cb.iter().map(|c| c.index).collect::<Vec<_>>(),
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn trivial_and_square_codebooks() {
        let z = LatticeBasis::scaled_integer(2, 1.0).unwrap();
        let same = NestedPair::new(z.clone(), z.clone()).unwrap();
        let cb = enumerate_codebook(&same).unwrap();
        assert_eq!(cb.len(), 1);
        assert_eq!(cb[0].u.norm(), 0.0);
        let half = NestedPair::new(LatticeBasis::scaled_integer(2, 0.5).unwrap(), z).unwrap();
        assert_eq!(enumerate_codebook(&half).unwrap().len(), 4);
    }

    #[test]
    fn codebook_size_is_volume_ratio() {
        let coarse = LatticeBasis::from_rows(&[&[2.0, 1.0], &[0.0, 1.0]]).unwrap();
        for k in [1.0, 2.0, 3.0, 4.0] {
            let fine = coarse.scaled(1.0 / k).unwrap();
            let np = NestedPair::new(fine.clone(), coarse.clone()).unwrap();
            let cb = enumerate_codebook(&np).unwrap();
            assert_eq!(cb.len() as f64, (coarse.volume() / fine.volume()).round());
            assert!(cb.iter().all(|c| coarse.in_voronoi(&c.u).unwrap()));
        }
    }

    #[test]
    fn non_nested_pair_rejected() {
        let fine = LatticeBasis::scaled_integer(1, 0.3).unwrap();
        let coarse = LatticeBasis::scaled_integer(1, 1.0).unwrap();
        assert!(NestedPair::new(fine, coarse).is_err());
    }

    #[test]
    fn oversized_codebook_rejected() {
        let np = NestedPair::new(
            LatticeBasis::scaled_integer(3, 0.001).unwrap(),
            LatticeBasis::scaled_integer(3, 1.0).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            enumerate_codebook(&np),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn basis_text_format() {
        let b = parse_basis("2\n2 1\n0 1\n").unwrap();
        assert_eq!(b.generator()[(0, 1)], 1.0);
        assert_eq!(b.generator()[(1, 0)], 0.0);
        let again = parse_basis(&format_basis(&b)).unwrap();
        assert_eq!(again, b);
        assert!(parse_basis("2\n1 0\n0").is_err());
        assert!(parse_basis("1\n1 2").is_err());
        assert!(parse_basis("x").is_err());
    }

    proptest! {
        #[test]
        fn mod_is_idempotent(x in -20.0f64..20.0, y in -20.0f64..20.0) {
            let l = LatticeBasis::from_rows(&[&[2.0, 1.0], &[0.0, 1.0]]).unwrap();
            let p = point(&[x, y]);
            let once = mod_lattice(&p, &l).unwrap();
            let twice = mod_lattice(&once, &l).unwrap();
            prop_assert!((once - twice).norm() < 1e-12);
        }

        #[test]
        fn nearest_point_is_closest(x in -10.0f64..10.0, y in -10.0f64..10.0) {
            let l = LatticeBasis::from_rows(&[&[2.0, 1.0], &[0.0, 1.0]]).unwrap();
            let p = point(&[x, y]);
            let d = (&p - nearest_point(&l, &p).unwrap()).norm_squared();
            for i in -12..=12i64 {
                for j in -12..=12i64 {
                    let q = l.lattice_point(&[i, j]);
                    prop_assert!(d <= (&p - q).norm_squared() + 1e-9);
                }
            }
        }
    }
}
