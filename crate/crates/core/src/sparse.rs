//! Compressed-sparse-row complex matrices and a Markowitz sparse LU.
//!
//! The Liouvillian of a 75-dimensional Hilbert space is a 5625×5625 matrix with
//! roughly eight nonzeros per row, which is far too large for dense
//! factorisation on a laptop but trivial for a sparse one with a sensible
//! pivot order.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

/// Complex CSR matrix. Column indices within a row are strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, C64::new(1.0, 0.0))))
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are summed
    /// and exact zeros dropped.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, C64)>,
    {
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            rows[r].push((c, v));
        }
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut iter = row.into_iter().peekable();
            while let Some((c, mut v)) = iter.next() {
                while let Some(&(c2, v2)) = iter.peek() {
                    if c2 != c {
                        break;
                    }
                    v += v2;
                    iter.next();
                }
                if v != C64::new(0.0, 0.0) {
                    indices.push(c);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self {
            nrows,
            ncols,
            indptr,
            indices,
            values,
        }
    }

    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        let (nr, nc) = m.shape();
        Self::from_triplets(
            nr,
            nc,
            (0..nr).flat_map(|r| (0..nc).map(move |c| (r, c, m[(r, c)]))),
        )
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Entries of row `r` as parallel slices of column indices and values.
    pub fn row(&self, r: usize) -> (&[usize], &[C64]) {
        let span = self.indptr[r]..self.indptr[r + 1];
        (&self.indices[span.clone()], &self.values[span])
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(k) => vals[k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.nrows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.iter() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.ncols, self.nrows, self.iter().map(|(r, c, v)| (c, r, v)))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(
            self.ncols,
            self.nrows,
            self.iter().map(|(r, c, v)| (c, r, v.conj())),
        )
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v = v.conj());
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_triplets(self.nrows, self.ncols, self.iter().map(|(r, c, v)| (r, c, v * s)))
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: C64, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        Self::from_triplets(
            self.nrows,
            self.ncols,
            self.iter().chain(other.iter().map(|(r, c, v)| (r, c, v * s))),
        )
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows);
        let mut trip = Vec::new();
        let mut acc = vec![C64::new(0.0, 0.0); other.ncols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; other.ncols];
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&k, &a) in cols.iter().zip(vals) {
                let (c2, v2) = other.row(k);
                for (&c, &b) in c2.iter().zip(v2) {
                    if !mark[c] {
                        mark[c] = true;
                        touched.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            for &c in &touched {
                trip.push((r, c, acc[c]));
                acc[c] = C64::new(0.0, 0.0);
                mark[c] = false;
            }
            touched.clear();
        }
        Self::from_triplets(self.nrows, other.ncols, trip)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (pr, pc) = (other.nrows, other.ncols);
        let trip: Vec<_> = self
            .iter()
            .flat_map(|(r1, c1, v1)| {
                other
                    .iter()
                    .map(move |(r2, c2, v2)| (r1 * pr + r2, c1 * pc + c2, v1 * v2))
            })
            .collect();
        Self::from_triplets(self.nrows * pr, self.ncols * pc, trip)
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows)
            .map(|r| {
                let (cols, vals) = self.row(r);
                cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum()
            })
            .collect()
    }

    /// Dense product `self · m`.
    pub fn mul_dense(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        assert_eq!(self.ncols, m.nrows());
        let mut out = DMatrix::zeros(self.nrows, m.ncols());
        for j in 0..m.ncols() {
            let col = m.column(j);
            for r in 0..self.nrows {
                let (cols, vals) = self.row(r);
                let mut s = C64::new(0.0, 0.0);
                for (&c, &v) in cols.iter().zip(vals) {
                    s += v * col[c];
                }
                out[(r, j)] = s;
            }
        }
        out
    }

    /// Dense product `m · self`.
    pub fn rmul_dense(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        assert_eq!(m.ncols(), self.nrows);
        let mut out = DMatrix::zeros(m.nrows(), self.ncols);
        for k in 0..self.nrows {
            let (cols, vals) = self.row(k);
            for (&c, &v) in cols.iter().zip(vals) {
                for i in 0..m.nrows() {
                    out[(i, c)] += m[(i, k)] * v;
                }
            }
        }
        out
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Replaces row `r` by the given sparse entries.
    pub fn with_row_replaced(&self, r: usize, entries: &[(usize, C64)]) -> Self {
        let trip = self
            .iter()
            .filter(|&(row, _, _)| row != r)
            .chain(entries.iter().map(|&(c, v)| (r, c, v)));
        Self::from_triplets(self.nrows, self.ncols, trip)
    }
}

/// Sparse LU factorisation with Markowitz pivot selection and threshold
/// partial pivoting.
///
/// Produces `P A Q = L U` implicitly, stored as an elimination sequence.
#[derive(Clone, Debug)]
pub struct SparseLu {
    n: usize,
    steps: Vec<LuStep>,
}

#[derive(Clone, Debug)]
struct LuStep {
    row: usize,
    col: usize,
    pivot: C64,
    /// Off-pivot entries of the pivot row (the U row).
    upper: Vec<(usize, C64)>,
    /// Multipliers `(row, l)` applied to the right-hand side.
    lower: Vec<(usize, C64)>,
}

/// Relative threshold for accepting a pivot against the column maximum.
const PIVOT_THRESHOLD: f64 = 0.1;
/// Number of lowest-count columns examined per pivot search.
const SEARCH_COLUMNS: usize = 4;

impl SparseLu {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::DegenerateSteadyState(format!(
                "matrix is {}×{}, not square",
                a.nrows(),
                a.ncols()
            )));
        }
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        let mut rows: Vec<Vec<(usize, C64)>> = (0..n)
            .map(|r| {
                let (c, v) = a.row(r);
                c.iter().copied().zip(v.iter().copied()).collect()
            })
            .collect();
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (r, row) in rows.iter().enumerate() {
            for &(c, _) in row {
                cols[c].push(r);
            }
        }
        let mut col_active = vec![true; n];
        let mut steps = Vec::with_capacity(n);
        let mut scratch: Vec<(usize, C64)> = Vec::new();

        for _ in 0..n {
            let (prow, pcol) = Self::choose_pivot(&rows, &cols, &col_active, scale)?;
            let prow_entries = std::mem::take(&mut rows[prow]);
            let k = prow_entries
                .binary_search_by_key(&pcol, |&(c, _)| c)
                .expect("pivot entry present");
            let pivot = prow_entries[k].1;

            let mut lower = Vec::with_capacity(cols[pcol].len());
            let targets = std::mem::take(&mut cols[pcol]);
            for &i in &targets {
                if i == prow {
                    continue;
                }
                let row_i = std::mem::take(&mut rows[i]);
                let aic = match row_i.binary_search_by_key(&pcol, |&(c, _)| c) {
                    Ok(pos) => row_i[pos].1,
                    Err(_) => {
                        rows[i] = row_i;
                        continue;
                    }
                };
                let l = aic / pivot;
                lower.push((i, l));
                // row_i <- row_i - l * pivot_row, dropping the pivot column.
                scratch.clear();
                let (mut p, mut q) = (0, 0);
                while p < row_i.len() || q < prow_entries.len() {
                    let cp = row_i.get(p).map_or(usize::MAX, |e| e.0);
                    let cq = prow_entries.get(q).map_or(usize::MAX, |e| e.0);
                    if cp == cq {
                        if cp != pcol {
                            scratch.push((cp, row_i[p].1 - l * prow_entries[q].1));
                        }
                        p += 1;
                        q += 1;
                    } else if cp < cq {
                        scratch.push(row_i[p]);
                        p += 1;
                    } else {
                        // fill-in
                        scratch.push((cq, -l * prow_entries[q].1));
                        cols[cq].push(i);
                        q += 1;
                    }
                }
                rows[i] = scratch.clone();
            }

            for &(c, _) in &prow_entries {
                if c != pcol {
                    if let Some(pos) = cols[c].iter().position(|&r| r == prow) {
                        cols[c].swap_remove(pos);
                    }
                }
            }
            col_active[pcol] = false;
            let upper = prow_entries
                .into_iter()
                .filter(|&(c, _)| c != pcol)
                .collect();
            steps.push(LuStep {
                row: prow,
                col: pcol,
                pivot,
                upper,
                lower,
            });
        }
        Ok(Self { n, steps })
    }

    fn choose_pivot(
        rows: &[Vec<(usize, C64)>],
        cols: &[Vec<usize>],
        col_active: &[bool],
        scale: f64,
    ) -> Result<(usize, usize)> {
        // Lowest-count active columns.
        let mut cand: Vec<(usize, usize)> = Vec::with_capacity(SEARCH_COLUMNS + 1);
        for (c, rs) in cols.iter().enumerate() {
            if !col_active[c] {
                continue;
            }
            let cnt = rs.len();
            if cand.len() < SEARCH_COLUMNS || cnt < cand[cand.len() - 1].0 {
                let pos = cand.partition_point(|&(k, _)| k <= cnt);
                cand.insert(pos, (cnt, c));
                cand.truncate(SEARCH_COLUMNS);
            }
        }
        let mut best: Option<(usize, usize, usize, f64)> = None;
        for &(ccount, c) in &cand {
            let entries: Vec<(usize, f64)> = cols[c]
                .iter()
                .map(|&r| {
                    let v = rows[r]
                        .binary_search_by_key(&c, |&(cc, _)| cc)
                        .map(|p| rows[r][p].1.norm())
                        .unwrap_or(0.0);
                    (r, v)
                })
                .collect();
            let cmax = entries.iter().map(|e| e.1).fold(0.0, f64::max);
            if cmax <= 1e-14 * scale {
                continue;
            }
            for (r, v) in entries {
                if v < PIVOT_THRESHOLD * cmax {
                    continue;
                }
                let cost = (rows[r].len() - 1) * ccount.saturating_sub(1);
                let better = match best {
                    None => true,
                    Some((bc, _, _, bv)) => cost < bc || (cost == bc && v > bv),
                };
                if better {
                    best = Some((cost, r, c, v));
                }
            }
        }
        match best {
            Some((_, r, c, _)) => Ok((r, c)),
            None => Err(Error::DegenerateSteadyState(
                "matrix is numerically singular".into(),
            )),
        }
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        assert_eq!(b.len(), self.n);
        let mut y = b.to_vec();
        for s in &self.steps {
            let yr = y[s.row];
            for &(i, l) in &s.lower {
                y[i] -= l * yr;
            }
        }
        let mut x = vec![C64::new(0.0, 0.0); self.n];
        for s in self.steps.iter().rev() {
            let mut acc = y[s.row];
            for &(c, u) in &s.upper {
                acc -= u * x[c];
            }
            x[s.col] = acc / s.pivot;
        }
        x
    }

    /// Number of stored factor entries, a proxy for fill-in.
    pub fn factor_nnz(&self) -> usize {
        self.steps
            .iter()
            .map(|s| 1 + s.upper.len() + s.lower.len())
            .sum()
    }

    /// Smallest pivot magnitude relative to the largest, a cheap conditioning
    /// indicator.
    pub fn pivot_ratio(&self) -> f64 {
        let (lo, hi) = self.steps.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), s| {
            let m = s.pivot.norm();
            (lo.min(m), hi.max(m))
        });
        if hi == 0.0 {
            0.0
        } else {
            lo / hi
        }
    }
}
