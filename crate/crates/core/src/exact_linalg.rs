//! Exact rational scalars and sparse matrices.
//!
//! Everything in this crate is computed over `Q`. Matrices are stored row-wise
//! with sorted, zero-free rows; elimination runs on a dense accumulator with a
//! static Markowitz column order (sparsest columns first, ties broken by the
//! column index), so every echelon form, kernel basis and particular solution
//! is reproducible bit for bit.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// An exact rational number, always kept in lowest terms with a positive denominator.
pub type Scalar = BigRational;

/// A sparse vector: `(index, value)` pairs sorted by index, no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn q(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `3`, `-2`, `3/4` into a scalar.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

/// Dense to sparse, dropping zeros.
pub fn sparsify(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn densify(v: &[(usize, Scalar)], len: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Sorts and merges a list of `(index, value)` contributions.
pub fn normalize_sparse(mut v: Vec<(usize, Scalar)>) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// A sparse matrix over `Q` in compressed row form.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix({}x{}, nnz={})", self.rows, self.cols, self.nnz())?;
        if self.rows * self.cols <= 64 {
            for r in 0..self.rows {
                write!(f, "\n  [")?;
                for c in 0..self.cols {
                    write!(f, " {}", self.get(r, c))?;
                }
                write!(f, " ]")?;
            }
        }
        Ok(())
    }
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i, Scalar::one())]).collect(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self, LinalgError> {
        let mut data: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (r, c, x) in triplets {
            if r >= rows || c >= cols {
                return Err(LinalgError::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            if !x.is_zero() {
                data[r].push((c, x));
            }
        }
        let data = data.into_iter().map(normalize_sparse).collect();
        Ok(SparseMatrix { rows, cols, data })
    }

    /// Builds a matrix from already sparse rows (they are normalized here).
    pub fn from_sparse_rows(cols: usize, rows: Vec<SparseVec>) -> Self {
        let data: Vec<SparseVec> = rows.into_iter().map(normalize_sparse).collect();
        debug_assert!(data.iter().flatten().all(|(c, _)| *c < cols));
        SparseMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        SparseMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| sparsify(r)).collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect();
        Self::from_dense(&dense)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, Scalar)] {
        &self.data[r]
    }

    pub fn row_vecs(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.data[r].binary_search_by_key(&c, |(i, _)| *i) {
            Ok(k) => self.data[r][k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    /// Iterates over the stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, x)| (r, *c, x)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        self.data.iter().map(|r| densify(r, self.cols)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, x) in row {
                data[*c].push((r, x.clone()));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .map(|row| {
                let mut acc = Scalar::zero();
                for (c, x) in row {
                    if !v[*c].is_zero() {
                        acc += x * &v[*c];
                    }
                }
                acc
            })
            .collect())
    }

    /// Product with a sparse vector, returning a sparse vector.
    pub fn mul_sparse_vec(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let dense = densify(v, self.cols);
        let mut out = Vec::new();
        for (r, row) in self.data.iter().enumerate() {
            let mut acc = Scalar::zero();
            for (c, x) in row {
                if !dense[*c].is_zero() {
                    acc += x * &dense[*c];
                }
            }
            if !acc.is_zero() {
                out.push((r, acc));
            }
        }
        out
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut acc: Vec<Scalar> = vec![Scalar::zero(); other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; other.cols];
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for (k, x) in row {
                for (c, y) in &other.data[*k] {
                    if !mark[*c] {
                        mark[*c] = true;
                        touched.push(*c);
                    }
                    acc[*c] += x * y;
                }
            }
            touched.sort_unstable();
            let mut out = Vec::new();
            for &c in &touched {
                mark[c] = false;
                let v = std::mem::replace(&mut acc[c], Scalar::zero());
                if !v.is_zero() {
                    out.push((c, v));
                }
            }
            touched.clear();
            data.push(out);
        }
        Ok(SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &SparseMatrix, factor: &Scalar) -> Result<SparseMatrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut v: Vec<(usize, Scalar)> = a.clone();
                v.extend(b.iter().map(|(c, x)| (*c, x * factor)));
                normalize_sparse(v)
            })
            .collect();
        Ok(SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        self.add_scaled(other, &q(-1))
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        self.add_scaled(other, &q(1))
    }

    pub fn scale(&self, factor: &Scalar) -> SparseMatrix {
        if factor.is_zero() {
            return SparseMatrix::zeros(self.rows, self.cols);
        }
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|(c, x)| (*c, x * factor)).collect())
                .collect(),
        }
    }

    /// Column order used for pivoting: sparsest columns first, then by index.
    fn markowitz_order(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.cols];
        for row in &self.data {
            for (c, _) in row {
                counts[*c] += 1;
            }
        }
        let mut cols: Vec<usize> = (0..self.cols).collect();
        cols.sort_by_key(|&c| (counts[c], c));
        let mut order = vec![0usize; self.cols];
        for (rank, c) in cols.into_iter().enumerate() {
            order[c] = rank;
        }
        order
    }

    /// Row processing order: shortest rows first, then by index.
    fn row_sequence(&self) -> Vec<usize> {
        let mut rows: Vec<usize> = (0..self.rows).collect();
        rows.sort_by_key(|&r| (self.data[r].len(), r));
        rows
    }

    pub fn echelon(&self) -> RowEchelon {
        let mut ech = RowEchelon::with_order(self.markowitz_order());
        for r in self.row_sequence() {
            if ech.rank() == self.cols {
                break;
            }
            ech.insert(self.data[r].clone());
        }
        ech
    }
}

/// Rank over `Q`.
pub fn rank(m: &SparseMatrix) -> usize {
    m.echelon().rank()
}

/// A basis of the right null space; the vectors are indexed by the free
/// columns of the echelon form and have a `1` in their own free column.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    m.echelon().kernel_basis()
}

/// Sparse variant of [`kernel_basis`].
pub fn kernel_basis_sparse(m: &SparseMatrix) -> Vec<SparseVec> {
    m.echelon().kernel_basis_sparse()
}

/// Returns some `x` with `m x = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(m: &SparseMatrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
    if b.len() != m.rows {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows,
            got: b.len(),
        });
    }
    // The augmented column sits last in the pivot order so it can never be
    // chosen while a coefficient column is still available.
    let aug = m.cols;
    let mut order = m.markowitz_order();
    order.push(aug);
    let mut ech = RowEchelon::with_order(order);
    for r in m.row_sequence() {
        let mut row = m.data[r].clone();
        if !b[r].is_zero() {
            row.push((aug, b[r].clone()));
        }
        ech.insert(row);
    }
    if ech.pivot_row(aug).is_some() {
        return Ok(None);
    }
    let mut x = vec![Scalar::zero(); aug + 1];
    x[aug] = q(-1);
    ech.back_substitute(&mut x);
    x.truncate(aug);
    Ok(Some(x))
}

/// Incremental row echelon form with respect to a fixed column order.
///
/// Each stored row has its pivot at the column of smallest order among its
/// entries. Rows are not normalized; `reduce` eliminates pivot columns in
/// increasing order, which terminates because pivot rows only carry columns
/// of larger order.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    order: Vec<usize>,
    by_order: Vec<usize>,
    pivots: BTreeMap<usize, SparseVec>,
}

impl RowEchelon {
    pub fn new(cols: usize) -> Self {
        Self::with_order((0..cols).collect())
    }

    /// `order[c]` is the priority of column `c` (smaller is pivoted first);
    /// it must be a permutation of `0..cols`.
    pub fn with_order(order: Vec<usize>) -> Self {
        let mut by_order = vec![0usize; order.len()];
        for (c, &o) in order.iter().enumerate() {
            by_order[o] = c;
        }
        RowEchelon {
            order,
            by_order,
            pivots: BTreeMap::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.order.len()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().map(move |&o| self.by_order[o])
    }

    pub fn pivot_row(&self, col: usize) -> Option<&SparseVec> {
        self.pivots.get(&self.order[col])
    }

    /// Reduces `row` against the stored pivots; the result has no entry in any
    /// pivot column and differs from `row` by an element of the row space.
    pub fn reduce(&self, row: &[(usize, Scalar)]) -> SparseVec {
        let n = self.cols();
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        let mut heap: BinaryHeap<Reverse<usize>> = BinaryHeap::new();
        for (c, x) in row {
            debug_assert!(*c < n);
            let o = self.order[*c];
            acc.insert(o, x.clone());
            heap.push(Reverse(o));
        }
        let mut out = Vec::new();
        let mut last = None;
        while let Some(Reverse(o)) = heap.pop() {
            if last == Some(o) {
                continue;
            }
            last = Some(o);
            let Some(x) = acc.remove(&o) else { continue };
            if x.is_zero() {
                continue;
            }
            match self.pivots.get(&o) {
                Some(prow) => {
                    let pc = self.by_order[o];
                    let lead = &prow
                        .iter()
                        .find(|(c, _)| *c == pc)
                        .expect("pivot row carries its pivot")
                        .1;
                    let factor = &x / lead;
                    for (c, y) in prow {
                        let oc = self.order[*c];
                        if oc == o {
                            continue;
                        }
                        let e = acc.entry(oc).or_insert_with(|| {
                            heap.push(Reverse(oc));
                            Scalar::zero()
                        });
                        *e -= &factor * y;
                    }
                }
                None => out.push((self.by_order[o], x)),
            }
        }
        out.sort_by_key(|(c, _)| *c);
        out
    }

    /// Adds a row; returns `true` when it was independent of the stored rows.
    pub fn insert(&mut self, row: SparseVec) -> bool {
        let reduced = self.reduce(&row);
        if reduced.is_empty() {
            return false;
        }
        let lead = reduced
            .iter()
            .map(|(c, _)| self.order[*c])
            .min()
            .expect("nonempty");
        self.pivots.insert(lead, reduced);
        true
    }

    pub fn contains(&self, row: &[(usize, Scalar)]) -> bool {
        self.reduce(row).is_empty()
    }

    /// Given values for all non-pivot columns in `x`, fills in the pivot
    /// columns so that every stored row annihilates `x`.
    fn back_substitute(&self, x: &mut [Scalar]) {
        for (&o, prow) in self.pivots.iter().rev() {
            let pc = self.by_order[o];
            let mut acc = Scalar::zero();
            let mut lead = None;
            for (c, y) in prow {
                if *c == pc {
                    lead = Some(y);
                } else if !x[*c].is_zero() {
                    acc += y * &x[*c];
                }
            }
            x[pc] = -acc / lead.expect("pivot present");
        }
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.cols())
            .filter(|&c| !self.pivots.contains_key(&self.order[c]))
            .collect()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let n = self.cols();
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut x = vec![Scalar::zero(); n];
                x[f] = Scalar::one();
                self.back_substitute(&mut x);
                x
            })
            .collect()
    }

    pub fn kernel_basis_sparse(&self) -> Vec<SparseVec> {
        self.kernel_basis().iter().map(|v| sparsify(v)).collect()
    }

    /// The reduced row echelon basis of the row space: every row has a single
    /// nonzero pivot entry equal to one, and no other row touches it. Rows are
    /// returned in pivot order.
    pub fn reduced_rows(&self) -> Vec<SparseVec> {
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&o, prow) in self.pivots.iter().rev() {
            // Clear later pivots using already reduced rows.
            let mut row: BTreeMap<usize, Scalar> = prow.iter().map(|(c, x)| (*c, x.clone())).collect();
            for (&o2, r2) in &done {
                let c2 = self.by_order[o2];
                if let Some(x) = row.get(&c2).cloned() {
                    for (c, y) in r2 {
                        let e = row.entry(*c).or_insert_with(Scalar::zero);
                        *e -= &x * y;
                    }
                }
            }
            let pc = self.by_order[o];
            let lead = row[&pc].clone();
            let v: SparseVec = row
                .into_iter()
                .filter(|(_, x)| !x.is_zero())
                .map(|(c, x)| (c, x / &lead))
                .collect();
            done.insert(o, v);
        }
        done.into_values().collect()
    }
}
