//! Exact sparse linear algebra over the rationals.
//!
//! Every routine here is deterministic: row order is never permuted except
//! by the pivot search, which always takes the lowest remaining row whose
//! leading entry sits in the current column. Kernel, image and solution
//! vectors are therefore pure functions of the input matrix.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// The coefficient field. Always kept in lowest terms with a positive
/// denominator by `num-rational`.
pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("malformed rational {0:?}: expected \"p\" or \"p/q\" with integer p, q")]
    MalformedScalar(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

pub fn scalar(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"` or `"p/q"`. Decimal points, exponents and whitespace inside
/// the number are rejected so that no float can sneak into a document.
pub fn parse_scalar(s: &str) -> Result<Scalar, LinalgError> {
    fn integer(part: &str, whole: &str) -> Result<BigInt, LinalgError> {
        let digits = part.strip_prefix(['-', '+']).unwrap_or(part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(LinalgError::MalformedScalar(whole.to_string()));
        }
        BigInt::from_str(part).map_err(|_| LinalgError::MalformedScalar(whole.to_string()))
    }
    let t = s.trim();
    match t.split_once('/') {
        None => Ok(Scalar::from_integer(integer(t, s)?)),
        Some((p, q)) => {
            if q.starts_with(['-', '+']) {
                return Err(LinalgError::MalformedScalar(s.to_string()));
            }
            let (p, q) = (integer(p, s)?, integer(q, s)?);
            if q.is_zero() {
                return Err(LinalgError::ZeroDenominator(s.to_string()));
            }
            Ok(Scalar::new(p, q))
        }
    }
}

pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A vector with only its nonzero coordinates stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseVector {
    dim: usize,
    entries: BTreeMap<usize, Scalar>,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: BTreeMap::new() }
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        assert!(index < dim, "unit index {index} out of range for dimension {dim}");
        let mut v = Self::zeros(dim);
        v.entries.insert(index, Scalar::one());
        v
    }

    pub fn from_dense(values: Vec<Scalar>) -> Self {
        let dim = values.len();
        let entries = values.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        Self { dim, entries }
    }

    /// Builds a vector from `(index, value)` pairs, summing repeated indices.
    pub fn from_entries(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, Scalar)>,
    ) -> Result<Self, LinalgError> {
        let mut v = Self::zeros(dim);
        for (i, x) in entries {
            if i >= dim {
                return Err(LinalgError::IndexOutOfRange { index: i, dim });
            }
            v.add_at(i, &x);
        }
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Scalar {
        self.entries.get(&index).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn entry(&self, index: usize) -> Option<&Scalar> {
        self.entries.get(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.entries.iter().map(|(&i, x)| (i, x))
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.iter().next().map(|(&i, x)| (i, x))
    }

    pub fn set(&mut self, index: usize, value: Scalar) {
        assert!(index < self.dim);
        if value.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
    }

    /// `self[index] += value`, dropping the entry if it cancels.
    pub fn add_at(&mut self, index: usize, value: &Scalar) {
        assert!(index < self.dim);
        if value.is_zero() {
            return;
        }
        match self.entries.entry(index) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += value;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += factor * other`.
    pub fn axpy(&mut self, factor: &Scalar, other: &SparseVector) {
        debug_assert_eq!(self.dim, other.dim);
        if factor.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_at(i, &(factor * x));
        }
    }

    pub fn scaled(&self, factor: &Scalar) -> SparseVector {
        if factor.is_zero() {
            return Self::zeros(self.dim);
        }
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|(&i, x)| (i, x * factor)).collect(),
        }
    }

    pub fn add(&self, other: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.axpy(&Scalar::one(), other);
        out
    }

    pub fn sub(&self, other: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.axpy(&-Scalar::one(), other);
        out
    }

    pub fn dot(&self, other: &SparseVector) -> Scalar {
        let (small, large) = if self.nnz() <= other.nnz() { (self, other) } else { (other, self) };
        small
            .iter()
            .filter_map(|(i, x)| large.entry(i).map(|y| x * y))
            .fold(Scalar::zero(), |acc, t| acc + t)
    }

    pub fn to_dense(&self) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (i, x) in self.iter() {
            out[i] = x.clone();
        }
        out
    }

    fn check_dim(&self, expected: usize) -> Result<(), LinalgError> {
        if self.dim != expected {
            return Err(LinalgError::DimensionMismatch { expected, found: self.dim });
        }
        Ok(())
    }
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dense: Vec<String> = self.to_dense().iter().map(format_scalar).collect();
        write!(f, "[{}]", dense.join(", "))
    }
}

type Row = BTreeMap<usize, Scalar>;

/// Row-major sparse matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    cols: usize,
    rows: Vec<Row>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { cols, rows: vec![Row::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].insert(i, Scalar::one());
        }
        m
    }

    pub fn from_dense(rows: Vec<Vec<Scalar>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let rows = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged dense matrix");
                r.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()
            })
            .collect();
        Self { cols, rows }
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[SparseVector]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            c.check_dim(rows)?;
            for (i, x) in c.iter() {
                m.rows[i].insert(j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, cols);
        for (i, j, x) in entries {
            if i >= rows {
                return Err(LinalgError::IndexOutOfRange { index: i, dim: rows });
            }
            if j >= cols {
                return Err(LinalgError::IndexOutOfRange { index: j, dim: cols });
            }
            m.add_at(i, j, &x);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.rows[i].get(&j).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_at(&mut self, i: usize, j: usize, x: &Scalar) {
        if x.is_zero() {
            return;
        }
        let row = &mut self.rows[i];
        let v = row.entry(j).or_insert_with(Scalar::zero);
        *v += x;
        if v.is_zero() {
            row.remove(&j);
        }
    }

    pub fn row(&self, i: usize) -> SparseVector {
        SparseVector { dim: self.cols, entries: self.rows[i].clone() }
    }

    pub fn column(&self, j: usize) -> SparseVector {
        let entries = self
            .rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.get(&j).map(|x| (i, x.clone())))
            .collect();
        SparseVector { dim: self.rows.len(), entries }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = Self::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for (&j, x) in r {
                t.rows[j].insert(i, x.clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &SparseVector) -> Result<SparseVector, LinalgError> {
        v.check_dim(self.cols)?;
        let entries = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let s = r
                    .iter()
                    .filter_map(|(&j, a)| v.entry(j).map(|x| a * x))
                    .fold(Scalar::zero(), |acc, t| acc + t);
                (i, s)
            })
            .filter(|(_, s)| !s.is_zero())
            .collect();
        Ok(SparseVector { dim: self.rows.len(), entries })
    }

    /// `[self | column]`.
    fn augmented(&self, column: &SparseVector) -> SparseMatrix {
        let mut m = self.clone();
        for (i, x) in column.iter() {
            m.rows[i].insert(self.cols, x.clone());
        }
        m.cols += 1;
        m
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: SparseMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn row_axpy(target: &mut Row, factor: &Scalar, source: &Row) {
    for (&j, x) in source {
        let t = factor * x;
        match target.entry(j) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(t);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += t;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

pub fn rref(m: &SparseMatrix) -> Rref {
    let mut rows = m.rows.clone();
    let mut pivots = Vec::new();
    let mut next = 0;
    // Remaining rows are zero left of the next pivot column, so the pivot
    // column is the smallest leading index among them.
    while let Some(col) = rows[next..].iter().filter_map(|r| r.keys().next().copied()).min() {
        let pick = next + rows[next..].iter().position(|r| r.keys().next() == Some(&col)).unwrap();
        rows.swap(next, pick);
        let inv = rows[next][&col].recip();
        if !inv.is_one() {
            for x in rows[next].values_mut() {
                *x *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut rows[next]);
        for (k, r) in rows.iter_mut().enumerate() {
            if k == next {
                continue;
            }
            if let Some(a) = r.get(&col) {
                let factor = -a.clone();
                row_axpy(r, &factor, &pivot_row);
            }
        }
        rows[next] = pivot_row;
        pivots.push(col);
        next += 1;
    }
    Rref { matrix: SparseMatrix { cols: m.cols, rows }, pivots }
}

pub fn rank(m: &SparseMatrix) -> usize {
    rref(m).rank()
}

/// Proof that `m·x = rhs` has no solution: a row combination `y` with
/// `yᵀm = 0` and `yᵀrhs = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistency {
    /// Index of the first inconsistent row in the reduced augmented system.
    pub pivot_row: usize,
    pub combination: SparseVector,
}

impl Inconsistency {
    pub fn check(&self, m: &SparseMatrix, rhs: &SparseVector) -> bool {
        let Ok(left) = m.transpose().mul_vec(&self.combination) else {
            return false;
        };
        left.is_zero() && self.combination.dot(rhs).is_one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(SparseVector),
    Unsolvable(Inconsistency),
}

impl SolveOutcome {
    pub fn solution(self) -> Option<SparseVector> {
        match self {
            SolveOutcome::Solved(x) => Some(x),
            SolveOutcome::Unsolvable(_) => None,
        }
    }
}

/// Solves `m·x = rhs`, setting every free variable to zero.
pub fn solve(m: &SparseMatrix, rhs: &SparseVector) -> Result<SolveOutcome, LinalgError> {
    rhs.check_dim(m.rows())?;
    let reduced = rref(&m.augmented(rhs));
    if let Some(k) = reduced.pivots.iter().position(|&c| c == m.cols) {
        // Fredholm alternative: [mᵀ; rhsᵀ] y = [0; 1] is solvable exactly now.
        let mut dual = m.transpose();
        dual.rows.push(rhs.entries.clone());
        let target = SparseVector::unit(m.cols + 1, m.cols);
        let combination = match solve(&dual, &target)? {
            SolveOutcome::Solved(y) => y,
            SolveOutcome::Unsolvable(_) => unreachable!("dual system of an inconsistent system is solvable"),
        };
        return Ok(SolveOutcome::Unsolvable(Inconsistency { pivot_row: k, combination }));
    }
    let mut x = SparseVector::zeros(m.cols);
    for (k, &c) in reduced.pivots.iter().enumerate() {
        if let Some(v) = reduced.matrix.rows[k].get(&m.cols) {
            x.set(c, v.clone());
        }
    }
    Ok(SolveOutcome::Solved(x))
}

pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVector> {
    kernel_from_rref(&rref(m))
}

fn kernel_from_rref(r: &Rref) -> Vec<SparseVector> {
    let cols = r.matrix.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut slot = vec![usize::MAX; cols];
    for (k, &c) in free.iter().enumerate() {
        slot[c] = k;
    }
    let mut basis: Vec<SparseVector> = free.iter().map(|&c| SparseVector::unit(cols, c)).collect();
    for (k, &p) in r.pivots.iter().enumerate() {
        for (&c, x) in &r.matrix.rows[k] {
            if !is_pivot[c] {
                basis[slot[c]].set(p, -x.clone());
            }
        }
    }
    basis
}

/// Columns of `m` at the pivot positions of its rref.
pub fn image_basis(m: &SparseMatrix) -> Vec<SparseVector> {
    let r = rref(m);
    let t = m.transpose();
    r.pivots.iter().map(|&c| t.row(c)).collect()
}

/// Kernel basis and rank from a single elimination.
pub fn kernel_and_rank(m: &SparseMatrix) -> (Vec<SparseVector>, usize) {
    let r = rref(m);
    (kernel_from_rref(&r), r.rank())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanMembership {
    InSpan(Vec<Scalar>),
    NotInSpan,
}

/// Expansion coefficients of `v` in `basis`, if `v` lies in its span.
pub fn in_span(v: &SparseVector, basis: &[SparseVector]) -> Result<SpanMembership, LinalgError> {
    for b in basis {
        b.check_dim(v.dim())?;
    }
    let m = SparseMatrix::from_columns(v.dim(), basis)?;
    Ok(match solve(&m, v)? {
        SolveOutcome::Solved(x) => SpanMembership::InSpan(x.to_dense()),
        SolveOutcome::Unsolvable(_) => SpanMembership::NotInSpan,
    })
}

pub fn invert(m: &SparseMatrix) -> Option<SparseMatrix> {
    let n = m.rows();
    if m.cols() != n {
        return None;
    }
    let mut aug = m.clone();
    aug.cols = 2 * n;
    for i in 0..n {
        aug.rows[i].insert(n + i, Scalar::one());
    }
    let r = rref(&aug);
    if r.rank() < n || r.pivots[..n].iter().copied().ne(0..n) {
        return None;
    }
    let rows = r
        .matrix
        .rows
        .into_iter()
        .map(|row| row.into_iter().filter(|(j, _)| *j >= n).map(|(j, x)| (j - n, x)).collect())
        .collect();
    Some(SparseMatrix { cols: n, rows })
}

/// Incrementally maintained echelon basis of a subspace.
///
/// Stored vectors are normalized to 1 at their pivot, which is their lowest
/// nonzero index.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    dim: usize,
    by_pivot: BTreeMap<usize, SparseVector>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        Self { dim, by_pivot: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.by_pivot.len()
    }

    pub fn reduce(&self, v: &SparseVector) -> SparseVector {
        let mut v = v.clone();
        let mut cursor = 0;
        loop {
            let next = v.entries.range(cursor..).find(|(i, _)| self.by_pivot.contains_key(i));
            let Some((&p, x)) = next else { break };
            let factor = -x.clone();
            v.axpy(&factor, &self.by_pivot[&p]);
            cursor = p + 1;
        }
        v
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: &SparseVector) -> Result<bool, LinalgError> {
        v.check_dim(self.dim)?;
        let r = self.reduce(v);
        let Some((p, x)) = r.leading() else { return Ok(false) };
        let inv = x.recip();
        self.by_pivot.insert(p, r.scaled(&inv));
        Ok(true)
    }
}
