//! The k-matrix: a dense matrix of bounded nonnegative integers.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::{Int, Mat, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("entry {value} at row {row}, column {col} exceeds the bound k={k}")]
    EntryTooLarge { row: usize, col: usize, value: u32, k: u32 },
    #[error("vector has length {found} but the matrix has {expected} rows")]
    LengthMismatch { found: usize, expected: usize },
    #[error("multiplicity for row {0} is not a nonnegative integer")]
    BadMultiplicity(usize),
    #[error("stacking scale must be positive")]
    NonPositiveScale,
    #[error("stack would have no rows")]
    EmptyStack,
}

/// A matrix with entries in `{0, ..., k}`.
///
/// `k` is a declared bound and need not be attained.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KMatrix {
    rows: usize,
    cols: usize,
    k: u32,
    data: Vec<u32>,
}

/// A nonnegative integer vector `x` with `A^T x = alpha * 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leveler {
    pub x: Vec<u64>,
    pub alpha: u64,
}

impl Leveler {
    /// Number of rows of the level matrix this leveler stacks.
    pub fn row_count(&self) -> u64 {
        self.x.iter().sum()
    }
}

impl KMatrix {
    pub fn new(rows: usize, cols: usize, k: u32, data: Vec<u32>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty);
        }
        assert_eq!(data.len(), rows * cols, "data length must be rows * cols");
        if let Some(pos) = data.iter().position(|&v| v > k) {
            return Err(MatrixError::EntryTooLarge {
                row: pos / cols,
                col: pos % cols,
                value: data[pos],
                k,
            });
        }
        Ok(KMatrix { rows, cols, k, data })
    }

    /// Build from rows; `k` defaults to the largest entry.
    pub fn from_rows(rows: &[Vec<u32>], k: Option<u32>) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(MatrixError::Empty);
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(MatrixError::Ragged { row, found: r.len(), expected: cols });
        }
        let data: Vec<u32> = rows.iter().flatten().copied().collect();
        let k = k.unwrap_or_else(|| data.iter().copied().max().unwrap_or(0));
        KMatrix::new(rows.len(), cols, k, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.data.chunks(self.cols)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.iter_rows().map(<[u32]>::to_vec).collect()
    }

    pub fn max_entry(&self) -> u32 {
        self.data.iter().copied().max().unwrap_or(0)
    }

    /// Same entries, different declared bound. Fails if `k` is below the max entry.
    pub fn with_k(&self, k: u32) -> Result<Self, MatrixError> {
        KMatrix::new(self.rows, self.cols, k, self.data.clone())
    }

    pub fn has_zero_row(&self) -> bool {
        self.iter_rows().any(|r| r.iter().all(|&v| v == 0))
    }

    pub fn column_sums(&self) -> Vec<u64> {
        let mut sums = vec![0u64; self.cols];
        for r in self.iter_rows() {
            for (s, &v) in sums.iter_mut().zip(r) {
                *s += u64::from(v);
            }
        }
        sums
    }

    /// The common column sum, if all column sums agree.
    pub fn is_level(&self) -> Option<u64> {
        let sums = self.column_sums();
        sums.iter().all_equal().then(|| sums[0])
    }

    /// Entrywise `b -> t - b` where `t` is the largest entry; the result is a `t`-matrix.
    pub fn complement(&self) -> KMatrix {
        let t = self.max_entry();
        KMatrix {
            rows: self.rows,
            cols: self.cols,
            k: t,
            data: self.data.iter().map(|&v| t - v).collect(),
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Result<KMatrix, MatrixError> {
        let data = idx.iter().flat_map(|&i| self.row(i).iter().copied()).collect();
        KMatrix::new(idx.len(), self.cols, self.k, data)
    }

    /// Stack `counts[i]` copies of row `i`, in ascending row order with copies adjacent.
    pub fn stack_counts(&self, counts: &[u64]) -> Result<KMatrix, MatrixError> {
        if counts.len() != self.rows {
            return Err(MatrixError::LengthMismatch { found: counts.len(), expected: self.rows });
        }
        let mut data = Vec::new();
        for (i, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                data.extend_from_slice(self.row(i));
            }
        }
        if data.is_empty() {
            return Err(MatrixError::EmptyStack);
        }
        KMatrix::new(data.len() / self.cols, self.cols, self.k, data)
    }

    /// `L(A, r, x)`: stack `r * x_i` copies of row `i`.
    pub fn stack(&self, r: &Int, x: &[Rat]) -> Result<KMatrix, MatrixError> {
        if !r.is_positive() {
            return Err(MatrixError::NonPositiveScale);
        }
        if x.len() != self.rows {
            return Err(MatrixError::LengthMismatch { found: x.len(), expected: self.rows });
        }
        let counts = x
            .iter()
            .enumerate()
            .map(|(i, xi)| {
                let v = xi * Rat::from_integer(r.clone());
                if !v.is_integer() || v.is_negative() {
                    return Err(MatrixError::BadMultiplicity(i));
                }
                v.to_integer().to_u64().ok_or(MatrixError::BadMultiplicity(i))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.stack_counts(&counts)
    }

    /// `alpha` if `A^T x = alpha * 1`.
    pub fn leveler_check(&self, x: &[u64]) -> Result<Option<u64>, MatrixError> {
        if x.len() != self.rows {
            return Err(MatrixError::LengthMismatch { found: x.len(), expected: self.rows });
        }
        let mut sums = vec![0u64; self.cols];
        for (r, &c) in self.iter_rows().zip(x) {
            for (s, &v) in sums.iter_mut().zip(r) {
                *s += c * u64::from(v);
            }
        }
        Ok(sums.iter().all_equal().then(|| sums[0]))
    }

    /// Rows sorted ascending; equal for two matrices iff they agree up to row order.
    pub fn sorted_rows(&self) -> Vec<Vec<u32>> {
        let mut rows = self.to_rows();
        rows.sort();
        rows
    }

    pub fn to_int_mat(&self) -> Mat<Int> {
        Mat::new(self.rows, self.cols, self.data.iter().map(|&v| Int::from(v)).collect())
            .expect("k-matrices are never empty")
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        let mut best: Option<CanonicalForm> = None;
        let mut permuted = vec![0u32; self.cols];
        for perm in (0..self.cols).permutations(self.cols) {
            let mut rows: Vec<(Vec<u32>, usize)> = self
                .iter_rows()
                .enumerate()
                .map(|(i, r)| {
                    for (dst, &src) in permuted.iter_mut().zip(&perm) {
                        *dst = r[src];
                    }
                    (permuted.clone(), i)
                })
                .collect();
            rows.sort();
            let better = match &best {
                None => true,
                Some(b) => rows.iter().map(|(r, _)| r.as_slice()).lt(b.matrix.iter_rows()),
            };
            if better {
                let row_perm = rows.iter().map(|(_, i)| *i).collect();
                let data = rows.into_iter().flat_map(|(r, _)| r).collect();
                best = Some(CanonicalForm {
                    matrix: KMatrix { rows: self.rows, cols: self.cols, k: self.k, data },
                    row_perm,
                    col_perm: perm,
                });
            }
        }
        best.expect("at least one column permutation")
    }
}

impl fmt::Display for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.iter_rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", r.iter().join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KMatrix(k={}, [{}])", self.k, self.iter_rows().map(|r| r.iter().join(" ")).join("; "))
    }
}

/// Representative of a matrix's class under row and column permutations.
///
/// `row_perm[i]` is the source row placed at position `i`, and `col_perm[j]`
/// the source column placed at position `j`. Equality, ordering and hashing
/// look only at the canonical entries.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub matrix: KMatrix,
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
}

impl CanonicalForm {
    fn key(&self) -> (usize, usize, &[u32]) {
        (self.matrix.rows, self.matrix.cols, &self.matrix.data)
    }
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for CanonicalForm {}

impl std::hash::Hash for CanonicalForm {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// Memo table for canonical forms, keyed on matrix content.
#[derive(Default)]
pub struct CanonicalCache {
    map: HashMap<(usize, usize, Vec<u32>), CanonicalForm>,
}

impl CanonicalCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, m: &KMatrix) -> CanonicalForm {
        self.map
            .entry((m.rows, m.cols, m.data.clone()))
            .or_insert_with(|| m.canonical_form())
            .clone()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Test helper: build from literal rows with `k` = max entry.
pub fn kmat(rows: &[&[u32]]) -> KMatrix {
    KMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), None)
        .expect("valid literal matrix")
}

pub(crate) fn is_zero_row(r: &[u32]) -> bool {
    r.iter().all(Zero::is_zero)
}
