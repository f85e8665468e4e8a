//! Generators for the explicit matrix families.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::bounds;
use crate::irreducible::{ell_search, is_reducible, EllError, IrreducibilityError};
use crate::linalg::{scale_to_integer, Int, Rat};
use crate::matrix::{CanonicalForm, KMatrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("input violates a precondition: {0}")]
    Precondition(String),
    #[error("construction would have {0} rows, above the materialization cap")]
    TooLarge(Int),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Irreducibility(#[from] IrreducibilityError),
    #[error(transparent)]
    Ell(#[from] EllError),
}

/// Largest matrix the generators will materialize.
pub const MAX_ROWS: u64 = 2_000_000;

pub fn identity(n: usize) -> KMatrix {
    assert!(n >= 1, "identity needs n >= 1");
    let data = (0..n * n).map(|i| u32::from(i / n == i % n)).collect();
    KMatrix::new(n, n, 1, data).expect("identity is a 1-matrix")
}

/// All nonzero rows of `{0..k}^n` in lexicographic order. The distinct rows
/// of any zero-row-free k-matrix with n columns are among these.
pub fn universal_matrix(n: usize, k: u32) -> KMatrix {
    assert!(n >= 1 && k >= 1, "universal matrix needs n >= 1 and k >= 1");
    let data: Vec<u32> = (0..n)
        .map(|_| 0..=k)
        .multi_cartesian_product()
        .skip(1)
        .flatten()
        .collect();
    let rows = data.len() / n;
    KMatrix::new(rows, n, k, data).expect("entries bounded by k")
}

/// `J_r`: zeros on the diagonal, ones elsewhere.
pub fn all_ones_off_diagonal(r: usize) -> KMatrix {
    let data = (0..r * r).map(|i| u32::from(i / r != i % r)).collect();
    KMatrix::new(r, r, 1, data).expect("J_r is a 1-matrix")
}

pub fn primes_up_to(x: u64) -> Vec<u64> {
    if x < 2 {
        return Vec::new();
    }
    let x = x as usize;
    let mut composite = vec![false; x + 1];
    let mut primes = Vec::new();
    for p in 2..=x {
        if composite[p] {
            continue;
        }
        primes.push(p as u64);
        for q in (p * p..=x).step_by(p) {
            composite[q] = true;
        }
    }
    primes
}

/// Parameters of the block-diagonal matrix built from `J_{p+1}` blocks for
/// every prime `p <= x`, each block row repeated `P/p` times where `P` is the
/// product of the primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeBlockSpec {
    pub x: u64,
    pub primes: Vec<u64>,
    pub block_sizes: Vec<usize>,
    /// Number of columns, the sum of the block sizes.
    pub n: usize,
    /// Product of the primes; also the common column sum.
    pub product: Int,
    /// `P / p_i` for each block.
    pub repetitions: Vec<Int>,
    /// `sum_i (P / p_i) (p_i + 1)`.
    pub m: Int,
}

impl PrimeBlockSpec {
    pub fn new(x: u64) -> Result<Self, ConstructionError> {
        if x < 2 {
            return Err(ConstructionError::Parameters(format!("prime block needs x >= 2, got {x}")));
        }
        let primes = primes_up_to(x);
        let block_sizes: Vec<usize> = primes.iter().map(|&p| p as usize + 1).collect();
        let product: Int = primes.iter().map(|&p| Int::from(p)).product();
        let repetitions: Vec<Int> = primes.iter().map(|&p| &product / Int::from(p)).collect();
        let m = repetitions.iter().zip(&block_sizes).map(|(r, &s)| r * Int::from(s)).sum();
        Ok(PrimeBlockSpec { x, n: block_sizes.iter().sum(), primes, block_sizes, product, repetitions, m })
    }

    /// Number of primes `<= x`.
    pub fn t(&self) -> usize {
        self.primes.len()
    }
}

pub fn prime_block(x: u64) -> Result<(PrimeBlockSpec, KMatrix), ConstructionError> {
    let spec = PrimeBlockSpec::new(x)?;
    if spec.m > Int::from(MAX_ROWS) {
        return Err(ConstructionError::TooLarge(spec.m.clone()));
    }
    let n = spec.n;
    let mut data = Vec::new();
    let mut offset = 0;
    for (&size, reps) in spec.block_sizes.iter().zip(&spec.repetitions) {
        let reps = reps.to_u64().expect("bounded by MAX_ROWS");
        let block = all_ones_off_diagonal(size);
        for r in block.iter_rows() {
            let mut row = vec![0u32; n];
            row[offset..offset + size].copy_from_slice(r);
            for _ in 0..reps {
                data.extend_from_slice(&row);
            }
        }
        offset += size;
    }
    let rows = data.len() / n;
    let matrix = KMatrix::new(rows, n, 1, data)?;
    Ok((spec, matrix))
}

/// Subtract each row's minimum from that row. Keeps the declared bound.
pub fn row_normalize(h: &KMatrix) -> KMatrix {
    let data = h
        .iter_rows()
        .flat_map(|r| {
            let min = r.iter().copied().min().unwrap_or(0);
            r.iter().map(move |&v| v - min)
        })
        .collect();
    KMatrix::new(h.rows(), h.cols(), h.k(), data).expect("entries only decrease")
}

/// `t - a` entrywise, where `t` is the largest entry of the row.
pub fn row_complement(r: &[u32]) -> Vec<u32> {
    let t = r.iter().copied().max().unwrap_or(0);
    r.iter().map(|&v| t - v).collect()
}

/// The complement-pair matrix built around an irreducible matrix `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AofHSpec {
    pub source: KMatrix,
    /// Rows in lexicographic order.
    pub matrix: KMatrix,
    /// Multiplicity of each row of `matrix` in the source.
    pub multiplicities: Vec<u64>,
    /// `multiplicities / r_h`; a point of the feasible polytope of `matrix`.
    pub h: Vec<Rat>,
    pub r_h: Int,
    pub expected_m: Int,
}

/// Extend the distinct rows of `h` with one row from every remaining
/// complement pair `{R, R^c}` of nonzero rows containing a zero entry.
///
/// From each pair the lexicographically smaller row is taken, unless the
/// other one is a row of `h`.
pub fn a_of_h(h: &KMatrix) -> Result<AofHSpec, ConstructionError> {
    let pre = |msg: String| Err(ConstructionError::Precondition(msg));
    let Some(t) = h.is_level() else {
        return pre(format!("not level (column sums {:?})", h.column_sums()));
    };
    if h.rows() < 3 {
        return pre(format!("needs at least 3 rows, got {}", h.rows()));
    }
    if let Some(i) = h.iter_rows().position(|r| !r.contains(&0)) {
        return pre(format!("C1: row {i} has no zero entry"));
    }
    if let Some(i) = h.iter_rows().position(|r| r.iter().all(|&v| v == 0)) {
        return pre(format!("C2: row {i} is zero"));
    }
    let rows: BTreeSet<Vec<u32>> = h.iter_rows().map(<[u32]>::to_vec).collect();
    if let Some(r) = rows.iter().find(|r| rows.contains(&row_complement(r))) {
        return pre(format!("C3: complement of row {r:?} is also a row"));
    }
    if let Some(w) = is_reducible(h)? {
        return pre(format!("reducible (rows {:?} are level)", w.rows));
    }

    let n = h.cols();
    let k = h.k();
    let mut chosen: BTreeSet<Vec<u32>> = BTreeSet::new();
    for r in (0..n).map(|_| 0..=k).multi_cartesian_product() {
        if !r.contains(&0) || r.iter().all(|&v| v == 0) {
            continue;
        }
        let c = row_complement(&r);
        let pick = if rows.contains(&r) {
            r
        } else if rows.contains(&c) {
            c
        } else {
            r.min(c)
        };
        chosen.insert(pick);
    }
    let matrix = KMatrix::from_rows(&chosen.iter().cloned().collect::<Vec<_>>(), Some(k))?;
    let mut counts: BTreeMap<&[u32], u64> = BTreeMap::new();
    for r in h.iter_rows() {
        *counts.entry(r).or_default() += 1;
    }
    let multiplicities: Vec<u64> =
        matrix.iter_rows().map(|r| counts.get(r).copied().unwrap_or(0)).collect();
    let total = Int::from(t);
    let hvec: Vec<Rat> =
        multiplicities.iter().map(|&v| Rat::new(Int::from(v), total.clone())).collect();
    let (r_h, _) = scale_to_integer(&hvec);
    let expected_m = bounds::ah_row_count(n as u64, u64::from(k))
        .map_err(|e| ConstructionError::Parameters(e.to_string()))?;
    Ok(AofHSpec { source: h.clone(), matrix, multiplicities, h: hvec, r_h, expected_m })
}

impl AofHSpec {
    /// `stack(A, r_h, h)` as sorted rows equals the source as sorted rows.
    pub fn round_trips(&self) -> bool {
        self.matrix
            .stack(&self.r_h, &self.h)
            .map(|s| s.sorted_rows() == self.source.sorted_rows())
            .unwrap_or(false)
    }

    /// Column sum of the source equals `r_h`.
    pub fn scale_matches_level(&self) -> bool {
        self.source.is_level().map(Int::from) == Some(self.r_h.clone())
    }

    pub fn h_is_feasible(&self) -> bool {
        let cols = self.matrix.cols();
        (0..cols).all(|j| {
            let s: Rat = self
                .matrix
                .iter_rows()
                .zip(&self.h)
                .map(|(r, hi)| hi * Rat::from_integer(Int::from(r[j])))
                .fold(Rat::zero(), |a, b| a + b);
            s.is_one()
        })
    }
}

/// Canonical classes of irreducible k-matrices with two columns and the
/// largest possible number of rows, by exhaustive search.
pub fn lambert_extremals(k: u32) -> Result<Vec<CanonicalForm>, ConstructionError> {
    if k < 2 {
        return Err(ConstructionError::Parameters(format!("needs k >= 2, got {k}")));
    }
    Ok(ell_search(2, k)?.extremal_classes)
}
