//! Reducibility of level matrices and Hilbert bases of leveler cones.
//!
//! A multiset of rows is level exactly when the *difference vectors*
//! `(a_1 - a_0, ..., a_{n-1} - a_0)` of its rows sum to zero. Irreducible
//! levelers are therefore the minimal zero-sum multisets of rows, and every
//! proper sub-multiset of one is zero-sum free. [`hilbert_basis`] walks the
//! zero-sum-free multisets in nondecreasing row order and closes each one
//! with every row that cancels its running sum; every irreducible leveler
//! is produced exactly once, as its zero-sum-free prefix plus its largest
//! row.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::bounds;
use crate::constructions::universal_matrix;
use crate::matrix::{is_zero_row, CanonicalCache, CanonicalForm, KMatrix, Leveler, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IrreducibilityError {
    #[error("matrix is not level (column sums {0:?})")]
    NotLevel(Vec<u64>),
    #[error("vector {0:?} is not a leveler of the matrix")]
    NotALeveler(Vec<u64>),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Rows of a level proper sub-matrix, and its common column sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducibilityWitness {
    /// Row indices, ascending. Always `0 < rows.len() < m`.
    pub rows: Vec<usize>,
    pub sum: u64,
}

impl ReducibilityWitness {
    /// Indices not in the witness; these also form a level sub-matrix.
    pub fn complement(&self, m: usize) -> Vec<usize> {
        (0..m).filter(|i| self.rows.binary_search(i).is_err()).collect()
    }
}

fn require_level(m: &KMatrix) -> Result<u64, IrreducibilityError> {
    m.is_level().ok_or_else(|| IrreducibilityError::NotLevel(m.column_sums()))
}

/// Groups columns that are linked by a common row support. Rows are assigned
/// to the group of their support; zero rows belong to no group.
fn column_components(m: &KMatrix) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = m.cols();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for r in m.iter_rows() {
        let mut support = r.iter().enumerate().filter(|(_, &v)| v > 0).map(|(j, _)| j);
        if let Some(first) = support.next() {
            for j in support {
                let (a, b) = (find(&mut parent, first), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for j in 0..n {
        let root = find(&mut parent, j);
        groups.entry(root).or_default().0.push(j);
    }
    for (i, r) in m.iter_rows().enumerate() {
        if let Some(j) = r.iter().position(|&v| v > 0) {
            let root = find(&mut parent, j);
            groups.get_mut(&root).expect("root exists").1.push(i);
        }
    }
    groups.into_values().collect()
}

/// Subset-sum DP over the given rows restricted to `cols`. Returns, for each
/// `s` in `(0, total)` such that some row subset sums to `s` in every column
/// of the component, the subset found first (rows taken in ascending order).
fn level_subsets(m: &KMatrix, cols: &[usize], rows: &[usize], total: u64) -> BTreeMap<u64, Vec<usize>> {
    let c = cols.len();
    let mut states: Vec<u64> = vec![0; c];
    let mut pred: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX)];
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    index.insert(vec![0; c], 0);
    let mut hits: Vec<(u64, usize)> = Vec::new();
    let mut next = vec![0u64; c];
    for &r in rows {
        let row = m.row(r);
        let existing = pred.len();
        for id in 0..existing {
            let base = &states[id * c..(id + 1) * c];
            let mut fits = true;
            for (j, &col) in cols.iter().enumerate() {
                next[j] = base[j] + u64::from(row[col]);
                fits &= next[j] <= total;
            }
            if !fits || index.contains_key(next.as_slice()) {
                continue;
            }
            let new_id = pred.len();
            index.insert(next.clone(), new_id);
            states.extend_from_slice(&next);
            pred.push((id, r));
            let s = next[0];
            if s > 0 && s < total && next.iter().all(|&v| v == s) {
                hits.push((s, new_id));
            }
        }
    }
    let mut out = BTreeMap::new();
    for (s, mut id) in hits {
        let mut subset = Vec::new();
        while id != 0 {
            let (p, r) = pred[id];
            subset.push(r);
            id = p;
        }
        subset.sort_unstable();
        out.entry(s).or_insert(subset);
    }
    out
}

/// Find a proper nonempty set of rows forming a level matrix.
///
/// Returns `None` iff the matrix is irreducible. When several common sums
/// are possible the smallest one is reported.
pub fn is_reducible(m: &KMatrix) -> Result<Option<ReducibilityWitness>, IrreducibilityError> {
    let total = require_level(m)?;
    if m.rows() == 1 {
        return Ok(None);
    }
    if let Some(z) = m.iter_rows().position(is_zero_row) {
        return Ok(Some(ReducibilityWitness { rows: vec![z], sum: 0 }));
    }
    // Every column is covered here: a zero column would force total == 0 and
    // therefore only zero rows.
    let mut comps = column_components(m);
    comps.sort_by_key(|(cols, rows)| (rows.len(), cols.len()));
    let mut common: Option<BTreeMap<u64, Vec<usize>>> = None;
    for (cols, rows) in &comps {
        let found = level_subsets(m, cols, rows, total);
        common = Some(match common {
            None => found,
            Some(prev) => prev
                .into_iter()
                .filter_map(|(s, mut acc)| {
                    found.get(&s).map(|more| {
                        acc.extend_from_slice(more);
                        (s, acc)
                    })
                })
                .collect(),
        });
        if common.as_ref().is_some_and(BTreeMap::is_empty) {
            return Ok(None);
        }
    }
    Ok(common.and_then(|c| c.into_iter().next()).map(|(sum, mut rows)| {
        rows.sort_unstable();
        ReducibilityWitness { rows, sum }
    }))
}

/// Split the rows into irreducible level blocks by repeatedly splitting on
/// witnesses. Blocks are returned as row-index lists into `m`.
pub fn decompose_rows(m: &KMatrix) -> Result<Vec<Vec<usize>>, IrreducibilityError> {
    require_level(m)?;
    let mut out = Vec::new();
    let mut pending = vec![(0..m.rows()).collect::<Vec<_>>()];
    while let Some(idx) = pending.pop() {
        let sub = m.select_rows(&idx)?;
        match is_reducible(&sub)? {
            None => out.push(idx),
            Some(w) => {
                let rest = w.complement(idx.len());
                // push the remainder first so the witness block is handled next
                pending.push(rest.iter().map(|&i| idx[i]).collect());
                pending.push(w.rows.iter().map(|&i| idx[i]).collect());
            }
        }
    }
    Ok(out)
}

pub fn decompose_into_irreducibles(m: &KMatrix) -> Result<Vec<KMatrix>, IrreducibilityError> {
    decompose_rows(m)?
        .iter()
        .map(|idx| m.select_rows(idx).map_err(Into::into))
        .collect()
}

/// Whether `x` is an irreducible leveler of `a`, decided on the stacked
/// matrix. The zero vector is not counted as irreducible.
pub fn is_irreducible_leveler(a: &KMatrix, x: &[u64]) -> Result<bool, IrreducibilityError> {
    if a.leveler_check(x)?.is_none() {
        return Err(IrreducibilityError::NotALeveler(x.to_vec()));
    }
    if x.iter().all(|&v| v == 0) {
        return Ok(false);
    }
    Ok(is_reducible(&a.stack_counts(x)?)?.is_none())
}

/// Exhaustive search for a leveler `y` with `0 < y < x`. Cost is the product
/// of `x_i + 1`, so this is only for small vectors.
pub fn find_dominated_leveler(a: &KMatrix, x: &[u64]) -> Result<Option<Vec<u64>>, IrreducibilityError> {
    if a.leveler_check(x)?.is_none() {
        return Err(IrreducibilityError::NotALeveler(x.to_vec()));
    }
    let mut y = vec![0u64; x.len()];
    loop {
        // odometer increment
        let mut i = 0;
        while i < y.len() && y[i] == x[i] {
            y[i] = 0;
            i += 1;
        }
        if i == y.len() {
            return Ok(None);
        }
        y[i] += 1;
        if y != x && a.leveler_check(&y)?.is_some() {
            return Ok(Some(y));
        }
    }
}

/// The irreducible levelers of a matrix, as far as the row budget reaches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertBasis {
    /// Sorted lexicographically by `x`.
    pub generators: Vec<Leveler>,
    pub budget: u64,
}

impl HilbertBasis {
    pub fn max_row_count(&self) -> u64 {
        self.generators.iter().map(Leveler::row_count).max().unwrap_or(0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HilbertError {
    #[error("difference vectors do not fit the packed key ({cols} columns, entry bound {k}, budget {budget})")]
    KeyOverflow { cols: usize, k: u32, budget: u64 },
    #[error("search node limit {limit} exceeded; {} generators found, largest has {} rows", partial.generators.len(), partial.max_row_count())]
    NodeLimit { limit: u64, partial: HilbertBasis },
}

#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_nodes: 500_000_000 }
    }
}

struct Search<'a> {
    keys: Vec<i64>,
    closers: HashMap<i64, Vec<usize>>,
    budget: u64,
    limit: u64,
    nodes: &'a AtomicU64,
    aborted: &'a AtomicBool,
}

impl Search<'_> {
    /// `seq` is nonempty, nondecreasing and zero-sum free with nonempty
    /// subset sums `sums` (sorted) and total `total`.
    fn walk(&self, seq: &mut Vec<usize>, sums: &[i64], total: i64, out: &mut Vec<Vec<usize>>) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.limit {
            self.aborted.store(true, Ordering::Relaxed);
            return;
        }
        let last = *seq.last().expect("nonempty");
        if let Some(rows) = self.closers.get(&-total) {
            for &r in rows.iter().filter(|&&r| r >= last) {
                let mut atom = seq.clone();
                atom.push(r);
                out.push(atom);
            }
        }
        if seq.len() as u64 + 2 > self.budget {
            return;
        }
        for r in last..self.keys.len() {
            let v = self.keys[r];
            if v == 0 || sums.binary_search(&-v).is_ok() {
                continue;
            }
            let mut next = Vec::with_capacity(2 * sums.len() + 1);
            merge_shifted(sums, v, &mut next);
            seq.push(r);
            self.walk(seq, &next, total + v, out);
            seq.pop();
        }
    }
}

/// `out = sorted(sums ∪ (sums + v) ∪ {v})`.
fn merge_shifted(sums: &[i64], v: i64, out: &mut Vec<i64>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    let mut single = Some(v);
    loop {
        let a = sums.get(i).copied();
        let b = sums.get(j).map(|s| s + v);
        let pick = [a, b, single].into_iter().flatten().min();
        let Some(p) = pick else { break };
        if a == Some(p) {
            i += 1;
        }
        if b == Some(p) {
            j += 1;
        }
        if single == Some(p) {
            single = None;
        }
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
}

/// All irreducible levelers of `a` with at most `budget` rows.
///
/// When `budget` is at least the largest row count of an irreducible level
/// matrix built from rows of `a`, this is the full Hilbert basis of the
/// leveler cone.
pub fn hilbert_basis(a: &KMatrix, budget: u64) -> Result<HilbertBasis, HilbertError> {
    hilbert_basis_with(a, budget, &SearchLimits::default())
}

pub fn hilbert_basis_with(a: &KMatrix, budget: u64, limits: &SearchLimits) -> Result<HilbertBasis, HilbertError> {
    let n = a.cols();
    let kmax = a.max_entry().max(1);
    let radix = 2 * u128::from(kmax) * u128::from(budget.max(1)) + 1;
    let overflow = HilbertError::KeyOverflow { cols: n, k: kmax, budget };
    let span = (1..n).try_fold(1u128, |acc, _| acc.checked_mul(radix).filter(|&v| v < (1 << 62)));
    if span.is_none() {
        return Err(overflow);
    }
    let radix = radix as i64;
    let keys: Vec<i64> = a
        .iter_rows()
        .map(|r| {
            r[1..].iter().rev().fold(0i64, |acc, &v| acc * radix + (i64::from(v) - i64::from(r[0])))
        })
        .collect();
    let mut closers: HashMap<i64, Vec<usize>> = HashMap::new();
    for (i, &key) in keys.iter().enumerate() {
        closers.entry(key).or_default().push(i);
    }

    let nodes = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let search = Search { keys, closers, budget, limit: limits.max_nodes, nodes: &nodes, aborted: &aborted };

    let mut atoms: Vec<Vec<usize>> = Vec::new();
    if budget >= 1 {
        atoms.extend(search.keys.iter().enumerate().filter(|(_, &k)| k == 0).map(|(i, _)| vec![i]));
    }
    if budget >= 2 {
        let branches: Vec<Vec<Vec<usize>>> = (0..a.rows())
            .into_par_iter()
            .filter(|&r| search.keys[r] != 0)
            .map(|r| {
                let mut out = Vec::new();
                let v = search.keys[r];
                search.walk(&mut vec![r], &[v], v, &mut out);
                out
            })
            .collect();
        atoms.extend(branches.into_iter().flatten());
    }

    let mut generators: Vec<Leveler> = atoms
        .into_iter()
        .map(|seq| {
            let mut x = vec![0u64; a.rows()];
            for r in seq {
                x[r] += 1;
            }
            let alpha = a.leveler_check(&x).expect("length matches").expect("atoms are level");
            Leveler { x, alpha }
        })
        .collect();
    generators.sort();
    generators.dedup();
    let basis = HilbertBasis { generators, budget };
    if aborted.load(Ordering::Relaxed) {
        return Err(HilbertError::NodeLimit { limit: limits.max_nodes, partial: basis });
    }
    Ok(basis)
}

/// Result of an exhaustive search for the largest irreducible k-matrix with n columns.
#[derive(Debug, Clone)]
pub struct EllResult {
    pub n: usize,
    pub k: u32,
    pub value: u64,
    pub budget: u64,
    pub budget_source: &'static str,
    pub generator_count: usize,
    /// Maximizing generators, as levelers of the universal row matrix.
    pub extremal_generators: Vec<Leveler>,
    /// Distinct canonical forms of the maximizing matrices, sorted.
    pub extremal_classes: Vec<CanonicalForm>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EllError {
    #[error("ell search needs n >= 2 and k >= 1, got n={n}, k={k}")]
    Parameters { n: usize, k: u32 },
    #[error("search budget exceeded after {nodes} nodes (row budget {budget}); partial lower bound {lower_bound}")]
    Resource { nodes: u64, budget: u64, lower_bound: u64 },
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// Compute the largest row count of an irreducible level k-matrix with n
/// columns, with the row budget taken from [`bounds::search_budget`].
pub fn ell_search(n: usize, k: u32) -> Result<EllResult, EllError> {
    ell_search_with(n, k, None, &SearchLimits::default())
}

pub fn ell_search_with(
    n: usize,
    k: u32,
    budget: Option<u64>,
    limits: &SearchLimits,
) -> Result<EllResult, EllError> {
    if n < 2 || k < 1 {
        return Err(EllError::Parameters { n, k });
    }
    let (budget, budget_source) = match budget {
        Some(b) => (b, "user"),
        None => {
            let (b, src) = bounds::search_budget(n as u64, k as u64);
            (b.to_u64().unwrap_or(u64::MAX), src)
        }
    };
    let u = universal_matrix(n, k);
    let basis = match hilbert_basis_with(&u, budget, limits) {
        Ok(b) => b,
        Err(HilbertError::NodeLimit { limit, partial }) => {
            return Err(EllError::Resource { nodes: limit, budget, lower_bound: partial.max_row_count() })
        }
        Err(e) => return Err(e.into()),
    };
    let value = basis.max_row_count();
    let extremal_generators: Vec<Leveler> =
        basis.generators.iter().filter(|g| g.row_count() == value).cloned().collect();
    let mut cache = CanonicalCache::new();
    let classes: BTreeSet<CanonicalForm> = extremal_generators
        .iter()
        .map(|g| cache.get(&u.stack_counts(&g.x).expect("generator is a nonempty leveler")))
        .collect();
    Ok(EllResult {
        n,
        k,
        value,
        budget,
        budget_source,
        generator_count: basis.generators.len(),
        extremal_generators,
        extremal_classes: classes.into_iter().collect(),
    })
}
