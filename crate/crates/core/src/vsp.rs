//! Multipartitions of finite vector spaces `V(n, q)` over prime fields, and
//! level families of finite sets.
//!
//! A multiset of nonzero subspaces covers each nonzero vector exactly `λ`
//! times iff its incidence matrix against the 1-dimensional subspaces (lines)
//! is level with common sum `λ`, because whether `v` lies in a subspace only
//! depends on the line through `v`.
//!
//! Partition file format, one term per line:
//!
//! ```text
//! # two copies of the whole plane, then a single line
//! 2x 1,0;0,1
//! 1,1
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::bounds::{floor_times_sqrt_pow, floor_self_power_half};
use crate::irreducible::{is_reducible, IrreducibilityError};
use crate::linalg::{Int, Rat};
use crate::matrix::{KMatrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VspError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("vector has length {got}, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("coordinate {value} out of range for q = {q}")]
    Coordinate { value: u32, q: u32 },
    #[error("the zero subspace is not allowed")]
    ZeroSubspace,
    #[error("not a multipartition: column sums {0:?}")]
    NotPartition(Vec<u64>),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Irreducibility(#[from] IrreducibilityError),
}

pub fn is_prime(q: u32) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Number of lines of `V(n, q)`: `(q^n - 1) / (q - 1)`.
pub fn line_count(n: usize, q: u32) -> Result<usize, VspError> {
    let qn = (q as usize)
        .checked_pow(n as u32)
        .ok_or_else(|| VspError::Parameters(format!("V({n},{q}) is too large")))?;
    Ok((qn - 1) / (q as usize - 1))
}

/// An element of `V(n, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqVector {
    pub q: u32,
    pub coords: Vec<u32>,
}

impl FqVector {
    pub fn new(q: u32, coords: Vec<u32>) -> Result<Self, VspError> {
        if !is_prime(q) {
            return Err(VspError::NotPrime(q));
        }
        if let Some(&value) = coords.iter().find(|&&c| c >= q) {
            return Err(VspError::Coordinate { value, q });
        }
        Ok(FqVector { q, coords })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

fn inv_mod(a: u32, q: u32) -> u32 {
    // q is prime, so a^(q-2) is the inverse
    let (mut base, mut e, mut acc) = (a as u64 % q as u64, q as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q as u64;
        }
        base = base * base % q as u64;
        e >>= 1;
    }
    acc as u32
}

/// Scale so the first nonzero coordinate is 1; `None` for the zero vector.
fn normalize(v: &[u32], q: u32) -> Option<Vec<u32>> {
    let lead = *v.iter().find(|&&c| c != 0)?;
    let inv = inv_mod(lead, q) as u64;
    Some(v.iter().map(|&c| (c as u64 * inv % q as u64) as u32).collect())
}

/// Reduced row echelon form mod `q`; zero rows dropped.
fn rref_mod(mut rows: Vec<Vec<u32>>, q: u32) -> Vec<Vec<u32>> {
    let n = rows.first().map_or(0, Vec::len);
    let q64 = q as u64;
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        rows[r] = normalize(&rows[r], q).expect("pivot row is nonzero");
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c] as u64;
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = ((*x as u64 + q64 * q64 - f * y as u64) % q64) as u32;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// A nonzero subspace, identified by the set of lines it contains.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    pub n: usize,
    pub q: u32,
    /// Sorted indices into [`VectorSpace::lines`].
    pub line_set: Vec<usize>,
    /// Reduced row echelon basis.
    pub basis: Vec<FqVector>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains_line(&self, line: usize) -> bool {
        self.line_set.binary_search(&line).is_ok()
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .basis
            .iter()
            .map(|v| v.coords.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// `V(n, q)` together with an indexing of its lines.
#[derive(Debug, Clone)]
pub struct VectorSpace {
    n: usize,
    q: u32,
    lines: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl VectorSpace {
    pub fn new(n: usize, q: u32) -> Result<Self, VspError> {
        if !is_prime(q) {
            return Err(VspError::NotPrime(q));
        }
        if n == 0 {
            return Err(VspError::Parameters("n must be at least 1".into()));
        }
        let t = line_count(n, q)?;
        if t > 1 << 20 {
            return Err(VspError::Parameters(format!("V({n},{q}) has too many lines ({t})")));
        }
        // lexicographic odometer over all vectors, keeping normalized ones
        let mut lines = Vec::with_capacity(t);
        let mut v = vec![0u32; n];
        loop {
            if v.iter().find(|&&c| c != 0) == Some(&1) {
                lines.push(v.clone());
            }
            let Some(i) = (0..n).rev().find(|&i| v[i] + 1 < q) else {
                break;
            };
            v[i] += 1;
            v[i + 1..].iter_mut().for_each(|c| *c = 0);
        }
        let index = lines.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Ok(VectorSpace { n, q, lines, index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Normalized generators, lexicographic.
    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    pub fn line_of(&self, v: &[u32]) -> Option<usize> {
        normalize(v, self.q).map(|l| self.index[&l])
    }

    pub fn span(&self, vectors: &[Vec<u32>]) -> Result<Subspace, VspError> {
        for v in vectors {
            if v.len() != self.n {
                return Err(VspError::Dimension { expected: self.n, got: v.len() });
            }
            if let Some(&value) = v.iter().find(|&&c| c >= self.q) {
                return Err(VspError::Coordinate { value, q: self.q });
            }
        }
        let basis = rref_mod(vectors.to_vec(), self.q);
        if basis.is_empty() {
            return Err(VspError::ZeroSubspace);
        }
        let d = basis.len();
        let mut lines = BTreeSet::new();
        let mut coeff = vec![0u32; d];
        loop {
            let v: Vec<u32> = (0..self.n)
                .map(|j| {
                    let s: u64 = coeff.iter().zip(&basis).map(|(&c, b)| c as u64 * b[j] as u64).sum();
                    (s % self.q as u64) as u32
                })
                .collect();
            if let Some(l) = self.line_of(&v) {
                lines.insert(l);
            }
            let Some(i) = (0..d).rev().find(|&i| coeff[i] + 1 < self.q) else {
                break;
            };
            coeff[i] += 1;
            coeff[i + 1..].iter_mut().for_each(|c| *c = 0);
        }
        let line_set: Vec<usize> = lines.into_iter().collect();
        debug_assert_eq!(line_set.len(), line_count(d, self.q).unwrap());
        Ok(Subspace {
            n: self.n,
            q: self.q,
            line_set,
            basis: basis.into_iter().map(|coords| FqVector { q: self.q, coords }).collect(),
        })
    }

    pub fn one_dim_subspaces(&self) -> Vec<Subspace> {
        self.lines.iter().map(|l| self.span(std::slice::from_ref(l)).unwrap()).collect()
    }

    pub fn whole(&self) -> Subspace {
        let unit: Vec<Vec<u32>> = (0..self.n).map(|i| (0..self.n).map(|j| u32::from(i == j)).collect()).collect();
        self.span(&unit).unwrap()
    }

    /// Every nonzero subspace, ordered by dimension and then line set.
    pub fn all_subspaces(&self) -> Vec<Subspace> {
        let mut layer = self.one_dim_subspaces();
        let mut out = layer.clone();
        for _ in 1..self.n {
            let mut next = BTreeSet::new();
            for s in &layer {
                for l in &self.lines {
                    if s.contains_line(self.index[l]) {
                        continue;
                    }
                    let mut gens: Vec<Vec<u32>> = s.basis.iter().map(|b| b.coords.clone()).collect();
                    gens.push(l.clone());
                    next.insert(self.span(&gens).unwrap());
                }
            }
            layer = next.into_iter().collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    pub fn multipartition(&self, terms: Vec<Subspace>) -> Result<Multipartition, VspError> {
        if let Some(s) = terms.iter().find(|s| s.n != self.n || s.q != self.q) {
            return Err(VspError::Dimension { expected: self.n, got: s.n });
        }
        Ok(Multipartition::new(self.n, self.q, terms))
    }
}

pub fn one_dim_subspaces(n: usize, q: u32) -> Result<Vec<Subspace>, VspError> {
    Ok(VectorSpace::new(n, q)?.one_dim_subspaces())
}

pub fn span(q: u32, vectors: &[Vec<u32>]) -> Result<Subspace, VspError> {
    let n = vectors.first().ok_or(VspError::ZeroSubspace)?.len();
    VectorSpace::new(n, q)?.span(vectors)
}

/// A multiset of nonzero subspaces of `V(n, q)`, terms kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multipartition {
    pub n: usize,
    pub q: u32,
    pub terms: Vec<Subspace>,
}

impl Multipartition {
    pub fn new(n: usize, q: u32, mut terms: Vec<Subspace>) -> Self {
        terms.sort();
        Multipartition { n, q, terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiset union.
    pub fn sum(&self, other: &Multipartition) -> Multipartition {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Multipartition::new(self.n, self.q, terms)
    }

    /// Distinct terms with their multiplicities.
    pub fn grouped(&self) -> Vec<(usize, &Subspace)> {
        let mut out: Vec<(usize, &Subspace)> = Vec::new();
        for s in &self.terms {
            match out.last_mut() {
                Some((c, last)) if *last == s => *c += 1,
                _ => out.push((1, s)),
            }
        }
        out
    }

    pub fn incidence_matrix(&self) -> Result<KMatrix, VspError> {
        let t = line_count(self.n, self.q)?;
        let rows: Vec<Vec<u32>> = self
            .terms
            .iter()
            .map(|s| {
                let mut r = vec![0u32; t];
                s.line_set.iter().for_each(|&l| r[l] = 1);
                r
            })
            .collect();
        Ok(KMatrix::from_rows(&rows, Some(1))?)
    }

    pub fn select(&self, idx: &[usize]) -> Multipartition {
        Multipartition::new(self.n, self.q, idx.iter().map(|&i| self.terms[i].clone()).collect())
    }
}

impl fmt::Display for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, s) in self.grouped() {
            if c > 1 {
                writeln!(f, "{c}x {s}")?;
            } else {
                writeln!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

/// `λ` if `p` covers every nonzero vector exactly `λ > 0` times.
pub fn is_lambda_partition(p: &Multipartition) -> Option<u64> {
    if p.is_empty() {
        return None;
    }
    p.incidence_matrix().ok()?.is_level().filter(|&l| l > 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility<T> {
    Irreducible,
    /// `P = Q1 + Q2` with both parts valid multipartitions of smaller height.
    Reducible(T, T),
}

impl<T> Irreducibility<T> {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible)
    }
}

pub fn is_irreducible_partition(p: &Multipartition) -> Result<Irreducibility<Multipartition>, VspError> {
    let m = p.incidence_matrix()?;
    if is_lambda_partition(p).is_none() {
        return Err(VspError::NotPartition(m.column_sums()));
    }
    Ok(match is_reducible(&m)? {
        None => Irreducibility::Irreducible,
        Some(w) => Irreducibility::Reducible(p.select(&w.rows), p.select(&w.complement(p.len()))),
    })
}

/// Every `λ`-partition of `space`, each listed once.
pub fn enumerate_lambda_partitions(space: &VectorSpace, lambda: u64) -> Result<Vec<Multipartition>, VspError> {
    if lambda == 0 {
        return Err(VspError::Parameters("lambda must be positive".into()));
    }
    let subspaces = space.all_subspaces();
    let t = space.lines().len();
    let mut out = Vec::new();
    let mut counts = vec![0u64; subspaces.len()];
    let mut cover = vec![0u64; t];
    enumerate_rec(&subspaces, lambda, 0, &mut counts, &mut cover, &mut out);
    Ok(out
        .into_iter()
        .map(|c| {
            let terms = c
                .iter()
                .zip(&subspaces)
                .flat_map(|(&k, s)| std::iter::repeat_n(s.clone(), k as usize))
                .collect();
            Multipartition::new(space.n(), space.q(), terms)
        })
        .collect())
}

fn enumerate_rec(
    subs: &[Subspace],
    lambda: u64,
    i: usize,
    counts: &mut Vec<u64>,
    cover: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    if i == subs.len() {
        if cover.iter().all(|&c| c == lambda) {
            out.push(counts.clone());
        }
        return;
    }
    let lines = &subs[i].line_set;
    let room = lines.iter().map(|&l| lambda - cover[l]).min().unwrap_or(0);
    for c in 0..=room {
        counts[i] = c;
        lines.iter().for_each(|&l| cover[l] += c);
        enumerate_rec(subs, lambda, i + 1, counts, cover, out);
        lines.iter().for_each(|&l| cover[l] -= c);
    }
    counts[i] = 0;
}

/// A multiset of nonempty subsets of `{0, .., ground - 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelFamily {
    pub ground: usize,
    /// Each member sorted and deduplicated; members sorted.
    pub members: Vec<Vec<usize>>,
}

impl LevelFamily {
    pub fn new(ground: usize, members: Vec<Vec<usize>>) -> Result<Self, VspError> {
        let mut members: Vec<Vec<usize>> = members
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        if members.iter().any(Vec::is_empty) {
            return Err(VspError::Parameters("members must be nonempty".into()));
        }
        if let Some(&e) = members.iter().flatten().find(|&&e| e >= ground) {
            return Err(VspError::Parameters(format!("element {e} outside the ground set")));
        }
        members.sort();
        Ok(LevelFamily { ground, members })
    }

    pub fn incidence_matrix(&self) -> Result<KMatrix, VspError> {
        let rows: Vec<Vec<u32>> = self
            .members
            .iter()
            .map(|s| {
                let mut r = vec![0u32; self.ground];
                s.iter().for_each(|&e| r[e] = 1);
                r
            })
            .collect();
        Ok(KMatrix::from_rows(&rows, Some(1))?)
    }

    /// The height `λ` when every element is covered exactly `λ > 0` times.
    pub fn height(&self) -> Option<u64> {
        self.incidence_matrix().ok()?.is_level().filter(|&l| l > 0)
    }

    pub fn is_irreducible(&self) -> Result<Irreducibility<LevelFamily>, VspError> {
        let m = self.incidence_matrix()?;
        if self.height().is_none() {
            return Err(VspError::NotPartition(m.column_sums()));
        }
        let pick = |idx: &[usize]| LevelFamily {
            ground: self.ground,
            members: idx.iter().map(|&i| self.members[i].clone()).collect(),
        };
        Ok(match is_reducible(&m)? {
            None => Irreducibility::Irreducible,
            Some(w) => Irreducibility::Reducible(pick(&w.rows), pick(&w.complement(self.members.len()))),
        })
    }
}

/// Bound on the size of an irreducible level family of an `n`-set:
/// `floor((n+1)^((n+1)/2))`.
pub fn family_bound(n: u64) -> Result<Int, VspError> {
    if n < 2 {
        return Err(VspError::Parameters("n must be at least 2".into()));
    }
    Ok(floor_self_power_half(n))
}

/// Bound on the number of terms of an irreducible multipartition of
/// `V(n, q)`: `floor((t+1)^((t+1)/2))` with `t` the number of lines.
pub fn partition_bound(n: u64, q: u32) -> Result<Int, VspError> {
    if !is_prime(q) {
        return Err(VspError::NotPrime(q));
    }
    if n < 2 {
        return Err(VspError::Parameters("n must be at least 2".into()));
    }
    Ok(floor_self_power_half(line_count(n as usize, q)? as u64))
}

/// `floor(q^((n-1) q^(n-1) / 2))`, the closed form obtained by substituting
/// `q^(n-1)` for `t + 1`. Reported for comparison only; it is smaller than
/// [`partition_bound`] in general.
pub fn displayed_partition_bound(n: u64, q: u32) -> Result<Int, VspError> {
    if !is_prime(q) {
        return Err(VspError::NotPrime(q));
    }
    if n < 2 {
        return Err(VspError::Parameters("n must be at least 2".into()));
    }
    let e = (n - 1)
        .checked_mul((q as u64).checked_pow(n as u32 - 1).unwrap_or(u64::MAX))
        .filter(|&e| e < 1 << 24)
        .ok_or_else(|| VspError::Parameters("exponent too large".into()))?;
    Ok(floor_times_sqrt_pow(&Rat::from_integer(Int::from(1)), q as u64, e))
}

/// Parse a partition file for `V(n, q)`, `n` taken from the first vector.
pub fn parse_partition(text: &str, q: u32) -> Result<Multipartition, VspError> {
    if !is_prime(q) {
        return Err(VspError::NotPrime(q));
    }
    let syntax = |line: usize, msg: String| VspError::Syntax { line, msg };
    let mut space: Option<VectorSpace> = None;
    let mut terms = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (mult, body) = match line.split_once(char::is_whitespace) {
            Some((head, rest)) if head.ends_with('x') => {
                let c = head[..head.len() - 1]
                    .parse::<usize>()
                    .ok()
                    .filter(|&c| c > 0)
                    .ok_or_else(|| syntax(line_no, format!("bad multiplicity '{head}'")))?;
                (c, rest.trim())
            }
            _ => (1, line),
        };
        let vectors = body
            .split(';')
            .map(|v| {
                v.split(',')
                    .map(|c| c.trim().parse::<u32>().map_err(|_| syntax(line_no, format!("bad coordinate '{}'", c.trim()))))
                    .collect::<Result<Vec<u32>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let sp = match &space {
            Some(s) => s,
            None => space.insert(VectorSpace::new(vectors[0].len(), q)?),
        };
        let s = sp.span(&vectors).map_err(|e| syntax(line_no, e.to_string()))?;
        terms.extend(std::iter::repeat_n(s, mult));
    }
    let space = space.ok_or_else(|| syntax(0, "no terms".into()))?;
    Ok(Multipartition::new(space.n(), q, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let p: Vec<u32> = (0..20).filter(|&q| is_prime(q)).collect();
        assert_eq!(p, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn lines() {
        let v = VectorSpace::new(2, 2).unwrap();
        assert_eq!(v.lines(), &[vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(one_dim_subspaces(2, 3).unwrap().len(), 4);
        assert_eq!(one_dim_subspaces(3, 2).unwrap().len(), 7);
        assert_eq!(one_dim_subspaces(2, 4), Err(VspError::NotPrime(4)));
        let v = VectorSpace::new(2, 3).unwrap();
        assert_eq!(v.lines(), &[vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2]]);
        assert_eq!(v.line_of(&[2, 1]), Some(3));
    }

    #[test]
    fn spans() {
        let s = span(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(s.line_set, vec![0, 1, 2]);
        assert_eq!(s.dim(), 2);
        let s = span(3, &[vec![1, 1]]).unwrap();
        assert_eq!(s.line_set.len(), 1);
        assert_eq!(span(3, &[vec![2, 2]]).unwrap(), s);
        assert_eq!(span(2, &[]), Err(VspError::ZeroSubspace));
        assert_eq!(span(2, &[vec![0, 0]]), Err(VspError::ZeroSubspace));
        assert!(matches!(span(2, &[vec![1, 0], vec![1]]), Err(VspError::Dimension { .. })));
        // dependent generators
        let s = span(3, &[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.line_set.len(), 4);
    }

    #[test]
    fn subspace_counts() {
        // V(3,2): 7 lines, 7 planes, 1 whole space
        let v = VectorSpace::new(3, 2).unwrap();
        assert_eq!(v.all_subspaces().len(), 15);
        assert_eq!(VectorSpace::new(2, 3).unwrap().all_subspaces().len(), 5);
    }

    #[test]
    fn incidence_and_lambda() {
        let v = VectorSpace::new(2, 2).unwrap();
        let whole = v.multipartition(vec![v.whole()]).unwrap();
        assert_eq!(whole.incidence_matrix().unwrap().to_rows(), vec![vec![1, 1, 1]]);
        assert_eq!(is_lambda_partition(&whole), Some(1));
        let lines = v.multipartition(v.one_dim_subspaces()).unwrap();
        assert_eq!(
            lines.incidence_matrix().unwrap().to_rows(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
        assert_eq!(is_lambda_partition(&lines), Some(1));
        let bad = v.multipartition(vec![v.whole(), v.one_dim_subspaces()[0].clone()]).unwrap();
        assert_eq!(is_lambda_partition(&bad), None);
        assert!(matches!(is_irreducible_partition(&bad), Err(VspError::NotPartition(_))));
    }

    #[test]
    fn irreducibility_and_split() {
        let v = VectorSpace::new(2, 2).unwrap();
        let whole = v.multipartition(vec![v.whole()]).unwrap();
        let lines = v.multipartition(v.one_dim_subspaces()).unwrap();
        assert!(is_irreducible_partition(&whole).unwrap().is_irreducible());
        assert!(is_irreducible_partition(&lines).unwrap().is_irreducible());
        let both = whole.sum(&lines);
        assert_eq!(is_lambda_partition(&both), Some(2));
        match is_irreducible_partition(&both).unwrap() {
            Irreducibility::Reducible(a, b) => {
                let mut parts = vec![a, b];
                parts.sort_by_key(Multipartition::len);
                assert_eq!(parts, vec![whole, lines]);
            }
            Irreducibility::Irreducible => panic!("expected a split"),
        }
    }

    #[test]
    fn one_partitions_of_small_planes() {
        for q in [2, 3] {
            let v = VectorSpace::new(2, q).unwrap();
            let ps = enumerate_lambda_partitions(&v, 1).unwrap();
            let mut expected =
                vec![v.multipartition(v.one_dim_subspaces()).unwrap(), v.multipartition(vec![v.whole()]).unwrap()];
            expected.sort_by_key(Multipartition::len);
            let mut got = ps.clone();
            got.sort_by_key(Multipartition::len);
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn bounds() {
        assert_eq!(family_bound(3).unwrap(), Int::from(16));
        assert_eq!(family_bound(2).unwrap(), Int::from(5));
        assert_eq!(partition_bound(2, 2).unwrap(), Int::from(16));
        // t = 4, 5^(5/2) = 55.9
        assert_eq!(partition_bound(2, 3).unwrap(), Int::from(55));
        // q^((n-1) q^(n-1) / 2) = 2^1
        assert_eq!(displayed_partition_bound(2, 2).unwrap(), Int::from(2));
    }

    #[test]
    fn level_families() {
        let f = LevelFamily::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(f.height(), Some(2));
        assert!(f.is_irreducible().unwrap().is_irreducible());
        let g = LevelFamily::new(2, vec![vec![0], vec![1], vec![0, 1]]).unwrap();
        assert!(!g.is_irreducible().unwrap().is_irreducible());
        assert!(LevelFamily::new(2, vec![vec![]]).is_err());
        assert!(LevelFamily::new(2, vec![vec![2]]).is_err());
    }

    #[test]
    fn parse_partitions() {
        let p = parse_partition("# plane twice\n2x 1,0;0,1\n1,1 # a line\n", 2).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(is_lambda_partition(&p), None);
        assert_eq!(p.to_string(), "2x 1,0;0,1\n1,1\n");
        let q = parse_partition(&p.to_string(), 2).unwrap();
        assert_eq!(p, q);
        assert!(matches!(parse_partition("0x 1,0\n", 2), Err(VspError::Syntax { line: 1, .. })));
        assert!(matches!(parse_partition("1,a\n", 2), Err(VspError::Syntax { .. })));
        assert!(matches!(parse_partition("0,0\n", 2), Err(VspError::Syntax { .. })));
        assert!(matches!(parse_partition("1,0\n", 4), Err(VspError::NotPrime(4))));
    }
}
