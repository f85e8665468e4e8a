//! The polytope `F(A) = { x : A^T x = 1, x >= 0 }` of a k-matrix, its basic
//! feasible solutions, and exact Carathéodory decompositions.

use std::collections::HashMap;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{scale_to_integer, Int, LinalgError, Mat, Rat};
use crate::matrix::KMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("matrix has rank {rank}, needs full column rank {cols}")]
    RankDeficient { rank: usize, cols: usize },
    #[error("row {0} is zero, so the feasible region is unbounded")]
    ZeroRow(usize),
    #[error("point is not in the feasible region: {0}")]
    Infeasible(String),
    #[error("empty point set")]
    Empty,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A vertex of `F(A)`: supported on `index_set`, whose rows form an invertible matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicFeasibleSolution {
    /// `n` row indices, ascending. For degenerate points the first index set
    /// (lexicographically) that produces the point.
    pub index_set: Vec<usize>,
    pub point: Vec<Rat>,
    /// Least positive integer making `point` integral.
    pub scale: Int,
}

impl BasicFeasibleSolution {
    /// `scale * point` as integer row multiplicities.
    pub fn integral_point(&self) -> Vec<Int> {
        scale_to_integer(&self.point).1
    }
}

fn rat_rows(a: &KMatrix) -> Mat<Rat> {
    a.to_int_mat().to_rat()
}

/// `A^T x` for a rational `x`.
pub fn column_combination(a: &KMatrix, x: &[Rat]) -> Vec<Rat> {
    (0..a.cols())
        .map(|j| {
            a.iter_rows()
                .zip(x)
                .filter(|(r, _)| r[j] != 0)
                .fold(Rat::zero(), |acc, (r, xi)| acc + xi * Rat::from_integer(Int::from(r[j])))
        })
        .collect()
}

pub fn check_feasible(a: &KMatrix, h: &[Rat]) -> Result<(), PolytopeError> {
    if h.len() != a.rows() {
        return Err(PolytopeError::Infeasible(format!("length {} but {} rows", h.len(), a.rows())));
    }
    if let Some(i) = h.iter().position(Signed::is_negative) {
        return Err(PolytopeError::Infeasible(format!("entry {i} is negative")));
    }
    let s = column_combination(a, h);
    if let Some(j) = s.iter().position(|v| !v.is_one()) {
        return Err(PolytopeError::Infeasible(format!("column {j} sums to {}", s[j])));
    }
    Ok(())
}

/// Every basic feasible solution, deduplicated by point, in order of the
/// first index set producing each point.
pub fn enumerate_bfs(a: &KMatrix) -> Result<Vec<BasicFeasibleSolution>, PolytopeError> {
    let (m, n) = (a.rows(), a.cols());
    let full = rat_rows(a);
    let rank = full.rank();
    if rank < n {
        return Err(PolytopeError::RankDeficient { rank, cols: n });
    }
    let ones = vec![Rat::one(); n];
    let mut seen: HashMap<Vec<Rat>, ()> = HashMap::new();
    let mut out = Vec::new();
    for idx in (0..m).combinations(n) {
        let ct = full.select_rows(&idx)?.transpose();
        let y = match ct.solve(&ones) {
            Ok(y) => y,
            Err(LinalgError::Singular) => continue,
            Err(e) => return Err(e.into()),
        };
        if y.iter().any(Signed::is_negative) {
            continue;
        }
        let mut point = vec![Rat::zero(); m];
        for (&i, v) in idx.iter().zip(y) {
            point[i] = v;
        }
        if seen.insert(point.clone(), ()).is_none() {
            let (scale, _) = scale_to_integer(&point);
            out.push(BasicFeasibleSolution { index_set: idx, point, scale });
        }
    }
    Ok(out)
}

/// Dimension of the affine hull of the points.
pub fn polytope_dimension(points: &[Vec<Rat>]) -> Result<usize, PolytopeError> {
    let (first, rest) = points.split_first().ok_or(PolytopeError::Empty)?;
    if rest.is_empty() {
        return Ok(0);
    }
    let diffs: Vec<Vec<Rat>> = rest
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    Ok(Mat::from_rows(diffs)?.rank())
}

/// `h` as a convex combination of basic feasible solutions.
#[derive(Debug, Clone)]
pub struct ConvexDecomposition {
    /// Positive weights summing to one.
    pub terms: Vec<(Rat, BasicFeasibleSolution)>,
    pub target: Vec<Rat>,
    /// Dimension of the polytope spanned by all basic feasible solutions.
    pub dimension: usize,
}

impl ConvexDecomposition {
    pub fn recombine(&self) -> Vec<Rat> {
        let mut acc = vec![Rat::zero(); self.target.len()];
        for (w, b) in &self.terms {
            for (a, p) in acc.iter_mut().zip(&b.point) {
                *a += w * p;
            }
        }
        acc
    }

    pub fn weight_sum(&self) -> Rat {
        self.terms.iter().map(|(w, _)| w.clone()).fold(Rat::zero(), |a, b| a + b)
    }

    pub fn is_exact(&self) -> bool {
        self.weight_sum().is_one()
            && self.terms.iter().all(|(w, _)| w.is_positive())
            && self.recombine() == self.target
    }
}

/// Move `p` inside its minimal face until it becomes a vertex.
fn walk_to_vertex(a: &Mat<Rat>, mut p: Vec<Rat>) -> Vec<Rat> {
    loop {
        let support: Vec<usize> = (0..p.len()).filter(|&i| p[i].is_positive()).collect();
        let sys = Mat::from_fn(a.cols(), support.len(), |j, t| a.get(support[t], j).clone())
            .expect("support is nonempty");
        let Some(mut z) = sys.null_space().into_iter().next() else {
            return p;
        };
        // Rows are nonnegative and nonzero, so z has entries of both signs.
        if !z.iter().any(Signed::is_negative) {
            z.iter_mut().for_each(|v| *v = -v.clone());
        }
        let step = support
            .iter()
            .zip(&z)
            .filter(|(_, zt)| zt.is_negative())
            .map(|(&i, zt)| &p[i] / -zt)
            .min()
            .expect("some coordinate decreases");
        for (&i, zt) in support.iter().zip(&z) {
            p[i] += &step * zt;
        }
    }
}

/// Exact Carathéodory decomposition of `h` into at most `d + 1` basic
/// feasible solutions, `d` being the dimension of the polytope.
///
/// A vertex `v` of the minimal face of the current point `g` is found by
/// walking inside that face; the ray from `v` through `g` leaves the face at
/// `g'`, which lies on a face of lower dimension, and `g` is a convex
/// combination of `v` and `g'`. Iterating on `g'` gives at most
/// `dim(face(h)) + 1` terms, and [`reduce_support`] then removes any
/// remaining affine dependence.
pub fn caratheodory_decompose(a: &KMatrix, h: &[Rat]) -> Result<ConvexDecomposition, PolytopeError> {
    if let Some(i) = a.iter_rows().position(|r| r.iter().all(|&v| v == 0)) {
        return Err(PolytopeError::ZeroRow(i));
    }
    check_feasible(a, h)?;
    let bfs = enumerate_bfs(a)?;
    let dimension = polytope_dimension(&bfs.iter().map(|b| b.point.clone()).collect_vec())?;
    let by_point: HashMap<&[Rat], usize> = bfs.iter().enumerate().map(|(i, b)| (b.point.as_slice(), i)).collect();
    let rows = rat_rows(a);

    let mut terms: Vec<(Rat, usize)> = Vec::new();
    let mut remaining = Rat::one();
    let mut g = h.to_vec();
    loop {
        let v = walk_to_vertex(&rows, g.clone());
        let vi = *by_point.get(v.as_slice()).expect("vertices of F(A) are basic feasible solutions");
        if v == g {
            terms.push((remaining, vi));
            break;
        }
        let step = g
            .iter()
            .zip(&v)
            .filter(|(gi, vi)| gi < vi)
            .map(|(gi, vi)| gi / (vi - gi))
            .min()
            .expect("g - v has a negative entry");
        let exit: Vec<Rat> = g.iter().zip(&v).map(|(gi, vi)| gi + &step * (gi - vi)).collect();
        let denom = Rat::one() + &step;
        terms.push((&remaining * &step / &denom, vi));
        remaining /= denom;
        g = exit;
    }

    let points: Vec<Vec<Rat>> = terms.iter().map(|(_, i)| bfs[*i].point.clone()).collect();
    let weights = reduce_support(&points, terms.iter().map(|(w, _)| w.clone()).collect());
    let terms = terms
        .iter()
        .zip(weights)
        .filter(|(_, w)| w.is_positive())
        .map(|((_, i), w)| (w, bfs[*i].clone()))
        .collect();
    Ok(ConvexDecomposition { terms, target: h.to_vec(), dimension })
}

/// Shift weight along affine dependences of the supported points until the
/// support is affinely independent. Weights stay nonnegative, keep their
/// sum, and keep `sum w_j p_j` fixed.
pub fn reduce_support(points: &[Vec<Rat>], mut weights: Vec<Rat>) -> Vec<Rat> {
    loop {
        let support: Vec<usize> = (0..weights.len()).filter(|&j| weights[j].is_positive()).collect();
        if support.len() <= 1 {
            return weights;
        }
        let dim = points[0].len();
        // columns (p_j, 1) for j in the support
        let sys = Mat::from_fn(dim + 1, support.len(), |r, t| {
            if r < dim {
                points[support[t]][r].clone()
            } else {
                Rat::one()
            }
        })
        .expect("nonempty system");
        let Some(mut mu) = sys.null_space().into_iter().next() else {
            return weights;
        };
        // mu sums to zero, so it has a positive entry or its negation does
        if !mu.iter().any(Signed::is_positive) {
            mu.iter_mut().for_each(|v| *v = -v.clone());
        }
        let (theta, hit) = support
            .iter()
            .zip(&mu)
            .filter(|(_, m)| m.is_positive())
            .map(|(&j, m)| (&weights[j] / m, j))
            .min()
            .expect("positive entry exists");
        for (&j, m) in support.iter().zip(&mu) {
            weights[j] -= &theta * m;
        }
        // lowest index among the terms that reach zero first
        weights[hit] = Rat::zero();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_rat_vec, rat_vec};
    use crate::matrix::kmat;

    fn u21() -> KMatrix {
        kmat(&[&[0, 1], &[1, 0], &[1, 1]])
    }

    fn j3() -> KMatrix {
        kmat(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])
    }

    #[test]
    fn bfs_of_u21() {
        let b = enumerate_bfs(&u21()).unwrap();
        let points: Vec<_> = b.iter().map(|b| b.point.clone()).collect();
        assert_eq!(points, vec![int_rat_vec(&[1, 1, 0]), int_rat_vec(&[0, 0, 1])]);
        assert_eq!(b[1].index_set, vec![0, 2]);
        assert_eq!(b[0].scale, Int::from(1));
    }

    #[test]
    fn bfs_of_identity_and_j3() {
        let id = kmat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let b = enumerate_bfs(&id).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].point, int_rat_vec(&[1, 1, 1]));
        let b = enumerate_bfs(&j3()).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].point, rat_vec(&[(1, 2), (1, 2), (1, 2)]));
        assert_eq!(b[0].scale, Int::from(2));
    }

    #[test]
    fn bfs_needs_full_rank() {
        let m = kmat(&[&[1, 1], &[2, 2]]);
        assert_eq!(enumerate_bfs(&m), Err(PolytopeError::RankDeficient { rank: 1, cols: 2 }));
    }

    #[test]
    fn dimension_cases() {
        assert_eq!(polytope_dimension(&[int_rat_vec(&[1, 1, 0])]).unwrap(), 0);
        assert_eq!(
            polytope_dimension(&[int_rat_vec(&[1, 1, 0]), int_rat_vec(&[0, 0, 1])]).unwrap(),
            1
        );
        assert_eq!(polytope_dimension(&[]), Err(PolytopeError::Empty));
    }

    #[test]
    fn decompose_midpoint() {
        let h = rat_vec(&[(1, 2), (1, 2), (1, 2)]);
        let d = caratheodory_decompose(&u21(), &h).unwrap();
        assert!(d.is_exact());
        let mut got: Vec<_> = d.terms.iter().map(|(w, b)| (w.clone(), b.point.clone())).collect();
        got.sort();
        assert_eq!(
            got,
            vec![
                (rat_vec(&[(1, 2)])[0].clone(), int_rat_vec(&[0, 0, 1])),
                (rat_vec(&[(1, 2)])[0].clone(), int_rat_vec(&[1, 1, 0])),
            ]
        );
    }

    #[test]
    fn decompose_vertex_is_single_term() {
        let d = caratheodory_decompose(&u21(), &int_rat_vec(&[1, 1, 0])).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert!(d.terms[0].0.is_one());
        let h = rat_vec(&[(1, 2), (1, 2), (1, 2)]);
        let d = caratheodory_decompose(&j3(), &h).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert_eq!(d.dimension, 0);
    }

    #[test]
    fn decompose_rejects_infeasible() {
        assert!(matches!(
            caratheodory_decompose(&u21(), &int_rat_vec(&[1, 0, 0])),
            Err(PolytopeError::Infeasible(_))
        ));
        assert!(matches!(
            caratheodory_decompose(&u21(), &rat_vec(&[(3, 2), (3, 2), (-1, 2)])),
            Err(PolytopeError::Infeasible(_))
        ));
        let z = kmat(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(caratheodory_decompose(&z, &int_rat_vec(&[0, 1, 1])).unwrap_err(), PolytopeError::ZeroRow(0));
    }

    #[test]
    fn reduce_support_drops_dependent_terms() {
        // the midpoint of a segment written with three collinear points
        let points = vec![int_rat_vec(&[0, 0]), int_rat_vec(&[1, 1]), int_rat_vec(&[2, 2])];
        let w = reduce_support(&points, rat_vec(&[(1, 3), (1, 3), (1, 3)]));
        assert!(w.iter().filter(|v| v.is_positive()).count() <= 2);
        assert!(w.iter().all(|v| !v.is_negative()));
        let sum: Rat = w.iter().cloned().fold(Rat::zero(), |a, b| a + b);
        assert!(sum.is_one());
        let mut p = vec![Rat::zero(); 2];
        for (wi, pt) in w.iter().zip(&points) {
            for (a, b) in p.iter_mut().zip(pt) {
                *a += wi * b;
            }
        }
        assert_eq!(p, int_rat_vec(&[1, 1]));
    }
}
