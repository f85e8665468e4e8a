//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers ([`Int`]) and
//! normalized rationals ([`Rat`]); there is no floating point anywhere in
//! this module. Determinants use fraction-free Bareiss elimination, while
//! rank, null spaces and solves use Gauss-Jordan elimination over the
//! rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision integer.
pub type Int = BigInt;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Mat<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Dimension(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(LinalgError::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(LinalgError::Dimension("ragged rows".into()));
        }
        Mat::new(m, n, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Result<Self, LinalgError> {
        let data = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Mat::new(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.cols)
    }

    pub fn transpose(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
            .expect("transpose of a valid matrix is valid")
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Submatrix made of the listed rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Result<Mat<T>, LinalgError> {
        let data = idx.iter().flat_map(|&i| self.row(i).iter().cloned()).collect();
        Mat::new(idx.len(), self.cols, data)
    }
}

impl<T: fmt::Display> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl Mat<Int> {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| Int::from(v)).collect()).collect())
    }

    pub fn to_rat(&self) -> Mat<Rat> {
        self.map(|v| Rat::from_integer(v.clone()))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Int, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::Dimension(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Int>> = self.iter_rows().map(<[Int]>::to_vec).collect();
        let mut negate = false;
        let mut prev = Int::one();
        for k in 0..n.saturating_sub(1) {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        negate = !negate;
                    }
                    None => return Ok(Int::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    // exact by Sylvester's identity
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if negate { -d } else { d })
    }

    pub fn rank(&self) -> usize {
        self.to_rat().rank()
    }

    pub fn mul_vec(&self, x: &[Int]) -> Result<Vec<Int>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::Dimension(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok(self
            .iter_rows()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }
}

/// Row-reduced echelon form over the rationals, with the pivot columns.
pub fn rref(m: &Mat<Rat>) -> (Mat<Rat>, Vec<usize>) {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<Rat>> = m.iter_rows().map(<[Rat]>::to_vec).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let out = Mat::from_rows(a).expect("rref preserves shape");
    (out, pivots)
}

impl Mat<Rat> {
    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    /// Basis of `{ z : self * z = 0 }`, one vector per free column, each with
    /// a 1 in its free coordinate.
    pub fn null_space(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = rref(self);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut z = vec![Rat::zero(); self.cols];
                z[f] = Rat::one();
                for (i, &p) in pivots.iter().enumerate() {
                    z[p] = -r.get(i, f).clone();
                }
                z
            })
            .collect()
    }

    /// Solve `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[Rat]) -> Result<Vec<Rat>, LinalgError> {
        if !self.is_square() || b.len() != self.rows {
            return Err(LinalgError::Dimension(format!(
                "solve needs a square system, got {}x{} with rhs of length {}",
                self.rows,
                self.cols,
                b.len()
            )));
        }
        let n = self.rows;
        let aug = Mat::from_fn(n, n + 1, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        })?;
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok((0..n).map(|i| r.get(i, n).clone()).collect())
    }

    pub fn mul_vec(&self, x: &[Rat]) -> Result<Vec<Rat>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::Dimension(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok(self
            .iter_rows()
            .map(|r| r.iter().zip(x).fold(Rat::zero(), |acc, (a, b)| acc + a * b))
            .collect())
    }
}

/// Smallest positive `r` with `r * x` integral, together with `r * x`.
pub fn scale_to_integer(x: &[Rat]) -> (Int, Vec<Int>) {
    let r = x.iter().fold(Int::one(), |acc, v| acc.lcm(v.denom()));
    let rx = x.iter().map(|v| v.numer() * (&r / v.denom())).collect();
    (r, rx)
}

/// `x >= y` in the componentwise order.
pub fn vec_ge(x: &[Rat], y: &[Rat]) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(a, b)| a >= b)
}

/// `x > y`: componentwise `>=` and not equal.
pub fn vec_gt(x: &[Rat], y: &[Rat]) -> bool {
    vec_ge(x, y) && x != y
}

pub fn is_nonnegative(x: &[Rat]) -> bool {
    x.iter().all(|v| !v.is_negative())
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_vec(v: &[(i64, i64)]) -> Vec<Rat> {
    v.iter().map(|&(n, d)| rat(n, d)).collect()
}

pub fn int_rat_vec(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&n| rat(n, 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_mat(rows: &[Vec<i64>]) -> Mat<Int> {
        Mat::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn det_small_cases() {
        let id = int_mat(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(id.det().unwrap(), Int::from(1));
        let j3 = int_mat(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(j3.det().unwrap(), Int::from(2));
        let zero_pivot = int_mat(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(zero_pivot.det().unwrap(), Int::from(-1));
        let singular = int_mat(&[vec![1, 2], vec![2, 4]]);
        assert!(singular.det().unwrap().is_zero());
    }

    #[test]
    fn det_rejects_non_square() {
        let m = int_mat(&[vec![1, 2, 3], vec![4, 5, 6]]);
        assert!(matches!(m.det(), Err(LinalgError::Dimension(_))));
    }

    #[test]
    fn rank_cases() {
        let id = int_mat(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(id.rank(), 3);
        let rep = int_mat(&[vec![1, 2], vec![1, 2]]);
        assert_eq!(rep.rank(), 1);
    }

    #[test]
    fn solve_cases() {
        let id = int_mat(&[vec![1, 0], vec![0, 1]]).to_rat();
        assert_eq!(id.solve(&int_rat_vec(&[1, 1])).unwrap(), int_rat_vec(&[1, 1]));
        // transpose of the rows (0,1),(1,1): all weight on (1,1)
        let ct = int_mat(&[vec![0, 1], vec![1, 1]]).to_rat();
        assert_eq!(ct.solve(&int_rat_vec(&[1, 1])).unwrap(), int_rat_vec(&[0, 1]));
        let j3 = int_mat(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).to_rat();
        assert_eq!(
            j3.solve(&int_rat_vec(&[1, 1, 1])).unwrap(),
            rat_vec(&[(1, 2), (1, 2), (1, 2)])
        );
    }

    #[test]
    fn solve_singular() {
        let m = int_mat(&[vec![1, 1], vec![1, 1]]).to_rat();
        assert_eq!(m.solve(&int_rat_vec(&[1, 1])), Err(LinalgError::Singular));
    }

    #[test]
    fn null_space_is_annihilated() {
        let m = int_mat(&[vec![1, 2, 3], vec![2, 4, 6]]).to_rat();
        let ns = m.null_space();
        assert_eq!(ns.len(), 2);
        for z in ns {
            assert!(m.mul_vec(&z).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn scale_cases() {
        let (r, rx) = scale_to_integer(&rat_vec(&[(1, 2), (1, 2), (1, 2)]));
        assert_eq!(r, Int::from(2));
        assert_eq!(rx, vec![Int::from(1); 3]);
        let (r, rx) = scale_to_integer(&int_rat_vec(&[1, 1, 0]));
        assert_eq!(r, Int::from(1));
        assert_eq!(rx, vec![Int::from(1), Int::from(1), Int::from(0)]);
        let (r, rx) = scale_to_integer(&rat_vec(&[(1, 2), (1, 3)]));
        assert_eq!(r, Int::from(6));
        assert_eq!(rx, vec![Int::from(3), Int::from(2)]);
    }

    #[test]
    fn rationals_are_normalized() {
        let a = rat(2, 4) + rat(1, 6);
        assert_eq!(a, rat(2, 3));
        assert_eq!(a.denom(), &Int::from(3));
        assert_eq!(rat(0, -5).denom(), &Int::from(1));
        assert_eq!(rat(3, -6), rat(-1, 2));
    }

    #[test]
    fn vector_order() {
        let x = int_rat_vec(&[1, 2]);
        let y = int_rat_vec(&[1, 1]);
        assert!(vec_ge(&x, &y) && vec_gt(&x, &y));
        assert!(vec_ge(&x, &x) && !vec_gt(&x, &x));
        assert!(!vec_ge(&y, &x));
    }
}
