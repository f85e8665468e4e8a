//! Upper and lower bounds on the row count of irreducible level k-matrices.
//!
//! Several bounds have the shape `q * (n+1)^((n+1)/2)` with rational `q`.
//! They are floored exactly as `isqrt(floor(q^2 * (n+1)^(n+1)))`, which is
//! valid because `floor(sqrt(y)) == floor(sqrt(floor(y)))` for `y >= 0`.
//! Only [`lb_exponent`] uses floating point, and it is for display.

use num_bigint::BigInt;
use num_traits::{One, Pow};
use thiserror::Error;

use crate::linalg::{Int, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("{0}")]
    Parameters(String),
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), BoundsError> {
    if cond {
        Ok(())
    } else {
        Err(BoundsError::Parameters(msg()))
    }
}

fn pow(base: u64, e: u64) -> Int {
    Pow::pow(BigInt::from(base), e)
}

/// `floor(q * base^(e/2))` for `q >= 0`.
pub fn floor_times_sqrt_pow(q: &Rat, base: u64, e: u64) -> Int {
    let num = q.numer() * q.numer() * pow(base, e);
    let den = q.denom() * q.denom();
    (num / den).sqrt()
}

/// `floor((n+1)^((n+1)/2))`.
pub fn floor_self_power_half(n: u64) -> Int {
    floor_times_sqrt_pow(&Rat::one(), n + 1, n + 1)
}

/// Bound for every irreducible k-matrix with `n >= 2` columns obtained from
/// basic feasible solutions and Carathéodory:
/// `k^(n-1) * 2^(-n) * (n+1)^((n+1)/2) * ((k+1)^n - k^n + 1)`, floored.
pub fn ub_ub1(n: u64, k: u64) -> Result<Int, BoundsError> {
    check(n >= 2 && k >= 1, || format!("ub1 needs n >= 2 and k >= 1, got n={n}, k={k}"))?;
    let q = Rat::new(pow(k, n - 1) * (pow(k + 1, n) - pow(k, n) + 1), pow(2, n));
    Ok(floor_times_sqrt_pow(&q, n + 1, n + 1))
}

/// The headline upper bound: `(2k)^3` for `n = 3`, otherwise [`ub_ub1`].
pub fn ub_main(n: u64, k: u64) -> Result<Int, BoundsError> {
    check(n >= 3 && k >= 1, || format!("main bound needs n >= 3 and k >= 1 (use ub_lambert for n = 2), got n={n}, k={k}"))?;
    if n == 3 {
        Ok(pow(2 * k, 3))
    } else {
        ub_ub1(n, k)
    }
}

/// Exact value `2k - 1` for two columns, `k >= 2`.
pub fn ub_lambert(k: u64) -> Result<Int, BoundsError> {
    check(k >= 2, || format!("two-column value needs k >= 2, got k={k}"))?;
    Ok(Int::from(2 * k - 1))
}

/// Exponent `r_n` of the column-induction bound: `r_2 = 1`, `r_{n+1} = 2 r_n + 1`.
pub fn ub2_exponent(n: u64) -> Result<u64, BoundsError> {
    check((2..=63).contains(&n), || format!("exponent needs 2 <= n <= 63, got n={n}"))?;
    Ok((2..n).fold(1u64, |r, _| 2 * r + 1))
}

/// Column-induction bound `(2k)^(r_n)`, which is strict, returned inclusive as
/// `(2k)^(r_n) - 1`.
pub fn ub_ub2(n: u64, k: u64) -> Result<Int, BoundsError> {
    check(k >= 1, || format!("ub2 needs k >= 1, got k={k}"))?;
    let r = ub2_exponent(n)?;
    check(r <= 1 << 20, || format!("ub2 exponent {r} too large to evaluate"))?;
    Ok(pow(2 * k, r) - 1)
}

/// Row bound for the stack of a single basic feasible solution:
/// `floor((k/2)^(n-1) * (n+1)^((n+1)/2))`.
pub fn ub_lg(n: u64, k: u64) -> Result<Int, BoundsError> {
    check(n >= 2 && k >= 1, || format!("ub_lg needs n >= 2 and k >= 1, got n={n}, k={k}"))?;
    let q = Rat::new(pow(k, n - 1), pow(2, n - 1));
    Ok(floor_times_sqrt_pow(&q, n + 1, n + 1))
}

/// Hadamard-type determinant bound for n x n matrices with entries in
/// `[0, k]`: `floor((k/2)^n * (n+1)^((n+1)/2))`.
pub fn hadamard_bound(n: u64, k: u64) -> Result<Int, BoundsError> {
    check(n >= 1 && k >= 1, || format!("hadamard bound needs n >= 1 and k >= 1, got n={n}, k={k}"))?;
    let q = Rat::new(pow(k, n), pow(2, n));
    Ok(floor_times_sqrt_pow(&q, n + 1, n + 1))
}

/// `e^((1 - eps) * sqrt(n ln n))`. Display only; never used in a decision.
pub fn lb_exponent(n: u64, eps: f64) -> Result<f64, BoundsError> {
    check(n >= 2 && eps > 0.0 && eps < 1.0, || format!("lb_exponent needs n >= 2 and 0 < eps < 1, got n={n}, eps={eps}"))?;
    let nf = n as f64;
    Ok(((1.0 - eps) * (nf * nf.ln()).sqrt()).exp())
}

/// `((k+1)^n - k^n - 1) / 2`, the row count of the complement-pair matrix.
pub fn ah_row_count(n: u64, k: u64) -> Result<Int, BoundsError> {
    check(n >= 1 && k >= 1, || format!("row count needs n >= 1 and k >= 1, got n={n}, k={k}"))?;
    let twice = pow(k + 1, n) - pow(k, n) - 1;
    Ok(twice / 2)
}

/// Tightest proven row budget for an exhaustive search, with the name of
/// the bound that supplied it.
///
/// For two columns and `k >= 2` this is `2k - 1`. For `n = 2, k = 1` the
/// two-column value does not apply and the column-induction bound
/// `(2k)^1 - 1 = 1` is wrong (the 2x2 identity is irreducible), so the
/// Carathéodory bound is used instead.
pub fn search_budget(n: u64, k: u64) -> (Int, &'static str) {
    let mut candidates: Vec<(Int, &'static str)> = Vec::new();
    if n == 2 && k >= 2 {
        candidates.push((ub_lambert(k).expect("k >= 2"), "lambert"));
    }
    if n >= 3 {
        candidates.push((ub_main(n, k).expect("n >= 3"), "main"));
        if let Ok(b) = ub_ub2(n, k) {
            candidates.push((b, "ub2"));
        }
    }
    if n == 2 && k >= 2 {
        candidates.push((ub_ub2(n, k).expect("n = 2"), "ub2"));
    }
    candidates.push((ub_ub1(n.max(2), k.max(1)).expect("n >= 2, k >= 1"), "ub1"));
    candidates
        .into_iter()
        .reduce(|best, c| if c.0 < best.0 { c } else { best })
        .expect("ub1 always present")
}

/// Every bound evaluated at one `(n, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: u64,
    pub k: u64,
    /// `None` for `n < 3`.
    pub ub_main: Option<Int>,
    /// `Some` only for `n = 2, k >= 2`.
    pub ub_lambert: Option<Int>,
    pub ub_ub1: Int,
    pub ub_ub2: Option<Int>,
    pub ub2_exponent: Option<u64>,
    pub ub_lg: Int,
    pub hadamard: Int,
    pub ah_row_count: Int,
    pub search_budget: Int,
    pub search_budget_source: &'static str,
    pub lb_eps: f64,
    pub lb_value: f64,
    pub formulas_used: Vec<&'static str>,
}

pub fn report(n: u64, k: u64, eps: f64) -> Result<BoundReport, BoundsError> {
    check(n >= 2 && k >= 1, || format!("bounds need n >= 2 and k >= 1, got n={n}, k={k}"))?;
    let (search_budget, search_budget_source) = search_budget(n, k);
    let mut formulas_used = vec![
        "ub1 = floor(k^(n-1) 2^(-n) (n+1)^((n+1)/2) ((k+1)^n - k^n + 1))",
        "ub2 = (2k)^(r_n) - 1, r_2 = 1, r_(n+1) = 2 r_n + 1",
        "ub_lg = floor((k/2)^(n-1) (n+1)^((n+1)/2))",
        "hadamard = floor((k/2)^n (n+1)^((n+1)/2))",
        "ah_rows = ((k+1)^n - k^n - 1) / 2",
        "lb = e^((1-eps) sqrt(n ln n))",
    ];
    if n == 2 {
        formulas_used.push("lambert = 2k - 1 (k >= 2)");
    } else {
        formulas_used.push("main = (2k)^3 if n = 3, else ub1");
    }
    Ok(BoundReport {
        n,
        k,
        ub_main: ub_main(n, k).ok(),
        ub_lambert: if n == 2 { ub_lambert(k).ok() } else { None },
        ub_ub1: ub_ub1(n, k)?,
        ub_ub2: ub_ub2(n, k).ok(),
        ub2_exponent: ub2_exponent(n).ok(),
        ub_lg: ub_lg(n, k)?,
        hadamard: hadamard_bound(n, k)?,
        ah_row_count: ah_row_count(n, k)?,
        search_budget,
        search_budget_source,
        lb_eps: eps,
        lb_value: lb_exponent(n, eps)?,
        formulas_used,
    })
}
