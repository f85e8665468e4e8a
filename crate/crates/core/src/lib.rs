//! Exact arithmetic for level k-matrices: reducibility, Hilbert bases of
//! leveler cones, the maximum row count `ell(n, k)` of irreducible matrices,
//! bounds and extremal constructions, and multipartitions of finite vector
//! spaces.
//!
//! ```
//! use levelmat::{format::parse_matrix, irreducible::is_reducible};
//!
//! let m = parse_matrix("1 1\n0 1\n1 0\n").unwrap();
//! let w = is_reducible(&m).unwrap().unwrap();
//! assert_eq!(w.rows, vec![0]);
//! ```

pub mod bounds;
pub mod constructions;
pub mod format;
pub mod irreducible;
pub mod linalg;
pub mod matrix;
pub mod polytope;
pub mod vsp;

pub use linalg::{Int, Rat};
pub use matrix::{CanonicalForm, KMatrix, Leveler};
