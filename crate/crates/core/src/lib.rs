//! Trimmed multipoint evaluation and interpolation over prime fields.
//!
//! A polynomial in `n` variables with individual degree at most `d` and total
//! degree at most `D` has exactly as many possible coefficients as there are
//! grid points `Z_l` with `sum(l) <= D`. [`algo::trimmed_eval`] computes all of
//! those evaluations and [`algo::trimmed_interp`] inverts the map, both with
//! `O(N * n * poly(d))` field operations where `N = ebc_cum(n, D, d)`.
//!
//! ```
//! use trimmed_mpe::algo::{trimmed_eval, trimmed_interp, Grid};
//! use trimmed_mpe::field::PrimeModulus;
//! use trimmed_mpe::poly::TrimmedPoly;
//!
//! let f = PrimeModulus::new(65537).unwrap();
//! let p = TrimmedPoly::random(4, 2, 5, f, 0).unwrap();
//! let grid = Grid::random(4, 2, f, 1).unwrap();
//! let values = trimmed_eval(&p, &grid).unwrap();
//! assert_eq!(trimmed_interp(&values, &grid).unwrap(), p);
//! ```

pub mod algo;
pub mod cli;
pub mod combinat;
pub mod error;
pub mod field;
pub mod io;
pub mod linalg;
pub mod poly;

pub use error::{Error, Result};
