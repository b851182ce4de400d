//! Exact-arithmetic engine for Picard-Fuchs operators.
//!
//! The crate works with linear differential operators with polynomial
//! coefficients and their local solutions. Everything symbolic is exact over
//! the rationals; analytic continuation runs in arbitrary-precision floating
//! point. The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod catalog;
pub mod continuation;
pub mod diffop;
pub mod error;
pub mod frobenius;
pub mod mirror;
pub mod numeric;
pub mod poly;
pub mod series;
pub mod toric;

pub use diffop::{DerivOperator, ThetaOperator};
pub use error::{Error, Result};
pub use poly::{Poly, RatFunc};
pub use series::{LogSolution, TruncatedSeries};

/// Exact rational number backing every symbolic computation.
pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
