//! Arithmetic statistics of polynomials with prime coefficients.

pub mod arith;
pub mod budget;
pub mod density;
pub mod equidist;
pub mod error;
pub mod fppoly;
pub mod parse;
pub mod report;
pub mod scalar;
pub mod sieve;
pub mod verify;
pub mod zpoly;

pub use budget::Budget;
pub use error::{Error, Result};
pub use fppoly::{FpPoly, PrimeField};
pub use zpoly::ZPoly;

pub use equidist::{CountMatrix, ExactMatrix, FloatMatrix};

pub type BigZPoly = ZPoly<num_bigint::BigInt>;
pub type SmallZPoly = ZPoly<i64>;
pub type Rational = num_rational::BigRational;
