//! The unit fraction of F_2[x]/(x^t - 1) for odd t.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::ratio;
use crate::arith::{divisors, multiplicative_order, totient};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fppoly::{factor, FpPoly, PrimeField};
use crate::report;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CyclotomicData {
    pub t: u64,
    /// `(d, o_d(2), φ(d))` for each divisor d of t.
    pub divisors: Vec<(u64, u64, u64)>,
    #[serde(serialize_with = "report::rational")]
    pub p_t: BigRational,
}

/// p_t = ∏_{d | t} (1 - 2^{-o_d(2)})^{φ(d)/o_d(2)}.
pub fn p_t(t: u64) -> Result<CyclotomicData> {
    if t == 0 || t % 2 == 0 {
        return Err(Error::OutOfRange(format!("t = {t} must be odd and positive")));
    }
    let mut value = BigRational::one();
    let mut rows = Vec::new();
    for d in divisors(t) {
        let order = if d == 1 { 1 } else { multiplicative_order(2, d).expect("2 is a unit mod odd d") };
        let phi = totient(d);
        let den = BigInt::one() << order as usize;
        let factor = ratio(&den - 1, den);
        for _ in 0..phi / order {
            value *= &factor;
        }
        rows.push((d, order, phi));
    }
    Ok(CyclotomicData { t, divisors: rows, p_t: value })
}

/// |R^×| / |R| for R = F_2[x]/(x^t - 1), from the factorization of x^t - 1:
/// each factor g^e contributes 1 - 2^{-deg g}.
pub fn unit_fraction_f2(t: u64, budget: &Budget) -> Result<BigRational> {
    if t == 0 {
        return Err(Error::OutOfRange("t must be positive".into()));
    }
    let f2 = PrimeField::new(2)?;
    let xt1 = FpPoly::monomial(f2, 1, t as usize).checked_sub(&FpPoly::one(f2))?;
    let fac = factor(&xt1, budget)?;
    let mut value = BigRational::one();
    for (g, _) in &fac.factors {
        let den = BigInt::one() << g.degree().unwrap();
        value *= ratio(&den - 1, den);
    }
    Ok(value)
}
