//! Prime tuples in weighted height boxes, congruence bad sets and sieve
//! experiments against C′_B ∏ li(X^{d_i}).

mod badset;
mod experiment;
mod li;

use serde::Serialize;

pub use badset::{
    local_factor, rho_prime, singular_series, BadSetSpec, FactorSource, LocalFactor, Provenance, SingularSeries,
    ENUMERATION_LIMIT, SERIES_LIMIT, SPEC_NAMES,
};
pub use experiment::{
    bonferroni_check, incl_excl_term, run_experiment, run_experiment_with_cutoff, BonferroniReport, ExperimentKind, ExperimentReport, Marginal,
    Truncation, DEFAULT_SERIES_CUTOFF, LI_CONVENTION,
};
pub use li::{li, li_in};

use crate::budget::Budget;
use crate::error::{Error, Result};

/// All primes <= `limit`, ascending, refusing limits above the sieve cap.
pub fn primes_up_to(limit: u64, budget: &Budget) -> Result<Vec<u64>> {
    if limit > budget.sieve_cap {
        return Err(Error::BudgetExceeded { what: "prime sieve", needed: limit as u128, limit: budget.sieve_cap });
    }
    Ok(crate::arith::primes_up_to(limit))
}

/// {a : max_i |a_i|^{1/d_i} < X}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightBox {
    pub exponents: Vec<f64>,
    pub x: f64,
    /// Per coordinate, the least integer B with |a_i| < X^{d_i} ⇔ |a_i| < B.
    pub bounds: Vec<u64>,
}

impl HeightBox {
    pub fn new(exponents: Vec<f64>, x: f64) -> Result<Self> {
        if !(x > 0.0) || !x.is_finite() || exponents.is_empty() || exponents.iter().any(|&d| !(d > 0.0) || !d.is_finite()) {
            return Err(Error::OutOfRange("height box needs X > 0 and positive exponents".into()));
        }
        let bounds = exponents.iter().map(|&d| strict_bound(x, d)).collect::<Result<_>>()?;
        Ok(Self { exponents, x, bounds })
    }

    /// Exponents 1, 2, ..., n for (a_1, ..., a_n).
    pub fn monic(n: usize, x: f64) -> Result<Self> {
        Self::new((1..=n).map(|i| i as f64).collect(), x)
    }

    /// n + 1 coordinates, each below X.
    pub fn allcoeff(n: usize, x: f64) -> Result<Self> {
        Self::new(vec![1.0; n + 1], x)
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    /// d = Σ d_i.
    pub fn total_degree(&self) -> f64 {
        self.exponents.iter().sum()
    }

    pub fn height(&self, a: &[i64]) -> f64 {
        a.iter().zip(&self.exponents).map(|(&v, &d)| (v.unsigned_abs() as f64).powf(1.0 / d)).fold(0.0, f64::max)
    }

    pub fn contains(&self, a: &[i64]) -> bool {
        a.len() == self.n() && a.iter().zip(&self.bounds).all(|(&v, &b)| v.unsigned_abs() < b)
    }

    /// Primes in each coordinate range.
    pub fn primes(&self, budget: &Budget) -> Result<Vec<Vec<u64>>> {
        self.bounds.iter().map(|&b| primes_up_to(b.saturating_sub(1), budget)).collect()
    }
}

/// ⌈X^d⌉, exactly when X and d are integers.
fn strict_bound(x: f64, d: f64) -> Result<u64> {
    if x.fract() == 0.0 && d.fract() == 0.0 && x < u64::MAX as f64 {
        return (x as u64).checked_pow(d as u32).ok_or_else(|| Error::OutOfRange(format!("{x}^{d} overflows")));
    }
    let v = x.powf(d).ceil();
    if v >= u64::MAX as f64 {
        return Err(Error::OutOfRange(format!("{x}^{d} overflows")));
    }
    Ok(v as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_examples() {
        let b = Budget::default();
        assert_eq!(primes_up_to(10, &b).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(2, &b).unwrap(), vec![2]);
        assert_eq!(primes_up_to(1_000_000, &b).unwrap().len(), 78498);
        assert!(primes_up_to(10, &Budget { sieve_cap: 5, ..b }).is_err());
    }

    #[test]
    fn box_bounds_are_strict() {
        let bx = HeightBox::new(vec![3.0, 4.0], 10.0).unwrap();
        assert_eq!(bx.bounds, vec![1000, 10000]);
        assert!(bx.contains(&[999, 9999]));
        assert!(!bx.contains(&[1000, 2]));
        assert!(bx.height(&[999, 2]) < 10.0);
        let frac = HeightBox::new(vec![0.5], 10.0).unwrap();
        assert_eq!(frac.bounds, vec![4]);
        assert!(frac.contains(&[3]) && !frac.contains(&[4]));
        let primes = HeightBox::monic(2, 7.0).unwrap().primes(&Budget::default()).unwrap();
        assert_eq!(primes[0], vec![2, 3, 5]);
        assert_eq!(primes[1].len(), 15);
        assert!(HeightBox::new(vec![1.0], 0.0).is_err());
    }
}
