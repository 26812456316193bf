//! Local densities of squarefree discriminant and maximality for monic
//! polynomials with unit coefficients, their closed forms and the Euler
//! products built from them.

mod cyclo;
mod euler;
mod local;
mod lseries;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report;

pub use cyclo::{p_t, unit_fraction_f2, CyclotomicData};
pub use euler::{euler_product, euler_product_custom, euler_product_in, EulerKind, EulerProduct};
pub use local::{local_density, local_density_brute, local_density_series};
pub use lseries::{lseries_identity_check, LSeriesCheck, LSeriesVariant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    /// v_p(Δ(f)) <= 1.
    Sqf,
    /// Z_p[x]/(f) maximal.
    Max,
}

impl fmt::Display for DensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DensityKind::Sqf => "sqf",
            DensityKind::Max => "max",
        })
    }
}

impl FromStr for DensityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqf" => Ok(DensityKind::Sqf),
            "max" => Ok(DensityKind::Max),
            _ => Err(Error::Parse(format!("unknown density kind {s:?} (expected sqf or max)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    BruteForceModP2,
    MobiusSeries,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub n: usize,
    pub p: u64,
    pub kind: DensityKind,
    #[serde(serialize_with = "report::rational")]
    pub exact: BigRational,
    /// Absent at p = 2, where the density has no main-term expansion.
    #[serde(serialize_with = "report::option_rational")]
    pub main_term: Option<BigRational>,
    /// Shape-only envelope with implied constant 1; infinite outside n >= 16, p odd.
    #[serde(serialize_with = "report::real")]
    pub error_bound: f64,
    pub route: Route,
}

impl DensityReport {
    pub(crate) fn new(n: usize, p: u64, kind: DensityKind, exact: BigRational, route: Route) -> Self {
        let main_term = main_term(p, kind).ok();
        Self { n, p, kind, exact, main_term, error_bound: error_bound(n, p, kind), route }
    }

    /// |exact - main_term| as a float, when a main term exists.
    pub fn deviation(&self) -> Option<f64> {
        self.main_term.as_ref().map(|m| ratio_to_f64(&(&self.exact - m)).abs())
    }

    /// Whether the deviation lies within the diagnostic envelope. `None`
    /// when the envelope does not apply.
    pub fn within_bound(&self) -> Option<bool> {
        if !self.error_bound.is_finite() {
            return None;
        }
        self.deviation().map(|d| d <= self.error_bound)
    }
}

pub(crate) fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Limit of the density as n grows: 1 - (3p-1)/(p(p+1)²) for sqf and
/// 1 - 1/(p²+p+1) for max.
pub fn main_term(p: u64, kind: DensityKind) -> Result<BigRational> {
    if p == 2 {
        return Err(Error::OutOfRange("the main term needs p odd; use p2_density at p = 2".into()));
    }
    crate::fppoly::PrimeField::new(p)?;
    let p = BigInt::from(p);
    let one = BigRational::from_integer(1.into());
    Ok(match kind {
        DensityKind::Sqf => one - ratio(3 * &p - 1, &p * (&p + 1) * (&p + 1)),
        DensityKind::Max => one - ratio(1, &p * &p + &p + 1),
    })
}

/// Envelope for |density - main term| with implied constant 1:
/// min{(p/(p-1)²)^{5/2}, (p/(p-1)²)^{k/2}} with k = ⌊√(log n / log p)⌋ for sqf,
/// min{(p-1)^{-4}, (p-1)^{-2k}} with k = ⌊√(log n / (4 log p))⌋ for max.
/// Infinite unless n >= 16 and p is odd.
pub fn error_bound(n: usize, p: u64, kind: DensityKind) -> f64 {
    if n < 16 || p < 3 || p % 2 == 0 {
        return f64::INFINITY;
    }
    let (pf, ln) = (p as f64, (n as f64).ln());
    match kind {
        DensityKind::Sqf => {
            let base = pf / ((pf - 1.0) * (pf - 1.0));
            let k = (ln / pf.ln()).sqrt().floor();
            base.powf(2.5).min(base.powf(k / 2.0))
        }
        DensityKind::Max => {
            let k = (ln / (4.0 * pf.ln())).sqrt().floor();
            (pf - 1.0).powi(-4).min((pf - 1.0).powf(-2.0 * k))
        }
    }
}

/// Densities at p = 2. U_n(F_2) is the single polynomial 1 + x + ... + x^n.
/// sqf: 1 if n is even or n = 1, else 0. max: 1 if n+1 is odd, 2p_t if
/// n+1 ≡ 2 mod 4, p_t if 4 | n+1, where t is the odd part of n+1.
pub fn p2_density(n: usize, kind: DensityKind) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::OutOfRange("degree must be at least 1".into()));
    }
    Ok(match kind {
        DensityKind::Sqf => ratio(u8::from(n % 2 == 0 || n == 1), 1),
        DensityKind::Max => {
            let m = n as u64 + 1;
            if m % 2 == 1 {
                ratio(1, 1)
            } else {
                let t = m >> m.trailing_zeros();
                let pt = p_t(t)?.p_t;
                if m % 4 == 2 {
                    pt * BigInt::from(2)
                } else {
                    pt
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_terms() {
        assert_eq!(main_term(3, DensityKind::Sqf).unwrap(), ratio(5, 6));
        assert_eq!(main_term(3, DensityKind::Max).unwrap(), ratio(12, 13));
        assert!(main_term(2, DensityKind::Sqf).is_err());
        assert!(main_term(9, DensityKind::Max).is_err());
        let big = main_term(1_000_003, DensityKind::Sqf).unwrap();
        assert!(1.0 - ratio_to_f64(&big) < 1e-11);
    }

    #[test]
    fn error_bound_values() {
        assert!((error_bound(16, 3, DensityKind::Sqf) - 0.75f64.powf(2.5)).abs() < 1e-15);
        assert_eq!(error_bound(16, 3, DensityKind::Max), 1.0 / 16.0);
        assert_eq!(error_bound(15, 3, DensityKind::Max), f64::INFINITY);
        assert_eq!(error_bound(20, 2, DensityKind::Sqf), f64::INFINITY);
        // second branch wins once ⌊√(log n/log p)⌋ exceeds 5
        let n = 3usize.pow(36);
        let base: f64 = 0.75;
        assert!((error_bound(n, 3, DensityKind::Sqf) - base.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn p2_closed_forms() {
        assert_eq!(p2_density(5, DensityKind::Max).unwrap(), ratio(3, 4));
        assert_eq!(p2_density(4, DensityKind::Max).unwrap(), ratio(1, 1));
        // n+1 = 8: t = 1, p_1 = 1/2
        assert_eq!(p2_density(7, DensityKind::Max).unwrap(), ratio(1, 2));
        assert_eq!(p2_density(6, DensityKind::Sqf).unwrap(), ratio(1, 1));
        assert_eq!(p2_density(7, DensityKind::Sqf).unwrap(), ratio(0, 1));
        assert_eq!(p2_density(1, DensityKind::Sqf).unwrap(), ratio(1, 1));
        assert!(p2_density(0, DensityKind::Sqf).is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("sqf".parse::<DensityKind>().unwrap(), DensityKind::Sqf);
        assert!("both".parse::<DensityKind>().is_err());
    }
}
