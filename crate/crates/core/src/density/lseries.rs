//! Partial sums of Σ μ(u)/p^{2 deg u} over squarefree u avoiding x (and x+c).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use super::ratio;
use crate::budget::{sat_pow, Budget};
use crate::error::{Error, Result};
use crate::fppoly::{MobiusTable, PrimeField};
use crate::report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LSeriesVariant {
    /// x ∤ u; closed form p/(p+1).
    NoX,
    /// x ∤ u and x+1 ∤ u; closed form p³/((p-1)(p+1)²).
    NoXNoC,
}

impl fmt::Display for LSeriesVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LSeriesVariant::NoX => "no_x",
            LSeriesVariant::NoXNoC => "no_x_no_c",
        })
    }
}

impl FromStr for LSeriesVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "no_x" => Ok(LSeriesVariant::NoX),
            "no_x_no_c" => Ok(LSeriesVariant::NoXNoC),
            _ => Err(Error::Parse(format!("unknown variant {s:?} (expected no_x or no_x_no_c)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LSeriesCheck {
    pub p: u64,
    pub variant: LSeriesVariant,
    pub max_degree: usize,
    #[serde(serialize_with = "report::rational")]
    pub partial_sum: BigRational,
    #[serde(serialize_with = "report::rational")]
    pub target: BigRational,
    #[serde(serialize_with = "report::rational")]
    pub gap: BigRational,
    /// 2/p^D.
    #[serde(serialize_with = "report::rational")]
    pub bound: BigRational,
    pub holds: bool,
}

/// Sums μ(u)/p^{2 deg u} over monic u of degree <= `max_degree` with the
/// variant's exclusions (the excluded linear factor is x + 1), and compares
/// with the closed form.
pub fn lseries_identity_check(p: u64, variant: LSeriesVariant, max_degree: usize, budget: &Budget) -> Result<LSeriesCheck> {
    let field = PrimeField::new(p)?;
    if variant == LSeriesVariant::NoXNoC && p == 2 {
        return Err(Error::OutOfRange("the no_x_no_c variant needs p odd".into()));
    }
    budget.check_enumeration("L-series partial sum", sat_pow(p, max_degree as u32))?;
    let table = MobiusTable::new(field, max_degree, budget)?;
    let mut num = BigInt::from(0);
    for d in 0..=max_degree {
        let mut level: i128 = 0;
        for idx in 0..p.pow(d as u32) {
            let mu = table.at(d, idx);
            if mu == 0 || (d > 0 && idx % p == 0) {
                continue;
            }
            if variant == LSeriesVariant::NoXNoC && value_at_minus_one(p, d, idx) == 0 {
                continue;
            }
            level += mu as i128;
        }
        num += BigInt::from(level) * BigInt::from(p).pow(2 * (max_degree - d) as u32);
    }
    let partial_sum = BigRational::new(num, BigInt::from(p).pow(2 * max_degree as u32));
    let pb = BigInt::from(p);
    let target = match variant {
        LSeriesVariant::NoX => ratio(pb.clone(), &pb + 1),
        LSeriesVariant::NoXNoC => ratio(pb.pow(3), (&pb - 1) * (&pb + 1) * (&pb + 1)),
    };
    let gap = (&partial_sum - &target).abs();
    let bound = ratio(2, pb.pow(max_degree as u32));
    let holds = gap <= bound;
    Ok(LSeriesCheck { p, variant, max_degree, partial_sum, target, gap, bound, holds })
}

/// u(-1) mod p for the monic degree-d polynomial with the given index.
fn value_at_minus_one(p: u64, d: usize, mut idx: u64) -> u64 {
    let minus_one = p - 1;
    let mut digits = Vec::with_capacity(d);
    for _ in 0..d {
        digits.push(idx % p);
        idx /= p;
    }
    digits.iter().rev().fold(1, |acc, &c| (acc * minus_one + c) % p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn documented_values() {
        let c = lseries_identity_check(3, LSeriesVariant::NoX, 6, &b()).unwrap();
        assert_eq!(c.target, ratio(3, 4));
        assert!(c.holds);
        let c = lseries_identity_check(3, LSeriesVariant::NoXNoC, 6, &b()).unwrap();
        assert_eq!(c.target, ratio(27, 32));
        assert!(c.holds);
        let c = lseries_identity_check(5, LSeriesVariant::NoX, 0, &b()).unwrap();
        assert_eq!(c.partial_sum, ratio(1, 1));
        assert_eq!(c.gap, ratio(1, 6));
        assert!(c.holds);
        assert!(lseries_identity_check(2, LSeriesVariant::NoXNoC, 3, &b()).is_err());
    }

    #[test]
    fn degree_one_partial_sum() {
        // 1 - (p-1)/p² for no_x, 1 - (p-2)/p² for no_x_no_c
        let c = lseries_identity_check(5, LSeriesVariant::NoX, 1, &b()).unwrap();
        assert_eq!(c.partial_sum, ratio(21, 25));
        let c = lseries_identity_check(5, LSeriesVariant::NoXNoC, 1, &b()).unwrap();
        assert_eq!(c.partial_sum, ratio(22, 25));
    }

    #[test]
    fn gap_bound_holds_for_small_parameters() {
        for p in [3u64, 5, 7] {
            for d in 0..=5 {
                for v in [LSeriesVariant::NoX, LSeriesVariant::NoXNoC] {
                    assert!(lseries_identity_check(p, v, d, &b()).unwrap().holds, "p={p} D={d} {v}");
                }
            }
        }
    }

    #[test]
    fn evaluation_helper() {
        // x² + 2x + 1 at -1 over F_3 (index 1 + 2·3 = 7)
        assert_eq!(value_at_minus_one(3, 2, 7), 0);
        assert_eq!(value_at_minus_one(3, 1, 0), 2);
    }
}
