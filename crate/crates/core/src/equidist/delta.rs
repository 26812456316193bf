//! δ_{n,p}(d): the worst deviation of |A_n(u; α)|/(p-1)^n from p^{-d}, and
//! the bounds it obeys.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::graph::build_graph;
use crate::budget::{sat_pow, Budget};
use crate::density::ratio;
use crate::error::{Error, Result};
use crate::fppoly::{enumerate_monic, Constraint, FpPoly, PrimeField};
use crate::report;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaReport {
    pub n: usize,
    pub p: u64,
    pub d: usize,
    #[serde(serialize_with = "report::rational")]
    pub delta_exact: BigRational,
    pub argmax_u: FpPoly,
    pub argmax_alpha: FpPoly,
    #[serde(serialize_with = "report::real")]
    pub bound_large: f64,
    #[serde(serialize_with = "report::option_rational")]
    pub bound_large_exact: Option<BigRational>,
    #[serde(serialize_with = "report::real")]
    pub bound_small: f64,
    #[serde(serialize_with = "report::rational")]
    pub bound_trivial: BigRational,
    /// δ <= every applicable bound, compared exactly (bound_small through
    /// the exact value of its f64).
    pub within_bounds: bool,
}

/// Maximum over monic u of degree d with x ∤ u and all residues α of
/// ||A_n(u; α)|/(p-1)^n - p^{-d}|, with the first maximiser in canonical
/// (u, α) order as witness.
pub fn delta_exact(n: usize, p: u64, d: usize, budget: &Budget) -> Result<DeltaReport> {
    let field = PrimeField::new(p)?;
    let states = sat_pow(p, d as u32);
    budget.check_enumeration("delta enumeration", states.saturating_mul(states).saturating_mul(n as u128 + 1))?;
    let walks = (p as u128 - 1).checked_pow(n as u32).ok_or_else(|| Error::OutOfRange("(p-1)^n overflows".into()))?;
    let pd = states;
    // |count·p^d - (p-1)^n| / ((p-1)^n p^d); compare numerators
    let mut best: Option<(u128, FpPoly, usize)> = None;
    let mut best_graph = None;
    for u in enumerate_monic(field, d, Constraint::CoprimeToX, budget)? {
        let g = build_graph(&u, budget)?;
        let counts = g.walk_counts(0, n)?;
        for (alpha, &c) in counts.iter().enumerate() {
            let scaled = c.checked_mul(pd).ok_or_else(|| Error::OutOfRange("count·p^d overflows".into()))?;
            let dev = scaled.abs_diff(walks);
            if best.as_ref().map_or(true, |(b, _, _)| dev > *b) {
                best = Some((dev, u.clone(), alpha));
                best_graph = Some(g.clone());
            }
        }
    }
    let (dev, argmax_u, alpha) = best.expect("u = 1 or a degree-d u always exists");
    let argmax_alpha = best_graph.expect("set with best").residue(alpha);
    let delta = BigRational::new(BigInt::from(dev), BigInt::from(walks) * BigInt::from(pd));
    let bound_trivial = ratio(1, BigInt::from(p - 1).pow(d as u32));
    let bound_large_exact = bound_large_exact(n, p, d);
    let bound_small = bound_small(n, p, d);
    let within_bounds = delta <= bound_trivial
        && bound_large_exact.as_ref().map_or(true, |b| &delta <= b)
        && BigRational::from_float(bound_small).map_or(true, |b| delta <= b);
    Ok(DeltaReport {
        n,
        p,
        d,
        delta_exact: delta,
        argmax_u,
        argmax_alpha,
        bound_large: bound_large(n, p, d),
        bound_large_exact,
        bound_small,
        bound_trivial,
        within_bounds,
    })
}

/// p^{-d}((p/(p-1))^d - 1)^{⌊n/(2d)⌋} for n >= 2d >= 2 and p odd.
pub fn bound_large_exact(n: usize, p: u64, d: usize) -> Option<BigRational> {
    if d == 0 || n < 2 * d || p < 3 || p % 2 == 0 {
        return None;
    }
    let pb = BigInt::from(p);
    let base = BigRational::new(pb.pow(d as u32), (&pb - BigInt::one()).pow(d as u32)) - BigRational::one();
    let mut power = BigRational::one();
    for _ in 0..n / (2 * d) {
        power *= &base;
    }
    Some(power / BigRational::from_integer(pb.pow(d as u32)))
}

/// [`bound_large_exact`] as a float, +∞ when its hypotheses fail.
pub fn bound_large(n: usize, p: u64, d: usize) -> f64 {
    bound_large_exact(n, p, d).map_or(f64::INFINITY, |b| crate::density::ratio_to_f64(&b))
}

/// e^{1/3} exp(-n / ((d²+d) p^{d²})) for p odd and n, d >= 1; +∞ otherwise.
pub fn bound_small(n: usize, p: u64, d: usize) -> f64 {
    if n == 0 || d == 0 || p < 3 || p % 2 == 0 {
        return f64::INFINITY;
    }
    let (n, pf, d) = (n as f64, p as f64, d as f64);
    (1.0f64 / 3.0 - n / ((d * d + d) * pf.powf(d * d))).exp()
}

impl DeltaReport {
    /// Smallest applicable bound as a float.
    pub fn best_bound(&self) -> f64 {
        crate::density::ratio_to_f64(&self.bound_trivial).min(self.bound_large).min(self.bound_small)
    }
}
