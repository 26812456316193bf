//! Truncated Euler products over primes, summed in log space.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::primes_up_to;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::report;
use crate::scalar::{CompensatedSum, Real};

/// Primes per block; blocks are summed independently and merged in order.
const BLOCK: usize = 4096;

/// Safety factor on the integral tail envelope.
const TAIL_SLACK: f64 = 1.25;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EulerKind {
    /// ∏_{p>2} (1 - (3p-1)/(p(p+1)²)).
    SqfLimit,
    /// ∏_{p>2} (1 - 1/(p²+p+1)).
    MaxLimit,
    /// ∏_p (1 - 1/(p²-p)).
    A4b3,
    /// ∏_{p>2} (1 - (3p-1)/(p²(p+1))).
    Yamamura,
    /// ∏_{p>2} (1 - 1/p²).
    Lenstra,
    /// A caller-supplied factor, labelled by name.
    Custom(String),
}

impl EulerKind {
    pub const BUILTIN: [EulerKind; 5] =
        [EulerKind::A4b3, EulerKind::SqfLimit, EulerKind::MaxLimit, EulerKind::Yamamura, EulerKind::Lenstra];

    /// `(a_p as a function of p, include p = 2, K)` where the local factor
    /// is 1 - a_p and a_p <= K/p² asymptotically.
    fn spec(&self) -> Option<(fn(f64) -> f64, bool, f64)> {
        Some(match self {
            EulerKind::SqfLimit => (|p| (3.0 * p - 1.0) / (p * (p + 1.0) * (p + 1.0)), false, 3.0),
            EulerKind::MaxLimit => (|p| 1.0 / (p * p + p + 1.0), false, 1.0),
            EulerKind::A4b3 => (|p| 1.0 / (p * p - p), true, 1.0),
            EulerKind::Yamamura => (|p| (3.0 * p - 1.0) / (p * p * (p + 1.0)), false, 3.0),
            EulerKind::Lenstra => (|p| 1.0 / (p * p), false, 1.0),
            EulerKind::Custom(_) => return None,
        })
    }
}

impl fmt::Display for EulerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EulerKind::SqfLimit => f.write_str("sqf-limit"),
            EulerKind::MaxLimit => f.write_str("max-limit"),
            EulerKind::A4b3 => f.write_str("a4b3"),
            EulerKind::Yamamura => f.write_str("yamamura"),
            EulerKind::Lenstra => f.write_str("lenstra"),
            EulerKind::Custom(name) => write!(f, "custom:{name}"),
        }
    }
}

impl FromStr for EulerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "sqf-limit" => Ok(EulerKind::SqfLimit),
            "max-limit" => Ok(EulerKind::MaxLimit),
            "a4b3" => Ok(EulerKind::A4b3),
            "yamamura" => Ok(EulerKind::Yamamura),
            "lenstra" => Ok(EulerKind::Lenstra),
            _ => Err(Error::Parse(format!(
                "unknown product kind {s:?} (expected a4b3, sqf-limit, max-limit, yamamura or lenstra)"
            ))),
        }
    }
}

impl Serialize for EulerKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerProduct {
    pub kind: EulerKind,
    pub cutoff: u64,
    pub primes_used: usize,
    #[serde(serialize_with = "report::real")]
    pub value: f64,
    #[serde(serialize_with = "report::real")]
    pub log_value: f64,
    /// Envelope for Σ_{p > cutoff} -log(1 - a_p).
    #[serde(serialize_with = "report::real")]
    pub log_tail: f64,
    /// Envelope for value - ∏_p (1 - a_p), i.e. value·(1 - e^{-log_tail}).
    #[serde(serialize_with = "report::real")]
    pub tail_estimate: f64,
    pub truncation_note: String,
}

/// Product of the built-in kind's local factors over primes up to `cutoff`.
pub fn euler_product(kind: &EulerKind, cutoff: u64, budget: &Budget) -> Result<EulerProduct> {
    euler_product_in::<f64>(kind, cutoff, budget)
}

/// [`euler_product`] with the logarithms accumulated in `T`.
pub fn euler_product_in<T: Real>(kind: &EulerKind, cutoff: u64, budget: &Budget) -> Result<EulerProduct> {
    let Some((a, include_two, k)) = kind.spec() else {
        return Err(Error::Parse("custom products need euler_product_custom".into()));
    };
    run::<T>(kind.clone(), cutoff, include_two, k, budget, &|p| a(p as f64))
}

/// Product of `1 - a(p)` over primes up to `cutoff` (from 3 unless
/// `include_two`), where `a(p) <= tail_k / p²` for large p.
pub fn euler_product_custom(
    name: &str,
    cutoff: u64,
    include_two: bool,
    tail_k: f64,
    budget: &Budget,
    a: impl Fn(u64) -> f64 + Sync,
) -> Result<EulerProduct> {
    run::<f64>(EulerKind::Custom(name.to_string()), cutoff, include_two, tail_k, budget, &a)
}

fn run<T: Real>(
    kind: EulerKind,
    cutoff: u64,
    include_two: bool,
    tail_k: f64,
    budget: &Budget,
    a: &(dyn Fn(u64) -> f64 + Sync),
) -> Result<EulerProduct> {
    if cutoff < 3 {
        return Err(Error::OutOfRange(format!("cutoff {cutoff} must be at least 3")));
    }
    if cutoff > budget.sieve_cap {
        return Err(Error::BudgetExceeded { what: "prime sieve", needed: cutoff as u128, limit: budget.sieve_cap });
    }
    let primes: Vec<u64> = primes_up_to(cutoff).into_iter().filter(|&p| include_two || p > 2).collect();
    let blocks: Vec<Result<CompensatedSum<T>>> = primes
        .par_chunks(BLOCK)
        .map(|chunk| {
            let mut sum = CompensatedSum::<T>::default();
            for &p in chunk {
                let ap = a(p);
                if !(0.0..1.0).contains(&ap) {
                    return Err(Error::OutOfRange(format!("local factor at p = {p} is {} (outside (0, 1])", 1.0 - ap)));
                }
                let ap = T::from_f64(ap).expect("finite");
                sum.add((-ap).ln_1p());
            }
            Ok(sum)
        })
        .collect();
    let mut total = CompensatedSum::<T>::default();
    for block in blocks {
        total.merge(&block?);
    }
    let log_value = total.value().to_f64().expect("finite");
    let value = log_value.exp();
    let x = cutoff as f64;
    let log_tail = TAIL_SLACK * tail_k / (x * x.ln());
    let tail_estimate = value * -(-log_tail).exp_m1();
    let truncation_note = format!(
        "{} primes up to {cutoff}; omitted factors bounded by {TAIL_SLACK}*{tail_k}/(X ln X) in log, from the integral of dt/(t^2 ln t)",
        primes.len()
    );
    Ok(EulerProduct { kind, cutoff, primes_used: primes.len(), value, log_value, log_tail, tail_estimate, truncation_note })
}
