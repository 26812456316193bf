//! Integer factorization within a budget, for squarefree tests on
//! discriminants and similar values.

use std::sync::{Arc, LazyLock, Mutex};

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{gcd_u64, is_prime_u64, mul_mod};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Deterministic Miller-Rabin with the first 13 prime bases is proven
/// correct below this bound.
const MR_DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Sieve limit covered so far and the primes up to it.
static SMALL_PRIMES: LazyLock<Mutex<(u64, Arc<Vec<u64>>)>> = LazyLock::new(|| Mutex::new((0, Arc::new(Vec::new()))));

/// The cached primes, covering at least all primes up to `bound`.
fn small_primes(bound: u64) -> Arc<Vec<u64>> {
    let mut cache = SMALL_PRIMES.lock().expect("cache poisoned");
    if cache.0 < bound {
        let limit = bound.max(1000);
        *cache = (limit, Arc::new(crate::arith::primes_up_to(limit)));
    }
    Arc::clone(&cache.1)
}

/// Partial or complete factorization of |N|.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntFactorization {
    pub negative: bool,
    /// Primes found, ascending, with multiplicity.
    #[serde(serialize_with = "crate::report::prime_powers")]
    pub primes: Vec<(BigUint, u32)>,
    /// Unfactored part (1 when complete). It has no prime factor at or
    /// below the trial-division bound.
    #[serde(serialize_with = "crate::report::display")]
    pub residue: BigUint,
    /// Whether N is squarefree as far as `residue` is concerned: `Some(true)`
    /// for a product of distinct large primes, `Some(false)` when a prime
    /// was seen twice across pieces, `None` when nothing is known.
    pub residue_squarefree: Option<bool>,
}

impl IntFactorization {
    pub fn is_complete(&self) -> bool {
        self.residue.is_one()
    }

    /// `Some(true/false)` when decided, `None` when the residue blocks it.
    pub fn is_squarefree(&self) -> Option<bool> {
        if self.primes.iter().any(|(_, e)| *e >= 2) {
            return Some(false);
        }
        if self.residue.is_one() {
            Some(true)
        } else {
            self.residue_squarefree
        }
    }

    /// The primes whose square divides N, if that set is determined.
    pub fn square_divisors(&self) -> Option<Vec<BigUint>> {
        if !self.residue.is_one() && self.residue_squarefree != Some(true) {
            return None;
        }
        Some(self.primes.iter().filter(|(_, e)| *e >= 2).map(|(q, _)| q.clone()).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SquarefreeOutcome {
    Squarefree,
    NotSquarefree,
    Unknown { factored: IntFactorization },
}

impl SquarefreeOutcome {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Self::Squarefree => Some(true),
            Self::NotSquarefree => Some(false),
            Self::Unknown { .. } => None,
        }
    }
}

/// Squarefree test for a nonzero integer. With `odd_part_only` the power of
/// two is removed first.
pub fn is_squarefree_int(n: &BigInt, odd_part_only: bool, budget: &Budget) -> Result<SquarefreeOutcome> {
    if n.is_zero() {
        return Err(Error::OutOfRange("squarefree test of 0".into()));
    }
    let mut m = n.magnitude().clone();
    if odd_part_only {
        let twos = m.trailing_zeros().unwrap_or(0);
        m >>= twos;
    }
    if let Some(small) = m.to_u64() {
        return Ok(if squarefree_u64(small) {
            SquarefreeOutcome::Squarefree
        } else {
            SquarefreeOutcome::NotSquarefree
        });
    }
    let fac = factor_int(&BigInt::from(m), budget)?;
    Ok(match fac.is_squarefree() {
        Some(true) => SquarefreeOutcome::Squarefree,
        Some(false) => SquarefreeOutcome::NotSquarefree,
        None => SquarefreeOutcome::Unknown { factored: fac },
    })
}

/// Exact squarefree test on u64: strip primes up to the cube root, then the
/// cofactor is 1, a prime, a product of two primes, or a prime square.
fn squarefree_u64(mut n: u64) -> bool {
    let bound = n.cbrt() + 1;
    for &q in small_primes(bound).iter() {
        if q.saturating_mul(q).saturating_mul(q) > n {
            break;
        }
        if n % q == 0 {
            n /= q;
            if n % q == 0 {
                return false;
            }
        }
    }
    let r = n.sqrt();
    !(r > 1 && r * r == n)
}

/// Factors N within the budget's trial-division and rho limits.
pub fn factor_int(n: &BigInt, budget: &Budget) -> Result<IntFactorization> {
    if n.is_zero() {
        return Err(Error::OutOfRange("factorization of 0".into()));
    }
    let negative = n.sign() == num_bigint::Sign::Minus;
    let mut m = n.magnitude().clone();
    let mut primes: Vec<(BigUint, u32)> = Vec::new();
    let trial = budget.trial_division.max(2);
    let cache = small_primes(trial);
    let candidates = &cache[..cache.partition_point(|&q| q <= trial)];
    for (i, &q) in candidates.iter().enumerate() {
        if let Some(mut small) = m.to_u64() {
            // finish in machine words
            for &q in &candidates[i..] {
                if q.saturating_mul(q) > small {
                    break;
                }
                let mut e = 0;
                while small % q == 0 {
                    small /= q;
                    e += 1;
                }
                if e > 0 {
                    primes.push((BigUint::from(q), e));
                }
            }
            m = BigUint::from(small);
            break;
        }
        let qb = BigUint::from(q);
        if &qb * &qb > m {
            break;
        }
        let mut e = 0;
        loop {
            let (quo, rem) = m.div_rem(&qb);
            if !rem.is_zero() {
                break;
            }
            m = quo;
            e += 1;
        }
        if e > 0 {
            primes.push((qb, e));
        }
    }
    let mut residue = BigUint::one();
    let mut residue_squarefree = Some(true);
    let mut pending = vec![m];
    let trial_b = BigUint::from(trial);
    while let Some(c) = pending.pop() {
        if c.is_one() {
            continue;
        }
        match classify(&c, &trial_b) {
            Kind::Prime => primes.push((c, 1)),
            Kind::PrimeSquare(q) => primes.push((q, 2)),
            Kind::TwoDistinct | Kind::Unknown => match rho(&c, budget.rho_iterations) {
                Some(d) => {
                    let other = &c / &d;
                    pending.push(d);
                    pending.push(other);
                }
                None => {
                    if !residue.gcd(&c).is_one() {
                        // a prime shared by two pieces divides N twice
                        residue_squarefree = Some(false);
                    } else if classify(&c, &trial_b) == Kind::Unknown && residue_squarefree == Some(true) {
                        residue_squarefree = None;
                    }
                    residue *= c;
                }
            },
        }
    }
    primes.sort();
    let mut merged: Vec<(BigUint, u32)> = Vec::new();
    for (q, e) in primes {
        match merged.last_mut() {
            Some((last, le)) if *last == q => *le += e,
            _ => merged.push((q, e)),
        }
    }
    if residue.is_one() {
        residue_squarefree = Some(true);
    } else if merged.iter().any(|(q, _)| (&residue % q).is_zero()) {
        residue_squarefree = Some(false);
    }
    Ok(IntFactorization { negative, primes: merged, residue, residue_squarefree })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Prime,
    PrimeSquare(BigUint),
    /// Product of two distinct primes above the trial bound.
    TwoDistinct,
    Unknown,
}

/// Classifies a cofactor with no prime factor at or below `trial`.
fn classify(c: &BigUint, trial: &BigUint) -> Kind {
    if c <= &(trial * trial) {
        return Kind::Prime;
    }
    if let Some(proven) = is_prime_big(c) {
        if proven {
            return Kind::Prime;
        }
    }
    let r = c.sqrt();
    if &r * &r == *c && is_prime_big(&r) == Some(true) {
        return Kind::PrimeSquare(r);
    }
    if c < &(trial * trial * trial) {
        // two prime factors at most, and not a square
        return if &r * &r == *c { Kind::PrimeSquare(r) } else { Kind::TwoDistinct };
    }
    Kind::Unknown
}

/// Proven primality when the deterministic Miller-Rabin range applies;
/// `Some(false)` for any detected composite; `None` for a probable prime
/// beyond the proven range.
fn is_prime_big(n: &BigUint) -> Option<bool> {
    if let Some(small) = n.to_u64() {
        return Some(is_prime_u64(small));
    }
    let one = BigUint::one();
    let n_minus = n - &one;
    let s = n_minus.trailing_zeros().unwrap_or(0);
    let d = &n_minus >> s;
    'witness: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus {
                continue 'witness;
            }
        }
        return Some(false);
    }
    let proven = n.to_u128().is_some_and(|v| v < MR_DETERMINISTIC_LIMIT);
    if proven {
        Some(true)
    } else {
        None
    }
}

/// Pollard-Brent rho; a nontrivial divisor of the composite `n`, or `None`
/// when the iteration budget runs out.
fn rho(n: &BigUint, iterations: u64) -> Option<BigUint> {
    if let Some(small) = n.to_u64() {
        return rho_u64(small, iterations).map(BigUint::from);
    }
    let one = BigUint::one();
    let mut spent = 0u64;
    for c in 1u32..=8 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut x;
        let mut ys;
        let mut g;
        loop {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            loop {
                ys = y.clone();
                let batch = 64.min(r - k);
                for _ in 0..batch {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                spent += batch;
                g = q.gcd(n);
                k += batch;
                if k >= r || g != one {
                    break;
                }
            }
            r *= 2;
            if g != one || spent >= iterations {
                break;
            }
        }
        if g == *n {
            // backtrack one step at a time
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != one && g != *n {
            return Some(g);
        }
        if spent >= iterations {
            return None;
        }
    }
    None
}

fn rho_u64(n: u64, iterations: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mut spent = 0;
    for c in 1..=8u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        while g == 1 && spent < iterations {
            x = f(x);
            y = f(f(y));
            g = gcd_u64(x.abs_diff(y), n);
            spent += 1;
        }
        if g != 1 && g != n {
            return Some(g);
        }
        if spent >= iterations {
            return None;
        }
    }
    None
}
