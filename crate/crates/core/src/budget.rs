//! Work caps for exhaustive enumerations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable overriding the enumeration and evaluation caps.
pub const BUDGET_ENV: &str = "PRIMEPOLY_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Items a single enumeration (p^d residues, matrix work, ...) may touch.
    pub enumeration: u64,
    /// Predicate evaluations in brute-force counts and experiments.
    pub evaluations: u64,
    /// Trial-division bound for integer factorization.
    pub trial_division: u64,
    /// Pollard rho iterations per split attempt.
    pub rho_iterations: u64,
    /// Largest argument accepted by the prime sieve.
    pub sieve_cap: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            enumeration: 10_000_000,
            evaluations: 100_000_000,
            trial_division: 1_000_000,
            rho_iterations: 10_000,
            sieve_cap: 100_000_000,
        }
    }
}

impl Budget {
    /// Default caps, with enumeration/evaluation raised or lowered by
    /// `PRIMEPOLY_BUDGET` when set.
    pub fn from_env() -> Self {
        match std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse::<u64>().ok()) {
            Some(limit) => Self::default().with_limit(limit),
            None => Self::default(),
        }
    }

    /// Sets both the enumeration and evaluation caps.
    pub fn with_limit(mut self, limit: u64) -> Self {
        self.enumeration = limit;
        self.evaluations = limit.max(1).saturating_mul(10);
        self
    }

    pub fn unlimited() -> Self {
        Self {
            enumeration: u64::MAX,
            evaluations: u64::MAX,
            ..Self::default()
        }
    }

    pub(crate) fn check_enumeration(&self, what: &'static str, needed: u128) -> Result<()> {
        check(what, needed, self.enumeration)
    }

    pub(crate) fn check_evaluations(&self, what: &'static str, needed: u128) -> Result<()> {
        check(what, needed, self.evaluations)
    }
}

fn check(what: &'static str, needed: u128, limit: u64) -> Result<()> {
    if needed > limit as u128 {
        Err(Error::BudgetExceeded { what, needed, limit })
    } else {
        Ok(())
    }
}

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn sat_pow(base: u64, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
