//! Factorization over 𝔽_p by trial division against cached irreducibles.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use serde::Serialize;

use super::{enumerate_monic, Constraint, FpPoly, PrimeField};
use crate::budget::{sat_pow, Budget};
use crate::error::{Error, Result};

type IrreducibleCache = HashMap<(u32, usize), Arc<Vec<FpPoly>>>;

static IRREDUCIBLES: LazyLock<Mutex<IrreducibleCache>> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// All monic irreducibles of degree `k` over `field`, in enumeration order.
///
/// Each candidate is certified by exhaustive search for divisors of degree
/// at most `k / 2`; results are cached per `(p, k)`.
pub fn irreducibles_of_degree(field: PrimeField, k: usize, budget: &Budget) -> Result<Arc<Vec<FpPoly>>> {
    if let Some(hit) = IRREDUCIBLES.lock().expect("cache poisoned").get(&(field.p(), k)) {
        return Ok(hit.clone());
    }
    budget.check_enumeration("irreducible enumeration", sat_pow(field.p() as u64, k as u32))?;
    let smaller: Vec<Arc<Vec<FpPoly>>> = (1..=k / 2)
        .map(|j| irreducibles_of_degree(field, j, budget))
        .collect::<Result<_>>()?;
    let found: Vec<FpPoly> = if k == 0 {
        Vec::new()
    } else {
        enumerate_monic(field, k, Constraint::All, budget)?
            .filter(|f| {
                smaller
                    .iter()
                    .flat_map(|v| v.iter())
                    .all(|g| !g.divides(f).expect("same field"))
            })
            .collect()
    };
    let found = Arc::new(found);
    IRREDUCIBLES
        .lock()
        .expect("cache poisoned")
        .insert((field.p(), k), found.clone());
    Ok(found)
}

/// `unit * prod(factor^multiplicity)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FpFactorization {
    pub unit: u32,
    /// Monic irreducible factors with multiplicity, sorted canonically.
    pub factors: Vec<(FpPoly, u32)>,
}

impl FpFactorization {
    pub fn product(&self, field: PrimeField) -> FpPoly {
        self.factors
            .iter()
            .fold(FpPoly::constant(field, self.unit), |acc, (g, e)| &acc * &g.pow(*e))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    /// Product of the distinct irreducible factors.
    pub fn radical(&self, field: PrimeField) -> FpPoly {
        self.factors.iter().fold(FpPoly::one(field), |acc, (g, _)| &acc * g)
    }

    /// Number of irreducible factors counted with multiplicity.
    pub fn omega(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }
}

/// Complete factorization into monic irreducibles.
pub fn factor(a: &FpPoly, budget: &Budget) -> Result<FpFactorization> {
    if a.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = a.field();
    let unit = a.leading();
    let mut rest = a.to_monic();
    let mut factors = Vec::new();
    let mut k = 1;
    while rest.degree().unwrap_or(0) >= 2 * k {
        let candidates = irreducibles_of_degree(field, k, budget)?;
        for g in candidates.iter() {
            let mut mult = 0;
            loop {
                let (q, r) = rest.div_rem(g)?;
                if !r.is_zero() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                factors.push((g.clone(), mult));
            }
            if rest.degree().unwrap_or(0) < 2 * k {
                break;
            }
        }
        k += 1;
    }
    // no factor of degree <= deg/2 remains, so what is left is irreducible
    if rest.degree().unwrap_or(0) >= 1 {
        match factors.iter_mut().find(|(g, _)| *g == rest) {
            Some((_, e)) => *e += 1,
            None => factors.push((rest, 1)),
        }
    }
    factors.sort();
    Ok(FpFactorization { unit, factors })
}

pub fn is_irreducible(a: &FpPoly, budget: &Budget) -> Result<bool> {
    let fac = factor(a, budget)?;
    Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1)
}

/// Möbius function of a monic polynomial.
pub fn mobius(u: &FpPoly, budget: &Budget) -> Result<i8> {
    if u.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !u.is_monic() {
        return Err(Error::NotMonic);
    }
    let fac = factor(u, budget)?;
    if !fac.is_squarefree() {
        return Ok(0);
    }
    Ok(if fac.factors.len() % 2 == 0 { 1 } else { -1 })
}
