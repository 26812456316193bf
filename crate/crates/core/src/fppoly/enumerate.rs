//! Enumeration of monic polynomials over 𝔽_p and a sieved Möbius table.

use super::{FpPoly, PrimeField};
use crate::budget::{sat_pow, Budget};
use crate::error::{Error, Result};

/// Which monic polynomials an enumeration yields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    All,
    /// Every coefficient nonzero (the set U_d).
    NonzeroCoeffs,
    Squarefree,
    /// Nonzero constant term.
    CoprimeToX,
}

/// Index of a monic polynomial of degree d among all monic degree-d
/// polynomials: `sum c_i p^i` over the non-leading coefficients.
pub fn monic_index(f: &FpPoly) -> Result<u64> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let d = f.degree().unwrap_or(0);
    let p = f.p() as u64;
    Ok(f.coeffs()[..d].iter().rev().fold(0u64, |acc, &c| acc * p + c as u64))
}

pub fn monic_from_index(field: PrimeField, d: usize, mut index: u64) -> FpPoly {
    let p = field.p() as u64;
    let mut coeffs = Vec::with_capacity(d + 1);
    for _ in 0..d {
        coeffs.push((index % p) as u32);
        index /= p;
    }
    coeffs.push(1);
    FpPoly::from_residues(field, coeffs)
}

/// Restartable stream of monic polynomials of a fixed degree in canonical
/// (ascending) order. Disjoint index ranges can be consumed independently.
#[derive(Clone, Debug)]
pub struct MonicIter {
    field: PrimeField,
    degree: usize,
    constraint: Constraint,
    next: u64,
    end: u64,
}

/// Enumerates monic polynomials of degree `d` satisfying `constraint`.
pub fn enumerate_monic(field: PrimeField, d: usize, constraint: Constraint, budget: &Budget) -> Result<MonicIter> {
    let iter = MonicIter::full(field, d, constraint);
    budget.check_enumeration("monic enumeration", iter.end as u128)?;
    Ok(iter)
}

impl MonicIter {
    fn radix(field: PrimeField, constraint: Constraint) -> u64 {
        match constraint {
            Constraint::NonzeroCoeffs => field.p() as u64 - 1,
            _ => field.p() as u64,
        }
    }

    fn full(field: PrimeField, d: usize, constraint: Constraint) -> Self {
        let size = sat_pow(Self::radix(field, constraint), d as u32).min(u64::MAX as u128) as u64;
        Self { field, degree: d, constraint, next: 0, end: size }
    }

    /// Size of the underlying index space (before filtering).
    pub fn index_len(&self) -> u64 {
        self.end - self.next
    }

    /// Splits the remaining index range into at most `parts` contiguous pieces.
    pub fn split(&self, parts: usize) -> Vec<MonicIter> {
        let parts = parts.max(1) as u64;
        let len = self.index_len();
        let chunk = len.div_ceil(parts).max(1);
        let mut out = Vec::new();
        let mut start = self.next;
        while start < self.end {
            let stop = (start + chunk).min(self.end);
            out.push(MonicIter { next: start, end: stop, ..self.clone() });
            start = stop;
        }
        out
    }

    fn build(&self, mut index: u64) -> FpPoly {
        let radix = Self::radix(self.field, self.constraint);
        let offset = u32::from(self.constraint == Constraint::NonzeroCoeffs);
        let mut coeffs = Vec::with_capacity(self.degree + 1);
        for _ in 0..self.degree {
            coeffs.push((index % radix) as u32 + offset);
            index /= radix;
        }
        coeffs.push(1);
        FpPoly::from_residues(self.field, coeffs)
    }

    fn accepts(&self, f: &FpPoly) -> bool {
        match self.constraint {
            Constraint::All | Constraint::NonzeroCoeffs => true,
            Constraint::CoprimeToX => f.coeff(0) != 0,
            Constraint::Squarefree => f.is_squarefree().expect("monic is nonzero"),
        }
    }
}

impl Iterator for MonicIter {
    type Item = FpPoly;

    fn next(&mut self) -> Option<FpPoly> {
        while self.next < self.end {
            let f = self.build(self.next);
            self.next += 1;
            if self.accepts(&f) {
                return Some(f);
            }
        }
        None
    }
}

/// Möbius values of every monic polynomial of degree at most `max_degree`,
/// indexed by [`monic_index`].
#[derive(Clone, Debug)]
pub struct MobiusTable {
    field: PrimeField,
    values: Vec<Vec<i8>>,
}

impl MobiusTable {
    /// Sieves with every monic irreducible of degree <= `max_degree`.
    pub fn new(field: PrimeField, max_degree: usize, budget: &Budget) -> Result<Self> {
        let p = field.p() as u64;
        budget.check_enumeration("Möbius table", sat_pow(p, max_degree as u32))?;
        let mut values: Vec<Vec<i8>> = (0..=max_degree).map(|e| vec![1i8; p.pow(e as u32) as usize]).collect();
        let mut composite: Vec<Vec<bool>> = (0..=max_degree).map(|e| vec![false; p.pow(e as u32) as usize]).collect();
        for k in 1..=max_degree {
            for g_index in 0..p.pow(k as u32) {
                if composite[k][g_index as usize] {
                    continue;
                }
                let g = monic_from_index(field, k, g_index);
                values[k][g_index as usize] = -1;
                for j in 1..=max_degree - k {
                    for_each_multiple(field, g.coeffs(), j, |idx| {
                        composite[k + j][idx as usize] = true;
                        values[k + j][idx as usize] = -values[k + j][idx as usize];
                    });
                }
                let g2 = g.pow(2);
                for j in 0..=max_degree.saturating_sub(2 * k) {
                    if 2 * k + j > max_degree {
                        break;
                    }
                    for_each_multiple(field, g2.coeffs(), j, |idx| values[2 * k + j][idx as usize] = 0);
                }
            }
        }
        Ok(Self { field, values })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn max_degree(&self) -> usize {
        self.values.len() - 1
    }

    /// μ of the monic polynomial of degree `d` with the given index.
    pub fn at(&self, d: usize, index: u64) -> i8 {
        self.values[d][index as usize]
    }

    pub fn get(&self, f: &FpPoly) -> Result<i8> {
        let d = f.degree().ok_or(Error::ZeroPolynomial)?;
        if d > self.max_degree() {
            return Err(Error::OutOfRange(format!("degree {d} exceeds table degree {}", self.max_degree())));
        }
        Ok(self.at(d, monic_index(f)?))
    }
}

/// Calls `visit` with the index of `g * q` for every monic `q` of degree `j`,
/// where `g` is monic (coefficients low to high). Updates the product
/// incrementally: stepping `q`'s index bumps a prefix of its digits by one.
fn for_each_multiple(field: PrimeField, g: &[u32], j: usize, mut visit: impl FnMut(u64)) {
    let p = field.p();
    let k = g.len() - 1;
    let e = k + j;
    let pows: Vec<u64> = (0..=e).map(|i| (p as u64).pow(i as u32)).collect();
    // product coefficients of g * x^j (q = x^j initially)
    let mut prod = vec![0u32; e + 1];
    prod[j..=e].copy_from_slice(g);
    let mut index: u64 = (0..e).map(|i| prod[i] as u64 * pows[i]).sum();
    let mut digits = vec![0u32; j];
    loop {
        visit(index);
        // find how many low digits wrap
        let mut t = 0;
        while t < j && digits[t] == p - 1 {
            digits[t] = 0;
            t += 1;
        }
        if t == j {
            return;
        }
        digits[t] += 1;
        // every digit 0..=t rose by one mod p: add g * (1 + x + ... + x^t)
        for s in 0..=t {
            for (i, &gc) in g.iter().enumerate() {
                if gc == 0 {
                    continue;
                }
                let pos = s + i;
                if pos >= e {
                    continue;
                }
                let old = prod[pos];
                let new = field.add(old, gc);
                prod[pos] = new;
                index = index + new as u64 * pows[pos] - old as u64 * pows[pos];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fppoly::mobius;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn u_n_over_f2_is_a_single_polynomial() {
        for n in 1..8 {
            let all: Vec<_> = enumerate_monic(fp(2), n, Constraint::NonzeroCoeffs, &b()).unwrap().collect();
            assert_eq!(all.len(), 1);
            assert!(all[0].coeffs().iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_monic(fp(3), 2, Constraint::NonzeroCoeffs, &b()).unwrap().count(), 4);
        let lin: Vec<_> = enumerate_monic(fp(3), 1, Constraint::CoprimeToX, &b()).unwrap().collect();
        assert_eq!(lin, vec![FpPoly::linear(fp(3), 1), FpPoly::linear(fp(3), 2)]);
        // p^d - p^{d-1} squarefree monics for d >= 2
        assert_eq!(enumerate_monic(fp(3), 3, Constraint::Squarefree, &b()).unwrap().count(), 27 - 9);
    }

    #[test]
    fn nonzero_count_and_order() {
        for p in [3u64, 5] {
            for d in 0..5 {
                let v: Vec<_> = enumerate_monic(fp(p), d, Constraint::NonzeroCoeffs, &b()).unwrap().collect();
                assert_eq!(v.len() as u64, (p - 1).pow(d as u32));
                assert!(v.windows(2).all(|w| w[0] < w[1]));
                assert!(v.iter().all(|f| f.coeffs().iter().all(|&c| c != 0)));
            }
        }
    }

    #[test]
    fn canonical_order_matches_ord() {
        let v: Vec<_> = enumerate_monic(fp(3), 3, Constraint::All, &b()).unwrap().collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        for (i, f) in v.iter().enumerate() {
            assert_eq!(monic_index(f).unwrap(), i as u64);
            assert_eq!(&monic_from_index(fp(3), 3, i as u64), f);
        }
    }

    #[test]
    fn split_ranges_cover_everything_once() {
        let it = enumerate_monic(fp(5), 3, Constraint::Squarefree, &b()).unwrap();
        let whole: Vec<_> = it.clone().collect();
        let pieces: Vec<_> = it.split(7).into_iter().flatten().collect();
        assert_eq!(whole, pieces);
    }

    #[test]
    fn budget_is_enforced() {
        let tiny = Budget::default().with_limit(100);
        assert!(enumerate_monic(fp(5), 3, Constraint::All, &tiny).is_err());
    }

    #[test]
    fn mobius_table_matches_factorization() {
        for (p, dmax) in [(2u64, 8usize), (3, 5), (5, 3)] {
            let table = MobiusTable::new(fp(p), dmax, &b()).unwrap();
            for d in 0..=dmax {
                for f in enumerate_monic(fp(p), d, Constraint::All, &b()).unwrap() {
                    assert_eq!(table.get(&f).unwrap(), mobius(&f, &b()).unwrap(), "{f}");
                }
            }
        }
    }

    #[test]
    fn multiples_walk_visits_products() {
        let g = FpPoly::new(fp(3), &[2, 0, 1]);
        let mut seen = Vec::new();
        for_each_multiple(fp(3), g.coeffs(), 2, |i| seen.push(i));
        let expected: Vec<u64> = enumerate_monic(fp(3), 2, Constraint::All, &b())
            .unwrap()
            .map(|q| monic_index(&(&g * &q)).unwrap())
            .collect();
        assert_eq!(seen, expected);
    }
}
