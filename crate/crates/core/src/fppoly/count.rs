//! Counting `#{h in U_n : g | h}`.
//!
//! With D = deg g and m = n - D, the top m non-leading coefficients of h are
//! free and the bottom D are forced by `h ≡ 0 mod g`, so the count is the
//! number of choices of the top part leaving a residue with no zero digit.
//! Two evaluations: walk the (p-1)^m choices directly (`leaf`), or push a
//! residue histogram m steps along α → αx + c (`walk`).

use std::collections::HashMap;

use super::{FpPoly, PrimeField};
use crate::budget::{sat_pow, Budget};
use crate::error::{Error, Result};

/// Largest residue ring the histogram walk will allocate.
const WALK_MAX_STATES: u64 = 1 << 22;

/// Counts below this many steps are not worth caching.
const CACHE_MIN_COST: u128 = 20_000;

/// Number of monic degree-n polynomials with all coefficients nonzero that
/// are divisible by the monic polynomial `g`.
pub fn count_divisible(n: usize, g: &FpPoly, budget: &Budget) -> Result<u128> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !g.is_monic() {
        return Err(Error::NotMonic);
    }
    let field = g.field();
    let p = field.p() as u64;
    let d = g.degree().unwrap();
    if d == 0 {
        return Ok(sat_pow(p - 1, n as u32));
    }
    if g.coeff(0) == 0 || d > n {
        return Ok(0);
    }
    let m = n - d;
    if m == 0 {
        return Ok(u128::from(g.coeffs().iter().all(|&c| c != 0)));
    }
    let (leaf, walk) = costs(p, d, m);
    if leaf <= walk {
        budget.check_evaluations("divisibility count", leaf)?;
        Ok(count_leaf(field, g.coeffs(), n))
    } else {
        budget.check_evaluations("divisibility count", walk)?;
        let fits_u64 = sat_pow(p - 1, n as u32) < u64::MAX as u128;
        Ok(if fits_u64 {
            count_walk::<u64>(field, g.coeffs(), m) as u128
        } else {
            count_walk::<u128>(field, g.coeffs(), m)
        })
    }
}

/// Estimated work of the two methods; the walk is infinite when its state
/// space is too large to allocate.
fn costs(p: u64, d: usize, m: usize) -> (u128, u128) {
    let leaf = sat_pow(p - 1, m as u32).saturating_mul(2 * d as u128 + 2);
    let states = sat_pow(p, d as u32);
    let walk = if states > WALK_MAX_STATES as u128 {
        u128::MAX
    } else {
        states.saturating_mul(4 * m as u128 + 3 * d as u128)
    };
    (leaf, walk)
}

/// Residue of `x * r` modulo monic `g` (both as coefficient slices, deg r < D).
fn mul_x_mod(field: PrimeField, r: &[u32], g: &[u32], out: &mut [u32]) {
    let d = g.len() - 1;
    let top = r[d - 1];
    for i in (1..d).rev() {
        out[i] = field.sub(r[i - 1], field.mul(top, g[i]));
    }
    out[0] = field.neg(field.mul(top, g[0]));
}

fn count_leaf(field: PrimeField, g: &[u32], n: usize) -> u128 {
    let p = field.p();
    let d = g.len() - 1;
    let m = n - d;
    // powers[k] = x^k mod g for k = 0..=n
    let mut powers = vec![vec![0u32; d]; n + 1];
    powers[0][0] = 1;
    for k in 1..=n {
        let (done, rest) = powers.split_at_mut(k);
        mul_x_mod(field, &done[k - 1], g, &mut rest[0]);
    }
    // free coefficient a_i multiplies x^{n-i}, i = 1..=m
    let w: Vec<&Vec<u32>> = (1..=m).map(|i| &powers[n - i]).collect();
    let twice: Vec<Vec<u32>> = w.iter().map(|v| v.iter().map(|&c| field.add(c, c)).collect()).collect();
    let mut cur = powers[n].clone();
    for v in &w {
        for (c, &x) in cur.iter_mut().zip(v.iter()) {
            *c = field.add(*c, x);
        }
    }
    if p == 2 {
        return u128::from(cur.iter().all(|&c| c != 0));
    }
    let mut digits = vec![1u32; m];
    let mut count: u128 = 0;
    loop {
        if cur.iter().all(|&c| c != 0) {
            count += 1;
        }
        let mut t = 0;
        // digits run 1..=p-1; wrapping back to 1 is a step of +2 mod p
        while t < m && digits[t] == p - 1 {
            digits[t] = 1;
            for (c, &x) in cur.iter_mut().zip(twice[t].iter()) {
                *c = field.add(*c, x);
            }
            t += 1;
        }
        if t == m {
            return count;
        }
        digits[t] += 1;
        for (c, &x) in cur.iter_mut().zip(w[t].iter()) {
            *c = field.add(*c, x);
        }
    }
}

/// Unsigned accumulator for the histogram walk. Intermediate values may
/// wrap; final counts are exact.
trait Tally: Copy + Default + PartialEq {
    fn one() -> Self;
    fn wadd(self, o: Self) -> Self;
    fn wsub(self, o: Self) -> Self;
}

impl Tally for u64 {
    fn one() -> Self {
        1
    }
    fn wadd(self, o: Self) -> Self {
        self.wrapping_add(o)
    }
    fn wsub(self, o: Self) -> Self {
        self.wrapping_sub(o)
    }
}

impl Tally for u128 {
    fn one() -> Self {
        1
    }
    fn wadd(self, o: Self) -> Self {
        self.wrapping_add(o)
    }
    fn wsub(self, o: Self) -> Self {
        self.wrapping_sub(o)
    }
}

fn count_walk<T: Tally>(field: PrimeField, g: &[u32], m: usize) -> T {
    let p = field.p() as usize;
    let d = g.len() - 1;
    let states = p.pow(d as u32);
    // image of each residue under multiplication by x, and its constant digit
    let mut times_x = vec![0u32; states];
    let mut r = vec![0u32; d];
    let mut out = vec![0u32; d];
    for (idx, slot) in times_x.iter_mut().enumerate() {
        let mut v = idx;
        for c in r.iter_mut() {
            *c = (v % p) as u32;
            v /= p;
        }
        mul_x_mod(field, &r, g, &mut out);
        *slot = out.iter().rev().fold(0u32, |acc, &c| acc * p as u32 + c);
    }
    let mut cur = vec![T::default(); states];
    let mut next = vec![T::default(); states];
    let mut block = vec![T::default(); states / p];
    cur[1] = T::one();
    for _ in 0..m {
        block.iter_mut().for_each(|b| *b = T::default());
        next.iter_mut().for_each(|b| *b = T::default());
        for (a, &v) in cur.iter().enumerate() {
            if v == T::default() {
                continue;
            }
            let t = times_x[a] as usize;
            // αx + c for c != 0 covers the block of t except t itself
            block[t / p] = block[t / p].wadd(v);
            next[t] = next[t].wsub(v);
        }
        for (b, &s) in block.iter().enumerate() {
            if s == T::default() {
                continue;
            }
            for slot in &mut next[b * p..(b + 1) * p] {
                *slot = slot.wadd(s);
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    // residue r is completed iff -(r x^D mod g) has no zero digit
    let mut total = T::default();
    for (a, &v) in cur.iter().enumerate() {
        if v == T::default() {
            continue;
        }
        let mut t = a;
        for _ in 0..d {
            t = times_x[t] as usize;
        }
        let mut good = true;
        for _ in 0..d {
            if t % p == 0 {
                good = false;
                break;
            }
            t /= p;
        }
        if good {
            total = total.wadd(v);
        }
    }
    total
}

/// Caches `count_divisible` for fixed `n` up to the symmetries
/// `g(x) -> λ^{-D} g(λx)` and `g -> x^D g(1/x) / g(0)`, both of which
/// permute U_n.
#[derive(Debug)]
pub struct DivisibilityCounter {
    n: usize,
    field: PrimeField,
    budget: Budget,
    cache: HashMap<Vec<u32>, u128>,
}

impl DivisibilityCounter {
    pub fn new(n: usize, field: PrimeField, budget: Budget) -> Self {
        Self { n, field, budget, cache: HashMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cached(&self) -> usize {
        self.cache.len()
    }

    pub fn count(&mut self, g: &FpPoly) -> Result<u128> {
        if g.field() != self.field {
            return Err(Error::FieldMismatch(g.p(), self.field.p()));
        }
        let d = match g.degree() {
            Some(d) if g.is_monic() && d >= 1 && d < self.n && g.coeff(0) != 0 => d,
            _ => return count_divisible(self.n, g, &self.budget),
        };
        let (leaf, walk) = costs(self.field.p() as u64, d, self.n - d);
        if leaf.min(walk) < CACHE_MIN_COST {
            return count_divisible(self.n, g, &self.budget);
        }
        let key = canonical_form(self.field, g.coeffs());
        if let Some(&hit) = self.cache.get(&key) {
            return Ok(hit);
        }
        let value = count_divisible(self.n, g, &self.budget)?;
        self.cache.insert(key, value);
        Ok(value)
    }
}

/// Least coefficient vector in the orbit of `g` under scaling and reversal.
fn canonical_form(field: PrimeField, g: &[u32]) -> Vec<u32> {
    let d = g.len() - 1;
    let inv0 = field.inv(g[0]);
    let reversed: Vec<u32> = (0..=d).map(|i| field.mul(g[d - i], inv0)).collect();
    let mut best: Option<Vec<u32>> = None;
    let mut cand = vec![0u32; d + 1];
    for base in [g, &reversed[..]] {
        for lambda in 1..field.p() {
            // c_i -> c_i λ^{i - D}
            let li = field.inv(lambda);
            let mut scale = field.pow(li, d as u64);
            for i in 0..=d {
                cand[i] = field.mul(base[i], scale);
                scale = field.mul(scale, lambda);
            }
            let better = match &best {
                None => true,
                Some(b) => cand.iter().rev().lt(b.iter().rev()),
            };
            if better {
                best = Some(cand.clone());
            }
        }
    }
    best.expect("p >= 2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fppoly::{enumerate_monic, Constraint};
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn b() -> Budget {
        Budget::default()
    }

    fn brute(n: usize, g: &FpPoly) -> u128 {
        enumerate_monic(g.field(), n, Constraint::NonzeroCoeffs, &b())
            .unwrap()
            .filter(|h| g.divides(h).unwrap())
            .count() as u128
    }

    #[test]
    fn documented_values() {
        let f3 = fp(3);
        assert_eq!(count_divisible(5, &FpPoly::one(f3), &b()).unwrap(), 32);
        let sq = FpPoly::linear(f3, 1).pow(2);
        assert_eq!(count_divisible(2, &sq, &b()).unwrap(), 1);
        for n in 1..6 {
            assert_eq!(count_divisible(n, &FpPoly::x(fp(5)), &b()).unwrap(), 0);
        }
    }

    #[test]
    fn both_methods_agree_with_enumeration() {
        for p in [2u64, 3, 5] {
            let f = fp(p);
            for d in 1..=3 {
                for g in enumerate_monic(f, d, Constraint::CoprimeToX, &b()).unwrap() {
                    for n in d + 1..=7 {
                        let expected = brute(n, &g);
                        assert_eq!(count_leaf(f, g.coeffs(), n), expected, "leaf {g} n={n}");
                        assert_eq!(count_walk::<u64>(f, g.coeffs(), n - d) as u128, expected, "walk {g} n={n}");
                        assert_eq!(count_walk::<u128>(f, g.coeffs(), n - d), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn residue_classes_partition_u_n() {
        // summing over residues mod u recovers (p-1)^n
        for p in [3u64, 5] {
            let f = fp(p);
            for d in 1..=2 {
                for u in enumerate_monic(f, d, Constraint::All, &b()).unwrap() {
                    for n in 1..=6 {
                        let mut hist: HashMap<FpPoly, u64> = HashMap::new();
                        for h in enumerate_monic(f, n, Constraint::NonzeroCoeffs, &b()).unwrap() {
                            *hist.entry(h.rem(&u).unwrap()).or_default() += 1;
                        }
                        assert_eq!(hist.values().sum::<u64>(), (p - 1).pow(n as u32));
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_members_share_counts() {
        let f = fp(5);
        for g in enumerate_monic(f, 3, Constraint::CoprimeToX, &b()).unwrap().take(40) {
            let key = canonical_form(f, g.coeffs());
            let rep = FpPoly::from_residues(f, key);
            assert!(rep.is_monic());
            assert_eq!(brute(6, &g), brute(6, &rep), "{g} vs {rep}");
        }
    }

    #[test]
    fn counter_matches_direct() {
        let f = fp(5);
        let mut counter = DivisibilityCounter::new(12, f, b());
        for g in enumerate_monic(f, 6, Constraint::CoprimeToX, &b()).unwrap().step_by(97).take(60) {
            let rep = FpPoly::from_residues(f, canonical_form(f, g.coeffs()));
            assert_eq!(counter.count(&g).unwrap(), count_divisible(12, &g, &b()).unwrap());
            assert_eq!(counter.count(&rep).unwrap(), count_divisible(12, &g, &b()).unwrap());
        }
        assert!(counter.cached() > 0);
    }

    proptest! {
        #[test]
        fn squares_of_random_polys(
            p in prop::sample::select(vec![3u64, 5]),
            c in prop::collection::vec(0i64..5, 1..3),
            n in 4usize..9,
        ) {
            let f = fp(p);
            let mut c = c;
            c.push(1);
            let u = FpPoly::new(f, &c);
            let g = u.pow(2);
            prop_assert_eq!(count_divisible(n, &g, &b()).unwrap(), brute(n, &g));
        }
    }
}
