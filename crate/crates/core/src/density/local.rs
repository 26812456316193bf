//! The densities P^sqf_{n,p} and P^max_{n,p} over monic f with unit
//! coefficients, by exhaustive counting mod p² and by Möbius series.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use super::{ratio, DensityKind, DensityReport, Route};
use crate::budget::{sat_pow, Budget};
use crate::error::{Error, Result};
use crate::fppoly::{monic_from_index, DivisibilityCounter, FpPoly, MobiusTable, PrimeField};
use crate::zpoly::{discriminant, disc_valuation_class, DedekindContext, DiscTag, ZPoly};

/// Density by either route.
pub fn local_density(n: usize, p: u64, kind: DensityKind, route: Route, budget: &Budget) -> Result<DensityReport> {
    match route {
        Route::BruteForceModP2 => local_density_brute(n, p, kind, budget),
        Route::MobiusSeries => local_density_series(n, p, kind, budget),
    }
}

/// Counts coefficient tuples of units mod p² satisfying the condition and
/// divides by φ(p²)^n. Tuples are grouped by their reduction mod p, which
/// fixes everything the tests need except the per-lift check.
pub fn local_density_brute(n: usize, p: u64, kind: DensityKind, budget: &Budget) -> Result<DensityReport> {
    if n == 0 {
        return Err(Error::OutOfRange("degree must be at least 1".into()));
    }
    let field = PrimeField::new(p)?;
    let total = sat_pow(p * (p - 1), n as u32);
    budget.check_evaluations("brute-force density", total)?;
    let classes = (p - 1).pow(n as u32);
    let good = (0..classes)
        .into_par_iter()
        .map(|class| count_class(field, n, class, kind, budget))
        .try_reduce(|| 0u128, |a, b| Ok(a + b))?;
    Ok(DensityReport::new(n, p, kind, ratio(good, total), Route::BruteForceModP2))
}

/// Good lifts among the p^n lifts of one residue class.
fn count_class(field: PrimeField, n: usize, class: u64, kind: DensityKind, budget: &Budget) -> Result<u128> {
    let p = field.p() as u64;
    let lifts = (p as u128).pow(n as u32);
    let mut base: Vec<u64> = Vec::with_capacity(n + 1);
    let mut idx = class;
    for _ in 0..n {
        base.push(idx % (p - 1) + 1);
        idx /= p - 1;
    }
    base.push(1);
    let fbar = FpPoly::from_residues(field, base.iter().map(|&c| c as u32).collect());
    match kind {
        DensityKind::Max => {
            let ctx = DedekindContext::new(&fbar, budget)?;
            if ctx.trivially_maximal() {
                return Ok(lifts);
            }
            Ok(count_lifts(p, &base, |f| ctx.is_maximal(f)))
        }
        DensityKind::Sqf if p == 2 => {
            if fbar.is_squarefree()? {
                return Ok(lifts);
            }
            let four = BigInt::from(4);
            Ok(count_lifts(p, &base, |f| {
                let z = ZPoly::new(f.iter().map(|&c| BigInt::from(c)).collect());
                !discriminant(&z).expect("degree >= 1").mod_floor(&four).is_zero()
            }))
        }
        DensityKind::Sqf => {
            let rep = ZPoly::<i64>::new(base.iter().map(|&c| c as i64).collect());
            let class = disc_valuation_class(&rep, field, budget)?;
            match (class.tag, class.witness) {
                (DiscTag::Unit, _) => Ok(lifts),
                (DiscTag::NotApplicable, _) => Ok(0),
                (_, Some((c, _))) => {
                    let p2 = p * p;
                    let at = (p2 - c as u64) % p2;
                    Ok(count_lifts(p, &base, |f| f.iter().rev().fold(0, |acc, &a| (acc * at + a) % p2) != 0))
                }
                (_, None) => unreachable!("valuation classes with a double root carry a witness"),
            }
        }
    }
}

/// Runs `good` over every lift `base + p·k`, k in [0, p)^n, of the
/// non-leading coefficients; the leading coefficient stays 1.
fn count_lifts(p: u64, base: &[u64], good: impl Fn(&[u64]) -> bool) -> u128 {
    let n = base.len() - 1;
    let mut f = base.to_vec();
    let mut digits = vec![0u64; n];
    let mut count = 0u128;
    loop {
        count += u128::from(good(&f));
        let mut i = 0;
        while i < n && digits[i] == p - 1 {
            digits[i] = 0;
            f[i] = base[i];
            i += 1;
        }
        if i == n {
            return count;
        }
        digits[i] += 1;
        f[i] += p;
    }
}

/// Inclusion–exclusion over monic u with count_divisible supplying
/// #{h in U_n : g | h}:
///
/// max: Σ_u μ(u) p^{-deg u} #{u² | h} / (p-1)^n.
///
/// sqf: [Σ_u μ(u) #{u² | h}
///       + (1 - 1/p) Σ_{c≠0} Σ_{x+c ∤ u} μ(u) (#{(x+c)²u² | h} - #{(x+c)³u² | h})] / (p-1)^n.
pub fn local_density_series(n: usize, p: u64, kind: DensityKind, budget: &Budget) -> Result<DensityReport> {
    if n == 0 {
        return Err(Error::OutOfRange("degree must be at least 1".into()));
    }
    if p == 2 {
        return Err(Error::OutOfRange("the series route needs p odd; use p2_density at p = 2".into()));
    }
    let field = PrimeField::new(p)?;
    let dmax = n / 2;
    let table = MobiusTable::new(field, dmax, budget)?;
    let mut counter = DivisibilityCounter::new(n, field, *budget);
    let units = (p as i128 - 1).pow(n as u32);
    let exact = match kind {
        DensityKind::Max => {
            let mut acc: i128 = 0;
            for_each_unit_u(&table, dmax, |d, u, mu| {
                let c = counter.count(&u.pow(2))? as i128;
                acc += mu * (p as i128).pow((dmax - d) as u32) * c;
                Ok(())
            })?;
            ratio(acc, (p as i128).pow(dmax as u32) * units)
        }
        DensityKind::Sqf => {
            let mut t1: i128 = 0;
            for_each_unit_u(&table, dmax, |_, u, mu| {
                t1 += mu * counter.count(&u.pow(2))? as i128;
                Ok(())
            })?;
            let mut t2: i128 = 0;
            if n >= 2 {
                for c in 1..field.p() {
                    let lin = FpPoly::linear(field, c);
                    let (sq, cube) = (lin.pow(2), lin.pow(3));
                    let root = field.neg(c);
                    for_each_unit_u(&table, (n - 2) / 2, |d, u, mu| {
                        if u.eval(root) == 0 {
                            return Ok(());
                        }
                        let u2 = u.pow(2);
                        let mut term = counter.count(&(&sq * &u2))? as i128;
                        if 2 * d + 3 <= n {
                            term -= counter.count(&(&cube * &u2))? as i128;
                        }
                        t2 += mu * term;
                        Ok(())
                    })?;
                }
            }
            ratio(p as i128 * t1 + (p as i128 - 1) * t2, p as i128 * units)
        }
    };
    Ok(DensityReport::new(n, p, kind, exact, Route::MobiusSeries))
}

/// Visits every monic u with deg u <= `dmax`, u(0) ≠ 0 and μ(u) ≠ 0.
fn for_each_unit_u(
    table: &MobiusTable,
    dmax: usize,
    mut visit: impl FnMut(usize, &FpPoly, i128) -> Result<()>,
) -> Result<()> {
    let field = table.field();
    let p = field.p() as u64;
    for d in 0..=dmax {
        for idx in 0..p.pow(d as u32) {
            let mu = table.at(d, idx);
            if mu == 0 || (d > 0 && idx % p == 0) {
                continue;
            }
            visit(d, &monic_from_index(field, d, idx), mu as i128)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zpoly::is_maximal_at_p;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn documented_values() {
        for kind in [DensityKind::Sqf, DensityKind::Max] {
            assert_eq!(local_density_brute(2, 3, kind, &b()).unwrap().exact, ratio(5, 6), "{kind}");
            assert_eq!(local_density_series(2, 3, kind, &b()).unwrap().exact, ratio(5, 6), "{kind}");
        }
        for p in [3u64, 5, 7] {
            assert_eq!(local_density_series(1, p, DensityKind::Sqf, &b()).unwrap().exact, ratio(1, 1));
        }
        for n in [3usize, 5, 7] {
            assert_eq!(local_density_brute(n, 2, DensityKind::Sqf, &b()).unwrap().exact, ratio(0, 1));
        }
    }

    #[test]
    fn quadratic_sqf_by_hand() {
        // f = x² + ax + b, Δ = a² - 4b; bad iff 9 | a² - 4b
        let mut bad = 0;
        for a in (0..9).filter(|a| a % 3 != 0) {
            for b in (0..9).filter(|b| b % 3 != 0) {
                bad += i32::from((a * a - 4 * b) % 9 == 0);
            }
        }
        assert_eq!(bad, 6);
        assert_eq!(local_density_brute(2, 3, DensityKind::Sqf, &b()).unwrap().exact, ratio(36 - bad, 36));
    }

    #[test]
    fn brute_matches_direct_predicates() {
        // every lift through the discriminant itself and through is_maximal_at_p
        for (n, p) in [(3usize, 3u64), (4, 3), (3, 5)] {
            let field = PrimeField::new(p).unwrap();
            let p2 = p * p;
            let units: Vec<i64> = (1..p2 as i64).filter(|v| v % p as i64 != 0).collect();
            let (mut sqf, mut max, mut total) = (0i64, 0i64, 0i64);
            let mut idx = vec![0usize; n];
            loop {
                let mut coeffs: Vec<i64> = idx.iter().map(|&i| units[i]).collect();
                coeffs.push(1);
                let f = ZPoly::<i64>::new(coeffs);
                let disc = discriminant(&f).unwrap();
                sqf += i64::from(disc % (p2 as i64) != 0);
                max += i64::from(is_maximal_at_p(&f, field, &b()).unwrap());
                total += 1;
                let mut i = 0;
                while i < n && idx[i] == units.len() - 1 {
                    idx[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
                idx[i] += 1;
            }
            assert_eq!(local_density_brute(n, p, DensityKind::Sqf, &b()).unwrap().exact, ratio(sqf, total));
            assert_eq!(local_density_brute(n, p, DensityKind::Max, &b()).unwrap().exact, ratio(max, total));
        }
    }

    #[test]
    fn routes_agree_on_small_cases() {
        for (p, nmax) in [(3u64, 6usize), (5, 4)] {
            for n in 1..=nmax {
                for kind in [DensityKind::Sqf, DensityKind::Max] {
                    let brute = local_density_brute(n, p, kind, &b()).unwrap();
                    let series = local_density_series(n, p, kind, &b()).unwrap();
                    assert_eq!(brute.exact, series.exact, "n={n} p={p} {kind}");
                }
            }
        }
    }

    #[test]
    fn p2_max_brute_matches_closed_form() {
        for n in 1..=10 {
            let brute = local_density_brute(n, 2, DensityKind::Max, &b()).unwrap();
            assert_eq!(brute.exact, super::super::p2_density(n, DensityKind::Max).unwrap(), "n={n}");
        }
    }

    #[test]
    fn series_rejects_p2_and_brute_respects_budget() {
        assert!(local_density_series(4, 2, DensityKind::Max, &b()).is_err());
        assert!(local_density_brute(6, 5, DensityKind::Max, &Budget::default().with_limit(1000)).is_err());
    }

    #[test]
    fn max_dominates_sqf() {
        for n in 2..=5 {
            let s = local_density_series(n, 3, DensityKind::Sqf, &b()).unwrap().exact;
            let m = local_density_series(n, 3, DensityKind::Max, &b()).unwrap().exact;
            assert!(s <= m, "n={n}");
        }
    }
}
