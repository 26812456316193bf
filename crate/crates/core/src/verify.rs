//! The acceptance criteria as runnable checks with stable identifiers, in
//! dependency order: polynomial counting, local densities, equidistribution,
//! constants, then the sieve.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::totient;
use crate::budget::Budget;
use crate::density::{
    error_bound, euler_product, local_density_brute, local_density_series, lseries_identity_check, main_term,
    p2_density, p_t, ratio, ratio_to_f64, unit_fraction_f2, DensityKind, EulerKind, LSeriesVariant,
};
use crate::equidist::{bound_large_exact, delta_exact, divisible_count_via_paths, lemma_checks};
use crate::error::Result;
use crate::fppoly::{count_divisible, enumerate_monic, Constraint, PrimeField};
use crate::sieve::{li, local_factor, rho_prime, run_experiment, BadSetSpec, ExperimentKind};
use crate::zpoly::{is_maximal_at_p, ZPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Failed a diagnostic whose implied constant is unknown.
    Warn,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: &'static str,
    pub title: &'static str,
    pub status: Status,
    /// One line per check, prefixed "ok", "FAIL" or "warn".
    pub details: Vec<String>,
    /// Wall time, left out of JSON so reruns are byte-identical.
    #[serde(skip)]
    pub seconds: f64,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// `PASS c01_route_equality (1.2s): title` and similar.
    pub fn summary_line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Warn => "WARN",
        };
        format!("{tag} {} ({:.1}s): {}", self.id, self.seconds, self.title)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub criteria: Vec<CriterionOutcome>,
    pub failed: Vec<&'static str>,
    pub warnings: Vec<&'static str>,
    pub passed: bool,
}

type Runner = fn(u64, &Budget) -> Result<Tally>;

/// (id, title, runner) in execution order.
pub const CRITERIA: [(&str, &str, Runner); 11] = [
    ("c10_count_vs_paths", "count_divisible equals path counts in G_u", c10_count_vs_paths),
    ("c02_p2_closed_forms", "p = 2 densities equal exhaustive counts", c02_p2_closed_forms),
    ("c03_cyclotomic", "p_t equals the unit fraction of F_2[x]/(x^t - 1)", c03_cyclotomic),
    ("c01_route_equality", "brute-force and series densities agree", c01_route_equality),
    ("c11_main_term_proximity", "series density within error_bound of the main term", c11_main_term_proximity),
    ("c04_lseries", "L-series partial sums within 2/p^D of their limits", c04_lseries),
    ("c05_discrepancy", "delta_exact below every applicable bound", c05_discrepancy),
    ("c06_lemma_suite", "doubly stochastic matrix lemmas hold exactly", c06_lemma_suite),
    ("c07_euler_products", "Euler products match the published constants", c07_euler_products),
    ("c08_sieve_local_factors", "sieve local factors equal brute-force densities", c08_sieve_local_factors),
    ("c09_experiments", "desk-scale experiments meet the calibration gates", c09_experiments),
];

/// Criteria whose failure is reported as a warning.
const ADVISORY: [&str; 1] = ["c11_main_term_proximity"];

pub fn criterion_ids() -> Vec<&'static str> {
    CRITERIA.iter().map(|c| c.0).collect()
}

/// Runs one criterion. Errors inside it count as failures.
pub fn run_criterion(id: &str, seed: u64, budget: &Budget) -> Option<CriterionOutcome> {
    let &(id, title, runner) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let tally = runner(seed, budget).unwrap_or_else(|e| {
        let mut t = Tally::default();
        t.check(false, format!("error: {e}"));
        t
    });
    let status = match (tally.failed, ADVISORY.contains(&id)) {
        (false, _) => Status::Pass,
        (true, true) => Status::Warn,
        (true, false) => Status::Fail,
    };
    Some(CriterionOutcome { id, title, status, details: tally.lines, seconds: start.elapsed().as_secs_f64() })
}

/// Runs the selected criteria (all when `only` is empty) in order.
pub fn verify_all(seed: u64, budget: &Budget, only: &[String]) -> VerifyReport {
    let criteria: Vec<CriterionOutcome> = CRITERIA
        .iter()
        .filter(|c| only.is_empty() || only.iter().any(|o| o == c.0))
        .filter_map(|c| run_criterion(c.0, seed, budget))
        .collect();
    let failed = criteria.iter().filter(|c| c.status == Status::Fail).map(|c| c.id).collect::<Vec<_>>();
    let warnings = criteria.iter().filter(|c| c.status == Status::Warn).map(|c| c.id).collect();
    VerifyReport { seed, passed: failed.is_empty(), criteria, failed, warnings }
}

#[derive(Default)]
pub struct Tally {
    lines: Vec<String>,
    failed: bool,
}

impl Tally {
    /// Records a check; returns whether it held.
    fn check(&mut self, ok: bool, line: String) -> bool {
        self.lines.push(format!("{} {line}", if ok { "ok" } else { "FAIL" }));
        self.failed |= !ok;
        ok
    }

    fn warn(&mut self, ok: bool, line: String) {
        self.lines.push(format!("{} {line}", if ok { "ok" } else { "warn" }));
        self.failed |= !ok;
    }
}

fn kinds() -> [DensityKind; 2] {
    [DensityKind::Sqf, DensityKind::Max]
}

fn c01_route_equality(_: u64, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    for p in [3u64, 5] {
        for n in 2..=6 {
            for kind in kinds() {
                let brute = local_density_brute(n, p, kind, budget)?.exact;
                let series = local_density_series(n, p, kind, budget)?.exact;
                if !t.check(brute == series, format!("n={n} p={p} {kind}: brute {brute}, series {series}")) {
                    return Ok(t);
                }
                if (n, p) == (2, 3) {
                    t.check(brute == ratio(5, 6), format!("n=2 p=3 {kind} equals 5/6"));
                }
            }
        }
    }
    Ok(t)
}

fn c02_p2_closed_forms(_: u64, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    let field = PrimeField::new(2)?;
    for n in 1..=12usize {
        // odd lifts mod 4 of x^n + x^{n-1} + ... + 1
        let mut maximal = 0u64;
        for bits in 0u64..(1 << n) {
            let mut c: Vec<i64> = (0..n).map(|i| 1 + 2 * ((bits >> i) & 1) as i64).collect();
            c.push(1);
            maximal += u64::from(is_maximal_at_p(&ZPoly::<i64>::new(c), field, budget)?);
        }
        let counted = ratio(maximal, 1u64 << n);
        let closed = p2_density(n, DensityKind::Max)?;
        if !t.check(counted == closed, format!("max n={n}: counted {counted}, closed form {closed}")) {
            return Ok(t);
        }
        if n == 5 {
            t.check(closed == ratio(3, 4), "max n=5 equals 3/4".into());
        }
        let sqf = p2_density(n, DensityKind::Sqf)?;
        let parity = ratio(u8::from(n == 1 || n % 2 == 0), 1);
        if !t.check(sqf == parity, format!("sqf n={n}: {sqf} (parity rule {parity})")) {
            return Ok(t);
        }
        if n <= 8 {
            let brute = local_density_brute(n, 2, DensityKind::Sqf, budget)?.exact;
            t.check(brute == sqf, format!("sqf n={n}: brute force {brute}"));
        }
    }
    Ok(t)
}

fn c03_cyclotomic(_: u64, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    for odd in (1..=21u64).step_by(2) {
        let formula = p_t(odd)?.p_t;
        let direct = unit_fraction_f2(odd, budget)?;
        if !t.check(formula == direct, format!("t={odd}: p_t {formula}, |R^x|/|R| {direct}")) {
            return Ok(t);
        }
    }
    Ok(t)
}

fn c04_lseries(_: u64, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    for p in [3u64, 5, 7] {
        let pb = BigInt::from(p);
        for variant in [LSeriesVariant::NoX, LSeriesVariant::NoXNoC] {
            let c = lseries_identity_check(p, variant, 8, budget)?;
            let target = match variant {
                LSeriesVariant::NoX => BigRational::new(pb.clone(), &pb + 1),
                LSeriesVariant::NoXNoC => BigRational::new(pb.pow(3), (&pb - 1) * (&pb + 1) * (&pb + 1)),
            };
            let ok = c.holds && c.target == target && c.gap <= ratio(2, pb.pow(8));
            if !t.check(ok, format!("p={p} {variant:?}: gap {:.3e} <= bound {:.3e}", ratio_to_f64(&c.gap), ratio_to_f64(&c.bound))) {
                return Ok(t);
            }
        }
    }
    Ok(t)
}

fn c05_discrepancy(_: u64, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    let w = delta_exact(4, 3, 1, budget)?;
    let ok = w.delta_exact == ratio(1, 24) && bound_large_exact(4, 3, 1) == Some(ratio(1, 12));
    if !t.check(ok, format!("witness delta_4,3(1) = {} <= 1/12", w.delta_exact)) {
        return Ok(t);
    }
    for p in [3u64, 5] {
        for d in 1..=2 {
            for n in 2 * d..=12 {
                let r = delta_exact(n, p, d, budget)?;
                let line = format!("n={n} p={p} d={d}: delta {:.4e} <= {:.4e}", ratio_to_f64(&r.delta_exact), r.best_bound());
                if !t.check(r.within_bounds, line) {
                    return Ok(t);
                }
            }
        }
    }
    Ok(t)
}

fn c06_lemma_suite(seed: u64, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    for p in [3u64, 5] {
        let r = lemma_checks(p, 2, 8, seed, budget)?;
        for c in &r.checks {
            let line = format!("p={p} {}: {} cases{}", c.id, c.cases, c.first_failure.as_ref().map_or(String::new(), |f| format!(", first failure {f}")));
            if !t.check(c.passed(), line) {
                return Ok(t);
            }
        }
        t.check(r.random_matrices == 100, format!("p={p}: {} graphs, {} random matrices", r.graphs, r.random_matrices));
    }
    Ok(t)
}

fn c07_euler_products(_: u64, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    for (kind, lo, hi) in [
        (EulerKind::A4b3, 0.3735, 0.3745),
        (EulerKind::SqfLimit, 0.6764, 0.6774),
        (EulerKind::MaxLimit, 0.8521, 0.8531),
    ] {
        let e = euler_product(&kind, 1_000_000, budget)?;
        t.check((lo..=hi).contains(&e.value), format!("{kind} = {:.6} in [{lo}, {hi}]", e.value));
    }
    Ok(t)
}

fn c08_sieve_local_factors(_: u64, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    let a = BadSetSpec::a4b3();
    let rho = rho_prime(3, &a, 2, budget)?;
    let factor = local_factor(3, &a, 2, budget)?.factor;
    let ok = rho == 6 && factor == ratio(5, 6) && factor == ratio(1, 1) - ratio(1, 9 - 3);
    if !t.check(ok, format!("a4b3: rho'(9) = {rho}, factor {factor}")) {
        return Ok(t);
    }
    for (spec, kind) in [(BadSetSpec::sqf_disc_monic(), DensityKind::Sqf), (BadSetSpec::maximality_monic(), DensityKind::Max)] {
        for n in 2..=4usize {
            for p in [3u64, 5] {
                let rho = rho_prime(p, &spec, n, budget)?;
                let units = BigInt::from(totient(p * p)).pow(n as u32);
                let factor = ratio(1, 1) - BigRational::new(BigInt::from(rho), units);
                let brute = local_density_brute(n, p, kind, budget)?.exact;
                let line = format!("{} n={n} p={p}: rho' = {rho}, factor {factor}, brute {brute}", spec.name);
                if !t.check(factor == brute, line) {
                    return Ok(t);
                }
            }
        }
    }
    Ok(t)
}

fn c09_experiments(_: u64, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    let a = run_experiment(ExperimentKind::A4b3, 10.0, false, budget)?;
    let target = 0.3740 * li(1000.0)? * li(10000.0)?;
    let dev = (a.counted as f64 - target).abs() / target;
    t.check(
        dev <= 0.10 && a.unknown == 0,
        format!("a4b3 X=10: counted {} vs 0.3740 li(10^3) li(10^4) = {target:.1}, deviation {dev:.4}, unknown {}", a.counted, a.unknown),
    );
    let q = run_experiment(ExperimentKind::SqfMonic(2), 10.0, false, budget)?;
    t.check(
        q.unknown == 0 && q.relative_gap < 0.25,
        format!(
            "sqf_monic(2) X=10: counted {} vs predicted {:.2}, relative_gap {:.4} (gate 0.25), unknown {}",
            q.counted, q.predicted, q.relative_gap, q.unknown
        ),
    );
    Ok(t)
}

fn c10_count_vs_paths(_: u64, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    for p in [3u64, 5] {
        let field = PrimeField::new(p)?;
        for d in 0..=2 {
            for u in enumerate_monic(field, d, Constraint::All, budget)? {
                for n in 0..=8usize {
                    let direct = count_divisible(n, &u, budget)?;
                    let via = if u.coeff(0) == 0 && d > 0 {
                        // no walk class: h has a nonzero constant term
                        BigInt::from(0)
                    } else {
                        divisible_count_via_paths(n as u64, &u, budget)?
                    };
                    if BigInt::from(direct) != via {
                        t.check(false, format!("p={p} u={u} n={n}: count {direct}, paths {via}"));
                        return Ok(t);
                    }
                }
            }
        }
        t.check(true, format!("p={p}: every monic u of degree <= 2, n <= 8"));
    }
    Ok(t)
}

fn c11_main_term_proximity(_: u64, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    for n in [16usize, 18] {
        for p in [3u64, 5] {
            for kind in kinds() {
                let s = local_density_series(n, p, kind, budget)?.exact;
                let m = main_term(p, kind)?;
                let dev = ratio_to_f64(&(&s - &m)).abs();
                let bound = error_bound(n, p, kind);
                t.warn(
                    dev <= bound,
                    format!("n={n} p={p} {kind}: density {:.10}, main term {:.10}, |diff| {dev:.3e} <= bound {bound:.3e}", ratio_to_f64(&s), ratio_to_f64(&m)),
                );
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_cover_eleven() {
        let mut ids = criterion_ids();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 11);
        assert!(run_criterion("nope", 0, &Budget::default()).is_none());
    }

    #[test]
    fn cheap_criteria_pass() {
        let r = verify_all(42, &Budget::default(), &["c03_cyclotomic".into(), "c07_euler_products".into()]);
        assert!(r.passed, "{:?}", r.criteria);
        assert_eq!(r.criteria.len(), 2);
        assert!(r.criteria.iter().all(|c| c.summary_line().starts_with("PASS")));
    }

    #[test]
    fn errors_become_failures() {
        let tiny = Budget::default().with_limit(10);
        let c = run_criterion("c01_route_equality", 0, &tiny).unwrap();
        assert_eq!(c.status, Status::Fail);
        assert!(c.details[0].starts_with("FAIL error"));
    }
}
