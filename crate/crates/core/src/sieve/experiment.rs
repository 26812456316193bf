//! Counting prime tuples in a height box that satisfy a global condition,
//! against the prediction C′ ∏ li(X^{d_i}).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::badset::{monic_chart, monic_lift, singular_series, BadSetSpec, SingularSeries};
use super::{li, HeightBox};
use crate::arith::prime_factors;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fppoly::PrimeField;
use crate::report;
use crate::zpoly::{discriminant, factor_int, is_maximal_at_p, is_squarefree_int, ZPoly};

/// Primes up to this bound enter the singular series of an experiment.
pub const DEFAULT_SERIES_CUTOFF: u64 = 10_000;
pub const LI_CONVENTION: &str = "li(x) = integral from 2 to x of dt/ln t";
const ASSUMPTION: &str = "the count is compared with C'·∏li(X^d_i); the uniformity estimate behind that \
                          asymptotic is assumed, not checked";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    /// x^n + a_1 x^{n-1} + ... + a_n, a_i < X^i prime, Δ squarefree.
    SqfMonic(usize),
    /// Same box, Z[x]/(f) maximal.
    MaxMonic(usize),
    /// a_0 x^n + ... + a_n, a_i < X prime, Δ squarefree.
    SqfAllcoeff(usize),
    /// Same box, maximal at every p.
    MaxAllcoeff(usize),
    /// a < X³, b < X⁴ prime, a⁴ + b³ squarefree.
    A4b3,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SqfMonic(n) => write!(f, "sqf_monic({n})"),
            Self::MaxMonic(n) => write!(f, "max_monic({n})"),
            Self::SqfAllcoeff(n) => write!(f, "sqf_allcoeff({n})"),
            Self::MaxAllcoeff(n) => write!(f, "max_allcoeff({n})"),
            Self::A4b3 => write!(f, "a4b3"),
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    /// `a4b3` or `name(n)` / `name:n` with name among sqf_monic, max_monic,
    /// sqf_allcoeff, max_allcoeff.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().replace('-', "_");
        if s == "a4b3" {
            return Ok(Self::A4b3);
        }
        let bad = || Error::Parse(format!("unknown experiment kind {s:?}"));
        let (name, n) = match s.split_once('(') {
            Some((name, rest)) => (name.to_string(), rest.strip_suffix(')').ok_or_else(bad)?.to_string()),
            None => {
                let (name, n) = s.split_once(':').ok_or_else(bad)?;
                (name.to_string(), n.to_string())
            }
        };
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        Self::with_degree(&name, n)
    }
}

impl ExperimentKind {
    /// Kind from a bare name and a degree; `a4b3` ignores the degree.
    pub fn with_degree(name: &str, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("degree must be at least 1".into()));
        }
        Ok(match name.replace('-', "_").as_str() {
            "sqf_monic" => Self::SqfMonic(n),
            "max_monic" => Self::MaxMonic(n),
            "sqf_allcoeff" => Self::SqfAllcoeff(n),
            "max_allcoeff" => Self::MaxAllcoeff(n),
            "a4b3" => Self::A4b3,
            other => return Err(Error::Parse(format!("unknown experiment kind {other:?}"))),
        })
    }

    pub fn height_box(&self, x: f64) -> Result<HeightBox> {
        match *self {
            Self::SqfMonic(n) | Self::MaxMonic(n) => HeightBox::monic(n, x),
            Self::SqfAllcoeff(n) | Self::MaxAllcoeff(n) => HeightBox::allcoeff(n, x),
            Self::A4b3 => HeightBox::new(vec![3.0, 4.0], x),
        }
    }

    /// The local bad sets whose complement the global condition describes.
    pub fn bad_set(&self) -> BadSetSpec {
        match self {
            Self::SqfMonic(_) => BadSetSpec::sqf_disc_monic(),
            Self::MaxMonic(_) => BadSetSpec::maximality_monic(),
            Self::SqfAllcoeff(_) => BadSetSpec::sqf_disc_allcoeff(),
            Self::MaxAllcoeff(_) => BadSetSpec::maximality_allcoeff(),
            Self::A4b3 => BadSetSpec::a4b3(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Good,
    Bad,
    Unknown,
}

/// The global condition on one tuple.
pub(crate) fn evaluate(kind: ExperimentKind, v: &[u64], odd_part_only: bool, budget: &Budget) -> Result<Outcome> {
    let from_sqf = |n: &BigInt| -> Result<Outcome> {
        Ok(match is_squarefree_int(n, odd_part_only, budget)?.as_bool() {
            Some(true) => Outcome::Good,
            Some(false) => Outcome::Bad,
            None => Outcome::Unknown,
        })
    };
    match kind {
        ExperimentKind::A4b3 => {
            let n = BigInt::from(v[0]).pow(4) + BigInt::from(v[1]).pow(3);
            from_sqf(&n)
        }
        ExperimentKind::SqfMonic(_) | ExperimentKind::SqfAllcoeff(_) => {
            let d = discriminant(&poly(kind, v))?;
            if d.is_zero() {
                return Ok(Outcome::Bad);
            }
            from_sqf(&d)
        }
        ExperimentKind::MaxMonic(_) | ExperimentKind::MaxAllcoeff(_) => {
            let f = poly(kind, v);
            let d = discriminant(&f)?;
            if d.is_zero() {
                return Ok(Outcome::Bad);
            }
            let Some(squares) = factor_int(&d, budget)?.square_divisors() else {
                return Ok(Outcome::Unknown);
            };
            for q in squares {
                let Some(q) = q.to_u64().filter(|&q| q <= u32::MAX as u64) else {
                    return Ok(Outcome::Unknown);
                };
                if q == 2 && odd_part_only {
                    continue;
                }
                let field = PrimeField::new(q)?;
                let chart = match kind {
                    ExperimentKind::MaxMonic(_) => f.clone(),
                    _ => match monic_chart(q, v) {
                        Some(c) => ZPoly::new(c),
                        None => return Ok(Outcome::Unknown),
                    },
                };
                if !is_maximal_at_p(&chart, field, budget)? {
                    return Ok(Outcome::Bad);
                }
            }
            Ok(Outcome::Good)
        }
    }
}

fn poly(kind: ExperimentKind, v: &[u64]) -> ZPoly<BigInt> {
    match kind {
        ExperimentKind::SqfMonic(_) | ExperimentKind::MaxMonic(_) => ZPoly::new(monic_lift(v)),
        _ => ZPoly::new(v.iter().rev().map(|&a| BigInt::from(a)).collect()),
    }
}

/// Per-value tallies for one coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Marginal {
    pub coordinate: usize,
    pub value: u64,
    pub tuples: u64,
    pub counted: u64,
    pub unknown: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    #[serde(serialize_with = "report::display")]
    pub kind: ExperimentKind,
    pub x: f64,
    pub odd_part_only: bool,
    #[serde(rename = "box")]
    pub height_box: HeightBox,
    pub total_tuples: u64,
    pub counted: u64,
    pub failed: u64,
    /// Tuples whose integer test did not finish within the budget.
    pub unknown: u64,
    #[serde(serialize_with = "report::real")]
    pub predicted: f64,
    #[serde(serialize_with = "report::real")]
    pub singular_series: f64,
    pub series: SingularSeries,
    #[serde(serialize_with = "report::real")]
    pub li_product: f64,
    pub li_convention: &'static str,
    #[serde(serialize_with = "report::real")]
    pub relative_gap: f64,
    pub assumption: &'static str,
    #[serde(skip)]
    pub marginals: Vec<Marginal>,
}

#[derive(Clone, Default)]
struct Tally {
    counted: u64,
    failed: u64,
    unknown: u64,
    /// [tuples, counted, unknown] per coordinate per prime index.
    marginals: Vec<Vec<[u64; 3]>>,
}

impl Tally {
    fn new(primes: &[Vec<u64>]) -> Self {
        Self { marginals: primes.iter().map(|ps| vec![[0; 3]; ps.len()]).collect(), ..Self::default() }
    }

    fn merge(mut self, other: Self) -> Self {
        self.counted += other.counted;
        self.failed += other.failed;
        self.unknown += other.unknown;
        for (a, b) in self.marginals.iter_mut().zip(other.marginals) {
            for (x, y) in a.iter_mut().zip(b) {
                for k in 0..3 {
                    x[k] += y[k];
                }
            }
        }
        self
    }
}

/// Visits every tuple (P_0[i_0], ..., P_{n-1}[i_{n-1}]) with the given
/// first index, passing the values and their indices.
fn for_each_tail(primes: &[Vec<u64>], first: usize, mut visit: impl FnMut(&[u64], &[usize]) -> Result<()>) -> Result<()> {
    let n = primes.len();
    if primes.iter().any(Vec::is_empty) {
        return Ok(());
    }
    let mut idx = vec![0usize; n];
    idx[0] = first;
    let mut vals: Vec<u64> = (0..n).map(|i| primes[i][idx[i]]).collect();
    loop {
        visit(&vals, &idx)?;
        let mut k = n - 1;
        loop {
            if k == 0 {
                return Ok(());
            }
            idx[k] += 1;
            if idx[k] < primes[k].len() {
                vals[k] = primes[k][idx[k]];
                break;
            }
            idx[k] = 0;
            vals[k] = primes[k][0];
            k -= 1;
        }
    }
}

fn tuple_count(primes: &[Vec<u64>]) -> u128 {
    primes.iter().map(|ps| ps.len() as u128).product()
}

/// Counts prime tuples in the box for `kind` and compares with the
/// singular series (without p = 2 when `odd_part_only`) times ∏ li(X^{d_i}).
pub fn run_experiment(kind: ExperimentKind, x: f64, odd_part_only: bool, budget: &Budget) -> Result<ExperimentReport> {
    run_experiment_with_cutoff(kind, x, odd_part_only, DEFAULT_SERIES_CUTOFF, budget)
}

/// [`run_experiment`] with an explicit singular-series cutoff.
pub fn run_experiment_with_cutoff(
    kind: ExperimentKind,
    x: f64,
    odd_part_only: bool,
    cutoff: u64,
    budget: &Budget,
) -> Result<ExperimentReport> {
    let height_box = kind.height_box(x)?;
    let primes = height_box.primes(budget)?;
    let total = tuple_count(&primes);
    budget.check_evaluations("experiment tuples", total)?;
    let tally = (0..primes[0].len())
        .into_par_iter()
        .try_fold(
            || Tally::new(&primes),
            |mut t, first| {
                for_each_tail(&primes, first, |v, idx| {
                    let outcome = evaluate(kind, v, odd_part_only, budget)?;
                    match outcome {
                        Outcome::Good => t.counted += 1,
                        Outcome::Bad => t.failed += 1,
                        Outcome::Unknown => t.unknown += 1,
                    }
                    for (c, &i) in idx.iter().enumerate() {
                        let cell = &mut t.marginals[c][i];
                        cell[0] += 1;
                        cell[1] += u64::from(outcome == Outcome::Good);
                        cell[2] += u64::from(outcome == Outcome::Unknown);
                    }
                    Ok(())
                })?;
                Ok::<_, Error>(t)
            },
        )
        .try_reduce(|| Tally::new(&primes), |a, b| Ok(a.merge(b)))?;
    let series = singular_series(&kind.bad_set(), height_box.n(), cutoff, !odd_part_only, budget)?;
    let li_product = height_box
        .exponents
        .iter()
        .map(|&d| {
            let t = x.powf(d);
            if t <= 2.0 {
                Ok(0.0)
            } else {
                li(t)
            }
        })
        .product::<Result<f64>>()?;
    let predicted = series.value * li_product;
    let counted = tally.counted;
    let relative_gap = if predicted > 0.0 {
        (counted as f64 - predicted).abs() / predicted
    } else if counted == 0 {
        0.0
    } else {
        f64::INFINITY
    };
    let marginals = tally
        .marginals
        .iter()
        .enumerate()
        .flat_map(|(c, cells)| {
            let primes = &primes;
            cells.iter().enumerate().map(move |(i, cell)| Marginal {
                coordinate: c,
                value: primes[c][i],
                tuples: cell[0],
                counted: cell[1],
                unknown: cell[2],
            })
        })
        .collect();
    Ok(ExperimentReport {
        kind,
        x,
        odd_part_only,
        height_box,
        total_tuples: total as u64,
        counted,
        failed: tally.failed,
        unknown: tally.unknown,
        predicted,
        singular_series: series.value,
        series,
        li_product,
        li_convention: LI_CONVENTION,
        relative_gap,
        assumption: ASSUMPTION,
        marginals,
    })
}

/// N′_B(m, X): prime tuples in the box lying in B_p for every p | m.
pub fn incl_excl_term(m: u64, spec: &BadSetSpec, height_box: &HeightBox, budget: &Budget) -> Result<u128> {
    let ps = squarefree_primes(m)?;
    spec.check_arity(height_box.n())?;
    let primes = height_box.primes(budget)?;
    budget.check_evaluations("inclusion-exclusion tuples", tuple_count(&primes))?;
    (0..primes[0].len())
        .into_par_iter()
        .map(|first| {
            let mut c = 0u128;
            for_each_tail(&primes, first, |v, _| {
                c += u128::from(spec.contains_all(&ps, v));
                Ok(())
            })?;
            Ok(c)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

fn squarefree_primes(m: u64) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::OutOfRange("m must be positive".into()));
    }
    let ps = prime_factors(m);
    if ps.iter().product::<u64>() != m {
        return Err(Error::OutOfRange(format!("{m} is not squarefree")));
    }
    Ok(ps)
}

/// Partial inclusion–exclusion sum over m | ∏ primes with ω(m) <= order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub order: usize,
    pub sum: i128,
    /// "upper" for even order, "lower" for odd.
    pub side: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BonferroniReport {
    pub spec: String,
    #[serde(rename = "box")]
    pub height_box: HeightBox,
    pub primes: Vec<u64>,
    pub total: u128,
    /// Tuples outside B_p for every listed p.
    pub exact: u128,
    /// N′_B(m, X) for every m | ∏ primes, ascending m.
    pub terms: Vec<(u64, u128)>,
    pub truncations: Vec<Truncation>,
    pub holds: bool,
}

/// Checks the alternating bounds of Σ_{m | P, ω(m) <= k} μ(m) N′_B(m, X)
/// around the sifted count, where P is the product of `sieve_primes`.
pub fn bonferroni_check(spec: &BadSetSpec, height_box: &HeightBox, sieve_primes: &[u64], budget: &Budget) -> Result<BonferroniReport> {
    if sieve_primes.len() > 16 {
        return Err(Error::OutOfRange("at most 16 sieve primes".into()));
    }
    let r = sieve_primes.len();
    let mut terms = Vec::with_capacity(1 << r);
    let mut by_order = vec![0i128; r + 1];
    for mask in 0u32..(1 << r) {
        let m = (0..r).filter(|&i| mask >> i & 1 == 1).try_fold(1u64, |acc, i| acc.checked_mul(sieve_primes[i]));
        let m = m.ok_or_else(|| Error::OutOfRange("product of sieve primes overflows".into()))?;
        let term = incl_excl_term(m, spec, height_box, budget)?;
        let w = mask.count_ones() as usize;
        by_order[w] += if w % 2 == 0 { term as i128 } else { -(term as i128) };
        terms.push((m, term));
    }
    terms.sort_unstable();
    let primes = height_box.primes(budget)?;
    let total = tuple_count(&primes);
    let exact = (0..primes[0].len())
        .into_par_iter()
        .map(|first| {
            let mut c = 0u128;
            for_each_tail(&primes, first, |v, _| {
                c += u128::from(!sieve_primes.iter().any(|&p| spec.contains(p, v)));
                Ok(())
            })?;
            Ok(c)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let mut truncations = Vec::with_capacity(r + 1);
    let mut sum = 0i128;
    for (order, part) in by_order.iter().enumerate() {
        sum += part;
        let even = order % 2 == 0;
        let holds = if even { sum >= exact as i128 } else { sum <= exact as i128 };
        truncations.push(Truncation { order, sum, side: if even { "upper" } else { "lower" }, holds });
    }
    let holds = truncations.iter().all(|t| t.holds) && sum == exact as i128;
    Ok(BonferroniReport {
        spec: spec.name.clone(),
        height_box: height_box.clone(),
        primes: sieve_primes.to_vec(),
        total,
        exact,
        terms,
        truncations,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn kind_names_round_trip() {
        for k in [ExperimentKind::SqfMonic(2), ExperimentKind::MaxAllcoeff(3), ExperimentKind::A4b3] {
            assert_eq!(k.to_string().parse::<ExperimentKind>().unwrap(), k);
        }
        assert_eq!("max-monic:4".parse::<ExperimentKind>().unwrap(), ExperimentKind::MaxMonic(4));
        assert!("sqf_monic(0)".parse::<ExperimentKind>().is_err());
        assert!("cubic".parse::<ExperimentKind>().is_err());
    }

    #[test]
    fn incl_excl_examples() {
        let bx = HeightBox::new(vec![3.0, 4.0], 5.0).unwrap();
        let (pa, pb) = (primes_up_to(124), primes_up_to(624));
        assert_eq!(incl_excl_term(1, &BadSetSpec::a4b3(), &bx, &b()).unwrap(), (pa.len() * pb.len()) as u128);
        let mut direct = 0u128;
        for &a in &pa {
            for &c in &pb {
                direct += u128::from((a.pow(4) + c.pow(3)) % 4 == 0);
            }
        }
        assert_eq!(incl_excl_term(2, &BadSetSpec::a4b3(), &bx, &b()).unwrap(), direct);
        assert!(direct > 0);
        assert_eq!(incl_excl_term(6, &BadSetSpec::empty(), &HeightBox::monic(2, 5.0).unwrap(), &b()).unwrap(), 0);
        assert!(incl_excl_term(12, &BadSetSpec::a4b3(), &bx, &b()).is_err());
    }

    #[test]
    fn bonferroni_brackets_the_sifted_count() {
        let bx = HeightBox::new(vec![3.0, 4.0], 3.0).unwrap();
        let r = bonferroni_check(&BadSetSpec::a4b3(), &bx, &[2, 3, 5, 7], &b()).unwrap();
        assert!(r.holds, "{:?}", r.truncations);
        assert_eq!(r.truncations[0].sum, r.total as i128);
        assert!(r.exact < r.total);
        let q = bonferroni_check(&BadSetSpec::sqf_disc_monic(), &HeightBox::monic(2, 8.0).unwrap(), &[2, 3, 5], &b()).unwrap();
        assert!(q.holds);
    }

    #[test]
    fn empty_box_counts_nothing() {
        let r = run_experiment(ExperimentKind::SqfMonic(2), 1.5, false, &b()).unwrap();
        assert_eq!((r.total_tuples, r.counted, r.unknown), (0, 0, 0));
    }

    #[test]
    fn quadratic_experiment_by_hand() {
        let r = run_experiment(ExperimentKind::SqfMonic(2), 7.0, false, &b()).unwrap();
        let mut count = 0;
        for a in primes_up_to(6) {
            for c in primes_up_to(48) {
                let d = (a * a) as i64 - 4 * c as i64;
                let m = d.unsigned_abs();
                let sqf = (2..=m).take_while(|q| q * q <= m).all(|q| m % (q * q) != 0);
                count += u64::from(sqf);
            }
        }
        assert_eq!((r.counted, r.unknown, r.total_tuples), (count, 0, 45));
        assert_eq!(r.counted + r.failed, 45);
        let li_product = li(7.0).unwrap() * li(49.0).unwrap();
        assert!((r.predicted - r.singular_series * li_product).abs() < 1e-9);
        assert_eq!(r.marginals.iter().filter(|m| m.coordinate == 0).map(|m| m.counted).sum::<u64>(), count);
    }

    #[test]
    fn global_max_predicate_matches_all_small_primes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let small = primes_up_to(100);
        for _ in 0..300 {
            let v: Vec<u64> = (0..3).map(|_| rng.gen_range(0..=6)).collect();
            let f = ZPoly::new(monic_lift(&v));
            let d = discriminant(&f).unwrap();
            if d.is_zero() {
                continue;
            }
            assert!(d.magnitude() < &101u32.pow(2).into());
            let everywhere = small.iter().all(|&p| is_maximal_at_p(&f, PrimeField::new(p).unwrap(), &b()).unwrap());
            let got = evaluate(ExperimentKind::MaxMonic(3), &v, false, &b()).unwrap();
            assert_eq!(got == Outcome::Good, everywhere, "{v:?}");
        }
    }

    #[test]
    fn allcoeff_chart_agrees_with_monic_when_leading_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let v: Vec<u64> = (0..3).map(|_| rng.gen_range(1..=40)).collect();
            let mut all = vec![1u64];
            all.extend(&v);
            for (m, a) in [
                (ExperimentKind::MaxMonic(3), ExperimentKind::MaxAllcoeff(3)),
                (ExperimentKind::SqfMonic(3), ExperimentKind::SqfAllcoeff(3)),
            ] {
                assert_eq!(evaluate(m, &v, false, &b()).unwrap(), evaluate(a, &all, false, &b()).unwrap());
            }
        }
    }

    #[test]
    fn odd_part_only_ignores_two() {
        // a1 = 2 gives Δ = 4(1 - a2), never squarefree, but often odd-squarefree
        assert_eq!(evaluate(ExperimentKind::SqfMonic(2), &[2, 3], false, &b()).unwrap(), Outcome::Bad);
        assert_eq!(evaluate(ExperimentKind::SqfMonic(2), &[2, 3], true, &b()).unwrap(), Outcome::Good);
        let r = run_experiment_with_cutoff(ExperimentKind::SqfMonic(3), 4.0, true, 200, &b()).unwrap();
        assert!(r.series.vanishing.is_empty() && !r.series.include_two);
    }
}
