//! Bad sets B_p defined by congruences mod p^N, their unit counts ρ′(p^N)
//! and the singular series C′_B = ∏_p (1 - ρ′(p^N)/φ(p^N)^n).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime_u64, pow_mod};
use crate::budget::{sat_pow, Budget};
use crate::density::{local_density_series, main_term, p2_density, ratio, ratio_to_f64, DensityKind};
use crate::error::{Error, Result};
use crate::fppoly::PrimeField;
use crate::report;
use crate::scalar::CompensatedSum;
use crate::zpoly::{discriminant, is_maximal_at_p, ZPoly};

/// Unit tuples enumerated per prime before switching to a closed form.
pub const ENUMERATION_LIMIT: u128 = 200_000;
/// Largest p^n for which the exact series density replaces the limit.
pub const SERIES_LIMIT: u128 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// p² | Δ(x^n + a_1 x^{n-1} + ... + a_n).
    SqfDiscMonic,
    /// Z_p[x]/(x^n + a_1 x^{n-1} + ... + a_n) is not maximal.
    MaximalityMonic,
    /// p² | Δ(a_0 x^n + ... + a_n).
    SqfDiscAllcoeff,
    /// a_0 x^n + ... + a_n is not maximal at p in the chart where a leading
    /// coefficient is a unit; both ends divisible by p counts as bad.
    MaximalityAllcoeff,
    /// p² | a⁴ + b³.
    A4b3,
    Custom,
}

type Predicate = Arc<dyn Fn(u64, &[u64]) -> bool + Send + Sync>;

/// A congruence condition mod p^N on integer tuples.
#[derive(Clone, Serialize)]
pub struct BadSetSpec {
    pub name: String,
    pub modulus_exponent: u32,
    pub provenance: Provenance,
    #[serde(skip)]
    predicate: Predicate,
}

impl fmt::Debug for BadSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BadSetSpec")
            .field("name", &self.name)
            .field("modulus_exponent", &self.modulus_exponent)
            .field("provenance", &self.provenance)
            .finish()
    }
}

/// Names accepted by [`BadSetSpec::by_name`].
pub const SPEC_NAMES: [&str; 6] =
    ["sqf_disc_monic", "max_monic", "sqf_disc_allcoeff", "max_allcoeff", "a4b3", "empty"];

impl BadSetSpec {
    fn provided(name: &str, provenance: Provenance, predicate: Predicate) -> Self {
        Self { name: name.into(), modulus_exponent: 2, provenance, predicate }
    }

    /// Tuples (a_1, ..., a_n) with p² | Δ(x^n + a_1 x^{n-1} + ... + a_n).
    pub fn sqf_disc_monic() -> Self {
        Self::provided("sqf_disc_monic", Provenance::SqfDiscMonic, Arc::new(|p, v| disc_divisible(p, &monic_lift(v))))
    }

    /// Tuples (a_1, ..., a_n) whose monic polynomial is not maximal at p.
    pub fn maximality_monic() -> Self {
        Self::provided(
            "max_monic",
            Provenance::MaximalityMonic,
            Arc::new(|p, v| !maximal(p, &monic_lift(v))),
        )
    }

    /// Tuples (a_0, ..., a_n) with p² | Δ(a_0 x^n + ... + a_n).
    pub fn sqf_disc_allcoeff() -> Self {
        Self::provided(
            "sqf_disc_allcoeff",
            Provenance::SqfDiscAllcoeff,
            Arc::new(|p, v| disc_divisible(p, &allcoeff_lift(p, v))),
        )
    }

    /// Tuples (a_0, ..., a_n) not maximal at p.
    pub fn maximality_allcoeff() -> Self {
        Self::provided(
            "max_allcoeff",
            Provenance::MaximalityAllcoeff,
            Arc::new(|p, v| match monic_chart(p, v) {
                Some(g) => !maximal(p, &g),
                None => true,
            }),
        )
    }

    /// Pairs (a, b) with p² | a⁴ + b³.
    pub fn a4b3() -> Self {
        Self::provided(
            "a4b3",
            Provenance::A4b3,
            Arc::new(|p, v| {
                let m = (p as u128).pow(2);
                let (a, b) = (v[0] as u128 % m, v[1] as u128 % m);
                (a * a % m * a % m * a + b * b % m * b) % m == 0
            }),
        )
    }

    /// A user predicate on residues mod p^N. It must depend on residues only.
    pub fn custom(name: &str, modulus_exponent: u32, predicate: impl Fn(u64, &[u64]) -> bool + Send + Sync + 'static) -> Self {
        Self { name: name.into(), modulus_exponent, provenance: Provenance::Custom, predicate: Arc::new(predicate) }
    }

    /// B_p = ∅ for every p.
    pub fn empty() -> Self {
        Self::custom("empty", 1, |_, _| false)
    }

    pub fn by_name(name: &str) -> Result<Self> {
        Ok(match name.replace('-', "_").as_str() {
            "sqf_disc_monic" | "sqf_monic" => Self::sqf_disc_monic(),
            "max_monic" | "maximality_monic" => Self::maximality_monic(),
            "sqf_disc_allcoeff" | "sqf_allcoeff" => Self::sqf_disc_allcoeff(),
            "max_allcoeff" | "maximality_allcoeff" => Self::maximality_allcoeff(),
            "a4b3" => Self::a4b3(),
            "empty" => Self::empty(),
            other => return Err(Error::Parse(format!("unknown bad set {other:?}; expected one of {SPEC_NAMES:?}"))),
        })
    }

    /// Tuple length the predicate requires, if fixed.
    pub fn fixed_arity(&self) -> Option<usize> {
        (self.provenance == Provenance::A4b3).then_some(2)
    }

    /// Smallest tuple length the predicate accepts.
    fn min_arity(&self) -> usize {
        match self.provenance {
            Provenance::SqfDiscAllcoeff | Provenance::MaximalityAllcoeff => 2,
            Provenance::A4b3 => 2,
            _ => 1,
        }
    }

    pub(crate) fn check_arity(&self, n: usize) -> Result<()> {
        if n < self.min_arity() || self.fixed_arity().is_some_and(|a| a != n) {
            return Err(Error::OutOfRange(format!("bad set {} does not take tuples of length {n}", self.name)));
        }
        Ok(())
    }

    /// Membership of an integer tuple in B_p, through its residues mod p^N.
    pub fn contains(&self, p: u64, tuple: &[u64]) -> bool {
        let m = p.pow(self.modulus_exponent);
        let residues: Vec<u64> = tuple.iter().map(|&a| a % m).collect();
        (self.predicate)(p, &residues)
    }

    /// Membership in B_m = ∩_{p | m} B_p for squarefree m given by its primes.
    pub fn contains_all(&self, primes: &[u64], tuple: &[u64]) -> bool {
        primes.iter().all(|&p| self.contains(p, tuple))
    }

    /// Density kind whose local factor this set reproduces.
    fn density_kind(&self) -> Option<DensityKind> {
        match self.provenance {
            Provenance::SqfDiscMonic | Provenance::SqfDiscAllcoeff => Some(DensityKind::Sqf),
            Provenance::MaximalityMonic | Provenance::MaximalityAllcoeff => Some(DensityKind::Max),
            _ => None,
        }
    }

    /// Polynomial degree behind a tuple of length n.
    fn degree(&self, n: usize) -> usize {
        match self.provenance {
            Provenance::SqfDiscAllcoeff | Provenance::MaximalityAllcoeff => n - 1,
            _ => n,
        }
    }

    /// K with 1 - factor <= K/p² for large p, for the tail envelope.
    fn tail_constant(&self) -> Option<f64> {
        match self.provenance {
            Provenance::A4b3 | Provenance::MaximalityMonic | Provenance::MaximalityAllcoeff => Some(1.0),
            Provenance::SqfDiscMonic | Provenance::SqfDiscAllcoeff => Some(3.0),
            Provenance::Custom => None,
        }
    }
}

/// Coefficients, lowest first, of x^n + v_0 x^{n-1} + ... + v_{n-1}.
pub(crate) fn monic_lift(v: &[u64]) -> Vec<BigInt> {
    let mut c: Vec<BigInt> = v.iter().rev().map(|&a| BigInt::from(a)).collect();
    c.push(BigInt::from(1));
    c
}

/// Coefficients, lowest first, of v_0 x^n + ... + v_n, with a zero leading
/// residue lifted to p² so the degree stays n.
fn allcoeff_lift(p: u64, v: &[u64]) -> Vec<BigInt> {
    let mut c: Vec<BigInt> = v.iter().rev().map(|&a| BigInt::from(a)).collect();
    if c.last().is_some_and(|a| a.is_zero()) {
        *c.last_mut().expect("nonempty") = BigInt::from(p * p);
    }
    c
}

/// p² | Δ(f), with Δ a polynomial in the coefficients so residues suffice.
fn disc_divisible(p: u64, coeffs: &[BigInt]) -> bool {
    let f = ZPoly::new(coeffs.to_vec());
    match discriminant(&f) {
        Ok(d) => (d % BigInt::from(p * p)).is_zero(),
        Err(_) => true,
    }
}

fn maximal(p: u64, coeffs: &[BigInt]) -> bool {
    let field = PrimeField::new(p).expect("bad sets are evaluated at primes");
    is_maximal_at_p(&ZPoly::new(coeffs.to_vec()), field, &Budget::unlimited()).expect("monic input of positive degree")
}

/// The monic polynomial over Z/p² that a_0 x^n + ... + a_n becomes after
/// dividing by a unit end coefficient (reversing first when only a_n is a
/// unit); `None` when p divides both ends.
pub(crate) fn monic_chart(p: u64, v: &[u64]) -> Option<Vec<BigInt>> {
    let m = p * p;
    let (lead, rest): (u64, Vec<u64>) = if v[0] % p != 0 {
        (v[0], v[1..].to_vec())
    } else if v[v.len() - 1] % p != 0 {
        (v[v.len() - 1], v[..v.len() - 1].iter().rev().copied().collect())
    } else {
        return None;
    };
    let inv = pow_mod(lead % m, p * (p - 1) - 1, m);
    let scaled: Vec<u64> = rest.iter().map(|&a| (a % m) as u128 * inv as u128 % m as u128).map(|a| a as u64).collect();
    Some(monic_lift(&scaled))
}

/// Mixed-radix decoding of a unit tuple mod p^N from its index.
fn unit_tuple(p: u64, modulus: u64, n: usize, mut idx: u128) -> Vec<u64> {
    let per = (modulus / p * (p - 1)) as u128;
    (0..n)
        .map(|_| {
            let k = (idx % per) as u64;
            idx /= per;
            // k-th residue in [1, p^N) coprime to p
            k / (p - 1) * p + k % (p - 1) + 1
        })
        .collect()
}

/// ρ′(p^N): unit residue tuples of length n mod p^N in B_p.
pub fn rho_prime(p: u64, spec: &BadSetSpec, n: usize, budget: &Budget) -> Result<u128> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    spec.check_arity(n)?;
    let modulus = p.checked_pow(spec.modulus_exponent).ok_or_else(|| Error::OutOfRange("p^N overflows".into()))?;
    let total = sat_pow(modulus / p * (p - 1), n as u32);
    budget.check_evaluations("rho enumeration", total)?;
    Ok((0..total as u64)
        .into_par_iter()
        .filter(|&i| (spec.predicate)(p, &unit_tuple(p, modulus, n, i as u128)))
        .count() as u128)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorSource {
    /// Exhaustive ρ′ count.
    Enumerated,
    /// 1 - 1/(p² - p) for a4b3 and monic quadratics, 1 for linear ones.
    ClosedForm,
    /// Exact Möbius-series density.
    Series,
    /// The p = 2 density formula.
    PTwo,
    /// The large-n limit of the density; not exact at this n.
    MainTermApprox,
}

/// One factor 1 - ρ′(p^N)/φ(p^N)^n.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalFactor {
    pub p: u64,
    /// ρ′, when enumerated.
    pub rho: Option<u128>,
    #[serde(serialize_with = "report::rational")]
    pub factor: BigRational,
    pub source: FactorSource,
}

/// 1 - ρ′(p^N)/φ(p^N)^n, enumerated when small and otherwise from the
/// closed form the provenance supplies.
pub fn local_factor(p: u64, spec: &BadSetSpec, n: usize, budget: &Budget) -> Result<LocalFactor> {
    spec.check_arity(n)?;
    let modulus = p.pow(spec.modulus_exponent);
    let total = sat_pow(modulus / p * (p - 1), n as u32);
    if total <= ENUMERATION_LIMIT {
        let rho = rho_prime(p, spec, n, budget)?;
        return Ok(LocalFactor { p, rho: Some(rho), factor: ratio(total - rho, total), source: FactorSource::Enumerated });
    }
    let (factor, source) = closed_form(p, spec, n, budget)?;
    Ok(LocalFactor { p, rho: None, factor, source })
}

fn closed_form(p: u64, spec: &BadSetSpec, n: usize, budget: &Budget) -> Result<(BigRational, FactorSource)> {
    if spec.provenance == Provenance::A4b3 {
        return Ok((ratio(1, 1) - ratio(1, p * p - p), FactorSource::ClosedForm));
    }
    let kind = spec.density_kind().ok_or_else(|| {
        Error::OutOfRange(format!("bad set {} has no closed-form local factor at p = {p}", spec.name))
    })?;
    let degree = spec.degree(n);
    if p == 2 {
        return Ok((p2_density(degree, kind)?, FactorSource::PTwo));
    }
    if degree == 1 {
        return Ok((ratio(1, 1), FactorSource::ClosedForm));
    }
    if degree == 2 {
        // both conditions fail exactly when x² + ax + b ≡ (x + c)² mod p²
        return Ok((ratio(1, 1) - ratio(1, p * p - p), FactorSource::ClosedForm));
    }
    if sat_pow(p, degree as u32) <= SERIES_LIMIT {
        let r = local_density_series(degree, p, kind, budget)?;
        return Ok((r.exact, FactorSource::Series));
    }
    Ok((main_term(p, kind)?, FactorSource::MainTermApprox))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularSeries {
    pub spec: String,
    pub n: usize,
    pub cutoff: u64,
    pub include_two: bool,
    #[serde(serialize_with = "report::real")]
    pub value: f64,
    #[serde(serialize_with = "report::real")]
    pub log_value: f64,
    /// Largest prime whose factor came from enumeration.
    pub crossover: Option<u64>,
    /// Factors at the enumerated primes.
    pub enumerated: Vec<LocalFactor>,
    pub closed_form_primes: usize,
    pub series_primes: usize,
    /// Primes where the large-n limit stood in for the exact factor.
    pub approximate_primes: usize,
    /// Primes with ρ′ = φ(p^N)^n.
    pub vanishing: Vec<u64>,
    /// Estimated |C′ - truncated product|, when the set has a tail envelope.
    pub tail_estimate: Option<f64>,
    pub note: String,
}

/// ∏_{p <= cutoff} (1 - ρ′(p^N)/φ(p^N)^n), skipping p = 2 unless
/// `include_two`.
pub fn singular_series(spec: &BadSetSpec, n: usize, cutoff: u64, include_two: bool, budget: &Budget) -> Result<SingularSeries> {
    spec.check_arity(n)?;
    let primes = super::primes_up_to(cutoff, budget)?;
    let mut log = CompensatedSum::<f64>::default();
    let mut enumerated = Vec::new();
    let (mut closed_form_primes, mut series_primes, mut approximate_primes) = (0, 0, 0);
    let mut vanishing = Vec::new();
    for &p in primes.iter().filter(|&&p| include_two || p != 2) {
        let lf = local_factor(p, spec, n, budget)?;
        match lf.source {
            FactorSource::Enumerated => {}
            FactorSource::ClosedForm | FactorSource::PTwo => closed_form_primes += 1,
            FactorSource::Series => series_primes += 1,
            FactorSource::MainTermApprox => approximate_primes += 1,
        }
        if lf.factor.is_zero() {
            vanishing.push(p);
        } else {
            log.add(ratio_to_f64(&lf.factor).ln());
        }
        if lf.source == FactorSource::Enumerated {
            enumerated.push(lf);
        }
    }
    let log_value = if vanishing.is_empty() { log.value() } else { f64::NEG_INFINITY };
    let value = log_value.exp();
    let x = cutoff as f64;
    let tail_estimate = spec.tail_constant().map(|k| value * (1.0 - (-1.25 * k / (x * x.ln())).exp()));
    let mut note = format!("product over primes <= {cutoff}");
    if !include_two {
        note.push_str(", p = 2 omitted");
    }
    if approximate_primes > 0 {
        note.push_str(&format!(", {approximate_primes} factors use the large-n limit"));
    }
    if tail_estimate.is_none() {
        note.push_str(", tail beyond the cutoff not estimated");
    }
    Ok(SingularSeries {
        spec: spec.name.clone(),
        n,
        cutoff,
        include_two,
        value,
        log_value,
        crossover: enumerated.last().map(|lf| lf.p),
        enumerated,
        closed_form_primes,
        series_primes,
        approximate_primes,
        vanishing,
        tail_estimate,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{local_density_brute, DensityKind};
    use crate::zpoly::DedekindContext;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn documented_rho_values() {
        assert_eq!(rho_prime(3, &BadSetSpec::a4b3(), 2, &b()).unwrap(), 6);
        assert_eq!(rho_prime(3, &BadSetSpec::sqf_disc_monic(), 2, &b()).unwrap(), 6);
        assert_eq!(rho_prime(5, &BadSetSpec::empty(), 3, &b()).unwrap(), 0);
        assert!(rho_prime(4, &BadSetSpec::a4b3(), 2, &b()).is_err());
        assert!(rho_prime(3, &BadSetSpec::a4b3(), 3, &b()).is_err());
    }

    #[test]
    fn rho_by_direct_loops() {
        // pairs of units mod 9
        let units: Vec<u64> = (1..9).filter(|a| a % 3 != 0).collect();
        let mut a4b3 = 0;
        let mut quad = 0;
        for &a in &units {
            for &c in &units {
                a4b3 += u32::from((a.pow(4) + c.pow(3)) % 9 == 0);
                quad += u32::from((a * a + 36 - 4 * c) % 9 == 0);
            }
        }
        assert_eq!((a4b3, quad), (6, 6));
    }

    #[test]
    fn local_factors_match_brute_density() {
        for (spec, kind) in [(BadSetSpec::sqf_disc_monic(), DensityKind::Sqf), (BadSetSpec::maximality_monic(), DensityKind::Max)] {
            for n in 2..=3 {
                for p in [3u64, 5] {
                    let lf = local_factor(p, &spec, n, &b()).unwrap();
                    assert_eq!(lf.source, FactorSource::Enumerated);
                    let brute = local_density_brute(n, p, kind, &b()).unwrap();
                    assert_eq!(lf.factor, brute.exact, "{} n={n} p={p}", spec.name);
                }
            }
        }
    }

    #[test]
    fn closed_forms_match_enumeration() {
        let a = BadSetSpec::a4b3();
        for p in [2u64, 3, 5, 7, 11, 13] {
            assert_eq!(local_factor(p, &a, 2, &b()).unwrap().factor, ratio(1, 1) - ratio(1, p * p - p));
        }
        // the series and p = 2 forms against enumeration where both apply
        for (spec, n) in [(BadSetSpec::sqf_disc_monic(), 2), (BadSetSpec::maximality_monic(), 2), (BadSetSpec::maximality_monic(), 3)] {
            for p in [2u64, 3, 5, 7] {
                let lf = local_factor(p, &spec, n, &b()).unwrap();
                let (cf, _) = closed_form(p, &spec, n, &b()).unwrap();
                assert_eq!(lf.factor, cf, "{} n={n} p={p}", spec.name);
            }
        }
    }

    #[test]
    fn allcoeff_factors_equal_monic_ones() {
        for (all, mono) in [
            (BadSetSpec::sqf_disc_allcoeff(), BadSetSpec::sqf_disc_monic()),
            (BadSetSpec::maximality_allcoeff(), BadSetSpec::maximality_monic()),
        ] {
            for p in [2u64, 3, 5] {
                let a = local_factor(p, &all, 3, &b()).unwrap();
                let m = local_factor(p, &mono, 2, &b()).unwrap();
                assert_eq!(a.factor, m.factor, "{} p={p}", all.name);
            }
        }
    }

    #[test]
    fn monic_quadratic_factor_is_one_minus_inverse_p2_minus_p() {
        for spec in [BadSetSpec::sqf_disc_monic(), BadSetSpec::maximality_monic()] {
            for p in [3u64, 5, 7, 11, 101] {
                let lf = local_factor(p, &spec, 2, &b()).unwrap();
                assert_eq!(lf.factor, ratio(1, 1) - ratio(1, p * p - p));
            }
        }
        assert_eq!(local_factor(2, &BadSetSpec::sqf_disc_monic(), 2, &b()).unwrap().factor, ratio(1, 1));
    }

    #[test]
    fn series_values() {
        let e = singular_series(&BadSetSpec::empty(), 3, 50, true, &b()).unwrap();
        assert!(singular_series(&BadSetSpec::empty(), 3, 1000, true, &b()).is_err());
        assert_eq!(e.value, 1.0);
        assert_eq!(e.tail_estimate, None);
        let a = singular_series(&BadSetSpec::a4b3(), 2, 100_000, true, &b()).unwrap();
        assert!((a.value - 0.3740).abs() < 5e-4, "{}", a.value);
        assert!(a.vanishing.is_empty());
        assert_eq!(a.enumerated[1].factor, ratio(5, 6));
        let without = singular_series(&BadSetSpec::a4b3(), 2, 100_000, false, &b()).unwrap();
        assert!((without.value - 2.0 * a.value).abs() < 1e-12);
        // odd n: the p = 2 factor of the squarefree-discriminant set vanishes
        let s = singular_series(&BadSetSpec::sqf_disc_monic(), 3, 100, true, &b()).unwrap();
        assert_eq!((s.vanishing.clone(), s.value), (vec![2], 0.0));
        assert!(singular_series(&BadSetSpec::sqf_disc_monic(), 3, 100, false, &b()).unwrap().value > 0.5);
    }

    #[test]
    fn max_predicate_matches_dedekind_context() {
        let p = 3u64;
        let field = PrimeField::new(p).unwrap();
        let spec = BadSetSpec::maximality_monic();
        for idx in 0..(9u64.pow(3)) {
            let v = [idx % 9, idx / 9 % 9, idx / 81];
            let f = monic_lift(&v);
            let fbar = crate::fppoly::FpPoly::from_bigints(field, &f);
            let ctx = DedekindContext::new(&fbar, &b()).unwrap();
            let residues: Vec<u64> = f.iter().map(|c| c.to_u64().unwrap() % 9).collect();
            assert_eq!(spec.contains(p, &v), !ctx.is_maximal(&residues));
        }
    }

    proptest! {
        #[test]
        fn membership_depends_on_residues_only(v in proptest::collection::vec(0u64..1000, 3), k in proptest::collection::vec(0u64..50, 3)) {
            for spec in [BadSetSpec::sqf_disc_monic(), BadSetSpec::maximality_monic(), BadSetSpec::sqf_disc_allcoeff(), BadSetSpec::maximality_allcoeff()] {
                for p in [2u64, 3, 5] {
                    let shifted: Vec<u64> = v.iter().zip(&k).map(|(a, s)| a + s * p * p).collect();
                    prop_assert_eq!(spec.contains(p, &v), spec.contains(p, &shifted));
                }
            }
        }

        #[test]
        fn crt_membership(a in 1u64..5000, c in 1u64..5000) {
            // B_15 membership through residues mod 225 equals B_3 and B_5 separately
            let spec = BadSetSpec::a4b3();
            let v = [a, c];
            let r: Vec<u64> = v.iter().map(|x| x % 225).collect();
            prop_assert_eq!(spec.contains_all(&[3, 5], &v), spec.contains(3, &r) && spec.contains(5, &r));
            let m = 225u128;
            let direct = ((a as u128).pow(4) + (c as u128).pow(3)) % m;
            prop_assert_eq!(spec.contains_all(&[3, 5], &v), direct % 9 == 0 && direct % 25 == 0);
        }
    }
}
