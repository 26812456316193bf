//! Exact verification of the doubly stochastic matrix lemmas on the graph
//! matrices M_u and on random doubly stochastic matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::graph::{adjacency_counts, build_graph};
use super::{CountMatrix, ExactMatrix, Matrix};
use crate::budget::Budget;
use crate::error::Result;
use crate::fppoly::{enumerate_monic, Constraint, PrimeField};

/// Random doubly stochastic matrices per run, with dimensions 2..=8.
pub const RANDOM_SAMPLES: usize = 100;

/// Largest exponent used for the power identity.
const MAX_POWER: u64 = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub id: &'static str,
    pub statement: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl LemmaCheck {
    fn new(id: &'static str, statement: &'static str) -> Self {
        Self { id, statement, cases: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(context());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub p: u64,
    pub d_max: usize,
    pub n_max: u64,
    pub seed: u64,
    pub graphs: usize,
    pub random_matrices: usize,
    pub checks: Vec<LemmaCheck>,
    pub all_passed: bool,
}

struct Checks {
    power_identity: LemmaCheck,
    ds_multiply: LemmaCheck,
    submultiplicative: LemmaCheck,
    corollary: LemmaCheck,
    emin_product: LemmaCheck,
    emin_power: LemmaCheck,
    emin_emax_2d: LemmaCheck,
    positivity: LemmaCheck,
}

impl Checks {
    fn new() -> Self {
        Self {
            power_identity: LemmaCheck::new("power_identity", "(M - J)^k = M^k - J for doubly stochastic M"),
            ds_multiply: LemmaCheck::new(
                "ds_multiply",
                "E_min(AB), E_min(BA) >= E_min(A), E_max(AB), E_max(BA) <= E_max(A), ||AB||, ||BA|| <= ||A|| for B doubly stochastic",
            ),
            submultiplicative: LemmaCheck::new("submultiplicative", "||AB||_max <= ||A||_max ||B||_max"),
            corollary: LemmaCheck::new("power_norm_decay", "||M^k - J|| <= ||M^l - J||^floor(k/l) for doubly stochastic M, k >= l"),
            emin_product: LemmaCheck::new("emin_product", "1 - m E_min(AB) <= (1 - m E_min(A))(1 - m E_min(B)) for doubly stochastic A, B"),
            emin_power: LemmaCheck::new("emin_power", "E_min(M^k) >= (1 - (1 - m E_min(M))^k)/m for doubly stochastic M"),
            emin_emax_2d: LemmaCheck::new("emin_emax_2d", "E_min(M_u^{2d}) >= 2(p-1)^d - p^d and E_max(M_u^{2d}) <= (p-1)^d"),
            positivity: LemmaCheck::new("positivity", "every entry of M_u^{d^2+d} is positive"),
        }
    }

    fn into_vec(self) -> Vec<LemmaCheck> {
        vec![
            self.power_identity,
            self.ds_multiply,
            self.submultiplicative,
            self.corollary,
            self.emin_product,
            self.emin_power,
            self.emin_emax_2d,
            self.positivity,
        ]
    }
}

/// Runs every lemma over all u with 1 <= deg u <= `d_max`, x ∤ u, exponents
/// up to `n_max`, and over [`RANDOM_SAMPLES`] seeded random doubly
/// stochastic matrices.
pub fn lemma_checks(p: u64, d_max: usize, n_max: u64, seed: u64, budget: &Budget) -> Result<LemmaReport> {
    let field = PrimeField::new(p)?;
    let mut checks = Checks::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graphs = 0;
    for d in 1..=d_max {
        for u in enumerate_monic(field, d, Constraint::CoprimeToX, budget)? {
            let g = build_graph(&u, budget)?;
            budget.check_enumeration("lemma matrices", (g.size() as u128).pow(3) * (n_max as u128 + 8))?;
            graphs += 1;
            graph_checks(&mut checks, &adjacency_counts(&g), p, d, n_max, &u.to_string());
        }
    }
    for sample in 0..RANDOM_SAMPLES {
        let m = rng.gen_range(2..=8);
        let a = random_doubly_stochastic(&mut rng, m);
        let b = random_doubly_stochastic(&mut rng, m);
        let arbitrary = random_matrix(&mut rng, m);
        let label = || format!("random sample {sample} (dimension {m})");
        matrix_checks(&mut checks, &a, &b, &arbitrary, n_max.min(MAX_POWER), &label);
    }
    let checks = checks.into_vec();
    let all_passed = checks.iter().all(LemmaCheck::passed);
    Ok(LemmaReport { p, d_max, n_max, seed, graphs, random_matrices: RANDOM_SAMPLES, checks, all_passed })
}

fn graph_checks(checks: &mut Checks, m: &CountMatrix, p: u64, d: usize, n_max: u64, label: &str) {
    let pd = BigInt::from(p).pow(d as u32);
    let qd = BigInt::from(p - 1).pow(d as u32);
    let m2d = m.pow(2 * d as u64);
    checks.emin_emax_2d.record(m2d.min_entry() >= BigInt::from(2) * &qd - &pd && m2d.max_entry() <= qd, || {
        format!("u = {label}: E_min {} E_max {}", m2d.min_entry(), m2d.max_entry())
    });
    let pos = m.pow((d * d + d) as u64);
    checks.positivity.record(pos.min_entry().is_positive(), || format!("u = {label}: zero entry in M_u^{}", d * d + d));

    let normalized = m.map(|c| BigRational::new(c.clone(), BigInt::from(p - 1)));
    // pairs of doubly stochastic powers and a signed companion M̃ - J̃
    let size = normalized.rows();
    let j = ExactMatrix::uniform(size);
    let centered = normalized.sub(&j);
    let top = n_max.min(MAX_POWER);
    let powers: Vec<ExactMatrix> = std::iter::successors(Some(ExactMatrix::identity(size)), |prev| Some(prev.mul(&normalized)))
        .take(top as usize + 1)
        .collect();
    let label = || format!("u = {label}");
    let mut centered_power = ExactMatrix::identity(size);
    for k in 1..=top as usize {
        centered_power = centered_power.mul(&centered);
        checks.power_identity.record(centered_power == powers[k].sub(&j), || format!("{} k = {k}", label()));
    }
    corollary_checks(checks, &powers, &j, &label);
    let a = &powers[1.min(top as usize)];
    let b = &powers[2.min(top as usize)];
    matrix_pair_checks(checks, a, b, &centered, &label);
}

fn matrix_checks(checks: &mut Checks, a: &ExactMatrix, b: &ExactMatrix, arbitrary: &ExactMatrix, top: u64, label: &dyn Fn() -> String) {
    let size = a.rows();
    let j = ExactMatrix::uniform(size);
    let powers: Vec<ExactMatrix> = std::iter::successors(Some(ExactMatrix::identity(size)), |prev| Some(prev.mul(a)))
        .take(top as usize + 1)
        .collect();
    let centered = a.sub(&j);
    let mut centered_power = ExactMatrix::identity(size);
    for k in 1..=top as usize {
        centered_power = centered_power.mul(&centered);
        checks.power_identity.record(centered_power == powers[k].sub(&j), || format!("{} k = {k}", label()));
    }
    corollary_checks(checks, &powers, &j, label);
    matrix_pair_checks(checks, a, b, arbitrary, label);
}

/// Lemmas on a doubly stochastic pair (a, b) and an arbitrary matrix.
fn matrix_pair_checks(checks: &mut Checks, a: &ExactMatrix, b: &ExactMatrix, arbitrary: &ExactMatrix, label: &dyn Fn() -> String) {
    let m = BigRational::from_integer(BigInt::from(a.rows()));
    let one = BigRational::one();
    for (x, y) in [(arbitrary, a), (arbitrary, b), (a, b)] {
        let (xy, yx) = (x.mul(y), y.mul(x));
        let ok = xy.min_entry() >= x.min_entry()
            && yx.min_entry() >= x.min_entry()
            && xy.max_entry() <= x.max_entry()
            && yx.max_entry() <= x.max_entry()
            && xy.max_norm() <= x.max_norm()
            && yx.max_norm() <= x.max_norm();
        checks.ds_multiply.record(ok, label);
    }
    for (x, y) in [(arbitrary, arbitrary), (arbitrary, a), (a, arbitrary), (a, b)] {
        checks.submultiplicative.record(x.mul(y).max_norm() <= x.max_norm() * y.max_norm(), label);
    }
    let lhs = &one - &m * a.mul(b).min_entry();
    let rhs = (&one - &m * a.min_entry()) * (&one - &m * b.min_entry());
    checks.emin_product.record(lhs <= rhs, label);
    let ratio = &one - &m * a.min_entry();
    let mut power = a.clone();
    let mut ratio_power = ratio.clone();
    for k in 1..=4 {
        checks.emin_power.record(power.min_entry() >= (&one - &ratio_power) / &m, || format!("{} k = {k}", label()));
        power = power.mul(a);
        ratio_power *= &ratio;
    }
}

/// Checked for k >= l only: with k < l the right side is 1 while
/// ||M^k - J|| can be as large as m - 1 (take k = 0).
fn corollary_checks(checks: &mut Checks, powers: &[ExactMatrix], j: &ExactMatrix, label: &dyn Fn() -> String) {
    let norms: Vec<BigRational> = powers.iter().map(|mk| mk.sub(j).max_norm()).collect();
    for k in 1..powers.len() {
        for l in 1..=k {
            let mut bound = BigRational::one();
            for _ in 0..k / l {
                bound *= &norms[l];
            }
            checks.corollary.record(norms[k] <= bound, || format!("{} k = {k}, l = {l}", label()));
        }
    }
}

/// Convex combination of up to 8 uniformly random permutation matrices with
/// random positive integer weights.
pub fn random_doubly_stochastic(rng: &mut impl Rng, m: usize) -> ExactMatrix {
    let terms = rng.gen_range(1..=8);
    let mut acc = Matrix::<BigInt>::zeros(m, m);
    let mut total = 0i64;
    let mut perm: Vec<usize> = (0..m).collect();
    for _ in 0..terms {
        perm.shuffle(rng);
        let w: i64 = rng.gen_range(1..=10);
        total += w;
        for (i, &j) in perm.iter().enumerate() {
            let v = acc.get(i, j) + BigInt::from(w);
            acc.set(i, j, v);
        }
    }
    acc.map(|c| BigRational::new(c.clone(), BigInt::from(total)))
}

/// Entries in [-9, 9]/q with q in 1..=7.
fn random_matrix(rng: &mut impl Rng, m: usize) -> ExactMatrix {
    let q: i64 = rng.gen_range(1..=7);
    Matrix::from_fn(m, m, |_, _| BigRational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_small_cases() {
        let f3 = PrimeField::new(3).unwrap();
        for c in 1..3 {
            let g = build_graph(&crate::fppoly::FpPoly::linear(f3, c), &Budget::default()).unwrap();
            let m2 = adjacency_counts(&g).pow(2);
            // 2(p-1)^d - p^d = 1
            assert!(m2.min_entry() >= BigInt::one());
        }
    }

    #[test]
    fn random_matrices_are_doubly_stochastic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for m in 1..=8 {
            assert!(random_doubly_stochastic(&mut rng, m).is_doubly_stochastic());
        }
    }

    #[test]
    fn suite_passes_at_p3() {
        let r = lemma_checks(3, 2, 6, 42, &Budget::default()).unwrap();
        for c in &r.checks {
            assert!(c.passed(), "{}: {:?}", c.id, c.first_failure);
        }
        assert!(r.all_passed);
        assert_eq!(r.graphs, 2 + 6);
    }

    #[test]
    fn power_norm_decay_needs_k_at_least_l() {
        // M = I: ||I - J||_max = m - 1 > 1 = ||M^l - J||^0
        let i3 = ExactMatrix::identity(3);
        let lhs = i3.sub(&ExactMatrix::uniform(3)).max_norm();
        assert_eq!(lhs, BigRational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn a_broken_matrix_is_caught() {
        let mut checks = Checks::new();
        let not_ds = Matrix::from_fn(2, 2, |i, j| BigRational::from_integer(BigInt::from((i + 2 * j) as i64)));
        let a = random_doubly_stochastic(&mut ChaCha8Rng::seed_from_u64(3), 2);
        matrix_checks(&mut checks, &not_ds, &a, &not_ds, 3, &|| "planted".into());
        assert!(checks.into_vec().iter().any(|c| c.failures > 0));
    }
}
