//! Local conditions at p that depend only on f mod p²: the valuation of the
//! discriminant and Dedekind's maximality criterion.

use num_bigint::BigInt;
use serde::Serialize;

use super::ZPoly;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fppoly::{factor, gcd, FpPoly, PrimeField};
use crate::scalar::IntScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscTag {
    /// v_p(Δ) = 0.
    Unit,
    /// v_p(Δ) = 1.
    ValuationOne,
    /// f̄ = (x+c)² g with g squarefree and coprime to x+c, but p² | f(-c).
    ValuationGeTwo,
    /// Any other repeated-factor shape; v_p(Δ) >= 2.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscClass {
    pub tag: DiscTag,
    /// `(c, f(-c))` with `c` in `[0, p)` when f̄ = (x+c)² g.
    pub witness: Option<(u32, String)>,
}

impl DiscClass {
    /// True when v_p(Δ) <= 1.
    pub fn at_most_one(&self) -> bool {
        matches!(self.tag, DiscTag::Unit | DiscTag::ValuationOne)
    }
}

fn require_monic<T: IntScalar>(f: &ZPoly<T>) -> Result<()> {
    match f.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Err(Error::Degenerate("constant polynomial".into())),
        _ if !f.is_monic() => Err(Error::NotMonic),
        _ => Ok(()),
    }
}

/// Classifies v_p(Δ(f)) as 0, 1 or >= 2 from f mod p².
///
/// Errors with [`Error::ValuationOneAtTwo`] when p = 2 and f̄ is not
/// squarefree, since the valuation-one criterion needs p odd.
pub fn disc_valuation_class<T: IntScalar>(f: &ZPoly<T>, field: PrimeField, budget: &Budget) -> Result<DiscClass> {
    require_monic(f)?;
    let fbar = f.reduce(field);
    if fbar.is_squarefree()? {
        return Ok(DiscClass { tag: DiscTag::Unit, witness: None });
    }
    if field.p() == 2 {
        return Err(Error::ValuationOneAtTwo);
    }
    let fac = factor(&fbar, budget)?;
    let repeated: Vec<&(FpPoly, u32)> = fac.factors.iter().filter(|(_, e)| *e > 1).collect();
    let shape = match repeated.as_slice() {
        [(g, 2)] if g.degree() == Some(1) => Some(g.coeff(0)),
        _ => None,
    };
    let Some(c) = shape else {
        return Ok(DiscClass { tag: DiscTag::NotApplicable, witness: None });
    };
    let p = field.p() as i64;
    let value = f.eval(&T::from_i64(-(c as i64)));
    let p2 = T::from_i64(p * p);
    let tag = if value.mod_floor(&p2).is_zero() {
        DiscTag::ValuationGeTwo
    } else {
        DiscTag::ValuationOne
    };
    Ok(DiscClass { tag, witness: Some((c, value.to_string())) })
}

/// Everything about Dedekind's test at p that depends only on f̄, so a
/// whole residue class mod p can be tested against many lifts mod p².
#[derive(Clone, Debug)]
pub struct DedekindContext {
    field: PrimeField,
    /// gcd(ḡ, h̄): the product of the repeated irreducible factors of f̄.
    repeated: FpPoly,
    /// g̃·h̃ for the monic lifts with coefficients in [0, p), mod p².
    lift_product: Vec<u64>,
}

impl DedekindContext {
    pub fn new(fbar: &FpPoly, budget: &Budget) -> Result<Self> {
        if !fbar.is_monic() {
            return Err(Error::NotMonic);
        }
        let field = fbar.field();
        let fac = factor(fbar, budget)?;
        let radical = fac.radical(field);
        let cofactor = fbar.exact_div(&radical)?;
        let repeated = gcd(&radical, &cofactor)?;
        let p2 = (field.p() as u64).pow(2);
        let mut lift_product = vec![0u64; fbar.coeffs().len()];
        for (i, &a) in radical.coeffs().iter().enumerate() {
            for (j, &b) in cofactor.coeffs().iter().enumerate() {
                lift_product[i + j] = (lift_product[i + j] + a as u64 * b as u64) % p2;
            }
        }
        Ok(Self { field, repeated, lift_product })
    }

    /// True when f̄ is squarefree, so every lift is maximal.
    pub fn trivially_maximal(&self) -> bool {
        self.repeated.is_one()
    }

    /// Dedekind's test for the lift with coefficients `f_mod_p2`
    /// (lowest first, reduced into [0, p²)).
    pub fn is_maximal(&self, f_mod_p2: &[u64]) -> bool {
        if self.trivially_maximal() {
            return true;
        }
        let p = self.field.p() as u64;
        let p2 = p * p;
        let t: Vec<u32> = self
            .lift_product
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                let diff = (g + p2 - f_mod_p2.get(i).copied().unwrap_or(0) % p2) % p2;
                debug_assert_eq!(diff % p, 0, "lift does not reduce to f̄");
                ((diff / p) % p) as u32
            })
            .collect();
        let t = FpPoly::from_residues(self.field, t);
        gcd(&t, &self.repeated).expect("same field").is_one()
    }
}

/// Whether Z_p[x]/(f) is the maximal order of Q_p[x]/(f).
pub fn is_maximal_at_p<T: IntScalar>(f: &ZPoly<T>, field: PrimeField, budget: &Budget) -> Result<bool> {
    require_monic(f)?;
    let ctx = DedekindContext::new(&f.reduce(field), budget)?;
    let p2 = (field.p() as u64).pow(2);
    Ok(ctx.is_maximal(&f.residues(p2)))
}

/// Whether f lies in (p, ũ)² = (p², pũ, ũ²) for the monic lift ũ of `u`
/// with coefficients in [0, p).
pub fn ideal_membership_sq<T: IntScalar>(f: &ZPoly<T>, u: &FpPoly) -> Result<bool> {
    if !u.is_monic() {
        return Err(Error::NotMonic);
    }
    let field = u.field();
    let p = field.p() as i64;
    let fbar = f.reduce(field);
    let u2 = u.pow(2);
    if !u2.divides(&fbar)? {
        return Ok(false);
    }
    let quotient = fbar.exact_div(&u2)?;
    let lift = |g: &FpPoly| ZPoly::<i64>::new(g.coeffs().iter().map(|&c| c as i64).collect());
    let u_lift = lift(u);
    let approx = u_lift.mul(&u_lift).mul(&lift(&quotient)).to_bigint();
    let p2 = BigInt::from(p * p);
    let diff = f.to_bigint().sub(&approx);
    // s = (f - ũ² q̃) / p, only needed mod p
    let s: Vec<BigInt> = diff
        .coeffs()
        .iter()
        .map(|c| {
            let r = ((c % &p2) + &p2) % &p2;
            r / BigInt::from(p)
        })
        .collect();
    u.divides(&FpPoly::from_bigints(field, &s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fppoly::{enumerate_monic, Constraint};
    use crate::zpoly::discriminant;
    use num_traits::{Signed, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Big = ZPoly<BigInt>;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn big(s: &str) -> Big {
        s.parse().unwrap()
    }

    fn b() -> Budget {
        Budget::default()
    }

    fn valuation(n: &BigInt, p: u64) -> u32 {
        if n.is_zero() {
            return u32::MAX;
        }
        let p = BigInt::from(p);
        let mut n = n.abs();
        let mut v = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            v += 1;
        }
        v
    }

    #[test]
    fn valuation_class_examples() {
        let c = disc_valuation_class(&big("x^2+x+1"), fp(3), &b()).unwrap();
        assert_eq!(c.tag, DiscTag::ValuationOne);
        assert_eq!(c.witness, Some((2, "3".to_string())));
        assert_eq!(disc_valuation_class(&big("x^2+1"), fp(3), &b()).unwrap().tag, DiscTag::Unit);
        let c = disc_valuation_class(&big("x^2+2*x+10"), fp(3), &b()).unwrap();
        assert_eq!(c.tag, DiscTag::ValuationGeTwo);
        assert_eq!(c.witness, Some((1, "9".to_string())));
        assert_eq!(
            disc_valuation_class(&big("x^3"), fp(3), &b()).unwrap().tag,
            DiscTag::NotApplicable
        );
    }

    #[test]
    fn valuation_class_at_two() {
        assert_eq!(disc_valuation_class(&big("x^2+x+1"), fp(2), &b()).unwrap().tag, DiscTag::Unit);
        assert_eq!(disc_valuation_class(&big("x^2+1"), fp(2), &b()), Err(Error::ValuationOneAtTwo));
    }

    #[test]
    fn maximality_examples() {
        assert!(is_maximal_at_p(&big("x^2+3"), fp(3), &b()).unwrap());
        assert!(!is_maximal_at_p(&big("x^2-9"), fp(3), &b()).unwrap());
        assert!(is_maximal_at_p(&big("x^2+1"), fp(3), &b()).unwrap());
        assert_eq!(is_maximal_at_p(&big("2*x^2+1"), fp(3), &b()), Err(Error::NotMonic));
    }

    #[test]
    fn membership_examples() {
        let x = FpPoly::x(fp(3));
        assert!(ideal_membership_sq(&big("x^2-9"), &x).unwrap());
        assert!(!ideal_membership_sq(&big("x^2+3"), &x).unwrap());
        for u in enumerate_monic(fp(3), 1, Constraint::All, &b()).unwrap() {
            assert!(!ideal_membership_sq(&big("x^2+1"), &u).unwrap());
        }
        // p² itself is in the ideal, p alone is not
        assert!(ideal_membership_sq(&big("9"), &x).unwrap());
        assert!(!ideal_membership_sq(&big("3"), &x).unwrap());
        assert!(ideal_membership_sq(&big("3*x"), &x).unwrap());
    }

    fn sample(rng: &mut ChaCha8Rng) -> Big {
        let deg = rng.gen_range(1..=4);
        let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-50..=50)).collect();
        c.push(1);
        ZPoly::from_i64s(&c)
    }

    #[test]
    fn dedekind_agrees_with_ideal_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let f = sample(&mut rng);
            for p in [2u64, 3, 5] {
                let field = fp(p);
                let fac = factor(&f.reduce(field), &b()).unwrap();
                let oracle = fac
                    .factors
                    .iter()
                    .all(|(g, _)| !ideal_membership_sq(&f, g).unwrap());
                assert_eq!(is_maximal_at_p(&f, field, &b()).unwrap(), oracle, "{f} at {p}");
            }
        }
    }

    #[test]
    fn valuation_class_agrees_with_discriminant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let f = sample(&mut rng);
            let disc = discriminant(&f).unwrap();
            for p in [3u64, 5] {
                let class = disc_valuation_class(&f, fp(p), &b()).unwrap();
                let v = valuation(&disc, p);
                assert_eq!(class.tag == DiscTag::Unit, v == 0, "{f} at {p}");
                assert_eq!(class.tag == DiscTag::ValuationOne, v == 1, "{f} at {p}");
                if v <= 1 {
                    assert!(is_maximal_at_p(&f, fp(p), &b()).unwrap(), "{f} at {p}");
                }
            }
        }
    }

    #[test]
    fn predicates_are_local_mod_p_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..2_000 {
            let f = sample(&mut rng);
            for p in [2u64, 3, 5] {
                let field = fp(p);
                let i = rng.gen_range(0..f.degree().unwrap());
                let mut c = f.coeffs().to_vec();
                c[i] += BigInt::from(p * p) * rng.gen_range(-3..=3);
                let g = ZPoly::new(c);
                assert_eq!(
                    is_maximal_at_p(&f, field, &b()).unwrap(),
                    is_maximal_at_p(&g, field, &b()).unwrap()
                );
                if p > 2 {
                    assert_eq!(
                        disc_valuation_class(&f, field, &b()).unwrap().tag,
                        disc_valuation_class(&g, field, &b()).unwrap().tag
                    );
                }
            }
        }
    }
}
