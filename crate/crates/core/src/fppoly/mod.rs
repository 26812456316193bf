//! Polynomials over a prime field 𝔽_p.
//!
//! Coefficients are stored lowest degree first and trimmed, so every
//! polynomial has a unique representation; the zero polynomial has no
//! coefficients. Text output is high-to-low (`x^2+2*x+1 mod 3`).

mod count;
mod enumerate;
mod factor;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::arith::is_prime_u64;
use crate::error::{Error, Result};
use crate::parse::{format_int_poly, parse_int_poly};

pub use count::{count_divisible, DivisibilityCounter};
pub use enumerate::{enumerate_monic, monic_from_index, monic_index, Constraint, MobiusTable, MonicIter};
pub use factor::{factor, irreducibles_of_degree, is_irreducible, mobius, FpFactorization};

/// The field 𝔽_p for a prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 31 || !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }
}

impl Serialize for PrimeField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.p)
    }
}

/// Dense polynomial over 𝔽_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl FpPoly {
    /// Builds a polynomial from integer coefficients (lowest degree first),
    /// reducing each into `[0, p)`.
    pub fn new(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::from_residues(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    /// Builds from coefficients already in `[0, p)`.
    pub fn from_residues(field: PrimeField, mut coeffs: Vec<u32>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < field.p));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn zero(field: PrimeField) -> Self {
        Self { field, coeffs: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Self { field, coeffs: vec![1] }
    }

    pub fn constant(field: PrimeField, c: u32) -> Self {
        Self::from_residues(field, vec![c % field.p])
    }

    pub fn x(field: PrimeField) -> Self {
        Self { field, coeffs: vec![0, 1] }
    }

    /// `x + c`.
    pub fn linear(field: PrimeField, c: u32) -> Self {
        Self { field, coeffs: vec![c % field.p, 1] }
    }

    pub fn monomial(field: PrimeField, c: u32, exp: usize) -> Self {
        let mut coeffs = vec![0; exp + 1];
        coeffs[exp] = c % field.p;
        Self::from_residues(field, coeffs)
    }

    /// Reduction of integer coefficients mod p.
    pub fn from_bigints(field: PrimeField, coeffs: &[BigInt]) -> Self {
        let p = BigInt::from(field.p);
        Self::from_residues(
            field,
            coeffs
                .iter()
                .map(|c| c.mod_floor(&p).to_u32().expect("residue fits u32"))
                .collect(),
        )
    }

    /// Parses `"x^2+2*x+1"` over the given field.
    pub fn parse(s: &str, field: PrimeField) -> Result<Self> {
        Ok(Self::from_bigints(field, &parse_int_poly(s)?))
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.field.p
    }

    /// Coefficients, lowest degree first.
    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            Err(Error::FieldMismatch(self.field.p, other.field.p))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Ok(Self::from_residues(f, coeffs))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Ok(Self::from_residues(f, coeffs))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field));
        }
        let p = self.field.p as u64;
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p;
            }
        }
        Ok(Self::from_residues(self.field, acc.into_iter().map(|c| c as u32).collect()))
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.same_field(divisor)?;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let f = self.field;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let inv_lead = f.inv(divisor.leading());
        let mut quot = vec![0u32; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], inv_lead);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(c, b));
            }
        }
        rem.truncate(dd);
        Ok((Self::from_residues(f, quot), Self::from_residues(f, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// True iff `self` divides `other`.
    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Degenerate(format!("{divisor} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self { field: f, coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        Self::from_residues(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Divides by the leading coefficient; the zero polynomial is returned as is.
    pub fn to_monic(&self) -> Self {
        match self.leading() {
            0 | 1 => self.clone(),
            lead => self.scale(self.field.inv(lead)),
        }
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, (i as u64 % f.p as u64) as u32))
            .collect();
        Self::from_residues(f, coeffs)
    }

    pub fn eval(&self, at: u32) -> u32 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, at), c))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Squarefree iff `gcd(a, a') = 1`.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(true);
        }
        Ok(gcd(self, &self.derivative())?.is_one())
    }

    /// High-to-low text with explicit modulus: `x^2+2*x+1 mod 3`.
    pub fn to_string_with_modulus(&self) -> String {
        format!("{} mod {}", self, self.field.p)
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &FpPoly, b: &FpPoly) -> Result<FpPoly> {
    a.same_field(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let r = x.rem(&y)?;
        x = y;
        y = r;
    }
    Ok(x.to_monic())
}

impl Ord for FpPoly {
    /// Field, then degree, then coefficients from the top down. On monic
    /// polynomials of one degree this is the enumeration order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .cmp(&other.field)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for FpPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_int_poly(&self.coeffs, |c| *c == 0, |_| false))
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly({})", self.to_string_with_modulus())
    }
}

impl FromStr for FpPoly {
    type Err = Error;

    /// Parses `"<poly> mod <p>"`.
    fn from_str(s: &str) -> Result<Self> {
        let (poly, modulus) = s
            .rsplit_once("mod")
            .ok_or_else(|| Error::Parse(format!("missing 'mod p' in {s:?}")))?;
        let p: u64 = modulus
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad modulus in {s:?}")))?;
        Self::parse(poly, PrimeField::new(p)?)
    }
}

impl Serialize for FpPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string_with_modulus())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&FpPoly> for &FpPoly {
            type Output = FpPoly;
            /// Panics when the operands live in different fields.
            fn $method(self, rhs: &FpPoly) -> FpPoly {
                self.$checked(rhs).expect("operands over the same field")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
