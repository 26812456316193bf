//! Integer polynomials: discriminants and the local conditions at a prime.

mod intfactor;
mod local;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

pub use intfactor::{factor_int, is_squarefree_int, IntFactorization, SquarefreeOutcome};
pub use local::{disc_valuation_class, ideal_membership_sq, is_maximal_at_p, DedekindContext, DiscClass, DiscTag};

use crate::error::{Error, Result};
use crate::fppoly::{FpPoly, PrimeField};
use crate::parse::{format_int_poly, parse_int_poly};
use crate::scalar::IntScalar;

/// Polynomial with integer coefficients, lowest degree first, trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZPoly<T> {
    coeffs: Vec<T>,
}

impl<T: IntScalar> ZPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_i64(c)).collect())
    }

    /// Parses `"x^3-2*x+7"`; fails if a coefficient does not fit `T`.
    pub fn parse(s: &str) -> Result<Self>
    where
        T: TryFrom<BigInt>,
    {
        let big = parse_int_poly(s)?;
        let coeffs = big
            .into_iter()
            .map(|c| T::try_from(c).map_err(|_| Error::Parse(format!("coefficient out of range in {s:?}"))))
            .collect::<Result<Vec<T>>>()?;
        Ok(Self::new(coeffs))
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, at: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * at.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// gcd of the coefficients (non-negative).
    pub fn content(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc.gcd(c))
    }

    /// Coefficients mod `m`, in `[0, m)`.
    pub fn residues(&self, m: u64) -> Vec<u64> {
        let modulus = T::from_i64(m as i64);
        self.coeffs
            .iter()
            .map(|c| c.mod_floor(&modulus).to_u64().expect("residue fits u64"))
            .collect()
    }

    /// Reduction mod p.
    pub fn reduce(&self, field: PrimeField) -> FpPoly {
        FpPoly::from_residues(field, self.residues(field.p() as u64).into_iter().map(|c| c as u32).collect())
    }

    pub fn to_bigint(&self) -> ZPoly<BigInt> {
        ZPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigInt::parse_bytes(c.to_string().as_bytes(), 10).expect("integer text"))
                .collect(),
        )
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) a = q b + r`.
    fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("nonzero divisor");
        let lb = b.leading();
        let mut r = self.clone();
        let steps = match self.degree() {
            Some(da) if da >= db => da - db + 1,
            _ => return r,
        };
        let mut done = 0;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading();
            let mut next = r.scale(&lb).coeffs;
            for (i, c) in b.coeffs.iter().enumerate() {
                let pos = dr - db + i;
                next[pos] = next[pos].clone() - lr.clone() * c.clone();
            }
            r = Self::new(next);
            done += 1;
        }
        let mut factor = T::one();
        for _ in done..steps {
            factor = factor * lb.clone();
        }
        r.scale(&factor)
    }

    fn exact_div_scalar(&self, d: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() / d.clone()).collect())
    }
}

fn pow<T: IntScalar>(base: &T, e: usize) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc * base.clone();
    }
    acc
}

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination; every division is exact.
pub fn bareiss_determinant<T: IntScalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = v / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Sylvester matrix of `f` (degree m) and `g` (degree n), size m + n.
pub fn sylvester_matrix<T: IntScalar>(f: &ZPoly<T>, g: &ZPoly<T>) -> Vec<Vec<T>> {
    let m = f.degree().unwrap_or(0);
    let n = g.degree().unwrap_or(0);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![T::zero(); size];
        for (j, c) in f.coeffs.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![T::zero(); size];
        for (j, c) in g.coeffs.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Res(f, g) as the Sylvester determinant.
pub fn resultant<T: IntScalar>(f: &ZPoly<T>, g: &ZPoly<T>) -> T {
    if f.is_zero() || g.is_zero() {
        return T::zero();
    }
    bareiss_determinant(sylvester_matrix(f, g))
}

/// Res(f, g) by the subresultant pseudo-remainder sequence.
pub fn resultant_subresultant<T: IntScalar>(f: &ZPoly<T>, g: &ZPoly<T>) -> T {
    if f.is_zero() || g.is_zero() {
        return T::zero();
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    let ca = a.content();
    let cb = b.content();
    a = a.exact_div_scalar(&ca);
    b = b.exact_div_scalar(&cb);
    let mut s = T::one();
    let t = pow(&ca, b.degree().unwrap()) * pow(&cb, a.degree().unwrap());
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            s = -s;
        }
    }
    let mut g_ = T::one();
    let mut h = T::one();
    while b.degree().unwrap() > 0 {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return T::zero();
        }
        a = b;
        b = r.exact_div_scalar(&(g_.clone() * pow(&h, delta)));
        g_ = a.leading();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            pow(&g_, delta) / pow(&h, delta - 1)
        };
    }
    let da = a.degree().unwrap();
    let lb = b.leading();
    let h = if da == 0 { T::one() } else { pow(&lb, da) / pow(&h, da - 1) };
    s * t * h
}

fn disc_sign<T: IntScalar>(n: usize) -> T {
    if (n * (n - 1) / 2) % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Δ(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f), via the Sylvester determinant.
pub fn discriminant<T: IntScalar>(f: &ZPoly<T>) -> Result<T> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::Degenerate("discriminant needs degree >= 1".into())),
    };
    Ok(disc_sign::<T>(n) * resultant(f, &f.derivative()) / f.leading())
}

/// Δ(f) through the subresultant sequence; cross-check for [`discriminant`].
pub fn discriminant_subresultant<T: IntScalar>(f: &ZPoly<T>) -> Result<T> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::Degenerate("discriminant needs degree >= 1".into())),
    };
    Ok(disc_sign::<T>(n) * resultant_subresultant(f, &f.derivative()) / f.leading())
}

impl<T: IntScalar> fmt::Display for ZPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zero = T::zero();
        f.write_str(&format_int_poly(&self.coeffs, |c| c.is_zero(), |c| *c < zero))
    }
}

impl<T: IntScalar> fmt::Debug for ZPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly({self})")
    }
}

impl<T: IntScalar + TryFrom<BigInt>> FromStr for ZPoly<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl<T: IntScalar> Serialize for ZPoly<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
