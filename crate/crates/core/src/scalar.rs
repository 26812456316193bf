//! Scalar traits shared by the generic kernels.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Ring element usable as a dense-matrix entry: exact integers, exact
/// rationals or floats.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// Embeds a small integer.
    fn from_i64(v: i64) -> Self;
}

impl<T> Scalar for T
where
    T: Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static,
{
    fn from_i64(v: i64) -> Self {
        <T as FromPrimitive>::from_i64(v).expect("small integer must embed in every scalar")
    }
}

/// Integer coefficient type for [`crate::zpoly::ZPoly`].
pub trait IntScalar: Scalar + Integer + ToPrimitive + Display {}

impl<T> IntScalar for T where T: Scalar + Integer + ToPrimitive + Display {}

/// Floating point type for the analytic kernels (Euler products, li).
pub trait Real: Float + FromPrimitive + Debug + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Send + Sync + 'static {}

/// Converts an `f64` literal into `T`.
pub(crate) fn real<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("f64 literal representable")
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Real> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self { sum: T::zero(), carry: T::zero() }
    }
}

impl<T: Real> CompensatedSum<T> {
    pub fn add(&mut self, v: T) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry = self.carry + ((self.sum - t) + v);
        } else {
            self.carry = self.carry + ((v - t) + self.sum);
        }
        self.sum = t;
    }

    /// Adds another partial sum, keeping both carries.
    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.carry);
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_beats_naive() {
        let mut s = CompensatedSum::<f64>::default();
        s.add(1.0);
        for _ in 0..10_000 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-12).abs() < 1e-20);
    }
}
