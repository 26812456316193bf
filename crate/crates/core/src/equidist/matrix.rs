//! Dense square-or-rectangular matrices over any [`Scalar`].

use std::fmt;

use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    /// Row-major data. Panics if the length is not `rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, T::zero())
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// The m×m matrix with every entry 1/m (J̃_m).
    pub fn uniform(m: usize) -> Self {
        Self::filled(m, m, T::one() / T::from_i64(m as i64))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Scalar>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Panics if the shapes differ.
    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.clone() + b.clone())
    }

    /// Panics if the shapes differ.
    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.clone() - b.clone())
    }

    fn zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert!(self.rows == other.rows && self.cols == other.cols, "matrix shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    /// Panics if the inner dimensions differ.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * other.get(k, j).clone();
                }
            }
        }
        out
    }

    /// `self^k` by repeated squaring. Panics if not square.
    pub fn pow(&self, mut k: u64) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// E_min: the least entry.
    pub fn min_entry(&self) -> T {
        self.data.iter().cloned().reduce(|a, b| if b < a { b } else { a }).expect("nonempty matrix")
    }

    /// E_max: the greatest entry.
    pub fn max_entry(&self) -> T {
        self.data.iter().cloned().reduce(|a, b| if b > a { b } else { a }).expect("nonempty matrix")
    }

    /// ‖M‖_max = m · max |M_ij| for an m×m matrix.
    pub fn max_norm(&self) -> T {
        let largest = self.data.iter().map(|a| a.abs()).reduce(|a, b| if b > a { b } else { a }).expect("nonempty matrix");
        largest * T::from_i64(self.rows as i64)
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.rows).map(|i| self.row(i).iter().cloned().fold(T::zero(), |a, b| a + b)).collect()
    }

    pub fn col_sums(&self) -> Vec<T> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j).clone()).fold(T::zero(), |a, b| a + b))
            .collect()
    }

    /// Nonnegative entries with every row and column summing to 1.
    pub fn is_doubly_stochastic(&self) -> bool {
        self.is_square()
            && self.data.iter().all(|a| !a.is_negative())
            && self.row_sums().iter().chain(self.col_sums().iter()).all(|s| s.is_one())
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn m(rows: usize, cols: usize, v: &[i64]) -> Matrix<i64> {
        Matrix::new(rows, cols, v.to_vec())
    }

    #[test]
    fn arithmetic() {
        let a = m(2, 2, &[1, 2, 3, 4]);
        let b = m(2, 2, &[0, 1, 1, 0]);
        assert_eq!(a.mul(&b), m(2, 2, &[2, 1, 4, 3]));
        assert_eq!(a.pow(0), Matrix::identity(2));
        assert_eq!(a.pow(3), a.mul(&a).mul(&a));
        assert_eq!(a.transpose(), m(2, 2, &[1, 3, 2, 4]));
        assert_eq!(a.sub(&b).add(&b), a);
        assert_eq!(a.max_norm(), 8);
        assert_eq!(m(2, 2, &[-5, 2, 3, 4]).max_norm(), 10);
        assert_eq!((a.min_entry(), a.max_entry()), (1, 4));
        assert_eq!(a.row_sums(), vec![3, 7]);
        assert_eq!(a.col_sums(), vec![4, 6]);
    }

    #[test]
    fn stochastic_detection() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let j = Matrix::<BigRational>::uniform(2);
        assert!(j.is_doubly_stochastic());
        assert_eq!(j.get(0, 1), &half);
        assert_eq!(j.mul(&j), j);
        let not = Matrix::<BigRational>::identity(2).scale(&half);
        assert!(!not.is_doubly_stochastic());
    }

    proptest! {
        #[test]
        fn power_by_squaring_matches_repeated_products(v in proptest::collection::vec(-3i64..4, 9), k in 0u64..7) {
            let a = Matrix::new(3, 3, v.into_iter().map(i128::from).collect());
            let mut naive = Matrix::<i128>::identity(3);
            for _ in 0..k {
                naive = naive.mul(&a);
            }
            prop_assert_eq!(a.pow(k), naive);
        }
    }
}
