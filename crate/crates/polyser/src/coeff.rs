use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

/// Exact rational scalar used throughout the workspace.
pub type Rat = BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Scalar field a series may carry.
///
/// Two kinds exist: exact rationals and `f64`. Mixing them in one
/// operation is a type error.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + 'static + Num + Neg<Output = Self> {
    fn from_i64(v: i64) -> Self;

    fn from_ratio(n: i64, d: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    /// True when arithmetic in this field is exact.
    fn is_exact() -> bool;

    /// Zero test used for pivoting; exact fields compare with zero,
    /// floats use a small absolute threshold.
    fn negligible(&self) -> bool {
        self.is_zero()
    }

    /// Least-squares solve of the overdetermined system `a x = b`
    /// (rows of `a` are equations). Default: normal equations solved by
    /// elimination, which is exact for exact fields.
    fn lstsq(a: &[Vec<Self>], b: &[Self]) -> Option<Vec<Self>> {
        crate::linalg::lstsq_normal(a, b)
    }
}

impl Coeff for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_exact() -> bool {
        false
    }

    fn negligible(&self) -> bool {
        self.abs() < 1e-13
    }

    fn lstsq(a: &[Vec<Self>], b: &[Self]) -> Option<Vec<Self>> {
        if a.is_empty() {
            return Some(Vec::new());
        }
        let rows = a.len();
        let cols = a[0].len();
        let m = nalgebra::DMatrix::from_fn(rows, cols, |i, j| a[i][j]);
        let rhs = nalgebra::DVector::from_column_slice(b);
        let svd = m.svd(true, true);
        let x = svd.solve(&rhs, 1e-12).ok()?;
        Some(x.iter().copied().collect())
    }
}

impl Coeff for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        rat(n, d)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    fn magnitude(&self) -> f64 {
        Coeff::to_f64(&self.abs())
    }

    fn is_exact() -> bool {
        true
    }
}

/// Convert an exact rational to a float.
pub fn rat_to_f64(r: &Rat) -> f64 {
    Coeff::to_f64(r)
}

