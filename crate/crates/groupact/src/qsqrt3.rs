use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_traits::{Num, One, Zero};
use polyser::{rat, Coeff, Rat};

/// Element `a + b√3` of the field ℚ(√3).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSqrt3 {
    pub a: Rat,
    pub b: Rat,
}

impl QSqrt3 {
    pub fn new(a: Rat, b: Rat) -> Self {
        Self { a, b }
    }

    pub fn rational(a: Rat) -> Self {
        Self { a, b: Rat::zero() }
    }

    /// `(an/ad) + (bn/bd)√3`.
    pub fn from_parts(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        Self { a: rat(an, ad), b: rat(bn, bd) }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Field norm `a² − 3b²`.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - rat(3, 1) * &self.b * &self.b
    }

    pub fn conj(&self) -> Self {
        Self { a: self.a.clone(), b: -self.b.clone() }
    }
}

impl fmt::Debug for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}√3", self.a, self.b)
        }
    }
}

impl Add for QSqrt3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for QSqrt3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Mul for QSqrt3 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let a = &self.a * &o.a + rat(3, 1) * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        Self { a, b }
    }
}

impl Div for QSqrt3 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in Q(√3)");
        let t = self * o.conj();
        Self { a: t.a / &n, b: t.b / n }
    }
}

impl Rem for QSqrt3 {
    type Output = Self;
    fn rem(self, _o: Self) -> Self {
        Self::zero()
    }
}

impl Neg for QSqrt3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self { a: -self.a, b: -self.b }
    }
}

impl Zero for QSqrt3 {
    fn zero() -> Self {
        Self { a: Rat::zero(), b: Rat::zero() }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QSqrt3 {
    fn one() -> Self {
        Self { a: Rat::one(), b: Rat::zero() }
    }
}

impl Num for QSqrt3 {
    type FromStrRadixErr = ();
    fn from_str_radix(_s: &str, _radix: u32) -> Result<Self, ()> {
        Err(())
    }
}

impl Coeff for QSqrt3 {
    fn from_i64(v: i64) -> Self {
        Self::rational(rat(v, 1))
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::rational(rat(n, d))
    }

    fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * 3f64.sqrt()
    }

    fn is_exact() -> bool {
        true
    }
}
