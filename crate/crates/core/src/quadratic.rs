//! Exact arithmetic in the field of numbers `a + b√5` with rational `a`, `b`.
//!
//! Signs are decided without any floating point: when `a` and `b` disagree in
//! sign the magnitudes are compared by squaring, `a² ⋚ 5b²`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadSqrt5 {
    rational: BigRational,
    surd: BigRational,
}

impl QuadSqrt5 {
    pub fn new(rational: BigRational, surd: BigRational) -> Self {
        QuadSqrt5 { rational, surd }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        QuadSqrt5 {
            rational: q,
            surd: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// `√5`
    pub fn sqrt5() -> Self {
        QuadSqrt5 {
            rational: BigRational::zero(),
            surd: BigRational::one(),
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    /// Exact sign of `a + b√5`.
    pub fn signum(&self) -> Ordering {
        let a = self.rational.cmp(&BigRational::zero());
        let b = self.surd.cmp(&BigRational::zero());
        match (a, b) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            (a_sign, _) => {
                let a2 = &self.rational * &self.rational;
                let b2 = &self.surd * &self.surd * BigRational::from_integer(5.into());
                match a2.cmp(&b2) {
                    Ordering::Greater => a_sign,
                    Ordering::Less => a_sign.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    /// `a - b√5`
    pub fn conjugate(&self) -> Self {
        QuadSqrt5 {
            rational: self.rational.clone(),
            surd: -self.surd.clone(),
        }
    }

    /// `a² - 5b²`, the field norm.
    pub fn norm(&self) -> BigRational {
        &self.rational * &self.rational - &self.surd * &self.surd * BigRational::from_integer(5.into())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(QuadSqrt5 {
            rational: &self.rational / &n,
            surd: -&self.surd / &n,
        })
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        // rough guess from an integer square root, then exact correction
        let guess = self.approx_scaled(0);
        let mut n = guess;
        while self.cmp(&Self::from_bigint(n.clone())) == Ordering::Less {
            n -= 1;
        }
        while self.cmp(&Self::from_bigint(&n + 1)) != Ordering::Less {
            n += 1;
        }
        n
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> BigInt {
        -(-self.clone()).floor()
    }

    fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    /// An integer within a couple of units of `value · 10^digits`, built from
    /// integer square roots only.
    fn approx_scaled(&self, digits: u32) -> BigInt {
        let scale = BigInt::from(10u32).pow(digits);
        // √5 · 10^(digits+4), truncated
        let guard = BigInt::from(10u32).pow(digits + 4);
        let sqrt5 = (BigInt::from(5) * &guard * &guard).sqrt();
        let a = &self.rational;
        let b = &self.surd;
        let num = a.numer() * b.denom() * &guard * &scale + b.numer() * a.denom() * &sqrt5 * &scale;
        let den = a.denom() * b.denom() * &guard;
        num.div_floor(&den)
    }

    /// Decimal rendering truncated toward negative infinity at `digits`
    /// fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = (self.clone() * Self::from_bigint(scale.clone())).floor();
        let negative = scaled.is_negative();
        let magnitude = scaled.abs();
        let (int, frac) = magnitude.div_rem(&scale);
        let sign = if negative { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64().unwrap_or(f64::NAN) + self.surd.to_f64().unwrap_or(f64::NAN) * 5f64.sqrt()
    }
}

impl Ord for QuadSqrt5 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

impl PartialOrd for QuadSqrt5 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for QuadSqrt5 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        QuadSqrt5 {
            rational: self.rational + rhs.rational,
            surd: self.surd + rhs.surd,
        }
    }
}

impl Sub for QuadSqrt5 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        QuadSqrt5 {
            rational: self.rational - rhs.rational,
            surd: self.surd - rhs.surd,
        }
    }
}

impl Mul for QuadSqrt5 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let five = BigRational::from_integer(5.into());
        QuadSqrt5 {
            rational: &self.rational * &rhs.rational + &self.surd * &rhs.surd * five,
            surd: &self.rational * &rhs.surd + &self.surd * &rhs.rational,
        }
    }
}

impl Div for QuadSqrt5 {
    type Output = Self;
    /// Panics on division by zero.
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.recip().expect("division by zero in Q(sqrt 5)");
        Mul::mul(self, inv)
    }
}

impl Neg for QuadSqrt5 {
    type Output = Self;
    fn neg(self) -> Self {
        QuadSqrt5 {
            rational: -self.rational,
            surd: -self.surd,
        }
    }
}

impl From<i64> for QuadSqrt5 {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for QuadSqrt5 {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl fmt::Debug for QuadSqrt5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}·√5)", self.rational, self.surd)
    }
}

impl fmt::Display for QuadSqrt5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.rational)
        } else if self.rational.is_zero() {
            write!(f, "{}√5", self.surd)
        } else {
            write!(f, "{} + {}√5", self.rational, self.surd)
        }
    }
}
