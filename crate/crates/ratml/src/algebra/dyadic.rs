//! Exact dyadic rationals `num * 2^exp` with arbitrary-precision numerators.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// An exact dyadic rational. Canonical form: `num` is odd, or `num == 0` and
/// `exp == 0`, so derived equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    num: BigInt,
    exp: i64,
}

impl DyadicRational {
    pub fn new(num: impl Into<BigInt>, exp: i64) -> Self {
        Self::normalize(num.into(), exp)
    }

    pub fn zero() -> Self {
        DyadicRational {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    /// The value `2^exp`.
    pub fn pow2(exp: i64) -> Self {
        DyadicRational {
            num: BigInt::from(1),
            exp,
        }
    }

    fn normalize(mut num: BigInt, mut exp: i64) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let shift = num.trailing_zeros().expect("nonzero");
        if shift > 0 {
            num >>= shift;
            exp += shift as i64;
        }
        DyadicRational { num, exp }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    /// Nearest `f64`; exact whenever numerator and exponent fit the format.
    pub fn to_f64(&self) -> f64 {
        let mut approx = 0.0f64;
        let (sign, digits) = self.num.to_u64_digits();
        for (i, d) in digits.iter().enumerate() {
            approx += (*d as f64) * 2f64.powi(64 * i as i32);
        }
        if sign == num_bigint::Sign::Minus {
            approx = -approx;
        }
        approx * 2f64.powi(self.exp as i32)
    }
}

impl Add for &DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: &DyadicRational) -> DyadicRational {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // Rescale to the smaller exponent so both numerators are integers.
        let exp = self.exp.min(rhs.exp);
        let a = &self.num << (self.exp - exp) as u64;
        let b = &rhs.num << (rhs.exp - exp) as u64;
        DyadicRational::normalize(a + b, exp)
    }
}

impl Sub for &DyadicRational {
    type Output = DyadicRational;

    fn sub(self, rhs: &DyadicRational) -> DyadicRational {
        self + &-rhs
    }
}

impl Mul for &DyadicRational {
    type Output = DyadicRational;

    fn mul(self, rhs: &DyadicRational) -> DyadicRational {
        if self.is_zero() || rhs.is_zero() {
            return DyadicRational::zero();
        }
        // Product of odd numerators is odd; already canonical.
        DyadicRational {
            num: &self.num * &rhs.num,
            exp: self.exp + rhs.exp,
        }
    }
}

impl Neg for &DyadicRational {
    type Output = DyadicRational;

    fn neg(self) -> DyadicRational {
        DyadicRational {
            num: -&self.num,
            exp: self.exp,
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for DyadicRational {
            type Output = DyadicRational;
            fn $method(self, rhs: DyadicRational) -> DyadicRational {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for DyadicRational {
    type Output = DyadicRational;
    fn neg(self) -> DyadicRational {
        -&self
    }
}

impl From<i64> for DyadicRational {
    fn from(value: i64) -> Self {
        Self::new(value, 0)
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else if self.exp >= 0 {
            write!(f, "{}", &self.num << self.exp as u64)
        } else {
            write!(f, "{}/2^{}", self.num, -self.exp)
        }
    }
}

impl fmt::Debug for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}
