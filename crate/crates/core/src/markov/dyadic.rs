use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// An exact dyadic rational `num / 2^exp`.
///
/// Canonical form: `num` is odd, or `num == 0` with `exp == 0`. When `exp == 0`
/// the numerator may be even (plain integers).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    num: BigInt,
    exp: u64,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u64) -> Self {
        let mut d = Self {
            num: num.into(),
            exp,
        };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Self {
        if k >= 0 {
            Self::new(BigInt::one() << k as u64, 0)
        } else {
            Self::new(1, k.unsigned_abs())
        }
    }

    /// `count / 2^log2_total`, the probability of `count` outcomes out of `2^log2_total`.
    pub fn ratio(count: u128, log2_total: u64) -> Self {
        Self::new(BigInt::from(count), log2_total)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self {
            num: self.num.abs(),
            exp: self.exp,
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.num.is_zero() {
            return 0.0;
        }
        let bits = self.num.bits();
        let (mantissa, shift) = if bits > 64 {
            (&self.num >> (bits - 64), bits - 64)
        } else {
            (self.num.clone(), 0)
        };
        let m = mantissa.to_f64().expect("64-bit mantissa fits");
        ldexp(m, shift as i64 - self.exp as i64)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        if self.exp == 0 {
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(self.exp);
        if tz > 0 {
            self.num >>= tz;
            self.exp -= tz;
        }
    }

    fn aligned(a: &Self, b: &Self) -> (BigInt, BigInt, u64) {
        let exp = a.exp.max(b.exp);
        (
            &a.num << (exp - a.exp) as usize,
            &b.num << (exp - b.exp) as usize,
            exp,
        )
    }
}

/// `x * 2^e` without intermediate overflow or premature underflow.
fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return 0.0;
        }
    }
    x * 2f64.powi(e as i32)
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, exp) = Dyadic::aligned(self, rhs);
        Dyadic::new(a + b, exp)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, exp) = Dyadic::aligned(self, rhs);
        Dyadic::new(a - b, exp)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Dyadic> for Dyadic {
    fn sub_assign(&mut self, rhs: &Dyadic) {
        *self = &*self - rhs;
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl<'a> Sum<&'a Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = &'a Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| &acc + x)
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| &acc + &x)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = Dyadic::aligned(self, other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::new(v, 0)
    }
}

/// Lossless `num/2^exp` form.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidArgument(format!("not a dyadic `num/2^exp`: {s}"));
        let (num, exp) = match s.split_once("/2^") {
            Some((n, e)) => (n, e.parse::<u64>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let num = num.trim().parse::<BigInt>().map_err(|_| bad())?;
        Ok(Dyadic::new(num, exp))
    }
}

impl serde::Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Exact integer binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc = acc.div_floor(&BigInt::from(i + 1));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let d = Dyadic::new(12, 4);
        assert_eq!(d.numerator(), &BigInt::from(3));
        assert_eq!(d.exponent(), 2);
        assert_eq!(Dyadic::new(0, 9), Dyadic::zero());
        assert_eq!(Dyadic::new(8, 0).exponent(), 0);
    }

    #[test]
    fn arithmetic_is_exact() {
        let half = Dyadic::pow2(-1);
        let quarter = Dyadic::pow2(-2);
        assert_eq!(&half + &quarter, Dyadic::new(3, 2));
        assert_eq!(&half - &half, Dyadic::zero());
        assert_eq!(&half * &quarter, Dyadic::pow2(-3));
        assert!(quarter < half);
        assert_eq!((&quarter - &half).abs(), quarter);
        assert_eq!(Dyadic::pow2(3), Dyadic::from(8));
    }

    #[test]
    fn float_conversion_handles_extremes() {
        assert_eq!(Dyadic::new(3, 2).to_f64(), 0.75);
        assert_eq!(Dyadic::pow2(-129).to_f64(), 2f64.powi(-129));
        assert_eq!(Dyadic::pow2(-1100).to_f64(), 0.0);
        let big = Dyadic::new(BigInt::from(1) << 300usize, 299);
        assert_eq!(big.to_f64(), 2.0);
    }

    #[test]
    fn display_parse_round_trip() {
        let d = Dyadic::new(-9, 4);
        assert_eq!(d.to_string(), "-9/2^4");
        assert_eq!("-9/2^4".parse::<Dyadic>().unwrap(), d);
        assert_eq!("6/2^4".parse::<Dyadic>().unwrap(), Dyadic::new(3, 3));
        assert!("x/2^1".parse::<Dyadic>().is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(64, 32), "1832624140942590534".parse::<BigInt>().unwrap());
        assert_eq!(binomial(3, 4), BigInt::zero());
    }
}
