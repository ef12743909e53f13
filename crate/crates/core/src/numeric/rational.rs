use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_err, NumericError};

/// Longest textual number the parsers accept.
pub(crate) const MAX_LITERAL_LEN: usize = 4096;

/// Arbitrary-precision fraction kept in lowest terms with a positive
/// denominator, so structural and numeric equality coincide.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, NumericError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(NumericError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    /// Panics on a zero denominator; for literals in code and tests.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Self::new(numer, denom).expect("nonzero denominator")
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// `|a| + |b|` for `a/b` in lowest terms.
    pub fn height(&self) -> BigUint {
        self.numer().magnitude() + self.denom().magnitude()
    }

    /// True when the denominator is a power of two.
    pub fn is_dyadic(&self) -> bool {
        let d = self.denom().magnitude();
        d.count_ones() == 1
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    /// `self - floor(self)`, always in `[0, 1)`.
    pub fn fract(&self) -> Self {
        self - &Rational::from_integer(self.floor())
    }

    /// `2^exp` for any integer exponent.
    pub fn pow2(exp: i64) -> Self {
        let p = BigInt::one() << exp.unsigned_abs();
        if exp >= 0 {
            Rational::from_integer(p)
        } else {
            Rational(BigRational::new_raw(BigInt::one(), p))
        }
    }

    /// Exact scaling by `2^exp`.
    pub fn mul_pow2(&self, exp: i64) -> Self {
        let shift = exp.unsigned_abs();
        if exp >= 0 {
            Rational(BigRational::new(self.numer() << shift, self.denom().clone()))
        } else {
            Rational(BigRational::new(self.numer().clone(), self.denom() << shift))
        }
    }

    /// Stern–Brocot mediant `(a + c) / (b + d)`.
    pub fn mediant(&self, other: &Self) -> Self {
        Rational(BigRational::new(
            self.numer() + other.numer(),
            self.denom() + other.denom(),
        ))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // Ratios whose parts overflow f64 individually.
            let shift = self
                .numer()
                .bits()
                .max(self.denom().bits())
                .saturating_sub(1000);
            let n = (self.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (self.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            n / d
        })
    }

    /// Decimal expansion truncated toward zero after `digits` places.
    pub fn to_decimal_truncated(&self, digits: usize) -> String {
        let scaled = self.numer().magnitude() * BigUint::from(10u8).pow(digits as u32);
        format_scaled(self.is_negative(), &(scaled / self.denom().magnitude()), digits)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big(self) -> BigRational {
        self.0
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational(r)
    }

    pub fn min_of<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max_of<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

/// `a ± b` without the gcd normalization when it is known to be a no-op:
/// one side an integer, or both sides dyadic. Huge dyadic values (such as
/// `1 - 4⁻ⁿ`) would otherwise pay for a quadratic gcd.
fn add_signed(a: &Rational, b: &Rational, subtract: bool) -> Rational {
    let bn = if subtract { -b.numer() } else { b.numer().clone() };
    let (ad, bd) = (a.denom(), b.denom());
    if bd.is_one() {
        return Rational(BigRational::new_raw(a.numer() + bn * ad, ad.clone()));
    }
    if ad.is_one() {
        return Rational(BigRational::new_raw(a.numer() * bd + bn, bd.clone()));
    }
    if a.is_dyadic() && b.is_dyadic() {
        let ka = ad.trailing_zeros().unwrap_or(0);
        let kb = bd.trailing_zeros().unwrap_or(0);
        let k = ka.max(kb);
        let n: BigInt = (a.numer() << (k - ka)) + (bn << (k - kb));
        if n.is_zero() {
            return Rational::zero();
        }
        let t = n.trailing_zeros().unwrap_or(0).min(k);
        return Rational(BigRational::new_raw(n >> t, BigInt::one() << (k - t)));
    }
    if subtract {
        Rational(&a.0 - &b.0)
    } else {
        Rational(&a.0 + &b.0)
    }
}

macro_rules! additive_binop {
    ($trait:ident, $method:ident, $subtract:expr) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                add_signed(self, rhs, $subtract)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                add_signed(&self, &rhs, $subtract)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                add_signed(&self, rhs, $subtract)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                add_signed(self, &rhs, $subtract)
            }
        }
    };
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

additive_binop!(Add, add, false);
additive_binop!(Sub, sub, true);
forward_binop!(Mul, mul);
// Division by zero panics, as for the underlying ratio type.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders `q / 10^digits` with an optional minus sign.
pub(crate) fn format_scaled(neg: bool, q: &BigUint, digits: usize) -> String {
    let mut s = q.to_string();
    if s.len() <= digits {
        s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
    }
    let (int_part, frac_part) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

fn parse_digits(s: &str, whole: &str) -> Result<BigUint, NumericError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(whole, "expected decimal digits"));
    }
    BigUint::from_str(s).map_err(|_| parse_err(whole, "expected decimal digits"))
}

fn split_sign(s: &str) -> (bool, &str) {
    if let Some(rest) = s.strip_prefix('-') {
        (true, rest)
    } else if let Some(rest) = s.strip_prefix('+') {
        (false, rest)
    } else {
        (false, s)
    }
}

/// Accepts `p`, `p/q` and finite decimals such as `-2.5`.
impl FromStr for Rational {
    type Err = NumericError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s = input.trim();
        if s.len() > MAX_LITERAL_LEN {
            return Err(parse_err(input, "literal too long"));
        }
        let (neg, body) = split_sign(s);
        let signed = |m: BigUint| BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, m);
        if let Some((p, q)) = body.split_once('/') {
            let num = parse_digits(p.trim(), input)?;
            let den = parse_digits(q.trim(), input)?;
            return Rational::new(signed(num), BigInt::from(den));
        }
        if let Some((int_part, frac_part)) = body.split_once('.') {
            if int_part.is_empty() && frac_part.is_empty() {
                return Err(parse_err(input, "empty decimal"));
            }
            let int_val = if int_part.is_empty() {
                BigUint::zero()
            } else {
                parse_digits(int_part, input)?
            };
            let (frac_val, scale) = if frac_part.is_empty() {
                (BigUint::zero(), BigUint::one())
            } else {
                (
                    parse_digits(frac_part, input)?,
                    BigUint::from(10u8).pow(frac_part.len() as u32),
                )
            };
            let num = int_val * &scale + frac_val;
            return Rational::new(signed(num), BigInt::from(scale));
        }
        Ok(Rational::from_integer(signed(parse_digits(body, input)?)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.is_integer() && self.numer() == &BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Rational::from(*other)))
    }
}
