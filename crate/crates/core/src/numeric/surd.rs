use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::format_scaled;
use super::{Exact, NumericError, Rational, MAX_RADICAND_BITS};

/// The quadratic irrational `(a + b√d) / c`.
///
/// Always normalized: `d` squarefree and at least 2, `b != 0`, `c > 0`
/// and `gcd(a, b, c) = 1`. Rational values cannot be represented.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// Trial divisors tried when certifying a squarefree part.
const TRIAL_BOUND: u64 = 1 << 20;

fn cube_exceeds(p: u64, n: &BigUint) -> bool {
    match n.to_u128() {
        Some(v) => (p as u128).pow(3) > v,
        None => false,
    }
}

/// Splits `n = k^2 * m` with `m` squarefree. Small primes are removed by
/// trial division; the cofactor left over must be 1, a perfect square, or
/// smaller than the cube of the next trial divisor (so it has at most two
/// prime factors and is squarefree unless it is a square).
pub(crate) fn squarefree_split(n: &BigInt) -> Result<(BigInt, BigInt), NumericError> {
    let too_large = || NumericError::RadicandTooLarge(n.to_string());
    if n.is_negative() || n.bits() > MAX_RADICAND_BITS {
        return Err(too_large());
    }
    let mut rem: BigUint = n.magnitude().clone();
    if rem.is_zero() {
        return Ok((BigInt::one(), BigInt::zero()));
    }
    let mut root = BigUint::one();
    let mut free = BigUint::one();
    let mut p: u64 = 2;
    let mut steps: u32 = 0;
    while !cube_exceeds(p, &rem) && p <= TRIAL_BOUND {
        steps += 1;
        if steps % 256 == 0 {
            let r = rem.sqrt();
            if &r * &r == rem {
                break;
            }
        }
        if (&rem % p).is_zero() {
            let mut e = 0u32;
            while (&rem % p).is_zero() {
                rem /= p;
                e += 1;
            }
            root *= BigUint::from(p).pow(e / 2);
            if e % 2 == 1 {
                free *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = rem.sqrt();
    if &r * &r == rem {
        root *= r;
    } else if cube_exceeds(p, &rem) {
        free *= rem;
    } else {
        return Err(too_large());
    }
    Ok((BigInt::from(root), BigInt::from(free)))
}

impl QuadraticSurd {
    /// Builds `(a + b√d) / c`, normalizing the radicand and the common
    /// factor. Fails when the value is rational.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, NumericError> {
        let (a, mut b, c, d) = (a.into(), b.into(), c.into(), d.into());
        if c.is_zero() {
            return Err(NumericError::ZeroDenominator);
        }
        if d.is_negative() {
            return Err(NumericError::OutOfRange {
                what: "radicand",
                value: d.to_string(),
            });
        }
        let (k, free) = squarefree_split(&d)?;
        if free <= BigInt::one() {
            return Err(NumericError::NotIrrational);
        }
        b *= k;
        if b.is_zero() {
            return Err(NumericError::NotIrrational);
        }
        Ok(Self::normalized(a, b, c, free))
    }

    /// Normalizes sign and common factor; `d` must already be squarefree
    /// and `b` nonzero.
    fn normalized(mut a: BigInt, mut b: BigInt, mut c: BigInt, d: BigInt) -> Self {
        debug_assert!(!b.is_zero() && !c.is_zero());
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        QuadraticSurd { a, b, c, d }
    }

    /// Builds `(a + b√d) / c` for squarefree `d`; returns a rational when
    /// `b = 0`.
    pub(crate) fn exact_from_parts(a: BigInt, b: BigInt, c: BigInt, d: &BigInt) -> Exact {
        if b.is_zero() {
            Exact::Rational(Rational::new(a, c).expect("nonzero denominator"))
        } else {
            Exact::Surd(Self::normalized(a, b, c, d.clone()))
        }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn to_f64(&self) -> f64 {
        let a = Rational::new(self.a.clone(), self.c.clone()).unwrap().to_f64();
        let b = Rational::new(self.b.clone(), self.c.clone()).unwrap().to_f64();
        a + b * self.d.to_f64().unwrap_or(f64::INFINITY).sqrt()
    }

    /// `floor(b√d)`; `b√d` is never an integer.
    fn floor_b_sqrt_d(&self) -> BigInt {
        let n = (&self.b * &self.b * &self.d).magnitude().sqrt();
        let n = BigInt::from_biguint(Sign::Plus, n);
        if self.b.is_positive() {
            n
        } else {
            -n - 1
        }
    }

    /// Decimal expansion truncated toward zero after `digits` places.
    pub fn to_decimal_truncated(&self, digits: usize) -> String {
        let neg = !self.is_positive();
        let magnitude = if neg { self.neg() } else { self.clone() };
        let scale = Rational::from_integer(BigInt::from(10u8).pow(digits as u32));
        let q = magnitude.mul_rational(&scale).floor();
        format_scaled(neg, q.magnitude(), digits)
    }

    pub fn floor(&self) -> BigInt {
        (&self.a + self.floor_b_sqrt_d()).div_floor(&self.c)
    }

    pub fn fract(&self) -> QuadraticSurd {
        self.add_rational(&Rational::from_integer(-self.floor()))
    }

    pub fn is_positive(&self) -> bool {
        self.cmp_rational(&Rational::zero()) == Ordering::Greater
    }

    /// Exact comparison against a rational.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        // sign((a q - p c) + b q √d), with c, q > 0
        let p = r.numer();
        let q = r.denom();
        let lhs = &self.a * q - p * &self.c;
        let rhs = &self.b * q;
        sign_of_sum_with_root(&lhs, &rhs, &self.d)
    }

    /// Exact comparison against another surd.
    pub fn cmp_surd(&self, other: &QuadraticSurd) -> Ordering {
        if self.d == other.d {
            // (a1 c2 - a2 c1) + (b1 c2 - b2 c1)√d
            let lhs = &self.a * &other.c - &other.a * &self.c;
            let rhs = &self.b * &other.c - &other.b * &self.c;
            return sign_of_sum_with_root(&lhs, &rhs, &self.d);
        }
        // Different radicands: compare through a rational separator found by
        // bisection on the floors of scaled values.
        let mut scale = BigInt::one();
        loop {
            let s = Rational::from_integer(scale.clone());
            let x = self.mul_rational(&s).floor();
            let y = other.mul_rational(&s).floor();
            match x.cmp(&y) {
                Ordering::Equal => scale <<= 8,
                ord => return ord,
            }
        }
    }

    pub fn neg(&self) -> QuadraticSurd {
        QuadraticSurd {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn conjugate(&self) -> QuadraticSurd {
        QuadraticSurd {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn add_rational(&self, r: &Rational) -> QuadraticSurd {
        let (p, q) = (r.numer(), r.denom());
        Self::normalized(
            &self.a * q + p * &self.c,
            &self.b * q,
            &self.c * q,
            self.d.clone(),
        )
    }

    /// Product with a rational; zero yields zero.
    pub fn mul_rational(&self, r: &Rational) -> Exact {
        let (p, q) = (r.numer(), r.denom());
        Self::exact_from_parts(&self.a * p, &self.b * p, &self.c * q, &self.d)
    }

    pub fn recip(&self) -> QuadraticSurd {
        // c / (a + b√d) = c (a - b√d) / (a² - b² d); the norm is nonzero.
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        Self::normalized(&self.c * &self.a, -(&self.c * &self.b), norm, self.d.clone())
    }

    /// `(p x + q) / (r x + s)` for integers; rational results occur only
    /// for singular matrices.
    pub fn mobius(&self, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) -> Exact {
        // numerator (p a + q c) + p b √d, denominator (r a + s c) + r b √d
        let (na, nb) = (p * &self.a + q * &self.c, p * &self.b);
        let (da, db) = (r * &self.a + s * &self.c, r * &self.b);
        divide_root_pairs(&na, &nb, &da, &db, &self.d)
    }
}

/// `(na + nb√d) / (da + db√d)` with the denominator nonzero.
pub(crate) fn divide_root_pairs(
    na: &BigInt,
    nb: &BigInt,
    da: &BigInt,
    db: &BigInt,
    d: &BigInt,
) -> Exact {
    let norm = da * da - db * db * d;
    let a = na * da - nb * db * d;
    let b = nb * da - na * db;
    QuadraticSurd::exact_from_parts(a, b, norm, d)
}

/// Sign of `x + y√d` for squarefree `d >= 2`.
pub(crate) fn sign_of_sum_with_root(x: &BigInt, y: &BigInt, d: &BigInt) -> Ordering {
    let sx = x.sign();
    let sy = y.sign();
    let to_ord = |s: Sign| match s {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    };
    if sy == Sign::NoSign {
        return to_ord(sx);
    }
    if sx == Sign::NoSign || sx == sy {
        return to_ord(sy);
    }
    // Opposite signs: compare x² with y² d, never equal for irrational √d.
    let x2 = x * x;
    let y2d = y * y * d;
    match x2.cmp(&y2d) {
        Ordering::Greater => to_ord(sx),
        Ordering::Less => to_ord(sy),
        Ordering::Equal => Ordering::Equal,
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(
            f,
            "({}{}{}√{})/{}",
            self.a,
            sign,
            self.b.magnitude(),
            self.d,
            self.c
        )
    }
}

impl fmt::Debug for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QuadraticSurd {
    type Err = NumericError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.parse::<Exact>()? {
            Exact::Surd(x) => Ok(x),
            Exact::Rational(_) => Err(NumericError::NotIrrational),
        }
    }
}

impl Serialize for QuadraticSurd {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadraticSurd {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surd(a: i64, b: i64, c: i64, d: i64) -> QuadraticSurd {
        QuadraticSurd::new(a, b, c, d).unwrap()
    }

    #[test]
    fn decimal_digits() {
        assert_eq!(surd(0, 1, 1, 2).to_decimal_truncated(10), "1.4142135623");
        assert_eq!(surd(-1, 1, 2, 5).to_decimal_truncated(8), "0.61803398");
        assert_eq!(surd(1, -1, 2, 5).to_decimal_truncated(8), "-0.61803398");
        assert_eq!(surd(-3, 1, 1, 2).to_decimal_truncated(3), "-1.585");
        assert_eq!(surd(0, 1, 1, 2).to_decimal_truncated(0), "1");
    }

    #[test]
    fn squarefree_split_cases() {
        let split = |n: u128| {
            let (k, m) = squarefree_split(&BigInt::from(n)).unwrap();
            (k.to_u128().unwrap(), m.to_u128().unwrap())
        };
        assert_eq!(split(8), (2, 2));
        assert_eq!(split(12), (2, 3));
        assert_eq!(split(49), (7, 1));
        assert_eq!(split(2 * 1_000_003 * 1_000_003), (1_000_003, 2));
        assert_eq!(split(999_999_937 * 3), (1, 999_999_937 * 3));
        assert_eq!(split(1), (1, 1));
        assert_eq!(split(0), (1, 0));
        // 2^40 * 3 * 10007^2 has a tiny cofactor after trial division
        assert_eq!(split((1u128 << 40) * 3 * 10_007 * 10_007), ((1 << 20) * 10_007, 3));
        // product of three primes above the trial bound cannot be certified
        let p: u128 = 1_048_583;
        assert!(squarefree_split(&BigInt::from(p * p * 1_048_589 * 1_048_601)).is_err());
    }

    #[test]
    fn normalization() {
        let x = surd(2, 2, 4, 8); // (2 + 4√2)/4 = (1 + 2√2)/2
        assert_eq!((x.a(), x.b(), x.c(), x.d()), (&1.into(), &2.into(), &2.into(), &2.into()));
        let y = surd(1, 1, -2, 5);
        assert_eq!(y, surd(-1, -1, 2, 5));
        assert_eq!(QuadraticSurd::new(1, 1, 1, 9), Err(NumericError::NotIrrational));
        assert_eq!(QuadraticSurd::new(1, 0, 1, 2), Err(NumericError::NotIrrational));
        assert!(QuadraticSurd::new(1, 1, 0, 2).is_err());
    }

    #[test]
    fn floor_and_compare() {
        let r2m1 = surd(-1, 1, 1, 2);
        assert_eq!(r2m1.floor(), BigInt::zero());
        assert_eq!(surd(1, -1, 1, 2).floor(), BigInt::from(-1)); // 1 - √2
        assert_eq!(surd(0, 1, 2, 2).floor(), BigInt::zero());
        assert_eq!(r2m1.cmp_rational(&Rational::frac(41, 100)), Ordering::Greater);
        assert_eq!(r2m1.cmp_rational(&Rational::frac(42, 100)), Ordering::Less);
        assert_eq!(surd(0, 1, 1, 2).cmp_surd(&surd(0, 1, 1, 3)), Ordering::Less);
    }

    #[test]
    fn reciprocal_of_silver_conjugate() {
        // 1/(√2 - 1) = √2 + 1
        assert_eq!(surd(-1, 1, 1, 2).recip(), surd(1, 1, 1, 2));
    }

    #[test]
    fn display_round_trip() {
        let x = surd(-1, 1, 2, 5);
        assert_eq!(x.to_string(), "(-1+1√5)/2");
        assert_eq!(x.to_string().parse::<QuadraticSurd>().unwrap(), x);
        let y = surd(1, -3, 4, 7);
        assert_eq!(y.to_string(), "(1-3√7)/4");
        assert_eq!(y.to_string().parse::<QuadraticSurd>().unwrap(), y);
    }
}
