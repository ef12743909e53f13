use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{NumericError, Rational};

/// Longest preperiod plus period produced by long division.
pub const MAX_BINARY_BITS: usize = 1 << 24;

/// Binary expansion of a number in `[0, 1]`: an integer part, a finite
/// preperiod and a repeating period.
///
/// Canonical: dyadic values terminate (empty period, never a run of
/// repeating ones), the preperiod is as short as possible and the period
/// is primitive.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PeriodicBinary {
    integer_part: u8,
    preperiod: Vec<bool>,
    period: Vec<bool>,
}

impl PeriodicBinary {
    /// Builds the canonical expansion equal to the given digits.
    pub fn new(integer_part: u8, preperiod: Vec<bool>, period: Vec<bool>) -> Result<Self, NumericError> {
        let raw = PeriodicBinary {
            integer_part,
            preperiod,
            period,
        };
        let value = raw.value();
        Self::of_rational(&value)
    }

    pub fn integer_part(&self) -> u8 {
        self.integer_part
    }

    pub fn preperiod(&self) -> &[bool] {
        &self.preperiod
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    pub fn is_dyadic(&self) -> bool {
        self.period.is_empty()
    }

    /// Long division in base 2.
    pub fn of_rational(x: &Rational) -> Result<Self, NumericError> {
        if x.is_negative() || *x > 1 {
            return Err(NumericError::OutOfRange {
                what: "binary expansion argument",
                value: x.to_string(),
            });
        }
        if x.is_one() {
            return Ok(PeriodicBinary {
                integer_part: 1,
                preperiod: Vec::new(),
                period: Vec::new(),
            });
        }
        // For p/q in lowest terms the preperiod has length v2(q) and the
        // period returns to the remainder reached at that point.
        let q = x.denom().clone();
        let pre_len = q.trailing_zeros().unwrap_or(0) as usize;
        if pre_len > MAX_BINARY_BITS {
            return Err(NumericError::ExpansionTooLong(MAX_BINARY_BITS));
        }
        let mut r = x.numer().clone();
        let next_bit = |r: &mut BigInt| {
            *r <<= 1;
            let bit = *r >= q;
            if bit {
                *r -= &q;
            }
            bit
        };
        let preperiod: Vec<bool> = (0..pre_len).map(|_| next_bit(&mut r)).collect();
        let mut period = Vec::new();
        if !r.is_zero() {
            let start = r.clone();
            loop {
                if preperiod.len() + period.len() >= MAX_BINARY_BITS {
                    return Err(NumericError::ExpansionTooLong(MAX_BINARY_BITS));
                }
                period.push(next_bit(&mut r));
                if r == start {
                    break;
                }
            }
        }
        Ok(PeriodicBinary {
            integer_part: 0,
            preperiod,
            period,
        })
    }

    /// Exact value by geometric summation of the period.
    pub fn value(&self) -> Rational {
        let pre = bits_to_int(&self.preperiod);
        let p = self.preperiod.len() as i64;
        let mut v = Rational::from_integer(self.integer_part as i64) + Rational::from_integer(pre).mul_pow2(-p);
        if !self.period.is_empty() {
            let per = bits_to_int(&self.period);
            let cycle = (BigInt::one() << self.period.len()) - 1;
            let tail = Rational::new(per, cycle).expect("nonzero cycle");
            v = v + tail.mul_pow2(-p);
        }
        v
    }

    /// Fractional digits; infinite when periodic.
    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        let tail: Box<dyn Iterator<Item = bool>> = if self.period.is_empty() {
            Box::new(std::iter::empty())
        } else {
            Box::new(self.period.iter().copied().cycle())
        };
        self.preperiod.iter().copied().chain(tail)
    }

    /// Number of zero digits before the first one digit. `None` for 0 and 1.
    pub fn leading_zeros(&self) -> Option<usize> {
        if self.integer_part == 1 {
            return None;
        }
        if let Some(i) = self.preperiod.iter().position(|&b| b) {
            return Some(i);
        }
        self.period
            .iter()
            .position(|&b| b)
            .map(|i| self.preperiod.len() + i)
    }
}

fn bits_to_int(bits: &[bool]) -> BigInt {
    bits.iter().fold(BigInt::zero(), |acc, &b| {
        (acc << 1) + if b { BigInt::one() } else { BigInt::zero() }
    })
}

fn bit_str(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl fmt::Display for PeriodicBinary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.integer_part)?;
        if self.preperiod.is_empty() && self.period.is_empty() {
            return Ok(());
        }
        write!(f, ".{}", bit_str(&self.preperiod))?;
        if !self.period.is_empty() {
            write!(f, "({})", bit_str(&self.period))?;
        }
        Ok(())
    }
}
