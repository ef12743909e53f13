//! Minkowski's question-mark function `?` and its inverse, exact on
//! rationals and quadratic irrationals.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::numeric::{
    ContinuedFraction, Exact, NumericError, PeriodicBinary, QuadraticSurd, Rational,
    MAX_BINARY_BITS, MAX_PARTIAL_QUOTIENT,
};

/// `?(x)` together with its dyadic flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMarkValue {
    pub value: Rational,
    pub is_dyadic: bool,
}

/// Partial quotients `a1, ..., ak` of `x = [0; a1, ..., ak]` in `[0, 1]`.
/// `1` is written `[0; 1]` and `0` has no quotients.
pub(crate) fn unit_quotients(x: &Rational) -> Result<Vec<u64>, NumericError> {
    check_unit(x)?;
    if x.is_one() {
        return Ok(vec![1]);
    }
    let cf = ContinuedFraction::of_rational(x);
    cf.preperiod()[1..].iter().map(quotient_u64).collect()
}

pub(crate) fn quotient_u64(a: &BigInt) -> Result<u64, NumericError> {
    a.to_u64()
        .filter(|&v| v <= MAX_PARTIAL_QUOTIENT)
        .ok_or_else(|| NumericError::QuotientTooLarge(a.to_string()))
}

fn check_unit(x: &Rational) -> Result<(), NumericError> {
    if x.is_negative() || *x > 1 {
        return Err(NumericError::OutOfRange {
            what: "argument (expected [0, 1])",
            value: x.to_string(),
        });
    }
    Ok(())
}

/// `?(x)` on `[0, 1] ∩ Q`, folding `?(x) = 2^-a (2 - ?({1/x}))` over the
/// continued fraction from its tail.
pub fn qmark_rational(x: &Rational) -> Result<Rational, NumericError> {
    let quotients = unit_quotients(x)?;
    let two = Rational::from(2);
    Ok(quotients.iter().rev().fold(Rational::zero(), |v, &a| {
        (&two - &v).mul_pow2(-(a as i64))
    }))
}

/// `?(x)` for a quadratic irrational in `(0, 1)`, read off from the
/// run-length binary expansion of the eventually periodic continued
/// fraction.
pub fn qmark_surd(x: &QuadraticSurd) -> Result<Rational, NumericError> {
    if x.cmp_rational(&Rational::zero()).is_le() || x.cmp_rational(&Rational::one()).is_ge() {
        return Err(NumericError::OutOfRange {
            what: "surd argument (expected (0, 1))",
            value: x.to_string(),
        });
    }
    let cf = ContinuedFraction::of_surd(x)?;
    let mut pre: Vec<u64> = cf.preperiod()[1..].iter().map(quotient_u64).collect::<Result<_, _>>()?;
    let mut period: Vec<u64> = cf.period().iter().map(quotient_u64).collect::<Result<_, _>>()?;
    if pre.is_empty() {
        pre.push(period[0]);
        period.rotate_left(1);
    }
    if period.len() % 2 == 1 {
        period.extend_from_within(..);
    }
    let mut pre_bits = Vec::new();
    for (t, &a) in pre.iter().enumerate() {
        push_run(&mut pre_bits, t + 1, a)?;
    }
    let mut period_bits = Vec::new();
    for (t, &a) in period.iter().enumerate() {
        push_run(&mut period_bits, pre.len() + t + 1, a)?;
    }
    Ok(PeriodicBinary::new(0, pre_bits, period_bits)?.value())
}

/// Appends the run encoding the `t`-th partial quotient (1-based).
fn push_run(bits: &mut Vec<bool>, t: usize, a: u64) -> Result<(), NumericError> {
    let (bit, len) = if t == 1 { (false, a - 1) } else { (t % 2 == 0, a) };
    let len = len as usize;
    if bits.len() + len > MAX_BINARY_BITS {
        return Err(NumericError::ExpansionTooLong(MAX_BINARY_BITS));
    }
    bits.resize(bits.len() + len, bit);
    Ok(())
}

/// `?` on any exact argument in `[0, 1]`.
pub fn qmark(x: &Exact) -> Result<QMarkValue, NumericError> {
    let value = match x {
        Exact::Rational(r) => qmark_rational(r)?,
        Exact::Surd(s) => qmark_surd(s)?,
    };
    let is_dyadic = value.is_dyadic();
    Ok(QMarkValue { value, is_dyadic })
}

/// Lengths of maximal runs of equal bits, with the bit of the first run.
fn runs(bits: &[bool]) -> Vec<(bool, u64)> {
    let mut out: Vec<(bool, u64)> = Vec::new();
    for &b in bits {
        match out.last_mut() {
            Some((bit, len)) if *bit == b => *len += 1,
            _ => out.push((b, 1)),
        }
    }
    out
}

/// Continued-fraction quotients `a1, a2, ...` encoded by a bit string
/// that starts the expansion.
fn quotients_of_leading_bits(bits: &[bool]) -> Vec<BigInt> {
    let r = runs(bits);
    let mut terms = Vec::with_capacity(r.len() + 1);
    let rest = match r.first() {
        Some(&(false, zeros)) => {
            terms.push(BigInt::from(zeros + 1));
            &r[1..]
        }
        _ => {
            terms.push(BigInt::one());
            &r[..]
        }
    };
    terms.extend(rest.iter().map(|&(_, len)| BigInt::from(len)));
    terms
}

/// Exact `?⁻¹(y)`: rational for dyadic `y`, a quadratic surd otherwise.
pub fn qmark_inverse(y: &Rational) -> Result<Exact, NumericError> {
    check_unit(y)?;
    if y.is_zero() || y.is_one() {
        return Ok(Exact::Rational(y.clone()));
    }
    let b = PeriodicBinary::of_rational(y)?;
    if b.is_dyadic() {
        let mut terms = vec![BigInt::zero()];
        terms.extend(quotients_of_leading_bits(b.preperiod()));
        return ContinuedFraction::new(terms, Vec::new())?.value();
    }
    // Shift the period so that it begins at a run boundary.
    let period = b.period();
    let len = period.len();
    let t = (1..=len)
        .find(|&t| period[t - 1] != period[t % len])
        .expect("period of a non-dyadic expansion has both digits");
    let mut pre_bits = b.preperiod().to_vec();
    pre_bits.extend_from_slice(&period[..t]);
    let mut cycle = period.to_vec();
    cycle.rotate_left(t % len);
    let mut pre_terms = vec![BigInt::zero()];
    pre_terms.extend(quotients_of_leading_bits(&pre_bits));
    let period_terms = runs(&cycle)
        .into_iter()
        .map(|(_, l)| BigInt::from(l))
        .collect();
    ContinuedFraction::new(pre_terms, period_terms)?.value()
}

/// `⌊1 / ?⁻¹(y)⌋` for `0 < y ≤ 1`, read from the leading zeros of the
/// binary expansion of `y`.
pub fn first_partial_quotient_of_inverse(y: &Rational) -> Result<u64, NumericError> {
    check_unit(y)?;
    if y.is_zero() {
        return Err(NumericError::OutOfRange {
            what: "argument (expected (0, 1])",
            value: y.to_string(),
        });
    }
    if y.is_one() {
        return Ok(1);
    }
    let b = PeriodicBinary::of_rational(y)?;
    let zeros = b.leading_zeros().expect("0 < y < 1") as u64;
    // 2^-(z+1) = ?([0; z+1, 1]) = ?([0; z+2])
    let is_power = y.numer().is_one() && y.is_dyadic();
    Ok(if is_power { zeros + 2 } else { zeros + 1 })
}
