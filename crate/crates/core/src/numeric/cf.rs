use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Exact, NumericError, QuadraticSurd, Rational};

/// Longest expansion (preperiod plus period) the Lagrange algorithm will
/// produce before giving up.
pub const MAX_CF_TERMS: usize = 1 << 20;

/// A simple continued fraction `[a0; a1, a2, ...]`, finite or eventually
/// periodic. `a0` may be any integer; later terms are positive.
///
/// Canonical: finite expansions do not end in 1 (except `[1]` itself) and
/// periodic ones keep `a0` in the preperiod, then use the shortest
/// preperiod and a primitive period.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ContinuedFraction {
    preperiod: Vec<BigInt>,
    period: Vec<BigInt>,
}

impl ContinuedFraction {
    /// Builds a continued fraction from arbitrary (valid) terms and returns
    /// its canonical form.
    pub fn new(preperiod: Vec<BigInt>, period: Vec<BigInt>) -> Result<Self, NumericError> {
        if preperiod.is_empty() && period.is_empty() {
            return Err(NumericError::MalformedContinuedFraction("no terms"));
        }
        let all_positive_after_first = preperiod
            .iter()
            .chain(period.iter())
            .skip(1)
            .all(|t| t.is_positive());
        if !all_positive_after_first {
            return Err(NumericError::MalformedContinuedFraction(
                "terms after the first must be positive",
            ));
        }
        if preperiod.is_empty() && period.first().is_some_and(|t| !t.is_positive()) {
            return Err(NumericError::MalformedContinuedFraction(
                "period terms must be positive",
            ));
        }
        let raw = ContinuedFraction { preperiod, period };
        match raw.value()? {
            Exact::Rational(r) => Ok(Self::of_rational(&r)),
            Exact::Surd(s) => Self::of_surd(&s),
        }
    }

    pub fn preperiod(&self) -> &[BigInt] {
        &self.preperiod
    }

    pub fn period(&self) -> &[BigInt] {
        &self.period
    }

    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Euclidean algorithm.
    pub fn of_rational(x: &Rational) -> Self {
        let mut terms = Vec::new();
        let mut p = x.numer().clone();
        let mut q = x.denom().clone();
        while !q.is_zero() {
            let (a, r) = p.div_mod_floor(&q);
            terms.push(a);
            p = q;
            q = r;
        }
        ContinuedFraction {
            preperiod: terms,
            period: Vec::new(),
        }
    }

    /// Lagrange's algorithm on the reduced form `(P + √D) / Q`.
    pub fn of_surd(x: &QuadraticSurd) -> Result<Self, NumericError> {
        let mut disc = x.b() * x.b() * x.d();
        let (mut p, mut q) = if x.b().is_positive() {
            (x.a().clone(), x.c().clone())
        } else {
            (-x.a(), -x.c())
        };
        if !(&disc - &p * &p).is_multiple_of(&q) {
            let scale = q.abs();
            p *= &scale;
            q *= &scale;
            disc *= &scale * &scale;
        }
        let root = disc.sqrt();
        let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
        let mut terms: Vec<BigInt> = Vec::new();
        loop {
            if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
                let period = terms.split_off(start);
                return Ok(ContinuedFraction {
                    preperiod: terms,
                    period,
                });
            }
            if terms.len() >= MAX_CF_TERMS {
                return Err(NumericError::ExpansionTooLong(MAX_CF_TERMS));
            }
            if !terms.is_empty() {
                seen.insert((p.clone(), q.clone()), terms.len());
            }
            let a = if q.is_positive() {
                (&p + &root).div_floor(&q)
            } else {
                -(&p + &root).div_floor(&-&q) - 1
            };
            let p_next = &a * &q - &p;
            let q_next = (&disc - &p_next * &p_next) / &q;
            terms.push(a);
            p = p_next;
            q = q_next;
        }
    }

    /// Infinite (periodic) or finite sequence of all terms.
    pub fn terms(&self) -> impl Iterator<Item = &BigInt> + '_ {
        let tail: Box<dyn Iterator<Item = &BigInt>> = if self.period.is_empty() {
            Box::new(std::iter::empty())
        } else {
            Box::new(self.period.iter().cycle())
        };
        self.preperiod.iter().chain(tail)
    }

    /// Exact value: a rational for finite expansions, a surd otherwise.
    pub fn value(&self) -> Result<Exact, NumericError> {
        if self.period.is_empty() {
            let mut iter = self.preperiod.iter().rev();
            let last = iter
                .next()
                .ok_or(NumericError::MalformedContinuedFraction("no terms"))?;
            let mut v = Rational::from_integer(last.clone());
            for t in iter {
                v = Rational::from_integer(t.clone()) + v.recip().expect("positive tail");
            }
            return Ok(Exact::Rational(v));
        }
        // Purely periodic tail y = M(y) for the period's convergent matrix.
        let m = convergent_matrix(&self.period);
        let (m00, m01, m10, m11) = (&m[0], &m[1], &m[2], &m[3]);
        let delta = (m11 - m00) * (m11 - m00) + BigInt::from(4) * m10 * m01;
        let tail = QuadraticSurd::new(m00 - m11, BigInt::one(), BigInt::from(2) * m10, delta)?;
        if self.preperiod.is_empty() {
            return Ok(Exact::Surd(tail));
        }
        let h = convergent_matrix(&self.preperiod);
        Ok(tail.mobius(&h[0], &h[1], &h[2], &h[3]))
    }
}

/// Product of `[[t, 1], [1, 0]]` over the terms, flattened row-major.
fn convergent_matrix(terms: &[BigInt]) -> [BigInt; 4] {
    let mut m = [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()];
    for t in terms {
        m = [
            &m[0] * t + &m[1],
            m[0].clone(),
            &m[2] * t + &m[3],
            m[2].clone(),
        ];
    }
    m
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.preperiod.iter().map(|t| t.to_string()).collect();
        if !self.period.is_empty() {
            let per: Vec<String> = self.period.iter().map(|t| t.to_string()).collect();
            parts.push(format!("({})", per.join(", ")));
        }
        match parts.split_first() {
            Some((head, rest)) if !rest.is_empty() && !self.preperiod.is_empty() => {
                write!(f, "[{}; {}]", head, rest.join(", "))
            }
            _ => write!(f, "[{}]", parts.join(", ")),
        }
    }
}
