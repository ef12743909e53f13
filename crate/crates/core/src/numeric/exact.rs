use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::MAX_LITERAL_LEN;
use super::surd::squarefree_split;
use super::{parse_err, NumericError, QuadraticSurd, Rational};

/// An exactly representable real: a rational or a quadratic irrational.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Exact {
    Rational(Rational),
    Surd(QuadraticSurd),
}

impl Exact {
    pub fn to_f64(&self) -> f64 {
        match self {
            Exact::Rational(r) => r.to_f64(),
            Exact::Surd(s) => s.to_f64(),
        }
    }

    /// Decimal expansion truncated toward zero after `digits` places.
    pub fn to_decimal_truncated(&self, digits: usize) -> String {
        match self {
            Exact::Rational(r) => r.to_decimal_truncated(digits),
            Exact::Surd(s) => s.to_decimal_truncated(digits),
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        match self {
            Exact::Rational(x) => x.cmp(r),
            Exact::Surd(s) => s.cmp_rational(r),
        }
    }

    pub fn add_rational(&self, r: &Rational) -> Exact {
        match self {
            Exact::Rational(x) => Exact::Rational(x + r),
            Exact::Surd(s) => Exact::Surd(s.add_rational(r)),
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> Exact {
        match self {
            Exact::Rational(x) => Exact::Rational(x * r),
            Exact::Surd(s) => s.mul_rational(r),
        }
    }

    pub fn neg(&self) -> Exact {
        match self {
            Exact::Rational(x) => Exact::Rational(-x),
            Exact::Surd(s) => Exact::Surd(s.neg()),
        }
    }

    /// `1 / self`, or `None` at zero.
    pub fn recip(&self) -> Option<Exact> {
        match self {
            Exact::Rational(x) => x.recip().map(Exact::Rational),
            Exact::Surd(s) => Some(Exact::Surd(s.recip())),
        }
    }

    pub fn floor(&self) -> BigInt {
        match self {
            Exact::Rational(x) => x.floor(),
            Exact::Surd(s) => s.floor(),
        }
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Exact {
        self.neg().add_rational(&Rational::one())
    }

    /// `(floor(1/x), 1/x - floor(1/x))` for `0 < x <= 1`.
    pub fn floor_recip(&self) -> Result<(BigInt, Exact), NumericError> {
        if self.cmp_rational(&Rational::zero()) != Ordering::Greater
            || self.cmp_rational(&Rational::one()) == Ordering::Greater
        {
            return Err(NumericError::OutOfRange {
                what: "floor_recip argument (expected 0 < x <= 1)",
                value: self.to_string(),
            });
        }
        let inv = self.recip().expect("positive");
        let n = inv.floor();
        let frac = inv.add_rational(&Rational::from_integer(-n.clone()));
        Ok((n, frac))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Exact::Rational(r) => Some(r),
            Exact::Surd(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Exact::Rational(_))
    }
}

impl From<Rational> for Exact {
    fn from(r: Rational) -> Self {
        Exact::Rational(r)
    }
}

impl From<QuadraticSurd> for Exact {
    fn from(s: QuadraticSurd) -> Self {
        Exact::Surd(s)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exact::Rational(r) => fmt::Display::fmt(r, f),
            Exact::Surd(s) => fmt::Display::fmt(s, f),
        }
    }
}

struct Term {
    coef: BigInt,
    radicand: Option<BigUint>,
}

/// Parses one signed summand: an integer, `k*sqrt(d)`, `k√d`, `sqrt(d)`.
fn parse_term(raw: &str, whole: &str) -> Result<Term, NumericError> {
    let t = raw.trim();
    if t.is_empty() {
        return Err(parse_err(whole, "empty term"));
    }
    let root_at = t.find("sqrt(").or_else(|| t.find('√'));
    let Some(pos) = root_at else {
        let v: Rational = t.parse()?;
        if !v.is_integer() {
            return Err(parse_err(whole, "summands must be integers or integer multiples of a root"));
        }
        return Ok(Term {
            coef: v.numer().clone(),
            radicand: None,
        });
    };
    let (coef_part, root_part) = t.split_at(pos);
    let coef_part = coef_part.trim().trim_end_matches('*').trim();
    let coef = if coef_part.is_empty() || coef_part == "+" {
        BigInt::one()
    } else if coef_part == "-" {
        -BigInt::one()
    } else {
        let v: Rational = coef_part.parse()?;
        if !v.is_integer() {
            return Err(parse_err(whole, "root coefficient must be an integer"));
        }
        v.numer().clone()
    };
    let digits = if let Some(rest) = root_part.strip_prefix("sqrt(") {
        rest.strip_suffix(')')
            .ok_or_else(|| parse_err(whole, "unclosed sqrt("))?
    } else {
        root_part.trim_start_matches('√')
    };
    let digits = digits.trim();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(whole, "radicand must be a nonnegative integer"));
    }
    let radicand: BigUint = digits.parse().map_err(|_| parse_err(whole, "bad radicand"))?;
    Ok(Term {
        coef,
        radicand: Some(radicand),
    })
}

/// Splits `s` at top-level `+`/`-` operators, keeping the sign with the
/// following term.
fn split_terms(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let mut prev_operand = false;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if (ch == '+' || ch == '-') && depth == 0 && prev_operand {
            out.push(std::mem::take(&mut cur));
        }
        if !ch.is_whitespace() {
            prev_operand = !matches!(ch, '+' | '-' | '*');
        }
        cur.push(ch);
    }
    out.push(cur);
    out
}

fn parse_sum(inner: &str, whole: &str) -> Result<(BigInt, BigInt, Option<BigInt>), NumericError> {
    let mut a = BigInt::zero();
    let mut b = BigInt::zero();
    let mut radicand: Option<BigInt> = None;
    for raw in split_terms(inner) {
        let term = parse_term(&raw, whole)?;
        match term.radicand {
            None => a += term.coef,
            Some(r) => {
                let (k, free) = squarefree_split(&BigInt::from(r))?;
                let scaled = term.coef * k;
                if free.is_zero() {
                    continue;
                }
                if free.is_one() {
                    a += scaled;
                    continue;
                }
                match &radicand {
                    Some(prev) if *prev != free => {
                        return Err(parse_err(whole, "mixed radicands are not quadratic"))
                    }
                    _ => radicand = Some(free),
                }
                b += scaled;
            }
        }
    }
    Ok((a, b, radicand))
}

/// Accepts rationals (`p/q`, integers, finite decimals) and quadratic
/// surds such as `(a+b*sqrt(d))/c`, `(a+b√d)/c`, `sqrt(2)-1`, `sqrt(2)/2`.
impl FromStr for Exact {
    type Err = NumericError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        if input.len() > MAX_LITERAL_LEN {
            return Err(parse_err(input, "literal too long"));
        }
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let s = compact.as_str();
        if !s.contains("sqrt") && !s.contains('√') {
            return s.parse::<Rational>().map(Exact::Rational);
        }
        // Optional whole-expression denominator.
        let (numer_text, denom) = match s.rfind('/') {
            Some(pos) if !s[pos + 1..].contains(')') => {
                let d: Rational = s[pos + 1..].parse()?;
                if !d.is_integer() || !d.is_positive() {
                    return Err(parse_err(input, "denominator must be a positive integer"));
                }
                (s[..pos].trim(), d.numer().clone())
            }
            _ => (s, BigInt::one()),
        };
        let inner = if numer_text.starts_with('(') && numer_text.ends_with(')') && {
            // the outer parentheses must enclose the whole numerator
            let mut depth = 0i32;
            let body = &numer_text[..numer_text.len() - 1];
            body.chars().enumerate().all(|(i, ch)| {
                match ch {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    _ => {}
                }
                i == 0 || depth > 0
            })
        } {
            &numer_text[1..numer_text.len() - 1]
        } else {
            if denom != BigInt::one() && split_terms(numer_text).len() > 1 {
                return Err(parse_err(input, "parenthesize a multi-term numerator"));
            }
            numer_text
        };
        let (a, b, radicand) = parse_sum(inner, input)?;
        match radicand {
            Some(d) if !b.is_zero() => Ok(Exact::Surd(QuadraticSurd::new(a, b, denom, d)?)),
            _ => Ok(Exact::Rational(Rational::new(a, denom)?)),
        }
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
