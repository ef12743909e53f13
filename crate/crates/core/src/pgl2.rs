//! The limiting distribution of the reduced random walk for PGL₂(ℤ): the
//! closed-form CDF in terms of `‽`, the boundary one-way reflections, an
//! exact stationarity check and a Kolmogorov–Smirnov distance.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::interrobang::{interro, interro_f64, InterroError};
use crate::numeric::{Exact, Rational};
use crate::walk::EmpiricalCdf;

/// Probability carried by the point `∞`. `F` is continuous with limits 0
/// and 1, so the law of `ζ` has no atom there.
pub const MASS_AT_INFINITY: i64 = 0;

/// Left endpoints of branches 2 through 7; branch `k` covers
/// `[BREAKPOINTS[k-2], BREAKPOINTS[k-1])`.
pub fn breakpoints() -> [Rational; 6] {
    [
        Rational::from(-2),
        Rational::from(-1),
        Rational::frac(-1, 2),
        Rational::zero(),
        Rational::one(),
        Rational::from(2),
    ]
}

/// A point of the extended real line with exact finite part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ExtRational {
    Finite(Rational),
    Infinity,
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => write!(f, "{r}"),
            ExtRational::Infinity => write!(f, "inf"),
        }
    }
}

/// `F(x)` with the branch of the formula that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CdfValue {
    pub value: Rational,
    pub branch: u8,
}

/// Branch (1 to 7) whose half-open interval contains `x`.
pub fn branch_of(x: &Exact) -> u8 {
    1 + breakpoints().iter().filter(|b| x.cmp_rational(b) != Ordering::Less).count() as u8
}

fn closed_interval(branch: u8) -> (Option<Rational>, Option<Rational>) {
    let b = breakpoints();
    let k = branch as usize;
    let lo = (k >= 2).then(|| b[k - 2].clone());
    let hi = (k <= 6).then(|| b[k - 1].clone());
    (lo, hi)
}

fn half(r: Rational) -> Rational {
    r.mul_pow2(-1)
}

/// Evaluates branch `branch` of the formula at `x`, which must lie in that
/// branch's closed interval.
pub fn branch_value(x: &Exact, branch: u8) -> Result<Rational, InterroError> {
    if !(1..=7).contains(&branch) {
        return Err(InterroError::InvalidQuery(format!("branch {branch} is not in 1..=7")));
    }
    let (lo, hi) = closed_interval(branch);
    let inside = lo.as_ref().is_none_or(|l| x.cmp_rational(l) != Ordering::Less)
        && hi.as_ref().is_none_or(|h| x.cmp_rational(h) != Ordering::Greater);
    if !inside {
        return Err(InterroError::InvalidQuery(format!("{x} is outside branch {branch}")));
    }
    let one = Rational::one();
    let neg_recip = || x.recip().map(|r| r.neg()).expect("x is nonzero on this branch");
    let v = match branch {
        1 => interro(&neg_recip())?,
        2 => Rational::frac(1, 4) - half(interro(&x.neg().add_rational(&-&one))?),
        3 => {
            let a = interro(&neg_recip().add_rational(&-&one))?;
            let b = interro(&x.add_rational(&one))?;
            Rational::frac(1, 4) + half(a) + half(b)
        }
        4 => Rational::frac(1, 2) - half(interro(&x.neg())?),
        5 => Rational::frac(1, 2) + interro(x)?,
        6 => Rational::frac(7, 8) + interro(&x.add_rational(&-&one))?.mul_pow2(-2),
        _ => one.clone() - half(interro(&x.recip().expect("x >= 2"))?),
    };
    Ok(v)
}

/// `F_ζ(x)` exactly: dyadic for rational `x`, rational for surds.
pub fn cdf(x: &Exact) -> Result<CdfValue, InterroError> {
    let branch = branch_of(x);
    Ok(CdfValue {
        value: branch_value(x, branch)?,
        branch,
    })
}

pub fn cdf_rational(x: &Rational) -> Result<Rational, InterroError> {
    Ok(cdf(&Exact::Rational(x.clone()))?.value)
}

/// `F_ζ` on the extended line: `F(∞) = 1`.
pub fn cdf_ext(x: &ExtRational) -> Result<Rational, InterroError> {
    match x {
        ExtRational::Finite(r) => cdf_rational(r),
        ExtRational::Infinity => Ok(Rational::one()),
    }
}

/// Bracket `[F(lo), F(hi)]` for a real number known to lie in `[lo, hi]`.
pub fn cdf_interval(lo: &Rational, hi: &Rational) -> Result<(Rational, Rational), InterroError> {
    if lo > hi {
        return Err(InterroError::InvalidQuery(format!("empty interval [{lo}, {hi}]")));
    }
    Ok((cdf_rational(lo)?, cdf_rational(hi)?))
}

/// `F_ζ(x)` in floating point, with `±∞` mapped to 0 and 1.
pub fn cdf_f64(x: f64) -> Result<f64, InterroError> {
    if x.is_nan() {
        return Err(InterroError::InvalidQuery("NaN".into()));
    }
    if x == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    let i = |t: f64| interro_f64(t.clamp(0.0, 1.0));
    let v = if x < -2.0 {
        i(-1.0 / x)?
    } else if x < -1.0 {
        0.25 - i(-x - 1.0)? / 2.0
    } else if x < -0.5 {
        0.25 + i(-1.0 - 1.0 / x)? / 2.0 + i(x + 1.0)? / 2.0
    } else if x < 0.0 {
        0.5 - i(-x)? / 2.0
    } else if x < 1.0 {
        0.5 + i(x)?
    } else if x < 2.0 {
        0.875 + i(x - 1.0)? / 4.0
    } else {
        1.0 - i(1.0 / x)? / 2.0
    };
    Ok(v)
}

/// One-way reflections of the PGL₂(ℤ) configuration on the boundary:
/// `τ1(x) = -1 - x` for `x > -1/2`, `τ2(x) = 1/x` for `|x| > 1`,
/// `τ3(x) = -x` for `x < 0`, identity otherwise. At `∞`: `τ2(∞) = 0`, and
/// `∞` is fixed by `τ1` and `τ3`.
pub fn boundary_tau(i: usize, x: &ExtRational) -> Result<ExtRational, InterroError> {
    let x = match x {
        ExtRational::Infinity => {
            return match i {
                1 | 3 => Ok(ExtRational::Infinity),
                2 => Ok(ExtRational::Finite(Rational::zero())),
                _ => Err(bad_index(i)),
            }
        }
        ExtRational::Finite(x) => x,
    };
    let y = match i {
        1 if *x > Rational::frac(-1, 2) => -x - Rational::one(),
        2 if x.abs() > 1 => x.recip().expect("|x| > 1"),
        3 if x.is_negative() => -x,
        1..=3 => x.clone(),
        _ => return Err(bad_index(i)),
    };
    Ok(ExtRational::Finite(y))
}

fn bad_index(i: usize) -> InterroError {
    InterroError::InvalidQuery(format!("generator index {i} is not 1, 2 or 3"))
}

/// An interval of the real line; `None` endpoints are `∓∞` (always open).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub lo: Option<Rational>,
    pub lo_closed: bool,
    pub hi: Option<Rational>,
    pub hi_closed: bool,
}

impl Interval {
    fn closed(lo: Rational, hi: Rational) -> Self {
        Interval {
            lo: Some(lo),
            lo_closed: true,
            hi: Some(hi),
            hi_closed: true,
        }
    }

    fn up_to(hi: Rational) -> Self {
        Interval {
            lo: None,
            lo_closed: false,
            hi: Some(hi),
            hi_closed: true,
        }
    }

    fn from(lo: Rational) -> Self {
        Interval {
            lo: Some(lo),
            lo_closed: true,
            hi: None,
            hi_closed: false,
        }
    }

    fn everything() -> Self {
        Interval {
            lo: None,
            lo_closed: false,
            hi: None,
            hi_closed: false,
        }
    }

    pub fn contains(&self, y: &Rational) -> bool {
        let above = match &self.lo {
            None => true,
            Some(l) => y > l || (self.lo_closed && y == l),
        };
        let below = match &self.hi {
            None => true,
            Some(h) => y < h || (self.hi_closed && y == h),
        };
        above && below
    }

    /// `μ(interval) = F(hi) - F(lo)`; endpoints carry no mass.
    pub fn measure(&self) -> Result<Rational, InterroError> {
        let hi = match &self.hi {
            None => Rational::one(),
            Some(h) => cdf_rational(h)?,
        };
        let lo = match &self.lo {
            None => Rational::zero(),
            Some(l) => cdf_rational(l)?,
        };
        Ok(hi - lo)
    }
}

/// A subset of the extended line: disjoint intervals plus possibly `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Preimage {
    pub intervals: Vec<Interval>,
    pub infinity: bool,
}

impl Preimage {
    pub fn contains(&self, y: &ExtRational) -> bool {
        match y {
            ExtRational::Infinity => self.infinity,
            ExtRational::Finite(r) => self.intervals.iter().any(|iv| iv.contains(r)),
        }
    }

    pub fn measure(&self) -> Result<Rational, InterroError> {
        let mut total = if self.infinity {
            Rational::from(MASS_AT_INFINITY)
        } else {
            Rational::zero()
        };
        for iv in &self.intervals {
            total = total + iv.measure()?;
        }
        Ok(total)
    }
}

/// `τ_i⁻¹((-∞, x])` as a subset of the extended line.
pub fn tau_preimage(i: usize, x: &Rational) -> Result<Preimage, InterroError> {
    let neg_half = Rational::frac(-1, 2);
    let intervals = match i {
        1 if *x >= neg_half => vec![Interval::everything()],
        1 => vec![Interval::up_to(x.clone()), Interval::from(-x - Rational::one())],
        2 if *x < -1 => vec![],
        2 if x.is_negative() => vec![Interval::closed(x.recip().expect("x < 0"), x.clone())],
        2 if x.is_zero() => vec![Interval::up_to(Rational::zero())],
        2 if *x < 1 => vec![Interval::up_to(x.clone()), Interval::from(x.recip().expect("x > 0"))],
        2 => vec![Interval::everything()],
        3 if x.is_negative() => vec![],
        3 => vec![Interval::closed(-x, x.clone())],
        _ => return Err(bad_index(i)),
    };
    // τ1 and τ3 fix ∞; τ2 sends it to 0.
    let infinity = i == 2 && !x.is_negative();
    Ok(Preimage { intervals, infinity })
}

/// Both sides of `μ((-∞, x]) = (1/3) Σ_i μ(τ_i⁻¹((-∞, x]))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stationarity {
    pub x: Rational,
    pub lhs: Rational,
    pub rhs: Rational,
    pub terms: [Rational; 3],
    pub holds: bool,
}

pub fn stationarity_check(x: &Rational) -> Result<Stationarity, InterroError> {
    let lhs = cdf_rational(x)?;
    let terms = [
        tau_preimage(1, x)?.measure()?,
        tau_preimage(2, x)?.measure()?,
        tau_preimage(3, x)?.measure()?,
    ];
    let rhs = (terms[0].clone() + terms[1].clone() + terms[2].clone()) * Rational::frac(1, 3);
    Ok(Stationarity {
        x: x.clone(),
        holds: lhs == rhs,
        lhs,
        rhs,
        terms,
    })
}

/// `max over the grid of |F_emp(x) - F_ζ(x)|`, with `F_ζ` evaluated exactly
/// and then rounded.
pub fn ks_distance(empirical: &EmpiricalCdf, grid: &[Rational]) -> Result<f64, InterroError> {
    if grid.is_empty() {
        return Err(InterroError::InvalidQuery("empty grid".into()));
    }
    if empirical.is_empty() {
        return Err(InterroError::InvalidQuery("empty sample".into()));
    }
    let gaps: Vec<f64> = grid
        .par_iter()
        .map(|x| Ok((empirical.eval(x.to_f64()) - cdf_rational(x)?.to_f64()).abs()))
        .collect::<Result<_, InterroError>>()?;
    Ok(gaps.into_iter().fold(0.0, f64::max))
}

/// `n + 1` equally spaced rationals from `lo` to `hi`.
pub fn rational_grid(lo: &Rational, hi: &Rational, n: u32) -> Vec<Rational> {
    let n = n.max(1);
    let step = (hi.clone() - lo.clone()) * Rational::frac(1, n as i64);
    (0..=n).map(|k| lo.clone() + step.clone() * Rational::from(k as i64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::frac(p, q)
    }

    fn ex(p: i64, q: i64) -> Exact {
        Exact::Rational(r(p, q))
    }

    #[test]
    fn values() {
        assert_eq!(cdf(&ex(0, 1)).unwrap(), CdfValue { value: r(1, 2), branch: 5 });
        assert_eq!(cdf(&ex(2, 1)).unwrap().value, r(31, 32));
        assert_eq!(branch_value(&ex(2, 1), 6).unwrap(), r(31, 32));
        assert_eq!(branch_value(&ex(2, 1), 7).unwrap(), r(31, 32));
        assert_eq!(cdf(&ex(-5, 2)).unwrap(), CdfValue { value: r(7, 128), branch: 1 });
        assert!(branch_value(&ex(3, 1), 6).is_err());
    }

    #[test]
    fn taus() {
        let f = |p, q| ExtRational::Finite(r(p, q));
        assert_eq!(boundary_tau(1, &f(0, 1)).unwrap(), f(-1, 1));
        assert_eq!(boundary_tau(2, &f(-3, 1)).unwrap(), f(-1, 3));
        assert_eq!(boundary_tau(3, &f(5, 1)).unwrap(), f(5, 1));
        assert_eq!(boundary_tau(2, &ExtRational::Infinity).unwrap(), f(0, 1));
        assert_eq!(boundary_tau(1, &ExtRational::Infinity).unwrap(), ExtRational::Infinity);
    }

    #[test]
    fn worked_case() {
        let s = stationarity_check(&r(-5, 2)).unwrap();
        assert!(s.holds);
        assert_eq!(s.lhs, r(7, 128));
        let s = stationarity_check(&r(0, 1)).unwrap();
        assert!(s.holds);
        assert_eq!(s.rhs, r(1, 2));
    }

    #[test]
    fn ks_rejects_empty_grid() {
        let emp = EmpiricalCdf::new(vec![0.0]);
        assert!(ks_distance(&emp, &[]).is_err());
        let d = ks_distance(&emp, &[r(0, 1)]).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }
}
