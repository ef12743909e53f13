//! The interrobang function `‽`: exact on rationals and on quadratic
//! irrationals, bracketed on real queries, and inverted by Stern–Brocot
//! descent.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::minkowski::{first_partial_quotient_of_inverse, qmark_surd, unit_quotients};
use crate::numeric::{
    is_diagonally_dominant, solve_exact, Exact, NumericError, QuadraticSurd, Rational,
    RationalMatrix, MAX_PARTIAL_QUOTIENT,
};

/// Largest `n` for which the quadratic-irrational linear system is built.
pub const MAX_SYSTEM_SIZE: usize = 1024;

/// Default number of descent steps before a bracket query gives up.
pub const DEFAULT_BUDGET: usize = 100_000;

/// Partial quotients above this make `‽` smaller than the least positive
/// `f64`, so [`interro_f64`] stops expanding there.
const F64_QUOTIENT_CUTOFF: u64 = 1100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterroError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("query did not converge within {0} descent steps")]
    BudgetExceeded(usize),
    #[error("query interval is too wide for the requested tolerance")]
    InsufficientPrecision,
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("linear system with n = {0} exceeds the supported size")]
    SystemTooLarge(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

fn quarter_pow(a: u64) -> Rational {
    Rational::pow2(-2 * a as i64)
}

/// `‽(x)` on `[0, 1] ∩ Q`.
///
/// With `x = [0; a1, ..., ak]` and suffixes `s_j = [0; a_j, ...]`, the
/// recursion only ever asks for `‽(s_{j+1})` and, when `a_j = 1`, for
/// `‽(1 - s_j) = ‽([0; a_{j+1} + 1, a_{j+2}, ...])`, so a single pass from
/// the tail suffices.
pub fn interro_rational(x: &Rational) -> Result<Rational, InterroError> {
    let q = unit_quotients(x)?;
    let k = q.len();
    let three_eighths = Rational::frac(3, 8);
    let three_quarters = Rational::frac(3, 4);
    let half = Rational::frac(1, 2);
    // next = ‽(s_{j+1}), after = ‽(s_{j+2})
    let mut next = Rational::zero();
    let mut after = Rational::zero();
    for j in (0..k).rev() {
        let v = if q[j] >= 2 {
            quarter_pow(q[j]) * (Rational::one() - next.mul_pow2(1))
        } else if j + 1 == k {
            three_eighths.clone()
        } else {
            let w = quarter_pow(q[j + 1] + 1) * (Rational::one() - after.mul_pow2(1));
            &three_eighths - &three_quarters * &next - &half * &w
        };
        after = std::mem::replace(&mut next, v);
    }
    Ok(next)
}

/// `‽` on any exact argument in `[0, 1]`.
pub fn interro(x: &Exact) -> Result<Rational, InterroError> {
    match x {
        Exact::Rational(r) => interro_rational(r),
        Exact::Surd(s) => interro_surd(s),
    }
}

/// `‽(x)` in floating point: the tail recursion of [`interro_rational`]
/// folded in `f64` over the exact continued fraction of `x`. Partial
/// quotients beyond the underflow threshold end the expansion.
pub fn interro_f64(x: f64) -> Result<f64, InterroError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(InterroError::InvalidQuery(format!("{x} is outside [0, 1]")));
    }
    if x == 1.0 {
        return Ok(0.375);
    }
    let r = Rational::from_big(num_rational::BigRational::from_float(x).expect("finite"));
    let cf = crate::numeric::ContinuedFraction::of_rational(&r);
    let q: Vec<u64> = cf.preperiod()[1..]
        .iter()
        .map_while(|t| t.to_u64().filter(|&v| v <= F64_QUOTIENT_CUTOFF))
        .collect();
    let quarter_pow = |a: u64| 0.25f64.powi(a as i32);
    let k = q.len();
    let (mut next, mut after) = (0.0f64, 0.0f64);
    for j in (0..k).rev() {
        let v = if q[j] >= 2 {
            quarter_pow(q[j]) * (1.0 - 2.0 * next)
        } else if j + 1 == k {
            0.375
        } else {
            let w = quarter_pow(q[j + 1] + 1) * (1.0 - 2.0 * after);
            0.375 - 0.75 * next - 0.5 * w
        };
        after = std::mem::replace(&mut next, v);
    }
    Ok(next)
}

/// `‽` sampled on the grid `i / n`, `0 ≤ i ≤ n`.
pub fn interro_grid(n: u32) -> Result<Vec<(Rational, Rational)>, InterroError> {
    if n == 0 {
        return Err(InterroError::InvalidQuery("grid size must be positive".into()));
    }
    (0..=n)
        .into_par_iter()
        .map(|i| {
            let x = Rational::frac(i as i64, n as i64);
            let y = interro_rational(&x)?;
            Ok((x, y))
        })
        .collect()
}

/// The linear system whose unique solution is `(‽(x_0), ..., ‽(x_n))` for
/// `x_i = ?⁻¹(i / n)`, where `n` is the denominator of `?(x)`.
#[derive(Clone, Debug)]
pub struct InterroSystem {
    pub n: usize,
    /// `n · ?(x)`, the position of `x` among the `x_i`.
    pub index: usize,
    /// `⌊1 / x_i⌋` for `i ≥ 1`; entry 0 is unused and set to 0.
    pub floors: Vec<u64>,
    pub a: RationalMatrix,
    pub b: Vec<Rational>,
    /// Diagonal of the column scaling that makes `A D` diagonally dominant.
    pub d: Vec<Rational>,
    pub solution: Vec<Rational>,
}

impl InterroSystem {
    /// `A D` with `D` the diagonal scaling.
    pub fn scaled(&self) -> RationalMatrix {
        let mut ad = self.a.clone();
        for i in 0..=self.n {
            for j in 0..=self.n {
                if !ad[(i, j)].is_zero() {
                    ad[(i, j)] = &ad[(i, j)] * &self.d[j];
                }
            }
        }
        ad
    }
}

/// Builds and solves the system for a quadratic irrational in `(0, 1)`.
pub fn interro_system(x: &QuadraticSurd) -> Result<InterroSystem, InterroError> {
    let q = qmark_surd(x)?;
    let n = q
        .denom()
        .to_usize()
        .filter(|&n| n <= MAX_SYSTEM_SIZE)
        .ok_or_else(|| InterroError::SystemTooLarge(q.denom().to_string()))?;
    let index = q.numer().to_usize().expect("numerator below denominator");
    let size = n + 1;
    let mut a = RationalMatrix::zeros(size, size);
    let mut b = vec![Rational::zero(); size];
    let mut floors = vec![0u64; size];
    let nn = n as i128;
    for i in 0..size {
        a[(i, i)] = Rational::one();
        if i == 0 {
            continue;
        }
        if 2 * i <= n {
            let k = first_partial_quotient_of_inverse(&Rational::frac(i as i64, n as i64))?;
            floors[i] = k;
            let j = 1i128
                .checked_shl(k as u32)
                .filter(|_| k < 64)
                .map_or(i128::MIN, |p| 2 * nn - p * i as i128);
            if !(0..=nn).contains(&j) {
                return Err(InterroError::Internal(format!(
                    "index 2n - 2^k i = {j} outside [0, {n}] for i = {i}, k = {k}"
                )));
            }
            let j = j as usize;
            a[(i, j)] = &a[(i, j)] + &quarter_pow(k).mul_pow2(1);
            b[i] = quarter_pow(k);
        } else {
            floors[i] = 1;
            let (j1, j2) = (2 * n - 2 * i, n - i);
            a[(i, j1)] = &a[(i, j1)] + &Rational::frac(3, 4);
            a[(i, j2)] = &a[(i, j2)] + &Rational::frac(1, 2);
            b[i] = Rational::frac(3, 8);
        }
    }
    let d = (0..size)
        .map(|i| Rational::from(if 2 * i <= n { 1 } else { 4 }))
        .collect();
    let mut system = InterroSystem {
        n,
        index,
        floors,
        a,
        b,
        d,
        solution: Vec::new(),
    };
    if !is_diagonally_dominant(&system.scaled()) {
        return Err(InterroError::Internal(format!(
            "scaled system for n = {n} is not diagonally dominant"
        )));
    }
    system.solution = solve_exact(&system.a, &system.b).map_err(|e| match e {
        NumericError::Singular => InterroError::Internal(format!("system for n = {n} is singular")),
        other => other.into(),
    })?;
    Ok(system)
}

/// Exact `‽(x)` for a quadratic irrational in `(0, 1)`.
pub fn interro_surd(x: &QuadraticSurd) -> Result<Rational, InterroError> {
    let system = interro_system(x)?;
    Ok(system.solution[system.index].clone())
}

/// Rational bounds on `‽` at a real point: `arg_lower ≤ x ≤ arg_upper` and
/// `lower = ‽(arg_lower) ≤ ‽(x) ≤ ‽(arg_upper) = upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterroBracket {
    pub lower: Rational,
    pub upper: Rational,
    pub arg_lower: Rational,
    pub arg_upper: Rational,
}

impl InterroBracket {
    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn midpoint(&self) -> Rational {
        (&self.upper + &self.lower).mul_pow2(-1)
    }

    pub fn contains(&self, y: &Rational) -> bool {
        &self.lower <= y && y <= &self.upper
    }

    fn exact(x: Rational) -> Result<Self, InterroError> {
        let y = interro_rational(&x)?;
        Ok(InterroBracket {
            lower: y.clone(),
            upper: y,
            arg_lower: x.clone(),
            arg_upper: x,
        })
    }
}

/// A real argument known exactly or only up to a rational interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealQuery {
    Exact(Exact),
    Interval(Rational, Rational),
}

impl RealQuery {
    fn bounds(&self) -> Result<(Exact, Exact), InterroError> {
        let (lo, hi) = match self {
            RealQuery::Exact(x) => (x.clone(), x.clone()),
            RealQuery::Interval(lo, hi) => {
                if lo > hi {
                    return Err(InterroError::InvalidQuery(format!("empty interval [{lo}, {hi}]")));
                }
                (Exact::Rational(lo.clone()), Exact::Rational(hi.clone()))
            }
        };
        let in_unit = |v: &Exact| v.cmp_rational(&Rational::zero()).is_ge() && v.cmp_rational(&Rational::one()).is_le();
        if !in_unit(&lo) || !in_unit(&hi) {
            return Err(InterroError::InvalidQuery("argument outside [0, 1]".into()));
        }
        Ok((lo, hi))
    }
}

/// Position of the sought value relative to a probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Below,
    Above,
    Hit,
    Straddle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dir {
    Left,
    Right,
}

/// A Stern–Brocot interval `[lp/lq, rp/rq]` with `rp lq - lp rq = 1`.
#[derive(Clone, Debug)]
struct Node {
    lp: BigInt,
    lq: BigInt,
    rp: BigInt,
    rq: BigInt,
}

impl Node {
    fn unit() -> Self {
        Node {
            lp: BigInt::zero(),
            lq: BigInt::one(),
            rp: BigInt::one(),
            rq: BigInt::one(),
        }
    }

    fn left(&self) -> Rational {
        Rational::new(self.lp.clone(), self.lq.clone()).expect("positive denominator")
    }

    fn right(&self) -> Rational {
        Rational::new(self.rp.clone(), self.rq.clone()).expect("positive denominator")
    }

    /// The point reached after `j` steps in direction `dir`.
    fn step(&self, dir: Dir, j: u64) -> Rational {
        let j = BigInt::from(j);
        let (p, q) = match dir {
            Dir::Right => (&self.lp + &j * &self.rp, &self.lq + &j * &self.rq),
            Dir::Left => (&j * &self.lp + &self.rp, &j * &self.lq + &self.rq),
        };
        Rational::new(p, q).expect("positive denominator")
    }

    fn advance(&mut self, dir: Dir, j: u64) {
        let j = BigInt::from(j);
        match dir {
            Dir::Right => {
                self.lp += &j * &self.rp;
                self.lq += &j * &self.rq;
            }
            Dir::Left => {
                self.rp += &j * &self.lp;
                self.rq += &j * &self.lq;
            }
        }
    }

    /// Denominator after `j` steps.
    fn denom_after(&self, dir: Dir, j: &BigInt) -> BigInt {
        match dir {
            Dir::Right => &self.lq + j * &self.rq,
            Dir::Left => j * &self.lq + &self.rq,
        }
    }

    /// Denominator of the endpoint that stays fixed when moving in `dir`.
    fn fixed_denom(&self, dir: Dir) -> &BigInt {
        match dir {
            Dir::Right => &self.rq,
            Dir::Left => &self.lq,
        }
    }
}

/// Largest `j` in `[1, cap]` with `pred(j)`, given `pred(1)` and that `pred`
/// holds on an initial segment.
fn last_true(
    cap: u64,
    mut pred: impl FnMut(u64) -> Result<bool, InterroError>,
) -> Result<u64, InterroError> {
    let mut lo = 1u64;
    let mut step = 1u64;
    let hi = loop {
        let probe = lo.saturating_add(step).min(cap);
        if probe == lo {
            return Ok(lo);
        }
        if pred(probe)? {
            lo = probe;
            step = step.saturating_mul(2);
        } else {
            break probe;
        }
    };
    let mut hi = hi;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

enum Halt {
    Hit(Rational),
    Straddle,
    Stopped,
    Capped,
}

struct Descent<'a> {
    node: Node,
    budget: usize,
    initial_budget: usize,
    side: Box<dyn FnMut(&Rational) -> Result<Side, InterroError> + 'a>,
}

impl<'a> Descent<'a> {
    fn new(
        budget: usize,
        side: impl FnMut(&Rational) -> Result<Side, InterroError> + 'a,
    ) -> Self {
        Descent {
            node: Node::unit(),
            budget,
            initial_budget: budget,
            side: Box::new(side),
        }
    }

    /// Walks down the tree, taking each run of equal moves in one batch,
    /// until `stop` holds, the target is hit or straddles a mediant, or a run
    /// is capped at zero steps.
    fn run(
        &mut self,
        mut stop: impl FnMut(&Node) -> Result<bool, InterroError>,
        cap: impl Fn(&Node, Dir) -> u64,
    ) -> Result<Halt, InterroError> {
        loop {
            if stop(&self.node)? {
                return Ok(Halt::Stopped);
            }
            if self.budget == 0 {
                return Err(InterroError::BudgetExceeded(self.initial_budget));
            }
            self.budget -= 1;
            let m = self.node.step(Dir::Right, 1);
            let dir = match (self.side)(&m)? {
                Side::Hit => return Ok(Halt::Hit(m)),
                Side::Straddle => return Ok(Halt::Straddle),
                Side::Above => Dir::Right,
                Side::Below => Dir::Left,
            };
            let want = if dir == Dir::Right { Side::Above } else { Side::Below };
            let limit = cap(&self.node, dir);
            if limit == 0 {
                return Ok(Halt::Capped);
            }
            let node = &self.node;
            let side = &mut self.side;
            let j = last_true(limit, |j| Ok(side(&node.step(dir, j))? == want))?;
            self.node.advance(dir, j);
        }
    }
}

fn side_of_target(lo: &Exact, hi: &Exact, m: &Rational) -> Side {
    use std::cmp::Ordering::*;
    match (lo.cmp_rational(m), hi.cmp_rational(m)) {
        (Equal, Equal) => Side::Hit,
        (Greater, _) => Side::Above,
        (_, Less) => Side::Below,
        (Equal, Greater) => Side::Above,
        (Less, Equal) => Side::Below,
        _ => Side::Straddle,
    }
}

/// Brackets `‽(x)` to within `eps` by Stern–Brocot descent toward `x`.
pub fn interro_bracket(query: &RealQuery, eps: &Rational) -> Result<InterroBracket, InterroError> {
    interro_bracket_stream(std::iter::once(query.clone()), eps, DEFAULT_BUDGET)
}

/// Brackets `‽(x)` for `x` given by a stream of nested queries, consuming
/// further queries whenever the current one is too coarse.
pub fn interro_bracket_stream(
    queries: impl IntoIterator<Item = RealQuery>,
    eps: &Rational,
    budget: usize,
) -> Result<InterroBracket, InterroError> {
    if !eps.is_positive() {
        return Err(InterroError::InvalidQuery("tolerance must be positive".into()));
    }
    let mut node = Node::unit();
    let mut remaining = budget;
    for query in queries {
        let (lo, hi) = query.bounds()?;
        if let (Some(a), Some(b)) = (lo.as_rational(), hi.as_rational()) {
            if a == b {
                return InterroBracket::exact(a.clone());
            }
        }
        if lo.cmp_rational(&node.left()).is_lt() || hi.cmp_rational(&node.right()).is_gt() {
            return Err(InterroError::InvalidQuery("stream intervals are not nested".into()));
        }
        let mut descent = Descent::new(remaining, |m: &Rational| Ok(side_of_target(&lo, &hi, m)));
        descent.node = node;
        let halt = descent.run(
            |n| Ok(&interro_rational(&n.right())? - &interro_rational(&n.left())? < *eps),
            |_, _| MAX_PARTIAL_QUOTIENT,
        )?;
        remaining = descent.budget;
        node = descent.node;
        match halt {
            Halt::Hit(m) => return InterroBracket::exact(m),
            Halt::Stopped => {
                let (l, r) = (node.left(), node.right());
                return Ok(InterroBracket {
                    lower: interro_rational(&l)?,
                    upper: interro_rational(&r)?,
                    arg_lower: l,
                    arg_upper: r,
                });
            }
            Halt::Straddle | Halt::Capped => {
                // The interval endpoints themselves are the tightest bracket.
                if let (Exact::Rational(a), Exact::Rational(b)) = (&lo, &hi) {
                    let (fa, fb) = (interro_rational(a)?, interro_rational(b)?);
                    if &fb - &fa < *eps {
                        return Ok(InterroBracket {
                            lower: fa,
                            upper: fb,
                            arg_lower: a.clone(),
                            arg_upper: b.clone(),
                        });
                    }
                }
            }
        }
    }
    Err(InterroError::InsufficientPrecision)
}

fn side_of_value(y: &Rational, m: &Rational) -> Result<Side, InterroError> {
    use std::cmp::Ordering::*;
    Ok(match y.cmp(&interro_rational(m)?) {
        Less => Side::Below,
        Greater => Side::Above,
        Equal => Side::Hit,
    })
}

/// A rational interval of width below `eps` containing `‽⁻¹(y)`, or a
/// degenerate interval when the preimage is a rational found on the way.
pub fn interro_inverse(y: &Rational, eps: &Rational) -> Result<(Rational, Rational), InterroError> {
    if y.is_negative() || *y > Rational::frac(3, 8) {
        return Err(InterroError::Numeric(NumericError::OutOfRange {
            what: "interrobang value (expected [0, 3/8])",
            value: y.to_string(),
        }));
    }
    if !eps.is_positive() {
        return Err(InterroError::InvalidQuery("tolerance must be positive".into()));
    }
    if y.is_zero() {
        return Ok((Rational::zero(), Rational::zero()));
    }
    if *y == Rational::frac(3, 8) {
        return Ok((Rational::one(), Rational::one()));
    }
    let inv_eps = eps.recip().expect("positive");
    let mut descent = Descent::new(DEFAULT_BUDGET, |m: &Rational| side_of_value(y, m));
    let halt = descent.run(
        |n| Ok(&n.right() - &n.left() < *eps),
        |n, dir| {
            // width after j steps is 1 / (fixed_q · (moving_q + j fixed_q))
            let fixed = n.fixed_denom(dir);
            let target: BigInt = (inv_eps.as_big() / num_rational::BigRational::from_integer(fixed.clone()))
                .floor()
                .to_integer();
            let moving = n.denom_after(dir, &BigInt::zero());
            let need: BigInt = (target - moving).max(BigInt::zero()) / fixed + 1;
            need.to_u64().unwrap_or(u64::MAX).min(MAX_PARTIAL_QUOTIENT)
        },
    )?;
    match halt {
        Halt::Hit(m) => Ok((m.clone(), m)),
        Halt::Stopped | Halt::Capped => Ok((descent.node.left(), descent.node.right())),
        Halt::Straddle => unreachable!("value comparisons never straddle"),
    }
}

/// The fraction `A/B` with `B ≤ max_den` and `‽(A/B) = y`, if any.
pub fn fraction_search(y: &Rational, max_den: u64) -> Result<Option<Rational>, InterroError> {
    if y.is_negative() || *y > Rational::frac(3, 8) || max_den == 0 {
        return Ok(None);
    }
    if y.is_zero() {
        return Ok(Some(Rational::zero()));
    }
    if *y == Rational::frac(3, 8) {
        return Ok(Some(Rational::one()));
    }
    let bound = BigInt::from(max_den);
    let mut descent = Descent::new(usize::MAX, |m: &Rational| side_of_value(y, m));
    let halt = descent.run(
        |_| Ok(false),
        |n, dir| {
            let fixed = n.fixed_denom(dir);
            let moving = n.denom_after(dir, &BigInt::zero());
            if moving > bound {
                return 0;
            }
            ((&bound - moving) / fixed).to_u64().unwrap_or(u64::MAX).min(MAX_PARTIAL_QUOTIENT)
        },
    )?;
    match halt {
        Halt::Hit(m) if *m.denom() <= bound => Ok(Some(m)),
        _ => Ok(None),
    }
}

/// Rationals `a = x_0 < ... < x_m = b` with consecutive `‽` gaps below
/// `eps`, refined by inserting mediants.
pub fn saturation_chain(a: &Rational, b: &Rational, eps: &Rational) -> Result<Vec<Rational>, InterroError> {
    const MAX_CHAIN: usize = 1 << 22;
    if a > b || !eps.is_positive() {
        return Err(InterroError::InvalidQuery("need a ≤ b and eps > 0".into()));
    }
    let fa = interro_rational(a)?;
    let fb = interro_rational(b)?;
    let mut out = vec![a.clone()];
    if a == b {
        return Ok(out);
    }
    let mut stack = vec![(a.clone(), fa, b.clone(), fb)];
    while let Some((l, fl, r, fr)) = stack.pop() {
        if &fr - &fl < *eps {
            out.push(r);
            if out.len() > MAX_CHAIN {
                return Err(InterroError::BudgetExceeded(MAX_CHAIN));
            }
            continue;
        }
        let m = l.mediant(&r);
        let fm = interro_rational(&m)?;
        stack.push((m.clone(), fm.clone(), r, fr));
        stack.push((l, fl, m, fm));
    }
    Ok(out)
}

/// Checks a chain against the definition: strictly increasing from `a`
/// to `b` with every `‽` gap below `eps`.
pub fn is_saturating_chain(chain: &[Rational], a: &Rational, b: &Rational, eps: &Rational) -> Result<bool, InterroError> {
    if chain.first() != Some(a) || chain.last() != Some(b) {
        return Ok(false);
    }
    let values: Vec<Rational> = chain.iter().map(interro_rational).collect::<Result<_, _>>()?;
    Ok(chain.windows(2).all(|w| w[0] < w[1])
        && values.windows(2).all(|w| (&w[1] - &w[0]).abs() < *eps))
}

/// Chains witnessing that `‽` is `(7/8)^N`-saturated on `[0, 1/2]` and
/// `4 (7/8)^N`-saturated on `[1/2, 1]`.
#[derive(Clone, Debug)]
pub struct SaturationWitness {
    pub level: u32,
    pub eps_lower: Rational,
    pub lower: Vec<Rational>,
    pub eps_upper: Rational,
    pub upper: Vec<Rational>,
}

pub fn saturation_witness(level: u32) -> Result<SaturationWitness, InterroError> {
    let base = Rational::frac(7, 8);
    let mut eps_lower = Rational::one();
    for _ in 0..level {
        eps_lower = &eps_lower * &base;
    }
    let eps_upper = eps_lower.mul_pow2(2);
    let half = Rational::frac(1, 2);
    Ok(SaturationWitness {
        level,
        lower: saturation_chain(&Rational::zero(), &half, &eps_lower)?,
        upper: saturation_chain(&half, &Rational::one(), &eps_upper)?,
        eps_lower,
        eps_upper,
    })
}

impl SaturationWitness {
    pub fn verify(&self) -> Result<bool, InterroError> {
        let half = Rational::frac(1, 2);
        Ok(is_saturating_chain(&self.lower, &Rational::zero(), &half, &self.eps_lower)?
            && is_saturating_chain(&self.upper, &half, &Rational::one(), &self.eps_upper)?)
    }
}
