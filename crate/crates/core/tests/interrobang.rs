use hyperwalk::interrobang::*;
use hyperwalk::numeric::{is_diagonally_dominant, Exact, QuadraticSurd, Rational};
use proptest::prelude::*;

fn r(p: i64, q: i64) -> Rational {
    Rational::frac(p, q)
}

fn surd(s: &str) -> QuadraticSurd {
    s.parse().unwrap()
}

/// The defining three-branch recursion, evaluated literally and without any
/// caching.
fn naive(x: &Rational) -> Rational {
    if Rational::is_zero(x) {
        return Rational::zero();
    }
    let inv = x.recip().unwrap();
    if *x <= r(1, 2) {
        let n = inv.floor();
        let scale = Rational::pow2(-2 * i64::try_from(&n).unwrap());
        scale * (Rational::one() - naive(&inv.fract()).mul_pow2(1))
    } else {
        r(3, 8) - r(3, 4) * naive(&(inv - Rational::one())) - r(1, 2) * naive(&(Rational::one() - x))
    }
}

fn farey(max_den: i64) -> Vec<Rational> {
    let mut v: Vec<Rational> = (1..=max_den)
        .flat_map(|q| (0..=q).map(move |p| Rational::frac(p, q)))
        .collect();
    v.sort();
    v.dedup();
    v
}

#[test]
fn special_values() {
    assert_eq!(interro_rational(&r(0, 1)).unwrap(), r(0, 1));
    assert_eq!(interro_rational(&r(1, 1)).unwrap(), r(3, 8));
    for n in 2..40 {
        let expected = Rational::pow2(-2 * n);
        assert_eq!(interro_rational(&r(1, n)).unwrap(), expected, "1/{n}");
    }
}

#[test]
fn matches_unmemoized_recursion_up_to_height_60() {
    for x in farey(59) {
        if x.height() <= 60u32.into() {
            assert_eq!(interro_rational(&x).unwrap(), naive(&x), "x = {x}");
        }
    }
}

#[test]
fn values_are_dyadic() {
    for x in farey(60) {
        assert!(interro_rational(&x).unwrap().is_dyadic(), "x = {x}");
    }
}

#[test]
fn strictly_increasing_on_farey_200() {
    let xs = farey(200);
    let ys: Vec<Rational> = xs.iter().map(|x| interro_rational(x).unwrap()).collect();
    for (w, x) in ys.windows(2).zip(xs.windows(2)) {
        assert!(w[0] < w[1], "not increasing between {} and {}", x[0], x[1]);
    }
}

#[test]
fn piecewise_forms_agree_at_reciprocals() {
    // For 1/(n+1) ≤ x ≤ 1/n with n > 1: ‽(x) = 4^-n (1 - 2 ‽(1/x - n)).
    for n in 2i64..30 {
        for x in [r(1, n + 1), r(1, n)] {
            let inner = x.recip().unwrap() - Rational::from(n);
            let expected = Rational::pow2(-2 * n) * (Rational::one() - interro_rational(&inner).unwrap().mul_pow2(1));
            assert_eq!(interro_rational(&x).unwrap(), expected, "n = {n}, x = {x}");
        }
    }
    // n = 1: the middle formula at x = 1/2 and x = 1.
    for x in [r(1, 2), r(1, 1)] {
        let a = x.recip().unwrap() - Rational::one();
        let b = Rational::one() - &x;
        let expected = r(3, 8) - r(3, 4) * interro_rational(&a).unwrap() - r(1, 2) * interro_rational(&b).unwrap();
        assert_eq!(interro_rational(&x).unwrap(), expected, "x = {x}");
    }
}

#[test]
fn range_bounds_between_reciprocals() {
    for x in farey(80) {
        if x.is_zero() || x.is_one() {
            continue;
        }
        let n = x.recip().unwrap().floor();
        let n = i64::try_from(&n).unwrap();
        if r(1, n) == x {
            continue;
        }
        let v = interro_rational(&x).unwrap();
        assert!(interro_rational(&r(1, n + 1)).unwrap() < v && v < interro_rational(&r(1, n)).unwrap(), "x = {x}");
    }
}

#[test]
fn documented_examples() {
    assert_eq!(interro_rational(&r(2, 5)).unwrap(), r(7, 128));
    assert_eq!(interro_rational(&r(2, 3)).unwrap(), r(41, 128));
    assert_eq!(interro_rational(&r(1, 3)).unwrap(), r(1, 64));
}

const TEST_SURDS: [&str; 10] = [
    "sqrt(2)-1",
    "(-1+sqrt(5))/2",
    "sqrt(3)-1",
    "2-sqrt(2)",
    "(sqrt(13)-3)/2",
    "(3-sqrt(5))/2",
    "sqrt(2)/2",
    "(2-sqrt(2))/2",
    "sqrt(3)/3",
    "(sqrt(7)-2)",
];

#[test]
fn surd_systems_match_brackets() {
    let eps = Rational::pow2(-34);
    for s in TEST_SURDS {
        let x = surd(s);
        let system = interro_system(&x).unwrap();
        assert!(is_diagonally_dominant(&system.scaled()), "{s}");
        let exact = system.solution[system.index].clone();
        let b = interro_bracket(&RealQuery::Exact(Exact::Surd(x.clone())), &eps).unwrap();
        assert!(b.contains(&exact), "{s}: {exact} not in [{}, {}]", b.lower, b.upper);
        assert!(b.width() < eps);
        let gap = (exact.to_f64() - b.midpoint().to_f64()).abs();
        assert!(gap < 1e-10, "{s}: gap {gap}");
    }
}

#[test]
fn surd_solution_entries_match_brackets_at_every_node() {
    let x = surd("sqrt(2)-1");
    let system = interro_system(&x).unwrap();
    assert_eq!(system.n, 5);
    assert_eq!(system.index, 2);
    for (i, value) in system.solution.iter().enumerate() {
        let xi = hyperwalk::minkowski::qmark_inverse(&r(i as i64, 5)).unwrap();
        let b = interro_bracket(&RealQuery::Exact(xi), &r(1, 1_000_000_000)).unwrap();
        assert!(b.contains(value), "entry {i}");
        assert!((value.to_f64() - b.midpoint().to_f64()).abs() < 1e-8);
    }
}

#[test]
fn golden_surd_satisfies_middle_branch() {
    // x = (√5 - 1)/2 has 1/x - 1 = x and 1 - x = x².
    let x = surd("(-1+sqrt(5))/2");
    let x2 = surd("(3-sqrt(5))/2");
    let system = interro_system(&x).unwrap();
    assert_eq!((system.n, system.index), (3, 2));
    let v = interro_surd(&x).unwrap();
    let w = interro_surd(&x2).unwrap();
    assert_eq!(v, r(3, 8) - r(3, 4) * &v - r(1, 2) * &w);
}

#[test]
fn interval_and_stream_queries() {
    let x = surd("sqrt(2)-1");
    let exact = interro_surd(&x).unwrap();
    // Nested decimal intervals around √2 - 1.
    let digits = "41421356237309504880168872420969807856967187537694";
    let stream = (1..digits.len()).map(|k| {
        let num: Rational = format!("0.{}", &digits[..k]).parse().unwrap();
        let ulp = Rational::new(1, num_bigint::BigInt::from(10u32).pow(k as u32)).unwrap();
        RealQuery::Interval(num.clone(), num + ulp)
    });
    let eps = r(1, 1_000_000_000);
    let b = interro_bracket_stream(stream, &eps, DEFAULT_BUDGET).unwrap();
    assert!(b.contains(&exact) && b.width() < eps);
    // A single coarse interval cannot reach a fine tolerance.
    let coarse = RealQuery::Interval(r(41, 100), r(42, 100));
    assert_eq!(interro_bracket(&coarse, &eps), Err(InterroError::InsufficientPrecision));
    let b = interro_bracket(&coarse, &r(1, 10)).unwrap();
    assert!(b.arg_lower <= r(41, 100) && r(42, 100) <= b.arg_upper);
}

#[test]
fn inverse_matches_published_digits() {
    let eps = r(1, 1_000_000_000);
    let (lo, hi) = interro_inverse(&r(1, 8), &eps).unwrap();
    assert!(&hi - &lo < eps);
    assert!(lo.to_decimal_truncated(8).starts_with("0.61242994"), "{}", lo.to_decimal_truncated(10));
    assert!(hi.to_decimal_truncated(8).starts_with("0.61242994"));
    assert!(interro_rational(&lo).unwrap() <= r(1, 8) && r(1, 8) <= interro_rational(&hi).unwrap());
    let (lo, hi) = interro_inverse(&r(1, 4), &eps).unwrap();
    assert!(lo.to_decimal_truncated(8).starts_with("0.61834758"), "{}", lo.to_decimal_truncated(10));
    assert!(hi.to_decimal_truncated(8).starts_with("0.61834758"));
}

#[test]
fn published_fraction_searches() {
    assert_eq!(fraction_search(&r(1, 16), 10).unwrap(), Some(r(1, 2)));
    assert_eq!(fraction_search(&r(3, 8), 2).unwrap(), Some(r(1, 1)));
    assert_eq!(fraction_search(&r(1, 8), 100_000).unwrap(), None);
    assert_eq!(fraction_search(&r(1, 4), 100_000).unwrap(), None);
    // Every rational with a small denominator is found from its own value.
    for x in farey(40) {
        let y = interro_rational(&x).unwrap();
        assert_eq!(fraction_search(&y, 40).unwrap(), Some(x));
    }
}

#[test]
fn saturation_witnesses_up_to_level_12() {
    for level in 0..=12 {
        let w = saturation_witness(level).unwrap();
        assert!(w.verify().unwrap(), "level {level}");
    }
    let w = saturation_witness(40).unwrap();
    assert!(w.verify().unwrap());
    assert!(w.lower.len() > 2);
}

#[test]
fn saturation_checker_rejects_bad_chains() {
    let eps = r(1, 100);
    assert!(!is_saturating_chain(&[r(0, 1), r(1, 2)], &r(0, 1), &r(1, 2), &eps).unwrap());
    assert!(!is_saturating_chain(&[r(0, 1), r(1, 3), r(1, 4), r(1, 2)], &r(0, 1), &r(1, 2), &r(1, 1)).unwrap());
}

#[test]
fn f64_evaluation_tracks_exact() {
    for x in farey(50) {
        let exact = interro_rational(&x).unwrap().to_f64();
        let approx = interro_f64(x.to_f64()).unwrap();
        assert!((exact - approx).abs() < 1e-12, "x = {x}");
    }
    assert_eq!(interro_f64(1e-300).unwrap(), 0.0);
}

#[test]
fn grid_is_monotone() {
    let grid = interro_grid(64).unwrap();
    assert_eq!(grid.len(), 65);
    assert!(grid.windows(2).all(|w| w[0].1 < w[1].1));
}

proptest! {
    #[test]
    fn bracket_encloses_rational_neighbours(p in 1i64..500, q in 2i64..500) {
        prop_assume!(p < q);
        let x = Rational::frac(p, q);
        let lo = &x - &Rational::frac(1, 100_000);
        let hi = &x + &Rational::frac(1, 100_000);
        prop_assume!(lo.is_positive() && hi < Rational::one());
        let b = interro_bracket(&RealQuery::Interval(lo.clone(), hi.clone()), &Rational::frac(1, 10)).unwrap();
        let v = interro_rational(&x).unwrap();
        prop_assert!(b.arg_lower <= lo && hi <= b.arg_upper);
        prop_assert!(b.contains(&v));
    }

    #[test]
    fn inverse_interval_contains_preimage(p in 1i64..300, q in 2i64..300) {
        prop_assume!(p < q);
        let x = Rational::frac(p, q);
        let y = interro_rational(&x).unwrap();
        let (lo, hi) = interro_inverse(&y, &Rational::frac(1, 1_000_000)).unwrap();
        prop_assert!(lo <= x && x <= hi);
    }
}
