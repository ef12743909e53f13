use hyperwalk::hyperbolic::Boundary;
use hyperwalk::interrobang::{interro, interro_bracket, RealQuery};
use hyperwalk::numeric::{Exact, QuadraticSurd, Rational};
use hyperwalk::pgl2::*;
use hyperwalk::triangle::TriangleConfig;
use hyperwalk::walk::EmpiricalCdf;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn r(p: i64, q: i64) -> Rational {
    Rational::frac(p, q)
}

fn ex(p: i64, q: i64) -> Exact {
    Exact::Rational(r(p, q))
}

fn surd(s: &str) -> Exact {
    Exact::Surd(s.parse::<QuadraticSurd>().unwrap())
}

fn interro_r(p: i64, q: i64) -> Rational {
    interro(&ex(p, q)).unwrap()
}

#[test]
fn branches_agree_at_breakpoints() {
    for (k, b) in breakpoints().iter().enumerate() {
        let x = Exact::Rational(b.clone());
        let left = branch_value(&x, k as u8 + 1).unwrap();
        let right = branch_value(&x, k as u8 + 2).unwrap();
        assert_eq!(left, right, "breakpoint {b}");
        assert_eq!(cdf(&x).unwrap().value, left);
        assert_eq!(cdf(&x).unwrap().branch, k as u8 + 2);
    }
}

#[test]
fn breakpoint_values() {
    let expected = [r(1, 16), r(1, 4), r(15, 32), r(1, 2), r(7, 8), r(31, 32)];
    for (b, v) in breakpoints().iter().zip(expected) {
        assert_eq!(cdf_rational(b).unwrap(), v, "F({b})");
    }
}

#[test]
fn documented_values() {
    assert_eq!(cdf(&ex(0, 1)).unwrap().value, r(1, 2));
    assert_eq!(cdf(&ex(2, 1)).unwrap().value, r(31, 32));
    assert_eq!(cdf(&ex(-5, 2)).unwrap(), CdfValue { value: r(7, 128), branch: 1 });
    assert_eq!(interro_r(2, 5), r(7, 128));
    assert_eq!(cdf(&ex(10, 1)).unwrap().value, Rational::one() - interro_r(1, 10).mul_pow2(-1));
}

#[test]
fn surd_input() {
    let x = surd("(0+1*sqrt(2))/1");
    let v = cdf(&x).unwrap();
    assert_eq!(v.branch, 6);
    let inner = interro(&surd("(-1+1*sqrt(2))/1")).unwrap();
    assert_eq!(v.value, r(7, 8) + inner.mul_pow2(-2));
    let query = RealQuery::Exact(surd("(-1+1*sqrt(2))/1"));
    let bracket = interro_bracket(&query, &Rational::pow2(-40)).unwrap();
    assert!(bracket.contains(&inner));
    assert!(!v.value.is_dyadic());
}

#[test]
fn surd_dispatch_is_exact_near_breakpoints() {
    // (−1 ± √2)/2 ≈ 0.207, −1.207 and (1 − √5)/2 ≈ −0.618.
    let cases = [
        ("(-1+1*sqrt(2))/2", 5),
        ("(-1-1*sqrt(2))/2", 2),
        ("(1-1*sqrt(5))/2", 3),
        ("(-3-1*sqrt(5))/2", 1),
        ("(3+1*sqrt(5))/2", 7),
        ("(1+1*sqrt(5))/2", 6),
        ("(1-1*sqrt(2))/1", 4),
    ];
    for (s, branch) in cases {
        let x = surd(s);
        let v = cdf(&x).unwrap();
        assert_eq!(v.branch, branch, "{s}");
        // F is increasing, so rationals on either side bound F(x).
        let near = Rational::from_big(num_rational::BigRational::from_float(x.to_f64()).unwrap());
        let margin = Rational::pow2(-30);
        let lo = cdf_rational(&(near.clone() - margin.clone())).unwrap();
        let hi = cdf_rational(&(near + margin)).unwrap();
        assert!(lo < v.value && v.value < hi, "{s}: {} not in [{lo}, {hi}]", v.value);
    }
}

#[test]
fn rational_outputs_are_dyadic() {
    for q in 1..=30 {
        for p in -90..=90 {
            let v = cdf_rational(&r(p, q)).unwrap();
            assert!(v.is_dyadic(), "F({p}/{q}) = {v}");
            assert!(v > Rational::zero() && v < Rational::one());
        }
    }
}

#[test]
fn strictly_increasing_on_a_fine_grid() {
    let grid: Vec<Rational> = (0..=10_000).map(|k| r(-50, 1) + r(k, 100)).collect();
    let values: Vec<Rational> = grid.par_iter().map(|x| cdf_rational(x).unwrap()).collect();
    for (k, w) in values.windows(2).enumerate() {
        assert!(w[0] < w[1], "not increasing at {}", grid[k]);
    }
}

#[test]
fn tails() {
    let lo = cdf_rational(&r(-1_000_000, 1)).unwrap();
    let hi = cdf_rational(&r(1_000_000, 1)).unwrap();
    assert!(lo.to_f64() < 1e-6 && lo > Rational::zero());
    assert!((Rational::one() - hi).to_f64() < 1e-6);
    assert_eq!(cdf_ext(&ExtRational::Infinity).unwrap(), Rational::one());
    assert_eq!(MASS_AT_INFINITY, 0);
    assert_eq!(cdf_f64(f64::NEG_INFINITY).unwrap(), 0.0);
    assert_eq!(cdf_f64(f64::INFINITY).unwrap(), 1.0);
}

#[test]
fn float_cdf_tracks_exact_cdf() {
    for k in -400..=400 {
        let x = r(k, 8) + r(1, 7);
        let exact = cdf_rational(&x).unwrap().to_f64();
        let approx = cdf_f64(x.to_f64()).unwrap();
        assert!((exact - approx).abs() < 1e-12, "x = {x}");
    }
}

#[test]
fn intervals_bracket() {
    let (lo, hi) = cdf_interval(&r(-3, 1), &r(-2, 1)).unwrap();
    assert_eq!(lo, cdf_rational(&r(-3, 1)).unwrap());
    assert_eq!(hi, r(1, 16));
    assert!(lo < hi);
    assert!(cdf_interval(&r(1, 1), &r(0, 1)).is_err());
}

#[test]
fn stationarity_at_many_points() {
    let mut points: Vec<Rational> = (0..=40).map(|k| r(-3, 1) + r(k, 40)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    while points.len() < 200 {
        let q = rng.gen_range(1..=60);
        points.push(r(rng.gen_range(-12 * q..=12 * q), q));
    }
    points.extend(breakpoints());
    points.extend([r(-7, 1), r(-3, 2), r(-3, 4), r(-1, 4), r(1, 2), r(3, 2), r(5, 1), r(1000, 1)]);
    let failures: Vec<String> = points
        .par_iter()
        .filter_map(|x| {
            let s = stationarity_check(x).unwrap();
            (!s.holds).then(|| format!("{x}: {} vs {}", s.lhs, s.rhs))
        })
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn stationarity_worked_cases() {
    let s = stationarity_check(&r(-5, 2)).unwrap();
    assert!(s.holds && s.lhs == r(7, 128));
    let s = stationarity_check(&r(0, 1)).unwrap();
    assert!(s.holds && s.rhs == r(1, 2));
    let s = stationarity_check(&r(10, 1)).unwrap();
    assert!(s.holds);
    assert_eq!(s.lhs, Rational::one() - interro_r(1, 10).mul_pow2(-1));
}

fn ext_le(y: &ExtRational, x: &Rational) -> bool {
    match y {
        ExtRational::Finite(v) => v <= x,
        ExtRational::Infinity => false,
    }
}

#[test]
fn preimage_table_matches_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let small = |rng: &mut ChaCha8Rng| {
        let q = rng.gen_range(1..=6);
        r(rng.gen_range(-4 * q..=4 * q), q)
    };
    for _ in 0..1_000_000 {
        let i = rng.gen_range(1..=3);
        let x = small(&mut rng);
        let y = if rng.gen_ratio(1, 50) {
            ExtRational::Infinity
        } else {
            ExtRational::Finite(small(&mut rng))
        };
        let pre = tau_preimage(i, &x).unwrap();
        let image = boundary_tau(i, &y).unwrap();
        assert_eq!(pre.contains(&y), ext_le(&image, &x), "tau_{i}, x = {x}, y = {y}");
    }
}

#[test]
fn boundary_tau_matches_geometry() {
    let c = TriangleConfig::builtin("pgl2").unwrap();
    for k in -300..=300 {
        let x = r(k, 37);
        for i in 1..=3 {
            let exact = boundary_tau(i, &ExtRational::Finite(x.clone())).unwrap();
            let geo = c.one_way_reflect_boundary(i, Boundary::Finite(x.to_f64()));
            match (exact, geo) {
                (ExtRational::Finite(a), Boundary::Finite(b)) => assert!((a.to_f64() - b).abs() < 1e-12),
                (a, b) => panic!("tau_{i}({x}): {a} vs {b}"),
            }
        }
    }
    for i in 1..=3 {
        let exact = boundary_tau(i, &ExtRational::Infinity).unwrap();
        let geo = c.one_way_reflect_boundary(i, Boundary::Infinity);
        assert_eq!(exact == ExtRational::Infinity, geo == Boundary::Infinity, "tau_{i}(inf)");
    }
    assert!(boundary_tau(4, &ExtRational::Infinity).is_err());
}

/// Inverse-CDF sampling by bisection on the floating-point CDF.
fn sample_from_cdf(u: f64) -> f64 {
    let (mut lo, mut hi) = (-1e7, 1e7);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if cdf_f64(mid).unwrap() < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn ks_grid() -> Vec<Rational> {
    (0..400).map(|k| r(-20, 1) + r(k, 10)).collect()
}

#[test]
fn ks_of_a_sample_from_the_law_itself() {
    let n = 100_000u64;
    let sample: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(77);
            rng.set_stream(k);
            sample_from_cdf(rng.gen::<f64>())
        })
        .collect();
    let d = ks_distance(&EmpiricalCdf::new(sample), &ks_grid()).unwrap();
    assert!(d < 0.01, "distance {d}");
}

#[test]
fn ks_of_a_constant_sample() {
    let emp = EmpiricalCdf::new(vec![0.0; 10]);
    let d = ks_distance(&emp, &ks_grid()).unwrap();
    assert!(d >= 0.5);
    assert!(ks_distance(&emp, &[]).is_err());
    assert!(ks_distance(&EmpiricalCdf::new(vec![]), &ks_grid()).is_err());
}
