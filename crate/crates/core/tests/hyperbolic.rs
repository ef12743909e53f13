use std::f64::consts::TAU;

use hyperwalk::hyperbolic::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = HPoint> {
    (-20.0..20.0f64, 0.01..20.0f64).prop_map(|(re, im)| HPoint::new(re, im).unwrap())
}

fn line() -> impl Strategy<Value = HLine> {
    prop_oneof![
        (-10.0..10.0f64).prop_map(HLine::Vertical),
        (-10.0..10.0f64, 0.05..10.0f64).prop_map(|(c, r)| HLine::Semicircle(c, r)),
    ]
}

/// A product of up to ten reflections in random lines, kept to matrices
/// that f64 can apply accurately.
fn isometry() -> impl Strategy<Value = Isometry> {
    prop::collection::vec(line(), 1..=10)
        .prop_map(|ls| ls.iter().fold(Isometry::identity(), |acc, l| acc.compose(&l.reflection())))
        .prop_filter("well conditioned", |g| g.norm() < 1e3)
}

fn points_close(a: HPoint, b: HPoint, tol: f64) -> bool {
    hyperbolic_distance(a, b) <= tol
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    d.min(TAU - d)
}

proptest! {
    #[test]
    fn reflection_is_an_involution(l in line(), z in point()) {
        prop_assert!(points_close(l.reflect(l.reflect(z)), z, 1e-9));
        let m = l.reflection();
        prop_assert_eq!(m.orientation(), -1);
        prop_assert!(points_close(m.apply(z), l.reflect(z), 1e-9));
    }

    #[test]
    fn reflection_swaps_sides(l in line(), z in point()) {
        let s = l.signed_distance_sinh(z);
        prop_assume!(s.abs() > 1e-6);
        let t = l.signed_distance_sinh(l.reflect(z));
        prop_assert!((s + t).abs() <= 1e-8 * (1.0 + s.abs()));
        prop_assert_eq!(l.side_of(l.reflect(z)), l.side_of(z).opposite());
    }

    #[test]
    fn distance_is_invariant(g in isometry(), z in point(), w in point()) {
        let d = hyperbolic_distance(z, w);
        let e = hyperbolic_distance(g.apply(z), g.apply(w));
        prop_assert!((d - e).abs() <= 1e-7 * (1.0 + d), "{} vs {}", d, e);
    }

    #[test]
    fn signed_distance_is_invariant(g in isometry(), l in line(), z in point()) {
        let s = l.signed_distance_sinh(z);
        let t = g.apply_line(l).unwrap().signed_distance_sinh(g.apply(z));
        prop_assert!((s.abs() - t.abs()).abs() <= 1e-7 * (1.0 + s.abs()), "{} vs {}", s, t);
    }

    #[test]
    fn inverse_undoes(g in isometry(), z in point()) {
        prop_assert!(points_close(g.inverse().apply(g.apply(z)), z, 1e-8));
        prop_assert!(points_close(g.compose(&g.inverse()).apply(z), z, 1e-8));
    }

    #[test]
    fn lines_map_to_lines(g in isometry(), l in line()) {
        let image = g.apply_line(l).unwrap();
        let (a, b) = l.ideal_points();
        let (p, q) = image.ideal_points();
        let (ga, gb) = (g.apply_boundary(a).angle(), g.apply_boundary(b).angle());
        let direct = angle_gap(ga, p.angle()).max(angle_gap(gb, q.angle()));
        let swapped = angle_gap(ga, q.angle()).max(angle_gap(gb, p.angle()));
        prop_assert!(direct.min(swapped) <= 1e-9);
    }

    #[test]
    fn cayley_conjugates_reflections(l in line(), z in point()) {
        let via_disk = l.to_disk().reflect(cayley(z));
        let direct = cayley(l.reflect(z));
        prop_assert!((via_disk - direct).norm() <= 1e-9);
    }

    #[test]
    fn cayley_round_trip(z in point()) {
        let w = cayley(z);
        prop_assert!(w.norm() < 1.0);
        prop_assert!(points_close(cayley_inverse(w).unwrap(), z, 1e-8));
    }

    #[test]
    fn boundary_angle_round_trip(x in -1e3..1e3f64) {
        let p = Boundary::Finite(x);
        match Boundary::from_angle(p.angle()) {
            Boundary::Finite(y) => prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs() * x.abs())),
            Boundary::Infinity => prop_assert!(false),
        }
        let w = cayley_boundary(p);
        let expected = (Complex64::new(x, 0.0) - Complex64::i()) / (Complex64::new(x, 0.0) + Complex64::i());
        prop_assert!((w - expected).norm() <= 1e-12);
    }

    #[test]
    fn line_through_its_ideal_points(a in -10.0..10.0f64, b in -10.0..10.0f64) {
        prop_assume!((a - b).abs() > 1e-3);
        let l = HLine::through(Boundary::Finite(a), Boundary::Finite(b)).unwrap();
        prop_assert_eq!(l.side_of_boundary(Boundary::Finite(a)), Side::OnLine);
        prop_assert_eq!(l.side_of_boundary(Boundary::Finite(b)), Side::OnLine);
        let v = HLine::through(Boundary::Finite(a), Boundary::Infinity).unwrap();
        prop_assert_eq!(v, HLine::Vertical(a));
    }

    #[test]
    fn arc_intersection_is_inside_both(s1 in 0.0..TAU, l1 in 0.01..6.0f64, s2 in 0.0..TAU, l2 in 0.01..6.0f64, t in 0.0..1.0f64) {
        let a = Arc { start: s1, len: l1 };
        let b = Arc { start: s2, len: l2 };
        if let Some(c) = a.intersect(&b, s1) {
            for k in 0..=10 {
                let theta = c.start + c.len * k as f64 / 10.0;
                prop_assert!(a.contains(theta - 1e-12) || a.contains(theta + 1e-12));
                prop_assert!(b.contains(theta - 1e-12) || b.contains(theta + 1e-12));
            }
        } else {
            let theta = s1 + l1 * t;
            prop_assert!(!b.contains(theta) || touches_endpoint(&b, theta));
        }
    }
}

fn touches_endpoint(arc: &Arc, theta: f64) -> bool {
    angle_gap(theta, arc.start) < 1e-12 || angle_gap(theta, arc.end()) < 1e-12
}

#[test]
fn rejects_points_off_the_half_plane() {
    assert!(HPoint::new(0.0, 0.0).is_err());
    assert!(HPoint::new(0.0, -1.0).is_err());
    assert!(HPoint::new(f64::NAN, 1.0).is_err());
    assert!(HLine::semicircle(0.0, 0.0).is_err());
    assert!(HLine::through(Boundary::Infinity, Boundary::Infinity).is_err());
}

#[test]
fn known_distance() {
    let d = hyperbolic_distance(HPoint::i(), HPoint::new(0.0, std::f64::consts::E).unwrap());
    assert!((d - 1.0).abs() < 1e-14);
}

#[test]
fn orientation_of_products() {
    let r1 = HLine::Vertical(0.0).reflection();
    let r2 = HLine::Semicircle(0.0, 1.0).reflection();
    assert_eq!(r1.compose(&r2).orientation(), 1);
    assert_eq!(r1.compose(&r2).compose(&r1).orientation(), -1);
}

#[test]
fn long_products_stay_normalized() {
    let r1 = HLine::Vertical(0.0).reflection();
    let r2 = HLine::Semicircle(0.0, 1.0).reflection();
    let mut g = Isometry::identity();
    for k in 0..10_000 {
        g = g.compose(if k % 2 == 0 { &r1 } else { &r2 });
    }
    assert!((g.det().abs() - 1.0).abs() < 1e-9);
}
