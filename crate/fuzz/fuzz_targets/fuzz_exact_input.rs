#![no_main]

use hyperwalk::interrobang::interro;
use hyperwalk::minkowski::qmark;
use hyperwalk::pgl2::cdf;
use hyperwalk_cli::input::{parse_point, Point};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(Point::Exact(x)) = parse_point(text) else { return };
    if let Ok(v) = cdf(&x) {
        assert!((1..=7).contains(&v.branch));
        assert!(v.value.is_positive() && v.value < hyperwalk::numeric::Rational::one());
    }
    if let (Ok(a), Ok(b)) = (interro(&x), qmark(&x)) {
        if x.is_rational() {
            assert!(a.is_dyadic() && b.is_dyadic);
        }
    }
});
