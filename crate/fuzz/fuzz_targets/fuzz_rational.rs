#![no_main]

use hyperwalk::numeric::Rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(x) = text.parse::<Rational>() else { return };
    let back: Rational = x.to_string().parse().expect("display output parses");
    assert_eq!(back, x);
    let d: Rational = x.to_decimal_truncated(12).parse().expect("decimal output parses");
    assert!(d.abs() <= x.abs() && (&x - &d).abs() < Rational::pow2(-39));
    assert!(x.fract() >= Rational::zero() && x.fract() < Rational::one());
});
