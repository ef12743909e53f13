#![no_main]

use hyperwalk::numeric::{QuadraticSurd, Rational};
use libfuzzer_sys::fuzz_target;
use std::cmp::Ordering;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(x) = text.parse::<QuadraticSurd>() else { return };
    let back: QuadraticSurd = x.to_string().parse().expect("display output parses");
    assert_eq!(back, x);
    let floor = Rational::from_integer(x.floor());
    assert_eq!(x.cmp_rational(&floor), Ordering::Greater);
    assert_eq!(x.cmp_rational(&(floor + Rational::one())), Ordering::Less);
    assert_eq!(x.neg().neg(), x);
});
