//! Parsers for command-line values.

use std::fs;

use hyperwalk::numeric::{Exact, Rational};
use hyperwalk::triangle::TriangleConfig;

use crate::error::{CliError, ErrorKind};

/// A point of the extended real line.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Exact(Exact),
    PosInf,
    NegInf,
}

/// `p/q`, a decimal literal, `(a+b*sqrt(d))/c`, or `inf` / `-inf`.
pub fn parse_point(s: &str) -> Result<Point, CliError> {
    match s.trim() {
        "inf" | "+inf" | "∞" => Ok(Point::PosInf),
        "-inf" | "-∞" => Ok(Point::NegInf),
        t => Ok(Point::Exact(parse_exact(t)?)),
    }
}

pub fn parse_exact(s: &str) -> Result<Exact, CliError> {
    Ok(s.parse::<Exact>()?)
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    match parse_exact(s)? {
        Exact::Rational(r) => Ok(r),
        Exact::Surd(_) => Err(CliError::invalid(format!("expected a rational, got {s:?}"))),
    }
}

/// `builtin:NAME` or a path to a JSON configuration.
pub fn load_config(source: &str) -> Result<TriangleConfig, CliError> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return Ok(TriangleConfig::builtin(name)?);
    }
    let text = fs::read_to_string(source)
        .map_err(|e| CliError::new(ErrorKind::Io, format!("cannot read {source}: {e}")))?;
    Ok(TriangleConfig::from_json(&text)?)
}
