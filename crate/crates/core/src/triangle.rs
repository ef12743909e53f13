//! Triangle-group configurations: three lines and a basepoint checked
//! against their Coxeter matrix, one-way reflections, group elements with
//! the Demazure product, and the disk-model contraction constant.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::hyperbolic::{Boundary, GeometryError, HLine, HPoint, Isometry, Side};

/// Pairwise angles must match `π / m` this closely.
pub const ANGLE_TOLERANCE: f64 = 1e-9;

/// Descent tests whose separation margin (signed `sinh` distance) is below
/// this report an error instead of picking a side.
pub const DESCENT_TOLERANCE: f64 = 1e-10;

/// Angles in the grid used by [`contraction_constant`].
pub const CONTRACTION_GRID: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TriangleError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("lines {i} and {j} violate the angle axiom: {reason}")]
    AxiomViolation { i: usize, j: usize, reason: String },
    #[error("basepoint lies on line {0}")]
    BasepointOnLine(usize),
    #[error("invalid Coxeter matrix: {0}")]
    InvalidCoxeter(String),
    #[error("generator index {0} is not 1, 2 or 3")]
    InvalidIndex(usize),
    #[error("separation margin {margin:e} for line {i} is below tolerance")]
    DegenerateSeparation { i: usize, margin: f64 },
    #[error("contraction constant {0} is not below 1")]
    NotContracting(f64),
    #[error("unknown builtin configuration {0:?}")]
    UnknownBuiltin(String),
    #[error("malformed configuration: {0}")]
    Malformed(String),
}

/// An entry of the Coxeter matrix: a positive integer or `∞`. Serialized
/// as a number or the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoxeterEntry {
    Finite(u32),
    Infinite,
}

impl fmt::Display for CoxeterEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterEntry::Finite(m) => write!(f, "{m}"),
            CoxeterEntry::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for CoxeterEntry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CoxeterEntry::Finite(m) => s.serialize_u32(*m),
            CoxeterEntry::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for CoxeterEntry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u32),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(m) => Ok(CoxeterEntry::Finite(m)),
            Repr::Text(t) if t == "inf" || t == "∞" => Ok(CoxeterEntry::Infinite),
            Repr::Text(t) => Err(de::Error::custom(format!("expected integer or \"inf\", got {t:?}"))),
        }
    }
}

/// Unvalidated configuration as read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawConfig {
    pub lines: [HLine; 3],
    pub basepoint: [f64; 2],
    pub coxeter: [[CoxeterEntry; 3]; 3],
}

/// A validated triangle-group configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleConfig {
    lines: [HLine; 3],
    basepoint: HPoint,
    coxeter: [[CoxeterEntry; 3]; 3],
    basepoint_sides: [Side; 3],
    generators: [Isometry; 3],
}

fn slot(i: usize) -> Result<usize, TriangleError> {
    if (1..=3).contains(&i) {
        Ok(i - 1)
    } else {
        Err(TriangleError::InvalidIndex(i))
    }
}

impl TriangleConfig {
    /// Checks the angle axiom for every pair of lines against the Coxeter
    /// matrix.
    pub fn validate(raw: &RawConfig) -> Result<Self, TriangleError> {
        let mut lines = raw.lines;
        for line in &mut lines {
            *line = line.validate()?;
        }
        let basepoint = HPoint::new(raw.basepoint[0], raw.basepoint[1])?;
        let m = raw.coxeter;
        for i in 0..3 {
            if m[i][i] != CoxeterEntry::Finite(1) {
                return Err(TriangleError::InvalidCoxeter(format!("m({0}, {0}) must be 1", i + 1)));
            }
            for j in 0..3 {
                if m[i][j] != m[j][i] {
                    return Err(TriangleError::InvalidCoxeter(format!(
                        "m({}, {}) and m({}, {}) differ",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
                if i != j && matches!(m[i][j], CoxeterEntry::Finite(v) if v < 2) {
                    return Err(TriangleError::InvalidCoxeter(format!(
                        "m({}, {}) must be at least 2",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let mut sides = [Side::OnLine; 3];
        for (k, line) in lines.iter().enumerate() {
            sides[k] = line.side_of(basepoint);
            if sides[k] == Side::OnLine {
                return Err(TriangleError::BasepointOnLine(k + 1));
            }
        }
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            check_pair(&lines, &sides, i, j, m[i][j])?;
        }
        Ok(TriangleConfig {
            lines,
            basepoint,
            coxeter: m,
            basepoint_sides: sides,
            generators: lines.map(HLine::reflection),
        })
    }

    pub fn from_json(text: &str) -> Result<Self, TriangleError> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| TriangleError::Malformed(e.to_string()))?;
        Self::validate(&raw)
    }

    /// Named configurations: `pgl2` (the (2,3,∞) group), `figure2` (one
    /// right angle and two disjoint pairs) and `ideal` (the symmetric ideal
    /// triangle).
    pub fn builtin(name: &str) -> Result<Self, TriangleError> {
        Self::validate(&builtin_raw(name)?)
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["pgl2", "figure2", "ideal"]
    }

    pub fn to_raw(&self) -> RawConfig {
        RawConfig {
            lines: self.lines,
            basepoint: [self.basepoint.re, self.basepoint.im],
            coxeter: self.coxeter,
        }
    }

    /// A copy with a different basepoint, revalidated.
    pub fn with_basepoint(&self, z0: HPoint) -> Result<Self, TriangleError> {
        let mut raw = self.to_raw();
        raw.basepoint = [z0.re, z0.im];
        Self::validate(&raw)
    }

    pub fn line(&self, i: usize) -> HLine {
        self.lines[slot(i).expect("index in 1..=3")]
    }

    pub fn lines(&self) -> &[HLine; 3] {
        &self.lines
    }

    pub fn basepoint(&self) -> HPoint {
        self.basepoint
    }

    pub fn coxeter(&self) -> &[[CoxeterEntry; 3]; 3] {
        &self.coxeter
    }

    /// The reflection `s_i`.
    pub fn generator(&self, i: usize) -> Isometry {
        self.generators[slot(i).expect("index in 1..=3")]
    }

    /// Side of `L_i` containing the basepoint.
    pub fn basepoint_side(&self, i: usize) -> Side {
        self.basepoint_sides[slot(i).expect("index in 1..=3")]
    }

    /// `τ_i(z)`: reflects across `L_i` when `z` is on the basepoint's side.
    pub fn one_way_reflect(&self, i: usize, z: HPoint) -> HPoint {
        let k = slot(i).expect("index in 1..=3");
        if self.lines[k].side_of(z) == self.basepoint_sides[k] {
            self.lines[k].reflect(z)
        } else {
            z
        }
    }

    /// `τ_i` on the boundary. Ideal points of `L_i` are fixed either way.
    pub fn one_way_reflect_boundary(&self, i: usize, p: Boundary) -> Boundary {
        let k = slot(i).expect("index in 1..=3");
        if self.lines[k].side_of_boundary(p) == self.basepoint_sides[k] {
            self.lines[k].reflect_boundary(p)
        } else {
            p
        }
    }

    /// Product of the generators along a word, without reduction.
    pub fn word_isometry(&self, word: &[u8]) -> Isometry {
        word.iter()
            .fold(Isometry::identity(), |acc, &i| acc.compose(&self.generator(i as usize)))
    }

    /// Whether `i` is a right descent of `w`: the line `w(L_i)` separates
    /// `z0` from `w(z0)`. Tested in the frame pulled back by `w⁻¹`, where it
    /// reads "`L_i` separates `w⁻¹(z0)` from `z0`".
    pub fn right_descent(&self, w: &GroupElement, i: usize) -> Result<bool, TriangleError> {
        let k = slot(i)?;
        let p = w.isometry.inverse().apply(self.basepoint);
        let margin = self.lines[k].signed_distance_sinh(p) * self.basepoint_sides[k].sign();
        if !margin.is_finite() || margin.abs() < DESCENT_TOLERANCE {
            return Err(TriangleError::DegenerateSeparation { i, margin });
        }
        Ok(margin < 0.0)
    }

    /// `u ⋆ s_i`.
    pub fn demazure(&self, u: &GroupElement, i: usize) -> Result<GroupElement, TriangleError> {
        let mut out = u.clone();
        self.demazure_in_place(&mut out, i)?;
        Ok(out)
    }

    /// `u ← u ⋆ s_i`; returns whether `u` grew.
    pub fn demazure_in_place(&self, u: &mut GroupElement, i: usize) -> Result<bool, TriangleError> {
        if self.right_descent(u, i)? {
            return Ok(false);
        }
        self.extend(u, i);
        Ok(true)
    }

    /// `u ← u s_i` without the descent test.
    pub(crate) fn extend(&self, u: &mut GroupElement, i: usize) {
        u.isometry = u.isometry.compose(&self.generator(i));
        u.word.push(i as u8);
    }

    /// `s_{i1} ⋆ ... ⋆ s_{im}`.
    pub fn demazure_word(&self, word: &[u8]) -> Result<GroupElement, TriangleError> {
        let mut u = GroupElement::identity();
        for &i in word {
            self.demazure_in_place(&mut u, i as usize)?;
        }
        Ok(u)
    }

    /// The disk model normalized so that the basepoint is the center.
    pub fn disk_model(&self) -> Result<DiskModel, TriangleError> {
        let z0 = self.basepoint;
        let to_i = Isometry::from_matrix([1.0, -z0.re, 0.0, z0.im])?;
        let mut centers = [Complex64::new(0.0, 0.0); 3];
        let mut radii = [0.0; 3];
        for k in 0..3 {
            let line = to_i.apply_line(self.lines[k])?;
            match line.to_disk() {
                crate::hyperbolic::DiskLine::OrthoCircle { center, radius } => {
                    centers[k] = center;
                    radii[k] = radius;
                }
                crate::hyperbolic::DiskLine::Diameter { .. } => {
                    return Err(TriangleError::BasepointOnLine(k + 1));
                }
            }
        }
        Ok(DiskModel { centers, radii })
    }
}

fn builtin_raw(name: &str) -> Result<RawConfig, TriangleError> {
    use CoxeterEntry::{Finite as F, Infinite as Inf};
    let raw = match name {
        "pgl2" => RawConfig {
            lines: [HLine::Vertical(-0.5), HLine::Semicircle(0.0, 1.0), HLine::Vertical(0.0)],
            basepoint: [-0.25, 1.25],
            coxeter: [[F(1), F(3), Inf], [F(3), F(1), F(2)], [Inf, F(2), F(1)]],
        },
        "figure2" => RawConfig {
            lines: [HLine::Vertical(0.0), HLine::Semicircle(0.0, 1.0), HLine::Semicircle(3.0, 1.0)],
            basepoint: [0.5, 1.5],
            coxeter: [[F(1), F(2), Inf], [F(2), F(1), Inf], [Inf, Inf, F(1)]],
        },
        "ideal" => RawConfig {
            lines: [HLine::Vertical(-1.0), HLine::Semicircle(0.0, 1.0), HLine::Vertical(1.0)],
            basepoint: [0.0, 3f64.sqrt()],
            coxeter: [[F(1), Inf, Inf], [Inf, F(1), Inf], [Inf, Inf, F(1)]],
        },
        _ => return Err(TriangleError::UnknownBuiltin(name.to_string())),
    };
    Ok(raw)
}

fn violation(i: usize, j: usize, reason: impl Into<String>) -> TriangleError {
    TriangleError::AxiomViolation {
        i: i + 1,
        j: j + 1,
        reason: reason.into(),
    }
}

fn check_pair(lines: &[HLine; 3], sides: &[Side; 3], i: usize, j: usize, m: CoxeterEntry) -> Result<(), TriangleError> {
    let (a, b) = (lines[i], lines[j]);
    let (p, q) = b.ideal_points();
    let (sp, sq) = (a.side_of_boundary(p), a.side_of_boundary(q));
    if sp == Side::OnLine && sq == Side::OnLine {
        return Err(violation(i, j, "lines coincide"));
    }
    let crossing = sp != Side::OnLine && sq != Side::OnLine && sp != sq;
    if !crossing {
        let CoxeterEntry::Infinite = m else {
            return Err(violation(i, j, format!("lines are disjoint but m = {m}")));
        };
        // z0 must lie on the same side of each line as the other line.
        let b_side = if sp == Side::OnLine { sq } else { sp };
        let (r, s) = a.ideal_points();
        let a_side = match b.side_of_boundary(r) {
            Side::OnLine => b.side_of_boundary(s),
            other => other,
        };
        if b_side != sides[i] || a_side != sides[j] {
            return Err(violation(i, j, "basepoint is not between the lines"));
        }
        return Ok(());
    }
    let CoxeterEntry::Finite(m) = m else {
        return Err(violation(i, j, "lines intersect but m = inf"));
    };
    let x = intersection(a, b).ok_or_else(|| violation(i, j, "could not locate the intersection"))?;
    let na = normal(a, x) * sides[i].sign();
    let nb = normal(b, x) * sides[j].sign();
    let angle = PI - (na.re * nb.re + na.im * nb.im).clamp(-1.0, 1.0).acos();
    let expected = PI / m as f64;
    if (angle - expected).abs() > ANGLE_TOLERANCE {
        return Err(violation(
            i,
            j,
            format!("angle containing the basepoint is {angle}, expected pi/{m} = {expected}"),
        ));
    }
    Ok(())
}

/// Unit normal at `x` pointing to the `Positive` side.
fn normal(line: HLine, x: HPoint) -> Complex64 {
    match line {
        HLine::Vertical(_) => Complex64::new(1.0, 0.0),
        HLine::Semicircle(c, r) => Complex64::new(x.re - c, x.im) / r,
    }
}

fn intersection(a: HLine, b: HLine) -> Option<HPoint> {
    let on_circle = |x: f64, c: f64, r: f64| {
        let h = r * r - (x - c) * (x - c);
        (h > 0.0).then(|| HPoint { re: x, im: h.sqrt() })
    };
    match (a, b) {
        (HLine::Vertical(_), HLine::Vertical(_)) => None,
        (HLine::Vertical(x), HLine::Semicircle(c, r)) | (HLine::Semicircle(c, r), HLine::Vertical(x)) => on_circle(x, c, r),
        (HLine::Semicircle(c1, r1), HLine::Semicircle(c2, r2)) => {
            if c1 == c2 {
                return None;
            }
            let x = (r1 * r1 - r2 * r2 + c2 * c2 - c1 * c1) / (2.0 * (c2 - c1));
            on_circle(x, c1, r1)
        }
    }
}

/// An element of the triangle group with a reduced word for it.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    isometry: Isometry,
    word: Vec<u8>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement {
            isometry: Isometry::identity(),
            word: Vec::new(),
        }
    }

    pub fn isometry(&self) -> &Isometry {
        &self.isometry
    }

    /// Reduced word, indices in `1..=3`.
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn apply(&self, z: HPoint) -> HPoint {
        self.isometry.apply(z)
    }

    pub fn apply_boundary(&self, p: Boundary) -> Boundary {
        self.isometry.apply_boundary(p)
    }
}

/// The three lines in the disk model with the basepoint at the center:
/// circles `|z - c_i| = r_i` with `r_i² = |c_i|² - 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskModel {
    pub centers: [Complex64; 3],
    pub radii: [f64; 3],
}

impl DiskModel {
    /// `τ_i` in the disk: inversion in the `i`-th circle for points outside
    /// it (the basepoint's side), identity inside.
    pub fn tau(&self, i: usize, w: Complex64) -> Complex64 {
        let k = slot(i).expect("index in 1..=3");
        let (c, r) = (self.centers[k], self.radii[k]);
        if (w - c).norm() > r {
            r * r / (w.conj() - c.conj()) + c
        } else {
            w
        }
    }

    /// `min_i r_i / |x - c_i|` at the unit-circle point with angle `theta`.
    pub fn cover_ratio(&self, theta: f64) -> f64 {
        let x = Complex64::from_polar(1.0, theta);
        (0..3)
            .map(|k| self.radii[k] / (x - self.centers[k]).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Result of [`contraction_constant`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contraction {
    pub constant: f64,
    pub argmax: f64,
    pub disk: DiskModel,
}

/// `C = max over the unit circle of min_i r_i / |x - c_i|`, maximized on a
/// grid of [`CONTRACTION_GRID`] angles and refined by golden-section search
/// around the best grid point. Every grid point is checked to be covered
/// (ratio below 1).
pub fn contraction_constant(config: &TriangleConfig) -> Result<Contraction, TriangleError> {
    let disk = config.disk_model()?;
    let step = TAU / CONTRACTION_GRID as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for k in 0..CONTRACTION_GRID {
        let v = disk.cover_ratio(k as f64 * step);
        if !(v < 1.0) {
            return Err(TriangleError::NotContracting(v));
        }
        if v > best.1 {
            best = (k, v);
        }
    }
    let center = best.0 as f64 * step;
    let (mut lo, mut hi) = (center - step, center + step);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (disk.cover_ratio(x1), disk.cover_ratio(x2));
    for _ in 0..100 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = disk.cover_ratio(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = disk.cover_ratio(x1);
        }
    }
    let (argmax, constant) = [(center, best.1), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((center, f64::NEG_INFINITY), |acc, c| if c.1 > acc.1 { c } else { acc });
    if !(constant < 1.0) {
        return Err(TriangleError::NotContracting(constant));
    }
    Ok(Contraction {
        constant,
        argmax: crate::hyperbolic::normalize_angle(argmax),
        disk,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pgl2() -> TriangleConfig {
        TriangleConfig::builtin("pgl2").unwrap()
    }

    #[test]
    fn builtins_validate() {
        for name in TriangleConfig::builtin_names() {
            TriangleConfig::builtin(name).unwrap();
        }
        assert!(matches!(TriangleConfig::builtin("nope"), Err(TriangleError::UnknownBuiltin(_))));
    }

    #[test]
    fn basepoint_on_line_rejected() {
        assert_eq!(pgl2().with_basepoint(HPoint::i()), Err(TriangleError::BasepointOnLine(2)));
    }

    #[test]
    fn wrong_coxeter_rejected() {
        let mut raw = pgl2().to_raw();
        raw.coxeter[0][1] = CoxeterEntry::Finite(4);
        raw.coxeter[1][0] = CoxeterEntry::Finite(4);
        assert!(matches!(TriangleConfig::validate(&raw), Err(TriangleError::AxiomViolation { i: 1, j: 2, .. })));
        let mut raw = pgl2().to_raw();
        raw.coxeter[0][2] = CoxeterEntry::Finite(5);
        raw.coxeter[2][0] = CoxeterEntry::Finite(5);
        assert!(matches!(TriangleConfig::validate(&raw), Err(TriangleError::AxiomViolation { i: 1, j: 3, .. })));
    }

    #[test]
    fn one_way_reflections() {
        let c = pgl2();
        assert_eq!(c.one_way_reflect_boundary(3, Boundary::Finite(-2.0)), Boundary::Finite(2.0));
        assert_eq!(c.one_way_reflect_boundary(3, Boundary::Finite(2.0)), Boundary::Finite(2.0));
        let t = c.one_way_reflect_boundary(2, Boundary::Finite(-3.0));
        assert!((t.to_f64() + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.one_way_reflect_boundary(2, Boundary::Infinity), Boundary::Finite(0.0));
        assert_eq!(c.one_way_reflect_boundary(1, Boundary::Infinity), Boundary::Infinity);
    }

    #[test]
    fn descents_and_demazure() {
        let c = pgl2();
        let id = GroupElement::identity();
        for i in 1..=3 {
            assert!(!c.right_descent(&id, i).unwrap());
        }
        let s1 = c.demazure(&id, 1).unwrap();
        assert!(c.right_descent(&s1, 1).unwrap());
        assert_eq!(c.demazure(&s1, 1).unwrap(), s1);
        let s1s2 = c.demazure(&s1, 2).unwrap();
        assert!(c.right_descent(&s1s2, 2).unwrap());
        assert!(!c.right_descent(&s1s2, 1).unwrap());
        // s1 s2 s1 = s2 s1 s2 is the longest element of the order-6 parabolic
        let u = c.demazure_word(&[1, 2, 1, 2]).unwrap();
        assert_eq!(u.word(), &[1, 2, 1]);
        assert_eq!(c.demazure_word(&[1, 2, 1, 3]).unwrap().length(), 4);
        assert!(matches!(c.right_descent(&id, 4), Err(TriangleError::InvalidIndex(4))));
    }

    #[test]
    fn json_round_trip() {
        let raw = pgl2().to_raw();
        let text = serde_json::to_string(&raw).unwrap();
        assert!(text.contains("\"vertical\":-0.5"));
        assert!(text.contains("\"semicircle\":[0.0,1.0]"));
        assert!(text.contains("\"inf\""));
        assert_eq!(TriangleConfig::from_json(&text).unwrap(), pgl2());
    }

    #[test]
    fn contraction_below_one() {
        let c = contraction_constant(&pgl2()).unwrap();
        assert!(c.constant > 0.0 && c.constant < 1.0);
        for k in 0..3 {
            let (cc, r) = (c.disk.centers[k], c.disk.radii[k]);
            assert!((r * r - (cc.norm_sqr() - 1.0)).abs() < 1e-12);
        }
    }
}
