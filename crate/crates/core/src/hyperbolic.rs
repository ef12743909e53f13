//! Half-plane and disk models of the hyperbolic plane: points, ideal
//! points, lines, reflections and isometries in `f64`.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Points closer to a line than this (in signed `sinh` distance) count as
/// lying on it.
pub const SIDE_TOLERANCE: f64 = 1e-12;

/// Compositions between two rescalings of an isometry matrix.
pub const RENORMALIZE_EVERY: u32 = 64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point {re} + {im}i is not in the upper half-plane")]
    NotInHalfPlane { re: f64, im: f64 },
    #[error("line parameters must be finite with positive radius")]
    InvalidLine,
    #[error("ideal points of a line must be distinct")]
    CoincidentIdealPoints,
    #[error("matrix is singular or not finite")]
    SingularMatrix,
}

/// A point `re + im·i` of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub re: f64,
    pub im: f64,
}

impl HPoint {
    pub fn new(re: f64, im: f64) -> Result<Self, GeometryError> {
        if !(re.is_finite() && im.is_finite() && im > 0.0) {
            return Err(GeometryError::NotInHalfPlane { re, im });
        }
        Ok(HPoint { re, im })
    }

    pub fn i() -> Self {
        HPoint { re: 0.0, im: 1.0 }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    fn from_complex(z: Complex64) -> Self {
        HPoint {
            re: z.re,
            im: z.im.max(f64::MIN_POSITIVE),
        }
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

/// A point of the extended real line, the boundary of the half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Finite(f64),
    Infinity,
}

impl Boundary {
    /// Angle in `[0, 2π)` of the Cayley image on the unit circle; `∞` sits
    /// at angle 0 and `0` at angle `π`.
    pub fn angle(self) -> f64 {
        match self {
            Boundary::Infinity => 0.0,
            // arg(x - i) - arg(x + i)
            Boundary::Finite(x) => normalize_angle(-2.0 * 1.0f64.atan2(x)),
        }
    }

    /// Inverse of [`Boundary::angle`]: `x = -cot(θ/2)`.
    pub fn from_angle(theta: f64) -> Self {
        let t = normalize_angle(theta);
        if t == 0.0 {
            return Boundary::Infinity;
        }
        let half = t / 2.0;
        Boundary::Finite(-half.cos() / half.sin())
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Boundary::Finite(x) => x,
            Boundary::Infinity => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Boundary::Finite(_))
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Finite(x) => write!(f, "{x}"),
            Boundary::Infinity => write!(f, "inf"),
        }
    }
}

/// Reduces an angle to `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Which side of a line a point lies on. For vertical lines `Positive` is
/// the right; for semicircles it is the outside.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Negative,
    OnLine,
    Positive,
}

impl Side {
    fn of(margin: f64, tol: f64) -> Self {
        if margin > tol {
            Side::Positive
        } else if margin < -tol {
            Side::Negative
        } else {
            Side::OnLine
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Side::Negative => Side::Positive,
            Side::OnLine => Side::OnLine,
            Side::Positive => Side::Negative,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Side::Negative => -1.0,
            Side::OnLine => 0.0,
            Side::Positive => 1.0,
        }
    }
}

/// A hyperbolic line of the half-plane model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HLine {
    Vertical(f64),
    Semicircle(f64, f64),
}

impl HLine {
    pub fn vertical(x: f64) -> Result<Self, GeometryError> {
        if !x.is_finite() {
            return Err(GeometryError::InvalidLine);
        }
        Ok(HLine::Vertical(x))
    }

    pub fn semicircle(center: f64, radius: f64) -> Result<Self, GeometryError> {
        if !(center.is_finite() && radius.is_finite() && radius > 0.0) {
            return Err(GeometryError::InvalidLine);
        }
        Ok(HLine::Semicircle(center, radius))
    }

    pub fn validate(self) -> Result<Self, GeometryError> {
        match self {
            HLine::Vertical(x) => Self::vertical(x),
            HLine::Semicircle(c, r) => Self::semicircle(c, r),
        }
    }

    /// The unique line with the given ideal points.
    pub fn through(p: Boundary, q: Boundary) -> Result<Self, GeometryError> {
        match (p, q) {
            (Boundary::Infinity, Boundary::Infinity) => Err(GeometryError::CoincidentIdealPoints),
            (Boundary::Infinity, Boundary::Finite(x)) | (Boundary::Finite(x), Boundary::Infinity) => {
                Self::vertical(x)
            }
            (Boundary::Finite(a), Boundary::Finite(b)) => {
                if a == b {
                    return Err(GeometryError::CoincidentIdealPoints);
                }
                Self::semicircle((a + b) / 2.0, (a - b).abs() / 2.0)
            }
        }
    }

    /// Ideal points, smaller finite one first.
    pub fn ideal_points(self) -> (Boundary, Boundary) {
        match self {
            HLine::Vertical(x) => (Boundary::Finite(x), Boundary::Infinity),
            HLine::Semicircle(c, r) => (Boundary::Finite(c - r), Boundary::Finite(c + r)),
        }
    }

    /// `t_L(z)`.
    pub fn reflect(self, z: HPoint) -> HPoint {
        let w = z.to_complex();
        match self {
            HLine::Vertical(x) => HPoint::from_complex(Complex64::new(2.0 * x, 0.0) - w.conj()),
            HLine::Semicircle(c, r) => {
                let v = r * r / (w.conj() - c) + c;
                HPoint::from_complex(v)
            }
        }
    }

    /// Continuous extension of `t_L` to the boundary.
    pub fn reflect_boundary(self, p: Boundary) -> Boundary {
        match (self, p) {
            (HLine::Vertical(_), Boundary::Infinity) => Boundary::Infinity,
            (HLine::Vertical(x), Boundary::Finite(t)) => Boundary::Finite(2.0 * x - t),
            (HLine::Semicircle(c, _), Boundary::Infinity) => Boundary::Finite(c),
            (HLine::Semicircle(c, r), Boundary::Finite(t)) => {
                if t == c {
                    Boundary::Infinity
                } else {
                    Boundary::Finite(r * r / (t - c) + c)
                }
            }
        }
    }

    /// Signed `sinh` of the hyperbolic distance from `z` to the line,
    /// positive on the `Positive` side. Invariant under isometries up to
    /// sign.
    pub fn signed_distance_sinh(self, z: HPoint) -> f64 {
        match self {
            HLine::Vertical(x) => (z.re - x) / z.im,
            HLine::Semicircle(c, r) => {
                let dx = z.re - c;
                // (|z - c|² - r²) / (2 r y), factored to limit cancellation
                let d = dx.hypot(z.im);
                (d - r) * (d + r) / (2.0 * r * z.im)
            }
        }
    }

    pub fn side_of(self, z: HPoint) -> Side {
        Side::of(self.signed_distance_sinh(z), SIDE_TOLERANCE)
    }

    /// Side of an ideal point; the line's own ideal points are `OnLine`.
    pub fn side_of_boundary(self, p: Boundary) -> Side {
        match (self, p) {
            (HLine::Vertical(_), Boundary::Infinity) => Side::OnLine,
            (HLine::Vertical(x), Boundary::Finite(t)) => Side::of(t - x, SIDE_TOLERANCE * x.abs().max(1.0)),
            (HLine::Semicircle(..), Boundary::Infinity) => Side::Positive,
            (HLine::Semicircle(c, r), Boundary::Finite(t)) => {
                Side::of((t - c).abs() - r, SIDE_TOLERANCE * r.max(c.abs()).max(1.0))
            }
        }
    }

    /// The matrix of `t_L`, an orientation-reversing isometry.
    pub fn reflection(self) -> Isometry {
        match self {
            HLine::Vertical(x) => Isometry::from_matrix([-1.0, 2.0 * x, 0.0, 1.0]).expect("det -1"),
            HLine::Semicircle(c, r) => {
                Isometry::from_matrix([c, r * r - c * c, 1.0, -c]).expect("det -r^2")
            }
        }
    }

    /// Image under the Cayley transform.
    pub fn to_disk(self) -> DiskLine {
        let (p, q) = self.ideal_points();
        DiskLine::through(cayley_boundary(p), cayley_boundary(q))
    }
}

impl fmt::Display for HLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HLine::Vertical(x) => write!(f, "Re z = {x}"),
            HLine::Semicircle(c, r) => write!(f, "|z - {c}| = {r}"),
        }
    }
}

/// A hyperbolic line of the disk model: a diameter through `direction`, or
/// the circle centered at `center` orthogonal to the unit circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiskLine {
    Diameter { direction: Complex64 },
    OrthoCircle { center: Complex64, radius: f64 },
}

impl DiskLine {
    /// Line with the given ideal points on the unit circle.
    pub fn through(a: Complex64, b: Complex64) -> Self {
        let s = a + b;
        if s.norm() < 1e-12 {
            return DiskLine::Diameter { direction: a };
        }
        let center = s * (2.0 / s.norm_sqr());
        let radius = (center.norm_sqr() - 1.0).max(0.0).sqrt();
        DiskLine::OrthoCircle { center, radius }
    }

    pub fn reflect(self, w: Complex64) -> Complex64 {
        match self {
            DiskLine::Diameter { direction } => w.conj() * direction / direction.conj(),
            DiskLine::OrthoCircle { center, .. } => {
                (center.norm_sqr() - 1.0) / (w.conj() - center.conj()) + center
            }
        }
    }
}

/// `φ(z) = (z - i)/(z + i)`.
pub fn cayley(z: HPoint) -> Complex64 {
    let w = z.to_complex();
    (w - I) / (w + I)
}

/// `φ⁻¹(w) = i(1 + w)/(1 - w)` for `|w| < 1`.
pub fn cayley_inverse(w: Complex64) -> Result<HPoint, GeometryError> {
    let z = I * (1.0 + w) / (1.0 - w);
    HPoint::new(z.re, z.im)
}

/// Cayley image of an ideal point, on the unit circle.
pub fn cayley_boundary(p: Boundary) -> Complex64 {
    Complex64::from_polar(1.0, p.angle())
}

/// Ideal point with the given unit-circle image.
pub fn cayley_inverse_boundary(w: Complex64) -> Boundary {
    Boundary::from_angle(w.arg())
}

/// `d(z, w) = 2 asinh(|z - w| / (2 sqrt(Im z Im w)))`.
pub fn hyperbolic_distance(z: HPoint, w: HPoint) -> f64 {
    let chord = (z.re - w.re).hypot(z.im - w.im);
    2.0 * (chord / (2.0 * (z.im * w.im).sqrt())).asinh()
}

/// An isometry of the half-plane: a real matrix `[a, b, c, d]` with
/// determinant `±1`, acting by `(az + b)/(cz + d)` when the determinant is
/// positive and by `(a z̄ + b)/(c z̄ + d)` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    m: [f64; 4],
    orientation: i8,
    #[serde(skip)]
    pending: u32,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry {
            m: [1.0, 0.0, 0.0, 1.0],
            orientation: 1,
            pending: 0,
        }
    }

    /// Scales the matrix to determinant `±1`; the sign fixes the orientation.
    pub fn from_matrix(m: [f64; 4]) -> Result<Self, GeometryError> {
        let det = m[0] * m[3] - m[1] * m[2];
        if !det.is_finite() || det == 0.0 || m.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::SingularMatrix);
        }
        let s = det.abs().sqrt().recip();
        Ok(Isometry {
            m: m.map(|v| v * s),
            orientation: if det > 0.0 { 1 } else { -1 },
            pending: 0,
        })
    }

    pub fn matrix(&self) -> [f64; 4] {
        self.m
    }

    /// `+1` for Möbius maps, `-1` for conjugate-Möbius maps.
    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn det(&self) -> f64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        let mut out = Isometry {
            m: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
            orientation: self.orientation * other.orientation,
            pending: self.pending + other.pending + 1,
        };
        if out.pending >= RENORMALIZE_EVERY {
            out.renormalize();
        }
        out
    }

    /// Rescales to `|det| = 1`.
    pub fn renormalize(&mut self) {
        let s = self.det().abs().sqrt().recip();
        self.m = self.m.map(|v| v * s);
        self.pending = 0;
    }

    pub fn inverse(&self) -> Isometry {
        let [a, b, c, d] = self.m;
        let det = self.det();
        Isometry {
            m: [d / det, -b / det, -c / det, a / det],
            orientation: self.orientation,
            pending: self.pending,
        }
    }

    /// Largest absolute matrix entry after normalization.
    pub fn norm(&self) -> f64 {
        let s = self.det().abs().sqrt();
        self.m.iter().fold(0.0f64, |acc, v| acc.max(v.abs())) / s
    }

    pub fn apply(&self, z: HPoint) -> HPoint {
        let w = if self.orientation < 0 { z.to_complex().conj() } else { z.to_complex() };
        let [a, b, c, d] = self.m;
        let num = w * a + b;
        let den = w * c + d;
        let v = num / den;
        // Im is recomputed from the determinant to stay positive.
        let im = self.det().abs() * z.im / den.norm_sqr();
        HPoint::from_complex(Complex64::new(v.re, im))
    }

    pub fn apply_boundary(&self, p: Boundary) -> Boundary {
        let [a, b, c, d] = self.m;
        match p {
            Boundary::Infinity => {
                if c == 0.0 {
                    Boundary::Infinity
                } else {
                    Boundary::Finite(a / c)
                }
            }
            Boundary::Finite(x) => {
                let den = c * x + d;
                if den == 0.0 {
                    Boundary::Infinity
                } else {
                    Boundary::Finite((a * x + b) / den)
                }
            }
        }
    }

    /// Image of a line, through the images of its ideal points.
    pub fn apply_line(&self, line: HLine) -> Result<HLine, GeometryError> {
        let (p, q) = line.ideal_points();
        HLine::through(self.apply_boundary(p), self.apply_boundary(q))
    }
}

impl Default for Isometry {
    fn default() -> Self {
        Self::identity()
    }
}

/// Angular length of the counterclockwise arc from `start` to `end`.
pub fn arc_length(start: f64, end: f64) -> f64 {
    let l = normalize_angle(end - start);
    if l == 0.0 && start != end {
        TAU
    } else {
        l
    }
}

/// A closed counterclockwise arc of the unit circle, stored by start angle
/// and length. Length `2π` is the full circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub len: f64,
}

impl Arc {
    pub fn full() -> Self {
        Arc { start: 0.0, len: TAU }
    }

    pub fn is_full(&self) -> bool {
        self.len >= TAU
    }

    pub fn end(&self) -> f64 {
        normalize_angle(self.start + self.len)
    }

    pub fn midpoint(&self) -> f64 {
        normalize_angle(self.start + self.len / 2.0)
    }

    /// Offset of `theta` from the start, in `[0, 2π)`.
    fn offset(&self, theta: f64) -> f64 {
        normalize_angle(theta - self.start)
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.is_full() || self.offset(theta) <= self.len
    }

    /// Intersection with another arc. When the two arcs overlap in two
    /// pieces, the piece containing `hint` is kept.
    pub fn intersect(&self, other: &Arc, hint: f64) -> Option<Arc> {
        if self.is_full() {
            return Some(*other);
        }
        if other.is_full() {
            return Some(*self);
        }
        let mut pieces = Vec::with_capacity(2);
        // other's start inside self: [other.start, min(ends)]
        let os = self.offset(other.start);
        if os <= self.len {
            pieces.push(Arc {
                start: other.start,
                len: other.len.min(self.len - os),
            });
        }
        let so = other.offset(self.start);
        if so <= other.len && so > 0.0 {
            pieces.push(Arc {
                start: self.start,
                len: self.len.min(other.len - so),
            });
        }
        match pieces.len() {
            0 => None,
            1 => pieces.pop(),
            _ => {
                let pick = pieces.iter().position(|a| a.contains(hint)).unwrap_or(0);
                Some(pieces[pick])
            }
        }
    }
}
