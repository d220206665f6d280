//! Planar primitives: points, vectors, the determinant bracket, lines and
//! affine maps.
//!
//! Everything here is plain `f64` arithmetic. Zero tests on area-like
//! quantities go through [`Tolerance`], which scales with the area of the
//! polygon under study so that verdicts do not depend on units.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// A displacement in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Checked constructor for coordinates coming from outside the crate.
    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Point { x, y })
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn to_vec2(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    /// `(1 - t) * self + t * other`.
    #[inline]
    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
        )
    }

    #[inline]
    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    #[inline]
    pub fn distance(self, other: Point) -> f64 {
        (other - self).length()
    }
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn length(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn to_point(self) -> Point {
        Point::new(self.x, self.y)
    }

    /// Unit vector in the same direction, `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec2> {
        let len = self.length();
        (len > 0.0 && len.is_finite()).then(|| self * (1.0 / len))
    }
}

impl Sub for Point {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Point) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add<Vec2> for Point {
    type Output = Point;
    #[inline]
    fn add(self, rhs: Vec2) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub<Vec2> for Point {
    type Output = Point;
    #[inline]
    fn sub(self, rhs: Vec2) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, rhs: Vec2) -> Vec2 {
        rhs * self
    }
}

/// The determinant `[a, b]` of the matrix with columns `a` and `b`.
#[inline]
pub fn bracket(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Shoelace area; positive for counterclockwise vertex order.
pub fn polygon_signed_area(vertices: &[Point]) -> f64 {
    let m = vertices.len();
    if m < 3 {
        return 0.0;
    }
    // Measured from the first vertex to keep cancellation small.
    let o = vertices[0];
    let mut twice = 0.0;
    for k in 1..m - 1 {
        twice += bracket(vertices[k] - o, vertices[k + 1] - o);
    }
    0.5 * twice
}

/// Largest distance between any two of the points.
pub fn diameter(points: &[Point]) -> f64 {
    let mut best: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.max(p.distance(*q));
        }
    }
    best
}

/// Zero-test thresholds that scale with a characteristic area.
///
/// Area-like quantities are compared against `max(abs_eps, rel_eps * scale)`;
/// length-like quantities against the square root of that.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub rel_eps: f64,
    pub scale: f64,
}

impl Tolerance {
    pub const DEFAULT_ABS: f64 = 1e-12;
    pub const DEFAULT_REL: f64 = 1e-9;

    pub fn for_area(area: f64) -> Self {
        Tolerance {
            abs_eps: Self::DEFAULT_ABS,
            rel_eps: Self::DEFAULT_REL,
            scale: area.abs(),
        }
    }

    #[inline]
    pub fn area(&self) -> f64 {
        self.abs_eps.max(self.rel_eps * self.scale)
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.area().sqrt()
    }
}

/// A line through `base` with non-zero direction `dir`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub base: Point,
    pub dir: Vec2,
}

impl Line {
    pub fn new(base: Point, dir: Vec2) -> Result<Self> {
        if !base.is_finite() || !dir.x.is_finite() || !dir.y.is_finite() {
            return Err(Error::NonFinite);
        }
        if dir.length() == 0.0 {
            return Err(Error::DegenerateInput("zero line direction".into()));
        }
        Ok(Line { base, dir })
    }

    /// The line through `p` and `q`, directed from `p` to `q`.
    pub fn through(p: Point, q: Point) -> Result<Self> {
        Line::new(p, q - p)
    }

    /// Signed area `[dir, x - base]`: positive to the left of the line.
    #[inline]
    pub fn side(&self, x: Point) -> f64 {
        bracket(self.dir, x - self.base)
    }

    /// Euclidean distance from `x` to the line.
    pub fn distance(&self, x: Point) -> f64 {
        self.side(x).abs() / self.dir.length()
    }

    /// Same line up to direction sign: parallel directions and base offset
    /// along the direction, both within `eps` (sine of angle / length).
    pub fn same_as(&self, other: &Line, eps: f64) -> bool {
        let (Some(d1), Some(d2)) = (self.dir.normalized(), other.dir.normalized()) else {
            return false;
        };
        bracket(d1, d2).abs() <= eps && bracket(d1, other.base - self.base).abs() <= eps
    }
}

/// Relative threshold under which two directions count as parallel.
pub const PARALLEL_EPS: f64 = 1e-12;

/// The unique common point of two non-parallel lines.
pub fn line_intersection(l1: &Line, l2: &Line) -> Result<Point> {
    let denom = bracket(l1.dir, l2.dir);
    if denom.abs() <= PARALLEL_EPS * l1.dir.length() * l2.dir.length() {
        return Err(Error::ParallelLines);
    }
    // base1 + s dir1 = base2 + t dir2  =>  s = [base2 - base1, dir2] / [dir1, dir2]
    let s = bracket(l2.base - l1.base, l2.dir) / denom;
    Ok(l1.base + l1.dir * s)
}

/// An affine map `x -> linear * x + translation`; `linear` is row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub linear: [[f64; 2]; 2],
    pub translation: Vec2,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap {
        linear: [[1.0, 0.0], [0.0, 1.0]],
        translation: Vec2::ZERO,
    };

    pub fn new(linear: [[f64; 2]; 2], translation: Vec2) -> Self {
        AffineMap {
            linear,
            translation,
        }
    }

    pub fn det(&self) -> f64 {
        let [[a, b], [c, d]] = self.linear;
        a * d - b * c
    }

    #[inline]
    pub fn apply_vec(&self, v: Vec2) -> Vec2 {
        let [[a, b], [c, d]] = self.linear;
        Vec2::new(a * v.x + b * v.y, c * v.x + d * v.y)
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        (self.apply_vec(p.to_vec2()) + self.translation).to_point()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let [[a, b], [c, d]] = self.linear;
        let [[e, f], [g, h]] = other.linear;
        AffineMap {
            linear: [
                [a * e + b * g, a * f + b * h],
                [c * e + d * g, c * f + d * h],
            ],
            translation: self.apply_vec(other.translation) + self.translation,
        }
    }

    pub fn is_invertible(&self, eps: f64) -> bool {
        let [[a, b], [c, d]] = self.linear;
        let norm = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
        self.det().abs() > eps * norm * norm
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        if !self.is_invertible(PARALLEL_EPS) {
            return Err(Error::DegenerateInput("singular affine map".into()));
        }
        let [[a, b], [c, d]] = self.linear;
        let det = self.det();
        let inv = AffineMap {
            linear: [[d / det, -b / det], [-c / det, a / det]],
            translation: Vec2::ZERO,
        };
        let t = inv.apply_vec(self.translation);
        Ok(AffineMap {
            translation: -t,
            ..inv
        })
    }
}

/// The affine frame in which `l1` and `l2` become the coordinate axes.
///
/// The intersection point goes to the origin, `l1.dir` to `(1, 0)` and
/// `l2.dir` to `(0, 1)`.
pub fn asymptote_frame(l1: &Line, l2: &Line) -> Result<AffineMap> {
    let origin = line_intersection(l1, l2)?;
    // Columns of B are the two directions; the frame is B^{-1} (x - origin).
    let basis = AffineMap::new(
        [[l1.dir.x, l2.dir.x], [l1.dir.y, l2.dir.y]],
        origin.to_vec2(),
    );
    basis.inverse()
}
