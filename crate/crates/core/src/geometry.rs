//! Planar points, poses, angles and the polar transforms used by the rest of the crate.
//!
//! Angles live in the half-open interval `[-π, π)`. A breakpoint at `π` is therefore
//! always reported as `-π`.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point coincides with the reference point")]
    DegeneratePoint,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("invalid scan: {0}")]
    InvalidScan(String),
}

/// A point (or free vector) in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

/// Displacements share the point representation.
pub type Vector2<T> = Point2<T>;

impl<T: Real> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    /// Like [`Point2::new`] but rejects NaN and infinite components.
    pub fn try_new(x: T, y: T) -> Result<Self, GeometryError> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(GeometryError::NonFinite)
        }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    /// Unit vector at `angle`.
    pub fn from_angle(angle: T) -> Self {
        Self::new(angle.cos(), angle.sin())
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    pub fn angle(self) -> T {
        self.y.atan2(self.x)
    }

    /// Returns `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn midpoint(self, other: Self) -> Self {
        let half = T::lit(0.5);
        Self::new((self.x + other.x) * half, (self.y + other.y) * half)
    }

    pub fn cast<U: Real>(self) -> Point2<U> {
        Point2::new(U::lit(self.x.to_f64_lossy()), U::lit(self.y.to_f64_lossy()))
    }
}

impl<T: Real> Add for Point2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Real> AddAssign for Point2<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Real> SubAssign for Point2<T> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Real> Mul<T> for Point2<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

impl<T: Real> Div<T> for Point2<T> {
    type Output = Self;
    fn div(self, k: T) -> Self {
        Self::new(self.x / k, self.y / k)
    }
}

impl<T: Real> Neg for Point2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Planar pose; the heading is kept wrapped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose2<T> {
    pub position: Point2<T>,
    heading: T,
}

impl<T: Real> Pose2<T> {
    pub fn new(position: Point2<T>, heading: T) -> Self {
        Self {
            position,
            heading: wrap_angle(heading),
        }
    }

    pub fn heading(&self) -> T {
        self.heading
    }

    pub fn set_heading(&mut self, heading: T) {
        self.heading = wrap_angle(heading);
    }
}

/// `(θ, d)` pair about some reference point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarCoord<T> {
    pub theta: T,
    pub dist: T,
}

impl<T: Real> PolarCoord<T> {
    /// Wraps `theta`; `dist` must be non-negative.
    pub fn new(theta: T, dist: T) -> Self {
        debug_assert!(dist >= T::zero());
        Self {
            theta: wrap_angle(theta),
            dist,
        }
    }
}

/// Wraps an angle into `[-π, π)`.
///
/// Values already in range are returned untouched, which makes the function idempotent
/// even where `a + π` would round up to `2π`.
pub fn wrap_angle<T: Real>(a: T) -> T {
    let pi = T::PI();
    if a >= -pi && a < pi {
        return a;
    }
    let two_pi = T::TAU();
    let mut r = (a + pi) % two_pi;
    if r < T::zero() {
        r = r + two_pi;
    }
    let out = r - pi;
    if out >= pi || out < -pi {
        -pi
    } else {
        out
    }
}

/// Signed shortest difference `b - a`, wrapped into `[-π, π)`.
pub fn angle_diff<T: Real>(a: T, b: T) -> T {
    wrap_angle(b - a)
}

/// Counter-clockwise angular distance from `from` to `to`, in `[0, 2π)`.
pub fn ccw_distance<T: Real>(from: T, to: T) -> T {
    let d = wrap_angle(to - from);
    if d < T::zero() {
        d + T::TAU()
    } else {
        d
    }
}

pub fn cart_to_polar<T: Real>(reference: Point2<T>, p: Point2<T>) -> Result<PolarCoord<T>, GeometryError> {
    let d = p - reference;
    if d.x == T::zero() && d.y == T::zero() {
        return Err(GeometryError::DegeneratePoint);
    }
    Ok(PolarCoord {
        theta: wrap_angle(d.y.atan2(d.x)),
        dist: d.norm(),
    })
}

pub fn polar_to_cart<T: Real>(reference: Point2<T>, pc: PolarCoord<T>) -> Point2<T> {
    reference + Point2::from_angle(pc.theta) * pc.dist
}

/// One LiDAR return.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Beam<T> {
    pub angle: T,
    pub range: T,
    pub at_max_range: bool,
}

/// A single LiDAR sweep taken at `origin`, beams in world-frame angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScan<T>", bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct Scan<T> {
    origin: Point2<T>,
    beams: Vec<Beam<T>>,
    max_range: T,
}

#[derive(Deserialize)]
struct RawScan<T> {
    origin: Point2<T>,
    beams: Vec<Beam<T>>,
    max_range: T,
}

impl<T: Real> TryFrom<RawScan<T>> for Scan<T> {
    type Error = GeometryError;
    fn try_from(raw: RawScan<T>) -> Result<Self, Self::Error> {
        Scan::new(raw.origin, raw.beams, raw.max_range)
    }
}

impl<T: Real> Scan<T> {
    /// Validates the sweep: strictly increasing wrapped angles, ranges in `(0, max_range]`,
    /// and the max-range flag consistent with the range.
    pub fn new(origin: Point2<T>, beams: Vec<Beam<T>>, max_range: T) -> Result<Self, GeometryError> {
        if !origin.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if !(max_range > T::zero() && max_range.is_finite()) {
            return Err(GeometryError::InvalidScan("max_range must be positive".into()));
        }
        let pi = T::PI();
        for (i, b) in beams.iter().enumerate() {
            if !(b.angle >= -pi && b.angle < pi) {
                return Err(GeometryError::InvalidScan(format!("beam {i} angle out of [-pi, pi)")));
            }
            if i > 0 && b.angle <= beams[i - 1].angle {
                return Err(GeometryError::InvalidScan(format!("beam {i} angle not increasing")));
            }
            if !(b.range > T::zero() && b.range <= max_range) {
                return Err(GeometryError::InvalidScan(format!("beam {i} range out of (0, max_range]")));
            }
            if b.at_max_range != (b.range == max_range) {
                return Err(GeometryError::InvalidScan(format!("beam {i} max-range flag mismatch")));
            }
        }
        Ok(Self {
            origin,
            beams,
            max_range,
        })
    }

    /// Builds a scan from ranges at uniformly spaced angles starting at `-π`.
    /// Ranges are clamped into `(0, max_range]`.
    pub fn from_ranges(origin: Point2<T>, ranges: &[T], max_range: T) -> Result<Self, GeometryError> {
        let n = ranges.len();
        let step = T::TAU() / T::from_usize_lossy(n.max(1));
        let beams = ranges
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let range = r.min(max_range).max(T::lit(1e-6));
                Beam {
                    angle: -T::PI() + step * T::from_usize_lossy(i),
                    range,
                    at_max_range: range == max_range,
                }
            })
            .collect();
        Self::new(origin, beams, max_range)
    }

    pub fn origin(&self) -> Point2<T> {
        self.origin
    }

    pub fn beams(&self) -> &[Beam<T>] {
        &self.beams
    }

    pub fn max_range(&self) -> T {
        self.max_range
    }

    pub fn len(&self) -> usize {
        self.beams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beams.is_empty()
    }

    pub fn endpoint(&self, beam: &Beam<T>) -> Point2<T> {
        self.origin + Point2::from_angle(beam.angle) * beam.range
    }

    /// Cartesian endpoints of every beam, max-range ones included.
    pub fn endpoints(&self) -> impl Iterator<Item = Point2<T>> + '_ {
        self.beams.iter().map(move |b| self.endpoint(b))
    }

    /// Endpoints of beams that hit something.
    pub fn hits(&self) -> impl Iterator<Item = Point2<T>> + '_ {
        self.beams
            .iter()
            .filter(|b| !b.at_max_range)
            .map(move |b| self.endpoint(b))
    }

    /// The hit closest to `p`, if any beam hit something.
    pub fn nearest_hit(&self, p: Point2<T>) -> Option<Point2<T>> {
        let mut best: Option<(T, Point2<T>)> = None;
        for h in self.hits() {
            let d = (h - p).norm_squared();
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, h));
            }
        }
        best.map(|(_, h)| h)
    }
}
