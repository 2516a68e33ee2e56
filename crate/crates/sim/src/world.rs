//! Obstacle primitives, the world container and their distance / ray queries.

use serde::{Deserialize, Serialize};
use starnav::Point2d;

use crate::SimError;

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point2d,
    pub max: Point2d,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self {
            min: Point2d::new(x0.min(x1), y0.min(y1)),
            max: Point2d::new(x0.max(x1), y0.max(y1)),
        }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn center(&self) -> Point2d {
        self.min.midpoint(self.max)
    }

    pub fn contains(&self, p: Point2d) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Euclidean distance from `p` to the rectangle (0 inside).
    pub fn distance(&self, p: Point2d) -> f64 {
        let dx = (self.min.x - p.x).max(0.0).max(p.x - self.max.x);
        let dy = (self.min.y - p.y).max(0.0).max(p.y - self.max.y);
        dx.hypot(dy)
    }

    /// Same rectangle shrunk by `m` on every side.
    pub fn shrink(&self, m: f64) -> Rect {
        Rect {
            min: Point2d::new(self.min.x + m, self.min.y + m),
            max: Point2d::new(self.max.x - m, self.max.y - m),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.min.is_finite() && self.max.is_finite() && self.min.x < self.max.x && self.min.y < self.max.y
    }

    pub fn corners(&self) -> [Point2d; 4] {
        [
            self.min,
            Point2d::new(self.max.x, self.min.y),
            self.max,
            Point2d::new(self.min.x, self.max.y),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Obstacle {
    Circle { center: Point2d, radius: f64 },
    /// Counter-clockwise vertices of a convex polygon.
    ConvexPolygon { vertices: Vec<Point2d> },
    /// A wall between two endpoints; positive thickness makes it a rectangle.
    Wall { a: Point2d, b: Point2d, thickness: f64 },
}

/// Smallest `t ≥ 0` at which `origin + t·dir` meets segment `[a, b]`; `dir` is unit length.
pub fn ray_segment(origin: Point2d, dir: Point2d, a: Point2d, b: Point2d) -> Option<f64> {
    let e = b - a;
    let denom = dir.cross(e);
    if denom.abs() < 1e-15 {
        return None;
    }
    let ao = a - origin;
    let t = ao.cross(e) / denom;
    let s = ao.cross(dir) / denom;
    (t >= 0.0 && (0.0..=1.0).contains(&s)).then_some(t)
}

pub fn point_segment_distance(p: Point2d, a: Point2d, b: Point2d) -> f64 {
    let e = b - a;
    let len2 = e.norm_squared();
    let s = if len2 > 0.0 { ((p - a).dot(e) / len2).clamp(0.0, 1.0) } else { 0.0 };
    p.distance(a + e * s)
}

fn polygon_contains(vertices: &[Point2d], p: Point2d) -> bool {
    let n = vertices.len();
    (0..n).all(|i| (vertices[(i + 1) % n] - vertices[i]).cross(p - vertices[i]) >= 0.0)
}

fn polygon_edges(vertices: &[Point2d]) -> impl Iterator<Item = (Point2d, Point2d)> + '_ {
    let n = vertices.len();
    (0..n).map(move |i| (vertices[i], vertices[(i + 1) % n]))
}

fn wall_rectangle(a: Point2d, b: Point2d, thickness: f64) -> Vec<Point2d> {
    let n = (b - a).normalized().map_or(Point2d::new(0.0, 1.0), |d| d.perp()) * (thickness * 0.5);
    vec![a - n, b - n, b + n, a + n]
}

impl Obstacle {
    pub fn circle(x: f64, y: f64, radius: f64) -> Self {
        Obstacle::Circle {
            center: Point2d::new(x, y),
            radius,
        }
    }

    pub fn wall(x0: f64, y0: f64, x1: f64, y1: f64, thickness: f64) -> Self {
        Obstacle::Wall {
            a: Point2d::new(x0, y0),
            b: Point2d::new(x1, y1),
            thickness,
        }
    }

    pub fn polygon(vertices: &[(f64, f64)]) -> Self {
        Obstacle::ConvexPolygon {
            vertices: vertices.iter().map(|&(x, y)| Point2d::new(x, y)).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        match self {
            Obstacle::Circle { center, radius } => {
                if !(center.is_finite() && *radius > 0.0 && radius.is_finite()) {
                    return Err(SimError::InvalidObstacle("circle radius must be positive".into()));
                }
            }
            Obstacle::ConvexPolygon { vertices } => {
                if vertices.len() < 3 || vertices.iter().any(|v| !v.is_finite()) {
                    return Err(SimError::InvalidObstacle("polygon needs at least 3 finite vertices".into()));
                }
                let n = vertices.len();
                let convex_ccw = (0..n).all(|i| {
                    let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
                    (b - a).cross(c - b) >= 0.0
                });
                if !convex_ccw {
                    return Err(SimError::InvalidObstacle("polygon must be convex and counter-clockwise".into()));
                }
            }
            Obstacle::Wall { a, b, thickness } => {
                if !(a.is_finite() && b.is_finite() && *thickness >= 0.0 && thickness.is_finite()) {
                    return Err(SimError::InvalidObstacle("wall thickness must be non-negative".into()));
                }
            }
        }
        Ok(())
    }

    /// Distance along a unit ray to the first contact; `Some(0)` if the origin is inside.
    pub fn ray_intersect(&self, origin: Point2d, dir: Point2d) -> Option<f64> {
        match self {
            Obstacle::Circle { center, radius } => {
                let oc = origin - *center;
                let b = dir.dot(oc);
                let c = oc.norm_squared() - radius * radius;
                if c <= 0.0 {
                    return Some(0.0);
                }
                let disc = b * b - c;
                if disc < 0.0 {
                    return None;
                }
                let t = -b - disc.sqrt();
                (t >= 0.0).then_some(t)
            }
            Obstacle::ConvexPolygon { vertices } => Self::ray_polygon(vertices, origin, dir),
            Obstacle::Wall { a, b, thickness } => {
                if *thickness > 0.0 {
                    Self::ray_polygon(&wall_rectangle(*a, *b, *thickness), origin, dir)
                } else {
                    ray_segment(origin, dir, *a, *b)
                }
            }
        }
    }

    fn ray_polygon(vertices: &[Point2d], origin: Point2d, dir: Point2d) -> Option<f64> {
        if polygon_contains(vertices, origin) {
            return Some(0.0);
        }
        polygon_edges(vertices)
            .filter_map(|(a, b)| ray_segment(origin, dir, a, b))
            .min_by(f64::total_cmp)
    }

    /// Distance from `p` to the obstacle (0 inside).
    pub fn distance(&self, p: Point2d) -> f64 {
        match self {
            Obstacle::Circle { center, radius } => (p.distance(*center) - radius).max(0.0),
            Obstacle::ConvexPolygon { vertices } => Self::polygon_distance(vertices, p),
            Obstacle::Wall { a, b, thickness } => {
                if *thickness > 0.0 {
                    Self::polygon_distance(&wall_rectangle(*a, *b, *thickness), p)
                } else {
                    point_segment_distance(p, *a, *b)
                }
            }
        }
    }

    fn polygon_distance(vertices: &[Point2d], p: Point2d) -> f64 {
        if polygon_contains(vertices, p) {
            return 0.0;
        }
        polygon_edges(vertices)
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether a disk of radius `r` at `p` overlaps the obstacle. A point inside a solid
    /// obstacle always overlaps, whatever the radius.
    pub fn intersects_disk(&self, p: Point2d, r: f64) -> bool {
        match self {
            Obstacle::Circle { center, radius } => p.distance(*center) < radius + r,
            Obstacle::ConvexPolygon { vertices } => polygon_contains(vertices, p) || Self::polygon_distance(vertices, p) < r,
            Obstacle::Wall { a, b, thickness } => {
                if *thickness > 0.0 {
                    let rect = wall_rectangle(*a, *b, *thickness);
                    polygon_contains(&rect, p) || Self::polygon_distance(&rect, p) < r
                } else {
                    point_segment_distance(p, *a, *b) < r
                }
            }
        }
    }

    /// Outline for plotting: a polygon, or a two-point polyline for thin walls.
    pub fn outline(&self) -> Vec<Point2d> {
        match self {
            Obstacle::Circle { center, radius } => (0..48)
                .map(|i| *center + Point2d::from_angle(i as f64 * std::f64::consts::TAU / 48.0) * *radius)
                .collect(),
            Obstacle::ConvexPolygon { vertices } => vertices.clone(),
            Obstacle::Wall { a, b, thickness } => {
                if *thickness > 0.0 {
                    wall_rectangle(*a, *b, *thickness)
                } else {
                    vec![*a, *b]
                }
            }
        }
    }
}

/// Bounded workspace; free space is the bounds minus every obstacle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct World {
    pub bounds: Rect,
    pub obstacles: Vec<Obstacle>,
}

impl World {
    pub fn new(bounds: Rect, obstacles: Vec<Obstacle>) -> Result<Self, SimError> {
        if !bounds.is_valid() {
            return Err(SimError::InvalidBounds);
        }
        for o in &obstacles {
            o.validate()?;
        }
        Ok(Self { bounds, obstacles })
    }

    pub fn empty(bounds: Rect) -> Self {
        Self {
            bounds,
            obstacles: Vec::new(),
        }
    }

    /// Distance to the nearest obstacle surface or bounds edge (0 when inside an obstacle
    /// or outside the bounds).
    pub fn clearance(&self, p: Point2d) -> f64 {
        let b = &self.bounds;
        let to_bounds = if b.contains(p) {
            (p.x - b.min.x).min(b.max.x - p.x).min(p.y - b.min.y).min(b.max.y - p.y)
        } else {
            0.0
        };
        self.obstacles.iter().map(|o| o.distance(p)).fold(to_bounds, f64::min)
    }

    /// Distance along a unit ray from an interior point to the bounds.
    pub fn ray_bounds(&self, origin: Point2d, dir: Point2d) -> f64 {
        let b = &self.bounds;
        let tx = if dir.x > 0.0 {
            (b.max.x - origin.x) / dir.x
        } else if dir.x < 0.0 {
            (b.min.x - origin.x) / dir.x
        } else {
            f64::INFINITY
        };
        let ty = if dir.y > 0.0 {
            (b.max.y - origin.y) / dir.y
        } else if dir.y < 0.0 {
            (b.min.y - origin.y) / dir.y
        } else {
            f64::INFINITY
        };
        tx.min(ty).max(0.0)
    }

    /// First contact along a unit ray with any obstacle or the bounds.
    pub fn ray_cast(&self, origin: Point2d, dir: Point2d) -> f64 {
        self.obstacles
            .iter()
            .filter_map(|o| o.ray_intersect(origin, dir))
            .fold(self.ray_bounds(origin, dir), f64::min)
    }
}

/// True iff a disk of `robot_radius` at `p` touches any obstacle or leaves the bounds.
pub fn check_collision(world: &World, p: Point2d, robot_radius: f64) -> bool {
    let b = &world.bounds;
    if p.x - robot_radius < b.min.x || p.x + robot_radius > b.max.x || p.y - robot_radius < b.min.y || p.y + robot_radius > b.max.y {
        return true;
    }
    world.obstacles.iter().any(|o| o.intersects_disk(p, robot_radius))
}
