//! Seeded forest generator and the shipped maze layouts.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use starnav::Point2d;

use crate::world::{Obstacle, Rect, World};
use crate::SimError;

/// Rejection attempts allowed per requested cylinder.
pub const ATTEMPTS_PER_CYLINDER: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub bounds: Rect,
    pub n_cylinders: usize,
    pub cylinder_radius: f64,
    pub min_gap: f64,
    pub start_zone: Rect,
    pub goal_zone: Rect,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            bounds: Rect::new(0.0, 0.0, 20.0, 20.0),
            n_cylinders: 25,
            cylinder_radius: 0.5,
            min_gap: 1.5,
            start_zone: Rect::new(1.0, 1.0, 3.0, 3.0),
            goal_zone: Rect::new(17.0, 17.0, 19.0, 19.0),
        }
    }
}

fn sample_in<R: Rng>(rng: &mut R, zone: &Rect) -> Point2d {
    Point2d::new(
        rng.random_range(zone.min.x..=zone.max.x),
        rng.random_range(zone.min.y..=zone.max.y),
    )
}

/// Rejection-samples cylinders and start/goal points. Cylinders stay inside the bounds,
/// keep `min_gap` from each other and `2·min_gap` from both zones.
pub fn gen_forest(seed: u64, params: &ForestParams) -> Result<(World, Point2d, Point2d), SimError> {
    let p = params;
    if !(p.min_gap >= 0.0 && p.cylinder_radius > 0.0) || !p.bounds.is_valid() {
        return Err(SimError::InvalidGenerator("forest parameters out of range".into()));
    }
    for zone in [&p.start_zone, &p.goal_zone] {
        if !zone.is_valid() || !p.bounds.contains(zone.min) || !p.bounds.contains(zone.max) {
            return Err(SimError::InvalidGenerator("zones must lie inside the bounds".into()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let area = p.bounds.shrink(p.cylinder_radius);
    if p.n_cylinders > 0 && !area.is_valid() {
        return Err(SimError::PlacementFailed { placed: 0, requested: p.n_cylinders });
    }
    let mut centers: Vec<Point2d> = Vec::with_capacity(p.n_cylinders);
    let mut attempts = 0;
    while centers.len() < p.n_cylinders {
        if attempts >= ATTEMPTS_PER_CYLINDER * p.n_cylinders {
            return Err(SimError::PlacementFailed {
                placed: centers.len(),
                requested: p.n_cylinders,
            });
        }
        attempts += 1;
        let c = sample_in(&mut rng, &area);
        let zone_clear = 2.0 * p.min_gap + p.cylinder_radius;
        if p.start_zone.distance(c) < zone_clear || p.goal_zone.distance(c) < zone_clear {
            continue;
        }
        if centers.iter().any(|o| o.distance(c) < 2.0 * p.cylinder_radius + p.min_gap) {
            continue;
        }
        centers.push(c);
    }
    let obstacles = centers
        .into_iter()
        .map(|center| Obstacle::Circle {
            center,
            radius: p.cylinder_radius,
        })
        .collect();
    let start = sample_in(&mut rng, &p.start_zone);
    let goal = sample_in(&mut rng, &p.goal_zone);
    Ok((World::new(p.bounds, obstacles)?, start, goal))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MazeLayout {
    pub world: World,
    pub start_zone: Rect,
    pub goal_zone: Rect,
    /// Dead-end interior, when the layout has one.
    pub trap: Option<Rect>,
}

pub const LAYOUTS: [&str; 2] = ["utrap", "slalom"];

pub fn gen_maze(layout_id: &str) -> Result<MazeLayout, SimError> {
    match layout_id {
        "utrap" => Ok(utrap()),
        "slalom" => Ok(slalom()),
        other => Err(SimError::UnknownLayout(other.to_string())),
    }
}

const WALL: f64 = 0.2;

// U-shaped dead-end opening toward the start, with clutter in the bypass corridors.
fn utrap() -> MazeLayout {
    let obstacles = vec![
        Obstacle::wall(7.0, 8.5, 12.0, 8.5, WALL),
        Obstacle::wall(7.0, 3.5, 12.0, 3.5, WALL),
        Obstacle::wall(12.0, 3.5, 12.0, 8.5, WALL),
        Obstacle::circle(4.5, 10.5, 0.4),
        Obstacle::polygon(&[(14.0, 9.8), (15.2, 10.2), (14.8, 11.0), (13.8, 10.7)]),
        Obstacle::polygon(&[(9.0, 1.0), (10.2, 0.9), (10.0, 1.8)]),
        Obstacle::circle(15.5, 2.5, 0.5),
    ];
    MazeLayout {
        world: World::new(Rect::new(0.0, 0.0, 20.0, 12.0), obstacles).expect("static layout"),
        start_zone: Rect::new(1.0, 5.0, 3.0, 7.0),
        goal_zone: Rect::new(17.0, 5.0, 19.0, 7.0),
        trap: Some(Rect::new(7.0, 3.6, 11.9, 8.4)),
    }
}

// Staggered walls forcing a weave through 2 m openings.
fn slalom() -> MazeLayout {
    let obstacles = vec![
        Obstacle::wall(6.0, 0.0, 6.0, 8.0, WALL),
        Obstacle::wall(11.0, 12.0, 11.0, 4.0, WALL),
        Obstacle::wall(16.0, 0.0, 16.0, 8.0, WALL),
        Obstacle::polygon(&[(8.0, 9.0), (9.0, 9.2), (8.6, 10.0)]),
        Obstacle::circle(13.5, 2.5, 0.4),
    ];
    MazeLayout {
        world: World::new(Rect::new(0.0, 0.0, 20.0, 12.0), obstacles).expect("static layout"),
        start_zone: Rect::new(1.0, 2.0, 3.0, 4.0),
        goal_zone: Rect::new(17.5, 2.0, 19.0, 4.0),
        trap: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forest_is_deterministic() {
        let p = ForestParams::default();
        let a = gen_forest(5, &p).unwrap();
        let b = gen_forest(5, &p).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.0.obstacles.len(), 25);
        assert_ne!(a, gen_forest(6, &p).unwrap());
    }

    #[test]
    fn empty_forest() {
        let p = ForestParams {
            n_cylinders: 0,
            ..ForestParams::default()
        };
        let (w, s, g) = gen_forest(1, &p).unwrap();
        assert!(w.obstacles.is_empty());
        assert!(p.start_zone.contains(s) && p.goal_zone.contains(g));
    }

    #[test]
    fn placement_failure() {
        let p = ForestParams {
            n_cylinders: 500,
            ..ForestParams::default()
        };
        assert!(matches!(gen_forest(1, &p), Err(SimError::PlacementFailed { .. })));
    }

    #[test]
    fn unknown_layout() {
        assert!(matches!(gen_maze("nope"), Err(SimError::UnknownLayout(_))));
        for id in LAYOUTS {
            assert!(gen_maze(id).is_ok());
        }
    }
}
