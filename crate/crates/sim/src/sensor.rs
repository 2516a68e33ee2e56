use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use starnav::{Beam, Point2d, Pose2d, Scand};

use crate::world::World;
use crate::SimError;

/// Shortest range a beam may report.
pub const MIN_RANGE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LidarModel {
    pub n_beams: usize,
    pub max_range: f64,
    #[serde(alias = "noise")]
    pub noise_stddev: f64,
}

impl Default for LidarModel {
    fn default() -> Self {
        Self {
            n_beams: 360,
            max_range: 5.0,
            noise_stddev: 0.0,
        }
    }
}

impl LidarModel {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.n_beams < 8 {
            return Err(SimError::InvalidLidar("n_beams must be at least 8"));
        }
        if !(self.max_range > 0.0 && self.max_range.is_finite()) {
            return Err(SimError::InvalidLidar("max_range must be positive"));
        }
        if !(self.noise_stddev >= 0.0 && self.noise_stddev.is_finite()) {
            return Err(SimError::InvalidLidar("noise_stddev must be non-negative"));
        }
        Ok(())
    }

    /// World-frame angle of beam `k`.
    pub fn beam_angle(&self, k: usize) -> f64 {
        -std::f64::consts::PI + k as f64 * std::f64::consts::TAU / self.n_beams as f64
    }
}

/// Raycast scan with noise drawn from a fresh generator seeded by `rng_seed`.
pub fn raycast_scan(world: &World, pose: &Pose2d, lidar: &LidarModel, rng_seed: u64) -> Result<Scand, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    raycast_scan_with(world, pose, lidar, &mut rng)
}

/// Raycast scan drawing noise from `rng`. The generator is left untouched when noise is off.
pub fn raycast_scan_with<R: Rng + ?Sized>(
    world: &World,
    pose: &Pose2d,
    lidar: &LidarModel,
    rng: &mut R,
) -> Result<Scand, SimError> {
    lidar.validate()?;
    let origin = pose.position;
    if !origin.is_finite() || !world.bounds.contains(origin) {
        return Err(SimError::PoseOutOfBounds { x: origin.x, y: origin.y });
    }
    let noise = if lidar.noise_stddev > 0.0 {
        Some(Normal::new(0.0, lidar.noise_stddev).map_err(|_| SimError::InvalidLidar("bad noise"))?)
    } else {
        None
    };
    let beams = (0..lidar.n_beams)
        .map(|k| {
            let angle = lidar.beam_angle(k);
            let mut range = world.ray_cast(origin, Point2d::from_angle(angle));
            if let Some(n) = &noise {
                range += n.sample(rng);
            }
            if range >= lidar.max_range {
                Beam {
                    angle,
                    range: lidar.max_range,
                    at_max_range: true,
                }
            } else {
                Beam {
                    angle,
                    range: range.max(MIN_RANGE),
                    at_max_range: false,
                }
            }
        })
        .collect();
    Ok(Scand::new(origin, beams, lidar.max_range)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{Obstacle, Rect};
    use approx::assert_relative_eq;

    #[test]
    fn circle_beam_and_empty_world() {
        let bounds = Rect::new(-20.0, -20.0, 20.0, 20.0);
        let w = World::new(bounds, vec![Obstacle::circle(3.0, 0.0, 0.5)]).unwrap();
        let lidar = LidarModel::default();
        let scan = raycast_scan(&w, &Pose2d::new(Point2d::zero(), 0.0), &lidar, 0).unwrap();
        assert_eq!(scan.len(), 360);
        let b = scan.beams()[180];
        assert_eq!(b.angle, 0.0);
        assert_relative_eq!(b.range, 2.5, epsilon = 1e-12);
        assert!(!b.at_max_range);

        let empty = World::empty(bounds);
        let scan = raycast_scan(&empty, &Pose2d::new(Point2d::zero(), 1.0), &lidar, 0).unwrap();
        assert!(scan.beams().iter().all(|b| b.at_max_range && b.range == 5.0));
    }

    #[test]
    fn pose_out_of_bounds() {
        let w = World::empty(Rect::new(0.0, 0.0, 1.0, 1.0));
        let err = raycast_scan(&w, &Pose2d::new(Point2d::new(2.0, 0.5), 0.0), &LidarModel::default(), 0);
        assert!(matches!(err, Err(SimError::PoseOutOfBounds { .. })));
    }

    #[test]
    fn noise_is_seeded_and_clamped() {
        let w = World::new(Rect::new(-3.0, -3.0, 3.0, 3.0), vec![Obstacle::circle(1.0, 0.0, 0.2)]).unwrap();
        let lidar = LidarModel {
            noise_stddev: 0.5,
            ..LidarModel::default()
        };
        let pose = Pose2d::new(Point2d::zero(), 0.0);
        let a = raycast_scan(&w, &pose, &lidar, 7).unwrap();
        let b = raycast_scan(&w, &pose, &lidar, 7).unwrap();
        let c = raycast_scan(&w, &pose, &lidar, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.beams().iter().all(|b| b.range > 0.0 && b.range <= 5.0));
    }

    #[test]
    fn lidar_validation() {
        let bad = LidarModel {
            n_beams: 4,
            ..LidarModel::default()
        };
        assert!(bad.validate().is_err());
        let bad = LidarModel {
            noise_stddev: -1.0,
            ..LidarModel::default()
        };
        assert!(bad.validate().is_err());
    }
}
