//! Versioned JSON scenario files.

use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use starnav::Point2d;

use crate::generate::{gen_forest, gen_maze, ForestParams};
use crate::sensor::LidarModel;
use crate::world::{check_collision, Obstacle, Rect, World};
use crate::SimError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RobotParams {
    pub radius: f64,
    pub v_max: f64,
    pub w_max: f64,
}

impl Default for RobotParams {
    fn default() -> Self {
        Self {
            radius: 0.25,
            v_max: 0.5,
            w_max: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    Forest(ForestParams),
    Maze { layout: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub schema: u32,
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Generator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Rect>,
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
    #[serde(default)]
    pub lidar: LidarModel,
    #[serde(default)]
    pub robot: RobotParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Point2d>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<Point2d>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_zone: Option<Rect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal_zone: Option<Rect>,
    #[serde(default)]
    pub seed: u64,
}

/// A concrete world with start and goal, ready for an episode.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedScenario {
    pub world: World,
    pub start: Point2d,
    pub goal: Point2d,
    pub trap: Option<Rect>,
}

impl ScenarioFile {
    pub fn forest(params: ForestParams) -> Self {
        Self::with_generator("forest", Generator::Forest(params))
    }

    pub fn maze(layout: &str) -> Self {
        Self::with_generator(layout, Generator::Maze { layout: layout.to_string() })
    }

    pub fn explicit(world: World, start: Point2d, goal: Point2d) -> Self {
        let mut s = Self::with_generator("explicit", Generator::Maze { layout: String::new() });
        s.generator = None;
        s.bounds = Some(world.bounds);
        s.obstacles = world.obstacles;
        s.start = Some(start);
        s.goal = Some(goal);
        s
    }

    fn with_generator(name: &str, generator: Generator) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            name: name.to_string(),
            generator: Some(generator),
            bounds: None,
            obstacles: Vec::new(),
            lidar: LidarModel::default(),
            robot: RobotParams::default(),
            start: None,
            goal: None,
            start_zone: None,
            goal_zone: None,
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, SimError> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| SimError::Parse(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, SimError> {
        let text = std::fs::read_to_string(path).map_err(|e| SimError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.schema != SCHEMA_VERSION {
            return Err(SimError::UnsupportedSchema(self.schema));
        }
        self.lidar.validate()?;
        let r = &self.robot;
        if !(r.radius >= 0.0 && r.v_max > 0.0 && r.w_max > 0.0) {
            return Err(SimError::InvalidGenerator("robot radius, v_max and w_max must be positive".into()));
        }
        if self.generator.is_none() && self.bounds.is_none() {
            return Err(SimError::InvalidGenerator("scenario needs either a generator or bounds".into()));
        }
        Ok(())
    }

    /// Builds the world and draws start/goal. Forest layouts and zone sampling use `seed`.
    pub fn resolve(&self, seed: u64) -> Result<ResolvedScenario, SimError> {
        self.validate()?;
        let (world, mut start, mut goal, mut start_zone, mut goal_zone, trap) = match &self.generator {
            Some(Generator::Forest(p)) => {
                let (w, s, g) = gen_forest(seed, p)?;
                (w, Some(s), Some(g), Some(p.start_zone), Some(p.goal_zone), None)
            }
            Some(Generator::Maze { layout }) => {
                let m = gen_maze(layout)?;
                (m.world, None, None, Some(m.start_zone), Some(m.goal_zone), m.trap)
            }
            None => {
                let bounds = self.bounds.expect("validated");
                (World::new(bounds, self.obstacles.clone())?, None, None, None, None, None)
            }
        };
        start_zone = self.start_zone.or(start_zone);
        goal_zone = self.goal_zone.or(goal_zone);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x05ee_d0f5_ca1e);
        let radius = self.robot.radius;
        if self.start.is_some() || self.start_zone.is_some() || start.is_none() {
            start = match (self.start, start_zone) {
                (Some(p), _) => Some(p),
                (None, Some(z)) => Some(sample_free(&mut rng, &world, &z, radius)?),
                (None, None) => None,
            };
        }
        if self.goal.is_some() || self.goal_zone.is_some() || goal.is_none() {
            goal = match (self.goal, goal_zone) {
                (Some(p), _) => Some(p),
                (None, Some(z)) => Some(sample_free(&mut rng, &world, &z, radius)?),
                (None, None) => None,
            };
        }
        let (start, goal) = match (start, goal) {
            (Some(s), Some(g)) => (s, g),
            _ => return Err(SimError::InvalidGenerator("scenario needs a start and goal (or zones)".into())),
        };
        if !world.bounds.contains(start) {
            return Err(SimError::PoseOutOfBounds { x: start.x, y: start.y });
        }
        Ok(ResolvedScenario { world, start, goal, trap })
    }
}

fn sample_free<R: Rng>(rng: &mut R, world: &World, zone: &Rect, radius: f64) -> Result<Point2d, SimError> {
    for _ in 0..1000 {
        let p = Point2d::new(
            rng.random_range(zone.min.x..=zone.max.x),
            rng.random_range(zone.min.y..=zone.max.y),
        );
        if !check_collision(world, p, radius) {
            return Ok(p);
        }
    }
    Err(SimError::PlacementFailed { placed: 0, requested: 1 })
}
