//! Deterministic 2D simulator: obstacles, raycast LiDAR, unicycle integration, collision
//! checks and seeded scenario generators.

pub mod generate;
pub mod kinematics;
pub mod scenario;
pub mod sensor;
pub mod world;

pub use generate::{gen_forest, gen_maze, ForestParams, MazeLayout, LAYOUTS};
pub use kinematics::{step_robot, SimState};
pub use scenario::{Generator, ResolvedScenario, RobotParams, ScenarioFile, SCHEMA_VERSION};
pub use sensor::{raycast_scan, raycast_scan_with, LidarModel};
pub use world::{check_collision, Obstacle, Rect, World};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("pose ({x}, {y}) is outside the world bounds")]
    PoseOutOfBounds { x: f64, y: f64 },
    #[error("placed {placed} of {requested} objects before running out of attempts")]
    PlacementFailed { placed: usize, requested: usize },
    #[error("unknown maze layout `{0}`")]
    UnknownLayout(String),
    #[error("invalid obstacle: {0}")]
    InvalidObstacle(String),
    #[error("world bounds must be a non-empty rectangle")]
    InvalidBounds,
    #[error("invalid lidar model: {0}")]
    InvalidLidar(&'static str),
    #[error("invalid scenario: {0}")]
    InvalidGenerator(String),
    #[error("unsupported scenario schema {0}")]
    UnsupportedSchema(u32),
    #[error("scenario parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Geometry(#[from] starnav::GeometryError),
}
