//! Starshaped roadmap navigation for planar disk robots.
//!
//! - [`geometry`]: points, poses, polar transforms and LiDAR scans.
//! - [`starshape`]: piecewise polynomial starshaped regions fitted to scans.
//! - [`frontier`]: DBSCAN clustering and frontier candidates between clusters.
//! - [`roadmap`]: the incremental roadmap and short-term goal search.
//! - [`dsm`]: modulation of the guiding vector and unicycle tracking.
//!
//! Everything is generic over [`Real`]; the `*d` / `*f` aliases below fix the scalar
//! to `f64` / `f32`.

// `!(x > 0)` rejects NaN as well as non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dsm;
pub mod frontier;
pub mod geometry;
pub mod roadmap;
pub mod scalar;
pub mod starshape;

pub use dsm::{
    blend_nearest, blend_weight, combine_overlaps, control_step, modulate, modulate_in_region, modulation_basis,
    overlap_weights, raw_guidance, track_unicycle, ControlCommand, ControllerConfig, DsmError, ModulationBasis,
};
pub use frontier::{cluster_scan, dbscan, extract_frontiers, Cluster, FrontierCandidate, FrontierParams, SidePointPair};
pub use geometry::{
    angle_diff, cart_to_polar, ccw_distance, polar_to_cart, wrap_angle, Beam, GeometryError, Point2, PolarCoord, Pose2,
    Scan, Vector2,
};
pub use roadmap::{Expansion, NodeId, NodeStatus, Roadmap, RoadmapError, RoadmapNode, ShortTermGoal};
pub use scalar::Real;
pub use starshape::{
    fit_region, fit_region_uniform, rms_error, FitConfig, PiecewiseBoundary, PolySegment, RegionId, StarshapeError,
    StarshapedRegion,
};

pub type Point2d = Point2<f64>;
pub type Point2f = Point2<f32>;
pub type Pose2d = Pose2<f64>;
pub type Pose2f = Pose2<f32>;
pub type PolarCoordd = PolarCoord<f64>;
pub type Scand = Scan<f64>;
pub type Scanf = Scan<f32>;
pub type Regiond = StarshapedRegion<f64>;
pub type Regionf = StarshapedRegion<f32>;
pub type FitConfigd = FitConfig<f64>;
pub type Roadmapd = Roadmap<f64>;
pub type Roadmapf = Roadmap<f32>;
pub type ControllerConfigd = ControllerConfig<f64>;
pub type ControllerConfigf = ControllerConfig<f32>;
pub type ControlCommandd = ControlCommand<f64>;
pub type FrontierCandidated = FrontierCandidate<f64>;
