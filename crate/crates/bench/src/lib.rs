//! Episode runner, seeded batches, metrics and artifact export.

pub mod batch;
pub mod episode;
pub mod export;
pub mod spec;

pub use batch::{run_batch, run_records, BatchSummary, Stats};
pub use episode::{run_episode, Event, EventKind, FitTiming, Outcome, RunRecord, TrajectorySample};
pub use export::{export_artifacts, render_svg, write_trajectory_csv, Artifact, TRAJECTORY_HEADER};
pub use spec::{benchmark_controller, EpisodeLimits, ScenarioSpec};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "STARNAV_OUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Sim(#[from] starnav_sim::SimError),
    #[error(transparent)]
    Fit(#[from] starnav::StarshapeError),
    #[error(transparent)]
    Roadmap(#[from] starnav::RoadmapError),
    #[error("invalid spec: {0}")]
    InvalidSpec(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
}
