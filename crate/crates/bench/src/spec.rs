use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use starnav::{ControllerConfigd, FitConfigd, FrontierParams};
use starnav_sim::{ForestParams, ScenarioFile};

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EpisodeLimits {
    pub max_sim_time: f64,
    pub goal_tolerance: f64,
    pub dt: f64,
    /// Give up on a short-term goal after this long without getting closer to it.
    pub stall_timeout: f64,
}

impl Default for EpisodeLimits {
    fn default() -> Self {
        Self {
            max_sim_time: 120.0,
            goal_tolerance: 0.25,
            dt: 0.005,
            stall_timeout: 15.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub scenario: ScenarioFile,
    #[serde(default = "benchmark_controller")]
    pub controller: ControllerConfigd,
    #[serde(default)]
    pub fit: FitConfigd,
    #[serde(default)]
    pub frontier: FrontierParams<f64>,
    #[serde(default)]
    pub limits: EpisodeLimits,
    /// Wall-clock timing of control and fit steps; off gives reproducible records.
    #[serde(default = "default_true")]
    pub timing: bool,
}

fn default_true() -> bool {
    true
}

/// Controller gains used by the benchmark scenarios: a short blend range and a
/// stiffer speed gain than the library defaults.
pub fn benchmark_controller() -> ControllerConfigd {
    ControllerConfigd { rho: 0.15, k_speed: 5.0, ..ControllerConfigd::default() }
}

impl ScenarioSpec {
    pub fn new(scenario: ScenarioFile) -> Self {
        Self {
            scenario,
            controller: benchmark_controller(),
            fit: FitConfigd::default(),
            frontier: FrontierParams::default(),
            limits: EpisodeLimits::default(),
            timing: true,
        }
    }

    pub fn forest() -> Self {
        Self::new(ScenarioFile::forest(ForestParams::default()))
    }

    pub fn maze(layout: &str) -> Self {
        Self::new(ScenarioFile::maze(layout))
    }

    /// Parses either a full spec (with a `scenario` key) or a bare scenario file.
    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| BenchError::Parse(e.to_string()))?;
        let spec = if value.get("scenario").is_some() {
            serde_json::from_value(value).map_err(|e| BenchError::Parse(e.to_string()))?
        } else {
            let file = ScenarioFile::from_json(text)?;
            Self::new(file)
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        self.scenario.validate()?;
        self.fit.validate()?;
        let l = &self.limits;
        if !(l.max_sim_time > 0.0 && l.goal_tolerance > 0.0 && l.dt > 0.0 && l.stall_timeout > 0.0) {
            return Err(BenchError::InvalidSpec("limits must be positive"));
        }
        let c = &self.controller;
        if !(c.sigma > 0.0 && c.rho > 0.0 && c.k_heading > 0.0 && c.k_speed > 0.0) {
            return Err(BenchError::InvalidSpec("controller gains must be positive"));
        }
        if !(self.frontier.eps > 0.0 && self.frontier.min_pts >= 1) {
            return Err(BenchError::InvalidSpec("frontier eps and min_pts must be positive"));
        }
        Ok(())
    }

    /// Controller settings with the robot's radius and speed limits from the scenario.
    pub fn effective_controller(&self) -> ControllerConfigd {
        let r = &self.scenario.robot;
        ControllerConfigd {
            robot_radius: r.radius,
            v_max: r.v_max,
            w_max: r.w_max,
            ..self.controller
        }
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("spec serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}
