use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use starnav::roadmap::REACH_THRESHOLD;
use starnav::{
    cluster_scan, control_step, extract_frontiers, fit_region, Expansion, NodeId, NodeStatus, Point2d, Pose2d, Regiond,
    Roadmapd, RoadmapError, Scand, ShortTermGoal,
};
use starnav_sim::{check_collision, raycast_scan_with, step_robot, Rect, SimState, World};

use crate::spec::ScenarioSpec;
use crate::BenchError;

/// Minimum improvement in distance to the short-term goal that resets the stall timer.
const STALL_PROGRESS: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Success,
    Timeout,
    Collision,
    NoPath,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Success => "Success",
            Outcome::Timeout => "Timeout",
            Outcome::Collision => "Collision",
            Outcome::NoPath => "NoPath",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub v: f64,
    pub w: f64,
    pub control_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    Expanded { node: u32, new_nodes: usize },
    MarkStuck { node: u32, stalled: bool },
    Replan { target: Point2d, target_node: Option<u32>, reaches_goal: bool },
    EnteredTrap,
    Collision,
    GoalReached,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    #[serde(flatten)]
    pub kind: EventKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitTiming {
    pub t: f64,
    pub fit_ms: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub scenario_hash: String,
    pub seed: u64,
    pub outcome: Outcome,
    pub spec: ScenarioSpec,
    pub world: World,
    pub trap: Option<Rect>,
    pub start: Point2d,
    pub goal: Point2d,
    pub trajectory: Vec<TrajectorySample>,
    pub fit_timings: Vec<FitTiming>,
    pub events: Vec<Event>,
    pub roadmap: Option<Roadmapd>,
    pub travel_time: f64,
    pub path_length: f64,
    pub entered_trap: bool,
}

impl RunRecord {
    pub fn count_events(&self, pred: impl Fn(&EventKind) -> bool) -> usize {
        self.events.iter().filter(|e| pred(&e.kind)).count()
    }

    /// A mark-stuck event followed later by a replan.
    pub fn has_stuck_then_replan(&self) -> bool {
        self.events
            .iter()
            .position(|e| matches!(e.kind, EventKind::MarkStuck { .. }))
            .is_some_and(|i| self.events[i..].iter().any(|e| matches!(e.kind, EventKind::Replan { .. })))
    }

    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        serde_json::from_str(text).map_err(|e| BenchError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

fn elapsed_ms(start: Option<Instant>) -> f64 {
    start.map_or(0.0, |s| s.elapsed().as_secs_f64() * 1e3)
}

struct Episode<'a> {
    spec: &'a ScenarioSpec,
    world: World,
    goal: Point2d,
    roadmap: Option<Roadmapd>,
    plan: Option<ShortTermGoal<f64>>,
    events: Vec<Event>,
    fit_timings: Vec<FitTiming>,
    best_dist: f64,
    last_progress: f64,
}

enum Step {
    Continue,
    Finished(Outcome),
}

impl Episode<'_> {
    fn event(&mut self, t: f64, kind: EventKind) {
        self.events.push(Event { t, kind });
    }

    fn fit_at(&mut self, p: Point2d, scan: &Scand, t: f64) -> Result<(Regiond, Vec<starnav::FrontierCandidate<f64>>), BenchError> {
        let clock = self.spec.timing.then(Instant::now);
        let region = fit_region(p, scan, &self.spec.fit)?;
        let f = &self.spec.frontier;
        let clusters = cluster_scan(scan, f.eps, f.min_pts);
        let cands = extract_frontiers(&clusters, &region, self.spec.effective_controller().robot_radius, scan.max_range());
        self.fit_timings.push(FitTiming { t, fit_ms: elapsed_ms(clock) });
        Ok((region, cands))
    }

    fn replan(&mut self, p: Point2d, t: f64) -> Step {
        let rm = self.roadmap.as_ref().expect("roadmap initialised");
        match rm.plan_short_term_goal(p, self.goal) {
            Ok(sg) => {
                self.event(
                    t,
                    EventKind::Replan {
                        target: sg.target,
                        target_node: sg.target_node.map(|n| n.0),
                        reaches_goal: sg.reaches_goal,
                    },
                );
                self.best_dist = p.distance(sg.target);
                self.last_progress = t;
                self.plan = Some(sg);
                Step::Continue
            }
            Err(RoadmapError::NoPath) => Step::Finished(Outcome::NoPath),
            Err(_) => Step::Finished(Outcome::NoPath),
        }
    }

    fn mark_stuck(&mut self, node: NodeId, t: f64, stalled: bool) -> Result<(), BenchError> {
        let rm = self.roadmap.as_mut().expect("roadmap initialised");
        rm.mark_stuck(node)?;
        self.event(t, EventKind::MarkStuck { node: node.0, stalled });
        Ok(())
    }

    /// Roadmap maintenance for one tick: initial growth, arrival at the short-term goal,
    /// stall handling and replanning.
    fn update(&mut self, p: Point2d, scan: &Scand, t: f64) -> Result<Step, BenchError> {
        let mut need_plan = self.plan.is_none();
        if self.roadmap.is_none() {
            let (region, cands) = self.fit_at(p, scan, t)?;
            let mut rm = Roadmapd::new(p, region.clone())?;
            if let Expansion::Grew(nodes) = rm.expand_node(rm.root(), region, &cands)? {
                self.event(t, EventKind::Expanded { node: 0, new_nodes: nodes.len() });
            }
            self.roadmap = Some(rm);
            need_plan = true;
        }
        if let Some(sg) = &self.plan {
            let target = sg.target;
            let node = sg.target_node;
            let d = p.distance(target);
            if d + STALL_PROGRESS <= self.best_dist {
                self.best_dist = d;
                self.last_progress = t;
            }
            if d <= REACH_THRESHOLD {
                need_plan = true;
                if let Some(id) = node {
                    let status = self.roadmap.as_ref().expect("roadmap").node(id)?.status;
                    if status == NodeStatus::Extendable {
                        let (region, cands) = self.fit_at(p, scan, t)?;
                        let sees_goal = region.contains(self.goal, 0.0);
                        let rm = self.roadmap.as_mut().expect("roadmap");
                        match rm.expand_node(id, region.clone(), &cands)? {
                            Expansion::Grew(nodes) => {
                                self.event(t, EventKind::Expanded { node: id.0, new_nodes: nodes.len() })
                            }
                            // not a dead end when the goal is in view
                            Expansion::NoNewFrontiers if sees_goal => {
                                rm.set_expanded(id, region)?;
                                self.event(t, EventKind::Expanded { node: id.0, new_nodes: 0 });
                            }
                            Expansion::NoNewFrontiers => self.mark_stuck(id, t, false)?,
                        }
                    }
                }
            } else if t - self.last_progress > self.spec.limits.stall_timeout {
                need_plan = true;
                match node {
                    Some(id) if self.roadmap.as_ref().expect("roadmap").node(id)?.status == NodeStatus::Extendable => {
                        self.mark_stuck(id, t, true)?;
                    }
                    _ => {
                        // the target can't be given up on; keep going and re-arm the timer
                        self.last_progress = t;
                    }
                }
            }
        }
        let rm = self.roadmap.as_mut().expect("roadmap");
        if rm.take_replan() {
            need_plan = true;
        }
        if need_plan {
            return Ok(self.replan(p, t));
        }
        Ok(Step::Continue)
    }
}

/// Runs one episode of the navigation loop for `seed`.
pub fn run_episode(spec: &ScenarioSpec, seed: u64) -> Result<RunRecord, BenchError> {
    spec.validate()?;
    let resolved = spec.scenario.resolve(seed)?;
    let cfg = spec.effective_controller();
    let lidar = spec.scenario.lidar;
    let limits = spec.limits;
    let radius = cfg.robot_radius;
    let (start, goal) = (resolved.start, resolved.goal);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ 0x11da_5eed);

    let heading = (goal - start).angle();
    let mut state = SimState::new(Pose2d::new(start, heading));
    let mut ep = Episode {
        spec,
        world: resolved.world,
        goal,
        roadmap: None,
        plan: None,
        events: Vec::new(),
        fit_timings: Vec::new(),
        best_dist: f64::INFINITY,
        last_progress: 0.0,
    };
    let mut trajectory = vec![TrajectorySample {
        t: 0.0,
        x: start.x,
        y: start.y,
        heading: state.pose.heading(),
        v: 0.0,
        w: 0.0,
        control_ms: 0.0,
    }];
    let mut path_length = 0.0;
    let mut entered_trap = false;

    let outcome = loop {
        let p = state.pose.position;
        if let Some(trap) = resolved.trap {
            if !entered_trap && trap.contains(p) {
                entered_trap = true;
                ep.event(state.time, EventKind::EnteredTrap);
            }
        }
        if check_collision(&ep.world, p, radius) {
            state.mark_collided();
            ep.event(state.time, EventKind::Collision);
            break Outcome::Collision;
        }
        if p.distance(goal) <= limits.goal_tolerance {
            ep.event(state.time, EventKind::GoalReached);
            break Outcome::Success;
        }
        if state.time >= limits.max_sim_time {
            break Outcome::Timeout;
        }
        let scan = raycast_scan_with(&ep.world, &state.pose, &lidar, &mut rng)?;
        if let Step::Finished(o) = ep.update(p, &scan, state.time)? {
            break o;
        }
        let target = ep.plan.as_ref().expect("planned").target;

        let clock = spec.timing.then(Instant::now);
        let rm = ep.roadmap.as_ref().expect("roadmap");
        let regions = rm.regions_containing(p);
        let (_, cmd) = control_step(&regions, &state.pose, target, &scan, &cfg);
        let control_ms = elapsed_ms(clock);

        let next = step_robot(&state, cmd, limits.dt);
        path_length += next.pose.position.distance(p);
        state = next;
        trajectory.push(TrajectorySample {
            t: state.time,
            x: state.pose.position.x,
            y: state.pose.position.y,
            heading: state.pose.heading(),
            v: cmd.v,
            w: cmd.w,
            control_ms,
        });
    };

    Ok(RunRecord {
        scenario_hash: spec.hash(),
        seed,
        outcome,
        spec: spec.clone(),
        world: ep.world,
        trap: resolved.trap,
        start,
        goal,
        trajectory,
        fit_timings: ep.fit_timings,
        events: ep.events,
        roadmap: ep.roadmap,
        travel_time: state.time,
        path_length,
        entered_trap,
    })
}
