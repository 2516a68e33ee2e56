use serde::{Deserialize, Serialize};
use starnav::{wrap_angle, ControlCommandd, Point2d, Pose2d};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimState {
    pub pose: Pose2d,
    pub time: f64,
    pub collided: bool,
}

impl SimState {
    pub fn new(pose: Pose2d) -> Self {
        Self {
            pose,
            time: 0.0,
            collided: false,
        }
    }

    /// Latches the collision flag.
    pub fn mark_collided(&mut self) {
        self.collided = true;
    }
}

/// Exact-arc unicycle update over `dt`.
pub fn step_robot(state: &SimState, cmd: ControlCommandd, dt: f64) -> SimState {
    debug_assert!(dt > 0.0);
    let h = state.pose.heading();
    let p = state.pose.position;
    let (v, w) = (cmd.v, cmd.w);
    let (position, heading) = if w.abs() < 1e-9 {
        (p + Point2d::from_angle(h) * (v * dt), h)
    } else {
        let h1 = h + w * dt;
        let r = v / w;
        (Point2d::new(p.x + r * (h1.sin() - h.sin()), p.y - r * (h1.cos() - h.cos())), h1)
    };
    SimState {
        pose: Pose2d::new(position, wrap_angle(heading)),
        time: state.time + dt,
        collided: state.collided,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn origin() -> SimState {
        SimState::new(Pose2d::new(Point2d::zero(), 0.0))
    }

    #[test]
    fn spec_examples() {
        let s = step_robot(&origin(), ControlCommandd { v: 1.0, w: 0.0 }, 0.1);
        assert_relative_eq!(s.pose.position.x, 0.1);
        assert_eq!(s.pose.position.y, 0.0);
        assert_relative_eq!(s.time, 0.1);

        let s = step_robot(&origin(), ControlCommandd { v: 0.0, w: PI }, 0.5);
        assert_eq!(s.pose.position, Point2d::zero());
        assert_relative_eq!(s.pose.heading(), FRAC_PI_2);

        let s = step_robot(&origin(), ControlCommandd { v: 1.0, w: 1.0 }, FRAC_PI_2);
        assert_relative_eq!(s.pose.position.x, 1.0, epsilon = 1e-12);
        assert_relative_eq!(s.pose.position.y, 1.0, epsilon = 1e-12);
        assert_relative_eq!(s.pose.heading(), FRAC_PI_2);
    }

    #[test]
    fn collided_latches() {
        let mut s = origin();
        s.mark_collided();
        let s = step_robot(&s, ControlCommandd { v: 1.0, w: 0.0 }, 0.1);
        assert!(s.collided);
    }
}
