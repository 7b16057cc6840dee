use motion::Trajectory;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use thiserror::Error;

use crate::contact::{resolve_contact, ContactParams};
use crate::features::{color_feature, goal_angle_feature};

#[derive(Debug, Error)]
pub enum WorldError {
    #[error("pose outside workspace: ({0}, {1})")]
    PoseOutsideWorkspace(f64, f64),

    #[error("motion must start at the effector rest pose")]
    MotionMustStartAtRest,

    #[error("need 1 or 2 target poses, got {0}")]
    BadWaypointCount(usize),

    #[error("zero displacement has no direction")]
    UndefinedAngle,
}

/// Object kinds in increasing order of manipulation difficulty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectKind {
    Cube,
    Cylinder,
    Ball,
}

impl ObjectKind {
    pub const ALL: [ObjectKind; 3] = [ObjectKind::Cube, ObjectKind::Cylinder, ObjectKind::Ball];

    pub fn name(&self) -> &'static str {
        match self {
            ObjectKind::Cube => "cube",
            ObjectKind::Cylinder => "cylinder",
            ObjectKind::Ball => "ball",
        }
    }
}

impl std::str::FromStr for ObjectKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cube" => Ok(ObjectKind::Cube),
            "cylinder" => Ok(ObjectKind::Cylinder),
            "ball" => Ok(ObjectKind::Ball),
            other => Err(format!("unknown object kind '{other}'")),
        }
    }
}

/// Axis-aligned workspace rectangle in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Workspace {
    pub min: (f64, f64),
    pub max: (f64, f64),
}

impl Workspace {
    pub fn contains(&self, p: (f64, f64)) -> bool {
        p.0 >= self.min.0 && p.0 <= self.max.0 && p.1 >= self.min.1 && p.1 <= self.max.1
    }

    pub fn center(&self) -> (f64, f64) {
        (
            0.5 * (self.min.0 + self.max.0),
            0.5 * (self.min.1 + self.max.1),
        )
    }
}

impl Default for Workspace {
    fn default() -> Self {
        Workspace {
            min: (0.0, 0.0),
            max: (0.6, 0.6),
        }
    }
}

/// Result of one effector sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct PushOutcome {
    pub moved: bool,
    pub pre_pos: (f64, f64),
    pub post_pos: (f64, f64),
    /// Present iff `moved`.
    pub goal_angle_feature: Option<f64>,
}

/// Tabletop state: one object, an effector with a rest pose, seeded noise.
#[derive(Debug, Clone)]
pub struct WorldState {
    pub object_kind: ObjectKind,
    pub object_pos: (f64, f64),
    pub object_radius: f64,
    pub workspace: Workspace,
    pub effector_rest: (f64, f64),
    params: ContactParams,
    rng: ChaCha8Rng,
}

impl WorldState {
    pub fn new(kind: ObjectKind, seed: u64) -> Self {
        let workspace = Workspace::default();
        WorldState {
            object_kind: kind,
            object_pos: workspace.center(),
            object_radius: 0.03,
            workspace,
            effector_rest: (0.3, 0.05),
            params: ContactParams::default(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn with_params(mut self, params: ContactParams) -> Self {
        self.params = params;
        self
    }

    pub fn params(&self) -> &ContactParams {
        &self.params
    }

    pub fn color_feature(&self) -> f64 {
        color_feature(self.object_kind)
    }

    /// Sweeps the effector from rest through 1 or 2 target poses and back.
    ///
    /// `waypoints` must start at the rest pose. Only the outgoing sweep can
    /// touch the object; the return leg is lifted. When `record` is set, the
    /// outgoing path is sampled at 20 Hz as a demonstration trajectory.
    pub fn execute_motion(
        &mut self,
        waypoints: &[(f64, f64)],
        record: bool,
    ) -> Result<(PushOutcome, Option<Trajectory>), WorldError> {
        if waypoints.is_empty() || dist(waypoints[0], self.effector_rest) > 1e-9 {
            return Err(WorldError::MotionMustStartAtRest);
        }
        let targets = &waypoints[1..];
        if targets.is_empty() || targets.len() > 2 {
            return Err(WorldError::BadWaypointCount(targets.len()));
        }
        for &p in targets {
            if !self.workspace.contains(p) {
                return Err(WorldError::PoseOutsideWorkspace(p.0, p.1));
            }
        }

        let pre_pos = self.object_pos;
        let mut displacement: Option<((f64, f64), f64)> = None;
        for seg in waypoints.windows(2) {
            if let Some(hit) = resolve_contact(
                seg[0],
                seg[1],
                self.object_pos,
                self.object_radius,
                self.object_kind,
                &self.params,
                &mut self.rng,
            ) {
                displacement = Some(hit);
                break;
            }
        }

        let mut moved = false;
        if let Some((dir, dist_m)) = displacement {
            self.object_pos.0 += dir.0 * dist_m;
            self.object_pos.1 += dir.1 * dist_m;
            moved = dist_m >= self.params.moved_epsilon;
        }
        let post_pos = self.object_pos;
        let goal = if moved {
            Some(goal_angle_feature(pre_pos, post_pos).expect("moved implies displacement"))
        } else {
            None
        };

        let trajectory = if record {
            Some(self.record_path(waypoints))
        } else {
            None
        };

        Ok((
            PushOutcome {
                moved,
                pre_pos,
                post_pos,
                goal_angle_feature: goal,
            },
            trajectory,
        ))
    }

    /// Samples the outgoing path at 20 Hz with a constant effector speed.
    fn record_path(&self, waypoints: &[(f64, f64)]) -> Trajectory {
        let speed = self.params.effector_speed;
        let mut length = 0.0;
        for seg in waypoints.windows(2) {
            length += dist(seg[0], seg[1]);
        }
        let duration = (length / speed).max(0.1);
        let n = ((duration * 20.0).round() as usize).max(2);
        let mut times = Vec::with_capacity(n + 1);
        let mut xs = Vec::with_capacity(n + 1);
        let mut ys = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let t = duration * i as f64 / n as f64;
            let p = point_along(waypoints, length * i as f64 / n as f64);
            times.push(t);
            xs.push(p.0);
            ys.push(p.1);
        }
        Trajectory::new(times, vec![xs, ys]).expect("constructed monotone timestamps")
    }

    /// Moves the object back to the workspace center if it escaped.
    pub fn respawn_if_unreachable(&mut self) -> bool {
        if !self.workspace.contains(self.object_pos) {
            self.object_pos = self.workspace.center();
            return true;
        }
        false
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

fn point_along(waypoints: &[(f64, f64)], mut s: f64) -> (f64, f64) {
    for seg in waypoints.windows(2) {
        let len = dist(seg[0], seg[1]);
        if s <= len || len == 0.0 {
            if len == 0.0 {
                continue;
            }
            let w = s / len;
            return (
                seg[0].0 + w * (seg[1].0 - seg[0].0),
                seg[0].1 + w * (seg[1].1 - seg[0].1),
            );
        }
        s -= len;
    }
    *waypoints.last().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_missing_the_object_moves_nothing() {
        let mut w = WorldState::new(ObjectKind::Cube, 1);
        // Sweep along the lower edge, far from the centered object.
        let rest = w.effector_rest;
        let (out, traj) = w
            .execute_motion(&[rest, (0.1, 0.06), (0.5, 0.06)], false)
            .unwrap();
        assert!(!out.moved);
        assert_eq!(out.pre_pos, out.post_pos);
        assert!(out.goal_angle_feature.is_none());
        assert!(traj.is_none());
    }

    #[test]
    fn pose_outside_workspace_is_rejected() {
        let mut w = WorldState::new(ObjectKind::Cube, 1);
        let rest = w.effector_rest;
        assert!(matches!(
            w.execute_motion(&[rest, (0.7, 0.3)], false),
            Err(WorldError::PoseOutsideWorkspace(_, _))
        ));
    }

    #[test]
    fn motion_must_start_at_rest() {
        let mut w = WorldState::new(ObjectKind::Cube, 1);
        assert!(matches!(
            w.execute_motion(&[(0.2, 0.2), (0.3, 0.3)], false),
            Err(WorldError::MotionMustStartAtRest)
        ));
    }

    #[test]
    fn recorded_demo_has_about_30_to_40_samples() {
        let mut w = WorldState::new(ObjectKind::Cube, 1);
        let rest = w.effector_rest;
        // Typical babble: approach the object and push through it.
        let (_, traj) = w
            .execute_motion(&[rest, (0.27, 0.26), (0.33, 0.34)], true)
            .unwrap();
        let traj = traj.unwrap();
        assert!(
            (25..=45).contains(&traj.len()),
            "sample count {}",
            traj.len()
        );
        // Record covers rest to final pose.
        assert!(dist((traj.track(0)[0], traj.track(1)[0]), rest) < 1e-9);
        let last = traj.len() - 1;
        assert!(dist((traj.track(0)[last], traj.track(1)[last]), (0.33, 0.34)) < 1e-9);
    }

    #[test]
    fn respawn_rule() {
        let mut w = WorldState::new(ObjectKind::Ball, 1);
        w.object_pos = (0.3, 0.3);
        assert!(!w.respawn_if_unreachable());
        assert_eq!(w.object_pos, (0.3, 0.3));
        w.object_pos = (0.6001, 0.3);
        assert!(w.respawn_if_unreachable());
        assert_eq!(w.object_pos, w.workspace.center());
    }
}
