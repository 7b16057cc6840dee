//! Scripted worlds for circuit-level simulations.
//!
//! A replay drives the real fields with synthetic outcomes: motions succeed
//! on a fixed cadence, outcome angles are steered from outside, and goal
//! errors come from recorded sequences instead of live models.

use std::collections::{BTreeMap, VecDeque};

use motion::Trajectory;
use world::{PushOutcome, Workspace, WorldError};

use crate::arch::{ArchitectureState, PushWorld};
use crate::config::ArchitectureConfig;
use crate::goal::GoalPoint;
use crate::log::{Event, EventKind};

/// World stub whose pushes succeed every `success_every`-th motion, moving
/// the object toward `success_angle` (a [0,100] feature).
#[derive(Debug, Clone)]
pub struct ScriptedWorld {
    pub color: f64,
    pub object_pos: (f64, f64),
    pub success_every: usize,
    pub success_angle: f64,
    pub present: bool,
    motions: usize,
    workspace: Workspace,
    rest: (f64, f64),
}

impl ScriptedWorld {
    pub fn new(color: f64) -> Self {
        let workspace = Workspace::default();
        ScriptedWorld {
            color,
            object_pos: workspace.center(),
            success_every: 5,
            success_angle: 50.0,
            present: true,
            motions: 0,
            workspace,
            rest: (0.3, 0.05),
        }
    }

    pub fn motions(&self) -> usize {
        self.motions
    }
}

impl PushWorld for ScriptedWorld {
    fn object_present(&self) -> bool {
        self.present
    }

    fn color_feature(&self) -> f64 {
        self.color
    }

    fn object_pos(&self) -> (f64, f64) {
        self.object_pos
    }

    fn workspace(&self) -> Workspace {
        self.workspace
    }

    fn effector_rest(&self) -> (f64, f64) {
        self.rest
    }

    fn execute(
        &mut self,
        waypoints: &[(f64, f64)],
        record: bool,
    ) -> Result<(PushOutcome, Option<Trajectory>), WorldError> {
        self.motions += 1;
        let pre = self.object_pos;
        let success = self.motions % self.success_every == 0;
        let outcome = if success {
            let angle_rad = self.success_angle / 100.0 * std::f64::consts::TAU - std::f64::consts::PI;
            let post = (
                (pre.0 + 0.05 * angle_rad.cos()).clamp(0.02, 0.58),
                (pre.1 + 0.05 * angle_rad.sin()).clamp(0.02, 0.58),
            );
            self.object_pos = post;
            PushOutcome {
                moved: true,
                pre_pos: pre,
                post_pos: post,
                goal_angle_feature: Some(self.success_angle),
            }
        } else {
            PushOutcome {
                moved: false,
                pre_pos: pre,
                post_pos: pre,
                goal_angle_feature: None,
            }
        };
        let traj = if record {
            let target = *waypoints.last().unwrap();
            let n = 36;
            let times: Vec<f64> = (0..n).map(|i| i as f64 * 0.05).collect();
            let xs: Vec<f64> = (0..n)
                .map(|i| self.rest.0 + (target.0 - self.rest.0) * i as f64 / (n - 1) as f64)
                .collect();
            let ys: Vec<f64> = (0..n)
                .map(|i| self.rest.1 + (target.1 - self.rest.1) * i as f64 / (n - 1) as f64)
                .collect();
            Some(Trajectory::new(times, vec![xs, ys]).expect("monotone"))
        } else {
            None
        };
        Ok((outcome, traj))
    }

    fn respawn_if_unreachable(&mut self) -> bool {
        if !self.workspace.contains(self.object_pos) {
            self.object_pos = self.workspace.center();
            return true;
        }
        false
    }
}

/// Scene with two static objects; pushes never move anything, so only the
/// habituation dynamics evolve. The attended object follows the selection
/// peak via `attend`.
#[derive(Debug, Clone)]
pub struct TwoObjectWorld {
    pub colors: [(f64, f64); 2],
    pub positions: [(f64, f64); 2],
    pub attended: usize,
    workspace: Workspace,
    rest: (f64, f64),
}

impl TwoObjectWorld {
    /// `colors` carries (color feature, stimulus amplitude) per object.
    pub fn new(colors: [(f64, f64); 2]) -> Self {
        TwoObjectWorld {
            colors,
            positions: [(0.2, 0.3), (0.4, 0.3)],
            attended: 0,
            workspace: Workspace::default(),
            rest: (0.3, 0.05),
        }
    }

    /// Attends the object whose color is nearest to `color`.
    pub fn attend(&mut self, color: f64) {
        self.attended = if (self.colors[0].0 - color).abs() <= (self.colors[1].0 - color).abs() {
            0
        } else {
            1
        };
    }
}

impl PushWorld for TwoObjectWorld {
    fn object_present(&self) -> bool {
        true
    }
    fn color_feature(&self) -> f64 {
        self.colors[self.attended].0
    }
    fn scene_colors(&self) -> Vec<(f64, f64)> {
        self.colors.to_vec()
    }
    fn object_pos(&self) -> (f64, f64) {
        self.positions[self.attended]
    }
    fn workspace(&self) -> Workspace {
        self.workspace
    }
    fn effector_rest(&self) -> (f64, f64) {
        self.rest
    }
    fn execute(
        &mut self,
        _waypoints: &[(f64, f64)],
        _record: bool,
    ) -> Result<(PushOutcome, Option<Trajectory>), WorldError> {
        let pre = self.positions[self.attended];
        Ok((
            PushOutcome {
                moved: false,
                pre_pos: pre,
                post_pos: pre,
                goal_angle_feature: None,
            },
            None,
        ))
    }
    fn respawn_if_unreachable(&mut self) -> bool {
        false
    }
}

/// Persistence settings for a replay run, mirroring the baseline /
/// error-inhibition / long-persistence parameter triplets.
#[derive(Debug, Clone, Copy)]
pub struct PersistenceSettings {
    pub transient_tau_plus: f64,
    pub transient_tau_minus: f64,
    pub attempts_tau_plus: f64,
    pub attempts_tau_minus: f64,
}

impl PersistenceSettings {
    pub fn baseline() -> Self {
        PersistenceSettings {
            transient_tau_plus: 4500.0,
            transient_tau_minus: 100.0,
            attempts_tau_plus: 100.0,
            attempts_tau_minus: 100.0,
        }
    }

    pub fn error_inhibition() -> Self {
        PersistenceSettings {
            attempts_tau_plus: 2000.0,
            attempts_tau_minus: 1500.0,
            ..Self::baseline()
        }
    }

    pub fn long_persistence() -> Self {
        PersistenceSettings {
            transient_tau_plus: 6000.0,
            ..Self::baseline()
        }
    }

    pub fn apply(&self, cfg: &mut ArchitectureConfig) {
        let t = cfg.network.traces.get_mut("transient_action").unwrap();
        t.tau_plus = self.transient_tau_plus;
        t.tau_minus = self.transient_tau_minus;
        let a = cfg.network.traces.get_mut("attempts").unwrap();
        a.tau_plus = self.attempts_tau_plus;
        a.tau_minus = self.attempts_tau_minus;
    }
}

/// Replay of recorded error sequences over two seeded goals on one object.
///
/// Goals sit at angle features 87 (push up) and 37 (pull down); every fifth
/// motion of a selection succeeds and consumes the next recorded error for
/// the goal under exploitation. Returns the full event log.
pub fn run_persistence_replay(
    settings: PersistenceSettings,
    first_errors: (f64, f64),
    error_scripts: (Vec<f64>, Vec<f64>),
    seconds: f64,
    seed: u64,
) -> Vec<Event> {
    let mut cfg = ArchitectureConfig::default();
    settings.apply(&mut cfg);
    let mut arch = ArchitectureState::build(cfg, seed).unwrap();
    let mut world = ScriptedWorld::new(10.0);
    world.success_every = 5;

    let up = arch.seed_goal(GoalPoint::new(10.0, 87.0), first_errors.0);
    let down = arch.seed_goal(GoalPoint::new(10.0, 37.0), first_errors.1);
    arch.habituate_color(10.0, 0.95);

    let mut scripts = BTreeMap::new();
    scripts.insert(up, VecDeque::from(error_scripts.0));
    scripts.insert(down, VecDeque::from(error_scripts.1));
    arch.set_scripted_errors(scripts);

    let steps = (seconds * 100.0) as usize;
    for _ in 0..steps {
        if let Some(idx) = arch.episode_goal() {
            world.success_angle = arch.records[idx].goal.angle;
        }
        arch.tick(&mut world);
    }
    arch.events
}

/// Which goal index each selection event picked, in order.
pub fn selection_sequence(events: &[Event]) -> Vec<usize> {
    events
        .iter()
        .filter_map(|e| match e.kind {
            EventKind::Selection { goal_idx, .. } => Some(goal_idx),
            _ => None,
        })
        .collect()
}

/// Motions spent inside each selection episode (selection to force reset).
pub fn attempts_per_selection(events: &[Event]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut current: Option<usize> = None;
    for e in events {
        match e.kind {
            EventKind::Selection { .. } => current = Some(0),
            EventKind::MotionStart { exploratory: false } => {
                if let Some(n) = current.as_mut() {
                    *n += 1;
                }
            }
            EventKind::ForceReset { .. } => {
                if let Some(n) = current.take() {
                    out.push(n);
                }
            }
            _ => {}
        }
    }
    out
}
