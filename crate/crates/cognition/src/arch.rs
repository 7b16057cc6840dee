//! The assembled architecture and its per-tick update loop.
//!
//! Fields make the decisions (peaks crossing threshold); the update loop
//! supplies stimuli, schedules motion events over simulated time, and reads
//! decisions back out of the fields in one fixed order per tick:
//! motion events -> pulse nodes -> perception -> habituation -> attention
//! switch -> action formation -> persistence -> error -> learning progress
//! -> associative learning.

use std::collections::{BTreeMap, VecDeque};

use field_core::{
    noise::derive_seed, FieldGrid, Gate, GaussStream, Grid, InteractionKernel, MemoryTrace,
    Projection, Shape, SlowBoost, FieldError, DT_MS,
};
use motion::{DmpSkill, Trajectory};
use predictors::{bounded_loss, Predictor, PredictorKind, Sample};
use world::{PushOutcome, Workspace, WorldError, WorldState};

use crate::config::ArchitectureConfig;
use crate::goal::{GoalPoint, GoalRecord};
use crate::log::{Event, EventKind, Mode};

/// World surface the update loop drives. The tabletop implements it; replay
/// simulations substitute scripted outcome sources.
pub trait PushWorld {
    fn object_present(&self) -> bool;
    fn color_feature(&self) -> f64;
    /// Visible color stimuli as (color feature, relative amplitude).
    fn scene_colors(&self) -> Vec<(f64, f64)> {
        if self.object_present() {
            vec![(self.color_feature(), 1.0)]
        } else {
            Vec::new()
        }
    }
    fn object_pos(&self) -> (f64, f64);
    fn workspace(&self) -> Workspace;
    fn effector_rest(&self) -> (f64, f64);
    fn execute(
        &mut self,
        waypoints: &[(f64, f64)],
        record: bool,
    ) -> Result<(PushOutcome, Option<Trajectory>), WorldError>;
    fn respawn_if_unreachable(&mut self) -> bool;
}

impl PushWorld for WorldState {
    fn object_present(&self) -> bool {
        true
    }
    fn color_feature(&self) -> f64 {
        WorldState::color_feature(self)
    }
    fn object_pos(&self) -> (f64, f64) {
        self.object_pos
    }
    fn workspace(&self) -> Workspace {
        self.workspace
    }
    fn effector_rest(&self) -> (f64, f64) {
        self.effector_rest
    }
    fn execute(
        &mut self,
        waypoints: &[(f64, f64)],
        record: bool,
    ) -> Result<(PushOutcome, Option<Trajectory>), WorldError> {
        self.execute_motion(waypoints, record)
    }
    fn respawn_if_unreachable(&mut self) -> bool {
        WorldState::respawn_if_unreachable(self)
    }
}

/// Decisions surfaced to the caller, one batch per tick.
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    StartMotion {
        waypoints: Vec<(f64, f64)>,
        exploratory: bool,
    },
    /// Exploitation reuses a learned skill toward a target pose.
    ActivateSkill {
        goal_idx: usize,
        target: (f64, f64),
    },
}

#[derive(Debug, Clone)]
struct MotionPlan {
    t_push_ms: f64,
    t_obs_ms: f64,
    t_rest_ms: f64,
    t_eoa_end_ms: f64,
    outcome: PushOutcome,
    recorded: Option<Trajectory>,
    command: (f64, f64),
    obs_resolved: bool,
    /// Set while the motion percept holds a supra-threshold peak.
    novelty_latched: bool,
}

#[derive(Debug, Clone, Copy)]
struct PendingError {
    goal_idx: usize,
    old: f64,
    new: f64,
}

#[derive(Debug, Clone, Copy)]
struct IorStamp {
    cell: (usize, usize),
    until_ms: f64,
}

pub struct ArchitectureState {
    pub cfg: ArchitectureConfig,

    // nodes
    active: FieldGrid,
    stop: FieldGrid,
    tonic: FieldGrid,
    signal_action: FieldGrid,
    cos_eoa: FieldGrid,
    time_node: FieldGrid,
    rise: FieldGrid,
    low: FieldGrid,
    threshold_node: FieldGrid,
    force: FieldGrid,
    local_error: FieldGrid,
    updated_error: FieldGrid,

    // 1-D over color
    object_decision: FieldGrid,
    new_perception: FieldGrid,
    object_selection: FieldGrid,
    wm_colors: FieldGrid,

    // 2-D over (angle, color)
    phasic: FieldGrid,
    goal_perceived: FieldGrid,
    wm_goals: FieldGrid,
    goals: FieldGrid,
    goal_focus: FieldGrid,

    // 2-D over workspace (y, x)
    position_object: FieldGrid,
    action_formation: FieldGrid,
    wm_ior: FieldGrid,
    filtering: FieldGrid,

    // 2-D error/learning-progress circuit
    current_goal: FieldGrid,
    local_goal: FieldGrid,
    compute_error: FieldGrid,
    variation: FieldGrid,

    // traces and boosts
    visual_memory: MemoryTrace,
    errors_mt: MemoryTrace,
    filter_mt: MemoryTrace,
    compute_lp: MemoryTrace,
    attempts: MemoryTrace,
    transient_action: MemoryTrace,
    lc_boost: SlowBoost,
    action_boost: SlowBoost,

    projections: BTreeMap<String, Projection>,

    // goal ledger and associative weights
    pub records: Vec<GoalRecord>,
    hebbian: Vec<Grid>,
    dmp_gate_until: Vec<f64>,
    predictor_seed: u64,

    // scheduling state
    t_ms: f64,
    motion: Option<MotionPlan>,
    episode: Option<usize>,
    pending: Option<PendingError>,
    explore_poses: Vec<(f64, f64)>,
    pose_history: Vec<(f64, f64)>,
    ior_stamps: Vec<IorStamp>,
    eoa_until: f64,
    time_until: f64,
    discovery_until: f64,
    discovery_goal: Option<GoalPoint>,
    wm_drop_until: f64,
    wm_drop_color: f64,
    ior_drop_until: f64,
    pose_block_until: f64,
    last_progress_ms: f64,
    prev_force_active: bool,
    force_goal: Option<usize>,
    prev_tonic_active: bool,
    prev_selection_active: bool,
    ring_cache: Option<((usize, usize), Grid, Vec<usize>)>,
    action_noise: GaussStream,
    scripted_errors: Option<BTreeMap<usize, VecDeque<f64>>>,

    pub events: Vec<Event>,
    /// Cumulative wall-clock seconds per tick phase (profiling aid).
    pub phase_seconds: [f64; 10],
}

// Projection names the update loop resolves; checked at build time.
const REQUIRED_PROJECTIONS: &[&str] = &[
    "object_selection_to_tonic",
    "phasic_to_tonic",
    "tonic_to_phasic",
    "errors_mt_to_phasic",
    "compute_lp_to_phasic",
    "attempts_to_phasic",
    "tonic_to_stop",
    "phasic_to_stop",
    "force_to_active",
    "stop_to_active",
    "threshold_to_force",
    "transient_action_to_threshold",
    "object_selection_to_object_decision",
    "visual_memory_to_object_selection",
    "new_perception_to_wm_colors",
    "object_selection_to_wm_colors",
    "tonic_to_new_perception",
    "goals_to_goal_perceived",
    "wm_goals_to_goal_perceived",
    "goal_perceived_to_wm_goals",
    "goal_focus_to_goals",
    "current_goal_to_goals",
    "wm_ior_to_action_formation",
    "action_formation_to_filtering",
    "action_formation_to_signal_action",
    "force_to_wm_ior",
    "time_to_local_goal",
    "time_to_rise",
    "time_to_low",
    "filter_mt_to_compute_error",
    "low_to_variation",
];

impl ArchitectureState {
    /// Builds the network from a validated config, all activations at rest.
    pub fn build(cfg: ArchitectureConfig, seed: u64) -> Result<Self, FieldError> {
        cfg.network.validate()?;
        let field = |name: &str| -> Result<FieldGrid, FieldError> {
            cfg.network
                .fields
                .get(name)
                .ok_or_else(|| FieldError::Configuration(format!("missing field '{name}'")))?
                .build(name, seed)
        };
        let trace = |name: &str| -> Result<MemoryTrace, FieldError> {
            cfg.network
                .traces
                .get(name)
                .ok_or_else(|| FieldError::Configuration(format!("missing trace '{name}'")))?
                .build(name)
        };
        let boost = |name: &str| -> Result<SlowBoost, FieldError> {
            Ok(cfg
                .network
                .boosts
                .get(name)
                .ok_or_else(|| FieldError::Configuration(format!("missing boost '{name}'")))?
                .build())
        };
        let mut projections = BTreeMap::new();
        for (name, spec) in &cfg.network.projections {
            projections.insert(name.clone(), spec.build()?);
        }
        for required in REQUIRED_PROJECTIONS {
            if !projections.contains_key(*required) {
                return Err(FieldError::Configuration(format!(
                    "missing projection '{required}'"
                )));
            }
        }

        Ok(ArchitectureState {
            active: field("active")?,
            stop: field("stop")?,
            tonic: field("tonic")?,
            signal_action: field("signal_action")?,
            cos_eoa: field("cos_eoa")?,
            time_node: field("time_node")?,
            rise: field("rise")?,
            low: field("low")?,
            threshold_node: field("threshold_node")?,
            force: field("force")?,
            local_error: field("local_error")?,
            updated_error: field("updated_error")?,
            object_decision: field("object_decision")?,
            new_perception: field("new_perception")?,
            object_selection: field("object_selection")?,
            wm_colors: field("wm_colors")?,
            phasic: field("phasic")?,
            goal_perceived: field("goal_perceived")?,
            wm_goals: field("wm_goals")?,
            goals: field("goals")?,
            goal_focus: field("goal_focus")?,
            position_object: field("position_object")?,
            action_formation: field("action_formation")?,
            wm_ior: field("wm_ior")?,
            filtering: field("filtering")?,
            current_goal: field("current_goal")?,
            local_goal: field("local_goal")?,
            compute_error: field("compute_error")?,
            variation: field("variation")?,
            visual_memory: trace("visual_memory")?,
            errors_mt: trace("errors_mt")?,
            filter_mt: trace("filter_mt")?,
            compute_lp: trace("compute_lp")?,
            attempts: trace("attempts")?,
            transient_action: trace("transient_action")?,
            lc_boost: boost("lc_boost")?,
            action_boost: boost("action_boost")?,
            projections,
            records: Vec::new(),
            hebbian: Vec::new(),
            dmp_gate_until: Vec::new(),
            predictor_seed: derive_seed(seed, "predictor-init"),
            t_ms: 0.0,
            motion: None,
            episode: None,
            pending: None,
            explore_poses: Vec::new(),
            pose_history: Vec::new(),
            ior_stamps: Vec::new(),
            eoa_until: -1.0,
            time_until: -1.0,
            discovery_until: -1.0,
            discovery_goal: None,
            wm_drop_until: -1.0,
            wm_drop_color: 0.0,
            ior_drop_until: -1.0,
            pose_block_until: -1.0,
            last_progress_ms: 0.0,
            prev_force_active: false,
            force_goal: None,
            prev_tonic_active: false,
            prev_selection_active: false,
            ring_cache: None,
            action_noise: GaussStream::from_seed(derive_seed(seed, "action-noise")),
            scripted_errors: None,
            events: Vec::new(),
            phase_seconds: [0.0; 10],
            cfg,
        })
    }

    // ------------------------------------------------------- accessors ----

    pub fn t_s(&self) -> f64 {
        self.t_ms / 1000.0
    }

    pub fn mode(&self) -> Mode {
        if self.tonic.is_active() {
            Mode::Exploring
        } else if self.current_goal.is_active() || self.episode.is_some() {
            Mode::Exploiting
        } else {
            Mode::Idle
        }
    }

    pub fn tonic_active(&self) -> bool {
        self.tonic.is_active()
    }

    pub fn phasic_active(&self) -> bool {
        self.phasic.is_active()
    }

    pub fn tonic_output(&self) -> f64 {
        self.tonic.output_value()
    }

    pub fn phasic_max_output(&self) -> f64 {
        self.phasic.output_max()
    }

    pub fn boost_value(&self) -> f64 {
        self.lc_boost.value()
    }

    pub fn object_selection_active(&self) -> bool {
        self.object_selection.is_active()
    }

    /// Color feature of the selection peak, when one is up.
    pub fn object_selection_peak(&self) -> Option<f64> {
        if self.object_selection.is_active() {
            Some(self.object_selection.output().argmax() as f64)
        } else {
            None
        }
    }

    pub fn visual_memory_at(&self, color: f64) -> f64 {
        self.visual_memory.values().at((color.round() as usize).min(99))
    }

    pub fn wm_colors_output_at(&self, color: f64) -> f64 {
        self.wm_colors
            .transfer()
            .apply(self.wm_colors.activation().at((color.round() as usize).min(99)))
    }

    pub fn stored_error_at(&self, goal: &GoalPoint) -> f64 {
        let (r, c) = goal.cell();
        self.errors_mt.values().at2(r, c)
    }

    pub fn lp_at(&self, goal: &GoalPoint) -> f64 {
        let (r, c) = goal.cell();
        self.compute_lp.values().at2(r, c)
    }

    pub fn attempts_at(&self, goal: &GoalPoint) -> f64 {
        let (r, c) = goal.cell();
        self.attempts.values().at2(r, c)
    }

    pub fn episode_goal(&self) -> Option<usize> {
        self.episode
    }

    pub fn pose_history(&self) -> &[(f64, f64)] {
        &self.pose_history
    }

    pub fn wm_ior_region_count(&self) -> usize {
        count_regions(&self.wm_ior.output())
    }

    pub fn wm_ior_max_u(&self) -> f64 {
        self.wm_ior.activation().max()
    }

    pub fn goals_region_count(&self) -> usize {
        count_regions(&self.goals.output())
    }

    pub fn goal_perceived_max_u(&self) -> f64 {
        self.goal_perceived.activation().max()
    }

    pub fn motion_window(&self) -> Option<(f64, f64)> {
        self.motion.as_ref().map(|m| (m.t_push_ms / 1000.0, m.t_obs_ms / 1000.0))
    }

    pub fn hebbian_weights(&self, idx: usize) -> &Grid {
        &self.hebbian[idx]
    }

    /// Replays substitute scripted error sequences for computed losses.
    pub fn set_scripted_errors(&mut self, map: BTreeMap<usize, VecDeque<f64>>) {
        self.scripted_errors = Some(map);
    }

    /// Installs a goal directly (replay simulations): ledger entry, stored
    /// error peak, and a self-sustained peak in the goals field.
    pub fn seed_goal(&mut self, goal: GoalPoint, first_error: f64) -> usize {
        let rest = (0.3, 0.05);
        let record = GoalRecord {
            goal,
            dmp: DmpSkill::zero(2, 20, 1.5, vec![rest.0, rest.1], vec![0.3, 0.3]),
            forward: Predictor::with_init_span(
                PredictorKind::Forward,
                self.predictor_seed,
                self.cfg.gains.predictor_init_span,
            ),
            inverse: Predictor::with_init_span(
                PredictorKind::Inverse,
                self.predictor_seed,
                self.cfg.gains.predictor_init_span,
            ),
            current_error: first_error,
        };
        let (r, c) = goal.cell();
        let sigma = self.cfg.gains.error_stamp_sigma;
        self.errors_mt
            .values_mut()
            .add_gaussian((r as f64, c as f64), sigma, first_error);
        self.filter_mt
            .values_mut()
            .add_gaussian((r as f64, c as f64), sigma, first_error);
        self.goals
            .activation_mut()
            .add_gaussian((r as f64, c as f64), 2.5, 3.0);
        self.records.push(record);
        self.hebbian.push(Grid::zeros(Shape::Plane(100, 100)));
        self.dmp_gate_until.push(-1.0);
        self.records.len() - 1
    }

    /// Installs learning progress directly (replay simulations).
    pub fn seed_learning_progress(&mut self, goal: GoalPoint, lp: f64) {
        let (r, c) = goal.cell();
        self.compute_lp
            .values_mut()
            .add_gaussian((r as f64, c as f64), self.cfg.gains.error_stamp_sigma, lp);
    }

    /// Marks a color as fully habituated (replay simulations).
    pub fn habituate_color(&mut self, color: f64, level: f64) {
        let mut stamp = Grid::zeros(Shape::Line(100));
        stamp.add_gaussian((color, 0.0), 3.0, level);
        for i in 0..100 {
            let v = self.visual_memory.values().at(i).max(stamp.at(i)).min(1.0);
            self.visual_memory.values_mut().set(i, v);
        }
    }

    fn proj(&self, name: &str) -> Projection {
        self.projections[name]
    }

    fn pulse(&self, until: f64) -> f64 {
        if self.t_ms < until {
            2.5
        } else {
            0.0
        }
    }

    // Narrow stamp for error values: reaches the goal's own cell, spills
    // little onto neighbors at the identity radius.
    fn goal_mask(&self, goal: &GoalPoint) -> Grid {
        let mut g = Grid::zeros(Shape::Plane(100, 100));
        let (r, c) = goal.cell();
        g.add_gaussian((r as f64, c as f64), self.cfg.gains.error_stamp_sigma, 1.0);
        g
    }

    fn nearest_record(&self, point: &GoalPoint) -> Option<(usize, f64)> {
        self.records
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.goal.distance(point)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
    }

    // ------------------------------------------------------------ tick ----

    /// One simulation step. Steps every field and trace once in the
    /// documented order and returns the decisions taken this tick.
    pub fn tick(&mut self, world: &mut dyn PushWorld) -> Vec<Command> {
        let mut commands = Vec::new();
        self.t_ms += DT_MS;

        let mut clock = std::time::Instant::now();
        let mut lap = |slot: &mut f64| {
            let now = std::time::Instant::now();
            *slot += (now - clock).as_secs_f64();
            clock = now;
        };
        self.resolve_motion_events(world);
        lap(&mut self.phase_seconds[0]);
        self.step_pulse_nodes();
        lap(&mut self.phase_seconds[1]);
        self.step_perception(world);
        lap(&mut self.phase_seconds[2]);
        self.step_habituation(world);
        lap(&mut self.phase_seconds[3]);
        self.step_lc(world);
        lap(&mut self.phase_seconds[4]);
        self.step_action(world, &mut commands);
        lap(&mut self.phase_seconds[5]);
        self.step_persistence();
        lap(&mut self.phase_seconds[6]);
        self.step_error();
        lap(&mut self.phase_seconds[7]);
        self.step_lp();
        lap(&mut self.phase_seconds[8]);
        self.hebbian_update();
        self.detect_transitions(world);
        lap(&mut self.phase_seconds[9]);
        commands
    }

    /// Runs the architecture for a stretch of simulated seconds.
    pub fn run_for(&mut self, world: &mut dyn PushWorld, seconds: f64) {
        let steps = (seconds * 1000.0 / DT_MS).round() as usize;
        for _ in 0..steps {
            self.tick(world);
        }
    }

    // ------------------------------------------------- motion schedule ----

    fn resolve_motion_events(&mut self, world: &mut dyn PushWorld) {
        let Some(plan) = self.motion.clone() else {
            return;
        };

        if !plan.obs_resolved && self.t_ms >= plan.t_obs_ms {
            self.motion.as_mut().unwrap().obs_resolved = true;
            self.events.push(Event {
                t_s: self.t_s(),
                kind: EventKind::Outcome {
                    moved: plan.outcome.moved,
                    angle: plan.outcome.goal_angle_feature,
                },
            });
            if plan.outcome.moved {
                self.observe_moved_outcome(world, &plan);
            }
        }

        if self.t_ms >= plan.t_eoa_end_ms {
            // Motion over: commit the error register, log progress, clean up.
            if let Some(p) = self.pending.take() {
                self.records[p.goal_idx].current_error = p.new;
                let lp = self.lp_at(&self.records[p.goal_idx].goal.clone());
                self.events.push(Event {
                    t_s: self.t_s(),
                    kind: EventKind::ErrorUpdate {
                        goal_idx: p.goal_idx,
                        old: p.old,
                        new: p.new,
                    },
                });
                self.events.push(Event {
                    t_s: self.t_s(),
                    kind: EventKind::LpUpdate {
                        goal_idx: p.goal_idx,
                        lp,
                    },
                });
            }
            world.respawn_if_unreachable();
            self.motion = None;
            self.last_progress_ms = self.t_ms;
        }
    }

    fn observe_moved_outcome(&mut self, world: &mut dyn PushWorld, plan: &MotionPlan) {
        let angle = plan.outcome.goal_angle_feature.expect("moved outcome");
        let color = world.color_feature();
        let point = GoalPoint::new(color, angle);
        let identity_radius = self.cfg.gains.goal_peak_sigma;
        let nearest = self.nearest_record(&point);

        let novel = (plan.novelty_latched || self.goal_perceived.is_active())
            && self.tonic.is_active()
            && nearest.map_or(true, |(_, d)| d >= identity_radius);

        let ws = world.workspace();
        let norm = |p: (f64, f64)| {
            (
                (p.0 - ws.min.0) / (ws.max.0 - ws.min.0),
                (p.1 - ws.min.1) / (ws.max.1 - ws.min.1),
            )
        };
        let obj = norm(plan.outcome.pre_pos);
        let cmd = norm(plan.command);
        let forward_sample = Sample::new(vec![obj.0, obj.1, cmd.0, cmd.1], vec![angle / 100.0]);
        let inverse_sample = Sample::new(vec![obj.0, obj.1, angle / 100.0], vec![cmd.0, cmd.1]);

        if novel {
            let demo = plan
                .recorded
                .clone()
                .unwrap_or_else(|| straight_demo(world.effector_rest(), plan.command));
            let n_basis = (demo.len() / 2).clamp(5, 20);
            let dmp = DmpSkill::learn_from_demo(&demo, n_basis).unwrap_or_else(|_| {
                DmpSkill::zero(
                    2,
                    20,
                    demo.duration().max(0.5),
                    demo.start(),
                    demo.end(),
                )
            });
            let span = self.cfg.gains.predictor_init_span;
            let mut forward =
                Predictor::with_init_span(PredictorKind::Forward, self.predictor_seed, span);
            let mut inverse =
                Predictor::with_init_span(PredictorKind::Inverse, self.predictor_seed, span);
            let first_error = bounded_loss(
                &forward.predict(&forward_sample.input).expect("forward input"),
                &forward_sample.target,
            );
            let _ = forward.train_on_new(std::slice::from_ref(&forward_sample));
            let _ = inverse.train_on_new(std::slice::from_ref(&inverse_sample));

            self.records.push(GoalRecord {
                goal: point,
                dmp,
                forward,
                inverse,
                current_error: first_error,
            });
            self.hebbian.push(Grid::zeros(Shape::Plane(100, 100)));
            self.dmp_gate_until
                .push(self.t_ms + self.cfg.timing.discovery_window_s * 1000.0);
            let idx = self.records.len() - 1;
            self.pending = Some(PendingError {
                goal_idx: idx,
                old: first_error,
                new: first_error,
            });
            self.discovery_until = self.t_ms + self.cfg.timing.discovery_window_s * 1000.0;
            self.discovery_goal = Some(point);
            self.wm_drop_until = plan.t_eoa_end_ms;
            self.wm_drop_color = color;
            // New stimulus: the pose memory resets.
            self.ior_drop_until = self.t_ms + 400.0;
            self.ior_stamps.clear();
            self.events.push(Event {
                t_s: self.t_s(),
                kind: EventKind::Discovery {
                    goal: point,
                    first_error,
                },
            });
        } else if let Some((idx, dist)) = nearest {
            if dist < 3.0 * identity_radius {
                // Outcome belongs to a known goal: update its models.
                let rec = &mut self.records[idx];
                let prediction = rec
                    .forward
                    .predict(&forward_sample.input)
                    .expect("forward input");
                let mut new_error = bounded_loss(&prediction, &forward_sample.target);
                if let Some(scripts) = &mut self.scripted_errors {
                    if let Some(queue) = scripts.get_mut(&idx) {
                        if let Some(e) = queue.pop_front() {
                            new_error = e;
                        }
                    }
                }
                let _ = rec.forward.train_on_new(std::slice::from_ref(&forward_sample));
                let _ = rec.inverse.train_on_new(std::slice::from_ref(&inverse_sample));
                let old = rec.current_error;
                self.pending = Some(PendingError {
                    goal_idx: idx,
                    old,
                    new: new_error,
                });
            }
        }

        if self.pending.is_some() {
            // A new error value exists: the time node pulses ahead of the EOA.
            self.time_until = self.t_ms + 400.0;
        }
    }

    // ------------------------------------------------------ subsystems ----

    fn step_pulse_nodes(&mut self) {
        // EOA fires once the effector is back at rest; outside a motion the
        // exhaustion path arms the window directly.
        let eoa_in = match &self.motion {
            Some(plan) => {
                if self.t_ms >= plan.t_rest_ms && self.t_ms < plan.t_eoa_end_ms {
                    2.5
                } else {
                    0.0
                }
            }
            None => self.pulse(self.eoa_until),
        };
        self.cos_eoa.step_scalar(eoa_in, DT_MS).unwrap();
        let time_in = self.pulse(self.time_until);
        self.time_node.step_scalar(time_in, DT_MS).unwrap();
    }

    fn step_perception(&mut self, world: &mut dyn PushWorld) {
        let g = &self.cfg.gains;

        // Object position percept.
        let mut pos_in = Grid::zeros(self.position_object.shape());
        if world.object_present() {
            let cell = workspace_cell(world.object_pos(), &world.workspace());
            pos_in.add_gaussian((cell.0 as f64, cell.1 as f64), 2.5, g.object_position_stimulus);
        }
        self.position_object.step(&pos_in, DT_MS).unwrap();

        // Motion percept: sustained input while the object is being seen to
        // move, inhibited by the goal ledger (inhibition of return).
        let mut gp_in = Grid::zeros(self.goal_perceived.shape());
        if let Some(plan) = &self.motion {
            if plan.outcome.moved
                && self.t_ms >= plan.t_push_ms
                && self.t_ms < plan.t_obs_ms + 400.0
            {
                let angle = plan.outcome.goal_angle_feature.expect("moved");
                let color = world.color_feature();
                gp_in.add_gaussian((angle, color), g.goal_peak_sigma, g.goal_motion_stimulus);
            }
        }
        self.proj("goals_to_goal_perceived")
            .apply_into(self.goals.output_shared(), &mut gp_in)
            .unwrap();
        self.proj("wm_goals_to_goal_perceived")
            .apply_into(self.wm_goals.output_shared(), &mut gp_in)
            .unwrap();
        self.goal_perceived.step(&gp_in, DT_MS).unwrap();
        if self.goal_perceived.is_active() {
            if let Some(plan) = &mut self.motion {
                // The percept peak may later be suppressed by the perception
                // memory; novelty is decided by its first appearance.
                plan.novelty_latched = true;
            }
        }

        let mut wmg_in = Grid::zeros(self.wm_goals.shape());
        self.proj("goal_perceived_to_wm_goals")
            .apply_into(self.goal_perceived.output_shared(), &mut wmg_in)
            .unwrap();
        self.wm_goals.step(&wmg_in, DT_MS).unwrap();

        // Goal focus: discovery imprint during exploration, selection stamp
        // during exploitation.
        let mut gf_in = Grid::zeros(self.goal_focus.shape());
        if self.t_ms < self.discovery_until {
            if let Some(goal) = self.discovery_goal {
                gf_in.add_gaussian(
                    (goal.angle, goal.color),
                    g.goal_peak_sigma,
                    g.goal_focus_stamp,
                );
            }
        }
        if let Some(idx) = self.episode {
            let goal = self.records[idx].goal;
            gf_in.add_gaussian(
                (goal.angle, goal.color),
                g.goal_peak_sigma,
                g.goal_focus_stamp,
            );
        }
        self.goal_focus.step(&gf_in, DT_MS).unwrap();

        let mut goals_in = Grid::zeros(self.goals.shape());
        self.proj("goal_focus_to_goals")
            .apply_into(self.goal_focus.output_shared(), &mut goals_in)
            .unwrap();
        self.proj("current_goal_to_goals")
            .apply_into(self.current_goal.output_shared(), &mut goals_in)
            .unwrap();
        self.goals.step(&goals_in, DT_MS).unwrap();

        // Object decision: attended color during exploration, the selected
        // goal's color during exploitation.
        let mut od_in = Grid::zeros(self.object_decision.shape());
        self.proj("object_selection_to_object_decision")
            .apply_into(self.object_selection.output_shared(), &mut od_in)
            .unwrap();
        if let Some(idx) = self.episode {
            od_in.add_gaussian(
                (self.records[idx].goal.color, 0.0),
                3.0,
                g.object_decision_stamp,
            );
        }
        self.object_decision.step(&od_in, DT_MS).unwrap();
    }

    fn step_habituation(&mut self, world: &mut dyn PushWorld) {
        let g = &self.cfg.gains;
        let scene = world.scene_colors();

        let mut np_in = Grid::zeros(self.new_perception.shape());
        for &(color, amp) in &scene {
            np_in.add_gaussian((color, 0.0), 3.0, amp);
        }
        self.proj("tonic_to_new_perception")
            .apply_into(self.tonic.output_shared(), &mut np_in)
            .unwrap();
        self.new_perception.step(&np_in, DT_MS).unwrap();

        let mut wmc_in = Grid::zeros(self.wm_colors.shape());
        self.proj("new_perception_to_wm_colors")
            .apply_into(self.new_perception.output_shared(), &mut wmc_in)
            .unwrap();
        self.proj("object_selection_to_wm_colors")
            .apply_into(self.object_selection.output_shared(), &mut wmc_in)
            .unwrap();
        if self.t_ms < self.wm_drop_until {
            wmc_in.add_gaussian(
                (self.wm_drop_color, 0.0),
                3.0,
                g.wm_colors_discovery_inhibition,
            );
        }
        self.wm_colors.step(&wmc_in, DT_MS).unwrap();

        let mut sel_in = Grid::zeros(self.object_selection.shape());
        for &(color, amp) in &scene {
            sel_in.add_gaussian((color, 0.0), 3.0, amp * g.object_color_stimulus);
        }
        self.proj("visual_memory_to_object_selection")
            .apply_into(self.visual_memory.values(), &mut sel_in)
            .unwrap();
        self.object_selection.step(&sel_in, DT_MS).unwrap();

        // Habituation trace: builds at end of action where the color memory
        // is up, decays there when a discovery dropped the memory.
        let gate = self.cos_eoa.output_value();
        let f = self.wm_colors.output_shared().clone();
        self.visual_memory.step(&f, Gate::Scalar(gate), DT_MS).unwrap();
    }

    fn step_lc(&mut self, world: &mut dyn PushWorld) {
        let g = &self.cfg.gains;
        let engaged = if self.current_goal.is_active() { 1.0 } else { 0.0 };

        let mut active_in = Grid::zeros(Shape::Scalar);
        self.proj("force_to_active")
            .apply_into(self.force.output_shared(), &mut active_in)
            .unwrap();
        self.proj("stop_to_active")
            .apply_into(self.stop.output_shared(), &mut active_in)
            .unwrap();
        if self.episode.is_some() {
            active_in.add_uniform(-2.0);
        }
        self.active.step(&active_in, DT_MS).unwrap();

        self.lc_boost
            .step(self.active.output_value(), self.stop.output_value(), DT_MS)
            .unwrap();

        let mut stop_in = Grid::zeros(Shape::Scalar);
        self.proj("tonic_to_stop")
            .apply_into(self.tonic.output_shared(), &mut stop_in)
            .unwrap();
        self.proj("phasic_to_stop")
            .apply_into(self.phasic.output_shared(), &mut stop_in)
            .unwrap();
        self.stop.step(&stop_in, DT_MS).unwrap();

        let mut tonic_in = Grid::zeros(Shape::Scalar);
        self.proj("object_selection_to_tonic")
            .apply_into(self.object_selection.output_shared(), &mut tonic_in)
            .unwrap();
        self.proj("phasic_to_tonic")
            .apply_into(self.phasic.output_shared(), &mut tonic_in)
            .unwrap();
        if world.object_present() {
            tonic_in.add_uniform(g.scene_to_tonic);
        }
        tonic_in.add_uniform(g.lc_boost_to_tonic * self.lc_boost.value());
        tonic_in.add_uniform(g.engaged_to_tonic * engaged);
        self.tonic.step(&tonic_in, DT_MS).unwrap();

        let mut phasic_in = Grid::zeros(self.phasic.shape());
        self.proj("compute_lp_to_phasic")
            .apply_into(self.compute_lp.values(), &mut phasic_in)
            .unwrap();
        self.proj("errors_mt_to_phasic")
            .apply_into(self.errors_mt.values(), &mut phasic_in)
            .unwrap();
        self.proj("attempts_to_phasic")
            .apply_into(self.attempts.values(), &mut phasic_in)
            .unwrap();
        self.proj("tonic_to_phasic")
            .apply_into(self.tonic.output_shared(), &mut phasic_in)
            .unwrap();
        phasic_in.add_uniform(g.lc_boost_to_phasic * self.lc_boost.value());
        phasic_in.add_uniform(g.engaged_to_phasic * engaged);
        self.phasic.step(&phasic_in, DT_MS).unwrap();

        // First supra-threshold peak wins the selection.
        if self.phasic.is_active() && self.episode.is_none() && !self.records.is_empty() {
            if let Some((idx, goal)) = self.lc_select() {
                self.episode = Some(idx);
                self.events.push(Event {
                    t_s: self.t_s(),
                    kind: EventKind::Selection { goal_idx: idx, goal },
                });
            }
        }
    }

    /// Reads the selection out of the phasic field: the location of its
    /// maximum maps to the nearest discovered goal. Ties in the field break
    /// toward the lowest angle sample by scan order.
    pub fn lc_select(&self) -> Option<(usize, GoalPoint)> {
        if !self.phasic.is_active() || self.records.is_empty() {
            return None;
        }
        let (r, c) = self.phasic.output().argmax2();
        let peak = GoalPoint::new(c as f64, r as f64);
        self.nearest_record(&peak).map(|(idx, _)| (idx, self.records[idx].goal))
    }

    fn step_action(&mut self, world: &mut dyn PushWorld, commands: &mut Vec<Command>) {
        let g = self.cfg.gains.clone();
        let timing = self.cfg.timing.clone();
        let moving = self.motion.is_some();
        let engaged = !moving && (self.tonic.is_active() || self.episode.is_some());

        let mut sig_in = Grid::zeros(Shape::Scalar);
        if engaged {
            sig_in.add_uniform(g.engaged_to_signal_action);
        }
        if moving {
            sig_in.add_uniform(g.moving_to_signal_action);
        }
        if self.t_ms < self.pose_block_until {
            sig_in.add_uniform(-3.0);
        }
        self.proj("action_formation_to_signal_action")
            .apply_into(self.action_formation.output_shared(), &mut sig_in)
            .unwrap();
        self.signal_action.step(&sig_in, DT_MS).unwrap();

        self.action_boost
            .step(
                self.signal_action.output_value(),
                self.cos_eoa.output_value(),
                DT_MS,
            )
            .unwrap();

        // Ring-shaped drive around the object location.
        let mut af_in = Grid::zeros(self.action_formation.shape());
        if world.object_present() {
            let cell = workspace_cell(world.object_pos(), &world.workspace());
            let ring = self.ring_for(cell);
            af_in.add_scaled(ring, g.ring_gain);
        }
        af_in.add_uniform(g.action_boost * self.action_boost.value());
        self.proj("wm_ior_to_action_formation")
            .apply_into(self.wm_ior.output_shared(), &mut af_in)
            .unwrap();
        if let Some(idx) = self.episode {
            // The inverse model suggests where to aim for the current goal.
            let rec = &self.records[idx];
            let ws = world.workspace();
            let obj = world.object_pos();
            let input = vec![
                (obj.0 - ws.min.0) / (ws.max.0 - ws.min.0),
                (obj.1 - ws.min.1) / (ws.max.1 - ws.min.1),
                rec.goal.angle / 100.0,
            ];
            if let Ok(cmd) = rec.inverse.predict(&input) {
                let row = (cmd[1] * 100.0).clamp(0.0, 99.0);
                let col = (cmd[0] * 100.0).clamp(0.0, 99.0);
                af_in.add_gaussian((row, col), 3.0, g.inverse_suggestion);
            }
        }
        if self.action_boost.value() > 0.005 {
            // Symmetry-breaking noise, drawn only over the ring support.
            if let Some((_, _, support)) = &self.ring_cache {
                for &i in support {
                    af_in.set(i, af_in.at(i) + 0.05 * self.action_noise.next_normal());
                }
            }
        }
        self.action_formation.step(&af_in, DT_MS).unwrap();

        let mut filt_in = Grid::zeros(self.filtering.shape());
        self.proj("action_formation_to_filtering")
            .apply_into(self.action_formation.output_shared(), &mut filt_in)
            .unwrap();
        self.filtering.step(&filt_in, DT_MS).unwrap();

        // Pose working memory: stamps ignite self-sustained peaks; the force
        // node and transient-goal events wash them out.
        let mut ior_in = Grid::zeros(self.wm_ior.shape());
        self.ior_stamps.retain(|s| s.until_ms > self.t_ms);
        for stamp in &self.ior_stamps {
            ior_in.add_gaussian(
                (stamp.cell.0 as f64, stamp.cell.1 as f64),
                2.5,
                g.ior_stamp,
            );
        }
        self.proj("force_to_wm_ior")
            .apply_into(self.force.output_shared(), &mut ior_in)
            .unwrap();
        if self.t_ms < self.ior_drop_until {
            ior_in.add_uniform(-3.0);
        }
        self.wm_ior.step(&ior_in, DT_MS).unwrap();

        // Pose capture.
        if engaged && self.t_ms >= self.pose_block_until && self.filtering.is_active() {
            let (row, col) = self.filtering.output_shared().argmax2();
            self.pose_history.push((col as f64, row as f64));
            let ws = world.workspace();
            let point = (
                ws.min.0 + col as f64 / 100.0 * (ws.max.0 - ws.min.0),
                ws.min.1 + row as f64 / 100.0 * (ws.max.1 - ws.min.1),
            );
            self.explore_poses.push(point);
            self.ior_update((row, col));
            self.pose_block_until = self.t_ms + timing.pose_stamp_s * 1000.0;
            self.last_progress_ms = self.t_ms;

            let needed = if self.episode.is_some() { 1 } else { 2 };
            if self.explore_poses.len() >= needed {
                self.start_motion(world, commands);
            }
        }

        if !engaged {
            // The exhaustion timer only runs against sustained engagement.
            self.last_progress_ms = self.t_ms;
        }

        // Saturated inhibition: nothing new to try around the object.
        if engaged
            && self.t_ms - self.last_progress_ms > timing.pose_timeout_s * 1000.0
        {
            self.events.push(Event {
                t_s: self.t_s(),
                kind: EventKind::ExplorationExhausted,
            });
            self.eoa_until = self.t_ms + timing.eoa_pulse_s * 1000.0;
            self.explore_poses.clear();
            self.last_progress_ms = self.t_ms;
        }
    }

    /// Adds a pose to the inhibition-of-return memory: the stamp ignites a
    /// self-sustained peak that later suppresses the same location.
    pub fn ior_update(&mut self, cell: (usize, usize)) {
        let until = self.t_ms + self.cfg.timing.pose_stamp_s * 1000.0;
        self.ior_stamps.push(IorStamp {
            cell,
            until_ms: until,
        });
    }

    /// Runs ticks until the action system yields the next pose, or gives up
    /// after `timeout_s` of simulated time. Returns the pose as feature
    /// coordinates (x, y).
    pub fn generate_pose(
        &mut self,
        world: &mut dyn PushWorld,
        timeout_s: f64,
    ) -> Option<(f64, f64)> {
        let before = self.pose_history.len();
        let deadline = self.t_ms + timeout_s * 1000.0;
        while self.t_ms < deadline {
            self.tick(world);
            if self.pose_history.len() > before {
                return Some(*self.pose_history.last().unwrap());
            }
        }
        None
    }

    fn start_motion(&mut self, world: &mut dyn PushWorld, commands: &mut Vec<Command>) {
        let exploratory = self.episode.is_none();
        let rest = world.effector_rest();
        let mut waypoints = vec![rest];
        waypoints.extend(self.explore_poses.drain(..));

        let result = world.execute(&waypoints, exploratory);
        let (outcome, recorded) = match result {
            Ok(x) => x,
            Err(_) => return,
        };

        let speed = 0.25;
        let mut outgoing = 0.0;
        for seg in waypoints.windows(2) {
            outgoing += ((seg[1].0 - seg[0].0).powi(2) + (seg[1].1 - seg[0].1).powi(2)).sqrt();
        }
        let outgoing_s = (outgoing / speed).max(0.4);
        let t_push = self.t_ms + 0.6 * outgoing_s * 1000.0;
        let t_obs = t_push + self.cfg.timing.observation_delay_s * 1000.0;
        let t_rest = self.t_ms + (outgoing_s + self.cfg.timing.return_duration_s) * 1000.0;
        let t_eoa_end = t_rest + self.cfg.timing.eoa_pulse_s * 1000.0;

        let command = *waypoints.last().unwrap();
        self.motion = Some(MotionPlan {
            t_push_ms: t_push,
            t_obs_ms: t_obs,
            t_rest_ms: t_rest,
            t_eoa_end_ms: t_eoa_end,
            outcome,
            recorded,
            command,
            obs_resolved: false,
            novelty_latched: false,
        });

        self.events.push(Event {
            t_s: self.t_s(),
            kind: EventKind::MotionStart { exploratory },
        });
        commands.push(Command::StartMotion {
            waypoints,
            exploratory,
        });
        if let Some(idx) = self.episode {
            commands.push(Command::ActivateSkill {
                goal_idx: idx,
                target: command,
            });
        }
    }

    fn step_persistence(&mut self) {
        let g = &self.cfg.gains;

        let mut thr_in = Grid::zeros(Shape::Scalar);
        self.proj("transient_action_to_threshold")
            .apply_into(self.transient_action.values(), &mut thr_in)
            .unwrap();
        if let Some(idx) = self.episode {
            thr_in.add_uniform(-g.error_to_threshold * self.records[idx].current_error);
        }
        self.threshold_node.step(&thr_in, DT_MS).unwrap();

        let mut force_in = Grid::zeros(Shape::Scalar);
        self.proj("threshold_to_force")
            .apply_into(self.threshold_node.output_shared(), &mut force_in)
            .unwrap();
        self.force.step(&force_in, DT_MS).unwrap();

        // Transient action builds per end-of-action while exploiting and is
        // washed out while the force node is up.
        let force_up = self.force.is_active();
        let f_val = if self.episode.is_some() && !force_up {
            1.0
        } else {
            0.0
        };
        let gate = self
            .cos_eoa
            .output_value()
            .max(self.force.output_value());
        self.transient_action
            .step(&Grid::scalar(f_val), Gate::Scalar(gate), DT_MS)
            .unwrap();

        // Attempts inhibition: excited at the goal through the whole
        // threshold-and-force crossing, free-running decay everywhere else.
        let mut attempts_f = Grid::zeros(Shape::Plane(100, 100));
        if let Some(idx) = self.episode.or(self.force_goal) {
            let drive = self
                .threshold_node
                .output_value()
                .max(self.force.output_value());
            if drive > 0.0 {
                let mask = self.goal_mask(&self.records[idx].goal.clone());
                attempts_f.add_scaled(&mask, drive);
                attempts_f.map_inplace(|v| v.min(1.0));
            }
        }
        self.attempts
            .step(&attempts_f, Gate::Scalar(1.0), DT_MS)
            .unwrap();

        if force_up && !self.prev_force_active {
            if let Some(idx) = self.episode.take() {
                self.force_goal = Some(idx);
                self.events.push(Event {
                    t_s: self.t_s(),
                    kind: EventKind::ForceReset { goal_idx: idx },
                });
            }
            self.explore_poses.clear();
            self.ior_stamps.clear();
            self.last_progress_ms = self.t_ms;
        }
        if !force_up {
            self.force_goal = None;
        }
        self.prev_force_active = force_up;
    }

    fn step_error(&mut self) {
        let g = self.cfg.gains.clone();

        // Current-goal peak (absolute sigmoid output is near-binary).
        let mut cg_in = Grid::zeros(self.current_goal.shape());
        if let Some(idx) = self.episode {
            let goal = self.records[idx].goal;
            cg_in.add_gaussian((goal.angle, goal.color), g.goal_peak_sigma, g.current_goal_stamp);
        }
        self.current_goal.step(&cg_in, DT_MS).unwrap();

        let mask = self
            .pending
            .map(|p| self.goal_mask(&self.records[p.goal_idx].goal.clone()));

        // Pre-update level of the current goal, boosted by the time node.
        let mut lg_in = Grid::zeros(self.local_goal.shape());
        self.proj("time_to_local_goal")
            .apply_into(self.time_node.output_shared(), &mut lg_in)
            .unwrap();
        if let (Some(p), Some(m)) = (self.pending, &mask) {
            lg_in.add_scaled(m, p.old * g.local_error_gain);
        }
        self.local_goal.step(&lg_in, DT_MS).unwrap();

        let time_out = self.time_node.output_value();
        let mut le_in = Grid::zeros(Shape::Scalar);
        le_in.add_uniform(g.time_to_value_boost * time_out);
        le_in.add_uniform(self.local_goal.output().max());
        self.local_error.step(&le_in, DT_MS).unwrap();

        let mut ue_in = Grid::zeros(Shape::Scalar);
        ue_in.add_uniform(g.time_to_value_boost * time_out);
        if let Some(p) = self.pending {
            ue_in.add_uniform(p.new * g.updated_error_gain);
        }
        self.updated_error.step(&ue_in, DT_MS).unwrap();

        // Rise/low compare the fresh value against the pre-update level; the
        // -1.025 resting level plus the unit time boost yields the 0.025
        // dead zone.
        let updated_out = self.updated_error.output_value();
        let local_out = self.local_error.output_value();
        let mut rise_in = Grid::zeros(Shape::Scalar);
        self.proj("time_to_rise")
            .apply_into(self.time_node.output_shared(), &mut rise_in)
            .unwrap();
        rise_in.add_uniform(updated_out - local_out);
        self.rise.step(&rise_in, DT_MS).unwrap();

        let mut low_in = Grid::zeros(Shape::Scalar);
        self.proj("time_to_low")
            .apply_into(self.time_node.output_shared(), &mut low_in)
            .unwrap();
        low_in.add_uniform(local_out - updated_out);
        self.low.step(&low_in, DT_MS).unwrap();

        // Stored errors with the current goal (and its surround) inhibited.
        let mut filter_f = self.errors_mt.values().clone();
        if let Some(idx) = self.episode {
            let goal = self.records[idx].goal;
            let engagement = self.current_goal.output_max();
            if engagement > 0.0 {
                let (r, c) = goal.cell();
                let mut inh = Grid::zeros(filter_f.shape());
                inh.add_gaussian(
                    (r as f64, c as f64),
                    g.filter_inhibition_sigma,
                    g.filter_inhibition_amp * engagement,
                );
                filter_f.add_scaled(&inh, -1.0);
            }
        }
        filter_f.map_inplace(|v| v.clamp(0.0, 1.0));
        self.filter_mt
            .step(&filter_f, Gate::Scalar(1.0), DT_MS)
            .unwrap();

        let mut ce_in = Grid::zeros(self.compute_error.shape());
        self.proj("filter_mt_to_compute_error")
            .apply_into(self.filter_mt.values(), &mut ce_in)
            .unwrap();
        if let (Some(p), Some(m)) = (self.pending, &mask) {
            ce_in.add_scaled(m, p.new * g.updated_error_gain);
        }
        self.compute_error.step(&ce_in, DT_MS).unwrap();

        // Error memory commits at end of action, only when a new value
        // exists, and only around the updated goal: distant goals hold their
        // stored level exactly.
        if let Some(p) = self.pending {
            let eoa = self.cos_eoa.output_value();
            if eoa > 0.0 {
                let mut errors_f = self.compute_error.output();
                errors_f.map_inplace(|v| v.clamp(0.0, 1.0));
                let goal = self.records[p.goal_idx].goal;
                let (r, c) = goal.cell();
                let mut gate = Grid::zeros(errors_f.shape());
                gate.add_gaussian((r as f64, c as f64), g.filter_inhibition_sigma, eoa);
                self.errors_mt
                    .step(&errors_f, Gate::PerCell(&gate), DT_MS)
                    .unwrap();
            }
        }
    }

    fn step_lp(&mut self) {
        let mask = self
            .pending
            .map(|p| self.goal_mask(&self.records[p.goal_idx].goal.clone()));

        let mut var_in = Grid::zeros(self.variation.shape());
        self.proj("low_to_variation")
            .apply_into(self.low.output_shared(), &mut var_in)
            .unwrap();
        if let Some(m) = &mask {
            for i in 0..var_in.len() {
                var_in.set(i, var_in.at(i) * m.at(i));
            }
        } else {
            var_in.fill(0.0);
        }
        self.variation.step(&var_in, DT_MS).unwrap();

        // Learning progress updates only when rise or low fired: builds on
        // drops (variation up), decays on rises, holds in the dead zone.
        let mut f = self.variation.output();
        f.map_inplace(|v| v.clamp(0.0, 1.0));
        let drive = (self.rise.output_value() + self.low.output_value()).min(1.0);
        if drive > 0.0 {
            if let Some(m) = &mask {
                let mut gate = m.clone();
                gate.map_inplace(|v| (v * drive).min(1.0));
                self.compute_lp
                    .step(&f, Gate::PerCell(&gate), DT_MS)
                    .unwrap();
            }
        }
    }

    /// Reward-gated associative learning between the goal focus and the
    /// skill units: weights relax toward the focus output while the
    /// exploration signal and the skill unit are both active.
    pub fn hebbian_update(&mut self) {
        let explore = self.tonic.output_value();
        if explore == 0.0 {
            return;
        }
        let rate = self.cfg.timing.hebbian_rate_per_s * DT_MS / 1000.0;
        let focus = self.goal_focus.output();
        for (idx, w) in self.hebbian.iter_mut().enumerate() {
            let unit_gate = if self.t_ms < self.dmp_gate_until[idx] {
                1.0
            } else {
                0.0
            };
            if unit_gate == 0.0 {
                continue;
            }
            let step = rate * explore * unit_gate;
            for i in 0..w.len() {
                let target = focus.at(i);
                w.set(i, w.at(i) + step * (target - w.at(i)));
            }
        }
    }

    /// The skill unit whose weights respond strongest to the focus peak.
    pub fn triggered_skill(&self) -> Option<usize> {
        let focus = self.goal_focus.output();
        let mut best = None;
        let mut best_v = 0.1;
        for (idx, w) in self.hebbian.iter().enumerate() {
            let mut acc = 0.0;
            for i in 0..w.len() {
                acc += w.at(i) * focus.at(i);
            }
            if acc > best_v {
                best_v = acc;
                best = Some(idx);
            }
        }
        best
    }

    fn detect_transitions(&mut self, world: &mut dyn PushWorld) {
        let tonic_now = self.tonic.is_active();
        if tonic_now != self.prev_tonic_active {
            self.events.push(Event {
                t_s: self.t_s(),
                kind: if tonic_now {
                    EventKind::TonicOn
                } else {
                    EventKind::TonicOff
                },
            });
        }
        self.prev_tonic_active = tonic_now;

        let sel_now = self.object_selection.is_active();
        if self.prev_selection_active && !sel_now && world.object_present() {
            self.events.push(Event {
                t_s: self.t_s(),
                kind: EventKind::Habituated {
                    color: world.color_feature(),
                },
            });
        }
        self.prev_selection_active = sel_now;
    }

    fn ring_for(&mut self, cell: (usize, usize)) -> &Grid {
        let needs = match &self.ring_cache {
            Some((c, _, _)) => *c != cell,
            None => true,
        };
        if needs {
            let kernel: InteractionKernel = self.cfg.action_kernel.build();
            let mut ring = Grid::zeros(Shape::Plane(100, 100));
            let reach = kernel.support_inh() as isize;
            for dr in -reach..=reach {
                let r = cell.0 as isize + dr;
                if !(0..100).contains(&r) {
                    continue;
                }
                for dc in -reach..=reach {
                    let c = cell.1 as isize + dc;
                    if !(0..100).contains(&c) {
                        continue;
                    }
                    // s(x, y) = -(a_s * k(x, y)) with a_s = 1.
                    let v = -kernel.eval(dr as f64, dc as f64);
                    ring.set2(r as usize, c as usize, v);
                }
            }
            // Cells the stochastic search actually explores.
            let support: Vec<usize> = (0..ring.len()).filter(|&i| ring.at(i) > 0.02).collect();
            self.ring_cache = Some((cell, ring, support));
        }
        &self.ring_cache.as_ref().unwrap().1
    }

    /// Ring-shaped drive evaluated at the object cell; pose tests read this.
    pub fn ring_value_at(&mut self, object_cell: (usize, usize), probe: (usize, usize)) -> f64 {
        let ring = self.ring_for(object_cell).clone();
        ring.at2(probe.0, probe.1)
    }
}

fn workspace_cell(p: (f64, f64), ws: &Workspace) -> (usize, usize) {
    let col = ((p.0 - ws.min.0) / (ws.max.0 - ws.min.0) * 100.0).clamp(0.0, 99.0);
    let row = ((p.1 - ws.min.1) / (ws.max.1 - ws.min.1) * 100.0).clamp(0.0, 99.0);
    (row.round() as usize, col.round() as usize)
}

fn straight_demo(rest: (f64, f64), target: (f64, f64)) -> Trajectory {
    let n = 36;
    let times: Vec<f64> = (0..n).map(|i| i as f64 * 0.05).collect();
    let xs: Vec<f64> = (0..n)
        .map(|i| rest.0 + (target.0 - rest.0) * i as f64 / (n - 1) as f64)
        .collect();
    let ys: Vec<f64> = (0..n)
        .map(|i| rest.1 + (target.1 - rest.1) * i as f64 / (n - 1) as f64)
        .collect();
    Trajectory::new(times, vec![xs, ys]).expect("monotone timestamps")
}

fn count_regions(output: &Grid) -> usize {
    // Connected supra-threshold regions via 4-neighbor flood fill.
    let (rows, cols) = match output.shape() {
        Shape::Plane(r, c) => (r, c),
        _ => return 0,
    };
    let mut seen = vec![false; rows * cols];
    let mut regions = 0;
    for start in 0..rows * cols {
        if seen[start] || output.at(start) <= 0.5 {
            continue;
        }
        regions += 1;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            if seen[i] || output.at(i) <= 0.5 {
                continue;
            }
            seen[i] = true;
            let (r, c) = (i / cols, i % cols);
            if r > 0 {
                stack.push(i - cols);
            }
            if r + 1 < rows {
                stack.push(i + cols);
            }
            if c > 0 {
                stack.push(i - 1);
            }
            if c + 1 < cols {
                stack.push(i + 1);
            }
        }
    }
    regions
}
