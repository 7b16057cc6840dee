//! Working-memory capacity checks for the pose and goal ledgers.

use cognition::{ArchitectureConfig, ArchitectureState, GoalPoint, ScriptedWorld};

#[test]
fn pose_memory_holds_a_limited_number_of_peaks() {
    let mut arch = ArchitectureState::build(ArchitectureConfig::default(), 2).unwrap();
    let mut world = ScriptedWorld::new(10.0);
    world.present = false;

    let cells = [
        (50usize, 40usize), (42, 46), (44, 56), (52, 60), (58, 52),
        (56, 42), (40, 60), (62, 50), (36, 50), (50, 64),
    ];
    let mut max_regions = 0;
    for cell in cells {
        arch.ior_update(cell);
        arch.run_for(&mut world, 2.0);
        max_regions = max_regions.max(arch.wm_ior_region_count());
    }
    arch.run_for(&mut world, 4.0);
    let settled = arch.wm_ior_region_count();
    eprintln!("max {max_regions}, settled {settled}");
    assert!(max_regions >= 3, "memory should hold several poses, got {max_regions}");
    assert!(settled <= 6, "capacity must stay limited, got {settled}");
    assert!(settled >= 3);
}

#[test]
fn overflowing_pose_dissipates_within_two_seconds() {
    let mut arch = ArchitectureState::build(ArchitectureConfig::default(), 2).unwrap();
    let mut world = ScriptedWorld::new(10.0);
    world.present = false;

    let cells = [
        (50usize, 40usize), (42, 46), (44, 56), (52, 60), (58, 52),
        (56, 42), (40, 60), (62, 50), (36, 50), (50, 64),
    ];
    for cell in cells {
        arch.ior_update(cell);
        arch.run_for(&mut world, 2.0);
    }
    // Saturated: one more stamp must push some existing peak out within 2 s.
    let before = arch.wm_ior_region_count();
    arch.ior_update((50, 50));
    arch.run_for(&mut world, 2.0);
    let after = arch.wm_ior_region_count();
    eprintln!("before {before}, after overflow {after}");
    assert!(after <= before + 1 && after <= 6);
}

#[test]
fn goal_ledger_holds_many_distinct_goals() {
    let mut arch = ArchitectureState::build(ArchitectureConfig::default(), 2).unwrap();
    let mut world = ScriptedWorld::new(10.0);
    world.present = false;
    // Eight goals spread over angles on one color column.
    for k in 0..8 {
        arch.seed_goal(GoalPoint::new(10.0, 8.0 + 12.0 * k as f64), 0.5);
    }
    arch.run_for(&mut world, 10.0);
    let goals_regions = arch.goals_region_count();
    eprintln!("goal regions sustained: {goals_regions}");
    assert!(goals_regions >= 7, "the goal ledger must retain discovered goals");
}
