//! Habituation timing on the real tabletop: slow vs fast visual memory.

use cognition::{ArchitectureConfig, ArchitectureState, EventKind};
use world::{ObjectKind, WorldState};

fn explore(kind: ObjectKind, tau_plus: f64, seed: u64) -> (usize, f64) {
    let mut cfg = ArchitectureConfig::default();
    cfg.network
        .traces
        .get_mut("visual_memory")
        .unwrap()
        .tau_plus = tau_plus;
    let mut arch = ArchitectureState::build(cfg, seed).unwrap();
    let mut world = WorldState::new(kind, seed ^ 0x5eed);
    let cap_s = 300.0;
    let step_budget = (cap_s * 100.0) as usize;
    let mut habituated_at = cap_s;
    for _ in 0..step_budget {
        arch.tick(&mut world);
        if arch
            .events
            .iter()
            .any(|e| matches!(e.kind, EventKind::Habituated { .. }))
        {
            habituated_at = arch.t_s();
            break;
        }
    }
    let discoveries = arch
        .events
        .iter()
        .filter(|e| matches!(e.kind, EventKind::Discovery { .. }))
        .count();
    (discoveries, habituated_at)
}

#[test]
fn slow_habituation_explores_longer_and_discovers_at_least_as_much() {
    let mut fast_total = 0usize;
    let mut slow_total = 0usize;
    for seed in 0..3 {
        let (fast_goals, fast_t) = explore(ObjectKind::Cube, 2000.0, seed);
        let (slow_goals, slow_t) = explore(ObjectKind::Cube, 4000.0, seed);
        eprintln!(
            "seed {seed}: fast {fast_goals} goals in {fast_t:.0}s, slow {slow_goals} goals in {slow_t:.0}s"
        );
        assert!(
            slow_t >= fast_t,
            "slow habituation must not end exploration earlier"
        );
        fast_total += fast_goals;
        slow_total += slow_goals;
    }
    assert!(
        slow_total >= fast_total,
        "slow {slow_total} vs fast {fast_total}"
    );
    assert!(fast_total > 0, "fast exploration should still discover goals");
}
