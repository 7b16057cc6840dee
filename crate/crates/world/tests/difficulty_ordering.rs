//! Kind difficulty: under an identical distribution of babbling motions,
//! the rate of goal-producing outcomes orders cube > cylinder > ball.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use world::{ObjectKind, WorldState};

/// Draws a pose on a ring around the object, the same distribution the
/// action system produces during exploration.
fn ring_pose(rng: &mut ChaCha8Rng, center: (f64, f64)) -> (f64, f64) {
    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
    let radius = rng.gen_range(0.03..0.055);
    (
        (center.0 + radius * angle.cos()).clamp(0.001, 0.599),
        (center.1 + radius * angle.sin()).clamp(0.001, 0.599),
    )
}

fn goal_outcomes(kind: ObjectKind, motions: usize, seed: u64) -> usize {
    let mut world = WorldState::new(kind, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut count = 0;
    for _ in 0..motions {
        let rest = world.effector_rest;
        let p1 = ring_pose(&mut rng, world.object_pos);
        let p2 = ring_pose(&mut rng, world.object_pos);
        let (outcome, _) = world.execute_motion(&[rest, p1, p2], false).unwrap();
        if outcome.moved {
            count += 1;
            assert!(outcome.goal_angle_feature.is_some());
        } else {
            assert!(outcome.goal_angle_feature.is_none());
        }
        world.respawn_if_unreachable();
    }
    count
}

#[test]
fn goal_outcome_rate_orders_cube_cylinder_ball() {
    let n = 500;
    let cube = goal_outcomes(ObjectKind::Cube, n, 42);
    let cylinder = goal_outcomes(ObjectKind::Cylinder, n, 42);
    let ball = goal_outcomes(ObjectKind::Ball, n, 42);
    println!("goal outcomes over {n} motions: cube={cube} cylinder={cylinder} ball={ball}");
    assert!(
        cube > cylinder && cylinder > ball,
        "expected cube > cylinder > ball, got {cube} / {cylinder} / {ball}"
    );
}

#[test]
fn random_pushes_never_strand_the_object() {
    for seed in 0..10u64 {
        let mut world = WorldState::new(ObjectKind::Ball, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31));
        for _ in 0..10 {
            let rest = world.effector_rest;
            let p1 = ring_pose(&mut rng, world.object_pos);
            let p2 = ring_pose(&mut rng, world.object_pos);
            world.execute_motion(&[rest, p1, p2], false).unwrap();
            world.respawn_if_unreachable();
            assert!(world.workspace.contains(world.object_pos));
        }
    }
}
