//! Pose generation around the object: ring shape, center avoidance,
//! inhibition-of-return spacing.

use cognition::{ArchitectureConfig, ArchitectureState, ScriptedWorld};

#[test]
fn ring_drive_has_a_center_dip_and_a_surrounding_crest() {
    let mut a = ArchitectureState::build(ArchitectureConfig::default(), 1).unwrap();
    // s(0,0) = -(3.5 - 4.0) = +0.5 exactly.
    let center = a.ring_value_at((50, 50), (50, 50));
    assert!((center - 0.5).abs() < 1e-12, "center {center}");
    // Crest near radius 6: 4 e^(-36/162) - 3.5 e^(-36/8).
    let crest = a.ring_value_at((50, 50), (50, 56));
    assert!((crest - 3.16).abs() < 0.05, "crest {crest}");
    assert!(crest > 6.0 * center);
    // Far away the drive vanishes.
    let far = a.ring_value_at((50, 50), (50, 90));
    assert!(far.abs() < 1e-3, "far {far}");
}

#[test]
fn poses_land_on_the_ring_and_never_on_the_object() {
    let mut a = ArchitectureState::build(ArchitectureConfig::default(), 21).unwrap();
    let mut world = ScriptedWorld::new(10.0);
    world.success_every = usize::MAX;
    // Collect poses over an exploration stretch.
    for _ in 0..30 {
        if a.generate_pose(&mut world, 20.0).is_none() {
            break;
        }
    }
    let poses = a.pose_history();
    assert!(poses.len() >= 8, "only {} poses generated", poses.len());
    let object = (50.0, 50.0);
    for &(x, y) in poses {
        let d = ((x - object.0).powi(2) + (y - object.1).powi(2)).sqrt();
        assert!(d >= 3.0, "pose ({x},{y}) too close to the object center");
        assert!(d <= 16.0, "pose ({x},{y}) left the ring, distance {d}");
    }
}

#[test]
fn consecutive_poses_are_separated_by_the_kernel_width() {
    let mut a = ArchitectureState::build(ArchitectureConfig::default(), 22).unwrap();
    let mut world = ScriptedWorld::new(10.0);
    world.success_every = usize::MAX;
    for _ in 0..20 {
        if a.generate_pose(&mut world, 20.0).is_none() {
            break;
        }
    }
    let poses = a.pose_history();
    assert!(poses.len() >= 6);
    // Kernel sigma of the pose field is 2 feature units.
    for pair in poses.windows(2) {
        let d = ((pair[0].0 - pair[1].0).powi(2) + (pair[0].1 - pair[1].1).powi(2)).sqrt();
        assert!(
            d >= 2.0,
            "consecutive poses {:?} and {:?} only {d} apart",
            pair[0],
            pair[1]
        );
    }
}
