//! Kind-dependent contact resolution along effector path segments.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::state::ObjectKind;

/// Contact-model constants. Everything the push response depends on lives
/// here so behavior stays tunable per experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactParams {
    /// Displacement of a clean push, meters.
    pub push_distance: f64,
    /// Displacement below this registers as no motion (perception threshold).
    pub moved_epsilon: f64,
    /// Cube heading noise, radians (sigma).
    pub cube_noise: f64,
    /// Cylinder: fraction of the radius around center that pushes cleanly.
    pub cylinder_capture: f64,
    /// Cylinder slip direction half-range around the heading, radians.
    pub cylinder_slip_half_angle: f64,
    /// Cylinder slip displacement range, meters.
    pub cylinder_slip_range: (f64, f64),
    /// Ball deflection per unit lateral offset, radians at full radius.
    pub ball_kappa: f64,
    /// Ball heading noise, radians (sigma).
    pub ball_noise: f64,
    /// Effector sweep speed for recorded demonstrations, m/s.
    pub effector_speed: f64,
}

impl Default for ContactParams {
    fn default() -> Self {
        ContactParams {
            push_distance: 0.08,
            moved_epsilon: 0.02,
            cube_noise: 3.0f64.to_radians(),
            cylinder_capture: 0.4,
            cylinder_slip_half_angle: 60.0f64.to_radians(),
            cylinder_slip_range: (0.01, 0.06),
            ball_kappa: 45.0f64.to_radians(),
            ball_noise: 8.0f64.to_radians(),
            effector_speed: 0.25,
        }
    }
}

/// First contact of the segment a->b against the object footprint.
///
/// Returns the unit displacement direction and its magnitude, or None when
/// the segment never enters the footprint. The signed lateral offset is
/// positive when the object center lies left of the heading.
pub fn resolve_contact(
    a: (f64, f64),
    b: (f64, f64),
    center: (f64, f64),
    radius: f64,
    kind: ObjectKind,
    params: &ContactParams,
    rng: &mut ChaCha8Rng,
) -> Option<((f64, f64), f64)> {
    let seg = (b.0 - a.0, b.1 - a.1);
    let len = (seg.0 * seg.0 + seg.1 * seg.1).sqrt();
    if len == 0.0 {
        return None;
    }
    let heading = (seg.0 / len, seg.1 / len);
    let to_center = (center.0 - a.0, center.1 - a.1);
    // Closest approach along the segment, clamped to its extent.
    let t = (to_center.0 * heading.0 + to_center.1 * heading.1).clamp(0.0, len);
    let closest = (a.0 + t * heading.0, a.1 + t * heading.1);
    let gap = ((center.0 - closest.0).powi(2) + (center.1 - closest.1).powi(2)).sqrt();
    if gap > radius {
        return None;
    }
    // Signed lateral offset via the 2D cross product.
    let offset = heading.0 * to_center.1 - heading.1 * to_center.0;

    let (angle_off, dist) = match kind {
        ObjectKind::Cube => (
            params.cube_noise * gauss(rng),
            params.push_distance,
        ),
        ObjectKind::Cylinder => {
            if offset.abs() <= params.cylinder_capture * radius {
                (params.cube_noise * gauss(rng), params.push_distance)
            } else {
                // Slip: scattered direction, unreliable displacement.
                let dir = rng.gen_range(
                    -params.cylinder_slip_half_angle..params.cylinder_slip_half_angle,
                );
                let (lo, hi) = params.cylinder_slip_range;
                (dir, rng.gen_range(lo..hi))
            }
        }
        ObjectKind::Ball => {
            // Deflection grows with lateral offset; displacement rolls off,
            // so grazing contacts barely register.
            let deflect = params.ball_kappa * (offset / radius).clamp(-1.0, 1.0)
                + params.ball_noise * gauss(rng);
            let dist = params.push_distance * (1.0 - (offset / radius).abs()).max(0.0);
            (deflect, dist)
        }
    };

    let cos = angle_off.cos();
    let sin = angle_off.sin();
    let dir = (
        heading.0 * cos - heading.1 * sin,
        heading.0 * sin + heading.1 * cos,
    );
    Some((dir, dist))
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller, one sample per call for a compact deterministic stream.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn angle_of(v: (f64, f64)) -> f64 {
        v.1.atan2(v.0)
    }

    #[test]
    fn cube_push_through_center_stays_near_heading() {
        // Heading +y through the object center; the cube is the low-noise
        // kind, so the mean deviation sits well inside +/- 5 degrees.
        let params = ContactParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut devs = Vec::new();
        for _ in 0..200 {
            let (dir, dist) = resolve_contact(
                (0.3, 0.1),
                (0.3, 0.5),
                (0.3, 0.3),
                0.03,
                ObjectKind::Cube,
                &params,
                &mut rng,
            )
            .unwrap();
            assert_eq!(dist, params.push_distance);
            devs.push((angle_of(dir) - std::f64::consts::FRAC_PI_2).abs());
        }
        let mean_dev = devs.iter().sum::<f64>() / devs.len() as f64;
        assert!(mean_dev < 5.0f64.to_radians(), "mean deviation {mean_dev}");
    }

    #[test]
    fn ball_offset_contact_deflects_hard() {
        // Path offset 0.8 radius from center: deflection at least 30 degrees
        // from the heading on average (36 degrees nominal plus noise).
        let params = ContactParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let offset = 0.8 * 0.03;
        let mut total = 0.0;
        let n = 200;
        for _ in 0..n {
            let (dir, _) = resolve_contact(
                (0.3 - offset, 0.1),
                (0.3 - offset, 0.5),
                (0.3, 0.3),
                0.03,
                ObjectKind::Ball,
                &params,
                &mut rng,
            )
            .unwrap();
            total += (angle_of(dir) - std::f64::consts::FRAC_PI_2).abs();
        }
        let mean = total / n as f64;
        assert!(
            mean >= 30.0f64.to_radians(),
            "mean deflection {} degrees",
            mean.to_degrees()
        );
    }

    #[test]
    fn miss_returns_none() {
        let params = ContactParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(resolve_contact(
            (0.0, 0.0),
            (0.0, 0.5),
            (0.3, 0.3),
            0.03,
            ObjectKind::Cube,
            &params,
            &mut rng,
        )
        .is_none());
    }
}
