//! Fit-and-reproduce checks against synthetic demonstrations.

use motion::{DmpSkill, Trajectory};

/// Minimum-jerk profile from x0 to g over duration T, n samples.
fn min_jerk_demo(x0: &[f64], g: &[f64], duration: f64, n: usize) -> Trajectory {
    let times: Vec<f64> = (0..n).map(|i| duration * i as f64 / (n - 1) as f64).collect();
    let coords: Vec<Vec<f64>> = x0
        .iter()
        .zip(g)
        .map(|(&a, &b)| {
            times
                .iter()
                .map(|&t| {
                    let u = t / duration;
                    let blend = 10.0 * u.powi(3) - 15.0 * u.powi(4) + 6.0 * u.powi(5);
                    a + (b - a) * blend
                })
                .collect()
        })
        .collect();
    Trajectory::new(times, coords).unwrap()
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    if va == 0.0 || vb == 0.0 {
        return if va == vb { 1.0 } else { 0.0 };
    }
    cov / (va * vb).sqrt()
}

/// Resamples one dimension over the window [0, span] on an n-point grid.
fn resampled_tracks(t: &Trajectory, dim: usize, span: f64, n: usize) -> Vec<f64> {
    let t0 = t.times()[0];
    (0..n)
        .map(|i| t.sample(t0 + span * i as f64 / (n - 1) as f64)[dim])
        .collect()
}

#[test]
fn straight_line_demo_reproduces_endpoint() {
    // Constant-velocity line, ~40 samples as recorded at 20 Hz.
    let times: Vec<f64> = (0..40).map(|i| i as f64 * 0.05).collect();
    let track: Vec<f64> = times.iter().map(|t| 0.1 + 0.05 * t).collect();
    let demo = Trajectory::new(times, vec![track]).unwrap();
    let skill = DmpSkill::learn_from_demo(&demo, 15).unwrap();
    let tau = 2.0 * skill.tau_demo();
    let roll = skill
        .rollout(&demo.start(), &demo.end(), tau, tau / 2000.0)
        .unwrap();
    let end = roll.end();
    assert!(
        (end[0] - demo.end()[0]).abs() < 1e-3,
        "endpoint {} vs demo {}",
        end[0],
        demo.end()[0]
    );
}

#[test]
fn min_jerk_reproduction_correlates_and_converges() {
    let demo = min_jerk_demo(&[0.1, 0.2], &[0.4, -0.1], 2.0, 40);
    let skill = DmpSkill::learn_from_demo(&demo, 20).unwrap();
    let tau = 2.0 * skill.tau_demo();
    let roll = skill
        .rollout(&demo.start(), &demo.end(), tau, tau / 2000.0)
        .unwrap();

    for d in 0..2 {
        // The replay runs at tau = 2 * tau_demo: compare the demo against
        // the rollout's nominal motion window [0, tau].
        let a = resampled_tracks(&demo, d, demo.duration(), 200);
        let b = resampled_tracks(&roll, d, tau, 200);
        let r = pearson(&a, &b);
        assert!(r >= 0.99, "dim {d}: correlation {r}");
    }
    let end = roll.end();
    for d in 0..2 {
        assert!((end[d] - demo.end()[d]).abs() < 1e-3, "dim {d} endpoint");
    }
}

#[test]
fn goal_substitution_converges_to_new_goal() {
    let demo = min_jerk_demo(&[0.0, 0.0], &[0.3, 0.1], 2.0, 40);
    let skill = DmpSkill::learn_from_demo(&demo, 20).unwrap();
    let new_goal = [0.35, 0.15]; // shifted +0.05 m
    let tau = 2.0 * skill.tau_demo();
    let roll = skill
        .rollout(&demo.start(), &new_goal, tau, tau / 2000.0)
        .unwrap();
    let end = roll.end();
    for d in 0..2 {
        assert!(
            (end[d] - new_goal[d]).abs() < 1e-3,
            "dim {d}: {} vs {}",
            end[d],
            new_goal[d]
        );
    }
}

#[test]
fn start_equals_goal_demo_stays_in_envelope() {
    // Out-and-back bump: x(0) = x(T), so g - x0 degenerates to zero.
    let times: Vec<f64> = (0..50).map(|i| i as f64 * 0.04).collect();
    let dur = times[times.len() - 1];
    let track: Vec<f64> = times
        .iter()
        .map(|&t| 0.2 + 0.1 * (std::f64::consts::PI * t / dur).sin().powi(2))
        .collect();
    let lo = track.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = track.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let demo = Trajectory::new(times, vec![track]).unwrap();

    let skill = DmpSkill::learn_from_demo(&demo, 20).unwrap();
    let tau = 2.0 * skill.tau_demo();
    let roll = skill
        .rollout(&demo.start(), &demo.end(), tau, tau / 2000.0)
        .unwrap();

    let margin = 0.1 * (hi - lo);
    for &x in roll.track(0) {
        assert!(
            x >= lo - margin && x <= hi + margin,
            "rollout {x} escaped demo envelope [{lo}, {hi}] +/- {margin}"
        );
    }
    // The skill actually moves: it should revisit the bump, not sit still.
    let peak = roll.track(0).iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(peak > lo + 0.5 * (hi - lo), "rollout never rose, peak {peak}");
}

#[test]
fn doubling_tau_doubles_duration_without_changing_the_path() {
    let demo = min_jerk_demo(&[0.0], &[0.5], 2.0, 40);
    let skill = DmpSkill::learn_from_demo(&demo, 20).unwrap();
    let t1 = skill.tau_demo();
    let a = skill.rollout(&demo.start(), &demo.end(), t1, t1 / 4000.0).unwrap();
    let b = skill
        .rollout(&demo.start(), &demo.end(), 2.0 * t1, t1 / 2000.0)
        .unwrap();
    let ratio = b.duration() / a.duration();
    assert!((ratio - 2.0).abs() < 0.05, "duration ratio {ratio}");
    // Same normalized step on both rollouts: the paths in normalized time
    // must coincide to integrator precision.
    let pa = resampled_tracks(&a, 0, t1, 400);
    let pb = resampled_tracks(&b, 0, 2.0 * t1, 400);
    for (x, y) in pa.iter().zip(&pb) {
        assert!((x - y).abs() < 1e-6, "spatial path changed: {x} vs {y}");
    }
}
