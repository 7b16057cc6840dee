//! Gradient correctness against finite differences, loss-bound properties,
//! and convergence on a linear toy map.

use predictors::{bounded_loss, Predictor, PredictorKind, Sample};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_samples(kind: PredictorKind, n: usize, seed: u64) -> Vec<Sample> {
    let (n_in, _, n_out) = kind.layer_sizes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            Sample::new(
                (0..n_in).map(|_| rng.gen::<f64>()).collect(),
                (0..n_out).map(|_| rng.gen::<f64>()).collect(),
            )
        })
        .collect()
}

#[test]
fn analytic_gradient_matches_central_differences() {
    for (kind, seed) in [
        (PredictorKind::Forward, 41u64),
        (PredictorKind::Inverse, 42),
        (PredictorKind::Forward, 43),
    ] {
        let mut m = Predictor::new(kind, seed);
        let samples = random_samples(kind, 6, seed ^ 0xabcd);
        let analytic = m.gradient(&samples);
        let eps = 1e-6;
        for i in 0..m.param_count() {
            let p0 = m.get_param(i);
            m.set_param(i, p0 + eps);
            let plus = m.mse(&samples);
            m.set_param(i, p0 - eps);
            let minus = m.mse(&samples);
            m.set_param(i, p0);
            let numeric = (plus - minus) / (2.0 * eps);
            let denom = analytic[i].abs().max(numeric.abs()).max(1e-8);
            let rel = (analytic[i] - numeric).abs() / denom;
            assert!(
                rel < 1e-5,
                "{kind:?} param {i}: analytic {} vs numeric {} (rel {rel})",
                analytic[i],
                numeric
            );
        }
    }
}

#[test]
fn converges_on_linear_toy_map_within_50_calls() {
    // angle = 0.5 + 0.3 * command_x, other inputs are distractors.
    let mut m = Predictor::new(PredictorKind::Forward, 2024);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut last = 1.0;
    for _ in 0..50 {
        let input: Vec<f64> = (0..4).map(|_| rng.gen::<f64>()).collect();
        let target = vec![0.5 + 0.3 * input[2]];
        last = m.train_on_new(&[Sample::new(input, target)]).unwrap();
    }
    assert!(last < 0.05, "loss after 50 calls: {last}");
}

proptest! {
    // tanh bound: loss in [0,1) for arbitrary finite vectors.
    #[test]
    fn loss_is_bounded_below_one(
        pair in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 1..8)
    ) {
        let (p, t): (Vec<f64>, Vec<f64>) = pair.into_iter().unzip();
        let l = bounded_loss(&p, &t);
        prop_assert!((0.0..1.0).contains(&l), "loss {} out of [0,1)", l);
    }

    // FIFO order and capacity under random insert batch sizes.
    #[test]
    fn buffer_respects_capacity_under_random_batches(
        batches in prop::collection::vec(1usize..4, 1..30)
    ) {
        let mut m = Predictor::new(PredictorKind::Inverse, 5);
        let mut inserted = Vec::new();
        let mut counter = 0.0;
        for b in batches {
            let batch: Vec<Sample> = (0..b)
                .map(|_| {
                    counter += 1.0;
                    let v = counter / 1000.0;
                    inserted.push(v);
                    Sample::new(vec![v, v, v], vec![v, v])
                })
                .collect();
            m.train_on_new(&batch).unwrap();
            prop_assert!(m.buffer_len() <= 20);
        }
        // Buffer holds exactly the most recent min(20, total) inserts, in order.
        let expect: Vec<f64> = inserted
            .iter()
            .rev()
            .take(20)
            .rev()
            .cloned()
            .collect();
        let got: Vec<f64> = m.buffer().map(|s| s.input[0]).collect();
        prop_assert_eq!(expect, got);
    }
}
