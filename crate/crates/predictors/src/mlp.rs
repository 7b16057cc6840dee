use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Replay buffer length shared by both model kinds.
pub const BUFFER_CAPACITY: usize = 20;

const DEFAULT_LEARNING_RATE: f64 = 0.05;
const INIT_SPAN: f64 = 0.5;

#[derive(Debug, Error)]
pub enum PredictorError {
    #[error("input dimension mismatch: expected {expected}, got {got}")]
    InputDim { expected: usize, got: usize },

    #[error("target dimension mismatch: expected {expected}, got {got}")]
    TargetDim { expected: usize, got: usize },

    #[error("no samples provided")]
    NoSamples,
}

/// Which mapping the model learns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictorKind {
    /// (object x, object y, command x, command y) -> goal angle feature.
    Forward,
    /// (object x, object y, goal angle feature) -> (command x, command y).
    Inverse,
}

impl PredictorKind {
    /// (input, hidden, output) sizes.
    pub fn layer_sizes(&self) -> (usize, usize, usize) {
        match self {
            PredictorKind::Forward => (4, 6, 1),
            PredictorKind::Inverse => (3, 4, 2),
        }
    }
}

/// One training pair; all components normalized to [0,1].
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub input: Vec<f64>,
    pub target: Vec<f64>,
}

impl Sample {
    pub fn new(input: Vec<f64>, target: Vec<f64>) -> Self {
        Sample { input, target }
    }
}

/// tanh-bounded error between a prediction and a target: tanh(MSE), in [0,1).
///
/// tanh rounds to 1.0 in f64 for arguments beyond ~19, so the result is
/// clamped to the largest representable value below one.
pub fn bounded_loss(prediction: &[f64], target: &[f64]) -> f64 {
    debug_assert_eq!(prediction.len(), target.len());
    let n = prediction.len() as f64;
    let mse = prediction
        .iter()
        .zip(target)
        .map(|(p, t)| (p - t) * (p - t))
        .sum::<f64>()
        / n;
    mse.tanh().min(1.0 - f64::EPSILON)
}

/// A two-layer perceptron (tanh hidden, sigmoid output) with a FIFO replay
/// buffer. Two models built from the same seed carry identical weights.
#[derive(Debug, Clone)]
pub struct Predictor {
    kind: PredictorKind,
    w1: Vec<f64>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: Vec<f64>,
    buffer: VecDeque<Sample>,
    learning_rate: f64,
}

impl Predictor {
    pub fn new(kind: PredictorKind, seed: u64) -> Self {
        Self::with_init_span(kind, seed, INIT_SPAN)
    }

    /// The init span sets how far first predictions scatter from 0.5, and
    /// with them the first error of a fresh model.
    pub fn with_init_span(kind: PredictorKind, seed: u64, span: f64) -> Self {
        assert!(span > 0.0);
        let (n_in, n_hid, n_out) = kind.layer_sizes();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |n: usize| -> Vec<f64> {
            (0..n).map(|_| rng.gen_range(-span..span)).collect()
        };
        Predictor {
            kind,
            w1: draw(n_hid * n_in),
            b1: draw(n_hid),
            w2: draw(n_out * n_hid),
            b2: draw(n_out),
            buffer: VecDeque::with_capacity(BUFFER_CAPACITY),
            learning_rate: DEFAULT_LEARNING_RATE,
        }
    }

    pub fn kind(&self) -> PredictorKind {
        self.kind
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    pub fn set_learning_rate(&mut self, lr: f64) {
        assert!(lr > 0.0);
        self.learning_rate = lr;
    }

    pub fn buffer_len(&self) -> usize {
        self.buffer.len()
    }

    pub fn buffer(&self) -> impl Iterator<Item = &Sample> {
        self.buffer.iter()
    }

    fn check_input(&self, input: &[f64]) -> Result<(), PredictorError> {
        let expected = self.kind.layer_sizes().0;
        if input.len() != expected {
            return Err(PredictorError::InputDim {
                expected,
                got: input.len(),
            });
        }
        Ok(())
    }

    fn check_sample(&self, s: &Sample) -> Result<(), PredictorError> {
        self.check_input(&s.input)?;
        let expected = self.kind.layer_sizes().2;
        if s.target.len() != expected {
            return Err(PredictorError::TargetDim {
                expected,
                got: s.target.len(),
            });
        }
        Ok(())
    }

    /// Deterministic feed-forward pass; outputs lie in (0,1).
    pub fn predict(&self, input: &[f64]) -> Result<Vec<f64>, PredictorError> {
        self.check_input(input)?;
        let (hidden, output) = self.forward(input);
        let _ = hidden;
        Ok(output)
    }

    fn forward(&self, input: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let (n_in, n_hid, n_out) = self.kind.layer_sizes();
        let mut hidden = vec![0.0; n_hid];
        for h in 0..n_hid {
            let mut z = self.b1[h];
            for i in 0..n_in {
                z += self.w1[h * n_in + i] * input[i];
            }
            hidden[h] = z.tanh();
        }
        let mut output = vec![0.0; n_out];
        for o in 0..n_out {
            let mut z = self.b2[o];
            for h in 0..n_hid {
                z += self.w2[o * n_hid + h] * hidden[h];
            }
            output[o] = 1.0 / (1.0 + (-z).exp());
        }
        (hidden, output)
    }

    /// Mean squared error over a batch (mean over output dims and samples).
    pub fn mse(&self, samples: &[Sample]) -> f64 {
        let mut acc = 0.0;
        for s in samples {
            let (_, y) = self.forward(&s.input);
            let n = y.len() as f64;
            acc += y
                .iter()
                .zip(&s.target)
                .map(|(p, t)| (p - t) * (p - t))
                .sum::<f64>()
                / n;
        }
        acc / samples.len() as f64
    }

    /// Analytic gradient of `mse` with respect to the flattened parameters.
    pub fn gradient(&self, samples: &[Sample]) -> Vec<f64> {
        let (n_in, n_hid, n_out) = self.kind.layer_sizes();
        let mut grad = vec![0.0; self.param_count()];
        let (g_w1, rest) = grad.split_at_mut(n_hid * n_in);
        let (g_b1, rest) = rest.split_at_mut(n_hid);
        let (g_w2, g_b2) = rest.split_at_mut(n_out * n_hid);

        let batch = samples.len() as f64;
        for s in samples {
            let (hidden, output) = self.forward(&s.input);
            // dL/dz2 through the sigmoid; MSE is averaged over output dims.
            let mut delta2 = vec![0.0; n_out];
            for o in 0..n_out {
                let y = output[o];
                let dl_dy = 2.0 * (y - s.target[o]) / n_out as f64;
                delta2[o] = dl_dy * y * (1.0 - y);
            }
            let mut delta1 = vec![0.0; n_hid];
            for h in 0..n_hid {
                let mut acc = 0.0;
                for o in 0..n_out {
                    acc += self.w2[o * n_hid + h] * delta2[o];
                }
                delta1[h] = acc * (1.0 - hidden[h] * hidden[h]);
            }
            for o in 0..n_out {
                g_b2[o] += delta2[o] / batch;
                for h in 0..n_hid {
                    g_w2[o * n_hid + h] += delta2[o] * hidden[h] / batch;
                }
            }
            for h in 0..n_hid {
                g_b1[h] += delta1[h] / batch;
                for i in 0..n_in {
                    g_w1[h * n_in + i] += delta1[h] * s.input[i] / batch;
                }
            }
        }
        grad
    }

    pub fn param_count(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + self.b2.len()
    }

    pub fn get_param(&self, idx: usize) -> f64 {
        let mut i = idx;
        for part in [&self.w1, &self.b1, &self.w2, &self.b2] {
            if i < part.len() {
                return part[i];
            }
            i -= part.len();
        }
        panic!("parameter index {idx} out of range");
    }

    pub fn set_param(&mut self, idx: usize, value: f64) {
        let mut i = idx;
        for part in [&mut self.w1, &mut self.b1, &mut self.w2, &mut self.b2] {
            if i < part.len() {
                part[i] = value;
                return;
            }
            i -= part.len();
        }
        panic!("parameter index {idx} out of range");
    }

    fn descend(&mut self, grad: &[f64]) {
        let lr = self.learning_rate;
        let mut i = 0;
        for part in [&mut self.w1, &mut self.b1, &mut self.w2, &mut self.b2] {
            for p in part.iter_mut() {
                *p -= lr * grad[i];
                i += 1;
            }
        }
    }

    /// One gradient step on the new samples, FIFO insertion into the buffer,
    /// then one epoch over the whole buffer. Returns the tanh-bounded loss on
    /// the new samples after training.
    pub fn train_on_new(&mut self, new_samples: &[Sample]) -> Result<f64, PredictorError> {
        if new_samples.is_empty() {
            return Err(PredictorError::NoSamples);
        }
        for s in new_samples {
            self.check_sample(s)?;
        }
        let grad = self.gradient(new_samples);
        self.descend(&grad);

        for s in new_samples {
            if self.buffer.len() == BUFFER_CAPACITY {
                self.buffer.pop_front();
            }
            self.buffer.push_back(s.clone());
        }

        // One epoch: a gradient step per buffered sample, oldest first.
        for i in 0..self.buffer.len() {
            let s = self.buffer[i].clone();
            let grad = self.gradient(std::slice::from_ref(&s));
            self.descend(&grad);
        }

        Ok(self.loss_on(new_samples))
    }

    /// tanh-bounded loss over a batch with current weights.
    pub fn loss_on(&self, samples: &[Sample]) -> f64 {
        self.mse(samples).tanh().min(1.0 - f64::EPSILON)
    }

    /// Flat text snapshot of kind, learning rate and parameters.
    pub fn to_text(&self) -> String {
        let kind = match self.kind {
            PredictorKind::Forward => "forward",
            PredictorKind::Inverse => "inverse",
        };
        let mut out = format!("{kind} {:.17e}\n", self.learning_rate);
        for i in 0..self.param_count() {
            out.push_str(&format!("{:.17e}\n", self.get_param(i)));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or("empty snapshot")?;
        let mut parts = header.split_whitespace();
        let kind = match parts.next() {
            Some("forward") => PredictorKind::Forward,
            Some("inverse") => PredictorKind::Inverse,
            other => return Err(format!("bad kind {other:?}")),
        };
        let lr: f64 = parts
            .next()
            .ok_or("missing learning rate")?
            .parse()
            .map_err(|e| format!("bad learning rate: {e}"))?;
        let mut model = Predictor::new(kind, 0);
        model.learning_rate = lr;
        for i in 0..model.param_count() {
            let line = lines.next().ok_or_else(|| format!("missing parameter {i}"))?;
            let v: f64 = line.trim().parse().map_err(|e| format!("bad parameter {i}: {e}"))?;
            model.set_param(i, v);
        }
        Ok(model)
    }
}
