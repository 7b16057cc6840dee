//! Timestamped multi-dimensional position records.

use crate::error::MotionError;

/// A recorded movement: strictly increasing timestamps (seconds) and one
/// position track per dimension (meters).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    coords: Vec<Vec<f64>>,
}

impl Trajectory {
    /// `coords[d][i]` is the position along dimension `d` at `times[i]`.
    pub fn new(times: Vec<f64>, coords: Vec<Vec<f64>>) -> Result<Self, MotionError> {
        if times.len() < 2 {
            return Err(MotionError::DegenerateDemo(format!(
                "need at least 2 samples, got {}",
                times.len()
            )));
        }
        if coords.is_empty() {
            return Err(MotionError::DegenerateDemo("no dimensions".into()));
        }
        for track in &coords {
            if track.len() != times.len() {
                return Err(MotionError::DegenerateDemo(
                    "track length does not match timestamps".into(),
                ));
            }
        }
        for w in times.windows(2) {
            if w[1] <= w[0] {
                return Err(MotionError::DegenerateDemo(
                    "timestamps must be strictly increasing".into(),
                ));
            }
        }
        Ok(Trajectory { times, coords })
    }

    pub fn dims(&self) -> usize {
        self.coords.len()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn track(&self, dim: usize) -> &[f64] {
        &self.coords[dim]
    }

    pub fn duration(&self) -> f64 {
        self.times[self.times.len() - 1] - self.times[0]
    }

    pub fn start(&self) -> Vec<f64> {
        self.coords.iter().map(|t| t[0]).collect()
    }

    pub fn end(&self) -> Vec<f64> {
        self.coords.iter().map(|t| t[t.len() - 1]).collect()
    }

    /// Position at time `t` by linear interpolation, clamped to the ends.
    pub fn sample(&self, t: f64) -> Vec<f64> {
        if t <= self.times[0] {
            return self.start();
        }
        if t >= self.times[self.times.len() - 1] {
            return self.end();
        }
        let i = match self.times.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => return self.coords.iter().map(|tr| tr[i]).collect(),
            Err(i) => i,
        };
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let w = (t - t0) / (t1 - t0);
        self.coords
            .iter()
            .map(|tr| tr[i - 1] + w * (tr[i] - tr[i - 1]))
            .collect()
    }

    /// One sample per line: `t x y [z ...]`, whitespace separated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.times.len() {
            out.push_str(&format!("{:.9}", self.times[i]));
            for track in &self.coords {
                out.push_str(&format!(" {:.9}", track[i]));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, MotionError> {
        let mut times = Vec::new();
        let mut coords: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let vals: Vec<f64> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>().map_err(|_| {
                        MotionError::Parse(format!("line {}: bad number '{}'", lineno + 1, t))
                    })
                })
                .collect::<Result<_, _>>()?;
            if vals.len() < 2 {
                return Err(MotionError::Parse(format!(
                    "line {}: need time plus at least one coordinate",
                    lineno + 1
                )));
            }
            if coords.is_empty() {
                coords = vec![Vec::new(); vals.len() - 1];
            } else if vals.len() - 1 != coords.len() {
                return Err(MotionError::Parse(format!(
                    "line {}: inconsistent dimension count",
                    lineno + 1
                )));
            }
            times.push(vals[0]);
            for (d, v) in vals[1..].iter().enumerate() {
                coords[d].push(*v);
            }
        }
        Trajectory::new(times, coords)
    }
}
