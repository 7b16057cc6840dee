//! Gated memory traces and the two-input slow boost.

use crate::error::FieldError;
use crate::grid::{Grid, Shape};

/// Gate signal for a memory trace: a scalar node output, or a per-cell grid
/// when updates must stay localized to a region of the trace.
#[derive(Debug, Clone, Copy)]
pub enum Gate<'a> {
    Scalar(f64),
    PerCell(&'a Grid),
}

/// Leaky accumulator over a source field's output with separate build and
/// decay time constants:
///
/// v' = a(t) * [ (1/tau+)(-v + f) f + (1/tau-)(-v)(1 - f) ]
///
/// With f and v(0) in [0,1] and dt below min(tau+, tau-), v stays in [0,1].
#[derive(Debug, Clone)]
pub struct MemoryTrace {
    v: Grid,
    tau_plus: f64,
    tau_minus: f64,
}

impl MemoryTrace {
    pub fn new(shape: Shape, tau_plus: f64, tau_minus: f64) -> Self {
        assert!(tau_plus > 0.0 && tau_minus > 0.0, "time constants must be positive");
        MemoryTrace {
            v: Grid::zeros(shape),
            tau_plus,
            tau_minus,
        }
    }

    pub fn values(&self) -> &Grid {
        &self.v
    }

    pub fn values_mut(&mut self) -> &mut Grid {
        &mut self.v
    }

    pub fn tau_plus(&self) -> f64 {
        self.tau_plus
    }

    pub fn tau_minus(&self) -> f64 {
        self.tau_minus
    }

    pub fn set_taus(&mut self, tau_plus: f64, tau_minus: f64) {
        assert!(tau_plus > 0.0 && tau_minus > 0.0);
        self.tau_plus = tau_plus;
        self.tau_minus = tau_minus;
    }

    pub fn reset(&mut self) {
        self.v.fill(0.0);
    }

    /// One Euler step driven by the source output grid under the gate.
    pub fn step(&mut self, source_output: &Grid, gate: Gate, dt: f64) -> Result<(), FieldError> {
        if source_output.shape() != self.v.shape() {
            return Err(FieldError::ShapeMismatch {
                expected: self.v.shape(),
                got: source_output.shape(),
            });
        }
        if let Gate::PerCell(g) = gate {
            if g.shape() != self.v.shape() {
                return Err(FieldError::ShapeMismatch {
                    expected: self.v.shape(),
                    got: g.shape(),
                });
            }
        }
        if dt <= 0.0 || dt >= self.tau_plus.min(self.tau_minus) {
            return Err(FieldError::IntegrationStability {
                dt,
                tau: self.tau_plus.min(self.tau_minus),
            });
        }
        for i in 0..self.v.len() {
            let a = match gate {
                Gate::Scalar(a) => a,
                Gate::PerCell(g) => g.at(i),
            };
            if a == 0.0 {
                continue;
            }
            let f = source_output.at(i);
            let v = self.v.at(i);
            let dv = a * ((1.0 / self.tau_plus) * (f - v) * f
                + (1.0 / self.tau_minus) * (-v) * (1.0 - f));
            self.v.set(i, v + dt * dv);
        }
        Ok(())
    }
}

/// Two-input memory trace used to ramp resting levels:
///
/// v' = act * (1/tau+)(-v + act) * act + thr * (1/tau-)(-v)(1 - act)
///
/// Builds toward the active output, holds when both inputs are silent,
/// decays while only the threshold input is up.
#[derive(Debug, Clone)]
pub struct SlowBoost {
    v: f64,
    tau_plus: f64,
    tau_minus: f64,
}

impl SlowBoost {
    pub fn new(tau_plus: f64, tau_minus: f64) -> Self {
        assert!(tau_plus > 0.0 && tau_minus > 0.0);
        SlowBoost {
            v: 0.0,
            tau_plus,
            tau_minus,
        }
    }

    pub fn value(&self) -> f64 {
        self.v
    }

    pub fn reset(&mut self) {
        self.v = 0.0;
    }

    /// One Euler step from the active and threshold node outputs (both in [0,1]).
    pub fn step(&mut self, active_out: f64, threshold_out: f64, dt: f64) -> Result<(), FieldError> {
        if !(0.0..=1.0).contains(&active_out) || !(0.0..=1.0).contains(&threshold_out) {
            return Err(FieldError::Configuration(format!(
                "slow boost inputs must lie in [0,1]: active={active_out}, threshold={threshold_out}"
            )));
        }
        if dt <= 0.0 || dt >= self.tau_plus.min(self.tau_minus) {
            return Err(FieldError::IntegrationStability {
                dt,
                tau: self.tau_plus.min(self.tau_minus),
            });
        }
        let build = active_out * (1.0 / self.tau_plus) * (active_out - self.v) * active_out;
        let decay = threshold_out * (1.0 / self.tau_minus) * (-self.v) * (1.0 - active_out);
        self.v += dt * (build + decay);
        Ok(())
    }
}
