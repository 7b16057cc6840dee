//! Activation fields integrated with explicit Euler.

use crate::error::FieldError;
use crate::grid::{Grid, Shape};
use crate::kernel::InteractionKernel;
use crate::noise::GaussStream;
use crate::transfer::Transfer;
use crate::FEATURE_EXTENT;

/// An activation lattice u(x,t) with resting level, time constant, transfer
/// function and optional lateral-interaction kernel.
///
/// `step` advances u by one Euler step:
/// u += (dt/tau) * (-u + h + input + lateral + noise).
#[derive(Debug, Clone)]
pub struct FieldGrid {
    name: String,
    u: Grid,
    h: f64,
    tau: f64,
    noise_amp: f64,
    transfer: Transfer,
    kernel: Option<InteractionKernel>,
    noise: GaussStream,
    output_cache: Option<Grid>,
}

impl FieldGrid {
    /// Zero-dimensional node.
    pub fn node(name: &str, h: f64, tau: f64, transfer: Transfer) -> Self {
        Self::with_shape(name, Shape::Scalar, h, tau, transfer)
    }

    /// One-dimensional field over the 100-sample feature axis.
    pub fn line(name: &str, h: f64, tau: f64, transfer: Transfer) -> Self {
        Self::with_shape(name, Shape::Line(FEATURE_EXTENT), h, tau, transfer)
    }

    /// Two-dimensional field over the 100x100 feature plane.
    pub fn plane(name: &str, h: f64, tau: f64, transfer: Transfer) -> Self {
        Self::with_shape(
            name,
            Shape::Plane(FEATURE_EXTENT, FEATURE_EXTENT),
            h,
            tau,
            transfer,
        )
    }

    fn with_shape(name: &str, shape: Shape, h: f64, tau: f64, transfer: Transfer) -> Self {
        assert!(tau > 0.0, "tau must be positive");
        FieldGrid {
            name: name.to_string(),
            u: Grid::filled(shape, h),
            h,
            tau,
            noise_amp: 0.0,
            transfer,
            kernel: None,
            noise: GaussStream::from_seed(0),
            output_cache: None,
        }
    }

    pub fn with_kernel(mut self, kernel: InteractionKernel) -> Self {
        self.kernel = Some(kernel);
        self
    }

    pub fn with_noise(mut self, amp: f64, seed: u64) -> Self {
        self.noise_amp = amp;
        self.noise = GaussStream::from_seed(seed);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn shape(&self) -> Shape {
        self.u.shape()
    }

    pub fn resting_level(&self) -> f64 {
        self.h
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn transfer(&self) -> Transfer {
        self.transfer
    }

    pub fn kernel(&self) -> Option<&InteractionKernel> {
        self.kernel.as_ref()
    }

    /// Raw activation values.
    pub fn activation(&self) -> &Grid {
        &self.u
    }

    pub fn activation_mut(&mut self) -> &mut Grid {
        self.output_cache = None;
        &mut self.u
    }

    /// Resets activation to the resting level.
    pub fn reset(&mut self) {
        self.output_cache = None;
        self.u.fill(self.h);
    }

    /// Transfer function applied to the whole activation grid.
    pub fn output(&self) -> Grid {
        self.transfer.apply_grid(&self.u)
    }

    /// Output grid memoized until the next state change; the hot path for
    /// callers that read the same output several times per step.
    pub fn output_shared(&mut self) -> &Grid {
        if self.output_cache.is_none() {
            self.output_cache = Some(self.transfer.apply_grid(&self.u));
        }
        self.output_cache.as_ref().unwrap()
    }

    /// Transfer output of a 0-D node.
    pub fn output_value(&self) -> f64 {
        self.transfer.apply(self.u.value())
    }

    /// Largest transfer output over the grid.
    pub fn output_max(&self) -> f64 {
        self.transfer.apply(self.u.max())
    }

    /// True when some sample crosses the supra-threshold output level 0.5.
    pub fn is_active(&self) -> bool {
        self.output_max() > 0.5
    }

    /// Convolution of the output with the kernel plus global inhibition.
    pub fn lateral_interaction(&self) -> Result<Grid, FieldError> {
        let kernel = self.kernel.as_ref().ok_or_else(|| {
            FieldError::Configuration(format!("field '{}' has no kernel", self.name))
        })?;
        let f = self.output();
        let mut lateral = kernel.convolve(&f);
        if kernel.g_global != 0.0 {
            lateral.add_uniform(kernel.g_global * f.sum());
        }
        Ok(lateral)
    }

    /// One Euler step with the given external input grid.
    pub fn step(&mut self, external_input: &Grid, dt: f64) -> Result<(), FieldError> {
        if external_input.shape() != self.u.shape() {
            return Err(FieldError::ShapeMismatch {
                expected: self.u.shape(),
                got: external_input.shape(),
            });
        }
        if dt <= 0.0 || dt >= self.tau {
            return Err(FieldError::IntegrationStability { dt, tau: self.tau });
        }
        let lateral = if self.kernel.is_some() {
            if self.output_cache.is_none() {
                self.output_cache = Some(self.transfer.apply_grid(&self.u));
            }
            let f = self.output_cache.as_ref().unwrap();
            let kernel = self.kernel.as_ref().unwrap();
            let mut l = kernel.convolve(f);
            if kernel.g_global != 0.0 {
                l.add_uniform(kernel.g_global * f.sum());
            }
            Some(l)
        } else {
            None
        };
        let rate = dt / self.tau;
        let h = self.h;
        if self.noise_amp > 0.0 {
            let mut xi = Grid::zeros(self.u.shape());
            self.noise.add_to(&mut xi, self.noise_amp);
            for i in 0..self.u.len() {
                let du = -self.u.at(i)
                    + h
                    + external_input.at(i)
                    + lateral.as_ref().map_or(0.0, |l| l.at(i))
                    + xi.at(i);
                self.u.set(i, self.u.at(i) + rate * du);
            }
        } else {
            for i in 0..self.u.len() {
                let du = -self.u.at(i)
                    + h
                    + external_input.at(i)
                    + lateral.as_ref().map_or(0.0, |l| l.at(i));
                self.u.set(i, self.u.at(i) + rate * du);
            }
        }
        self.output_cache = None;
        Ok(())
    }

    /// Euler step for a 0-D node with scalar input.
    pub fn step_scalar(&mut self, input: f64, dt: f64) -> Result<(), FieldError> {
        self.step(&Grid::scalar(input), dt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DT_MS;

    #[test]
    fn resting_equilibrium_is_fixed_point() {
        // u == h, no input, no kernel: u stays exactly at h.
        let mut f = FieldGrid::line("f", -2.0, 100.0, Transfer::Sigmoid { beta: 4.0 });
        let zero = Grid::zeros(f.shape());
        for _ in 0..100 {
            f.step(&zero, DT_MS).unwrap();
        }
        assert!(f.activation().as_slice().iter().all(|&u| u == -2.0));
    }

    #[test]
    fn relaxation_tracks_closed_form() {
        // u(0)=0, h=-1, no input: u(t) = -1 + e^(-t/tau).
        let tau = 200.0;
        let mut f = FieldGrid::node("n", -1.0, tau, Transfer::Sigmoid { beta: 4.0 });
        f.activation_mut().set(0, 0.0);
        let zero = Grid::zeros(Shape::Scalar);
        let t_end = 5.0 * tau;
        let steps = (t_end / DT_MS) as usize;
        for _ in 0..steps {
            f.step(&zero, DT_MS).unwrap();
        }
        let expected = -1.0 + (-t_end / tau).exp();
        assert!(
            (f.activation().value() - expected).abs() < 1e-3,
            "euler {} vs closed form {}",
            f.activation().value(),
            expected
        );
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let mut f = FieldGrid::line("f", -2.0, 100.0, Transfer::Relu);
        let bad = Grid::zeros(Shape::Scalar);
        assert!(matches!(
            f.step(&bad, DT_MS),
            Err(FieldError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn unstable_dt_is_rejected() {
        let mut f = FieldGrid::node("n", -2.0, 10.0, Transfer::Relu);
        assert!(matches!(
            f.step_scalar(0.0, 10.0),
            Err(FieldError::IntegrationStability { .. })
        ));
    }

    #[test]
    fn lateral_interaction_requires_kernel() {
        let f = FieldGrid::line("f", -2.0, 100.0, Transfer::Relu);
        assert!(f.lateral_interaction().is_err());
    }

    #[test]
    fn noisy_fields_are_seed_deterministic() {
        let mk = || {
            FieldGrid::plane("p", -2.0, 100.0, Transfer::Sigmoid { beta: 4.0 }).with_noise(0.05, 99)
        };
        let mut a = mk();
        let mut b = mk();
        let zero = Grid::zeros(a.shape());
        for _ in 0..20 {
            a.step(&zero, DT_MS).unwrap();
            b.step(&zero, DT_MS).unwrap();
        }
        for i in 0..a.activation().len() {
            assert_eq!(a.activation().at(i).to_bits(), b.activation().at(i).to_bits());
        }
    }
}
