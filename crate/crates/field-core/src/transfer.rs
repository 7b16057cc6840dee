//! Output nonlinearities applied to field activation.

use crate::grid::Grid;

/// Transfer function turning activation into output.
///
/// `Sigmoid` and `AbsoluteSigmoid` map into [0,1] with threshold at zero;
/// `Relu` passes positive activation through unchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transfer {
    Sigmoid { beta: f64 },
    AbsoluteSigmoid { beta: f64 },
    Relu,
}

impl Transfer {
    pub fn apply(&self, u: f64) -> f64 {
        match *self {
            Transfer::Sigmoid { beta } => {
                // Saturated tails (|beta u| > 30, residual < 1e-13) round to
                // the asymptote; steep fields at rest skip the exp entirely.
                let z = beta * u;
                if z <= -30.0 {
                    0.0
                } else if z >= 30.0 {
                    1.0
                } else {
                    1.0 / (1.0 + (-z).exp())
                }
            }
            Transfer::AbsoluteSigmoid { beta } => {
                (0.5 * (1.0 + beta * u / (1.0 + beta * u.abs()))).clamp(0.0, 1.0)
            }
            Transfer::Relu => u.max(0.0),
        }
    }

    pub fn apply_grid(&self, u: &Grid) -> Grid {
        let mut out = u.clone();
        out.map_inplace(|x| self.apply(x));
        out
    }
}
