//! Difference-of-Gaussians interaction kernels and their convolution.

use crate::grid::{Grid, Shape};

const NEGLIGIBLE_SOURCE: f64 = 1e-4;

/// Lateral-interaction kernel: a narrow excitatory Gaussian minus a wider
/// inhibitory Gaussian, plus a global (space-independent) inhibition term.
///
/// `c_inh` is stored as a positive magnitude and applied with the minus sign
/// of the difference-of-Gaussians form. Components are truncated at
/// `cutoff_sigmas` standard deviations; outside the grid the output is
/// treated as zero (no wraparound).
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionKernel {
    pub c_exc: f64,
    pub sigma_exc: f64,
    pub c_inh: f64,
    pub sigma_inh: f64,
    pub g_global: f64,
    pub cutoff_sigmas: f64,
}

impl InteractionKernel {
    pub fn new(c_exc: f64, sigma_exc: f64, c_inh: f64, sigma_inh: f64, g_global: f64) -> Self {
        assert!(sigma_exc > 0.0 && sigma_inh > 0.0, "kernel widths must be positive");
        assert!(c_inh >= 0.0, "c_inh is a magnitude");
        InteractionKernel {
            c_exc,
            sigma_exc,
            c_inh,
            sigma_inh,
            g_global,
            cutoff_sigmas: 4.0,
        }
    }

    /// Purely excitatory kernel with global inhibition only.
    pub fn excitatory(c_exc: f64, sigma_exc: f64, g_global: f64) -> Self {
        InteractionKernel::new(c_exc, sigma_exc, 0.0, sigma_exc, g_global)
    }

    /// Kernel value at displacement (dx, dy).
    pub fn eval(&self, dx: f64, dy: f64) -> f64 {
        let r2 = dx * dx + dy * dy;
        self.c_exc * (-0.5 * r2 / (self.sigma_exc * self.sigma_exc)).exp()
            - self.c_inh * (-0.5 * r2 / (self.sigma_inh * self.sigma_inh)).exp()
    }

    /// Half-width of the truncated excitatory component, in samples.
    pub fn support_exc(&self) -> usize {
        (self.cutoff_sigmas * self.sigma_exc).ceil() as usize
    }

    /// Half-width of the truncated inhibitory component, in samples.
    pub fn support_inh(&self) -> usize {
        (self.cutoff_sigmas * self.sigma_inh).ceil() as usize
    }

    fn weights(c: f64, sigma: f64, half: usize) -> Vec<f64> {
        (-(half as isize)..=half as isize)
            .map(|d| {
                let d = d as f64;
                c * (-0.5 * d * d / (sigma * sigma)).exp()
            })
            .collect()
    }

    /// Convolution of `src` with the kernel (without the global term).
    ///
    /// Gaussian components factorize, so plane grids are convolved with two
    /// separable passes per component; the amplitude is applied once. Results
    /// match direct summation of the truncated kernel to floating tolerance.
    /// Sparse sources (a few active cells, the common case for peaky fields)
    /// take a direct accumulation path over the truncated stencil instead.
    pub fn convolve(&self, src: &Grid) -> Grid {
        let mut out = match src.shape() {
            Shape::Scalar => {
                // Degenerate case: self-coupling at zero displacement.
                return Grid::scalar((self.c_exc - self.c_inh) * src.value());
            }
            shape => Grid::zeros(shape),
        };
        if let Shape::Plane(rows, cols) = src.shape() {
            // Sources below this level contribute at most ~1e-6 * c to any
            // output cell in total; dropping them keeps results within
            // floating tolerance of the dense sum.
            let active: Vec<usize> = (0..src.len())
                .filter(|&i| src.at(i).abs() > NEGLIGIBLE_SOURCE)
                .collect();
            if active.is_empty() {
                return out;
            }
            let w = self.support_exc().max(self.support_inh());
            let stencil = (2 * w + 1) * (2 * w + 1);
            let separable = 2 * rows * cols * (2 * w + 2);
            if active.len() * stencil < separable {
                self.scatter_sparse(src, &active, rows, cols, &mut out);
                return out;
            }
        }
        if self.c_exc != 0.0 {
            let we = Self::weights(1.0, self.sigma_exc, self.support_exc());
            out.add_scaled(&convolve_component(src, &we, self.support_exc()), self.c_exc);
        }
        if self.c_inh != 0.0 {
            let wi = Self::weights(1.0, self.sigma_inh, self.support_inh());
            out.add_scaled(&convolve_component(src, &wi, self.support_inh()), -self.c_inh);
        }
        out
    }

    fn scatter_sparse(&self, src: &Grid, active: &[usize], rows: usize, cols: usize, out: &mut Grid) {
        let we = Self::weights(1.0, self.sigma_exc, self.support_exc());
        let wi = if self.c_inh != 0.0 {
            Some(Self::weights(1.0, self.sigma_inh, self.support_inh()))
        } else {
            None
        };
        let he = self.support_exc() as isize;
        let hi = self.support_inh() as isize;
        let reach = if wi.is_some() { he.max(hi) } else { he };
        for &i in active {
            let f = src.at(i);
            let (sr, sc) = ((i / cols) as isize, (i % cols) as isize);
            for dr in -reach..=reach {
                let r = sr + dr;
                if r < 0 || r >= rows as isize {
                    continue;
                }
                for dc in -reach..=reach {
                    let c = sc + dc;
                    if c < 0 || c >= cols as isize {
                        continue;
                    }
                    let mut k = 0.0;
                    if dr.abs() <= he && dc.abs() <= he {
                        k += self.c_exc * we[(dr + he) as usize] * we[(dc + he) as usize];
                    }
                    if let Some(wi) = &wi {
                        if dr.abs() <= hi && dc.abs() <= hi {
                            k -= self.c_inh * wi[(dr + hi) as usize] * wi[(dc + hi) as usize];
                        }
                    }
                    let idx = (r as usize) * cols + c as usize;
                    out.set(idx, out.at(idx) + k * f);
                }
            }
        }
    }
}

fn convolve_component(src: &Grid, weights: &[f64], half: usize) -> Grid {
    match src.shape() {
        Shape::Scalar => unreachable!("scalar handled by caller"),
        Shape::Line(n) => {
            let mut out = Grid::zeros(Shape::Line(n));
            line_pass(src.as_slice(), out.as_mut_slice(), n, 1, weights, half);
            out
        }
        Shape::Plane(rows, cols) => {
            // Unit-amplitude separable passes: columns within each row, then rows.
            let mut tmp = Grid::zeros(Shape::Plane(rows, cols));
            for r in 0..rows {
                let off = r * cols;
                line_pass(
                    &src.as_slice()[off..off + cols],
                    &mut tmp.as_mut_slice()[off..off + cols],
                    cols,
                    1,
                    weights,
                    half,
                );
            }
            let mut out = Grid::zeros(Shape::Plane(rows, cols));
            for c in 0..cols {
                column_pass(tmp.as_slice(), out.as_mut_slice(), rows, cols, c, weights, half);
            }
            out
        }
    }
}

fn line_pass(src: &[f64], dst: &mut [f64], n: usize, stride: usize, weights: &[f64], half: usize) {
    for i in 0..n {
        let lo = i.saturating_sub(half);
        let hi = (i + half).min(n - 1);
        let mut acc = 0.0;
        for j in lo..=hi {
            let w = weights[j + half - i];
            acc += w * src[j * stride];
        }
        dst[i * stride] = acc;
    }
}

fn column_pass(
    src: &[f64],
    dst: &mut [f64],
    rows: usize,
    cols: usize,
    col: usize,
    weights: &[f64],
    half: usize,
) {
    for r in 0..rows {
        let lo = r.saturating_sub(half);
        let hi = (r + half).min(rows - 1);
        let mut acc = 0.0;
        for j in lo..=hi {
            acc += weights[j + half - r] * src[j * cols + col];
        }
        dst[r * cols + col] = acc;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Direct O(n^2) summation over the truncated kernel, used as the
    // independent check for the separable path.
    fn naive_convolve(k: &InteractionKernel, src: &Grid) -> Grid {
        let half = k.support_exc().max(k.support_inh()) as isize;
        let mut out = Grid::zeros(src.shape());
        match src.shape() {
            Shape::Scalar => out.set(0, (k.c_exc - k.c_inh) * src.value()),
            Shape::Line(n) => {
                for i in 0..n as isize {
                    let mut acc = 0.0;
                    for j in 0..n as isize {
                        let d = (i - j).abs();
                        if d <= half {
                            let we = if d <= k.support_exc() as isize {
                                k.c_exc
                                    * (-0.5 * (d * d) as f64 / (k.sigma_exc * k.sigma_exc)).exp()
                            } else {
                                0.0
                            };
                            let wi = if d <= k.support_inh() as isize {
                                k.c_inh
                                    * (-0.5 * (d * d) as f64 / (k.sigma_inh * k.sigma_inh)).exp()
                            } else {
                                0.0
                            };
                            acc += (we - wi) * src.at(j as usize);
                        }
                    }
                    out.set(i as usize, acc);
                }
            }
            Shape::Plane(rows, cols) => {
                for r in 0..rows as isize {
                    for c in 0..cols as isize {
                        let mut acc = 0.0;
                        for sr in 0..rows as isize {
                            for sc in 0..cols as isize {
                                let dr = (r - sr).abs();
                                let dc = (c - sc).abs();
                                let mut w = 0.0;
                                if dr <= k.support_exc() as isize && dc <= k.support_exc() as isize
                                {
                                    w += k.c_exc
                                        * (-0.5 * (dr * dr + dc * dc) as f64
                                            / (k.sigma_exc * k.sigma_exc))
                                            .exp();
                                }
                                if dr <= k.support_inh() as isize && dc <= k.support_inh() as isize
                                {
                                    w -= k.c_inh
                                        * (-0.5 * (dr * dr + dc * dc) as f64
                                            / (k.sigma_inh * k.sigma_inh))
                                            .exp();
                                }
                                acc += w * src.at((sr * cols as isize + sc) as usize);
                            }
                        }
                        out.set((r * cols as isize + c) as usize, acc);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn mexican_hat_center_value() {
        // c_exc=3.5, sigma_exc=2, c_inh=4 (magnitude), sigma_inh=9
        let k = InteractionKernel::new(3.5, 2.0, 4.0, 9.0, 0.0);
        assert!((k.eval(0.0, 0.0) - (-0.5)).abs() < 1e-12);
    }

    #[test]
    fn kernel_is_symmetric() {
        let k = InteractionKernel::new(3.5, 2.0, 4.0, 9.0, 0.0);
        for (x, y) in [(1.0, 2.0), (3.5, -0.25), (-7.0, 4.0)] {
            assert_eq!(k.eval(x, y).to_bits(), k.eval(-x, -y).to_bits());
        }
    }

    #[test]
    fn zero_output_convolves_to_zero() {
        let k = InteractionKernel::new(3.5, 2.0, 4.0, 9.0, -0.1);
        let out = k.convolve(&Grid::zeros(Shape::Plane(100, 100)));
        assert!(out.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn impulse_yields_gaussian_bump_matching_naive_sum_1d() {
        let k = InteractionKernel::excitatory(2.0, 3.0, 0.0);
        let mut src = Grid::zeros(Shape::Line(100));
        src.set(47, 1.0);
        let fast = k.convolve(&src);
        let slow = naive_convolve(&k, &src);
        assert_eq!(fast.argmax(), 47);
        for i in 0..100 {
            assert!((fast.at(i) - slow.at(i)).abs() < 1e-12, "i={i}");
        }
    }

    #[test]
    fn separable_matches_naive_sum_2d() {
        let k = InteractionKernel::new(3.5, 2.0, 4.0, 9.0, 0.0);
        let mut src = Grid::zeros(Shape::Plane(100, 100));
        src.set2(20, 30, 1.0);
        src.set2(60, 75, 0.5);
        src.set2(0, 99, 0.25); // boundary source, exercises truncation
        let fast = k.convolve(&src);
        let slow = naive_convolve(&k, &src);
        for i in 0..fast.len() {
            assert!(
                (fast.at(i) - slow.at(i)).abs() < 1e-10,
                "cell {i}: {} vs {}",
                fast.at(i),
                slow.at(i)
            );
        }
    }

    #[test]
    fn impulse_bump_centered_on_impulse_2d() {
        let k = InteractionKernel::excitatory(1.0, 2.0, 0.0);
        let mut src = Grid::zeros(Shape::Plane(100, 100));
        src.set2(40, 60, 1.0);
        let out = k.convolve(&src);
        assert_eq!(out.argmax2(), (40, 60));
        assert!((out.at2(40, 60) - 1.0).abs() < 1e-12);
        // radial symmetry around the impulse
        assert!((out.at2(42, 60) - out.at2(38, 60)).abs() < 1e-12);
        assert!((out.at2(40, 62) - out.at2(40, 58)).abs() < 1e-12);
    }
}
