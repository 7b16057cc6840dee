//! Skill fitting and reproduction.
//!
//! Transformation system per dimension:
//!   tau v' = K (g - x) - D v - K (g - x0) s + K f(s)
//!   tau x' = v
//! with phase s(t) = exp(-alpha t / tau) and forcing term
//!   f(s) = sum_i w_i psi_i(s) s / sum_i psi_i(s),
//! psi_i(s) = exp(-h_i (s - c_i)^2). The s factor in the numerator drives f
//! to zero at the end of a movement so the goal is the only attractor.

use crate::error::MotionError;
use crate::trajectory::Trajectory;

pub const DEFAULT_SPRING: f64 = 100.0;
pub const DEFAULT_DAMPING: f64 = 20.0;
/// Chosen so the phase reaches 0.01 at t = tau: exp(-alpha) = 0.01.
pub const DEFAULT_ALPHA: f64 = 4.605_170_185_988_091;
pub const DEFAULT_N_BASIS: usize = 20;

/// Phase variable s(t) = exp(-alpha t / tau); monotone from 1 toward 0.
pub fn phase(t: f64, tau: f64, alpha: f64) -> f64 {
    (-alpha * t / tau).exp()
}

/// One learned motion: per-dimension basis weights plus the shared
/// spring/damper/phase parameters and the demonstration endpoints.
#[derive(Debug, Clone)]
pub struct DmpSkill {
    weights: Vec<Vec<f64>>,
    centers: Vec<f64>,
    widths: Vec<f64>,
    spring: f64,
    damping: f64,
    alpha: f64,
    tau_demo: f64,
    start: Vec<f64>,
    goal: Vec<f64>,
}

impl DmpSkill {
    pub fn dims(&self) -> usize {
        self.weights.len()
    }

    pub fn n_basis(&self) -> usize {
        self.centers.len()
    }

    pub fn spring(&self) -> f64 {
        self.spring
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn tau_demo(&self) -> f64 {
        self.tau_demo
    }

    pub fn demo_start(&self) -> &[f64] {
        &self.start
    }

    pub fn demo_goal(&self) -> &[f64] {
        &self.goal
    }

    /// Skill with zero forcing weights; rollouts follow the bare attractor.
    pub fn zero(dims: usize, n_basis: usize, tau_demo: f64, start: Vec<f64>, goal: Vec<f64>) -> Self {
        let (centers, widths) = basis_layout(n_basis, DEFAULT_ALPHA);
        DmpSkill {
            weights: vec![vec![0.0; n_basis]; dims],
            centers,
            widths,
            spring: DEFAULT_SPRING,
            damping: DEFAULT_DAMPING,
            alpha: DEFAULT_ALPHA,
            tau_demo,
            start,
            goal,
        }
    }

    /// Fits a skill to one demonstration with least-squares forcing weights.
    pub fn learn_from_demo(demo: &Trajectory, n_basis: usize) -> Result<Self, MotionError> {
        if n_basis < 5 {
            return Err(MotionError::DegenerateDemo(format!(
                "need at least 5 basis functions, got {n_basis}"
            )));
        }
        if demo.len() < 2 * n_basis {
            return Err(MotionError::DegenerateDemo(format!(
                "need at least {} samples for {} basis functions, got {}",
                2 * n_basis,
                n_basis,
                demo.len()
            )));
        }
        let tau = demo.duration();
        if tau <= 0.0 {
            return Err(MotionError::DegenerateDemo("zero duration".into()));
        }
        let alpha = DEFAULT_ALPHA;
        let (centers, widths) = basis_layout(n_basis, alpha);
        let k = DEFAULT_SPRING;
        let d = DEFAULT_DAMPING;

        let t0 = demo.times()[0];
        let n = demo.len();
        let phases: Vec<f64> = demo.times().iter().map(|&t| phase(t - t0, tau, alpha)).collect();
        let design: Vec<Vec<f64>> = phases
            .iter()
            .map(|&s| forcing_basis(s, &centers, &widths))
            .collect();

        let start = demo.start();
        let goal = demo.end();
        let mut weights = Vec::with_capacity(demo.dims());
        for dim in 0..demo.dims() {
            let x = demo.track(dim);
            let xdot = finite_difference(demo.times(), x);
            let xddot = finite_difference(demo.times(), &xdot);
            // The transformation system carries the scaled velocity
            // v = tau x', so tau v' + D v = tau^2 x'' + D tau x'.
            let f_target: Vec<f64> = (0..n)
                .map(|i| {
                    (tau * tau * xddot[i] + d * tau * xdot[i]) / k - (goal[dim] - x[i])
                        + (goal[dim] - start[dim]) * phases[i]
                })
                .collect();
            weights.push(least_squares(&design, &f_target)?);
        }

        Ok(DmpSkill {
            weights,
            centers,
            widths,
            spring: k,
            damping: d,
            alpha,
            tau_demo: tau,
            start,
            goal,
        })
    }

    /// Forcing term value per dimension at phase `s`.
    pub fn forcing(&self, s: f64) -> Vec<f64> {
        let basis = forcing_basis(s, &self.centers, &self.widths);
        self.weights
            .iter()
            .map(|w| w.iter().zip(&basis).map(|(wi, b)| wi * b).sum())
            .collect()
    }

    /// Integrates the attractor system from `x0` toward `g` over time scale
    /// `tau`, sampling every `dt`, until the phase drops below 0.01 and the
    /// state has settled on the goal.
    pub fn rollout(
        &self,
        x0: &[f64],
        g: &[f64],
        tau: f64,
        dt: f64,
    ) -> Result<Trajectory, MotionError> {
        let dims = self.dims();
        if x0.len() != dims || g.len() != dims {
            return Err(MotionError::Numeric(format!(
                "start/goal dimension mismatch: skill has {dims}"
            )));
        }
        if !tau.is_finite() || tau <= 0.0 || !dt.is_finite() || dt <= 0.0 {
            return Err(MotionError::Numeric("tau and dt must be positive".into()));
        }
        if dt > tau / 100.0 {
            return Err(MotionError::Numeric(format!(
                "dt = {dt} too coarse for tau = {tau}; need dt <= tau/100"
            )));
        }
        for v in x0.iter().chain(g.iter()) {
            if !v.is_finite() {
                return Err(MotionError::Numeric("non-finite start or goal".into()));
            }
        }

        let mut x = x0.to_vec();
        let mut v = vec![0.0; dims];
        let mut times = vec![0.0];
        let mut coords: Vec<Vec<f64>> = (0..dims).map(|d| vec![x0[d]]).collect();

        let mut t = 0.0;
        // Hard cap well past phase exhaustion; settling normally ends first.
        let t_max = 4.0 * tau;
        loop {
            let s = phase(t, tau, self.alpha);
            let f = self.forcing(s);
            for d in 0..dims {
                let acc = (self.spring * (g[d] - x[d])
                    - self.damping * v[d]
                    - self.spring * (g[d] - x0[d]) * s
                    + self.spring * f[d])
                    / tau;
                v[d] += dt * acc;
                x[d] += dt * v[d] / tau;
                if !x[d].is_finite() {
                    return Err(MotionError::Numeric("state diverged".into()));
                }
            }
            t += dt;
            times.push(t);
            for d in 0..dims {
                coords[d].push(x[d]);
            }
            // v is the scaled velocity tau x', so 1e-3 here is a loose
            // physical-velocity bound; position dominates the endpoint error.
            let settled = x
                .iter()
                .zip(g)
                .all(|(xi, gi)| (xi - gi).abs() < 1e-5)
                && v.iter().all(|vi| vi.abs() < 1e-3);
            if (s < 0.01 && settled) || t >= t_max {
                break;
            }
        }
        Trajectory::new(times, coords)
    }
}

/// Centers equally spaced in phase-log-time with widths from neighbor gaps.
fn basis_layout(n_basis: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    let centers: Vec<f64> = (0..n_basis)
        .map(|i| (-alpha * i as f64 / (n_basis - 1) as f64).exp())
        .collect();
    let mut widths = Vec::with_capacity(n_basis);
    for i in 0..n_basis {
        let gap = if i + 1 < n_basis {
            centers[i] - centers[i + 1]
        } else {
            centers[n_basis - 2] - centers[n_basis - 1]
        };
        widths.push(1.0 / (2.0 * gap * gap));
    }
    (centers, widths)
}

/// Normalized basis responses times phase: phi_i(s) = psi_i(s) s / sum psi.
fn forcing_basis(s: f64, centers: &[f64], widths: &[f64]) -> Vec<f64> {
    let psi: Vec<f64> = centers
        .iter()
        .zip(widths)
        .map(|(c, h)| (-h * (s - c) * (s - c)).exp())
        .collect();
    let total: f64 = psi.iter().sum();
    if total <= f64::MIN_POSITIVE {
        return vec![0.0; centers.len()];
    }
    psi.iter().map(|p| p * s / total).collect()
}

/// Central differences with one-sided stencils at the endpoints.
fn finite_difference(times: &[f64], values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    out[0] = (values[1] - values[0]) / (times[1] - times[0]);
    out[n - 1] = (values[n - 1] - values[n - 2]) / (times[n - 1] - times[n - 2]);
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) / (times[i + 1] - times[i - 1]);
    }
    out
}

/// Solves min ||A w - b||^2 by normal equations with a small ridge.
fn least_squares(design: &[Vec<f64>], target: &[f64]) -> Result<Vec<f64>, MotionError> {
    let n = design[0].len();
    let mut ata = vec![vec![0.0; n]; n];
    let mut atb = vec![0.0; n];
    for (row, &t) in design.iter().zip(target) {
        for i in 0..n {
            atb[i] += row[i] * t;
            for j in i..n {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            ata[i][j] = ata[j][i];
        }
        ata[i][i] += 1e-10;
    }
    solve(ata, atb)
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>, MotionError> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[pivot][col].abs() < 1e-300 {
            return Err(MotionError::Numeric("singular normal equations".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}
