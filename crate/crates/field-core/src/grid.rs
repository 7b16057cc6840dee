//! Dense value lattice over a 0-D, 1-D or 2-D feature space.

/// Shape of a grid: a scalar node, a line of samples, or a plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Scalar,
    Line(usize),
    Plane(usize, usize),
}

impl Shape {
    pub fn len(&self) -> usize {
        match self {
            Shape::Scalar => 1,
            Shape::Line(n) => *n,
            Shape::Plane(r, c) => r * c,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dims(&self) -> usize {
        match self {
            Shape::Scalar => 0,
            Shape::Line(_) => 1,
            Shape::Plane(_, _) => 2,
        }
    }
}

/// Row-major value lattice. Plane indexing is (row, col).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    shape: Shape,
    data: Vec<f64>,
}

impl Grid {
    pub fn zeros(shape: Shape) -> Self {
        Grid {
            shape,
            data: vec![0.0; shape.len()],
        }
    }

    pub fn filled(shape: Shape, value: f64) -> Self {
        Grid {
            shape,
            data: vec![value; shape.len()],
        }
    }

    pub fn scalar(value: f64) -> Self {
        Grid {
            shape: Shape::Scalar,
            data: vec![value],
        }
    }

    pub fn from_vec(shape: Shape, data: Vec<f64>) -> Self {
        assert_eq!(shape.len(), data.len(), "grid data length must match shape");
        Grid { shape, data }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Scalar value of a 0-D grid.
    pub fn value(&self) -> f64 {
        debug_assert_eq!(self.shape, Shape::Scalar);
        self.data[0]
    }

    pub fn at(&self, idx: usize) -> f64 {
        self.data[idx]
    }

    pub fn at2(&self, row: usize, col: usize) -> f64 {
        match self.shape {
            Shape::Plane(_, cols) => self.data[row * cols + col],
            _ => panic!("at2 on non-plane grid"),
        }
    }

    pub fn set(&mut self, idx: usize, value: f64) {
        self.data[idx] = value;
    }

    pub fn set2(&mut self, row: usize, col: usize, value: f64) {
        match self.shape {
            Shape::Plane(_, cols) => self.data[row * cols + col] = value,
            _ => panic!("set2 on non-plane grid"),
        }
    }

    pub fn fill(&mut self, value: f64) {
        self.data.fill(value);
    }

    pub fn max(&self) -> f64 {
        self.data.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Index of the maximum value; ties break toward the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        let mut best_v = self.data[0];
        for (i, &v) in self.data.iter().enumerate().skip(1) {
            if v > best_v {
                best_v = v;
                best = i;
            }
        }
        best
    }

    /// (row, col) of the maximum value of a plane grid.
    pub fn argmax2(&self) -> (usize, usize) {
        match self.shape {
            Shape::Plane(_, cols) => {
                let i = self.argmax();
                (i / cols, i % cols)
            }
            _ => panic!("argmax2 on non-plane grid"),
        }
    }

    /// self += gain * other, elementwise.
    pub fn add_scaled(&mut self, other: &Grid, gain: f64) {
        debug_assert_eq!(self.shape, other.shape);
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += gain * b;
        }
    }

    pub fn add_uniform(&mut self, value: f64) {
        for a in self.data.iter_mut() {
            *a += value;
        }
    }

    pub fn map_inplace(&mut self, f: impl Fn(f64) -> f64) {
        for a in self.data.iter_mut() {
            *a = f(*a);
        }
    }

    /// Adds a truncated Gaussian bump centered at `center` (fractional
    /// coordinates allowed). For planes, `center` is (row, col).
    pub fn add_gaussian(&mut self, center: (f64, f64), sigma: f64, amplitude: f64) {
        let two_s2 = 2.0 * sigma * sigma;
        match self.shape {
            Shape::Scalar => self.data[0] += amplitude,
            Shape::Line(n) => {
                for i in 0..n {
                    let d = i as f64 - center.0;
                    self.data[i] += amplitude * (-d * d / two_s2).exp();
                }
            }
            Shape::Plane(rows, cols) => {
                // Beyond ~4 sigma the bump is numerically irrelevant.
                let reach = (4.0 * sigma).ceil() as isize + 1;
                let r0 = ((center.0 as isize) - reach).max(0) as usize;
                let r1 = (((center.0 as isize) + reach).max(0) as usize).min(rows - 1);
                let c0 = ((center.1 as isize) - reach).max(0) as usize;
                let c1 = (((center.1 as isize) + reach).max(0) as usize).min(cols - 1);
                for r in r0..=r1 {
                    let dr = r as f64 - center.0;
                    for c in c0..=c1 {
                        let dc = c as f64 - center.1;
                        self.data[r * cols + c] += amplitude * (-(dr * dr + dc * dc) / two_s2).exp();
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_prefers_lowest_index_on_tie() {
        let g = Grid::from_vec(Shape::Line(4), vec![0.0, 2.0, 2.0, 1.0]);
        assert_eq!(g.argmax(), 1);
    }

    #[test]
    fn gaussian_bump_peaks_at_center() {
        let mut g = Grid::zeros(Shape::Plane(100, 100));
        g.add_gaussian((40.0, 60.0), 3.0, 2.0);
        assert_eq!(g.argmax2(), (40, 60));
        assert!((g.at2(40, 60) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn add_scaled_matches_manual_sum() {
        let mut a = Grid::filled(Shape::Line(3), 1.0);
        let b = Grid::from_vec(Shape::Line(3), vec![1.0, 2.0, 3.0]);
        a.add_scaled(&b, -0.5);
        assert_eq!(a.as_slice(), &[0.5, 0.0, -0.5]);
    }
}
