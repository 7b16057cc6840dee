//! Shape-adapting projections between field outputs.

use crate::error::FieldError;
use crate::grid::{Grid, Shape};

/// How a source output is reshaped onto the target.
///
/// Plane grids are indexed (row, col); `ExpandRows` copies a line (indexed by
/// column) identically into every row, `ExpandCols` copies a line (indexed by
/// row) into every column. Contractions reduce the named axis away.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimMap {
    Identity,
    /// 0-D to anything: uniform broadcast.
    Broadcast,
    /// Line(cols) to Plane: same value down each column.
    ExpandRows,
    /// Line(rows) to Plane: same value along each row.
    ExpandCols,
    /// Plane to Line(cols): max over rows.
    MaxRows,
    /// Plane to Line(rows): max over cols.
    MaxCols,
    /// Plane to Line(cols): sum over rows.
    SumRows,
    /// Plane to Line(rows): sum over cols.
    SumCols,
    /// Anything to 0-D: max over all samples.
    MaxAll,
    /// Anything to 0-D: sum over all samples.
    SumAll,
}

/// A weighted, shape-adapting arrow from one field's output to another
/// field's input sum. Negative gain makes the projection inhibitory.
#[derive(Debug, Clone, Copy)]
pub struct Projection {
    pub gain: f64,
    pub dim_map: DimMap,
}

impl Projection {
    pub fn new(gain: f64, dim_map: DimMap) -> Self {
        Projection { gain, dim_map }
    }

    /// Applies the projection, producing a grid of `target` shape.
    pub fn apply(&self, source: &Grid, target: Shape) -> Result<Grid, FieldError> {
        let mut out = self.dim_map.reshape(source, target)?;
        out.map_inplace(|v| v * self.gain);
        Ok(out)
    }

    /// Applies the projection and accumulates into an input grid.
    pub fn apply_into(&self, source: &Grid, input: &mut Grid) -> Result<(), FieldError> {
        let g = self.dim_map.reshape(source, input.shape())?;
        input.add_scaled(&g, self.gain);
        Ok(())
    }
}

impl DimMap {
    fn reshape(&self, source: &Grid, target: Shape) -> Result<Grid, FieldError> {
        let mismatch = || FieldError::ShapeMismatch {
            expected: target,
            got: source.shape(),
        };
        match (self, source.shape(), target) {
            (DimMap::Identity, s, t) if s == t => Ok(source.clone()),
            (DimMap::Broadcast, Shape::Scalar, t) => Ok(Grid::filled(t, source.value())),
            (DimMap::ExpandRows, Shape::Line(n), Shape::Plane(rows, cols)) if n == cols => {
                let mut out = Grid::zeros(target);
                for r in 0..rows {
                    for c in 0..cols {
                        out.set2(r, c, source.at(c));
                    }
                }
                Ok(out)
            }
            (DimMap::ExpandCols, Shape::Line(n), Shape::Plane(rows, cols)) if n == rows => {
                let mut out = Grid::zeros(target);
                for r in 0..rows {
                    for c in 0..cols {
                        out.set2(r, c, source.at(r));
                    }
                }
                Ok(out)
            }
            (DimMap::MaxRows, Shape::Plane(rows, cols), Shape::Line(n)) if n == cols => {
                let mut out = Grid::zeros(target);
                for c in 0..cols {
                    let mut m = f64::NEG_INFINITY;
                    for r in 0..rows {
                        m = m.max(source.at2(r, c));
                    }
                    out.set(c, m);
                }
                Ok(out)
            }
            (DimMap::MaxCols, Shape::Plane(rows, cols), Shape::Line(n)) if n == rows => {
                let mut out = Grid::zeros(target);
                for r in 0..rows {
                    let mut m = f64::NEG_INFINITY;
                    for c in 0..cols {
                        m = m.max(source.at2(r, c));
                    }
                    out.set(r, m);
                }
                Ok(out)
            }
            (DimMap::SumRows, Shape::Plane(rows, cols), Shape::Line(n)) if n == cols => {
                let mut out = Grid::zeros(target);
                for c in 0..cols {
                    let mut s = 0.0;
                    for r in 0..rows {
                        s += source.at2(r, c);
                    }
                    out.set(c, s);
                }
                Ok(out)
            }
            (DimMap::SumCols, Shape::Plane(rows, cols), Shape::Line(n)) if n == rows => {
                let mut out = Grid::zeros(target);
                for r in 0..rows {
                    let mut s = 0.0;
                    for c in 0..cols {
                        s += source.at2(r, c);
                    }
                    out.set(r, s);
                }
                Ok(out)
            }
            (DimMap::MaxAll, _, Shape::Scalar) => Ok(Grid::scalar(source.max())),
            (DimMap::SumAll, _, Shape::Scalar) => Ok(Grid::scalar(source.sum())),
            _ => Err(mismatch()),
        }
    }
}
