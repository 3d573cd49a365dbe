use crate::error::{input_err, Result};
use crate::scalar::Scalar;

/// Uniform cell-centered grid on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D<T> {
    x_min: T,
    x_max: T,
    cells: usize,
}

impl<T: Scalar> Grid1D<T> {
    pub fn new(x_min: T, x_max: T, cells: usize) -> Result<Self> {
        if cells < 4 {
            return input_err(format!("a grid needs at least 4 cells, got {cells}"));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return input_err(format!("invalid domain [{x_min}, {x_max}]"));
        }
        Ok(Self { x_min, x_max, cells })
    }

    /// Grid with cell width as close as possible to `dx`.
    pub fn with_spacing(x_min: T, x_max: T, dx: T) -> Result<Self> {
        let cells = ((x_max - x_min) / dx).round().to_usize().unwrap_or(0);
        Self::new(x_min, x_max, cells)
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn x_min(&self) -> T {
        self.x_min
    }

    pub fn x_max(&self) -> T {
        self.x_max
    }

    pub fn dx(&self) -> T {
        (self.x_max - self.x_min) / T::from_count(self.cells)
    }

    pub fn center(&self, j: usize) -> T {
        self.x_min + (T::from_count(j) + T::half()) * self.dx()
    }

    pub fn centers(&self) -> Vec<T> {
        (0..self.cells).map(|j| self.center(j)).collect()
    }

    /// Interface `i` (`0..=cells`) at `x_min + i Δx`; negative and overflowing
    /// indices address ghost interfaces.
    pub fn interface(&self, i: isize) -> T {
        if i == self.cells as isize {
            return self.x_max;
        }
        let k = T::from_isize(i).expect("index");
        self.x_min + k * self.dx()
    }
}
