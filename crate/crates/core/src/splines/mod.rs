//! Spline surrogates: cubic B-splines (interpolating and least-squares) and the
//! shape-preserving rational quartic spline.

mod banded;
mod bspline;
mod shape_preserving;

pub use bspline::{default_approx_controls, BSplineMode, CubicBSpline};
pub use shape_preserving::{ShapePreservingSpline, SpSegment};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub(crate) fn check_range<T: Scalar>(x: T, lo: T, hi: T) -> Result<()> {
    if x >= lo && x <= hi {
        Ok(())
    } else {
        Err(Error::Range {
            value: x.as_f64(),
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        })
    }
}

/// Index `i` of the data interval `[x_i, x_{i+1}]` containing `x` (clamped to the last interval).
pub(crate) fn locate<T: Scalar>(nodes: &[T], x: T) -> usize {
    let last = nodes.len() - 2;
    match nodes.binary_search_by(|n| n.partial_cmp(&x).expect("finite nodes")) {
        Ok(i) => i.min(last),
        Err(i) => i.saturating_sub(1).min(last),
    }
}
