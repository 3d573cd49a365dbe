use crate::error::{input_err, Result};
use crate::random_space::CollocationSet;
use crate::scalar::Scalar;

use super::banded::BandedMatrix;
use super::check_range;

const DEGREE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BSplineMode {
    /// Not-a-knot interpolant through every datum.
    Interpolating,
    /// Least-squares fit on uniform knots with fewer coefficients than data.
    Approximating,
}

/// Default number of control coefficients of the approximating spline for `n` data.
///
/// Grows like `√n`, which keeps the fit a genuine smoother (`controls < n`)
/// whose approximation error decays roughly like `n^{-2}`.
pub fn default_approx_controls(n: usize) -> usize {
    let root = (n as f64).sqrt().ceil() as usize;
    (root + 1).max(DEGREE + 1)
}

/// Clamped cubic B-spline on `[knots[3], knots[len-4]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicBSpline<T> {
    knots: Vec<T>,
    coeffs: Vec<T>,
    mode: BSplineMode,
}

impl<T: Scalar> CubicBSpline<T> {
    /// Not-a-knot cubic interpolant.
    pub fn interpolate(colloc: &CollocationSet<T>) -> Result<Self> {
        let n = colloc.len();
        if n < 4 {
            return input_err(format!("cubic interpolation needs at least 4 nodes, got {n}"));
        }
        let x = colloc.nodes();
        let mut knots = vec![x[0]; DEGREE + 1];
        knots.extend_from_slice(&x[2..n - 2]);
        knots.extend(std::iter::repeat_n(x[n - 1], DEGREE + 1));

        let mut spline = Self {
            knots,
            coeffs: vec![T::zero(); n],
            mode: BSplineMode::Interpolating,
        };
        let mut matrix = BandedMatrix::zeros(n, DEGREE, DEGREE);
        let mut basis = [T::zero(); DEGREE + 1];
        for (row, &xi) in x.iter().enumerate() {
            let span = spline.span(xi);
            spline.basis(span, xi, &mut basis);
            for (k, &b) in basis.iter().enumerate() {
                matrix.set(row, span - DEGREE + k, b);
            }
        }
        spline.coeffs = matrix
            .solve(colloc.values())
            .ok_or_else(|| crate::Error::Input("singular collocation matrix".into()))?;
        Ok(spline)
    }

    /// Least-squares fit with the default number of control coefficients.
    pub fn approximate(colloc: &CollocationSet<T>) -> Result<Self> {
        Self::approximate_with(colloc, default_approx_controls(colloc.len()))
    }

    /// Least-squares fit with `controls` coefficients on uniformly spaced knots.
    pub fn approximate_with(colloc: &CollocationSet<T>, controls: usize) -> Result<Self> {
        let n = colloc.len();
        if n < 6 {
            return input_err(format!("approximating spline needs at least 6 nodes, got {n}"));
        }
        if controls < DEGREE + 1 {
            return input_err(format!("a cubic spline needs at least 4 coefficients, got {controls}"));
        }
        if controls >= n {
            return input_err(format!(
                "approximation must smooth: {controls} coefficients for {n} data"
            ));
        }
        let (lo, hi) = colloc.range();
        let interior = controls - DEGREE - 1;
        let mut knots = vec![lo; DEGREE + 1];
        let step = (hi - lo) / T::from_count(interior + 1);
        knots.extend((1..=interior).map(|k| lo + step * T::from_count(k)));
        knots.extend(std::iter::repeat_n(hi, DEGREE + 1));

        let mut spline = Self {
            knots,
            coeffs: vec![T::zero(); controls],
            mode: BSplineMode::Approximating,
        };
        let mut design = vec![vec![T::zero(); controls]; n];
        let mut basis = [T::zero(); DEGREE + 1];
        for (row, &xi) in colloc.nodes().iter().enumerate() {
            let span = spline.span(xi);
            spline.basis(span, xi, &mut basis);
            for (k, &b) in basis.iter().enumerate() {
                design[row][span - DEGREE + k] = b;
            }
        }
        spline.coeffs = least_squares(design, colloc.values().to_vec())?;
        Ok(spline)
    }

    pub fn mode(&self) -> BSplineMode {
        self.mode
    }

    pub fn knots(&self) -> &[T] {
        &self.knots
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coeffs
    }

    pub fn range(&self) -> (T, T) {
        (self.knots[DEGREE], self.knots[self.coeffs.len()])
    }

    pub fn eval(&self, x: T) -> Result<T> {
        let (lo, hi) = self.range();
        check_range(x, lo, hi)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: T) -> T {
        let span = self.span(x);
        let mut basis = [T::zero(); DEGREE + 1];
        self.basis(span, x, &mut basis);
        basis
            .iter()
            .enumerate()
            .map(|(k, &b)| b * self.coeffs[span - DEGREE + k])
            .sum()
    }

    fn span(&self, x: T) -> usize {
        let n = self.coeffs.len();
        if x >= self.knots[n] {
            return n - 1;
        }
        let (mut lo, mut hi) = (DEGREE, n);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if x < self.knots[mid] {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }

    /// Non-vanishing basis functions `N_{span-3..=span}(x)` (Cox–de Boor).
    fn basis(&self, span: usize, x: T, out: &mut [T; DEGREE + 1]) {
        let mut left = [T::zero(); DEGREE + 1];
        let mut right = [T::zero(); DEGREE + 1];
        out[0] = T::one();
        for j in 1..=DEGREE {
            left[j] = x - self.knots[span + 1 - j];
            right[j] = self.knots[span + j] - x;
            let mut saved = T::zero();
            for r in 0..j {
                let temp = out[r] / (right[r + 1] + left[j - r]);
                out[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            out[j] = saved;
        }
    }
}

/// Householder QR least squares `min ||A c - y||`; rejects rank-deficient designs.
fn least_squares<T: Scalar>(mut a: Vec<Vec<T>>, mut y: Vec<T>) -> Result<Vec<T>> {
    let m = a.len();
    let n = a[0].len();
    let mut diag = vec![T::zero(); n];
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(T::zero(), |s, v| s.max(v.abs()));
    for k in 0..n {
        let norm = (k..m).map(|i| a[i][k] * a[i][k]).sum::<T>().sqrt();
        if norm <= scale * T::epsilon() * T::from_count(m) {
            return input_err("rank-deficient least-squares design");
        }
        let alpha = if a[k][k] > T::zero() { -norm } else { norm };
        // v = x - alpha e_k stored in column k
        a[k][k] = a[k][k] - alpha;
        let vnorm2: T = (k..m).map(|i| a[i][k] * a[i][k]).sum();
        for j in k + 1..n {
            let dot: T = (k..m).map(|i| a[i][k] * a[i][j]).sum();
            let f = T::two() * dot / vnorm2;
            for i in k..m {
                a[i][j] = a[i][j] - f * a[i][k];
            }
        }
        let dot: T = (k..m).map(|i| a[i][k] * y[i]).sum();
        let f = T::two() * dot / vnorm2;
        for i in k..m {
            y[i] = y[i] - f * a[i][k];
        }
        diag[k] = alpha;
    }
    let mut c = vec![T::zero(); n];
    for k in (0..n).rev() {
        let acc = (k + 1..n).fold(y[k], |acc, j| acc - a[k][j] * c[j]);
        c[k] = acc / diag[k];
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random_space::RandomVariable;

    fn uniform_colloc(n: usize, f: impl Fn(f64) -> f64) -> CollocationSet<f64> {
        let nodes = RandomVariable::uniform(-1.0, 1.0).unwrap().uniform_nodes(n).unwrap();
        CollocationSet::from_fn(nodes, f).unwrap()
    }

    fn dense(n: usize) -> impl Iterator<Item = f64> {
        (0..=n).map(move |k| -1.0 + 2.0 * k as f64 / n as f64)
    }

    #[test]
    fn interpolant_reproduces_linear() {
        let s = CubicBSpline::interpolate(&uniform_colloc(6, |x| 2.0 * x + 1.0)).unwrap();
        for x in dense(2000) {
            assert!((s.eval(x).unwrap() - (2.0 * x + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn not_a_knot_reproduces_cubic() {
        let s = CubicBSpline::interpolate(&uniform_colloc(8, |x| x * x * x)).unwrap();
        for x in dense(2000) {
            assert!((s.eval(x).unwrap() - x * x * x).abs() < 1e-10);
        }
    }

    #[test]
    fn step_data_overshoots() {
        let s = CubicBSpline::interpolate(&uniform_colloc(12, |x| if x < 0.05 { 0.0 } else { 1.0 })).unwrap();
        let max = dense(10_000).map(|x| s.eval(x).unwrap()).fold(f64::MIN, f64::max);
        assert!(max > 1.0 + 1e-2, "max = {max}");
    }

    #[test]
    fn interpolates_nodes_and_rejects_extrapolation() {
        let c = uniform_colloc(9, |x| (3.0 * x).sin());
        let s = CubicBSpline::interpolate(&c).unwrap();
        for (&x, &u) in c.nodes().iter().zip(c.values()) {
            assert!((s.eval(x).unwrap() - u).abs() < 1e-12);
        }
        assert!(matches!(s.eval(1.0 + 1e-9), Err(crate::Error::Range { .. })));
        assert!(CubicBSpline::interpolate(&uniform_colloc(3, |x| x)).is_err());
    }

    #[test]
    fn approximation_of_constant() {
        let s = CubicBSpline::approximate(&uniform_colloc(10, |_| 3.0)).unwrap();
        assert!(s.coefficients().len() < 10);
        for x in dense(500) {
            assert!((s.eval(x).unwrap() - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn approximation_smooths_cosine() {
        let c = uniform_colloc(12, |x| 3.0 * (std::f64::consts::PI * x).cos());
        let s = CubicBSpline::approximate(&c).unwrap();
        let resid = c
            .nodes()
            .iter()
            .zip(c.values())
            .map(|(&x, &u)| (s.eval(x).unwrap() - u).abs())
            .fold(0.0, f64::max);
        assert!(resid > 1e-3, "residual {resid}");
    }

    #[test]
    fn degenerate_smoothing_rejected() {
        let c = uniform_colloc(8, |x| x);
        assert!(CubicBSpline::approximate_with(&c, 8).is_err());
        assert!(CubicBSpline::approximate_with(&c, 3).is_err());
        assert!(CubicBSpline::approximate(&uniform_colloc(5, |x| x)).is_err());
    }

    #[test]
    fn midpoint_of_linear_data() {
        let c = uniform_colloc(7, |x| 4.0 - x);
        let s = CubicBSpline::interpolate(&c).unwrap();
        let mid = 0.5 * (c.nodes()[2] + c.nodes()[3]);
        assert!((s.eval(mid).unwrap() - (4.0 - mid)).abs() < 1e-13);
    }
}
