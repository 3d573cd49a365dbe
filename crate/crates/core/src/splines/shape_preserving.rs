//! C¹ shape-preserving rational quartic interpolation.
//!
//! On each interval, with local variable `θ ∈ [0, 1]`, step `h` and chord slope `Δ`,
//!
//! ```text
//! S(θ) = (H(θ) + τ ω(θ) Q(θ)) / (1 + τ ω(θ)),   ω = θ(1 - θ)
//! ```
//!
//! where `H` is the cubic Hermite interpolant of the end values and slopes and
//! `Q(θ) = f_i + (hΔ + c) θ - c θ²` is a quadratic through the end values. The
//! numerator is quartic and the denominator quadratic; `S` interpolates the end
//! values and slopes for every tension `τ >= 0` and every curvature parameter `c`.
//! As `τ` grows, `S` relaxes towards `Q`, whose shape is fixed by `c`.
//!
//! Slopes are Brodlie's weighted harmonic means (zero at local extrema), so every
//! interval has monotone Hermite data. `c` is chosen from the local convexity of
//! the data, and `τ` is the smallest tension for which the Bernstein coefficients
//! of `S'`, `S` and `S''` certify monotonicity, sign preservation and (where the
//! data is locally convex or concave) convexity.

use crate::error::{input_err, Result};
use crate::poly::Poly;
use crate::random_space::CollocationSet;
use crate::scalar::Scalar;

use super::{check_range, locate};

/// One rational segment.
#[derive(Debug, Clone, PartialEq)]
pub struct SpSegment<T> {
    pub x0: T,
    pub h: T,
    /// Tension `τ >= 0`.
    pub tension: T,
    /// Curvature parameter `c` of the limiting quadratic.
    pub curvature: T,
    /// Whether all required shape certificates hold.
    pub certified: bool,
    numerator: Poly<T>,
    denominator: Poly<T>,
}

impl<T: Scalar> SpSegment<T> {
    #[inline]
    fn eval(&self, x: T) -> T {
        let t = (x - self.x0) / self.h;
        self.numerator.eval(t) / self.denominator.eval(t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapePreservingSpline<T> {
    nodes: Vec<T>,
    slopes: Vec<T>,
    segments: Vec<SpSegment<T>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Curvature {
    Convex,
    Concave,
    Free,
}

struct Requirements<T> {
    direction: T,
    sign: Option<T>,
    curvature: Curvature,
}

impl<T: Scalar> ShapePreservingSpline<T> {
    pub fn fit(colloc: &CollocationSet<T>) -> Result<Self> {
        let n = colloc.len();
        if n < 3 {
            return input_err(format!("shape-preserving spline needs at least 3 nodes, got {n}"));
        }
        let x = colloc.nodes();
        let f = colloc.values();
        let h: Vec<T> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<T> = (0..n - 1).map(|i| (f[i + 1] - f[i]) / h[i]).collect();
        let slopes = slopes(&h, &delta);

        let segments = (0..n - 1)
            .map(|i| {
                let req = Requirements {
                    direction: signum0(delta[i]),
                    sign: if f[i] > T::zero() && f[i + 1] > T::zero() {
                        Some(T::one())
                    } else if f[i] < T::zero() && f[i + 1] < T::zero() {
                        Some(-T::one())
                    } else {
                        None
                    },
                    curvature: local_curvature(&delta, i),
                };
                build_segment(x[i], h[i], f[i], f[i + 1], slopes[i], slopes[i + 1], &req)
            })
            .collect();

        Ok(Self {
            nodes: x.to_vec(),
            slopes,
            segments,
        })
    }

    pub fn segments(&self) -> &[SpSegment<T>] {
        &self.segments
    }

    /// Node slopes used as Hermite data.
    pub fn slopes(&self) -> &[T] {
        &self.slopes
    }

    pub fn range(&self) -> (T, T) {
        (self.nodes[0], self.nodes[self.nodes.len() - 1])
    }

    pub fn eval(&self, x: T) -> Result<T> {
        let (lo, hi) = self.range();
        check_range(x, lo, hi)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: T) -> T {
        self.segments[locate(&self.nodes, x)].eval(x)
    }
}

fn signum0<T: Scalar>(v: T) -> T {
    if v > T::zero() {
        T::one()
    } else if v < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}

/// Brodlie weighted harmonic-mean slopes with shape-aware one-sided end slopes.
fn slopes<T: Scalar>(h: &[T], delta: &[T]) -> Vec<T> {
    let n = h.len() + 1;
    let mut d = vec![T::zero(); n];
    for i in 1..n - 1 {
        let (a, b) = (delta[i - 1], delta[i]);
        if a * b <= T::zero() {
            continue;
        }
        let w1 = T::two() * h[i] + h[i - 1];
        let w2 = h[i] + T::two() * h[i - 1];
        d[i] = (w1 + w2) / (w1 / a + w2 / b);
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope<T: Scalar>(h0: T, h1: T, d0: T, d1: T) -> T {
    let s = ((T::two() * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if signum0(s) != signum0(d0) {
        T::zero()
    } else if signum0(d0) != signum0(d1) && s.abs() > T::lit(3.0) * d0.abs() {
        T::lit(3.0) * d0
    } else {
        s
    }
}

/// Convexity of the data around interval `i`, judged from the neighbouring chord slopes.
fn local_curvature<T: Scalar>(delta: &[T], i: usize) -> Curvature {
    let lo = i.saturating_sub(1);
    let hi = (i + 1).min(delta.len() - 1);
    let window = &delta[lo..=hi];
    if window.len() < 2 {
        return Curvature::Free;
    }
    let increasing = window.windows(2).all(|w| w[0] <= w[1]);
    let decreasing = window.windows(2).all(|w| w[0] >= w[1]);
    match (increasing, decreasing) {
        (true, false) => Curvature::Convex,
        (false, true) => Curvature::Concave,
        _ => Curvature::Free,
    }
}

fn hermite<T: Scalar>(f0: T, f1: T, m0: T, m1: T) -> Poly<T> {
    // f0 (1 - 3θ² + 2θ³) + f1 (3θ² - 2θ³) + m0 (θ - 2θ² + θ³) - m1 (θ² - θ³)
    let three = T::lit(3.0);
    Poly::new(vec![
        f0,
        m0,
        three * (f1 - f0) - T::two() * m0 - m1,
        T::two() * (f0 - f1) + m0 + m1,
    ])
}

fn build_segment<T: Scalar>(x0: T, h: T, f0: T, f1: T, d0: T, d1: T, req: &Requirements<T>) -> SpSegment<T> {
    let delta = (f1 - f0) / h;
    let (m0, m1) = (h * d0, h * d1);
    let chord = h * delta;

    // Curvature of the limiting quadratic Q'' = -2c. The relaxation towards Q must
    // not fight the Hermite slopes at either end: with A = m0 - chord - c and
    // B = chord - m1 - c, convex data needs A, B < 0 and concave data A, B > 0.
    let mut c = match req.curvature {
        Curvature::Convex => ((m0 - chord).max(chord - m1) * T::half()).min(T::zero()),
        Curvature::Concave => ((m0 - chord).min(chord - m1) * T::half()).max(T::zero()),
        Curvature::Free => T::zero(),
    };
    // Q stays monotone and keeps the sign of the data.
    c = c.max(-chord.abs()).min(chord.abs());
    if let Some(s) = req.sign {
        let mid = (f0 + f1) * s;
        c = if s > T::zero() { c.max(-mid * T::half()) } else { c.min(mid * T::half()) };
    }

    let h_poly = hermite(f0, f1, m0, m1);
    let omega = Poly::new(vec![T::zero(), T::one(), -T::one()]);

    let make = |tension: T, c: T| {
        let q = Poly::new(vec![f0, chord + c, -c]);
        let numerator = &h_poly + &(&omega * &q).scale(tension);
        let denominator = &Poly::constant(T::one()) + &omega.scale(tension);
        (numerator, denominator)
    };
    let certified = |num: &Poly<T>, den: &Poly<T>| shape_holds(num, den, req);

    let mut chosen = None;
    for c_try in [c, T::zero()] {
        let (num, den) = make(T::zero(), c_try);
        if certified(&num, &den) {
            chosen = Some((T::zero(), c_try, num, den, true));
            break;
        }
        // geometric search for a certified tension, then bisection towards the smallest one
        let mut lo = T::zero();
        let mut hi = T::one();
        let mut found = false;
        for _ in 0..64 {
            let (num, den) = make(hi, c_try);
            if certified(&num, &den) {
                found = true;
                break;
            }
            lo = hi;
            hi = hi * T::two();
        }
        if !found {
            continue;
        }
        for _ in 0..40 {
            let mid = (lo + hi) * T::half();
            let (num, den) = make(mid, c_try);
            if certified(&num, &den) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let (num, den) = make(hi, c_try);
        chosen = Some((hi, c_try, num, den, true));
        break;
    }
    let (tension, curvature, numerator, denominator, certified) = chosen.unwrap_or_else(|| {
        let big = T::lit(2f64.powi(63));
        let (num, den) = make(big, T::zero());
        (big, T::zero(), num, den, false)
    });
    SpSegment {
        x0,
        h,
        tension,
        curvature,
        certified,
        numerator,
        denominator,
    }
}

/// All Bernstein coefficients of `p` times `sign` are non-negative up to rounding.
fn bernstein_nonneg<T: Scalar>(p: &Poly<T>, sign: T) -> bool {
    let b = p.bernstein();
    let scale = b.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let tol = scale * T::lit(1e-12).max(T::epsilon() * T::lit(1e3));
    b.iter().all(|&v| v * sign >= -tol)
}

fn shape_holds<T: Scalar>(num: &Poly<T>, den: &Poly<T>, req: &Requirements<T>) -> bool {
    let dn = num.derivative();
    let dd = den.derivative();
    if req.direction != T::zero() {
        let slope_num = &(&dn * den) - &(num * &dd);
        if !bernstein_nonneg(&slope_num, req.direction) {
            return false;
        }
    }
    if let Some(s) = req.sign {
        if !bernstein_nonneg(num, s) {
            return false;
        }
    }
    let sign = match req.curvature {
        Curvature::Convex => T::one(),
        Curvature::Concave => -T::one(),
        Curvature::Free => return true,
    };
    // (N/D)'' D³ = N'' D² - 2 N' D' D - N D'' D + 2 N D'²
    let ddn = dn.derivative();
    let ddd = dd.derivative();
    let d2 = den * den;
    let t1 = &ddn * &d2;
    let t2 = (&(&dn * &dd) * den).scale(T::two());
    let t3 = &(num * &ddd) * den;
    let t4 = (&(num * &dd) * &dd).scale(T::two());
    let curv = &(&(&t1 - &t2) - &t3) + &t4;
    bernstein_nonneg(&curv, sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random_space::RandomVariable;

    fn dense_scan(s: &ShapePreservingSpline<f64>, n: usize) -> Vec<f64> {
        let (lo, hi) = s.range();
        (0..=n)
            .map(|k| s.eval(lo + (hi - lo) * k as f64 / n as f64).unwrap())
            .collect()
    }

    #[test]
    fn monotone_data_gives_monotone_spline() {
        let c = CollocationSet::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 0.1, 0.9, 1.0]).unwrap();
        let s = ShapePreservingSpline::fit(&c).unwrap();
        let v = dense_scan(&s, 10_000);
        assert!(v.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!(s.segments().iter().all(|seg| seg.certified));
    }

    #[test]
    fn exponential_stays_positive_and_increasing() {
        let nodes = RandomVariable::uniform(-1.0_f64, 1.0).unwrap().uniform_nodes(10).unwrap();
        let c = CollocationSet::from_fn(nodes, f64::exp).unwrap();
        let s = ShapePreservingSpline::fit(&c).unwrap();
        let v = dense_scan(&s, 10_000);
        assert!(v.iter().all(|&u| u > 0.0));
        assert!(v.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }

    #[test]
    fn step_data_stays_in_range() {
        let c = CollocationSet::new(
            vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0],
        )
        .unwrap();
        let s = ShapePreservingSpline::fit(&c).unwrap();
        for u in dense_scan(&s, 10_000) {
            assert!((-1e-12..=1.0 + 1e-12).contains(&u), "{u}");
        }
    }

    #[test]
    fn interpolates_and_is_c1() {
        let nodes = RandomVariable::uniform(-1.0_f64, 1.0).unwrap().uniform_nodes(11).unwrap();
        let c = CollocationSet::from_fn(nodes, |x| (2.0 * x).sin() + 0.3 * x * x).unwrap();
        let s = ShapePreservingSpline::fit(&c).unwrap();
        for (&x, &u) in c.nodes().iter().zip(c.values()) {
            assert!((s.eval(x).unwrap() - u).abs() < 1e-12);
        }
        // one-sided difference quotients agree at interior nodes
        let eps = 1e-7;
        for (k, &x) in c.nodes().iter().enumerate().skip(1).take(9) {
            let left = (s.eval(x).unwrap() - s.eval(x - eps).unwrap()) / eps;
            let right = (s.eval(x + eps).unwrap() - s.eval(x).unwrap()) / eps;
            assert!((left - right).abs() < 1e-4, "node {k}: {left} vs {right}");
            assert!((left - s.slopes()[k]).abs() < 1e-4);
        }
    }

    #[test]
    fn convex_data_gives_convex_spline() {
        let nodes: Vec<f64> = (0..9).map(|k| k as f64 * 0.25).collect();
        let c = CollocationSet::from_fn(nodes, |x| (x - 0.9).powi(2) + 0.1 * (3.0 * x).exp()).unwrap();
        let s = ShapePreservingSpline::fit(&c).unwrap();
        let n = 20_000;
        let v = dense_scan(&s, n);
        let step = 2.0 / n as f64;
        for w in v.windows(3) {
            let second = (w[0] - 2.0 * w[1] + w[2]) / (step * step);
            assert!(second >= -1e-6, "{second}");
        }
    }
}
