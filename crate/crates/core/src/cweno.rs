//! CWENO-Z interpolation of order 7 on point values.
//!
//! Every node `x_j` owns the region between the midpoints to its neighbours. On
//! that region the surrogate is a single polynomial blending the sextic through
//! the seven nodes `j-3..=j+3` with the four cubics through the four-node
//! substencils containing `x_j`. Near the ends the seven-node window is shifted
//! inwards and only the cubics containing `x_j` take part, so every candidate
//! still interpolates the region's own node.

use serde::{Deserialize, Serialize};

use crate::error::{config_err, input_err, Result};
use crate::poly::Poly;
use crate::random_space::CollocationSet;
use crate::scalar::Scalar;
use crate::splines::check_range;

/// Number of nodes in the optimal stencil.
pub const STENCIL: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CwenoParams {
    /// Linear weight of the sextic; the rest is split equally over the cubics.
    pub d0: f64,
    /// Regularization in the Z-weights.
    pub epsilon: f64,
}

impl Default for CwenoParams {
    fn default() -> Self {
        Self { d0: 0.5, epsilon: 1e-6 }
    }
}

impl CwenoParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.d0 > 0.0 && self.d0 < 1.0) {
            return config_err(format!("CWENO d0 must lie in (0, 1), got {}", self.d0));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return config_err(format!("CWENO epsilon must be positive, got {}", self.epsilon));
        }
        Ok(())
    }
}

/// Blended polynomial of one region, in the local variable `t = (x - center) / scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct CwenoRegion<T> {
    pub center: T,
    pub scale: T,
    pub lo: T,
    pub hi: T,
    /// Linear weights; entry 0 belongs to the sextic.
    pub linear_weights: Vec<T>,
    /// Normalized Z-weights, same layout as `linear_weights`.
    pub weights: Vec<T>,
    /// Smoothness indicators, same layout as `linear_weights`.
    pub indicators: Vec<T>,
    poly: Poly<T>,
}

impl<T: Scalar> CwenoRegion<T> {
    #[inline]
    fn eval(&self, x: T) -> T {
        self.poly.eval((x - self.center) / self.scale)
    }

    /// Blended polynomial in the local variable.
    pub fn polynomial(&self) -> &Poly<T> {
        &self.poly
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cweno<T> {
    nodes: Vec<T>,
    regions: Vec<CwenoRegion<T>>,
}

/// Smoothness indicator of `p` on `[a, b]`: `Σ_{l>=1} (b - a)^{2l-1} ∫_a^b (p^{(l)})²`.
pub fn smoothness_indicator<T: Scalar>(p: &Poly<T>, a: T, b: T) -> T {
    let width = b - a;
    let mut d = p.derivative();
    let mut factor = width;
    let mut beta = T::zero();
    for _ in 0..p.degree() {
        beta = beta + factor * (&d * &d).integral(a, b);
        factor = factor * width * width;
        d = d.derivative();
    }
    beta
}

/// Z-type nonlinear weights from linear weights `d` and indicators `beta`; entry 0 is the
/// high-order candidate.
pub fn z_weights<T: Scalar>(d: &[T], beta: &[T], epsilon: T) -> Vec<T> {
    let m = beta.len() - 1;
    let mean = beta[1..].iter().copied().sum::<T>() / T::from_count(m);
    let tau = (beta[0] - mean).abs();
    let alpha: Vec<T> = d
        .iter()
        .zip(beta)
        .map(|(&d, &b)| d * (T::one() + tau / (b + epsilon)))
        .collect();
    let total: T = alpha.iter().copied().sum();
    alpha.into_iter().map(|a| a / total).collect()
}

impl<T: Scalar> Cweno<T> {
    pub fn build(colloc: &CollocationSet<T>) -> Result<Self> {
        Self::build_with(colloc, &CwenoParams::default())
    }

    pub fn build_with(colloc: &CollocationSet<T>, params: &CwenoParams) -> Result<Self> {
        params.validate()?;
        let n = colloc.len();
        if n < STENCIL {
            return input_err(format!("CWENO needs at least {STENCIL} nodes, got {n}"));
        }
        let x = colloc.nodes();
        let f = colloc.values();
        let d0 = T::lit(params.d0);
        let eps = T::lit(params.epsilon);

        let regions = (0..n)
            .map(|j| {
                let start = j.saturating_sub(3).min(n - STENCIL);
                let window = start..start + STENCIL;
                let lo = if j == 0 { x[0] } else { (x[j - 1] + x[j]) * T::half() };
                let hi = if j == n - 1 { x[n - 1] } else { (x[j] + x[j + 1]) * T::half() };
                let center = x[j];
                let scale = hi - lo;
                let t: Vec<T> = x[window.clone()].iter().map(|&v| (v - center) / scale).collect();
                let (ta, tb) = ((lo - center) / scale, (hi - center) / scale);
                let vals = &f[window.clone()];

                let mut candidates = vec![Poly::interpolate(&t, vals)];
                for s in 0..4 {
                    let sub = s..s + 4;
                    if (start + s..start + s + 4).contains(&j) {
                        candidates.push(Poly::interpolate(&t[sub.clone()], &vals[sub]));
                    }
                }
                let m = candidates.len() - 1;
                let mut linear = vec![d0];
                linear.extend(std::iter::repeat_n((T::one() - d0) / T::from_count(m), m));
                let indicators: Vec<T> = candidates
                    .iter()
                    .map(|p| smoothness_indicator(p, ta, tb))
                    .collect();
                let weights = z_weights(&linear, &indicators, eps);

                // P = (w0/d0)(P_opt - Σ d_i P_i) + Σ w_i P_i
                let mut low = Poly::zero();
                for (p, &d) in candidates[1..].iter().zip(&linear[1..]) {
                    low = &low + &p.scale(d);
                }
                let mut poly = (&candidates[0] - &low).scale(weights[0] / d0);
                for (p, &w) in candidates[1..].iter().zip(&weights[1..]) {
                    poly = &poly + &p.scale(w);
                }

                CwenoRegion {
                    center,
                    scale,
                    lo,
                    hi,
                    linear_weights: linear,
                    weights,
                    indicators,
                    poly,
                }
            })
            .collect();

        Ok(Self {
            nodes: x.to_vec(),
            regions,
        })
    }

    pub fn regions(&self) -> &[CwenoRegion<T>] {
        &self.regions
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
        // first region whose upper bound is >= x
        let k = self.regions.partition_point(|r| r.hi < x);
        self.regions[k.min(self.regions.len() - 1)].eval(x)
    }
}
