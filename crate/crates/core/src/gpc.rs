//! Gaussian quadrature and generalized polynomial chaos in one random dimension.
//!
//! Bases are orthonormal with respect to the probability law of ξ: scaled
//! Legendre polynomials for uniform laws and probabilists' Hermite polynomials
//! (weight `exp(-z²/2)`) for normal laws. Nodes come from the symmetric
//! tridiagonal Jacobi matrix of the three-term recurrence (Golub–Welsch); the
//! eigenvalues are isolated by Sturm-sequence bisection and the weights are
//! taken from the Christoffel function `1 / Σ_k ψ_k(z)²`, which keeps tiny
//! Hermite tail weights accurate to full relative precision.

use serde::{Deserialize, Serialize};

use crate::error::{config_err, input_err, Result};
use crate::random_space::{CollocationSet, Law, RandomVariable};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Legendre,
    Hermite,
}

impl Family {
    /// The family matching the law of ξ.
    pub fn for_law<T: Scalar>(rv: &RandomVariable<T>) -> Self {
        match rv.law() {
            Law::Uniform { .. } => Family::Legendre,
            Law::Normal { .. } => Family::Hermite,
        }
    }

    /// Off-diagonal Jacobi coefficient `b_k` of the orthonormal recurrence
    /// `z ψ_k = b_{k+1} ψ_{k+1} + b_k ψ_{k-1}`, for `k >= 1`.
    fn recurrence<T: Scalar>(self, k: usize) -> T {
        let kf = T::from_count(k);
        match self {
            Family::Legendre => kf / (T::lit(4.0) * kf * kf - T::one()).sqrt(),
            Family::Hermite => kf.sqrt(),
        }
    }

    /// Writes `ψ_0(z) .. ψ_{n-1}(z)` into `out`.
    fn basis_values<T: Scalar>(self, z: T, out: &mut [T]) {
        let n = out.len();
        if n == 0 {
            return;
        }
        out[0] = T::one();
        if n == 1 {
            return;
        }
        out[1] = z / self.recurrence::<T>(1);
        for k in 1..n - 1 {
            out[k + 1] = (z * out[k] - self.recurrence::<T>(k) * out[k - 1]) / self.recurrence::<T>(k + 1);
        }
    }

    /// Affine map `ξ = center + scale * z` from the standard variable to physical units.
    fn affine<T: Scalar>(self, rv: &RandomVariable<T>) -> (T, T) {
        match rv.law() {
            Law::Uniform { a, b } => ((a + b) * T::half(), (b - a) * T::half()),
            Law::Normal { mu, sigma, .. } => (mu, sigma),
        }
    }
}

/// Gauss rule in physical ξ-units with weights normalized to total probability 1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    pub family: Family,
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    center: T,
    scale: T,
}

impl<T: Scalar> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Expectation of `f(ξ)` under the law.
    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Weights against the classical weight function of the family
    /// (`1` on `[-1, 1]` for Legendre, `exp(-z²/2)` for Hermite).
    pub fn classical_weights(&self) -> Vec<T> {
        let mass = match self.family {
            Family::Legendre => T::two(),
            Family::Hermite => (T::two() * T::PI()).sqrt(),
        };
        self.weights.iter().map(|&w| w * mass).collect()
    }
}

/// Number of eigenvalues of the `n × n` Jacobi matrix strictly below `x`.
fn sturm_count<T: Scalar>(family: Family, n: usize, x: T) -> usize {
    let tiny = T::min_positive_value().sqrt();
    let pivot = |d: T| if d.abs() < tiny { tiny } else { d };
    let mut d = pivot(-x);
    let mut count = usize::from(d < T::zero());
    for k in 1..n {
        let b: T = family.recurrence(k);
        d = pivot(-x - b * b / d);
        count += usize::from(d < T::zero());
    }
    count
}

/// Gauss rule with `n` points matched to the law of `rv`.
pub fn gauss_rule<T: Scalar>(family: Family, n: usize, rv: &RandomVariable<T>) -> Result<QuadratureRule<T>> {
    if n == 0 {
        return input_err("a quadrature rule needs at least one node");
    }
    if family != Family::for_law(rv) {
        return config_err(format!(
            "{family:?} quadrature does not match the {} law of ξ",
            if rv.is_uniform() { "uniform" } else { "normal" }
        ));
    }

    // Gershgorin bound on the spectrum.
    let bound = (1..n).fold(T::zero(), |m, k| {
        let left: T = family.recurrence(k);
        let right: T = if k + 1 < n { family.recurrence(k + 1) } else { T::zero() };
        m.max(left + right)
    }) + T::one();

    let mut z = Vec::with_capacity(n);
    for k in 0..n {
        let (mut lo, mut hi) = (-bound, bound);
        for _ in 0..400 {
            let mid = (lo + hi) * T::half();
            if mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(family, n, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        z.push((lo + hi) * T::half());
    }
    // exact symmetry about the mean
    for k in 0..n / 2 {
        let m = (z[n - 1 - k] - z[k]) * T::half();
        z[k] = -m;
        z[n - 1 - k] = m;
    }
    if n % 2 == 1 {
        z[n / 2] = T::zero();
    }

    let mut psi = vec![T::zero(); n];
    let weights = z
        .iter()
        .map(|&zk| {
            family.basis_values(zk, &mut psi);
            T::one() / psi.iter().map(|&p| p * p).sum::<T>()
        })
        .collect::<Vec<_>>();
    let total: T = weights.iter().copied().sum();
    let weights = weights.into_iter().map(|w| w / total).collect();

    let (center, scale) = family.affine(rv);
    Ok(QuadratureRule {
        family,
        nodes: z.iter().map(|&zk| center + scale * zk).collect(),
        weights,
        center,
        scale,
    })
}

/// Truncated orthonormal expansion `Σ_k c_k ψ_k((ξ - center) / scale)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GpcExpansion<T> {
    pub family: Family,
    pub coefficients: Vec<T>,
    center: T,
    scale: T,
}

impl<T: Scalar> GpcExpansion<T> {
    pub fn from_coefficients(family: Family, rv: &RandomVariable<T>, coefficients: Vec<T>) -> Result<Self> {
        if coefficients.is_empty() {
            return input_err("an expansion needs at least one coefficient");
        }
        if family != Family::for_law(rv) {
            return config_err(format!("{family:?} basis does not match the law of ξ"));
        }
        let (center, scale) = family.affine(rv);
        Ok(Self {
            family,
            coefficients,
            center,
            scale,
        })
    }

    /// Discrete projection of collocation data sitting on the nodes of `rule`.
    pub fn fit(colloc: &CollocationSet<T>, rule: &QuadratureRule<T>) -> Result<Self> {
        if colloc.len() != rule.len() {
            return input_err(format!(
                "{} collocation nodes for a {}-point rule",
                colloc.len(),
                rule.len()
            ));
        }
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(64.0));
        for (k, (&x, &q)) in colloc.nodes().iter().zip(&rule.nodes).enumerate() {
            if (x - q).abs() > tol * T::one().max(q.abs()) {
                return input_err(format!("collocation node {k} ({x}) is not the quadrature node {q}"));
            }
        }
        let n = rule.len();
        let mut coefficients = vec![T::zero(); n];
        let mut psi = vec![T::zero(); n];
        for ((&q, &w), &u) in rule.nodes.iter().zip(&rule.weights).zip(colloc.values()) {
            rule.family.basis_values((q - rule.center) / rule.scale, &mut psi);
            for (c, &p) in coefficients.iter_mut().zip(&psi) {
                *c = *c + w * u * p;
            }
        }
        Ok(Self {
            family: rule.family,
            coefficients,
            center: rule.center,
            scale: rule.scale,
        })
    }

    pub fn eval(&self, xi: T) -> T {
        let z = (xi - self.center) / self.scale;
        let c = &self.coefficients;
        let mut prev = T::one();
        let mut acc = c[0];
        if c.len() == 1 {
            return acc;
        }
        let mut cur = z / self.family.recurrence::<T>(1);
        acc = acc + c[1] * cur;
        for (k, &ck) in c.iter().enumerate().skip(2) {
            let next = (z * cur - self.family.recurrence::<T>(k - 1) * prev) / self.family.recurrence::<T>(k);
            acc = acc + ck * next;
            prev = cur;
            cur = next;
        }
        acc
    }

    /// `(mean, variance) = (c_0, Σ_{k>=1} c_k²)`.
    pub fn moments(&self) -> (T, T) {
        let var = self.coefficients.iter().skip(1).map(|&c| c * c).sum();
        (self.coefficients[0], var)
    }
}
