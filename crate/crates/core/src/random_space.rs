//! The random input ξ: its law, reproducible sample sets and collocation nodes.
//!
//! Sampling uses ChaCha8 seeded through `SeedableRng::seed_from_u64`, so a
//! `(law, count, seed)` triple yields the same sequence on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{input_err, Result};
use crate::scalar::Scalar;

/// Default truncation half-width, in standard deviations, for normal laws.
pub const DEFAULT_TRUNCATION_SIGMAS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Law<T> {
    Uniform { a: T, b: T },
    /// Normal law truncated to `mu ± truncation * sigma`.
    Normal { mu: T, sigma: T, truncation: T },
}

/// Law of the scalar random input together with its (finite) support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Law<T>", into = "Law<T>")]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct RandomVariable<T> {
    law: Law<T>,
}

impl<T: Scalar> TryFrom<Law<T>> for RandomVariable<T> {
    type Error = crate::Error;
    fn try_from(law: Law<T>) -> Result<Self> {
        match law {
            Law::Uniform { a, b } => Self::uniform(a, b),
            Law::Normal { mu, sigma, truncation } => Self::truncated_normal(mu, sigma, truncation),
        }
    }
}

impl<T> From<RandomVariable<T>> for Law<T> {
    fn from(rv: RandomVariable<T>) -> Self {
        rv.law
    }
}

impl<T: Scalar> RandomVariable<T> {
    pub fn uniform(a: T, b: T) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return input_err(format!("uniform law needs finite a < b, got [{a}, {b}]"));
        }
        Ok(Self {
            law: Law::Uniform { a, b },
        })
    }

    /// Normal law with the default ±6σ truncation.
    pub fn normal(mu: T, sigma: T) -> Result<Self> {
        Self::truncated_normal(mu, sigma, T::lit(DEFAULT_TRUNCATION_SIGMAS))
    }

    pub fn truncated_normal(mu: T, sigma: T, truncation: T) -> Result<Self> {
        if !(sigma > T::zero()) || !sigma.is_finite() || !mu.is_finite() {
            return input_err(format!("normal law needs finite mu and sigma > 0, got sigma = {sigma}"));
        }
        if !(truncation > T::zero()) || !truncation.is_finite() {
            return input_err(format!("truncation half-width must be positive, got {truncation}"));
        }
        Ok(Self {
            law: Law::Normal {
                mu,
                sigma,
                truncation,
            },
        })
    }

    pub fn law(&self) -> Law<T> {
        self.law
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.law, Law::Uniform { .. })
    }

    /// Closed support interval `[lo, hi]`.
    pub fn support(&self) -> (T, T) {
        match self.law {
            Law::Uniform { a, b } => (a, b),
            Law::Normal {
                mu,
                sigma,
                truncation,
            } => (mu - truncation * sigma, mu + truncation * sigma),
        }
    }

    /// Mean of the untruncated law.
    pub fn mean(&self) -> T {
        match self.law {
            Law::Uniform { a, b } => (a + b) * T::half(),
            Law::Normal { mu, .. } => mu,
        }
    }

    /// Draws `count` i.i.d. samples. Normal draws falling outside the support are redrawn.
    pub fn sample(&self, count: usize, seed: u64) -> Result<SampleSet<T>> {
        if count == 0 {
            return input_err("sample count must be at least 1");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = Vec::with_capacity(count);
        match self.law {
            Law::Uniform { a, b } => {
                let (a64, b64) = (a.as_f64(), b.as_f64());
                for _ in 0..count {
                    let u: f64 = rng.random();
                    let x = T::lit(a64 + (b64 - a64) * u);
                    values.push(x.min(b).max(a));
                }
            }
            Law::Normal {
                mu,
                sigma,
                truncation,
            } => {
                let (mu64, s64, k64) = (mu.as_f64(), sigma.as_f64(), truncation.as_f64());
                let (lo, hi) = self.support();
                while values.len() < count {
                    let z: f64 = rng.sample(StandardNormal);
                    if z.abs() > k64 {
                        continue;
                    }
                    let x = T::lit(mu64 + s64 * z);
                    if x < lo || x > hi {
                        continue;
                    }
                    values.push(x);
                }
            }
        }
        Ok(SampleSet {
            values,
            seed,
            law: *self,
        })
    }

    /// `count` equally spaced points spanning the support, endpoints included.
    pub fn uniform_nodes(&self, count: usize) -> Result<Vec<T>> {
        if count < 2 {
            return input_err("uniform node set needs at least 2 points");
        }
        let (lo, hi) = self.support();
        let step = (hi - lo) / T::from_count(count - 1);
        let mut nodes: Vec<T> = (0..count).map(|k| lo + step * T::from_count(k)).collect();
        nodes[count - 1] = hi;
        // exact mirror symmetry for symmetric supports
        let mid = (lo + hi) * T::half();
        for k in 0..count / 2 {
            let mirrored = mid + mid - nodes[k];
            nodes[count - 1 - k] = mirrored;
        }
        if count % 2 == 1 {
            nodes[count / 2] = mid;
        }
        Ok(nodes)
    }
}

/// Reproducible set of ξ-samples drawn from a [`RandomVariable`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet<T> {
    pub values: Vec<T>,
    pub seed: u64,
    pub law: RandomVariable<T>,
}

impl<T> SampleSet<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Collocation nodes in ξ (strictly increasing) with one datum per node.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationSet<T> {
    nodes: Vec<T>,
    values: Vec<T>,
}

impl<T: Scalar> CollocationSet<T> {
    pub fn new(nodes: Vec<T>, values: Vec<T>) -> Result<Self> {
        if nodes.len() != values.len() {
            return input_err(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            ));
        }
        if nodes.len() < 2 {
            return input_err("a collocation set needs at least 2 nodes");
        }
        if let Some(k) = nodes.windows(2).position(|w| !(w[0] < w[1])) {
            return input_err(format!("nodes must be strictly increasing (index {})", k + 1));
        }
        if nodes.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return input_err("collocation data contains non-finite values");
        }
        Ok(Self { nodes, values })
    }

    /// Evaluates `f` at every node.
    pub fn from_fn(nodes: Vec<T>, f: impl Fn(T) -> T) -> Result<Self> {
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self::new(nodes, values)
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn range(&self) -> (T, T) {
        (self.nodes[0], self.nodes[self.nodes.len() - 1])
    }
}
