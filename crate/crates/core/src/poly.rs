//! Dense univariate polynomials in the monomial basis.
//!
//! Used for the local candidate polynomials of the CWENO surrogate and for the
//! shape certificates of the rational spline, where degrees stay below ~12.

use std::ops::{Add, Mul, Sub};

use crate::scalar::Scalar;

/// Polynomial `c[0] + c[1] t + ... + c[n] t^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![T::zero()])
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `a + b t`
    pub fn linear(a: T, b: T) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Nominal degree (length of the coefficient vector minus one).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn eval(&self, t: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * T::from_count(k))
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Definite integral over `[a, b]`.
    pub fn integral(&self, a: T, b: T) -> T {
        let mut acc_a = T::zero();
        let mut acc_b = T::zero();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            let inv = T::one() / T::from_count(k + 1);
            acc_a = acc_a * a + c * inv;
            acc_b = acc_b * b + c * inv;
        }
        acc_b * b - acc_a * a
    }

    /// Interpolating polynomial through `(nodes[k], values[k])`, built from Newton
    /// divided differences and expanded into the monomial basis.
    pub fn interpolate(nodes: &[T], values: &[T]) -> Self {
        assert_eq!(nodes.len(), values.len());
        assert!(!nodes.is_empty());
        let n = nodes.len();
        let mut dd = values.to_vec();
        for level in 1..n {
            for k in (level..n).rev() {
                dd[k] = (dd[k] - dd[k - 1]) / (nodes[k] - nodes[k - level]);
            }
        }
        let mut p = Self::constant(dd[n - 1]);
        for k in (0..n - 1).rev() {
            p = &p * &Self::linear(-nodes[k], T::one());
            p.coeffs[0] = p.coeffs[0] + dd[k];
        }
        p
    }

    /// Coefficients in the Bernstein basis of degree `self.degree()` on `[0, 1]`.
    ///
    /// Non-negative Bernstein coefficients certify a non-negative polynomial on `[0, 1]`.
    pub fn bernstein(&self) -> Vec<T> {
        let n = self.degree();
        let binom = binomial_row::<T>(n);
        (0..=n)
            .map(|j| {
                let bj = binomial_row::<T>(j);
                (0..=j).fold(T::zero(), |acc, k| acc + bj[k] / binom[k] * self.coeffs[k])
            })
            .collect()
    }
}

fn binomial_row<T: Scalar>(n: usize) -> Vec<T> {
    let mut row = vec![T::one(); n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * T::from_count(n + 1 - k) / T::from_count(k);
    }
    row
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &Poly<T>, k: usize| p.coeffs.get(k).copied().unwrap_or_else(T::zero);
        Poly::new((0..n).map(|k| get(self, k) + get(rhs, k)).collect())
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Poly<T> {
        self + &rhs.scale(-T::one())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Poly<T> {
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Poly::new(out)
    }
}
