use crate::scalar::Scalar;

/// Square banded matrix with `lower` sub- and `upper` super-diagonals, factored
/// in place by Gaussian elimination without pivoting.
///
/// Only used for B-spline collocation matrices, which are totally positive, so
/// elimination without pivoting is stable.
pub(crate) struct BandedMatrix<T> {
    n: usize,
    lower: usize,
    upper: usize,
    // row-major band storage: entry (i, j) at i * width + (j + lower - i)
    band: Vec<T>,
}

impl<T: Scalar> BandedMatrix<T> {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        Self {
            n,
            lower,
            upper,
            band: vec![T::zero(); n * (lower + upper + 1)],
        }
    }

    fn width(&self) -> usize {
        self.lower + self.upper + 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(j + self.lower >= i && j <= i + self.upper, "({i}, {j}) outside band");
        let w = self.width();
        self.band[i * w + j + self.lower - i] = v;
    }

    fn get(&self, i: usize, j: usize) -> T {
        if j + self.lower < i || j > i + self.upper {
            return T::zero();
        }
        self.band[i * self.width() + j + self.lower - i]
    }

    /// Solves `A x = rhs`, returning `None` on a vanishing pivot.
    pub fn solve(mut self, rhs: &[T]) -> Option<Vec<T>> {
        let n = self.n;
        let mut x = rhs.to_vec();
        let tiny = T::epsilon() * T::lit(1e-3);
        for k in 0..n {
            let pivot = self.get(k, k);
            if pivot.abs() <= tiny {
                return None;
            }
            for i in k + 1..(k + self.lower + 1).min(n) {
                let factor = self.get(i, k) / pivot;
                if factor == T::zero() {
                    continue;
                }
                for j in k..(k + self.upper + 1).min(n) {
                    let v = self.get(i, j) - factor * self.get(k, j);
                    self.set(i, j, v);
                }
                x[i] = x[i] - factor * x[k];
            }
        }
        for k in (0..n).rev() {
            let mut acc = x[k];
            for j in k + 1..(k + self.upper + 1).min(n) {
                acc = acc - self.get(k, j) * x[j];
            }
            x[k] = acc / self.get(k, k);
        }
        Some(x)
    }
}
