//! Dense Cholesky factorization for the reduced weighted Laplacian.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Lower-triangular factor `L` with `A = L Lᵀ`, row-major.
#[derive(Clone, Debug)]
pub struct Cholesky<S> {
    n: usize,
    l: Vec<S>,
}

impl<S: Scalar> Cholesky<S> {
    /// Factors a symmetric positive definite row-major matrix. Fails with the pivot ratio
    /// when the smallest pivot is negligible relative to the largest.
    pub fn factor(a: &[S], n: usize) -> Result<Self> {
        let mut l = vec![S::zero(); n * n];
        let mut max_pivot = S::zero();
        let mut min_pivot = S::infinity();
        for j in 0..n {
            let mut d = a[j * n + j];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            max_pivot = max_pivot.max(a[j * n + j]);
            min_pivot = min_pivot.min(d);
            if d <= S::zero() || d <= max_pivot * S::epsilon() * S::lit(64.0) {
                let ratio = (d / max_pivot).to_f64().unwrap_or(0.0);
                return Err(Error::Singular { ratio });
            }
            let djj = d.sqrt();
            l[j * n + j] = djj;
            for i in j + 1..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / djj;
            }
        }
        Ok(Cholesky { n, l })
    }

    /// Solves `A x = b` in place.
    pub fn solve(&self, b: &mut [S]) {
        let n = self.n;
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.l[i * n + k] * b[k];
            }
            b[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * b[k];
            }
            b[i] = s / self.l[i * n + i];
        }
    }

    /// Dense inverse, row-major.
    pub fn inverse(&self) -> Vec<S> {
        let n = self.n;
        let mut inv = vec![S::zero(); n * n];
        let mut col = vec![S::zero(); n];
        for j in 0..n {
            col.iter_mut().for_each(|c| *c = S::zero());
            col[j] = S::one();
            self.solve(&mut col);
            for i in 0..n {
                inv[i * n + j] = col[i];
            }
        }
        inv
    }

    pub fn ln_det(&self) -> S {
        (0..self.n).map(|i| self.l[i * self.n + i].ln()).sum::<S>() * S::lit(2.0)
    }
}

/// Weighted Laplacian with the last vertex grounded, row-major (n-1)×(n-1).
pub fn reduced_laplacian<S: Scalar>(n: usize, ends: &[(usize, usize)], weight: &[S]) -> Vec<S> {
    let m = n - 1;
    let mut a = vec![S::zero(); m * m];
    for (&(u, v), &w) in ends.iter().zip(weight) {
        if u == v {
            continue;
        }
        if u < m {
            a[u * m + u] += w;
        }
        if v < m {
            a[v * m + v] += w;
        }
        if u < m && v < m {
            a[u * m + v] -= w;
            a[v * m + u] -= w;
        }
    }
    a
}

/// Number of spanning trees (unweighted, parallel edges counted separately), in floating point.
pub fn spanning_tree_count(n: usize, ends: &[(usize, usize)]) -> Result<f64> {
    if n <= 1 {
        return Ok(1.0);
    }
    let ones = vec![1.0f64; ends.len()];
    let a = reduced_laplacian(n, ends, &ones);
    match Cholesky::factor(&a, n - 1) {
        Ok(c) => Ok(c.ln_det().exp().round()),
        Err(Error::Singular { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_roundtrip() {
        let a = vec![4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0];
        let c = Cholesky::<f64>::factor(&a, 3).unwrap();
        let mut b = vec![1.0, 2.0, 3.0];
        c.solve(&mut b);
        for i in 0..3 {
            let row: f64 = (0..3).map(|j| a[i * 3 + j] * b[j]).sum();
            assert!((row - [1.0, 2.0, 3.0][i]).abs() < 1e-12);
        }
    }

    #[test]
    fn cayley_counts() {
        // K4 has 16 spanning trees; a doubled triangle has 3·4 = 12
        let k4: Vec<(usize, usize)> = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        assert_eq!(spanning_tree_count(4, &k4).unwrap(), 16.0);
        let dt = vec![(0, 1), (0, 1), (1, 2), (1, 2), (2, 0), (2, 0)];
        assert_eq!(spanning_tree_count(3, &dt).unwrap(), 12.0);
        assert_eq!(spanning_tree_count(3, &[(0, 1)]).unwrap(), 0.0);
    }

    #[test]
    fn singular_is_reported() {
        let a = vec![1.0, 1.0, 1.0, 1.0];
        assert!(matches!(Cholesky::<f64>::factor(&a, 2), Err(Error::Singular { .. })));
    }
}
