use serde::Serialize;

use super::linalg::{reduced_laplacian, Cholesky};
use crate::error::{Error, Result};
use crate::graph::is_connected;
use crate::scalar::Scalar;

/// A λ-uniform spanning-tree law on a small multigraph: Pr[T] ∝ Π_{e∈T} λ_e.
#[derive(Clone, Debug, Serialize)]
pub struct TreeDistribution<S> {
    pub n: usize,
    pub ends: Vec<(usize, usize)>,
    pub lambda: Vec<S>,
    /// Target marginals when fitted, otherwise the marginals of `lambda`.
    pub target: Vec<S>,
    /// Exact marginals of `lambda`.
    pub marginals: Vec<S>,
    /// max_e |p_e / z_e - 1|.
    pub two_sided_error: S,
    /// max_e p_e / z_e - 1.
    pub one_sided_error: S,
    pub iterations: usize,
}

/// p_e = λ_e · R_eff(u, v) on the weighted graph.
pub fn exact_marginals<S: Scalar>(n: usize, ends: &[(usize, usize)], lambda: &[S]) -> Result<Vec<S>> {
    if !is_connected(n, ends.iter().copied()) {
        return Err(Error::Disconnected);
    }
    if n == 1 {
        return Ok(vec![S::zero(); ends.len()]);
    }
    let m = n - 1;
    let chol = Cholesky::factor(&reduced_laplacian(n, ends, lambda), m)?;
    let inv = chol.inverse();
    let at = |i: usize, j: usize| if i == m || j == m { S::zero() } else { inv[i * m + j] };
    Ok(ends
        .iter()
        .zip(lambda)
        .map(|(&(u, v), &l)| if u == v { S::zero() } else { l * (at(u, u) + at(v, v) - at(u, v) - at(v, u)) })
        .collect())
}

#[derive(Clone, Debug)]
pub struct FitConfig {
    pub max_iterations: usize,
    /// Initial exponent of the multiplicative step; halved whenever the error grows.
    pub step: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig { max_iterations: 20_000, step: 1.0 }
    }
}

impl<S: Scalar> TreeDistribution<S> {
    /// Uniform weights λ ≡ 1.
    pub fn uniform(n: usize, ends: Vec<(usize, usize)>) -> Result<Self> {
        let lambda = vec![S::one(); ends.len()];
        Self::with_lambda(n, ends, lambda)
    }

    pub fn with_lambda(n: usize, ends: Vec<(usize, usize)>, lambda: Vec<S>) -> Result<Self> {
        let marginals = exact_marginals(n, &ends, &lambda)?;
        Ok(TreeDistribution {
            n,
            ends,
            lambda,
            target: marginals.clone(),
            marginals,
            two_sided_error: S::zero(),
            one_sided_error: S::zero(),
            iterations: 0,
        })
    }

    pub fn num_edges(&self) -> usize {
        self.ends.len()
    }
}

fn errors<S: Scalar>(p: &[S], z: &[S]) -> (S, S) {
    let mut two = S::zero();
    let mut one = S::neg_infinity();
    for (&pe, &ze) in p.iter().zip(z) {
        let r = pe / ze - S::one();
        two = two.max(r.abs());
        one = one.max(r);
    }
    (two, one)
}

/// Finds λ whose tree marginals match `z` to within relative error `eps` on every edge.
pub fn fit_lambdas<S: Scalar>(n: usize, ends: Vec<(usize, usize)>, z: &[S], eps: S) -> Result<TreeDistribution<S>> {
    fit_lambdas_with(n, ends, z, eps, &FitConfig::default())
}

pub fn fit_lambdas_with<S: Scalar>(
    n: usize,
    ends: Vec<(usize, usize)>,
    z: &[S],
    eps: S,
    cfg: &FitConfig,
) -> Result<TreeDistribution<S>> {
    if !(eps > S::zero()) {
        return Err(Error::Parameters("epsilon must be positive".into()));
    }
    if z.len() != ends.len() || z.iter().any(|&x| !(x > S::zero()) || x > S::one()) {
        return Err(Error::Parameters("target marginals must lie in (0, 1], one per edge".into()));
    }
    let total: S = z.iter().copied().sum();
    let want = S::from_usize(n - 1).unwrap();
    if (total - want).abs() > S::lit(1e-6) * (want + S::one()) {
        return Err(Error::Parameters(format!("target marginals sum to {total}, expected {want}")));
    }
    let mut lambda = vec![S::one(); ends.len()];
    let mut step = S::lit(cfg.step);
    let mut prev = S::infinity();
    for it in 0..=cfg.max_iterations {
        let p = exact_marginals(n, &ends, &lambda)?;
        let (two, one) = errors(&p, z);
        if two <= eps {
            return Ok(TreeDistribution {
                n,
                ends,
                lambda,
                target: z.to_vec(),
                marginals: p,
                two_sided_error: two,
                one_sided_error: one,
                iterations: it,
            });
        }
        if it == cfg.max_iterations {
            return Err(Error::NoConvergence { iterations: it, error: two.to_f64().unwrap_or(f64::NAN) });
        }
        if two > prev {
            step *= S::lit(0.5);
        }
        prev = two;
        let mut log_mean = S::zero();
        for ((l, &pe), &ze) in lambda.iter_mut().zip(&p).zip(z) {
            *l *= (ze / pe).powf(step);
            log_mean += l.ln();
        }
        let scale = (-log_mean / S::from_usize(lambda.len()).unwrap()).exp();
        lambda.iter_mut().for_each(|l| *l *= scale);
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_and_pair() {
        let p = exact_marginals(3, &[(0, 1), (1, 2), (2, 0)], &[1.0f64; 3]).unwrap();
        assert!(p.iter().all(|&x| (x - 2.0 / 3.0).abs() < 1e-14));
        let p = exact_marginals(2, &[(0, 1), (0, 1)], &[1.0f64; 2]).unwrap();
        assert!(p.iter().all(|&x| (x - 0.5).abs() < 1e-14));
    }

    #[test]
    fn disconnected_errors() {
        assert!(matches!(exact_marginals(3, &[(0, 1)], &[1.0f64]), Err(Error::Disconnected)));
    }

    #[test]
    fn uniform_target_converges_immediately() {
        let ends = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 1)];
        let z = exact_marginals(4, &ends, &[1.0f64; 7]).unwrap();
        let d = fit_lambdas(4, ends, &z, 1e-9).unwrap();
        assert_eq!(d.iterations, 0);
    }

    #[test]
    fn fits_skewed_targets() {
        // K4 with z chosen away from uniform but inside the polytope
        let ends = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let z = [0.7f64, 0.4, 0.4, 0.5, 0.5, 0.5];
        let d = fit_lambdas(4, ends, &z, 1e-10).unwrap();
        for (p, t) in d.marginals.iter().zip(&z) {
            assert!((p / t - 1.0).abs() <= 1e-10);
        }
        let sum: f64 = d.marginals.iter().sum();
        assert!((sum - 3.0).abs() < 1e-9);
    }

    #[test]
    fn works_in_single_precision() {
        let ends = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let d = fit_lambdas::<f32>(4, ends, &[0.5f32; 6], 1e-4).unwrap();
        assert!(d.marginals.iter().all(|&p| (p - 0.5).abs() < 1e-4));
    }

    #[test]
    fn rejects_bad_targets() {
        let ends = vec![(0, 1), (1, 2), (2, 0)];
        assert!(matches!(fit_lambdas(3, ends.clone(), &[0.5f64; 3], 1e-3), Err(Error::Parameters(_))));
        assert!(matches!(fit_lambdas(3, ends, &[2.0 / 3.0f64; 3], 0.0), Err(Error::Parameters(_))));
    }
}
