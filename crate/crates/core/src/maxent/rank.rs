//! Rank sequences |A ∩ T| and real-rootedness of their generating polynomials.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::distribution::TreeDistribution;
use super::enumerate::WeightedTree;
use super::sample::TreeSampler;
use crate::scalar::Scalar;

/// Pr[|A ∩ T| = k] for k = 0..=|A| under the enumerated law.
pub fn rank_sequence<S: Scalar>(trees: &[WeightedTree<S>], set: &[usize]) -> Vec<S> {
    let mut q = vec![S::zero(); set.len() + 1];
    for t in trees {
        let k = t.edges.iter().filter(|e| set.contains(e)).count();
        q[k] += t.prob;
    }
    q
}

/// Empirical rank sequence from `samples` draws.
pub fn rank_sequence_sampled<S: Scalar, R: Rng + ?Sized>(
    dist: &TreeDistribution<S>,
    set: &[usize],
    samples: usize,
    rng: &mut R,
) -> Vec<f64> {
    let sampler = TreeSampler::new(dist);
    let mut q = vec![0.0; set.len() + 1];
    for _ in 0..samples {
        let t = sampler.sample(rng);
        q[t.iter().filter(|e| set.contains(e)).count()] += 1.0;
    }
    q.iter_mut().for_each(|x| *x /= samples as f64);
    q
}

/// Unnormalized rank polynomial in exact arithmetic: every λ is an exact dyadic rational.
pub fn rank_polynomial_exact(trees: &[WeightedTree<f64>], lambda: &[f64], set: &[usize]) -> Vec<BigRational> {
    let exact: Vec<BigRational> = lambda.iter().map(|&l| BigRational::from_float(l).expect("finite weight")).collect();
    let mut q = vec![BigRational::zero(); set.len() + 1];
    for t in trees {
        let w = t.edges.iter().fold(BigRational::one(), |acc, &e| acc * &exact[e]);
        q[t.edges.iter().filter(|e| set.contains(e)).count()] += w;
    }
    q
}

type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn derivative(p: &Poly) -> Poly {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    p.iter().enumerate().skip(1).map(|(k, c)| c * BigRational::from_integer(BigInt::from(k))).collect()
}

/// Remainder of `a` divided by `b` (b nonzero), and the quotient.
fn divmod(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            let t = &c * bc;
            r[i + shift] -= t;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
        if r.len() < b.len() {
            break;
        }
    }
    (q, trim(r))
}

fn is_zero_poly(p: &Poly) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !is_zero_poly(&b) {
        let (_, r) = divmod(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn sign_at_infinity(p: &Poly, positive: bool) -> i32 {
    let p = trim(p.clone());
    let lead = p.last().unwrap();
    let s = if lead.is_positive() {
        1
    } else if lead.is_negative() {
        -1
    } else {
        0
    };
    if positive || (p.len() - 1).is_multiple_of(2) {
        s
    } else {
        -s
    }
}

/// Number of distinct real roots by Sturm's theorem.
fn distinct_real_roots(p: &Poly) -> usize {
    let mut seq = vec![trim(p.clone()), trim(derivative(p))];
    loop {
        let n = seq.len();
        if is_zero_poly(&seq[n - 1]) {
            seq.pop();
            break;
        }
        let (_, r) = divmod(&seq[n - 2], &seq[n - 1]);
        if is_zero_poly(&r) {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let changes = |positive: bool| {
        let signs: Vec<i32> = seq.iter().map(|q| sign_at_infinity(q, positive)).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    changes(false) - changes(true)
}

/// Roots of a real polynomial (coefficients low to high) by Aberth iteration.
pub fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return vec![];
    }
    let lead = c[deg];
    let monic: Vec<f64> = c.iter().map(|x| x / lead).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(monic[deg], 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for k in (0..deg).rev() {
            dp = dp * z + p;
            p = p * z + monic[k];
        }
        (p, dp)
    };
    let radius = 1.0 + monic[..deg].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius * 0.5, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= w;
            moved = moved.max(w.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

#[derive(Clone, Debug)]
pub struct RealRootReport {
    pub degree: usize,
    pub squarefree_degree: usize,
    pub distinct_real_roots: usize,
    /// Largest |Im| among numerically computed roots of the square-free part.
    pub max_imaginary: f64,
}

impl RealRootReport {
    pub fn is_real_rooted(&self) -> bool {
        self.distinct_real_roots == self.squarefree_degree
    }
}

/// Exact real-rootedness test (Sturm count on the square-free part), plus the numerical
/// imaginary parts of the square-free part's roots.
pub fn real_root_report(poly: &[BigRational]) -> RealRootReport {
    let p = trim(poly.to_vec());
    let degree = p.len() - 1;
    if degree == 0 {
        return RealRootReport { degree, squarefree_degree: 0, distinct_real_roots: 0, max_imaginary: 0.0 };
    }
    let g = gcd(&p, &derivative(&p));
    let (sqf, _) = divmod(&p, &g);
    let sqf = trim(sqf);
    let squarefree_degree = sqf.len() - 1;
    let distinct = distinct_real_roots(&sqf);
    let scale = sqf.iter().map(|c| c.abs()).max().unwrap();
    let approx: Vec<f64> = sqf.iter().map(|c| num_traits::ToPrimitive::to_f64(&(c / &scale)).unwrap()).collect();
    let max_imaginary = polynomial_roots(&approx).iter().fold(0.0f64, |m, r| m.max(r.im.abs()));
    RealRootReport { degree, squarefree_degree, distinct_real_roots: distinct, max_imaginary }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_poly(c: &[i64]) -> Vec<BigRational> {
        c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
    }

    #[test]
    fn repeated_real_roots() {
        // (1 + t)^4
        let r = real_root_report(&int_poly(&[1, 4, 6, 4, 1]));
        assert_eq!(r.squarefree_degree, 1);
        assert!(r.is_real_rooted());
        assert!(r.max_imaginary <= 1e-7);
    }

    #[test]
    fn complex_pair_detected() {
        // (1 + t^2)(1 + t) has two complex roots
        let r = real_root_report(&int_poly(&[1, 1, 1, 1]));
        assert!(!r.is_real_rooted());
        assert!(r.max_imaginary > 0.5);
    }

    #[test]
    fn aberth_finds_distinct_roots() {
        // (t+1)(t+2)(t+3) = t^3 + 6t^2 + 11t + 6
        let mut roots: Vec<f64> = polynomial_roots(&[6.0, 11.0, 6.0, 1.0]).iter().map(|z| z.re).collect();
        roots.sort_by(f64::total_cmp);
        for (r, want) in roots.iter().zip([-3.0, -2.0, -1.0]) {
            assert!((r - want).abs() < 1e-10);
        }
    }
}
