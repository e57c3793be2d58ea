//! Extremal sums of independent Bernoullis: by Hoeffding's theorem the optimum of
//! E[g(B₁+…+B_m)] at a fixed mean uses success probabilities from {0, x, 1}.

use crate::scalar::Field;

/// Law of the number of successes, index k holding Pr[sum = k].
pub fn count_distribution<F: Field>(probs: &[F]) -> Vec<F> {
    let mut dist = vec![F::one()];
    for p in probs {
        let q = F::one() - p.clone();
        let mut next = vec![F::zero(); dist.len() + 1];
        for (k, d) in dist.iter().enumerate() {
            next[k] = next[k].clone() + d.clone() * q.clone();
            next[k + 1] = next[k + 1].clone() + d.clone() * p.clone();
        }
        dist = next;
    }
    dist
}

/// Admissible total means.
#[derive(Clone, Debug)]
pub enum MeanConstraint<F> {
    Exact(F),
    /// `steps + 1` evenly spaced means from `lo` to `hi`.
    Range {
        lo: F,
        hi: F,
        steps: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Goal {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extreme<F> {
    pub profile: Vec<F>,
    pub value: F,
}

/// Searches profiles with `forced_ones` probabilities fixed at 1 and the rest in {0, x, 1}
/// for the best value of `objective` applied to the count distribution.
pub fn bernoulli_extremes<F: Field>(
    m: usize,
    forced_ones: usize,
    mean: &MeanConstraint<F>,
    objective: impl Fn(&[F]) -> F,
    goal: Goal,
) -> Option<Extreme<F>> {
    let means: Vec<F> = match mean {
        MeanConstraint::Exact(mu) => vec![mu.clone()],
        MeanConstraint::Range { lo, hi, steps } => {
            let steps = (*steps).max(1);
            let s = F::from_usize(steps).expect("representable");
            (0..=steps)
                .map(|i| {
                    let t = F::from_usize(i).expect("representable");
                    lo.clone() + (hi.clone() - lo.clone()) * t / s.clone()
                })
                .collect()
        }
    };
    let of = |k: usize| F::from_usize(k).expect("representable");
    let mut best: Option<Extreme<F>> = None;
    for mu in &means {
        for ones in forced_ones..=m {
            for nx in 0..=m - ones {
                let x = if nx == 0 {
                    if *mu != of(ones) {
                        continue;
                    }
                    F::zero()
                } else {
                    let x = (mu.clone() - of(ones)) / of(nx);
                    if x <= F::zero() || x >= F::one() {
                        continue;
                    }
                    x
                };
                let mut profile = vec![F::one(); ones];
                profile.extend(std::iter::repeat_n(x, nx));
                profile.extend(std::iter::repeat_n(F::zero(), m - ones - nx));
                let value = objective(&count_distribution(&profile));
                let better = match &best {
                    None => true,
                    Some(b) => match goal {
                        Goal::Minimize => value < b.value,
                        Goal::Maximize => value > b.value,
                    },
                };
                if better {
                    best = Some(Extreme { profile, value });
                }
            }
        }
    }
    best
}

/// Pr[sum even] of a count distribution.
pub fn even_mass<F: Field>(dist: &[F]) -> F {
    dist.iter().step_by(2).fold(F::zero(), |a, b| a + b.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn three_with_one_sure() {
        let d = count_distribution(&[r(1, 1), r(1, 4), r(1, 4)]);
        assert_eq!(d[1], r(9, 16));
        let best = bernoulli_extremes(3, 1, &MeanConstraint::Exact(r(3, 2)), |d| d[2], Goal::Minimize).unwrap();
        assert_eq!(best.value, r(3, 8));
        assert_eq!(best.profile, vec![r(1, 1), r(1, 4), r(1, 4)]);
        let best = bernoulli_extremes(3, 1, &MeanConstraint::Exact(r(3, 2)), |d| d[1], Goal::Minimize).unwrap();
        assert_eq!(best.value, r(1, 2));
    }

    #[test]
    fn pair_with_mean_range() {
        let mean = MeanConstraint::Range { lo: r(1, 2), hi: r(3, 2), steps: 24 };
        let best = bernoulli_extremes(2, 0, &mean, |d| d[1], Goal::Minimize).unwrap();
        assert_eq!(best.value, r(3, 8));
    }

    #[test]
    fn four_with_one_sure_even() {
        let best = bernoulli_extremes(4, 1, &MeanConstraint::Exact(r(2, 1)), even_mass, Goal::Minimize).unwrap();
        assert_eq!(best.value, r(13, 27));
        assert_eq!(best.profile, vec![r(1, 1), r(1, 3), r(1, 3), r(1, 3)]);
    }

    #[test]
    fn floats_agree_with_rationals() {
        let best = bernoulli_extremes(4, 1, &MeanConstraint::Exact(2.0f64), even_mass, Goal::Minimize).unwrap();
        assert!((best.value - 13.0 / 27.0).abs() < 1e-12);
        let most = bernoulli_extremes(4, 1, &MeanConstraint::Exact(2.0f64), even_mass, Goal::Maximize).unwrap();
        assert_eq!(most.value, 1.0);
    }
}
