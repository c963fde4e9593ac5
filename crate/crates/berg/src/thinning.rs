//! The thinning operator in action: sampling, exact conditional and
//! marginal laws, moment transfer, and two-path closure checks.
//!
//! Thinning a count X by parameters (m, r) replaces each unit of X by an
//! independent BerG(m, r) count and sums. Conditionally on X = x the result
//! is the x-fold convolution of BerG(m, r); marginally its generating
//! function is the generating function of X composed with `psi_{m,r}`.

use rand::Rng;

use crate::dist::{berg_nfold_pmf, sample_berg};
use crate::error::{Error, Result};
use crate::params::ThinningParams;
use crate::series::{compose_pmf, PmfVector};

/// Draws one thinned value: the sum of `x` independent BerG(m, r) draws.
pub fn thin_sample<R: Rng + ?Sized>(p: ThinningParams, x: u64, rng: &mut R) -> u64 {
    (0..x).map(|_| sample_berg(p, rng)).sum()
}

/// Law of the thinned count given the input count equals `x`: the x-fold
/// convolution of BerG(m, r) on `0..=k_max`.
pub fn thin_conditional_pmf(p: ThinningParams, x: u64, k_max: usize) -> Result<PmfVector> {
    let n = u32::try_from(x).map_err(|_| {
        Error::Constraint(format!("conditional law for input count {x} is out of range"))
    })?;
    Ok(berg_nfold_pmf(p, n, k_max))
}

/// Conditional mean, second moment, and variance of the thinned count given
/// the input count equals `x`:
///
/// ```text
/// mean     = m x
/// second   = (2r + 1) m x + m^2 x (x - 1)
/// variance = m (2r + 1 - m) x
/// ```
pub fn thin_conditional_moments(p: ThinningParams, x: u64) -> (f64, f64, f64) {
    let (m, r) = (p.m, p.r);
    let xf = x as f64;
    let mean = m * xf;
    let second = (2.0 * r + 1.0) * m * xf + m * m * xf * (xf - 1.0);
    let variance = m * (2.0 * r + 1.0 - m) * xf;
    (mean, second, variance)
}

/// Marginal law of the thinned count when the input follows `law`:
/// the series of `law` composed with the map `psi_{m,r}`. Equivalently the
/// mixture of conditional laws weighted by `law`; truncation mass carries
/// into the tail bound.
pub fn thin_marginal_pmf(
    p: ThinningParams,
    law: &PmfVector,
    k_max: usize,
) -> Result<PmfVector> {
    compose_pmf(law, p, k_max)
}

/// Mean and variance transfer under thinning:
///
/// ```text
/// mean     = m mean_x
/// variance = m^2 var_x + m (2r + 1 - m) mean_x
/// ```
pub fn thin_moments(p: ThinningParams, mean_x: f64, var_x: f64) -> (f64, f64) {
    let (m, r) = (p.m, p.r);
    (m * mean_x, m * m * var_x + m * (2.0 * r + 1.0 - m) * mean_x)
}

/// Two-path comparison of operator closure under composition.
#[derive(Debug, Clone)]
pub struct ComposeCheck {
    /// Thinning by `first`, then thinning the result by `second`.
    pub sequential: PmfVector,
    /// One-shot thinning by the composed parameters `first.then(second)`.
    pub direct: PmfVector,
    /// Largest entrywise difference between the two routes.
    pub max_discrepancy: f64,
}

/// Applies `first` then `second` to `law` and compares against the single
/// application of the composed parameters. The two routes agree up to
/// truncation and round-off; the report carries the worst entry gap.
pub fn operator_compose_check(
    first: ThinningParams,
    second: ThinningParams,
    law: &PmfVector,
    k_max: usize,
) -> Result<ComposeCheck> {
    let step = thin_marginal_pmf(first, law, k_max)?;
    let sequential = thin_marginal_pmf(second, &step, k_max)?;
    let direct = thin_marginal_pmf(first.then(second), law, k_max)?;
    let max_discrepancy = (0..=k_max)
        .map(|k| (sequential.get(k) - direct.get(k)).abs())
        .fold(0.0, f64::max);
    Ok(ComposeCheck {
        sequential,
        direct,
        max_discrepancy,
    })
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::berg_pmf;
    use crate::series::convolve_truncated;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn params(m: f64, r: f64) -> ThinningParams {
        ThinningParams::new(m, r).unwrap()
    }

    #[test]
    fn empty_input_thins_to_zero() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        assert_eq!(thin_sample(params(0.5, 0.3), 0, &mut rng), 0);
    }

    #[test]
    fn thin_sample_mean_matches_conditional_mean() {
        let p = params(0.5, 0.3);
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let n = 200_000usize;
        let total: u64 = (0..n).map(|_| thin_sample(p, 4, &mut rng)).sum();
        let mean = total as f64 / n as f64;
        let (expected, _, variance) = thin_conditional_moments(p, 4);
        let se = (variance / n as f64).sqrt();
        assert!(
            (mean - expected).abs() < 5.0 * se,
            "mean {mean}, expected {expected}"
        );
    }

    #[test]
    fn binomial_edge_thins_to_binomial_counts() {
        // each unit survives independently with probability m
        let p = params(0.5, 0.0);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let n = 100_000usize;
        let mut freq = [0usize; 5];
        for _ in 0..n {
            freq[thin_sample(p, 4, &mut rng) as usize] += 1;
        }
        let expected = [0.0625, 0.25, 0.375, 0.25, 0.0625];
        for (k, e) in expected.iter().enumerate() {
            let observed = freq[k] as f64 / n as f64;
            let se = (e * (1.0 - e) / n as f64).sqrt();
            assert!(
                (observed - e).abs() < 5.0 * se,
                "k = {k}: observed {observed}, expected {e}"
            );
        }
    }

    #[test]
    fn conditional_law_small_inputs() {
        let p = params(0.5, 0.3);
        let zero = thin_conditional_pmf(p, 0, 6).unwrap();
        assert_eq!(zero.get(0), 1.0);
        let one = thin_conditional_pmf(p, 1, 6).unwrap();
        let direct = berg_pmf(p, 6);
        for k in 0..=6 {
            assert!((one.get(k) - direct.get(k)).abs() < 1e-15);
        }
        let two = thin_conditional_pmf(p, 2, 6).unwrap();
        assert!((two.get(1) - 0.3641329085116067).abs() < 1e-13);
    }

    #[test]
    fn conditional_rows_are_proper_distributions() {
        let p = params(0.9, 0.6);
        for x in 0..=50u64 {
            let row = thin_conditional_pmf(p, x, 600).unwrap();
            assert!(
                (row.stored_mass() + row.tail_bound() - 1.0).abs() < 1e-9,
                "x = {x}"
            );
        }
    }

    #[test]
    fn conditional_moments_frozen_values() {
        let (mean, second, variance) = thin_conditional_moments(params(0.5, 0.3), 4);
        assert!((mean - 2.0).abs() < 1e-15);
        assert!((second - 6.2).abs() < 1e-15);
        assert!((variance - 2.2).abs() < 1e-15);
    }

    #[test]
    fn conditional_moments_match_conditional_law() {
        let p = params(0.7, 0.4);
        for x in [1u64, 3, 7] {
            let row = thin_conditional_pmf(p, x, 400).unwrap();
            let (mean, second, variance) = thin_conditional_moments(p, x);
            assert!((row.mean() - mean).abs() < 1e-8, "x = {x}");
            assert!((row.variance() - variance).abs() < 1e-8, "x = {x}");
            let second_from_row = row.variance() + row.mean() * row.mean();
            assert!((second_from_row - second).abs() < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn marginal_law_of_point_masses() {
        let p = params(0.5, 0.3);
        let at_zero = thin_marginal_pmf(p, &PmfVector::delta(0), 6).unwrap();
        assert!((at_zero.get(0) - 1.0).abs() < 1e-15);
        let at_one = thin_marginal_pmf(p, &PmfVector::delta(1), 6).unwrap();
        let direct = berg_pmf(p, 6);
        for k in 0..=6 {
            assert!((at_one.get(k) - direct.get(k)).abs() < 1e-14);
        }
    }

    #[test]
    fn marginal_of_berg_input_is_berg_with_composed_parameters() {
        let op = params(0.5, 0.3);
        let law = params(1.2, 1.0);
        let marginal = thin_marginal_pmf(op, &berg_pmf(law, 200), 80).unwrap();
        let composed = berg_pmf(op.compose(law), 80);
        for k in 0..=80 {
            assert!(
                (marginal.get(k) - composed.get(k)).abs() < 1e-10,
                "k = {k}: {} vs {}",
                marginal.get(k),
                composed.get(k)
            );
        }
    }

    #[test]
    fn marginal_equals_mixture_of_conditionals() {
        let p = params(0.8, 0.5);
        let law = berg_pmf(params(1.1, 0.9), 120);
        let marginal = thin_marginal_pmf(p, &law, 40).unwrap();
        let mut mixture = vec![0.0; 41];
        for x in 0..=law.k_max() {
            let weight = law.get(x);
            if weight == 0.0 {
                continue;
            }
            let row = thin_conditional_pmf(p, x as u64, 40).unwrap();
            for (k, slot) in mixture.iter_mut().enumerate() {
                *slot += weight * row.get(k);
            }
        }
        for (k, &mixed) in mixture.iter().enumerate() {
            assert!(
                (marginal.get(k) - mixed).abs() < 1e-10,
                "k = {k}: {} vs {mixed}",
                marginal.get(k)
            );
        }
    }

    #[test]
    fn marginal_moments_match_transfer_formulas() {
        let p = params(0.5, 0.3);
        let law = berg_pmf(params(1.2, 1.0), 400);
        let marginal = thin_marginal_pmf(p, &law, 400).unwrap();
        let (mean, variance) = thin_moments(p, law.mean(), law.variance());
        assert!((marginal.mean() - mean).abs() < 1e-8);
        assert!((marginal.variance() - variance).abs() < 1e-6);
        assert!(marginal.mean() < law.mean());
    }

    #[test]
    fn moment_transfer_frozen_values() {
        assert_eq!(thin_moments(params(0.5, 0.3), 2.0, 1.0), (1.0, 1.35));
        assert_eq!(thin_moments(params(0.5, 0.3), 0.0, 0.0), (0.0, 0.0));
        assert_eq!(thin_moments(ThinningParams::identity(), 2.0, 1.0), (2.0, 1.0));
    }

    #[test]
    fn thinning_is_additive_over_convolution() {
        let p = params(0.6, 0.8);
        let a = berg_pmf(params(0.5, 0.3), 150);
        let b = berg_pmf(params(1.0, 0.5), 150);
        let joint = thin_marginal_pmf(p, &convolve_truncated(&a, &b, 150), 60).unwrap();
        let split = convolve_truncated(
            &thin_marginal_pmf(p, &a, 150).unwrap(),
            &thin_marginal_pmf(p, &b, 150).unwrap(),
            60,
        );
        for k in 0..=60 {
            assert!(
                (joint.get(k) - split.get(k)).abs() < 1e-10,
                "k = {k}: {} vs {}",
                joint.get(k),
                split.get(k)
            );
        }
    }

    #[test]
    fn operator_splits_into_binomial_and_unit_mean_stages() {
        // (m, r) acts as the pure-survival stage (m, 0) followed by the
        // unit-mean stage (1, r), or the unit-mean stage (1, r/m) followed
        // by (m, 0).
        let (m, r) = (0.5, 0.3);
        let whole = params(m, r);
        let law = berg_pmf(params(1.2, 1.0), 200);
        let k = 60;
        let direct = thin_marginal_pmf(whole, &law, k).unwrap();

        let stage_a = thin_marginal_pmf(params(m, 0.0), &law, 200).unwrap();
        let route_a = thin_marginal_pmf(params(1.0, r), &stage_a, k).unwrap();

        let stage_b = thin_marginal_pmf(params(1.0, r / m), &law, 200).unwrap();
        let route_b = thin_marginal_pmf(params(m, 0.0), &stage_b, k).unwrap();

        for i in 0..=k {
            assert!((direct.get(i) - route_a.get(i)).abs() < 1e-10, "k = {i}");
            assert!((direct.get(i) - route_b.get(i)).abs() < 1e-10, "k = {i}");
        }
    }

    #[test]
    fn compose_check_identity_is_exact() {
        let p = params(0.5, 0.3);
        let law = berg_pmf(params(1.2, 1.0), 150);
        let report =
            operator_compose_check(p, ThinningParams::identity(), &law, 60).unwrap();
        assert!(report.max_discrepancy < 1e-12, "{}", report.max_discrepancy);
    }

    #[test]
    fn compose_check_triple_application_matches_power() {
        let p = params(0.7, 0.4);
        let law = berg_pmf(params(1.0, 0.5), 200);
        let mut sequential = law.clone();
        for _ in 0..3 {
            sequential = thin_marginal_pmf(p, &sequential, 200).unwrap();
        }
        let direct = thin_marginal_pmf(p.power(3), &law, 200).unwrap();
        for k in 0..=60 {
            assert!(
                (sequential.get(k) - direct.get(k)).abs() < 1e-10,
                "k = {k}"
            );
        }
    }

    proptest! {
        #[test]
        fn prop_compose_check_two_routes_agree(
            r1 in 0.0f64..2.0, t1 in 0.05f64..1.0,
            r2 in 0.0f64..2.0, t2 in 0.05f64..1.0,
        ) {
            let first = params(t1 * (r1 + 1.0), r1);
            let second = params(t2 * (r2 + 1.0), r2);
            let law = berg_pmf(params(0.9, 0.8), 250);
            let report = operator_compose_check(first, second, &law, 250).unwrap();
            prop_assert!(
                report.max_discrepancy < 1e-10,
                "discrepancy {}", report.max_discrepancy
            );
        }

        #[test]
        fn prop_thinning_contracts_mean(r in 0.0f64..2.0, m in 0.05f64..0.95) {
            let p = params(m, r);
            let law = berg_pmf(params(1.2, 1.0), 300);
            let thinned = thin_marginal_pmf(p, &law, 300).unwrap();
            prop_assert!(thinned.mean() < law.mean());
            prop_assert!((thinned.mean() - m * law.mean()).abs() < 1e-6);
        }
    }
}
