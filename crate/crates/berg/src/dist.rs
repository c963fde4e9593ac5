//! Count distributions tied to the linear-fractional generating function
//! family: the two-parameter BerG law, its n-fold convolutions, compound
//! negative binomial laws obtained by raising the generating function to a
//! fractional power, and the zero-modified geometric reparameterization.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};

use crate::error::{Error, Result};
use crate::params::{ThinningParams, BOUNDARY_EPS};
use crate::series::{
    compose_series, convolve_truncated, lf_power_series, LfMap, PmfVector, NEG_TOL,
};

/// Parameter scale below which the closed-form n-fold expression switches to
/// plain convolution; at this size the term `m / (r (r + 1 - m))` is no
/// longer computable to useful accuracy.
const NFOLD_DEGENERATE_EPS: f64 = 1e-10;

/// Probability mass of BerG(m, r) on `0..=k_max`.
///
/// The mass function is geometric after the origin,
///
/// ```text
/// p_0 = 1 - m / (1 + r),      p_k = m r^(k-1) / (1 + r)^(k+1)   (k >= 1),
/// ```
///
/// so the vector is filled by one multiplication per entry and the tail
/// bound is the exact geometric remainder `m/(1+r) * (r/(1+r))^k_max`.
pub fn berg_pmf(p: ThinningParams, k_max: usize) -> PmfVector {
    let (m, r) = (p.m, p.r);
    let mut probs = vec![0.0; k_max + 1];
    probs[0] = 1.0 - m / (1.0 + r);
    if k_max >= 1 {
        let mut term = m / ((1.0 + r) * (1.0 + r));
        let ratio = r / (1.0 + r);
        for entry in probs.iter_mut().skip(1) {
            *entry = term;
            term *= ratio;
        }
    }
    let tail = if k_max == 0 {
        m / (1.0 + r)
    } else {
        m / (1.0 + r) * (r / (1.0 + r)).powi(k_max as i32)
    };
    PmfVector::new(probs, tail).expect("geometric mass function is a valid pmf")
}

/// Probability mass of the n-fold convolution of BerG(m, r) on `0..=k_max`.
///
/// Away from the degenerate edges this uses the closed form
///
/// ```text
/// p_k^(n) = (1 - m/(r+1))^n (r/(r+1))^k
///           * sum_{i=0..min(k,n)} C(n,i) C(k-1,i-1) x^i,
/// x = m / (r (r + 1 - m)),
/// ```
///
/// with the prefactor folded into the first summand so every partial term
/// is a positive number bounded by the final probability; the sum is then
/// built from term-to-term ratios and never overflows. On the edges `r = 0`
/// (binomial) and `m = r + 1` (x undefined) it falls back to repeated
/// convolution of the single-fold vector.
pub fn berg_nfold_pmf(p: ThinningParams, n: u32, k_max: usize) -> PmfVector {
    if n == 0 {
        return PmfVector::delta(0).truncate(k_max);
    }
    if n == 1 {
        return berg_pmf(p, k_max);
    }
    let (m, r) = (p.m, p.r);
    if r < NFOLD_DEGENERATE_EPS || r + 1.0 - m < NFOLD_DEGENERATE_EPS {
        let base = berg_pmf(p, k_max);
        let mut acc = base.clone();
        for _ in 1..n {
            acc = convolve_truncated(&acc, &base, k_max);
        }
        return acc;
    }

    let x = m / (r * (r + 1.0 - m));
    let log_zero = (n as f64) * (1.0 - m / (r + 1.0)).ln();
    let log_ratio = (r / (r + 1.0)).ln();
    let mut probs = vec![0.0; k_max + 1];
    for (k, entry) in probs.iter_mut().enumerate() {
        let prefactor = (log_zero + (k as f64) * log_ratio).exp();
        if k == 0 {
            *entry = prefactor;
            continue;
        }
        let i_top = k.min(n as usize);
        let mut term = prefactor * (n as f64) * x;
        let mut sum = term;
        for i in 1..i_top {
            let (nf, kf, if_) = (n as f64, k as f64, i as f64);
            term *= (nf - if_) * (kf - if_) * x / ((if_ + 1.0) * if_);
            sum += term;
        }
        *entry = sum;
    }
    let tail = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    PmfVector::new(probs, tail).expect("closed-form n-fold terms are positive and sum below one")
}

/// Probability mass of CompNB(m, r, a) on `0..=k_max`.
///
/// The compound negative binomial law has generating function
/// `psi_{m,r}(s)^a` and exists exactly when `0 < m <= r`. It factors as a
/// negative binomial number of jumps, each distributed as BerG(1, r - m):
/// the outer weights `NB(1/(1+m), a)` are accumulated until their remaining
/// mass is negligible and the series is then composed with the inner map.
pub fn compnb_pmf(p: ThinningParams, shape: f64, k_max: usize) -> Result<PmfVector> {
    check_compnb(p, shape)?;
    let (m, r) = (p.m, p.r);
    // NB(success 1/(1+m), size a) weights in the jump count.
    let success = 1.0 / (1.0 + m);
    let fail = m / (1.0 + m);
    let mut weights = Vec::new();
    let mut w = success.powf(shape);
    let mut j = 0usize;
    // Collect until the weights are past their mode and negligible; for
    // large shapes the first weights underflow, so a plain size cutoff
    // would stop on the rising side.
    let mode = (shape * m).ceil() as usize;
    while j <= mode || w > 1e-18 {
        weights.push(w);
        w *= (shape + j as f64) / (j as f64 + 1.0) * fail;
        j += 1;
        if j > 2_000_000 {
            return Err(Error::Series(format!(
                "negative binomial weight series for shape {shape} did not converge"
            )));
        }
    }
    let inner = LfMap::new(1.0, r - m);
    let probs = compose_series(&weights, inner, k_max)?;
    let tail = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    PmfVector::new(probs, tail)
}

fn check_compnb(p: ThinningParams, shape: f64) -> Result<()> {
    if !(shape > 0.0 && shape.is_finite()) {
        return Err(Error::Constraint(format!(
            "compound negative binomial shape must be a positive real, got {shape}"
        )));
    }
    if p.m > p.r {
        return Err(Error::Constraint(format!(
            "psi_({}, {})^a is not a generating function: requires m <= r",
            p.m, p.r
        )));
    }
    Ok(())
}

/// Outcome of probing whether `psi_{m,r}(s)^a` has nonnegative series
/// coefficients, i.e. whether the fractional power is itself a generating
/// function.
#[derive(Debug, Clone)]
pub struct FractionalPowerReport {
    /// Power series coefficients of `psi_{m,r}(s)^a` up to the probed order.
    pub coefficients: Vec<f64>,
    /// First index carrying a genuinely negative coefficient, with its value.
    pub first_negative: Option<(usize, f64)>,
}

impl FractionalPowerReport {
    /// True when every probed coefficient is nonnegative.
    pub fn is_pmf(&self) -> bool {
        self.first_negative.is_none()
    }

    /// Value of the `order`-th derivative of the power at the origin,
    /// `order! * c_order`; a convenient witness when a coefficient fails.
    pub fn derivative_at_zero(&self, order: usize) -> f64 {
        let factorial: f64 = (1..=order).map(|i| i as f64).product();
        factorial * self.coefficients.get(order).copied().unwrap_or(0.0)
    }
}

/// Expands `psi_{m,r}(s)^a` to order `k_max` and reports the first negative
/// coefficient if any. For `m <= r` all coefficients are nonnegative; for
/// `r < m < r + 1` fractional powers can fail, e.g. `(m, r, a) =
/// (0.8, 0.2, 0.5)` already has a negative second coefficient.
pub fn fractional_power_check(
    p: ThinningParams,
    a_pow: f64,
    k_max: usize,
) -> Result<FractionalPowerReport> {
    let series = lf_power_series(LfMap::from_params(p), a_pow, k_max)?;
    let coefficients = series.coeffs;
    let first_negative = coefficients
        .iter()
        .enumerate()
        .find(|(_, &c)| c < -NEG_TOL)
        .map(|(k, &c)| (k, c));
    Ok(FractionalPowerReport {
        coefficients,
        first_negative,
    })
}

/// Maps the zero-modified geometric law ZMG(pi, mu), with generating
/// function `(1 + pi mu (1-s)) / (1 + mu (1-s))`, onto its BerG
/// representation `(m, r) = (mu (1 - pi), mu)`. Zero inflation corresponds
/// to `pi > 0`, deflation to `pi < 0`; the admissible range is `mu > 0`,
/// `-1/mu < pi < 1`.
pub fn zmg_params(pi: f64, mu: f64) -> Result<ThinningParams> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::Constraint(format!(
            "zero-modified geometric scale must be positive, got {mu}"
        )));
    }
    if !(pi > -1.0 / mu && pi < 1.0) {
        return Err(Error::Constraint(format!(
            "zero-modified geometric modification {pi} outside (-1/{mu}, 1)"
        )));
    }
    ThinningParams::new(mu * (1.0 - pi), mu)
}

/// A count distribution the toolkit can evaluate, sample, and parse from a
/// command-line descriptor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CountDistribution {
    /// BerG(m, r): the law with generating function `psi_{m,r}`.
    Berg(ThinningParams),
    /// CompNB(m, r, a): generating function `psi_{m,r}^a`, valid for `m <= r`.
    CompNb { params: ThinningParams, shape: f64 },
    /// Unit mass at a fixed count.
    PointMass(u64),
}

impl CountDistribution {
    pub fn berg(m: f64, r: f64) -> Result<Self> {
        Ok(Self::Berg(ThinningParams::new(m, r)?))
    }

    pub fn comp_nb(m: f64, r: f64, shape: f64) -> Result<Self> {
        let params = ThinningParams::new(m, r)?;
        check_compnb(params, shape)?;
        Ok(Self::CompNb { params, shape })
    }

    /// Negative binomial with success probability `p` and size `a`, realized
    /// as CompNB((1-p)/p, (1-p)/p, a).
    pub fn negative_binomial(p: f64, shape: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Constraint(format!(
                "negative binomial success probability {p} outside (0, 1]"
            )));
        }
        let odds = (1.0 - p) / p;
        if odds < BOUNDARY_EPS {
            return Err(Error::Constraint(
                "negative binomial with success probability one is a point mass; \
                 use pointmass:0 instead"
                    .to_string(),
            ));
        }
        Self::comp_nb(odds, odds, shape)
    }

    /// Zero-modified geometric ZMG(pi, mu) through its BerG representation.
    pub fn zero_modified_geometric(pi: f64, mu: f64) -> Result<Self> {
        Ok(Self::Berg(zmg_params(pi, mu)?))
    }

    pub fn point_mass(k: u64) -> Self {
        Self::PointMass(k)
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Berg(p) => p.mean(),
            Self::CompNb { params, shape } => shape * params.mean(),
            Self::PointMass(k) => *k as f64,
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            Self::Berg(p) => p.variance(),
            Self::CompNb { params, shape } => shape * params.variance(),
            Self::PointMass(_) => 0.0,
        }
    }

    /// Generating function value at `s` in `[0, 1]`.
    pub fn pgf_at(&self, s: f64) -> Result<f64> {
        match self {
            Self::Berg(p) => p.pgf_eval(s),
            Self::CompNb { params, shape } => Ok(params.pgf_eval(s)?.powf(*shape)),
            Self::PointMass(k) => {
                if !(0.0..=1.0).contains(&s) {
                    return Err(Error::OutsideUnitInterval(s));
                }
                Ok(s.powf(*k as f64))
            }
        }
    }

    /// Probability mass on `0..=k_max` with a certified tail bound.
    pub fn pmf(&self, k_max: usize) -> Result<PmfVector> {
        match self {
            Self::Berg(p) => Ok(berg_pmf(*p, k_max)),
            Self::CompNb { params, shape } => compnb_pmf(*params, *shape, k_max),
            Self::PointMass(k) => {
                let mut probs = vec![0.0; k_max + 1];
                let mut tail = 1.0;
                if (*k as usize) <= k_max {
                    probs[*k as usize] = 1.0;
                    tail = 0.0;
                }
                PmfVector::new(probs, tail)
            }
        }
    }

    /// Draws one variate.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            Self::Berg(p) => sample_berg(*p, rng),
            Self::CompNb { params, shape } => {
                // Negative binomial jump count via its gamma-Poisson mixture,
                // then that many independent BerG(1, r - m) jumps.
                let lambda = Gamma::new(*shape, params.m)
                    .expect("shape and scale validated at construction")
                    .sample(rng);
                let jumps = if lambda > 0.0 {
                    Poisson::new(lambda).expect("positive rate").sample(rng) as u64
                } else {
                    0
                };
                let inner = ThinningParams {
                    m: 1.0,
                    r: params.r - params.m,
                };
                (0..jumps).map(|_| sample_berg(inner, rng)).sum()
            }
            Self::PointMass(k) => *k,
        }
    }

    /// Draws `n` variates.
    pub fn sample_many<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<u64> {
        (0..n).map(|_| self.sample(rng)).collect()
    }

    /// Canonical descriptor, in the same grammar `parse_distribution`
    /// accepts.
    pub fn descriptor(&self) -> String {
        match self {
            Self::Berg(p) => format!("berg:{},{}", p.m, p.r),
            Self::CompNb { params, shape } => {
                format!("compnb:{},{},{}", params.m, params.r, shape)
            }
            Self::PointMass(k) => format!("pointmass:{k}"),
        }
    }
}

/// Draws one BerG(m, r) variate through its Bernoulli-geometric product
/// representation: with probability `m/(1+r)` the value is a
/// zero-truncated geometric with success probability `1/(1+r)`, otherwise
/// zero.
pub fn sample_berg<R: Rng + ?Sized>(p: ThinningParams, rng: &mut R) -> u64 {
    if rng.gen::<f64>() >= p.m / (1.0 + p.r) {
        return 0;
    }
    sample_t_geometric(p.r, rng)
}

/// Zero-truncated geometric on `{1, 2, ...}` with success probability
/// `1/(1+r)`, by inversion; `u` is kept in `(0, 1]` so the logarithm is
/// finite.
fn sample_t_geometric<R: Rng + ?Sized>(r: f64, rng: &mut R) -> u64 {
    if r <= 0.0 {
        return 1;
    }
    let u: f64 = 1.0 - rng.gen::<f64>();
    let log_ratio = (r / (1.0 + r)).ln();
    1 + (u.ln() / log_ratio).floor() as u64
}

/// Parses a distribution descriptor.
///
/// Grammar, one form per family:
///
/// ```text
/// berg:M,R          BerG(M, R)
/// compnb:M,R,A      CompNB(M, R, A)
/// nb:P,A            negative binomial (success P, size A)
/// zmg:PI,MU         zero-modified geometric
/// pointmass:K       unit mass at K
/// ```
pub fn parse_distribution(text: &str) -> Result<CountDistribution> {
    let (family, args) = text
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("descriptor '{text}' has no ':' separator")))?;
    let values: Vec<&str> = args.split(',').collect();
    let parse_f64 = |v: &str| -> Result<f64> {
        v.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("'{v}' is not a number in descriptor '{text}'")))
    };
    let expect_len = |n: usize| -> Result<()> {
        if values.len() == n {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "descriptor '{text}' needs {n} parameters, got {}",
                values.len()
            )))
        }
    };
    match family {
        "berg" => {
            expect_len(2)?;
            CountDistribution::berg(parse_f64(values[0])?, parse_f64(values[1])?)
        }
        "compnb" => {
            expect_len(3)?;
            CountDistribution::comp_nb(
                parse_f64(values[0])?,
                parse_f64(values[1])?,
                parse_f64(values[2])?,
            )
        }
        "nb" => {
            expect_len(2)?;
            CountDistribution::negative_binomial(parse_f64(values[0])?, parse_f64(values[1])?)
        }
        "zmg" => {
            expect_len(2)?;
            CountDistribution::zero_modified_geometric(parse_f64(values[0])?, parse_f64(values[1])?)
        }
        "pointmass" => {
            expect_len(1)?;
            let k = values[0].trim().parse::<u64>().map_err(|_| {
                Error::Parse(format!("'{}' is not a count in '{text}'", values[0]))
            })?;
            Ok(CountDistribution::point_mass(k))
        }
        other => Err(Error::Parse(format!(
            "unknown distribution family '{other}' (expected berg, compnb, nb, zmg, or pointmass)"
        ))),
    }
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn params(m: f64, r: f64) -> ThinningParams {
        ThinningParams::new(m, r).unwrap()
    }

    #[test]
    fn berg_pmf_matches_direct_formula() {
        let pmf = berg_pmf(params(0.5, 0.3), 8);
        assert!((pmf.get(0) - 0.6153846153846154).abs() < 1e-15);
        assert!((pmf.get(1) - 0.2958579881656805).abs() < 1e-15);
        assert!((pmf.get(2) - 0.06827492034592626).abs() < 1e-15);
        assert!((pmf.stored_mass() + pmf.tail_bound() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn berg_tail_bound_is_exact_geometric_remainder() {
        let pmf = berg_pmf(params(0.5, 0.3), 2);
        let expected = 0.5 / 1.3 * (0.3f64 / 1.3).powi(2);
        assert!((pmf.tail_bound() - expected).abs() < 1e-16);
    }

    #[test]
    fn berg_moments_match_mass_function() {
        let p = params(0.9, 1.7);
        let pmf = berg_pmf(p, 400);
        assert!((pmf.mean() - p.mean()).abs() < 1e-10);
        assert!((pmf.variance() - p.variance()).abs() < 1e-8);
    }

    #[test]
    fn berg_binomial_edge_has_two_atoms() {
        let pmf = berg_pmf(params(0.4, 0.0), 5);
        assert!((pmf.get(0) - 0.6).abs() < 1e-15);
        assert!((pmf.get(1) - 0.4).abs() < 1e-15);
        assert_eq!(pmf.get(2), 0.0);
        assert_eq!(pmf.tail_bound(), 0.0);
    }

    #[test]
    fn nfold_closed_form_matches_frozen_values() {
        let pmf = berg_nfold_pmf(params(0.5, 0.3), 2, 10);
        assert!((pmf.get(0) - 0.3786982248520710).abs() < 1e-13);
        // 2 p_0 p_1 = 0.8 / 1.3^3
        assert!((pmf.get(1) - 0.3641329085116067).abs() < 1e-13);
    }

    #[test]
    fn nfold_closed_form_agrees_with_convolution() {
        for &(m, r) in &[(0.5, 0.3), (1.2, 1.0), (0.9, 0.25), (2.0, 1.5)] {
            let p = params(m, r);
            let one = berg_pmf(p, 50);
            let mut conv = one.clone();
            for n in 2..=5u32 {
                conv = convolve_truncated(&conv, &one, 50);
                let closed = berg_nfold_pmf(p, n, 50);
                for k in 0..=50 {
                    assert!(
                        (closed.get(k) - conv.get(k)).abs() < 1e-12,
                        "(m, r) = ({m}, {r}), n = {n}, k = {k}: {} vs {}",
                        closed.get(k),
                        conv.get(k)
                    );
                }
            }
        }
    }

    #[test]
    fn nfold_binomial_edge_dispatches_to_convolution() {
        // BerG(m, 0) is Bernoulli(m), so the n-fold is binomial(n, m).
        let pmf = berg_nfold_pmf(params(0.8, 0.0), 3, 5);
        let expected = [0.008, 0.096, 0.384, 0.512];
        for (k, e) in expected.iter().enumerate() {
            assert!((pmf.get(k) - e).abs() < 1e-14, "k = {k}");
        }
        assert_eq!(pmf.get(4), 0.0);
    }

    #[test]
    fn nfold_shifted_geometric_edge_matches_shifted_negative_binomial() {
        // BerG(r+1, r) is zero-truncated geometric, so the n-fold sum is n
        // plus a negative binomial count.
        let (r, n) = (0.3f64, 3usize);
        let pmf = berg_nfold_pmf(params(1.3, 0.3), n as u32, 20);
        let succ = 1.0 / (1.0 + r);
        let fail = r / (1.0 + r);
        for k in 0..=20usize {
            let expected = if k < n {
                0.0
            } else {
                // C(k-1, n-1) succ^n fail^(k-n)
                let mut c = 1.0;
                for i in 0..(n - 1) {
                    c = c * (k - 1 - i) as f64 / (i + 1) as f64;
                }
                c * succ.powi(n as i32) * fail.powi((k - n) as i32)
            };
            assert!(
                (pmf.get(k) - expected).abs() < 1e-13,
                "k = {k}: {} vs {expected}",
                pmf.get(k)
            );
        }
    }

    #[test]
    fn nfold_zero_is_point_mass_at_origin() {
        let pmf = berg_nfold_pmf(params(0.5, 0.3), 0, 4);
        assert_eq!(pmf.get(0), 1.0);
        assert_eq!(pmf.tail_bound(), 0.0);
    }

    #[test]
    fn compnb_rejects_m_above_r() {
        assert!(compnb_pmf(params(0.8, 0.2), 0.5, 10).is_err());
        assert!(CountDistribution::comp_nb(1.2, 1.0, 2.0).is_err());
    }

    #[test]
    fn compnb_integer_shape_matches_nfold() {
        let p = params(0.2, 1.0);
        let closed = berg_nfold_pmf(p, 2, 40);
        let compound = compnb_pmf(p, 2.0, 40).unwrap();
        for k in 0..=40 {
            assert!(
                (closed.get(k) - compound.get(k)).abs() < 1e-12,
                "k = {k}: {} vs {}",
                closed.get(k),
                compound.get(k)
            );
        }
    }

    #[test]
    fn compnb_negative_binomial_case_matches_direct_formula() {
        // m = r collapses the inner jump law to a unit jump, so the
        // compound is plain negative binomial.
        let (odds, shape) = (1.5, 2.0);
        let pmf = compnb_pmf(params(odds, odds), shape, 30).unwrap();
        let succ = 1.0 / (1.0 + odds);
        let fail = odds / (1.0 + odds);
        let mut nb = succ.powf(shape);
        for k in 0..=30usize {
            assert!(
                (pmf.get(k) - nb).abs() < 1e-14,
                "k = {k}: {} vs {nb}",
                pmf.get(k)
            );
            nb *= (shape + k as f64) / (k as f64 + 1.0) * fail;
        }
    }

    #[test]
    fn compnb_pgf_agrees_with_power_of_base_pgf() {
        let p = params(0.2, 1.0);
        let shape = 1.5;
        let pmf = compnb_pmf(p, shape, 300).unwrap();
        for &s in &[0.0, 0.3, 0.7, 1.0] {
            let direct = p.pgf_eval(s).unwrap().powf(shape);
            let through_series = pmf.pgf_at(s);
            assert!(
                (direct - through_series).abs() < 1e-9 + pmf.tail_bound(),
                "s = {s}: {direct} vs {through_series}"
            );
        }
    }

    #[test]
    fn compnb_moments() {
        let d = CountDistribution::comp_nb(0.2, 1.0, 1.5).unwrap();
        assert!((d.mean() - 0.3).abs() < 1e-15);
        assert!((d.variance() - 0.84).abs() < 1e-15);
        let pmf = d.pmf(300).unwrap();
        assert!((pmf.mean() - 0.3).abs() < 1e-10);
        assert!((pmf.variance() - 0.84).abs() < 1e-8);
    }

    #[test]
    fn fractional_power_fails_for_m_above_r() {
        // The half power of psi_{0.8, 0.2} is not a generating function:
        // its second derivative at the origin is negative.
        let report = fractional_power_check(params(0.8, 0.2), 0.5, 16).unwrap();
        assert!(!report.is_pmf());
        let (index, _) = report.first_negative.unwrap();
        assert_eq!(index, 2);
        let second = report.derivative_at_zero(2);
        assert!(
            (second - (-0.24056)).abs() < 1e-4,
            "second derivative at zero: {second}"
        );
    }

    #[test]
    fn fractional_power_valid_on_compound_region() {
        let report = fractional_power_check(params(0.2, 1.0), 0.5, 64).unwrap();
        assert!(report.is_pmf(), "{:?}", report.first_negative);
    }

    #[test]
    fn zmg_reparameterization_matches_frozen_pairs() {
        let p = zmg_params(0.5, 2.0).unwrap();
        assert!((p.m - 1.0).abs() < 1e-15);
        assert!((p.r - 2.0).abs() < 1e-15);
        let q = zmg_params(-0.25, 2.0).unwrap();
        assert!((q.m - 2.5).abs() < 1e-15);
        assert!((q.r - 2.0).abs() < 1e-15);
    }

    #[test]
    fn zmg_pgf_matches_modified_geometric_form() {
        let (pi, mu) = (0.5, 2.0);
        let p = zmg_params(pi, mu).unwrap();
        for &s in &[0.0, 0.3, 0.9, 1.0] {
            let direct = (1.0 + pi * mu * (1.0 - s)) / (1.0 + mu * (1.0 - s));
            assert!((p.pgf_eval(s).unwrap() - direct).abs() < 1e-14, "s = {s}");
        }
    }

    #[test]
    fn zmg_rejects_out_of_range_modification() {
        assert!(zmg_params(1.0, 2.0).is_err());
        assert!(zmg_params(-0.6, 2.0).is_err());
        assert!(zmg_params(0.5, 0.0).is_err());
    }

    #[test]
    fn negative_binomial_maps_to_equal_parameter_compound() {
        let d = CountDistribution::negative_binomial(0.4, 2.0).unwrap();
        match d {
            CountDistribution::CompNb { params, shape } => {
                assert!((params.m - 1.5).abs() < 1e-12);
                assert!((params.r - 1.5).abs() < 1e-12);
                assert_eq!(shape, 2.0);
            }
            other => panic!("expected a compound law, got {other:?}"),
        }
        let pmf = d.pmf(5).unwrap();
        assert!((pmf.get(0) - 0.16).abs() < 1e-14);
        assert!((pmf.get(1) - 0.192).abs() < 1e-14);
    }

    #[test]
    fn point_mass_beyond_truncation_is_all_tail() {
        let d = CountDistribution::point_mass(9);
        let pmf = d.pmf(4).unwrap();
        assert_eq!(pmf.stored_mass(), 0.0);
        assert_eq!(pmf.tail_bound(), 1.0);
        let held = d.pmf(9).unwrap();
        assert_eq!(held.get(9), 1.0);
    }

    #[test]
    fn berg_sampler_matches_moments() {
        let d = CountDistribution::berg(0.5, 0.3).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let n = 200_000usize;
        let draws = d.sample_many(&mut rng, n);
        let mean = draws.iter().map(|&x| x as f64).sum::<f64>() / n as f64;
        let var = draws
            .iter()
            .map(|&x| (x as f64 - mean).powi(2))
            .sum::<f64>()
            / (n - 1) as f64;
        // five standard errors of the mean
        let se = (d.variance() / n as f64).sqrt();
        assert!((mean - d.mean()).abs() < 5.0 * se, "mean {mean}");
        assert!((var - d.variance()).abs() < 0.05, "variance {var}");
    }

    #[test]
    fn berg_sampler_matches_pmf_at_small_counts() {
        let d = CountDistribution::berg(1.2, 1.0).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let n = 200_000usize;
        let mut freq = [0usize; 3];
        for _ in 0..n {
            let x = d.sample(&mut rng) as usize;
            if x < 3 {
                freq[x] += 1;
            }
        }
        let pmf = d.pmf(4).unwrap();
        for k in 0..3 {
            let observed = freq[k] as f64 / n as f64;
            let expected = pmf.get(k);
            let se = (expected * (1.0 - expected) / n as f64).sqrt();
            assert!(
                (observed - expected).abs() < 5.0 * se,
                "k = {k}: observed {observed}, expected {expected}"
            );
        }
    }

    #[test]
    fn compnb_sampler_matches_moments() {
        let d = CountDistribution::comp_nb(0.2, 1.0, 1.5).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let n = 200_000usize;
        let draws = d.sample_many(&mut rng, n);
        let mean = draws.iter().map(|&x| x as f64).sum::<f64>() / n as f64;
        let var = draws
            .iter()
            .map(|&x| (x as f64 - mean).powi(2))
            .sum::<f64>()
            / (n - 1) as f64;
        let se = (d.variance() / n as f64).sqrt();
        assert!((mean - d.mean()).abs() < 5.0 * se, "mean {mean}");
        assert!((var - d.variance()).abs() < 0.06, "variance {var}");
    }

    #[test]
    fn descriptors_parse_and_round_trip() {
        let d = parse_distribution("berg:0.5,0.3").unwrap();
        assert_eq!(d, CountDistribution::berg(0.5, 0.3).unwrap());
        assert_eq!(parse_distribution(&d.descriptor()).unwrap(), d);

        let c = parse_distribution("compnb:0.2,1.0,1.5").unwrap();
        assert_eq!(c, CountDistribution::comp_nb(0.2, 1.0, 1.5).unwrap());

        let nb = parse_distribution("nb:0.4,2").unwrap();
        assert_eq!(nb, CountDistribution::negative_binomial(0.4, 2.0).unwrap());

        let z = parse_distribution("zmg:0.5,2").unwrap();
        assert_eq!(z, CountDistribution::berg(1.0, 2.0).unwrap());

        let p = parse_distribution("pointmass:3").unwrap();
        assert_eq!(p, CountDistribution::point_mass(3));
    }

    #[test]
    fn malformed_descriptors_are_rejected() {
        for text in [
            "berg",
            "berg:0.5",
            "berg:0.5,0.3,1",
            "berg:zero,0.3",
            "poisson:1.0",
            "pointmass:-1",
            "compnb:0.8,0.2,0.5",
        ] {
            assert!(parse_distribution(text).is_err(), "accepted '{text}'");
        }
    }

    proptest! {
        #[test]
        fn prop_nfold_closed_form_matches_convolution(
            r in 1e-6f64..3.0,
            t in 0.01f64..0.999,
            n in 2u32..5,
        ) {
            let p = params(t * (r + 1.0), r);
            let one = berg_pmf(p, 30);
            let mut conv = one.clone();
            for _ in 1..n {
                conv = convolve_truncated(&conv, &one, 30);
            }
            let closed = berg_nfold_pmf(p, n, 30);
            for k in 0..=30 {
                prop_assert!(
                    (closed.get(k) - conv.get(k)).abs() < 1e-11,
                    "n = {}, k = {}: {} vs {}", n, k, closed.get(k), conv.get(k)
                );
            }
        }

        #[test]
        fn prop_compnb_coefficients_nonnegative(
            r in 0.05f64..3.0,
            frac in 0.01f64..1.0,
            shape in 0.05f64..4.0,
        ) {
            let p = params(frac * r, r);
            let pmf = compnb_pmf(p, shape, 80).unwrap();
            for k in 0..=80 {
                prop_assert!(pmf.get(k) >= 0.0, "k = {}: {}", k, pmf.get(k));
            }
            prop_assert!((pmf.stored_mass() + pmf.tail_bound() - 1.0).abs() < 1e-9);
        }

        #[test]
        fn prop_berg_sampler_hits_support(m in 0.1f64..2.0, r in 1.0f64..2.0) {
            let p = params(m, r);
            let mut rng = ChaCha12Rng::seed_from_u64(5);
            let d = CountDistribution::Berg(p);
            let mut saw_zero = false;
            let mut saw_positive = false;
            for _ in 0..400 {
                match d.sample(&mut rng) {
                    0 => saw_zero = true,
                    _ => saw_positive = true,
                }
            }
            prop_assert!(saw_zero && saw_positive);
        }
    }
}
