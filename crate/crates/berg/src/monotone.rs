//! Monotone-class verdicts and constructors for thinned count laws.
//!
//! A pmf `p` is alpha-monotone when `(n + alpha) p_n >= (n + 1) p_{n+1}` for
//! every `n`; equivalently the law is a binomial thinning of some count law
//! by a random fraction `M` with density `alpha m^(alpha-1)` on `(0, 1)`.
//! Promoting the fraction to a pair `(M, R)`, with `M` power-distributed as
//! above and `R` exponential with mean `theta`, yields the joint monotone
//! class. Membership is decided by the recovered sequence
//!
//! ```text
//! q_n = (2 theta n + 1) p_n - theta ((n + 1) p_{n+1} + (n - 1) p_{n-1})
//! ```
//!
//! with `p_{-1} = 0`: the law belongs to the class exactly when `q` is a pmf
//! and alpha-monotone, and `q` is then the mixed base law itself. Fixing one
//! coordinate of the pair gives two marginal classes, decided by undoing the
//! fixed stage: the fixed-`r` class de-composes through the formal inverse
//! of the geometric stage, the fixed-`m` class de-thins the `q` sequence
//! through the affine inverse `s -> 1 + (s - 1)/m`.
//!
//! Everything here operates on truncated vectors, so a verdict distinguishes
//! three outcomes: certified (`holds`), refuted with a concrete witness, and
//! `inconclusive` when the stored resolution cannot support either claim
//! (coarse tail, diverging formal inverse, or de-thinned mass that escapes
//! the numerically trustworthy prefix). Inequality tolerances grow with the
//! index to absorb the round-off of the defining linear combinations; the
//! growth rates are documented on the check functions and make deep-index
//! comparisons deliberately forgiving rather than falsely damning.

use crate::error::{Error, Result};
use crate::params::{ThinningParams, BOUNDARY_EPS};
use crate::quad::{adaptive_quadrature_vec, QuadratureOptions};
use crate::series::{compose_series, LfMap, PmfVector};

/// Base slack tolerance for every monotonicity inequality, matching the
/// scale of unit-mass pmfs at small indices.
pub const SLACK_TOL: f64 = 1e-12;

/// Per-entry noise allowance for raw pmf inputs.
const RAW_ENTRY_NOISE: f64 = 1e-15;

/// Per-entry noise allowance for `q` sequences; sized to cover inputs
/// produced by the quadrature constructors in this module.
const Q_ENTRY_NOISE: f64 = 1e-13;

/// Flat negativity tolerance for de-thinned coefficient prefixes.
const DETHIN_NEG_TOL: f64 = 1e-10;

/// Agreement threshold of the input-truncation sensitivity probe.
const SENS_TOL: f64 = 1e-11;

/// A stored tail above this cannot faithfully represent the law at the
/// working tolerances, so passing verdicts degrade to inconclusive.
const COARSE_TAIL_TOL: f64 = 1e-8;

/// Recovered mass that must be visible inside the trustworthy prefix for a
/// de-thinning verdict to count as conclusive.
const MASS_DEFICIT_TOL: f64 = 1e-6;

/// Noise level at which a de-thinned index stops being trustworthy.
const NOISE_PREFIX_TOL: f64 = 1e-8;

/// Hard ceiling for automatic truncation growth in the constructive checks.
pub const MAX_AUTO_K: usize = 4096;

/// Left endpoint of the exponential-mixture quadrature; the remaining head
/// integrates to less than this and concentrates at the origin.
const HEAD_U: f64 = 1e-16;

/// Mixing-pair parameters: `alpha` is the power-law exponent of the random
/// fraction `M` on `(0, 1)`, `theta` the mean of the exponential shift `R`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonotoneParams {
    pub alpha: f64,
    pub theta: f64,
}

impl MonotoneParams {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Constraint(format!(
                "power exponent alpha = {alpha} must be finite and positive"
            )));
        }
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::Constraint(format!(
                "exponential mean theta = {theta} must be finite and positive"
            )));
        }
        Ok(Self { alpha, theta })
    }
}

/// Outcome of a monotonicity check.
///
/// `holds` means the property is certified on the stored data at the working
/// tolerances. A refutation carries `witness`, the index of the first
/// violated inequality, and `violated_value`, its signed slack. When neither
/// certification nor refutation is supportable (tail too coarse, formal
/// inverse divergent, recovered mass outside the trustworthy prefix) the
/// verdict has `holds = false` and `inconclusive = true` with no witness;
/// `witness.is_some()` exactly when `!holds && !inconclusive`.
///
/// `min_slack` is the smallest signed slack over every inequality that was
/// evaluated (zero if none were), so callers can see how close a pass came.
/// `q_sequence` carries the recovered mixing law and is only present on
/// certified verdicts.
#[derive(Clone, Debug)]
pub struct MonotonicityVerdict {
    pub holds: bool,
    pub inconclusive: bool,
    pub witness: Option<usize>,
    pub violated_value: Option<f64>,
    pub min_slack: f64,
    pub q_sequence: Option<PmfVector>,
}

impl MonotonicityVerdict {
    fn pass(min_slack: f64, q_sequence: Option<PmfVector>) -> Self {
        Self {
            holds: true,
            inconclusive: false,
            witness: None,
            violated_value: None,
            min_slack,
            q_sequence,
        }
    }

    fn fail(witness: usize, value: f64, min_slack: f64) -> Self {
        Self {
            holds: false,
            inconclusive: false,
            witness: Some(witness),
            violated_value: Some(value),
            min_slack,
            q_sequence: None,
        }
    }

    fn undecided(min_slack: f64) -> Self {
        Self {
            holds: false,
            inconclusive: true,
            witness: None,
            violated_value: None,
            min_slack,
            q_sequence: None,
        }
    }
}

/// First violation (index, signed slack) and minimum slack of the pairwise
/// inequalities `(n + alpha) v_n >= (n + 1) v_{n+1}`, with an index-dependent
/// per-entry noise allowance.
fn alpha_scan(
    v: &[f64],
    alpha: f64,
    entry_noise: impl Fn(usize) -> f64,
) -> (Option<(usize, f64)>, f64) {
    let mut min_slack = f64::INFINITY;
    for n in 0..v.len().saturating_sub(1) {
        let nf = n as f64;
        let slack = (nf + alpha) * v[n] - (nf + 1.0) * v[n + 1];
        min_slack = min_slack.min(slack);
        let tol = SLACK_TOL + (nf + alpha + 1.0) * entry_noise(n + 1);
        if slack < -tol {
            return (Some((n, slack)), min_slack);
        }
    }
    if !min_slack.is_finite() {
        min_slack = 0.0;
    }
    (None, min_slack)
}

fn recovered_pmf(v: &[f64]) -> Option<PmfVector> {
    let cleaned: Vec<f64> = v.iter().map(|&x| x.max(0.0)).collect();
    let sum: f64 = cleaned.iter().sum();
    PmfVector::new(cleaned, (1.0 - sum).max(0.0)).ok()
}

/// Checks `(n + alpha) p_n >= (n + 1) p_{n+1}` over the stored range.
///
/// The slack tolerance at pair `n` is `1e-12 + (n + alpha + 1) * (n + 1) *
/// 1e-15`, the round-off scale of the two products. A passing verdict is
/// downgraded to inconclusive when the tail bound exceeds `1e-8`: the
/// inequalities beyond the stored range are then genuinely unresolved.
pub fn alpha_monotone_check(pmf: &PmfVector, alpha: f64) -> Result<MonotonicityVerdict> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Constraint(format!(
            "power exponent alpha = {alpha} must be finite and positive"
        )));
    }
    let (violation, min_slack) = alpha_scan(pmf.probs(), alpha, |k| RAW_ENTRY_NOISE * k as f64);
    if let Some((n, slack)) = violation {
        return Ok(MonotonicityVerdict::fail(n, slack, min_slack));
    }
    if pmf.tail_bound() > COARSE_TAIL_TOL {
        return Ok(MonotonicityVerdict::undecided(min_slack));
    }
    Ok(MonotonicityVerdict::pass(min_slack, None))
}

/// The recovered sequence `q_n = (2 theta n + 1) p_n - theta ((n + 1) p_{n+1}
/// + (n - 1) p_{n-1})` with `p_{-1} = 0`.
///
/// For a complete input (zero tail bound) the sequence is exact and extends
/// one index past the stored support, which is where finite-support laws
/// reveal their mandatory negative entry; the returned length is `len + 1`.
/// For a truncated input only the first `len - 1` entries are determined by
/// the stored data and the rest are withheld.
pub fn mr_q_sequence(pmf: &PmfVector, theta: f64) -> Vec<f64> {
    let p = pmf.probs();
    let l = p.len();
    let count = if pmf.tail_bound() == 0.0 {
        l + 1
    } else {
        l.saturating_sub(1)
    };
    let at = |i: isize| {
        if i < 0 || i as usize >= l {
            0.0
        } else {
            p[i as usize]
        }
    };
    (0..count)
        .map(|n| {
            let nf = n as f64;
            (2.0 * theta * nf + 1.0) * at(n as isize)
                - theta * ((nf + 1.0) * at(n as isize + 1) + (nf - 1.0) * at(n as isize - 1))
        })
        .collect()
}

/// Joint-class membership: the law is a mixture of geometric-shifted
/// binomial thinnings over the `(M, R)` pair exactly when its `q` sequence
/// is a pmf and alpha-monotone.
///
/// Negativity of `q_n` is tested against `1e-12 + (4 theta (n + 1) + 1) *
/// 1e-13`, the noise of the defining combination when the entries carry
/// quadrature-level error; the alpha inequalities on `q` scale the same
/// allowance by the pair coefficients. On a certified verdict `q_sequence`
/// holds the recovered mixing law.
pub fn mr_monotone_check(pmf: &PmfVector, mp: MonotoneParams) -> Result<MonotonicityVerdict> {
    MonotoneParams::new(mp.alpha, mp.theta)?;
    let q = mr_q_sequence(pmf, mp.theta);
    if q.is_empty() {
        return Ok(MonotonicityVerdict::undecided(0.0));
    }
    let q_noise = |k: usize| Q_ENTRY_NOISE * (4.0 * mp.theta * k as f64 + 1.0);
    let mut min_slack = f64::INFINITY;
    for (n, &qn) in q.iter().enumerate() {
        min_slack = min_slack.min(qn);
        if qn < -(SLACK_TOL + q_noise(n + 1)) {
            return Ok(MonotonicityVerdict::fail(n, qn, min_slack.min(qn)));
        }
    }
    let (violation, alpha_min) = alpha_scan(&q, mp.alpha, q_noise);
    min_slack = min_slack.min(alpha_min);
    if let Some((n, slack)) = violation {
        return Ok(MonotonicityVerdict::fail(n, slack, min_slack.min(slack)));
    }
    if pmf.tail_bound() > COARSE_TAIL_TOL {
        return Ok(MonotonicityVerdict::undecided(min_slack));
    }
    Ok(MonotonicityVerdict::pass(min_slack, recovered_pmf(&q)))
}

/// The law of a binomial thinning of `w` by the power fraction with exponent
/// `alpha`: entry `k` collects `C(j, k) alpha B(k + alpha, j - k + 1)` from
/// each support point `j` of `w`.
///
/// Both Beta-weight recursions (`w_{j,0}` across rows, then the ratio
/// `(k + alpha)/(k + 1)` along a row) use only factors in `(0, 1]`, so the
/// evaluation is exact to round-off with no special-function calls; each
/// row sums to one by construction.
pub fn power_mixture(w: &PmfVector, alpha: f64) -> Result<PmfVector> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Constraint(format!(
            "power exponent alpha = {alpha} must be finite and positive"
        )));
    }
    let probs = w.probs();
    let mut out = vec![0.0; probs.len()];
    let mut base = 1.0;
    for (j, &wj) in probs.iter().enumerate() {
        if j > 0 {
            base *= j as f64 / (alpha + j as f64);
        }
        if wj <= 0.0 {
            continue;
        }
        let mut wk = base;
        out[0] += wj * wk;
        for k in 0..j {
            wk *= (k as f64 + alpha) / (k as f64 + 1.0);
            out[k + 1] += wj * wk;
        }
    }
    let sum: f64 = out.iter().sum();
    PmfVector::new(out, (1.0 - sum).max(0.0))
}

/// The law of `(m, R) thinned into w` with `R` exponential of mean `theta`:
/// the integral over `r` of the composed pmf, taken along the substitution
/// `r = -theta ln(u)` so the domain becomes the unit interval.
///
/// The integrand is the full composed coefficient vector and the adaptive
/// rule controls the max-norm error, so every entry inherits the requested
/// tolerance. The head `[0, 1e-16]`, where `r` diverges and the composed
/// law collapses to a point mass at zero, is accounted for by a direct
/// point-mass correction of the same size.
pub fn exp_mixture(
    w: &PmfVector,
    m: f64,
    theta: f64,
    k_max: usize,
    opts: &QuadratureOptions,
) -> Result<PmfVector> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::Constraint(format!(
            "exponential mean theta = {theta} must be finite and positive"
        )));
    }
    ThinningParams::new(m, 0.0)?;
    let probs = w.probs().to_vec();
    let integrand = move |u: f64, slot: &mut [f64]| {
        let r = -theta * u.ln();
        match compose_series(&probs, LfMap::new(m, r), k_max) {
            Ok(v) => slot.copy_from_slice(&v),
            Err(_) => slot[0] = f64::NAN,
        }
    };
    let (mut vals, _) = adaptive_quadrature_vec(integrand, HEAD_U, 1.0, k_max + 1, opts)?;
    vals[0] += HEAD_U;
    let cleaned: Vec<f64> = vals.iter().map(|&v| v.max(0.0)).collect();
    let sum: f64 = cleaned.iter().sum();
    PmfVector::new(cleaned, (1.0 - sum).max(0.0))
}

fn tight_quadrature() -> QuadratureOptions {
    QuadratureOptions {
        abs_tol: 1e-13,
        max_intervals: 400_000,
    }
}

/// Constructs a member of the joint monotone class by mixing thinnings of
/// `w` over the `(M, R)` pair: the power stage is evaluated in closed form
/// through [`power_mixture`], the exponential stage by the substituted
/// quadrature of [`exp_mixture`].
pub fn mr_monotone_synthesize(
    w: &PmfVector,
    mp: MonotoneParams,
    k_max: usize,
) -> Result<PmfVector> {
    let inner = power_mixture(w, mp.alpha)?;
    exp_mixture(&inner, 1.0, mp.theta, k_max, &tight_quadrature())
}

/// Index at which the modeled round-off `noise_base * growth^k` of an
/// inverse stage crosses the trustworthiness threshold.
fn noise_prefix(noise_base: f64, growth: f64) -> usize {
    if noise_base > NOISE_PREFIX_TOL {
        return 0;
    }
    if growth <= 1.0 {
        return usize::MAX / 2;
    }
    ((NOISE_PREFIX_TOL / noise_base).ln() / growth.ln()).floor() as usize
}

/// De-thins `input` through `inv` and returns the coefficients together
/// with the length of their trustworthy prefix.
///
/// The composition is truncated just past the noise horizon, since deeper
/// coefficients are both useless and prone to overflowing the series
/// blow-up guard under the `growth^k` amplification. The prefix is the
/// minimum of that horizon and an input-truncation sensitivity probe:
/// recover once more with the top eighth of the input dropped and keep the
/// agreeing entries. `None` means the inverse stage is not usable at this
/// truncation and the caller should go inconclusive.
fn dethin_prefix(
    input: &[f64],
    truncated: bool,
    inv: LfMap,
    horizon: usize,
) -> Option<(Vec<f64>, usize)> {
    if horizon == 0 {
        return None;
    }
    let k_out = (horizon + 16).min(input.len().saturating_sub(1));
    let recovered = compose_series(input, inv, k_out).ok()?;
    let mut limit = recovered.len();
    if truncated && input.len() >= 2 {
        let keep = input.len() - (input.len() / 8).max(1);
        let short = compose_series(&input[..keep.max(1)], inv, k_out).ok()?;
        limit = recovered
            .iter()
            .zip(&short)
            .take_while(|(a, b)| (**a - **b).abs() <= SENS_TOL)
            .count();
    }
    let prefix = limit.min(horizon).min(recovered.len());
    Some((recovered, prefix))
}

/// Marginal membership with the geometric shift fixed at `r`: the law must
/// be the `(1, r)` thinning of some alpha-monotone law, so the stored
/// coefficients are pushed through the formal inverse of that stage and the
/// recovered prefix is tested for pmf-ness and alpha-monotonicity.
///
/// `r = 0` makes the inner stage the identity and reduces exactly to
/// [`alpha_monotone_check`]. The formal inverse expands the unit disk, so
/// recovered entries degrade geometrically with the index: checks run on
/// the reliable prefix (see the module docs), negativity is tested against
/// `1e-10` plus the modeled noise, and the verdict is inconclusive when the
/// inverse series diverges at this truncation or when more than `1e-6` of
/// the recovered mass lies beyond the trustworthy prefix.
pub fn fixed_r_monotone_check(pmf: &PmfVector, alpha: f64, r: f64) -> Result<MonotonicityVerdict> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Constraint(format!(
            "power exponent alpha = {alpha} must be finite and positive"
        )));
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::Constraint(format!(
            "geometric shift r = {r} must be finite and nonnegative"
        )));
    }
    if r <= BOUNDARY_EPS {
        return alpha_monotone_check(pmf, alpha);
    }
    let l = pmf.len();
    let inv = LfMap::new(1.0, r).inverse();
    let growth = if r < 1.0 {
        (1.0 / (1.0 - r)).max(1.0)
    } else {
        1.0 + r
    };
    let noise_base = l as f64 * RAW_ENTRY_NOISE;
    let horizon = noise_prefix(noise_base, growth);
    let (recovered, prefix) =
        match dethin_prefix(pmf.probs(), pmf.tail_bound() > 0.0, inv, horizon) {
            Some(pair) => pair,
            None => return Ok(MonotonicityVerdict::undecided(0.0)),
        };
    if prefix == 0 {
        return Ok(MonotonicityVerdict::undecided(0.0));
    }
    let head = &recovered[..prefix];
    let noise = {
        let mut scale = vec![0.0; prefix + 1];
        let mut g = noise_base;
        for s in scale.iter_mut() {
            *s = g;
            g *= growth;
        }
        scale
    };
    let mut min_slack = f64::INFINITY;
    for (k, &v) in head.iter().enumerate() {
        min_slack = min_slack.min(v);
        if v < -(DETHIN_NEG_TOL + noise[k]) {
            return Ok(MonotonicityVerdict::fail(k, v, min_slack.min(v)));
        }
    }
    let (violation, alpha_min) = alpha_scan(head, alpha, |k| {
        DETHIN_NEG_TOL + noise[k.min(prefix)]
    });
    min_slack = min_slack.min(alpha_min);
    if let Some((n, slack)) = violation {
        return Ok(MonotonicityVerdict::fail(n, slack, min_slack.min(slack)));
    }
    let visible: f64 = head.iter().map(|&v| v.max(0.0)).sum();
    if pmf.tail_bound() > COARSE_TAIL_TOL
        || (visible + pmf.tail_bound() - 1.0).abs() > MASS_DEFICIT_TOL
    {
        return Ok(MonotonicityVerdict::undecided(min_slack));
    }
    Ok(MonotonicityVerdict::pass(min_slack, recovered_pmf(head)))
}

/// Marginal membership with the thinning fraction fixed at `m`: the `q`
/// sequence must be the `m`-binomial thinning of some pmf, so after the
/// negativity scan it is de-thinned through the affine inverse
/// `s -> 1 + (s - 1)/m` and the recovered prefix tested for nonnegativity.
///
/// `m = 1` leaves nothing to undo and the verdict rests on the `q` scan
/// alone. The affine inverse amplifies the entry noise of `q`, handled by
/// the same reliable-prefix bookkeeping as the fixed-`r` check with a
/// window-weighted noise model (see the inline comment); `m <= 1/2` makes
/// that amplification unbounded and the verdict inconclusive. On success
/// `q_sequence` carries the recovered base law.
pub fn fixed_m_monotone_check(pmf: &PmfVector, m: f64, theta: f64) -> Result<MonotonicityVerdict> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::Constraint(format!(
            "exponential mean theta = {theta} must be finite and positive"
        )));
    }
    ThinningParams::new(m, 0.0)?;
    let q = mr_q_sequence(pmf, theta);
    if q.is_empty() {
        return Ok(MonotonicityVerdict::undecided(0.0));
    }
    let q_noise = |k: usize| Q_ENTRY_NOISE * (4.0 * theta * k as f64 + 1.0);
    let mut min_slack = f64::INFINITY;
    for (n, &qn) in q.iter().enumerate() {
        min_slack = min_slack.min(qn);
        if qn < -(SLACK_TOL + q_noise(n + 1)) {
            return Ok(MonotonicityVerdict::fail(n, qn, min_slack.min(qn)));
        }
    }
    if m >= 1.0 - BOUNDARY_EPS {
        if pmf.tail_bound() > COARSE_TAIL_TOL {
            return Ok(MonotonicityVerdict::undecided(min_slack));
        }
        return Ok(MonotonicityVerdict::pass(min_slack, recovered_pmf(&q)));
    }
    if m <= 0.5 + BOUNDARY_EPS {
        return Ok(MonotonicityVerdict::undecided(min_slack));
    }
    let inv = LfMap::new(m, 0.0).inverse();
    // The de-thinned coefficient at depth k is a binomially weighted sum of
    // the q entries near j = k * m / (2m - 1), scaled by m^{-k}. With entry
    // noise of effectively independent sign, root-mean-square accumulation
    // over that window grows by m / (2m - 1) per index, which is the model
    // used for both the horizon and the per-entry tolerance below. At
    // m <= 1/2 the window sums diverge and no prefix is certifiable, hence
    // the early inconclusive return.
    let window = m / (2.0 * m - 1.0);
    let noise_at =
        |k: usize| q_noise((window * k as f64).ceil() as usize + 1) * window.powi(k as i32);
    let horizon = {
        let mut h = 0usize;
        while h < q.len() && noise_at(h) <= NOISE_PREFIX_TOL {
            h += 1;
        }
        h
    };
    let (recovered, prefix) = match dethin_prefix(&q, pmf.tail_bound() > 0.0, inv, horizon) {
        Some(pair) => pair,
        None => return Ok(MonotonicityVerdict::undecided(min_slack)),
    };
    if prefix == 0 {
        return Ok(MonotonicityVerdict::undecided(min_slack));
    }
    for (k, &v) in recovered[..prefix].iter().enumerate() {
        min_slack = min_slack.min(v);
        if v < -(DETHIN_NEG_TOL + noise_at(k)) {
            return Ok(MonotonicityVerdict::fail(k, v, min_slack.min(v)));
        }
    }
    let visible: f64 = recovered[..prefix].iter().map(|&v| v.max(0.0)).sum();
    if pmf.tail_bound() > COARSE_TAIL_TOL
        || (visible + pmf.tail_bound() - 1.0).abs() > MASS_DEFICIT_TOL
    {
        return Ok(MonotonicityVerdict::undecided(min_slack));
    }
    Ok(MonotonicityVerdict::pass(
        min_slack,
        recovered_pmf(&recovered[..prefix]),
    ))
}

/// Thinning stability of the joint class, exercised end to end: an
/// alpha-monotone input mixed over `(m, R)` must land in the joint class
/// with the same `(alpha, theta)`.
///
/// The construction truncation starts at a tail-aware default and doubles
/// (up to 4096) while the verdict is inconclusive, since a too-short
/// mixture is the only benign way this check can fail to decide.
pub fn thinned_alpha_check(
    alpha: f64,
    theta: f64,
    m: f64,
    w: &PmfVector,
) -> Result<MonotonicityVerdict> {
    let mp = MonotoneParams::new(alpha, theta)?;
    let base = alpha_monotone_check(w, alpha)?;
    if !base.holds {
        return Err(Error::Constraint(format!(
            "input law must be alpha-monotone at alpha = {alpha} (witness {:?})",
            base.witness
        )));
    }
    let mut k = (256.0 * theta.max(1.0)) as usize + 2 * w.len();
    loop {
        let mixed = exp_mixture(w, m, theta, k, &tight_quadrature())?;
        let verdict = mr_monotone_check(&mixed, mp)?;
        if !verdict.inconclusive || k >= MAX_AUTO_K {
            return Ok(verdict);
        }
        k = (2 * k).min(MAX_AUTO_K);
    }
}

/// Parameters under which the convolution of two joint-class members stays
/// in the class: `alpha = alpha_1 + alpha_2 + 1/theta_1 + 1/theta_2` and
/// the harmonic-sum mean `theta = theta_1 theta_2 / (theta_1 + theta_2)`.
pub fn convolution_params(a: MonotoneParams, b: MonotoneParams) -> MonotoneParams {
    MonotoneParams {
        alpha: a.alpha + b.alpha + 1.0 / a.theta + 1.0 / b.theta,
        theta: a.theta * b.theta / (a.theta + b.theta),
    }
}

/// Which coordinate of the mixing pair a marginal convolution keeps fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarginalKind {
    FixedR,
    FixedM,
}

/// Convolution arithmetic for the marginal classes. For `FixedR` the
/// arguments are `(alpha_i, r)` pairs and the exponents add; for `FixedM`
/// they are `(theta_i, m)` pairs and the means combine harmonically. The
/// shared coordinate must agree to within `1e-12` relative.
pub fn marginal_convolution_params(
    kind: MarginalKind,
    first: (f64, f64),
    second: (f64, f64),
) -> Result<(f64, f64)> {
    let agree = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
    match kind {
        MarginalKind::FixedR => {
            let (a1, r1) = first;
            let (a2, r2) = second;
            if !(a1.is_finite() && a1 > 0.0 && a2.is_finite() && a2 > 0.0) {
                return Err(Error::Constraint(
                    "power exponents must be finite and positive".into(),
                ));
            }
            if !(r1.is_finite() && r1 >= 0.0 && agree(r1, r2)) {
                return Err(Error::Constraint(format!(
                    "shared geometric shift disagrees: r1 = {r1}, r2 = {r2}"
                )));
            }
            Ok((a1 + a2, r1))
        }
        MarginalKind::FixedM => {
            let (t1, m1) = first;
            let (t2, m2) = second;
            if !(t1.is_finite() && t1 > 0.0 && t2.is_finite() && t2 > 0.0) {
                return Err(Error::Constraint(
                    "exponential means must be finite and positive".into(),
                ));
            }
            if !(m1.is_finite() && m1 > 0.0 && m1 <= 1.0 && agree(m1, m2)) {
                return Err(Error::Constraint(format!(
                    "shared thinning fraction disagrees: m1 = {m1}, m2 = {m2}"
                )));
            }
            Ok((t1 * t2 / (t1 + t2), m1))
        }
    }
}

// ==========================================================================
// tests
// ==========================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::berg_pmf;
    use crate::series::{compose_pmf, convolve};
    use proptest::prelude::*;

    fn geometric_pmf(q: f64, k_max: usize) -> PmfVector {
        let r = q / (1.0 - q);
        berg_pmf(ThinningParams::new(r, r).unwrap(), k_max)
    }

    fn uniform_pmf(top: usize) -> PmfVector {
        let p = 1.0 / (top as f64 + 1.0);
        PmfVector::new(vec![p; top + 1], 0.0).unwrap()
    }

    fn exact_pmf(entries: &[f64]) -> PmfVector {
        PmfVector::new(entries.to_vec(), 0.0).unwrap()
    }

    fn assert_certified(v: &MonotonicityVerdict) {
        assert!(v.holds, "expected a certified pass, got {v:?}");
        assert!(!v.inconclusive);
        assert!(v.witness.is_none());
    }

    fn assert_refuted(v: &MonotonicityVerdict, witness: usize) {
        assert!(!v.holds && !v.inconclusive, "expected a refutation, got {v:?}");
        assert_eq!(v.witness, Some(witness));
        assert!(v.violated_value.unwrap() < 0.0);
    }

    // ----------------------------------------------------------------------
    // parameters and verdict plumbing
    // ----------------------------------------------------------------------

    #[test]
    fn params_reject_nonpositive_values() {
        assert!(MonotoneParams::new(0.0, 1.0).is_err());
        assert!(MonotoneParams::new(1.0, 0.0).is_err());
        assert!(MonotoneParams::new(-0.5, 1.0).is_err());
        assert!(MonotoneParams::new(1.0, f64::NAN).is_err());
        assert!(MonotoneParams::new(0.3, 2.5).is_ok());
    }

    #[test]
    fn verdict_shape_invariant_across_a_sweep() {
        let laws = [
            geometric_pmf(0.5, 60),
            PmfVector::delta(0),
            PmfVector::delta(5),
            uniform_pmf(4),
            exact_pmf(&[0.3, 0.4, 0.2, 0.1]),
        ];
        for law in &laws {
            for v in [
                alpha_monotone_check(law, 0.7).unwrap(),
                mr_monotone_check(law, MonotoneParams::new(0.7, 0.9).unwrap()).unwrap(),
                fixed_r_monotone_check(law, 0.7, 0.3).unwrap(),
                fixed_m_monotone_check(law, 0.8, 0.9).unwrap(),
            ] {
                assert_eq!(
                    v.witness.is_some(),
                    !v.holds && !v.inconclusive,
                    "witness rule broken: {v:?}"
                );
                assert_eq!(v.witness.is_some(), v.violated_value.is_some());
                if !v.holds {
                    assert!(v.q_sequence.is_none());
                }
            }
        }
    }

    // ----------------------------------------------------------------------
    // alpha-monotonicity
    // ----------------------------------------------------------------------

    #[test]
    fn geometric_half_is_half_monotone_with_zero_slack() {
        let v = alpha_monotone_check(&geometric_pmf(0.5, 80), 0.5).unwrap();
        assert_certified(&v);
        // at n = 0 the inequality is an exact tie: 0.5 * 0.5 = 1 * 0.25
        assert!(v.min_slack.abs() <= 1e-15, "min slack {}", v.min_slack);
    }

    #[test]
    fn geometric_half_fails_below_the_critical_exponent() {
        let v = alpha_monotone_check(&geometric_pmf(0.5, 80), 0.4).unwrap();
        assert_refuted(&v, 0);
        // 0.4 * 0.5 - 1 * 0.25 = -0.05
        assert!((v.violated_value.unwrap() + 0.05).abs() <= 1e-12);
    }

    #[test]
    fn point_mass_at_zero_is_monotone_for_every_exponent() {
        for alpha in [0.1, 1.0, 7.0] {
            assert_certified(&alpha_monotone_check(&PmfVector::delta(0), alpha).unwrap());
        }
    }

    #[test]
    fn coarse_tail_downgrades_a_pass_to_inconclusive() {
        let fuzzy = PmfVector::new(vec![0.6, 0.3], 0.1).unwrap();
        let v = alpha_monotone_check(&fuzzy, 2.0).unwrap();
        assert!(!v.holds && v.inconclusive && v.witness.is_none());
    }

    #[test]
    fn alpha_check_rejects_bad_exponents() {
        let law = geometric_pmf(0.5, 20);
        assert!(alpha_monotone_check(&law, 0.0).is_err());
        assert!(alpha_monotone_check(&law, f64::INFINITY).is_err());
    }

    // ----------------------------------------------------------------------
    // the q sequence and joint-class membership
    // ----------------------------------------------------------------------

    #[test]
    fn q_sequence_telescopes_to_unit_mass_on_complete_inputs() {
        for theta in [0.4, 1.0, 2.3] {
            for law in [PmfVector::delta(5), uniform_pmf(6), exact_pmf(&[0.25, 0.5, 0.25])] {
                let q = mr_q_sequence(&law, theta);
                assert_eq!(q.len(), law.len() + 1);
                let sum: f64 = q.iter().sum();
                assert!((sum - 1.0).abs() <= 1e-12, "theta {theta}: sum {sum}");
            }
        }
    }

    #[test]
    fn delta_zero_is_in_the_joint_class_with_a_degenerate_base_law() {
        let mp = MonotoneParams::new(1.3, 0.8).unwrap();
        let v = mr_monotone_check(&PmfVector::delta(0), mp).unwrap();
        assert_certified(&v);
        let q = v.q_sequence.unwrap();
        assert!((q.get(0) - 1.0).abs() <= 1e-15);
        assert!(q.probs().iter().skip(1).all(|&x| x == 0.0));
    }

    #[test]
    fn point_mass_at_five_is_refuted_at_the_predicted_index() {
        for theta in [0.3, 0.7, 1.9] {
            let mp = MonotoneParams::new(1.0, theta).unwrap();
            let v = mr_monotone_check(&PmfVector::delta(5), mp).unwrap();
            // q_4 = -(5 theta) p_5 is the first negative entry
            assert_refuted(&v, 4);
            assert!((v.violated_value.unwrap() + 5.0 * theta).abs() <= 1e-12);
        }
    }

    #[test]
    fn finite_support_corpus_is_certified_nonrepresentable() {
        let mp = MonotoneParams::new(0.9, 1.1).unwrap();
        for top in 2..=6 {
            let v = mr_monotone_check(&uniform_pmf(top), mp).unwrap();
            assert!(!v.holds && !v.inconclusive, "uniform 0..={top}: {v:?}");
        }
        for k in 1..=8 {
            let v = mr_monotone_check(&PmfVector::delta(k), mp).unwrap();
            assert!(!v.holds && !v.inconclusive, "delta {k}: {v:?}");
        }
    }

    #[test]
    fn shifted_geometrics_fail_at_the_origin() {
        for q in [0.3f64, 0.6] {
            let mut probs = vec![0.0; 40];
            for (k, slot) in probs.iter_mut().enumerate().skip(1) {
                *slot = (1.0 - q) * q.powi(k as i32 - 1);
            }
            let tail = 1.0 - probs.iter().sum::<f64>();
            let law = PmfVector::new(probs, tail.max(0.0)).unwrap();
            let v = mr_monotone_check(&law, MonotoneParams::new(1.0, 0.5).unwrap()).unwrap();
            // q_0 = -theta p_1 < 0
            assert_refuted(&v, 0);
        }
    }

    // ----------------------------------------------------------------------
    // power mixture (closed-form inner stage)
    // ----------------------------------------------------------------------

    #[test]
    fn power_mixture_rows_carry_unit_mass() {
        for alpha in [0.3, 1.0, 2.7] {
            for j in [0usize, 1, 5, 23] {
                let row = power_mixture(&PmfVector::delta(j), alpha).unwrap();
                assert!(row.tail_bound() <= 1e-12, "alpha {alpha}, j {j}");
            }
        }
    }

    #[test]
    fn power_mixture_mean_contracts_by_the_fraction_mean() {
        for (alpha, j) in [(0.5, 4usize), (2.0, 9), (1.3, 1)] {
            let row = power_mixture(&PmfVector::delta(j), alpha).unwrap();
            let want = alpha / (alpha + 1.0) * j as f64;
            assert!((row.mean() - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn power_mixture_output_is_alpha_monotone() {
        for alpha in [0.4, 1.0, 3.0] {
            for w in [
                PmfVector::delta(6),
                exact_pmf(&[0.1, 0.2, 0.3, 0.4]),
                geometric_pmf(0.5, 40),
            ] {
                let mixed = power_mixture(&w, alpha).unwrap();
                assert_certified(&alpha_monotone_check(&mixed, alpha).unwrap());
            }
        }
    }

    #[test]
    fn power_mixture_of_delta_zero_is_delta_zero() {
        let out = power_mixture(&PmfVector::delta(0), 0.8).unwrap();
        assert_eq!(out.probs(), &[1.0]);
    }

    // ----------------------------------------------------------------------
    // synthesis and the (i) <=> (iii) round trip
    // ----------------------------------------------------------------------

    #[test]
    fn synthesize_fixes_delta_zero() {
        let mp = MonotoneParams::new(1.0, 1.0).unwrap();
        let out = mr_monotone_synthesize(&PmfVector::delta(0), mp, 32).unwrap();
        assert!((out.get(0) - 1.0).abs() <= 1e-12);
        assert!(out.probs().iter().skip(1).all(|&v| v.abs() <= 1e-12));
    }

    #[test]
    fn synthesized_mean_matches_the_mixture_identity() {
        for (alpha, theta, w) in [
            (1.0, 1.0, PmfVector::delta(1)),
            (0.6, 0.8, exact_pmf(&[0.4, 0.3, 0.2, 0.1])),
            (2.0, 0.5, PmfVector::delta(3)),
        ] {
            let mp = MonotoneParams::new(alpha, theta).unwrap();
            let k = (260.0 * theta.max(1.0)) as usize;
            let out = mr_monotone_synthesize(&w, mp, k).unwrap();
            let want = alpha / (alpha + 1.0) * w.mean();
            assert!(
                (out.mean() - want).abs() <= 1e-6,
                "alpha {alpha} theta {theta}: {} vs {want}",
                out.mean()
            );
        }
    }

    #[test]
    fn synthesized_laws_pass_the_joint_check() {
        for (alpha, theta, w) in [
            (1.0, 1.0, PmfVector::delta(1)),
            (0.5, 1.0, exact_pmf(&[0.5, 0.25, 0.15, 0.1])),
            (2.0, 0.6, PmfVector::delta(3)),
        ] {
            let mp = MonotoneParams::new(alpha, theta).unwrap();
            let k = (280.0 * theta.max(1.0)) as usize;
            let out = mr_monotone_synthesize(&w, mp, k).unwrap();
            let v = mr_monotone_check(&out, mp).unwrap();
            assert_certified(&v);
            let q = v.q_sequence.unwrap();
            let mass: f64 = q.probs().iter().sum();
            assert!((mass + q.tail_bound() - 1.0).abs() <= 1e-8);
        }
    }

    #[test]
    fn synthesized_q_mass_stays_within_the_documented_window() {
        let mp = MonotoneParams::new(0.8, 1.0).unwrap();
        let out = mr_monotone_synthesize(&exact_pmf(&[0.6, 0.4]), mp, 300).unwrap();
        let q = mr_q_sequence(&out, mp.theta);
        let sum: f64 = q.iter().sum();
        assert!((sum - 1.0).abs() <= 1e-8, "q mass {sum}");
    }

    // ----------------------------------------------------------------------
    // fixed-r marginal
    // ----------------------------------------------------------------------

    #[test]
    fn fixed_r_at_zero_matches_the_alpha_check() {
        let law = geometric_pmf(0.5, 60);
        let a = alpha_monotone_check(&law, 0.5).unwrap();
        let b = fixed_r_monotone_check(&law, 0.5, 0.0).unwrap();
        assert_eq!(a.holds, b.holds);
        let c = fixed_r_monotone_check(&law, 0.4, 0.0).unwrap();
        assert_refuted(&c, 0);
    }

    #[test]
    fn fixed_r_round_trip_certifies_a_built_member() {
        let w = geometric_pmf(0.5, 48);
        let inner = power_mixture(&w, 0.7).unwrap();
        // deep enough that the forward cut re-entering through the inverse
        // stays below the sensitivity probe's agreement threshold
        let law = compose_pmf(&inner, ThinningParams::new(1.0, 0.3).unwrap(), 384).unwrap();
        let v = fixed_r_monotone_check(&law, 0.7, 0.3).unwrap();
        assert_certified(&v);
        let rec = v.q_sequence.unwrap();
        for k in 0..10 {
            assert!(
                (rec.get(k) - inner.get(k)).abs() <= 1e-8,
                "entry {k}: {} vs {}",
                rec.get(k),
                inner.get(k)
            );
        }
    }

    #[test]
    fn fixed_r_refutes_a_bare_point_mass() {
        let v = fixed_r_monotone_check(&PmfVector::delta(5), 1.0, 0.3).unwrap();
        // the de-composed series starts at (-r/(1-r))^5 < 0
        assert_refuted(&v, 0);
        let want = (-0.3f64 / 0.7).powi(5);
        assert!((v.violated_value.unwrap() - want).abs() <= 1e-12);
    }

    #[test]
    fn fixed_r_goes_inconclusive_when_the_formal_inverse_diverges() {
        let law = berg_pmf(ThinningParams::new(1.0, 0.8).unwrap(), 64);
        let v = fixed_r_monotone_check(&law, 1.0, 0.8).unwrap();
        assert!(v.inconclusive && v.witness.is_none(), "{v:?}");
    }

    // ----------------------------------------------------------------------
    // fixed-m marginal
    // ----------------------------------------------------------------------

    #[test]
    fn fixed_m_round_trip_certifies_a_built_member() {
        let w = exact_pmf(&[0.4, 0.3, 0.2, 0.1]);
        let law = exp_mixture(&w, 0.7, 1.0, 300, &tight_quadrature()).unwrap();
        let v = fixed_m_monotone_check(&law, 0.7, 1.0).unwrap();
        assert_certified(&v);
        let rec = v.q_sequence.unwrap();
        for k in 0..4 {
            assert!(
                (rec.get(k) - w.get(k)).abs() <= 1e-6,
                "entry {k}: {} vs {}",
                rec.get(k),
                w.get(k)
            );
        }
    }

    #[test]
    fn fixed_m_at_one_is_the_q_only_check() {
        let w = exact_pmf(&[0.5, 0.3, 0.2]);
        let law = exp_mixture(&w, 1.0, 0.8, 260, &tight_quadrature()).unwrap();
        let v = fixed_m_monotone_check(&law, 1.0, 0.8).unwrap();
        assert_certified(&v);
        let rec = v.q_sequence.unwrap();
        for k in 0..3 {
            assert!((rec.get(k) - w.get(k)).abs() <= 1e-9);
        }
    }

    #[test]
    fn fixed_m_refutes_point_masses_and_accepts_delta_zero() {
        let bad = fixed_m_monotone_check(&PmfVector::delta(5), 0.8, 0.7).unwrap();
        assert_refuted(&bad, 4);
        let good = fixed_m_monotone_check(&PmfVector::delta(0), 0.8, 0.7).unwrap();
        assert_certified(&good);
    }

    // ----------------------------------------------------------------------
    // thinning stability of the joint class
    // ----------------------------------------------------------------------

    #[test]
    fn thinning_an_alpha_monotone_law_lands_in_the_joint_class() {
        let w = geometric_pmf(0.5, 48);
        let v = thinned_alpha_check(0.5, 1.0, 0.7, &w).unwrap();
        assert_certified(&v);
    }

    #[test]
    fn thinning_stability_holds_at_the_full_fraction() {
        let w = geometric_pmf(0.5, 48);
        let v = thinned_alpha_check(0.5, 0.9, 1.0, &w).unwrap();
        assert_certified(&v);
    }

    #[test]
    fn thinning_stability_is_trivial_for_delta_zero() {
        let v = thinned_alpha_check(2.0, 1.5, 0.4, &PmfVector::delta(0)).unwrap();
        assert_certified(&v);
    }

    #[test]
    fn thinning_stability_rejects_inputs_outside_the_premise() {
        // delta_1 violates the alpha inequality at n = 0 for every alpha
        let err = thinned_alpha_check(1.0, 1.0, 0.5, &PmfVector::delta(1));
        assert!(err.is_err());
    }

    // ----------------------------------------------------------------------
    // convolution parameter arithmetic
    // ----------------------------------------------------------------------

    #[test]
    fn convolution_params_frozen_example() {
        let a = MonotoneParams::new(1.0, 1.0).unwrap();
        let b = MonotoneParams::new(2.0, 2.0).unwrap();
        let c = convolution_params(a, b);
        assert!((c.alpha - 4.5).abs() <= 1e-12);
        assert!((c.theta - 2.0 / 3.0).abs() <= 1e-12);
        let d = convolution_params(b, a);
        assert_eq!(c.alpha, d.alpha);
        assert_eq!(c.theta, d.theta);
    }

    #[test]
    fn convolving_two_synthesized_members_passes_the_combined_check() {
        let a = MonotoneParams::new(1.0, 1.0).unwrap();
        let b = MonotoneParams::new(2.0, 2.0).unwrap();
        let x1 = mr_monotone_synthesize(&PmfVector::delta(1), a, 300).unwrap();
        let x2 = mr_monotone_synthesize(&exact_pmf(&[0.6, 0.4]), b, 560).unwrap();
        let conv = convolve(&x1, &x2);
        let combined = convolution_params(a, b);
        let v = mr_monotone_check(&conv, combined).unwrap();
        assert_certified(&v);
    }

    #[test]
    fn marginal_convolution_arithmetic_and_rejections() {
        let (alpha, r) =
            marginal_convolution_params(MarginalKind::FixedR, (1.0, 0.4), (2.0, 0.4)).unwrap();
        assert_eq!((alpha, r), (3.0, 0.4));
        let (theta, m) =
            marginal_convolution_params(MarginalKind::FixedM, (1.0, 0.6), (1.0, 0.6)).unwrap();
        assert!((theta - 0.5).abs() <= 1e-15);
        assert_eq!(m, 0.6);
        assert!(
            marginal_convolution_params(MarginalKind::FixedR, (1.0, 0.4), (2.0, 0.5)).is_err()
        );
        assert!(
            marginal_convolution_params(MarginalKind::FixedM, (1.0, 0.6), (1.0, 0.7)).is_err()
        );
        assert!(
            marginal_convolution_params(MarginalKind::FixedM, (0.0, 0.6), (1.0, 0.6)).is_err()
        );
    }

    #[test]
    fn fixed_r_convolution_end_to_end() {
        let r = ThinningParams::new(1.0, 0.3).unwrap();
        let y1 = compose_pmf(&power_mixture(&exact_pmf(&[0.5, 0.5]), 1.0).unwrap(), r, 200)
            .unwrap();
        let y2 = compose_pmf(
            &power_mixture(&exact_pmf(&[0.3, 0.4, 0.3]), 2.0).unwrap(),
            r,
            200,
        )
        .unwrap();
        let conv = convolve(&y1, &y2);
        let (alpha, rr) =
            marginal_convolution_params(MarginalKind::FixedR, (1.0, 0.3), (2.0, 0.3)).unwrap();
        let v = fixed_r_monotone_check(&conv, alpha, rr).unwrap();
        assert_certified(&v);
    }

    #[test]
    fn fixed_m_convolution_end_to_end() {
        // the combined base law has an infinite subexponential tail, so the
        // fraction must leave the affine de-thin well conditioned enough for
        // the trustworthy prefix to cover essentially all of that tail
        let z1 = exp_mixture(&exact_pmf(&[0.7, 0.3]), 0.9, 1.0, 300, &tight_quadrature()).unwrap();
        let z2 = exp_mixture(&exact_pmf(&[0.5, 0.5]), 0.9, 1.0, 300, &tight_quadrature()).unwrap();
        let conv = convolve(&z1, &z2);
        let (theta, m) =
            marginal_convolution_params(MarginalKind::FixedM, (1.0, 0.9), (1.0, 0.9)).unwrap();
        let v = fixed_m_monotone_check(&conv, m, theta).unwrap();
        assert_certified(&v);
    }

    // ----------------------------------------------------------------------
    // properties
    // ----------------------------------------------------------------------

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn monotone_in_alpha(
            raw in proptest::collection::vec(0.01f64..1.0, 2..8),
            alpha in 0.2f64..2.0,
            bump in 0.01f64..2.0,
        ) {
            let total: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let law = PmfVector::new(probs, 0.0).unwrap();
            let low = alpha_monotone_check(&law, alpha).unwrap();
            let high = alpha_monotone_check(&law, alpha + bump).unwrap();
            if low.holds {
                prop_assert!(high.holds);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]

        #[test]
        fn synthesized_members_always_certify(
            raw in proptest::collection::vec(0.05f64..1.0, 2..5),
            alpha in 0.4f64..2.5,
            theta in 0.3f64..1.2,
        ) {
            let total: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let w = PmfVector::new(probs, 0.0).unwrap();
            let mp = MonotoneParams::new(alpha, theta).unwrap();
            let mut k = (150.0 * theta).ceil() as usize + 40;
            let mut verdict = mr_monotone_check(&mr_monotone_synthesize(&w, mp, k).unwrap(), mp).unwrap();
            while verdict.inconclusive && k < MAX_AUTO_K {
                k = (2 * k).min(MAX_AUTO_K);
                verdict = mr_monotone_check(&mr_monotone_synthesize(&w, mp, k).unwrap(), mp).unwrap();
            }
            prop_assert!(verdict.holds, "{verdict:?}");
        }
    }
}


