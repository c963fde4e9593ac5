//! Truncated pmf and power-series arithmetic.
//!
//! Two representations are used throughout the crate:
//!
//! * [`PmfVector`]: a certified probability vector: nonnegative entries for
//!   `k = 0..=K` plus a `tail_bound` on the mass beyond `K`;
//! * [`SeriesCoefficients`]: raw power-series coefficients, signs allowed,
//!   for formal manipulations (real powers, inverse maps).
//!
//! Composition with a linear-fractional map `psi(s) = (a + b s)/(c + d s)`
//! is evaluated by a Horner recursion that only ever multiplies by the
//! degree-one numerator and divides by the degree-one denominator, so a full
//! composition costs `O(J * K)` and, for genuine pgf maps (`|d/c| < 1`), the
//! division recurrence is contractive and the scheme is numerically stable.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ThinningParams;

/// Allowed distance of `sum + tail_bound` from one.
pub const MASS_TOL: f64 = 1e-9;

/// Entries below this are structural negativity, not round-off, and are
/// rejected at construction.
pub const NEG_TOL: f64 = 1e-12;

/// Magnitude at which formal series arithmetic is declared non-convergent.
const BLOWUP_LIMIT: f64 = 1e12;

// --------------------------------------------------------------------------
// PmfVector
// --------------------------------------------------------------------------

/// Probabilities `P(X = k)` for `k = 0..=K` together with a certified upper
/// bound on `P(X > K)`.
///
/// Invariants enforced at construction: all entries finite and at worst a
/// round-off hair below zero (negatives are clamped to `0` on read),
/// `tail_bound >= 0`, and `sum + tail_bound` within [`MASS_TOL`] of one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PmfVector {
    probs: Vec<f64>,
    tail_bound: f64,
}

#[derive(Deserialize)]
struct PmfVectorRaw {
    probs: Vec<f64>,
    tail_bound: f64,
}

impl PmfVector {
    /// Validates the invariants and wraps the vector.
    pub fn new(probs: Vec<f64>, tail_bound: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::NotAPmf("empty probability vector".into()));
        }
        if !tail_bound.is_finite() || tail_bound < 0.0 {
            return Err(Error::NotAPmf(format!(
                "tail bound {tail_bound} must be finite and nonnegative"
            )));
        }
        let mut sum = 0.0;
        for (k, &v) in probs.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NotAPmf(format!("entry {k} is not finite")));
            }
            if v < -NEG_TOL {
                return Err(Error::NotAPmf(format!("entry {k} = {v} is negative")));
            }
            sum += v.max(0.0);
        }
        if (sum + tail_bound - 1.0).abs() > MASS_TOL {
            return Err(Error::NotAPmf(format!(
                "stored mass {sum} plus tail bound {tail_bound} is not 1"
            )));
        }
        Ok(Self { probs, tail_bound })
    }

    /// Point mass at `k` (support stored up to `k`, zero tail).
    pub fn delta(k: usize) -> Self {
        let mut probs = vec![0.0; k + 1];
        probs[k] = 1.0;
        Self {
            probs,
            tail_bound: 0.0,
        }
    }

    /// Number of stored entries (`K + 1`).
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Largest stored index `K`.
    pub fn k_max(&self) -> usize {
        self.probs.len() - 1
    }

    /// `P(X = k)`, clamped to zero from below; zero beyond the stored range.
    pub fn get(&self, k: usize) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0).max(0.0)
    }

    /// Raw stored entries (round-off negatives not clamped).
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Certified upper bound on the mass beyond the stored range.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Sum of the stored entries.
    pub fn stored_mass(&self) -> f64 {
        self.probs.iter().map(|v| v.max(0.0)).sum()
    }

    /// Mean of the stored part.
    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(k, &v)| k as f64 * v.max(0.0))
            .sum()
    }

    /// Variance of the stored part.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let second: f64 = self
            .probs
            .iter()
            .enumerate()
            .map(|(k, &v)| (k as f64) * (k as f64) * v.max(0.0))
            .sum();
        (second - mean * mean).max(0.0)
    }

    /// Evaluates the stored part of the pgf, `sum_k p_k s^k`, by Horner.
    /// The omitted tail contributes at most `tail_bound` for `s` in `[0, 1]`.
    pub fn pgf_at(&self, s: f64) -> f64 {
        self.probs.iter().rev().fold(0.0, |acc, &p| acc * s + p.max(0.0))
    }

    /// Shortens the vector to `k_max + 1` entries, folding the removed mass
    /// into the tail bound.
    pub fn truncate(&self, k_max: usize) -> Self {
        if k_max + 1 >= self.probs.len() {
            return self.clone();
        }
        let removed: f64 = self.probs[k_max + 1..].iter().map(|v| v.max(0.0)).sum();
        Self {
            probs: self.probs[..=k_max].to_vec(),
            tail_bound: self.tail_bound + removed,
        }
    }

    // ----- serialization -----

    /// RFC-4180 CSV with an `index,probability` header; probabilities are
    /// written with 17 significant digits so they round-trip bit-exactly.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("index,probability\r\n");
        for (k, &v) in self.probs.iter().enumerate() {
            let _ = write!(out, "{k},{:.16e}\r\n", v);
        }
        out
    }

    /// Parses [`Self::to_csv_string`] output. The tail bound is not part of
    /// the CSV format and is reconstructed as `max(0, 1 - sum)`, the exact
    /// missing mass of a proper distribution.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut probs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if lineno == 0 {
                if line != "index,probability" {
                    return Err(Error::Parse(format!("unexpected CSV header {line:?}")));
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let (idx, prob) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("line {lineno}: expected two fields")))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| Error::Parse(format!("line {lineno}: bad index {idx:?}")))?;
            if idx != probs.len() {
                return Err(Error::Parse(format!(
                    "line {lineno}: indices must be consecutive from 0"
                )));
            }
            let prob: f64 = prob
                .parse()
                .map_err(|_| Error::Parse(format!("line {lineno}: bad probability {prob:?}")))?;
            probs.push(prob);
        }
        let sum: f64 = probs.iter().map(|v| v.max(0.0)).sum();
        Self::new(probs, (1.0 - sum).max(0.0))
    }

    /// JSON object `{"probs": [...], "tail_bound": t}`.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("pmf serialization cannot fail")
    }

    /// Parses [`Self::to_json_string`] output, re-validating the invariants.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: PmfVectorRaw =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.probs, raw.tail_bound)
    }
}

// --------------------------------------------------------------------------
// SeriesCoefficients
// --------------------------------------------------------------------------

/// Power-series coefficients around `s = 0`; entries may be negative.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesCoefficients {
    pub coeffs: Vec<f64>,
}

impl SeriesCoefficients {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn from_pmf(pmf: &PmfVector) -> Self {
        Self {
            coeffs: pmf.probs().to_vec(),
        }
    }

    /// Horner evaluation of the truncated series.
    pub fn eval_at(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    /// `order`-th derivative of the truncated series at `s`, via the falling
    /// factorial expansion `sum_k k (k-1) ... (k-order+1) c_k s^(k-order)`.
    pub fn derivative_at(&self, s: f64, order: u32) -> f64 {
        let mut total = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate().skip(order as usize) {
            let mut w = c;
            for j in 0..order as usize {
                w *= (k - j) as f64;
            }
            total += w * s.powi((k - order as usize) as i32);
        }
        total
    }

    /// Truncated product of two series (signed convolution up to `k_max`).
    pub fn convolve_truncated(&self, other: &Self, k_max: usize) -> Self {
        let mut out = vec![0.0; k_max + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i > k_max || a == 0.0 {
                continue;
            }
            let top = (k_max - i).min(other.coeffs.len().saturating_sub(1));
            for (j, &b) in other.coeffs.iter().enumerate().take(top + 1) {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }
}

// --------------------------------------------------------------------------
// convolution
// --------------------------------------------------------------------------

/// Exact convolution of two certified pmfs. Every stored output entry is the
/// full convolution sum of the stored inputs, and the missing mass is at most
/// the combined input tails.
pub fn convolve(a: &PmfVector, b: &PmfVector) -> PmfVector {
    let mut probs = vec![0.0; a.len() + b.len() - 1];
    for (i, &pa) in a.probs().iter().enumerate() {
        let pa = pa.max(0.0);
        if pa == 0.0 {
            continue;
        }
        for (j, &pb) in b.probs().iter().enumerate() {
            probs[i + j] += pa * pb.max(0.0);
        }
    }
    let ta = a.tail_bound();
    let tb = b.tail_bound();
    let tail = (ta + tb - ta * tb).max(0.0);
    PmfVector::new(probs, tail).expect("convolution preserves the pmf invariants")
}

/// Convolution truncated to `k_max + 1` entries; the cut mass joins the tail
/// bound. Entries below the cut remain exact.
pub fn convolve_truncated(a: &PmfVector, b: &PmfVector, k_max: usize) -> PmfVector {
    convolve(a, b).truncate(k_max)
}

// --------------------------------------------------------------------------
// linear-fractional maps
// --------------------------------------------------------------------------

/// A formal linear-fractional map `s -> 1 - m(1-s)/(1 + r(1-s))`, without
/// the region restriction: negative `r` (inverse maps) and `m > r + 1` are
/// allowed. Only `1 + r != 0` is required.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LfMap {
    pub m: f64,
    pub r: f64,
}

impl LfMap {
    pub fn new(m: f64, r: f64) -> Self {
        Self { m, r }
    }

    pub fn from_params(p: ThinningParams) -> Self {
        Self { m: p.m, r: p.r }
    }

    /// Group inverse `(1/m, -r/m)`: composing with it in either order gives
    /// the identity map.
    pub fn inverse(self) -> Self {
        Self {
            m: 1.0 / self.m,
            r: -self.r / self.m,
        }
    }

    /// `(a, b, c, d)` of the rational form `(a + b s)/(c + d s)`.
    fn rational_form(self) -> (f64, f64, f64, f64) {
        (
            1.0 + self.r - self.m,
            self.m - self.r,
            1.0 + self.r,
            -self.r,
        )
    }

    /// Direct evaluation (any real `s` away from the pole).
    pub fn eval(&self, s: f64) -> f64 {
        let (a, b, c, d) = self.rational_form();
        (a + b * s) / (c + d * s)
    }

    /// Whether the coefficient recursions below are contractive
    /// (`|d/c| < 1`); true for every admissible-region map.
    pub fn is_stable(&self) -> bool {
        let (_, _, c, d) = self.rational_form();
        c != 0.0 && (d / c).abs() < 1.0
    }
}

/// Coefficients of the composition `outer(psi(s))` up to `s^k_out`, where
/// `outer` is given by its own coefficients.
///
/// Uses the Horner form `q_0 + psi (q_1 + psi (q_2 + ...))`; each step
/// multiplies by the numerator `a + b s` and synthetically divides by the
/// denominator `c + d s`, so the cost is `O(len(outer) * k_out)`. For maps
/// with `|d/c| >= 1` (formal inverses with large `r`) the division recurrence
/// amplifies round-off; outputs are checked for blow-up and an error is
/// returned instead of garbage.
pub fn compose_series(outer: &[f64], map: LfMap, k_out: usize) -> Result<Vec<f64>> {
    let (a, b, c, d) = map.rational_form();
    if c == 0.0 {
        return Err(Error::Series("map denominator vanishes (r = -1)".into()));
    }
    if outer.is_empty() {
        return Ok(vec![0.0; k_out + 1]);
    }
    let mut acc = vec![0.0; k_out + 1];
    acc[0] = *outer.last().expect("nonempty");
    let mut scratch = vec![0.0; k_out + 1];
    for &q in outer.iter().rev().skip(1) {
        // scratch := (a + b s) * acc
        scratch[0] = a * acc[0];
        for k in 1..=k_out {
            scratch[k] = a * acc[k] + b * acc[k - 1];
        }
        // acc := scratch / (c + d s), synthetic division
        let mut prev = 0.0;
        for k in 0..=k_out {
            let v = (scratch[k] - d * prev) / c;
            acc[k] = v;
            prev = v;
        }
        acc[0] += q;
    }
    if acc.iter().any(|v| !v.is_finite() || v.abs() > BLOWUP_LIMIT) {
        return Err(Error::Series(
            "composition coefficients blew up; the formal series does not converge at this truncation".into(),
        ));
    }
    Ok(acc)
}

/// Composition of a certified pmf with an admissible-region pgf map: the law
/// of the thinned variable. The missing mass (outer tail plus the `k_out`
/// cut) is exactly `1 - sum(stored)` and becomes the output tail bound.
pub fn compose_pmf(outer: &PmfVector, p: ThinningParams, k_out: usize) -> Result<PmfVector> {
    let coeffs = compose_series(outer.probs(), LfMap::from_params(p), k_out)?;
    let sum: f64 = coeffs.iter().map(|v| v.max(0.0)).sum();
    PmfVector::new(coeffs, (1.0 - sum).max(0.0))
}

/// Coefficients of the real power `[psi_{m,r}(s)]^a` up to `s^k`, computed
/// through generalized binomial series of the numerator and denominator.
/// Coefficients are signed for non-integer `a`; convergence of the formal
/// series requires the numerator root to lie outside the truncation's reach,
/// which is the caller's concern (the low-order coefficients are always
/// meaningful).
pub fn lf_power_series(map: LfMap, a_pow: f64, k: usize) -> Result<SeriesCoefficients> {
    let (a, b, c, d) = map.rational_form();
    if c == 0.0 {
        return Err(Error::Series("map denominator vanishes (r = -1)".into()));
    }
    if a == 0.0 {
        return Err(Error::Series(
            "map vanishes at s = 0; a real power has no power series there".into(),
        ));
    }
    if a / c <= 0.0 {
        return Err(Error::Series(
            "map is nonpositive at s = 0; a real power is not defined".into(),
        ));
    }
    // (a + b s)^p = a^p (1 + (b/a) s)^p, and likewise for the denominator.
    let num = binomial_series(b / a, a_pow, k);
    let den = binomial_series(d / c, -a_pow, k);
    let mut out = num.convolve_truncated(&den, k);
    let scale = (a / c).powf(a_pow);
    for v in &mut out.coeffs {
        *v *= scale;
    }
    if out.coeffs.iter().any(|v| !v.is_finite()) {
        return Err(Error::Series("power series overflowed".into()));
    }
    Ok(out)
}

/// Coefficients of `(1 + x s)^p` up to `s^k`.
fn binomial_series(x: f64, p: f64, k: usize) -> SeriesCoefficients {
    let mut coeffs = vec![0.0; k + 1];
    coeffs[0] = 1.0;
    for i in 0..k {
        coeffs[i + 1] = coeffs[i] * (p - i as f64) / (i as f64 + 1.0) * x;
    }
    SeriesCoefficients::new(coeffs)
}

// --------------------------------------------------------------------------
// derivatives of certified pmfs
// --------------------------------------------------------------------------

/// A pgf derivative value plus an honesty flag about truncation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativeEstimate {
    pub value: f64,
    /// Set when `tail_bound * K^order` exceeds the requested accuracy, i.e.
    /// the omitted tail could move the value by more than requested.
    pub truncation_warning: bool,
}

/// `order`-th derivative of the pgf at `s` in `[0, 1]` from the stored
/// entries: `sum_k k(k-1)...(k-order+1) p_k s^(k-order)`.
pub fn pgf_derivative_at(
    pmf: &PmfVector,
    s: f64,
    order: u32,
    accuracy: f64,
) -> Result<DerivativeEstimate> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutsideUnitInterval(s));
    }
    let series = SeriesCoefficients::from_pmf(pmf);
    let value = series.derivative_at(s, order);
    let k = pmf.k_max() as f64;
    let truncation_warning = pmf.tail_bound() * k.powi(order as i32) > accuracy;
    Ok(DerivativeEstimate {
        value,
        truncation_warning,
    })
}

// --------------------------------------------------------------------------
// tests
// --------------------------------------------------------------------------
