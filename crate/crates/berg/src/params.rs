//! Parameter pairs `(m, r)` of the linear-fractional pgf family and their
//! semigroup structure.
//!
//! The admissible region is `r >= 0`, `0 < m <= r + 1`. A pair parameterizes
//! the pgf
//!
//! ```text
//! psi_{m,r}(s) = 1 - m(1-s) / (1 + r(1-s)),
//! ```
//!
//! and functional composition of two such pgfs stays inside the family:
//! `psi_{m',r'} ∘ psi_{m,r} = psi_{(m m', r + r' m)}`. The product
//! `(m, r) * (m', r') = (m m', r + r' m)` is associative with neutral element
//! `(1, 0)`, commutative exactly when `r (1 - m') = r' (1 - m)`, and closed on
//! the three boundary families `r = 0` (binomial pgfs), `m = 1` (mean one),
//! and `m = r + 1` (no mass at zero).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for region-boundary classification. The parameter
/// domain is O(1), so no relative scaling is applied.
pub const BOUNDARY_EPS: f64 = 1e-12;

/// A point of the admissible parameter region.
///
/// Fields are public for ergonomics; construct through [`ThinningParams::new`]
/// to get the region check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThinningParams {
    /// Mean of the associated BerG variable; the expectation multiplier of
    /// the thinning operator.
    pub m: f64,
    /// Geometric overdispersion parameter.
    pub r: f64,
}

/// Where a parameter pair sits inside the admissible region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionClass {
    /// `0 < m < 1`: the operator strictly contracts expectations.
    pub expectation_thinning: bool,
    /// `r = 0`: the pgf is affine and the operator is binomial thinning.
    pub binomial_edge: bool,
    /// `m = 1`: expectation preserved exactly.
    pub unit_mean_edge: bool,
    /// `m = r + 1`: the BerG law puts no mass at zero (geometric shifted
    /// to start at one).
    pub shifted_geometric_edge: bool,
}

impl ThinningParams {
    /// Validates `r >= 0` and `0 < m <= r + 1` (with [`BOUNDARY_EPS`] slack
    /// on the closed edges) and returns the pair. Tiny negative `r` from
    /// round-off is snapped to `0`.
    pub fn new(m: f64, r: f64) -> Result<Self> {
        if !m.is_finite() || !r.is_finite() {
            return Err(Error::InvalidParams {
                m,
                r,
                reason: "parameters must be finite",
            });
        }
        let r = if r < 0.0 && r >= -BOUNDARY_EPS { 0.0 } else { r };
        if r < 0.0 {
            return Err(Error::InvalidParams {
                m,
                r,
                reason: "r must be nonnegative",
            });
        }
        if m <= 0.0 {
            return Err(Error::InvalidParams {
                m,
                r,
                reason: "m must be positive",
            });
        }
        if m > r + 1.0 + BOUNDARY_EPS {
            return Err(Error::InvalidParams {
                m,
                r,
                reason: "m must not exceed r + 1",
            });
        }
        Ok(Self { m, r })
    }

    /// The neutral element `(1, 0)` (identity thinning).
    pub fn identity() -> Self {
        Self { m: 1.0, r: 0.0 }
    }

    /// Boundary/sub-region classification with [`BOUNDARY_EPS`] tolerance.
    pub fn classify(&self) -> RegionClass {
        RegionClass {
            expectation_thinning: self.m < 1.0 - BOUNDARY_EPS,
            binomial_edge: self.r.abs() <= BOUNDARY_EPS,
            unit_mean_edge: (self.m - 1.0).abs() <= BOUNDARY_EPS,
            shifted_geometric_edge: (self.m - (self.r + 1.0)).abs() <= BOUNDARY_EPS,
        }
    }

    /// True when the operator strictly contracts expectations (`m < 1`).
    pub fn is_expectation_thinning(&self) -> bool {
        self.classify().expectation_thinning
    }

    /// Semigroup product `p * q = (m m', r + r' m)` for `p = (m, r)`,
    /// `q = (m', r')`. Two equivalent readings, both exercised by tests:
    ///
    /// * pgf composition with `p` inside:
    ///   `compose(p, q).pgf_eval(s) == q.pgf_eval(p.pgf_eval(s))`;
    /// * operator application with `q` acting first:
    ///   `compose(p, q) ⊙ X  ==  p ⊙ (q ⊙ X)`.
    ///
    /// The region is closed under the product, so no revalidation is needed.
    pub fn compose(self, q: Self) -> Self {
        Self {
            m: self.m * q.m,
            r: self.r + q.r * self.m,
        }
    }

    /// Order-of-application sugar: `a.then(b)` is the operator that thins by
    /// `a` first and by `b` second, i.e. `compose(b, a)`.
    pub fn then(self, second: Self) -> Self {
        second.compose(self)
    }

    /// Signed commutation defect `r (1 - m') - r' (1 - m)`; the product
    /// commutes exactly when this vanishes.
    pub fn commutation_defect(&self, q: &Self) -> f64 {
        self.r * (1.0 - q.m) - q.r * (1.0 - self.m)
    }

    /// Whether `p * q = q * p`, to absolute tolerance [`BOUNDARY_EPS`].
    pub fn commutes_with(&self, q: &Self) -> bool {
        self.commutation_defect(q).abs() <= BOUNDARY_EPS
    }

    /// `k`-th semigroup power `(m^k, r * (1 + m + ... + m^(k-1)))`.
    ///
    /// The geometric sum is accumulated in ascending powers so the result
    /// agrees with `k`-fold [`Self::compose`] to round-off.
    pub fn power(self, k: u32) -> Self {
        let mut sum = 0.0;
        let mut mk = 1.0;
        for _ in 0..k {
            sum += mk;
            mk *= self.m;
        }
        Self {
            m: mk,
            r: self.r * sum,
        }
    }

    /// Evaluates `psi_{m,r}(s) = 1 - m(1-s)/(1 + r(1-s))` for `s` in `[0, 1]`.
    ///
    /// `s = 1` short-circuits to exactly `1.0` so that fixed-point identities
    /// hold without round-off.
    pub fn pgf_eval(&self, s: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::OutsideUnitInterval(s));
        }
        if s == 1.0 {
            return Ok(1.0);
        }
        let u = 1.0 - s;
        Ok(1.0 - self.m * u / (1.0 + self.r * u))
    }

    /// `k`-fold iterate `psi^(k)(s)`, evaluated through the power closed
    /// form: `psi^(k) = psi_{power(k)}`. `k = 0` returns `s` itself.
    pub fn pgf_iterate(&self, s: f64, k: u32) -> Result<f64> {
        if k == 0 {
            if !(0.0..=1.0).contains(&s) {
                return Err(Error::OutsideUnitInterval(s));
            }
            return Ok(s);
        }
        self.power(k).pgf_eval(s)
    }

    /// Mean of the associated BerG variable (equals `m`).
    pub fn mean(&self) -> f64 {
        self.m
    }

    /// Variance of the associated BerG variable, `m (2r + 1 - m)`.
    pub fn variance(&self) -> f64 {
        self.m * (2.0 * self.r + 1.0 - self.m)
    }
}

// --------------------------------------------------------------------------
// tests
// --------------------------------------------------------------------------
