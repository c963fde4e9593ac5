//! Count-data thinning built on linear-fractional probability generating
//! functions.
//!
//! The central object is the two-parameter family of pgfs
//!
//! ```text
//! psi_{m,r}(s) = 1 - m(1-s) / (1 + r(1-s)),    0 <= s <= 1,
//! ```
//!
//! defined for `r >= 0` and `0 < m <= r + 1`. Each `psi_{m,r}` is the pgf of
//! a BerG random variable (a Bernoulli-geometric product) with mean `m`, and
//! the family is closed under functional composition, which makes the
//! parameter pairs `(m, r)` a semigroup. Composing an arbitrary pgf with
//! `psi_{m,r}` is a generalized thinning operator: for `m < 1` it contracts
//! expectations, and it reproduces binomial, geometric, and negative-binomial
//! thinning as special cases.
//!
//! The crate provides:
//!
//! * [`params`]: the parameter region, semigroup composition, powers, and
//!   pgf evaluation;
//! * [`series`]: truncated pmf/series arithmetic: convolution, composition
//!   with linear-fractional maps, real powers, derivatives;
//! * [`quad`]: adaptive quadrature used by the integral criteria;
//! * [`dist`]: BerG and compound-negative-binomial distributions: pmfs,
//!   moments, exact n-fold convolutions, and samplers;
//! * [`thinning`]: the thinning operator itself: conditional and marginal
//!   laws, moments, sampling, and composition checks;
//! * [`catalog`]: published thinning operators re-expressed as `(m, r)`
//!   pairs;
//! * [`inar`]: INAR(1) processes driven by the operator: stationary model
//!   construction, innovation decomposition, simulation, moment structure,
//!   and time-reversibility diagnostics;
//! * [`monotone`]: alpha-monotonicity and its thinning-mixture
//!   generalization: checks, synthesis, and convolution parameter rules;
//! * [`verify`]: seeded Monte Carlo verification harness.

pub mod catalog;
pub mod dist;
pub mod inar;
pub mod monotone;
pub mod params;
pub mod quad;
pub mod series;
pub mod thinning;
pub mod verify;

mod error;

pub use error::{Error, Result};
pub use params::ThinningParams;
pub use series::PmfVector;
