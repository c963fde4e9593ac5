//! Catalog of thinning operators from the count time-series literature
//! that are secretly members of the linear-fractional family.
//!
//! Each entry records the operator's native parameterization, evaluates its
//! generating function directly from the native formula, and maps the
//! native parameters onto the (m, r) plane. Keeping both forms makes
//! cross-parameterization reporting lossless, and gives an independent
//! check that the map is right: the native formula and the mapped
//! `psi_{m,r}` must agree everywhere on [0, 1].

use std::fmt;

use crate::error::{Error, Result};
use crate::params::ThinningParams;

/// Identifier of a cataloged operator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogName {
    /// Unit survival with probability m: generating function `1 - m + m s`.
    Binomial,
    /// Native form `1 - alpha (1-s) / (1 - theta (1-alpha) s)`.
    AlyBouzar,
    /// Native form `((1-alpha) + (alpha-gamma) s) / ((1-alpha gamma) - (1-alpha) gamma s)`.
    ZhuJoe,
    /// Native form `1 - alpha rho (1-s) / (1 + alpha - s)`.
    Iterated,
    /// Native form `1 / (1 + alpha (1-s))`.
    Negbin,
    /// Native form `1 - pi (1-s) / (1 - rho s)`.
    JaziAlamatsaz,
    /// Native form `(1 - (1-s)(alpha (1+rho) - rho)) / (1 + rho (1-s))`.
    RhoBinomial,
    /// Native form `(1 - rho s) / (1 - rho s + alpha (1-s))`.
    RhoNegbin,
    /// Native form `(1 - alpha (1-s)) / (1 + beta (1-s))`.
    BourguignonWeiss,
}

impl CatalogName {
    pub const ALL: [CatalogName; 9] = [
        CatalogName::Binomial,
        CatalogName::AlyBouzar,
        CatalogName::ZhuJoe,
        CatalogName::Iterated,
        CatalogName::Negbin,
        CatalogName::JaziAlamatsaz,
        CatalogName::RhoBinomial,
        CatalogName::RhoNegbin,
        CatalogName::BourguignonWeiss,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CatalogName::Binomial => "binomial",
            CatalogName::AlyBouzar => "aly_bouzar",
            CatalogName::ZhuJoe => "zhu_joe",
            CatalogName::Iterated => "iterated",
            CatalogName::Negbin => "negbin",
            CatalogName::JaziAlamatsaz => "jazi_alamatsaz",
            CatalogName::RhoBinomial => "rho_binomial",
            CatalogName::RhoNegbin => "rho_negbin",
            CatalogName::BourguignonWeiss => "bourguignon_weiss",
        }
    }

    /// Number of native parameters the family takes.
    pub fn arity(&self) -> usize {
        match self {
            CatalogName::Binomial | CatalogName::Negbin => 1,
            _ => 2,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        CatalogName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == text)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown catalog operator '{text}' (expected one of {})",
                    CatalogName::ALL
                        .iter()
                        .map(|n| n.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A cataloged operator with its native parameters and the equivalent
/// point of the (m, r) plane.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorCatalogEntry {
    pub name: CatalogName,
    pub native_params: Vec<f64>,
    pub mapped: ThinningParams,
    /// Whether the operator shrinks means, i.e. the mapped m is below one.
    pub is_thinning: bool,
}

impl OperatorCatalogEntry {
    /// Generating function value computed from the native formula, never
    /// through the mapped parameters; the independent side of the fidelity
    /// check.
    pub fn native_pgf_at(&self, s: f64) -> f64 {
        let p = &self.native_params;
        match self.name {
            CatalogName::Binomial => {
                let m = p[0];
                1.0 - m + m * s
            }
            CatalogName::AlyBouzar => {
                let (alpha, theta) = (p[0], p[1]);
                1.0 - alpha * (1.0 - s) / (1.0 - theta * (1.0 - alpha) * s)
            }
            CatalogName::ZhuJoe => {
                let (alpha, gamma) = (p[0], p[1]);
                ((1.0 - alpha) + (alpha - gamma) * s)
                    / ((1.0 - alpha * gamma) - (1.0 - alpha) * gamma * s)
            }
            CatalogName::Iterated => {
                let (rho, alpha) = (p[0], p[1]);
                1.0 - alpha * rho * (1.0 - s) / (1.0 + alpha - s)
            }
            CatalogName::Negbin => {
                let alpha = p[0];
                1.0 / (1.0 + alpha * (1.0 - s))
            }
            CatalogName::JaziAlamatsaz => {
                let (pi, rho) = (p[0], p[1]);
                1.0 - pi * (1.0 - s) / (1.0 - rho * s)
            }
            CatalogName::RhoBinomial => {
                let (alpha, rho) = (p[0], p[1]);
                (1.0 - (1.0 - s) * (alpha * (1.0 + rho) - rho)) / (1.0 + rho * (1.0 - s))
            }
            CatalogName::RhoNegbin => {
                let (alpha, rho) = (p[0], p[1]);
                (1.0 - rho * s) / (1.0 - rho * s + alpha * (1.0 - s))
            }
            CatalogName::BourguignonWeiss => {
                let (alpha, beta) = (p[0], p[1]);
                (1.0 - alpha * (1.0 - s)) / (1.0 + beta * (1.0 - s))
            }
        }
    }
}

fn domain_err(name: CatalogName, constraint: &str, got: &[f64]) -> Error {
    Error::Constraint(format!(
        "{name} operator requires {constraint}, got parameters {got:?}"
    ))
}

/// Maps a cataloged operator's native parameters onto (m, r), validating
/// the native domain first. The mapped point always lands in the parameter
/// region; `is_thinning` records whether it shrinks means.
pub fn catalog_map(name: CatalogName, native_params: &[f64]) -> Result<OperatorCatalogEntry> {
    let p = native_params;
    if p.len() != name.arity() {
        return Err(Error::Parse(format!(
            "{name} operator takes {} parameter(s), got {}",
            name.arity(),
            p.len()
        )));
    }
    if p.iter().any(|v| !v.is_finite()) {
        return Err(domain_err(name, "finite parameters", p));
    }
    let (m, r) = match name {
        CatalogName::Binomial => {
            let m = p[0];
            if !(m > 0.0 && m <= 1.0) {
                return Err(domain_err(name, "survival probability in (0, 1]", p));
            }
            (m, 0.0)
        }
        CatalogName::AlyBouzar => {
            let (alpha, theta) = (p[0], p[1]);
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(domain_err(name, "alpha in (0, 1)", p));
            }
            if !(0.0..=1.0).contains(&theta) {
                return Err(domain_err(name, "theta in [0, 1]", p));
            }
            let denom = 1.0 - theta * (1.0 - alpha);
            (alpha / denom, theta * (1.0 - alpha) / denom)
        }
        CatalogName::ZhuJoe => {
            let (alpha, gamma) = (p[0], p[1]);
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(domain_err(name, "alpha in (0, 1]", p));
            }
            if !(0.0..1.0).contains(&gamma) {
                return Err(domain_err(name, "gamma in [0, 1)", p));
            }
            (alpha, gamma * (1.0 - alpha) / (1.0 - gamma))
        }
        CatalogName::Iterated => {
            let (rho, alpha) = (p[0], p[1]);
            if !(rho > 0.0 && rho < 1.0) {
                return Err(domain_err(name, "rho in (0, 1)", p));
            }
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(domain_err(name, "alpha in (0, 1)", p));
            }
            (rho, 1.0 / alpha)
        }
        CatalogName::Negbin => {
            let alpha = p[0];
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(domain_err(name, "alpha in (0, 1)", p));
            }
            (alpha, alpha)
        }
        CatalogName::JaziAlamatsaz => {
            let (pi, rho) = (p[0], p[1]);
            if !(pi > 0.0 && pi <= 1.0) {
                return Err(domain_err(name, "pi in (0, 1]", p));
            }
            if !(0.0..1.0).contains(&rho) {
                return Err(domain_err(name, "rho in [0, 1)", p));
            }
            (pi / (1.0 - rho), rho / (1.0 - rho))
        }
        CatalogName::RhoBinomial => {
            let (alpha, rho) = (p[0], p[1]);
            if !(0.0..1.0).contains(&rho) {
                return Err(domain_err(name, "rho in [0, 1)", p));
            }
            if !(alpha > 0.0 && alpha < 1.0 / (1.0 + rho)) {
                return Err(domain_err(name, "alpha in (0, 1/(1+rho))", p));
            }
            (alpha * (1.0 + rho), rho)
        }
        CatalogName::RhoNegbin => {
            let (alpha, rho) = (p[0], p[1]);
            if !(0.0..1.0).contains(&rho) {
                return Err(domain_err(name, "rho in [0, 1)", p));
            }
            if !(alpha > 0.0 && alpha < 1.0 - rho) {
                return Err(domain_err(name, "alpha in (0, 1-rho)", p));
            }
            (alpha / (1.0 - rho), (alpha + rho) / (1.0 - rho))
        }
        CatalogName::BourguignonWeiss => {
            let (alpha, beta) = (p[0], p[1]);
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(domain_err(name, "alpha in (0, 1)", p));
            }
            if !(beta > 0.0) {
                return Err(domain_err(name, "beta > 0", p));
            }
            (alpha + beta, beta)
        }
    };
    let mapped = ThinningParams::new(m, r)?;
    Ok(OperatorCatalogEntry {
        name,
        native_params: p.to_vec(),
        mapped,
        is_thinning: mapped.m < 1.0,
    })
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
