//! Adaptive quadrature on finite intervals.
//!
//! One engine serves the whole crate: adaptive bisection driven by an
//! embedded low/high rule pair (Simpson on the interval against Simpson on
//! its halves, with Richardson extrapolation of the accepted value). Local
//! tolerances are allocated proportionally to interval length, so the global
//! absolute target is met when every leaf is accepted. A scalar and a
//! vector-valued variant are provided; the latter controls the max-norm.

use crate::error::{Error, Result};
use crate::params::{ThinningParams, BOUNDARY_EPS};

/// Controls for the adaptive engine.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureOptions {
    /// Absolute accuracy target for the whole interval.
    pub abs_tol: f64,
    /// Maximum number of interval refinements before giving up.
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_intervals: 1_000_000,
        }
    }
}

/// A converged quadrature result.
#[derive(Clone, Debug)]
pub struct QuadratureOutcome {
    pub value: f64,
    /// Sum of accepted local error estimates.
    pub error_estimate: f64,
    /// Number of refined intervals consumed.
    pub intervals: usize,
}

struct ScalarState<'f> {
    f: &'f dyn Fn(f64) -> f64,
    budget: usize,
    used: usize,
    err_acc: f64,
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    (fa + 4.0 * fm + fb) * h / 6.0
}

fn refine_scalar(
    st: &mut ScalarState,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    coarse: f64,
    tol: f64,
) -> Result<f64> {
    if st.used >= st.budget {
        return Err(Error::Quadrature(format!(
            "interval budget exhausted near [{a}, {b}]"
        )));
    }
    st.used += 1;
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = (st.f)(lm);
    let frm = (st.f)(rm);
    if !flm.is_finite() || !frm.is_finite() {
        return Err(Error::Quadrature(format!(
            "integrand is not finite inside [{a}, {b}]"
        )));
    }
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let fine = left + right;
    let err = (fine - coarse).abs() / 15.0;
    if err <= tol || b - a < 1e-14 {
        st.err_acc += err;
        // Richardson extrapolation of the accepted pair
        return Ok(fine + (fine - coarse) / 15.0);
    }
    let half = 0.5 * tol;
    let l = refine_scalar(st, a, m, fa, flm, fm, left, half)?;
    let r = refine_scalar(st, m, b, fm, frm, fb, right, half)?;
    Ok(l + r)
}

/// Integrates `f` over `[a, b]` to the requested absolute accuracy.
pub fn adaptive_quadrature(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureOutcome> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Quadrature(format!("bad interval [{a}, {b}]")));
    }
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    if !fa.is_finite() || !fm.is_finite() || !fb.is_finite() {
        return Err(Error::Quadrature("integrand not finite at a node".into()));
    }
    let coarse = simpson(fa, fm, fb, b - a);
    let mut st = ScalarState {
        f: &f,
        budget: opts.max_intervals,
        used: 0,
        err_acc: 0.0,
    };
    let value = refine_scalar(&mut st, a, b, fa, fm, fb, coarse, opts.abs_tol)?;
    Ok(QuadratureOutcome {
        value,
        error_estimate: st.err_acc,
        intervals: st.used,
    })
}

// --------------------------------------------------------------------------
// vector-valued variant
// --------------------------------------------------------------------------

struct VecState<'f> {
    f: &'f dyn Fn(f64, &mut [f64]),
    dim: usize,
    budget: usize,
    used: usize,
}

fn eval_vec(st: &VecState, x: f64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; st.dim];
    (st.f)(x, &mut out);
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Quadrature(format!(
            "vector integrand not finite at {x}"
        )));
    }
    Ok(out)
}

fn simpson_vec(fa: &[f64], fm: &[f64], fb: &[f64], h: f64) -> Vec<f64> {
    fa.iter()
        .zip(fm)
        .zip(fb)
        .map(|((&a, &m), &b)| (a + 4.0 * m + b) * h / 6.0)
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn refine_vec(
    st: &mut VecState,
    a: f64,
    b: f64,
    fa: &[f64],
    fm: &[f64],
    fb: &[f64],
    coarse: &[f64],
    tol: f64,
    out: &mut [f64],
) -> Result<()> {
    if st.used >= st.budget {
        return Err(Error::Quadrature(format!(
            "interval budget exhausted near [{a}, {b}]"
        )));
    }
    st.used += 1;
    let m = 0.5 * (a + b);
    let flm = eval_vec(st, 0.5 * (a + m))?;
    let frm = eval_vec(st, 0.5 * (m + b))?;
    let left = simpson_vec(fa, &flm, fm, m - a);
    let right = simpson_vec(fm, &frm, fb, b - m);
    let err = left
        .iter()
        .zip(&right)
        .zip(coarse)
        .map(|((&l, &r), &c)| (l + r - c).abs() / 15.0)
        .fold(0.0f64, f64::max);
    if err <= tol || b - a < 1e-14 {
        for i in 0..st.dim {
            let fine = left[i] + right[i];
            out[i] += fine + (fine - coarse[i]) / 15.0;
        }
        return Ok(());
    }
    let half = 0.5 * tol;
    refine_vec(st, a, m, fa, &flm, fm, &left, half, out)?;
    refine_vec(st, m, b, fm, &frm, fb, &right, half, out)
}

/// Integrates a vector-valued `f(x, &mut slot)` over `[a, b]`, controlling
/// the max-norm of the local error. Returns the integral and the number of
/// refined intervals.
pub fn adaptive_quadrature_vec(
    f: impl Fn(f64, &mut [f64]),
    a: f64,
    b: f64,
    dim: usize,
    opts: &QuadratureOptions,
) -> Result<(Vec<f64>, usize)> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Quadrature(format!("bad interval [{a}, {b}]")));
    }
    let mut st = VecState {
        f: &f,
        dim,
        budget: opts.max_intervals,
        used: 0,
    };
    let fa = eval_vec(&st, a)?;
    let fm = eval_vec(&st, 0.5 * (a + b))?;
    let fb = eval_vec(&st, b)?;
    let coarse = simpson_vec(&fa, &fm, &fb, b - a);
    let mut out = vec![0.0; dim];
    refine_vec(
        &mut st,
        a,
        b,
        &fa,
        &fm,
        &fb,
        &coarse,
        opts.abs_tol,
        &mut out,
    )?;
    let used = st.used;
    Ok((out, used))
}

// --------------------------------------------------------------------------
// the stationarity integral
// --------------------------------------------------------------------------

/// Outcome of the stationarity integral test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntegralOutcome {
    /// The integral converges; a stationary distribution exists.
    Finite(f64),
    /// The integral diverges (no expectation contraction and a nonzero
    /// innovation mean).
    Divergent,
}

/// Evaluates `∫_0^1 (1 - phi(s)) / (psi_{m,r}(s) - s) ds`, the convergence
/// criterion for the iterated-thinning fixed point. `phi` is the innovation
/// pgf and `mu` its mean; the integrand extends continuously to `s = 1` with
/// value `mu / (1 - m)` when `m < 1`.
///
/// For `m = 1` the denominator degenerates to order `(1-s)^2` and the
/// integral diverges whenever `mu > 0`; that case is reported analytically
/// instead of being integrated.
pub fn integrate_criterion(
    phi: impl Fn(f64) -> f64,
    p: ThinningParams,
    mu: f64,
    opts: &QuadratureOptions,
) -> Result<IntegralOutcome> {
    if mu < 0.0 || !mu.is_finite() {
        return Err(Error::Constraint(format!(
            "innovation mean {mu} must be finite and nonnegative"
        )));
    }
    if mu == 0.0 {
        // innovation identically zero: the numerator vanishes
        return Ok(IntegralOutcome::Finite(0.0));
    }
    if p.m >= 1.0 - BOUNDARY_EPS {
        return Ok(IntegralOutcome::Divergent);
    }
    let limit = mu / (1.0 - p.m);
    let g = |s: f64| {
        if s >= 1.0 {
            return limit;
        }
        let denom = p.pgf_eval(s).expect("s in [0,1]") - s;
        (1.0 - phi(s)) / denom
    };
    let out = adaptive_quadrature(g, 0.0, 1.0, opts)?;
    Ok(IntegralOutcome::Finite(out.value))
}

// --------------------------------------------------------------------------
// tests
// --------------------------------------------------------------------------
