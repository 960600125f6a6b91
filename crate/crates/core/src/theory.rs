//! Analytic AUC-ROC of the preferential-attachment predictor.
//!
//! If degrees are log-normal, `ln k ~ Normal(μ, σ²)`, then endpoints of
//! uniformly sampled edges are log-normal too with the location shifted to
//! `μ + σ²` and the same `σ`. Assuming the two endpoint degrees of a pair are
//! independent, `ln(k_i k_j)` is `Normal(2μ, 2σ²)` for a uniform negative
//! pair and `Normal(2μ + 2σ², 2σ²)` for a positive edge. The probability that
//! a positive outscores a negative is then
//!
//! ```text
//! AUC(σ) = 1 - ∫ φ(z) Φ(z - √2 σ) dz
//! ```
//!
//! with `φ`, `Φ` the standard normal density and distribution function.
//! The difference of the two log-scores is `Normal(2σ², 4σ²)`, so the same
//! value has the closed form `Φ(σ)`. [`predicted_auc_pa`] evaluates the
//! integral numerically and [`predicted_auc_pa_closed_form`] the closed form;
//! the two must agree to well below `1e-6`.

use serde::{Deserialize, Serialize};
use libm::erfc;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Absolute tolerance of the quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;

/// Half-width, in standard units, of the integration window.
const WINDOW: f64 = 10.0;

/// Location and scale of `ln k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNormalFit {
    pub mu: f64,
    pub sigma: f64,
    pub n_fitted: usize,
}

impl LogNormalFit {
    /// Maximum-likelihood fit to positive values: mean and population
    /// standard deviation of their logarithms.
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Result<LogNormalFit> {
        let logs: Vec<f64> = values.into_iter().map(f64::ln).collect();
        if logs.iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("log-normal fit needs positive finite values".into()));
        }
        if logs.len() < 2 {
            return Err(Error::Input(format!(
                "log-normal fit needs at least 2 values (got {})",
                logs.len()
            )));
        }
        let n = logs.len() as f64;
        let mu = logs.iter().sum::<f64>() / n;
        let var = logs.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / n;
        Ok(LogNormalFit {
            mu,
            sigma: var.sqrt(),
            n_fitted: logs.len(),
        })
    }
}

/// Fits a log-normal law to the degrees of `g`, skipping isolated nodes.
pub fn fit_lognormal_degree(g: &Graph) -> Result<LogNormalFit> {
    LogNormalFit::from_values(g.degrees().into_iter().filter(|&k| k >= 1).map(|k| k as f64))
}

/// Degree law of positive-edge endpoints: `(μ + σ², σ)`.
pub fn positive_degree_law(fit: &LogNormalFit) -> LogNormalFit {
    LogNormalFit {
        mu: fit.mu + fit.sigma * fit.sigma,
        ..*fit
    }
}

/// Standard normal distribution function.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Predicted PA AUC-ROC by numerical quadrature.
pub fn predicted_auc_pa(sigma: f64) -> Result<f64> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::Parameter(format!("sigma must be non-negative (got {sigma})")));
    }
    if sigma == 0.0 {
        // identical positive and negative score laws
        return Ok(0.5);
    }
    let shift = std::f64::consts::SQRT_2 * sigma;
    let integrand = |z: f64| std_normal_pdf(z) * std_normal_cdf(z - shift);
    let auc = 1.0 - integrate(integrand, -WINDOW, WINDOW + shift, QUADRATURE_TOLERANCE);
    debug_assert!(
        (auc - predicted_auc_pa_closed_form(sigma)?).abs() < 1e-6,
        "quadrature disagrees with the closed form at sigma = {sigma}"
    );
    Ok(auc)
}

/// Predicted PA AUC-ROC in closed form, `Φ(σ)`.
pub fn predicted_auc_pa_closed_form(sigma: f64) -> Result<f64> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::Parameter(format!("sigma must be non-negative (got {sigma})")));
    }
    Ok(std_normal_cdf(sigma))
}

/// Adaptive Simpson quadrature on `[a, b]` to absolute tolerance `tol`.
///
/// The interval is first cut into unit-width panels so narrow peaks are not
/// stepped over by the initial coarse estimate.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let panels = ((b - a).ceil() as usize).max(1);
    let h = (b - a) / panels as f64;
    let panel_tol = tol / panels as f64;
    (0..panels)
        .map(|p| {
            let lo = a + p as f64 * h;
            let hi = lo + h;
            let (flo, fhi, fmid) = (f(lo), f(hi), f(0.5 * (lo + hi)));
            let whole = simpson(lo, hi, flo, fmid, fhi);
            adapt(&f, lo, hi, flo, fmid, fhi, whole, panel_tol, 50)
        })
        .sum()
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}
