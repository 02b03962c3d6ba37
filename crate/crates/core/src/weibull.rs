//! Two-parameter Weibull reliability laws.
//!
//! `F(t) = 1 - exp(-(t/eta)^beta)`, with shape `beta` and scale `eta` in
//! years. Laws can be fitted by censored maximum likelihood
//! ([`fit_weibull_mle`]) or by least squares on a Kaplan-Meier curve
//! ([`fit_weibull_rank_regression`]).

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fleet::{LifetimeObservation, PerClass, VoltageClass};
use crate::survival::{km_fit, SurvivalCurve};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeibullLaw {
    pub beta: f64,
    pub eta: f64,
}

/// Reference fitted laws for the three voltage families.
pub const REFERENCE_110: WeibullLaw = WeibullLaw { beta: 6.67, eta: 63.79 };
pub const REFERENCE_150: WeibullLaw = WeibullLaw { beta: 6.42, eta: 74.20 };
pub const REFERENCE_220_380: WeibullLaw = WeibullLaw { beta: 5.65, eta: 77.05 };

/// Named fixtures: `(name, family, law)`.
pub const FIXTURES: [(&str, VoltageClass, WeibullLaw); 3] = [
    ("reference-110", VoltageClass::V110, REFERENCE_110),
    ("reference-150", VoltageClass::V150, REFERENCE_150),
    ("reference-220_380", VoltageClass::V220And380, REFERENCE_220_380),
];

pub fn fixture(name: &str) -> Option<WeibullLaw> {
    FIXTURES.iter().find(|f| f.0 == name).map(|f| f.2)
}

pub fn reference_laws() -> PerClass<WeibullLaw> {
    PerClass { v110: REFERENCE_110, v150: REFERENCE_150, v220_380: REFERENCE_220_380 }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() {
        Err(Error::NonFinite(t))
    } else if t < 0.0 {
        Err(Error::NegativeTime(t))
    } else {
        Ok(())
    }
}

impl WeibullLaw {
    pub fn new(beta: f64, eta: f64) -> Result<Self> {
        let law = WeibullLaw { beta, eta };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::InvalidParameter(alloc::format!("shape must be positive, got {}", self.beta)));
        }
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::InvalidParameter(alloc::format!("scale must be positive, got {}", self.eta)));
        }
        Ok(())
    }

    /// `(t/eta)^beta` without argument checks; `t` must be non-negative.
    #[inline]
    pub fn hazard_integral(&self, t: f64) -> f64 {
        libm::pow(t / self.eta, self.beta)
    }

    pub fn cumulative_hazard(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.hazard_integral(t))
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(-libm::expm1(-self.hazard_integral(t)))
    }

    pub fn survival(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(libm::exp(-self.hazard_integral(t)))
    }

    pub fn pdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        let z = t / self.eta;
        Ok(self.beta / self.eta * libm::pow(z, self.beta - 1.0) * libm::exp(-libm::pow(z, self.beta)))
    }

    /// Instantaneous failure rate.
    pub fn hazard_rate(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.beta / self.eta * libm::pow(t / self.eta, self.beta - 1.0))
    }

    pub fn median(&self) -> f64 {
        self.eta * libm::pow(core::f64::consts::LN_2, 1.0 / self.beta)
    }

    /// Age at which survival equals `s`, for `s` in `(0, 1]`.
    pub fn inverse_survival(&self, s: f64) -> f64 {
        self.eta * libm::pow(-libm::log(s), 1.0 / self.beta)
    }

    /// Probability of failing within `window` years given survival to `t`:
    /// `1 - S(t + window) / S(t)`, evaluated as `1 - exp(-(H(t + window) - H(t)))`
    /// so that it stays accurate where `S(t)` underflows.
    pub fn conditional_failure_probability(&self, t: f64, window: f64) -> Result<f64> {
        check_time(t)?;
        if !(window > 0.0 && window.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!("window must be positive, got {window}")));
        }
        Ok(self.conditional_failure_probability_unchecked(t, window))
    }

    #[inline]
    pub(crate) fn conditional_failure_probability_unchecked(&self, t: f64, window: f64) -> f64 {
        let dh = self.hazard_integral(t + window) - self.hazard_integral(t);
        -libm::expm1(-dh)
    }
}

/// Outcome details of a maximum-likelihood fit.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FitDiagnostics {
    pub event_count: usize,
    pub censored_count: usize,
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Profile-equation residual at the returned shape.
    pub residual: f64,
}

/// Solver settings for [`fit_weibull_mle_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleOptions {
    pub beta_min: f64,
    pub beta_max: f64,
    /// Bound on the absolute profile residual.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for MleOptions {
    fn default() -> Self {
        MleOptions { beta_min: 0.05, beta_max: 100.0, tolerance: 1e-10, max_iterations: 200 }
    }
}

/// Right-censored log-likelihood: events contribute `ln f(t)`, censored
/// observations `ln S(t)`.
pub fn log_likelihood(law: &WeibullLaw, observations: &[LifetimeObservation]) -> f64 {
    let ln_beta = libm::log(law.beta);
    let ln_eta = libm::log(law.eta);
    observations
        .iter()
        .map(|o| {
            let h = law.hazard_integral(o.duration);
            if o.event {
                ln_beta - law.beta * ln_eta + (law.beta - 1.0) * libm::log(o.duration) - h
            } else {
                -h
            }
        })
        .sum()
}

/// Profile score in the shape parameter, on durations scaled into `(0, 1]`.
struct Profile {
    /// `(ln x)` for every observation with positive duration.
    ln_x: Vec<f64>,
    mean_ln_event: f64,
}

impl Profile {
    /// Returns `(S0, g, g')` where `S0 = sum x^beta` and
    /// `g = S1/S0 - 1/beta - mean(ln x_events)`.
    fn eval(&self, beta: f64) -> (f64, f64, f64) {
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for &l in &self.ln_x {
            let w = libm::exp(beta * l);
            s0 += w;
            s1 += w * l;
            s2 += w * l * l;
        }
        let ratio = s1 / s0;
        let g = ratio - 1.0 / beta - self.mean_ln_event;
        let dg = s2 / s0 - ratio * ratio + 1.0 / (beta * beta);
        (s0, g, dg)
    }
}

pub fn fit_weibull_mle(observations: &[LifetimeObservation]) -> Result<(WeibullLaw, FitDiagnostics)> {
    fit_weibull_mle_with(observations, &MleOptions::default())
}

/// Censored maximum-likelihood fit.
///
/// For a fixed shape the scale has the closed form
/// `eta = (sum_all t^beta / r)^(1/beta)` with `r` events, which leaves a
/// one-dimensional, monotone profile equation in `beta`. It is solved by
/// Newton steps inside a shrinking bracket, falling back to bisection when
/// a step leaves the bracket. The starting point comes from rank
/// regression on the Kaplan-Meier curve.
pub fn fit_weibull_mle_with(
    observations: &[LifetimeObservation],
    options: &MleOptions,
) -> Result<(WeibullLaw, FitDiagnostics)> {
    let mut events = 0usize;
    let mut max_t = 0.0f64;
    for o in observations {
        if !o.duration.is_finite() {
            return Err(Error::NonFinite(o.duration));
        }
        if o.duration < 0.0 {
            return Err(Error::NegativeDuration(o.duration));
        }
        if o.event {
            if o.duration == 0.0 {
                return Err(Error::InvalidParameter("zero-duration event".into()));
            }
            events += 1;
        }
        max_t = max_t.max(o.duration);
    }
    if events < 2 {
        return Err(Error::InsufficientEvents { found: events, required: 2 });
    }
    let censored = observations.len() - events;

    // Zero-duration censorings contribute nothing to any sum.
    let ln_x: Vec<f64> = observations
        .iter()
        .filter(|o| o.duration > 0.0)
        .map(|o| libm::log(o.duration / max_t))
        .collect();
    let mean_ln_event = observations
        .iter()
        .filter(|o| o.event)
        .map(|o| libm::log(o.duration / max_t))
        .sum::<f64>()
        / events as f64;
    let profile = Profile { ln_x, mean_ln_event };

    let mut diagnostics = FitDiagnostics {
        event_count: events,
        censored_count: censored,
        log_likelihood: f64::NAN,
        iterations: 0,
        converged: false,
        residual: f64::NAN,
    };

    let (mut lo, mut hi) = (options.beta_min, options.beta_max);
    let (_, g_lo, _) = profile.eval(lo);
    let (_, g_hi, _) = profile.eval(hi);
    if !(g_lo <= 0.0 && g_hi >= 0.0) {
        // root outside the search interval, e.g. zero-variance samples
        diagnostics.residual = if g_hi < 0.0 { g_hi } else { g_lo };
        return Err(Error::NonConvergence { diagnostics });
    }

    let mut beta = km_fit(observations)
        .ok()
        .and_then(|c| fit_weibull_rank_regression(&c).ok())
        .map(|l| l.beta)
        .filter(|b| *b > lo && *b < hi)
        .unwrap_or(1.0_f64.clamp(lo, hi));

    for iteration in 1..=options.max_iterations {
        let (s0, g, dg) = profile.eval(beta);
        diagnostics.iterations = iteration;
        diagnostics.residual = g;
        if g.abs() <= options.tolerance {
            let eta = max_t * libm::pow(s0 / events as f64, 1.0 / beta);
            let law = WeibullLaw { beta, eta };
            diagnostics.converged = true;
            diagnostics.log_likelihood = log_likelihood(&law, observations);
            return Ok((law, diagnostics));
        }
        if g < 0.0 {
            lo = beta;
        } else {
            hi = beta;
        }
        let newton = beta - g / dg;
        beta = if newton.is_finite() && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    Err(Error::NonConvergence { diagnostics })
}

/// Least-squares line through `(ln t, ln(-ln S))` over points with
/// `0 < S < 1`: the slope is the shape and `eta = exp(-intercept / beta)`.
pub fn fit_weibull_rank_regression(curve: &SurvivalCurve) -> Result<WeibullLaw> {
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|p| p.survival > 0.0 && p.survival < 1.0 && p.time > 0.0)
        .map(|p| (libm::log(p.time), libm::log(-libm::log(p.survival))))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientPoints { found: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::InsufficientPoints { found: 1 });
    }
    let beta = sxy / sxx;
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!("non-positive fitted shape {beta}")));
    }
    let intercept = my - beta * mx;
    WeibullLaw::new(beta, libm::exp(-intercept / beta))
}
