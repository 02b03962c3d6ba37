//! Asset health index (AHI) scoring and apparent age.
//!
//! Scores 1-6 come from the probability of failing within a short (3 y)
//! and a long (7 y) window; scores 7-10 come from the asset's age relative
//! to the family's average age. Probability bands take precedence and are
//! checked most severe first.

use alloc::format;

use crate::error::{Error, Result};
use crate::weibull::WeibullLaw;

/// Apparent age at which the red band starts (AHI 6).
pub const RED_TRIGGER_APPARENT_AGE: f64 = 50.0;
/// Apparent age at which the purple band starts (AHI 3).
pub const PURPLE_TRIGGER_APPARENT_AGE: f64 = 54.0;
/// Condition-based replacement fires at the first of the two triggers.
pub const DEFAULT_CONDITION_TRIGGER_AGE: f64 = if RED_TRIGGER_APPARENT_AGE < PURPLE_TRIGGER_APPARENT_AGE {
    RED_TRIGGER_APPARENT_AGE
} else {
    PURPLE_TRIGGER_APPARENT_AGE
};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct AhiConfig {
    pub short_window: f64,
    pub long_window: f64,
    /// Strictly descending thresholds for scores 1, 2, 3.
    pub short_thresholds: [f64; 3],
    /// Strictly descending thresholds for scores 4, 5, 6.
    pub long_thresholds: [f64; 3],
    /// Score 7 above this fraction of the average age.
    pub old_fraction: f64,
    /// Score 8 above this fraction (up to `old_fraction`).
    pub middle_fraction: f64,
    /// Score 10 below this age in years.
    pub young_age: f64,
}

impl Default for AhiConfig {
    fn default() -> Self {
        AhiConfig {
            short_window: 3.0,
            long_window: 7.0,
            short_thresholds: [0.8, 0.5, 0.2],
            long_thresholds: [0.8, 0.5, 0.2],
            old_fraction: 0.75,
            middle_fraction: 0.60,
            young_age: 5.0,
        }
    }
}

impl AhiConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, th) in [("short_thresholds", self.short_thresholds), ("long_thresholds", self.long_thresholds)] {
            let descending = th.windows(2).all(|w| w[0] > w[1]);
            if !descending || !th.iter().all(|p| *p > 0.0 && *p < 1.0) {
                return Err(Error::InvalidParameter(format!("{name} must be strictly descending in (0, 1)")));
            }
        }
        if !(self.short_window > 0.0 && self.long_window > 0.0) {
            return Err(Error::InvalidParameter("windows must be positive".into()));
        }
        if !(self.old_fraction > self.middle_fraction && self.middle_fraction > 0.0) {
            return Err(Error::InvalidParameter("age fractions must satisfy 0 < middle < old".into()));
        }
        if !(self.young_age >= 0.0) {
            return Err(Error::InvalidParameter("young_age must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Band {
    Purple,
    Red,
    Orange,
    Green,
}

impl Band {
    pub fn of_score(score: u8) -> Option<Band> {
        match score {
            1..=3 => Some(Band::Purple),
            4..=6 => Some(Band::Red),
            7 | 8 => Some(Band::Orange),
            9 | 10 => Some(Band::Green),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Band::Purple => "purple",
            Band::Red => "red",
            Band::Orange => "orange",
            Band::Green => "green",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Basis {
    Probability,
    Age,
}

impl Basis {
    pub fn label(self) -> &'static str {
        match self {
            Basis::Probability => "probability",
            Basis::Age => "age",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AhiScore {
    score: u8,
    band: Band,
    basis: Basis,
}

impl AhiScore {
    /// `None` for scores outside 1-10 or a basis that cannot produce them.
    pub fn new(score: u8, basis: Basis) -> Option<Self> {
        let band = Band::of_score(score)?;
        let ok = match basis {
            Basis::Probability => score <= 6,
            Basis::Age => score >= 7,
        };
        ok.then_some(AhiScore { score, band, basis })
    }

    pub fn score(&self) -> u8 {
        self.score
    }

    pub fn band(&self) -> Band {
        self.band
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")))
    }
}

/// Probability-band score 1-6, or `None` when no band matches.
pub fn ahi_from_probability(p_short: f64, p_long: f64, config: &AhiConfig) -> Result<Option<u8>> {
    check_probability(p_short)?;
    check_probability(p_long)?;
    if p_long < p_short {
        return Err(Error::InconsistentProbabilities { short: p_short, long: p_long });
    }
    let short = config.short_thresholds.iter().position(|&th| p_short >= th);
    let long = config.long_thresholds.iter().position(|&th| p_long >= th);
    Ok(match (short, long) {
        (Some(i), _) => Some(1 + i as u8),
        (None, Some(i)) => Some(4 + i as u8),
        (None, None) => None,
    })
}

/// Age-band score 7-10.
pub fn ahi_from_age(age: f64, average_age: f64, config: &AhiConfig) -> Result<u8> {
    if !(age >= 0.0) {
        return Err(Error::NegativeTime(age));
    }
    if age < config.young_age {
        // young assets score 10 whatever the fleet looks like, including a
        // brand-new fleet whose average age is zero
        return Ok(10);
    }
    if !(average_age > 0.0) {
        return Err(Error::InvalidParameter(format!("average age must be positive, got {average_age}")));
    }
    Ok(if age > config.old_fraction * average_age {
        7
    } else if age > config.middle_fraction * average_age {
        8
    } else {
        9
    })
}

/// Full AHI score for one asset; the law is evaluated at `apparent_age`.
pub fn score_asset(law: &WeibullLaw, apparent_age: f64, fleet_average_age: f64, config: &AhiConfig) -> Result<AhiScore> {
    let p_short = law.conditional_failure_probability(apparent_age, config.short_window)?;
    let p_long = law.conditional_failure_probability(apparent_age, config.long_window)?;
    // nested windows; guard against last-ulp disagreement
    let p_long = p_long.max(p_short);
    let score = match ahi_from_probability(p_short, p_long, config)? {
        Some(s) => AhiScore::new(s, Basis::Probability),
        None => AhiScore::new(ahi_from_age(apparent_age, fleet_average_age, config)?, Basis::Age),
    };
    Ok(score.expect("scores produced by the band functions are valid"))
}

/// Age at which the conditional failure probability over `window` reaches
/// `probability`, found by bisection on `[0, 10 eta]` to 1e-9 years.
pub fn threshold_age(law: &WeibullLaw, window: f64, probability: f64) -> Result<f64> {
    if !(law.beta > 1.0) {
        return Err(Error::NonMonotoneInversion(law.beta));
    }
    if !(probability > 0.0 && probability < 1.0) {
        return Err(Error::ProbabilityOutOfRange(probability));
    }
    let f = |t: f64| law.conditional_failure_probability(t, window);
    if f(0.0)? >= probability {
        return Ok(0.0);
    }
    let limit = 10.0 * law.eta;
    if f(limit)? < probability {
        return Err(Error::ThresholdNotReached { p: probability, limit });
    }
    let (mut lo, mut hi) = (0.0, limit);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < probability {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Per-asset degradation: apparent age = `rate * age + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DegradationState {
    pub degradation_rate: f64,
    pub apparent_age_offset: f64,
}

impl Default for DegradationState {
    fn default() -> Self {
        DegradationState { degradation_rate: 1.0, apparent_age_offset: 0.0 }
    }
}

impl DegradationState {
    pub fn with_rate(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("degradation rate must be positive, got {rate}")));
        }
        Ok(DegradationState { degradation_rate: rate, apparent_age_offset: 0.0 })
    }
}

pub fn apparent_age(age: f64, state: &DegradationState) -> f64 {
    (state.degradation_rate * age + state.apparent_age_offset).max(0.0)
}
