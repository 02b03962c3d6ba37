use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::fleet::PerClass;
use crate::health::DEFAULT_CONDITION_TRIGGER_AGE;
use crate::sim::activity::Catalog;
use crate::weibull::{reference_laws, WeibullLaw};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", deny_unknown_fields))]
pub enum ReplacementTrigger {
    /// Replace at a fixed real age (years).
    TimeBased { age: f64 },
    /// Replace when the apparent age reaches the trigger (years).
    ConditionBased { trigger_apparent_age: f64 },
}

/// A recurring inspection: every `interval_months`, priced as `activity`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Cadence {
    pub interval_months: u32,
    pub activity: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", deny_unknown_fields))]
pub enum InspectionPlan {
    #[default]
    None,
    /// Inspections start once the real age reaches `start_age` years.
    Periodic { start_age: f64, cadences: Vec<Cadence> },
}

pub const MAX_CADENCES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct FamilyPolicy {
    pub replacement: ReplacementTrigger,
    #[cfg_attr(feature = "serde", serde(default))]
    pub inspection: InspectionPlan,
}

pub type Policy = PerClass<FamilyPolicy>;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", deny_unknown_fields))]
pub enum ResourceModel {
    Unconstrained,
    Constrained { fte_count: u32, hours_per_fte_per_year: f64 },
}

/// Yearly working hours per FTE used by the built-in scenarios.
pub const DEFAULT_HOURS_PER_FTE_PER_YEAR: f64 = 1600.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", deny_unknown_fields))]
pub enum DegradationDistribution {
    Constant(f64),
    /// `exp(N(mu, sigma^2))`.
    Lognormal { mu: f64, sigma: f64 },
}

/// Which age drives the failure hazard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum HazardAge {
    #[default]
    Real,
    Apparent,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Scenario {
    pub name: String,
    /// Calendar date of simulation year 0; fleet ages are taken at this date.
    #[cfg_attr(feature = "serde", serde(default = "default_start_date"))]
    pub start_date: NaiveDate,
    #[cfg_attr(feature = "serde", serde(default = "default_horizon"))]
    pub horizon_years: u32,
    #[cfg_attr(feature = "serde", serde(default = "default_tick"))]
    pub tick_months: u32,
    pub laws: PerClass<WeibullLaw>,
    pub policy: Policy,
    #[cfg_attr(feature = "serde", serde(rename = "activities"))]
    pub catalog: Catalog,
    pub resources: ResourceModel,
    #[cfg_attr(feature = "serde", serde(default = "default_true"))]
    pub failures_enabled: bool,
    #[cfg_attr(feature = "serde", serde(default))]
    pub hazard_age: HazardAge,
    #[cfg_attr(feature = "serde", serde(default = "default_degradation"))]
    pub degradation: DegradationDistribution,
    #[cfg_attr(feature = "serde", serde(default = "default_replications"))]
    pub replications: u32,
    #[cfg_attr(feature = "serde", serde(default))]
    pub master_seed: u64,
}

pub fn default_start_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2021, 7, 1).unwrap()
}

#[cfg(feature = "serde")]
fn default_horizon() -> u32 {
    100
}
#[cfg(feature = "serde")]
fn default_tick() -> u32 {
    1
}
#[cfg(feature = "serde")]
fn default_true() -> bool {
    true
}
#[cfg(feature = "serde")]
fn default_degradation() -> DegradationDistribution {
    DegradationDistribution::Constant(1.0)
}
#[cfg(feature = "serde")]
fn default_replications() -> u32 {
    1
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidScenario(msg.into()))
}

impl Scenario {
    pub fn ticks(&self) -> u32 {
        self.horizon_years * 12 / self.tick_months
    }

    pub fn tick_years(&self) -> f64 {
        self.tick_months as f64 / 12.0
    }

    /// Person-hours available per tick; `None` when unconstrained.
    pub fn capacity_per_tick(&self) -> Option<f64> {
        match self.resources {
            ResourceModel::Unconstrained => None,
            ResourceModel::Constrained { fte_count, hours_per_fte_per_year } => {
                Some(fte_count as f64 * hours_per_fte_per_year * self.tick_years())
            }
        }
    }

    /// Checks everything that does not depend on the fleet. Messages name
    /// the offending field path.
    pub fn validate(&self) -> Result<()> {
        if self.horizon_years == 0 {
            return invalid("horizon_years: must be positive");
        }
        if self.tick_months == 0 || self.tick_months > 12 || 12 % self.tick_months != 0 {
            return invalid("tick_months: must divide 12");
        }
        if self.replications == 0 {
            return invalid("replications: must be at least 1");
        }
        for (class, law) in self.laws.iter() {
            law.validate().map_err(|e| Error::InvalidScenario(format!("laws.{class}: {e}")))?;
        }
        self.catalog.validate().map_err(|e| match e {
            Error::InvalidScenario(m) => Error::InvalidScenario(format!("activities: {m}")),
            other => other,
        })?;
        for (class, family) in self.policy.iter() {
            let path = format!("policy.{class}");
            match family.replacement {
                ReplacementTrigger::TimeBased { age } if !(age > 0.0 && age.is_finite()) => {
                    return invalid(format!("{path}.replacement.time_based.age: must be positive"));
                }
                ReplacementTrigger::ConditionBased { trigger_apparent_age: a } if !(a > 0.0 && a.is_finite()) => {
                    return invalid(format!("{path}.replacement.condition_based.trigger_apparent_age: must be positive"));
                }
                _ => {}
            }
            if let InspectionPlan::Periodic { start_age, cadences } = &family.inspection {
                if !(*start_age > 0.0 && start_age.is_finite()) {
                    return invalid(format!("{path}.inspection.periodic.start_age: must be positive"));
                }
                if cadences.is_empty() || cadences.len() > MAX_CADENCES {
                    return invalid(format!("{path}.inspection.periodic.cadences: need 1 to {MAX_CADENCES} entries"));
                }
                for (i, c) in cadences.iter().enumerate() {
                    if c.interval_months == 0 {
                        return invalid(format!("{path}.inspection.periodic.cadences[{i}].interval_months: must be positive"));
                    }
                    if self.catalog.by_name(&c.activity).is_none() {
                        return invalid(format!(
                            "{path}.inspection.periodic.cadences[{i}].activity: unknown activity '{}'",
                            c.activity
                        ));
                    }
                }
            }
        }
        match self.resources {
            ResourceModel::Unconstrained => {}
            ResourceModel::Constrained { hours_per_fte_per_year: h, .. } => {
                if !(h > 0.0 && h.is_finite()) {
                    return invalid("resources.constrained.hours_per_fte_per_year: must be positive");
                }
            }
        }
        match self.degradation {
            DegradationDistribution::Constant(r) if !(r > 0.0 && r.is_finite()) => {
                return invalid("degradation.constant: rate must be positive");
            }
            DegradationDistribution::Lognormal { mu, sigma } if !(mu.is_finite() && sigma >= 0.0 && sigma.is_finite()) => {
                return invalid("degradation.lognormal: need finite mu and sigma >= 0");
            }
            _ => {}
        }
        Ok(())
    }
}

/// Names of the built-in scenarios: `{time-based, condition-based}` x
/// `{unconstrained, fte40, fte60}`.
pub const BUILTIN_SCENARIOS: [&str; 6] = [
    "time-based-unconstrained",
    "time-based-fte40",
    "time-based-fte60",
    "condition-based-unconstrained",
    "condition-based-fte40",
    "condition-based-fte60",
];

/// Spread of per-asset degradation rates in the built-in scenarios; the
/// location keeps the mean rate at 1.
pub const BUILTIN_DEGRADATION_SIGMA: f64 = 0.15;

const DESIGN_LIFE_YEARS: f64 = 45.0;
const INSPECTION_START_AGE: f64 = 25.0;

fn reference_inspections() -> InspectionPlan {
    InspectionPlan::Periodic {
        start_age: INSPECTION_START_AGE,
        cadences: vec![
            Cadence { interval_months: 3, activity: "Inspection every 3 years".into() },
            Cadence { interval_months: 6, activity: "Inspection every 3 years".into() },
            Cadence { interval_months: 12, activity: "Inspection every 6 years".into() },
        ],
    }
}

/// Built-in scenario by name, see [`BUILTIN_SCENARIOS`].
///
/// 220/380 kV assets are always replaced at 45 years and never inspected.
/// 110/150 kV assets are inspected from age 25 on 3, 6 and 12 month
/// cadences and replaced at 45 years (time-based) or at apparent age 50
/// (condition-based).
pub fn builtin_scenario(name: &str) -> Option<Scenario> {
    let (strategy, resources) = name.rsplit_once('-')?;
    let condition = match strategy {
        "time-based" => false,
        "condition-based" => true,
        _ => return None,
    };
    let resources = match resources {
        "unconstrained" => ResourceModel::Unconstrained,
        "fte40" => ResourceModel::Constrained { fte_count: 40, hours_per_fte_per_year: DEFAULT_HOURS_PER_FTE_PER_YEAR },
        "fte60" => ResourceModel::Constrained { fte_count: 60, hours_per_fte_per_year: DEFAULT_HOURS_PER_FTE_PER_YEAR },
        _ => return None,
    };
    let time_based = ReplacementTrigger::TimeBased { age: DESIGN_LIFE_YEARS };
    let low_voltage = FamilyPolicy {
        replacement: if condition {
            ReplacementTrigger::ConditionBased { trigger_apparent_age: DEFAULT_CONDITION_TRIGGER_AGE }
        } else {
            time_based
        },
        inspection: reference_inspections(),
    };
    let sigma = BUILTIN_DEGRADATION_SIGMA;
    Some(Scenario {
        name: name.to_string(),
        start_date: default_start_date(),
        horizon_years: 100,
        tick_months: 1,
        laws: reference_laws(),
        policy: PerClass {
            v110: low_voltage.clone(),
            v150: low_voltage,
            v220_380: FamilyPolicy { replacement: time_based, inspection: InspectionPlan::None },
        },
        catalog: Catalog::reference(),
        resources,
        failures_enabled: true,
        hazard_age: HazardAge::Real,
        degradation: DegradationDistribution::Lognormal { mu: -0.5 * sigma * sigma, sigma },
        replications: 20,
        master_seed: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_valid() {
        for name in BUILTIN_SCENARIOS {
            let s = builtin_scenario(name).unwrap();
            s.validate().unwrap();
            assert_eq!(s.ticks(), 1200);
        }
        assert!(builtin_scenario("time-based-fte50").is_none());
        assert!(builtin_scenario("other-unconstrained").is_none());
        let s = builtin_scenario("time-based-fte40").unwrap();
        assert!((s.capacity_per_tick().unwrap() - 40.0 * 1600.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn validation_names_paths() {
        let mut s = builtin_scenario("condition-based-unconstrained").unwrap();
        if let InspectionPlan::Periodic { cadences, .. } = &mut s.policy.v150.inspection {
            cadences[1].activity = "missing".into();
        }
        let err = s.validate().unwrap_err().to_string();
        assert!(err.contains("policy.V150.inspection.periodic.cadences[1].activity"), "{err}");

        let mut s = builtin_scenario("time-based-unconstrained").unwrap();
        s.tick_months = 5;
        assert!(s.validate().unwrap_err().to_string().contains("tick_months"));
        s.tick_months = 1;
        s.replications = 0;
        assert!(s.validate().is_err());
    }
}
