use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::money::Money;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ActivityKind {
    Inspection,
    PlannedReplacement,
    CorrectiveReplacement,
}

impl ActivityKind {
    pub fn label(self) -> &'static str {
        match self {
            ActivityKind::Inspection => "inspection",
            ActivityKind::PlannedReplacement => "planned_replacement",
            ActivityKind::CorrectiveReplacement => "corrective_replacement",
        }
    }

    pub fn is_replacement(self) -> bool {
        !matches!(self, ActivityKind::Inspection)
    }
}

/// One priced maintenance activity.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ActivitySpec {
    pub name: String,
    pub kind: ActivityKind,
    /// Voltages (kV) the activity applies to; empty means every voltage.
    #[cfg_attr(feature = "serde", serde(default))]
    pub voltage_kv: Vec<u16>,
    pub duration_hours: f64,
    /// Workers needed concurrently for the whole duration.
    pub required_fte: u32,
    pub material_cost: Money,
    pub workforce_cost: Money,
}

impl ActivitySpec {
    pub fn total_cost(&self) -> Money {
        self.material_cost + self.workforce_cost
    }

    pub fn person_hours(&self) -> f64 {
        self.duration_hours * self.required_fte as f64
    }

    /// Person-hours in thousandths, the unit of capacity bookkeeping.
    pub fn person_millihours(&self) -> u64 {
        libm::round(self.person_hours() * 1000.0) as u64
    }

    pub fn applies_to(&self, voltage_kv: u16) -> bool {
        self.voltage_kv.is_empty() || self.voltage_kv.contains(&voltage_kv)
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidScenario(format!("activity '{}': {what}", self.name)));
        if self.name.is_empty() {
            return bad("empty name");
        }
        if !(self.duration_hours >= 0.0 && self.duration_hours.is_finite()) {
            return bad("duration must be a non-negative number of hours");
        }
        if self.required_fte < 1 {
            return bad("required_fte must be at least 1");
        }
        if self.material_cost < Money::ZERO || self.workforce_cost < Money::ZERO {
            return bad("costs must be non-negative");
        }
        Ok(())
    }
}

/// Activity catalog. Lookups return the entry's index, which is stable for
/// the lifetime of the catalog.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Catalog {
    pub activities: Vec<ActivitySpec>,
}

fn spec(name: &str, kind: ActivityKind, kv: &[u16], hours: f64, fte: u32, material: i64, workforce: i64) -> ActivitySpec {
    ActivitySpec {
        name: name.into(),
        kind,
        voltage_kv: kv.to_vec(),
        duration_hours: hours,
        required_fte: fte,
        material_cost: Money::from_millis(material),
        workforce_cost: Money::from_millis(workforce),
    }
}

impl Catalog {
    /// The reference activity and cost table for instrument transformers.
    pub fn reference() -> Catalog {
        use ActivityKind::*;
        Catalog {
            activities: vec![
                spec("Inspection every 3 years", Inspection, &[], 0.5, 1, 0, 41_624),
                spec("Inspection every 6 years", Inspection, &[], 1.33, 2, 49_810, 180_180),
                spec("Replacement IT 110kV", PlannedReplacement, &[110], 40.0, 10, 8_211_000, 35_000_000),
                spec("Replacement IT 150kV", PlannedReplacement, &[150], 40.0, 10, 10_044_000, 35_000_000),
                spec("Replacement IT 220kV", PlannedReplacement, &[220], 40.0, 10, 15_000_000, 35_000_000),
                spec("Replacement IT 380kV", PlannedReplacement, &[380], 40.0, 10, 15_000_000, 35_000_000),
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.activities.iter().enumerate() {
            a.validate()?;
            if self.activities[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::InvalidScenario(format!("duplicate activity name '{}'", a.name)));
            }
        }
        Ok(())
    }

    pub fn get(&self, index: usize) -> &ActivitySpec {
        &self.activities[index]
    }

    pub fn by_name(&self, name: &str) -> Option<usize> {
        self.activities.iter().position(|a| a.name == name)
    }

    fn find(&self, kind: ActivityKind, voltage_kv: u16) -> Option<usize> {
        self.activities.iter().position(|a| a.kind == kind && a.applies_to(voltage_kv))
    }

    /// Replacement activity for a voltage. Corrective work uses a dedicated
    /// corrective entry when the catalog has one, else the planned entry.
    pub fn replacement(&self, voltage_kv: u16, corrective: bool) -> Result<usize> {
        let dedicated = if corrective { self.find(ActivityKind::CorrectiveReplacement, voltage_kv) } else { None };
        dedicated
            .or_else(|| self.find(ActivityKind::PlannedReplacement, voltage_kv))
            .ok_or_else(|| Error::CatalogGap {
                kind: String::from(if corrective {
                    ActivityKind::CorrectiveReplacement.label()
                } else {
                    ActivityKind::PlannedReplacement.label()
                }),
                voltage_kv,
            })
    }

    /// Named inspection activity applicable to a voltage.
    pub fn inspection(&self, name: &str, voltage_kv: u16) -> Result<usize> {
        self.by_name(name)
            .filter(|&i| self.activities[i].kind == ActivityKind::Inspection && self.activities[i].applies_to(voltage_kv))
            .ok_or_else(|| Error::CatalogGap { kind: format!("inspection '{name}'"), voltage_kv })
    }
}
