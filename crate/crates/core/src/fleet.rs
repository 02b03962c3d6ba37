//! Asset records, right-censored lifetime tables and synthetic fleets.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use chrono::{Days, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::weibull::WeibullLaw;
use crate::DAYS_PER_YEAR;

/// Statistical voltage family. 220 kV and 380 kV assets share one family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum VoltageClass {
    V110,
    V150,
    #[cfg_attr(feature = "serde", serde(rename = "V220_380"))]
    V220And380,
}

impl VoltageClass {
    pub const ALL: [VoltageClass; 3] = [VoltageClass::V110, VoltageClass::V150, VoltageClass::V220And380];

    pub fn from_kv(kv: u16) -> Option<Self> {
        match kv {
            110 => Some(VoltageClass::V110),
            150 => Some(VoltageClass::V150),
            220 | 380 => Some(VoltageClass::V220And380),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        match self {
            VoltageClass::V110 => 0,
            VoltageClass::V150 => 1,
            VoltageClass::V220And380 => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            VoltageClass::V110 => "V110",
            VoltageClass::V150 => "V150",
            VoltageClass::V220And380 => "V220_380",
        }
    }

    /// Accepts the labels produced by [`VoltageClass::label`] as well as
    /// plain kilovolt strings such as `"110"` or `"220_380"`.
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_uppercase().trim_start_matches('V') {
            "110" => Some(VoltageClass::V110),
            "150" => Some(VoltageClass::V150),
            "220_380" | "220/380" | "220-380" | "220" | "380" => Some(VoltageClass::V220And380),
            _ => None,
        }
    }
}

impl fmt::Display for VoltageClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One value per voltage family.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PerClass<T> {
    #[cfg_attr(feature = "serde", serde(rename = "V110"))]
    pub v110: T,
    #[cfg_attr(feature = "serde", serde(rename = "V150"))]
    pub v150: T,
    #[cfg_attr(feature = "serde", serde(rename = "V220_380"))]
    pub v220_380: T,
}

impl<T> PerClass<T> {
    pub fn from_fn(mut f: impl FnMut(VoltageClass) -> T) -> Self {
        PerClass {
            v110: f(VoltageClass::V110),
            v150: f(VoltageClass::V150),
            v220_380: f(VoltageClass::V220And380),
        }
    }

    pub fn get(&self, class: VoltageClass) -> &T {
        match class {
            VoltageClass::V110 => &self.v110,
            VoltageClass::V150 => &self.v150,
            VoltageClass::V220And380 => &self.v220_380,
        }
    }

    pub fn get_mut(&mut self, class: VoltageClass) -> &mut T {
        match class {
            VoltageClass::V110 => &mut self.v110,
            VoltageClass::V150 => &mut self.v150,
            VoltageClass::V220And380 => &mut self.v220_380,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (VoltageClass, &T)> {
        VoltageClass::ALL.into_iter().map(move |c| (c, self.get(c)))
    }
}

/// One physical instrument transformer.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AssetRecord {
    pub asset_id: String,
    /// Raw nominal voltage; costing distinguishes 220 kV from 380 kV.
    pub voltage_kv: u16,
    pub commission_date: NaiveDate,
    pub failure_date: Option<NaiveDate>,
    pub manufacturer: Option<String>,
}

impl AssetRecord {
    pub fn new(
        asset_id: impl Into<String>,
        voltage_kv: u16,
        commission_date: NaiveDate,
        failure_date: Option<NaiveDate>,
        manufacturer: Option<String>,
    ) -> Result<Self> {
        let record = AssetRecord {
            asset_id: asset_id.into(),
            voltage_kv,
            commission_date,
            failure_date,
            manufacturer,
        };
        record.validate()?;
        Ok(record)
    }

    pub fn validate(&self) -> Result<()> {
        if self.asset_id.is_empty() {
            return Err(self.invalid("empty asset_id"));
        }
        if VoltageClass::from_kv(self.voltage_kv).is_none() {
            return Err(self.invalid(&format!("unknown voltage {} kV", self.voltage_kv)));
        }
        if let Some(failed) = self.failure_date {
            if failed <= self.commission_date {
                return Err(self.invalid("failure before commission"));
            }
        }
        Ok(())
    }

    /// Panics on an unknown voltage; records built through
    /// [`AssetRecord::new`] are always valid.
    pub fn voltage_class(&self) -> VoltageClass {
        VoltageClass::from_kv(self.voltage_kv).expect("validated voltage")
    }

    fn invalid(&self, reason: &str) -> Error {
        Error::InvalidAsset { asset_id: self.asset_id.clone(), reason: reason.to_string() }
    }
}

/// Elapsed years between two dates as exact day count / 365.25.
pub fn years_between(from: NaiveDate, to: NaiveDate) -> f64 {
    (to - from).num_days() as f64 / DAYS_PER_YEAR
}

/// Right-censored lifetime of a single asset.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LifetimeObservation {
    pub duration: f64,
    /// `true` when the failure was observed, `false` when right-censored.
    pub event: bool,
    pub voltage_class: VoltageClass,
}

impl LifetimeObservation {
    pub fn event(duration: f64, voltage_class: VoltageClass) -> Self {
        LifetimeObservation { duration, event: true, voltage_class }
    }

    pub fn censored(duration: f64, voltage_class: VoltageClass) -> Self {
        LifetimeObservation { duration, event: false, voltage_class }
    }
}

/// Converts asset records into lifetimes observed up to `cutoff`.
///
/// Assets without a failure date are censored at the cutoff. There is no
/// left truncation: commission dates are known for every asset.
pub fn build_lifetime_table(assets: &[AssetRecord], cutoff: NaiveDate) -> Result<Vec<LifetimeObservation>> {
    assets
        .iter()
        .map(|a| {
            a.validate()?;
            if a.commission_date > cutoff {
                return Err(a.invalid("commissioned after cutoff"));
            }
            match a.failure_date {
                Some(failed) if failed > cutoff => Err(a.invalid("failure after cutoff (observation outside window)")),
                Some(failed) => Ok(LifetimeObservation::event(
                    years_between(a.commission_date, failed),
                    a.voltage_class(),
                )),
                None => Ok(LifetimeObservation::censored(
                    years_between(a.commission_date, cutoff),
                    a.voltage_class(),
                )),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassSummary {
    pub voltage_class: VoltageClass,
    pub total: usize,
    pub events: usize,
    pub censored: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AgeBucket {
    /// Inclusive lower edge in years; the bucket spans `[start, start + 5)`.
    pub start_years: u32,
    pub count: usize,
}

/// Population counts per family plus a 5-year age histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FleetSummary {
    /// Always one entry per family, in [`VoltageClass::ALL`] order.
    pub classes: Vec<ClassSummary>,
    /// Contiguous buckets from 0 up to the oldest observation.
    pub age_histogram: Vec<AgeBucket>,
}

impl FleetSummary {
    pub fn class(&self, class: VoltageClass) -> &ClassSummary {
        &self.classes[class.index()]
    }

    pub fn total(&self) -> usize {
        self.classes.iter().map(|c| c.total).sum()
    }
}

pub const AGE_BUCKET_YEARS: u32 = 5;

pub fn fleet_summary(observations: &[LifetimeObservation]) -> FleetSummary {
    let mut classes: Vec<ClassSummary> = VoltageClass::ALL
        .iter()
        .map(|&voltage_class| ClassSummary { voltage_class, total: 0, events: 0, censored: 0 })
        .collect();
    let mut histogram: Vec<usize> = Vec::new();
    for obs in observations {
        let row = &mut classes[obs.voltage_class.index()];
        row.total += 1;
        if obs.event {
            row.events += 1;
        } else {
            row.censored += 1;
        }
        let bucket = if obs.duration.is_finite() && obs.duration > 0.0 {
            (obs.duration / AGE_BUCKET_YEARS as f64) as usize
        } else {
            0
        };
        if histogram.len() <= bucket {
            histogram.resize(bucket + 1, 0);
        }
        histogram[bucket] += 1;
    }
    let age_histogram = histogram
        .into_iter()
        .enumerate()
        .map(|(i, count)| AgeBucket { start_years: i as u32 * AGE_BUCKET_YEARS, count })
        .collect();
    FleetSummary { classes, age_histogram }
}

/// Parameters for a seeded synthetic fleet.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SyntheticFleetSpec {
    pub sizes: PerClass<usize>,
    /// Inclusive range of commissioning years.
    pub first_year: i32,
    pub last_year: i32,
    pub seed: u64,
}

impl SyntheticFleetSpec {
    pub fn validate(&self) -> Result<()> {
        if self.first_year > self.last_year {
            return Err(Error::InvalidParameter(format!(
                "empty commission-year range {}..={}",
                self.first_year, self.last_year
            )));
        }
        if NaiveDate::from_ymd_opt(self.first_year, 1, 1).is_none()
            || NaiveDate::from_ymd_opt(self.last_year, 12, 31).is_none()
        {
            return Err(Error::InvalidParameter("commission years out of calendar range".into()));
        }
        Ok(())
    }
}

/// Generates a fleet with commission dates uniform over the year range.
///
/// Families are emitted in [`VoltageClass::ALL`] order; ids are
/// `IT<family>-<serial>`. Members of the 220/380 kV family are assigned
/// 220 kV or 380 kV with equal probability. No failure dates are set; see
/// [`with_sampled_failures`].
pub fn generate_synthetic_fleet(spec: &SyntheticFleetSpec) -> Result<Vec<AssetRecord>> {
    spec.validate()?;
    let first = NaiveDate::from_ymd_opt(spec.first_year, 1, 1).unwrap();
    let last = NaiveDate::from_ymd_opt(spec.last_year, 12, 31).unwrap();
    let span_days = (last - first).num_days() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.sizes.iter().map(|(_, n)| *n).sum());
    for (class, &n) in spec.sizes.iter() {
        let tag = &class.label()[1..];
        for serial in 1..=n {
            let offset = rng.random_range(0..=span_days);
            let commission_date = first + Days::new(offset);
            let voltage_kv = match class {
                VoltageClass::V110 => 110,
                VoltageClass::V150 => 150,
                VoltageClass::V220And380 => {
                    if rng.random::<bool>() {
                        220
                    } else {
                        380
                    }
                }
            };
            out.push(AssetRecord {
                asset_id: format!("IT{tag}-{serial:06}"),
                voltage_kv,
                commission_date,
                failure_date: None,
                manufacturer: None,
            });
        }
    }
    Ok(out)
}

/// Draws a lifetime for each asset from its family's law and records the
/// failure when it falls on or before `cutoff`.
///
/// Existing failure dates are overwritten. Lifetimes are rounded to whole
/// days, with a minimum of one day.
pub fn with_sampled_failures(
    assets: &[AssetRecord],
    laws: &PerClass<WeibullLaw>,
    cutoff: NaiveDate,
    seed: u64,
) -> Vec<AssetRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    assets
        .iter()
        .map(|a| {
            let law = laws.get(a.voltage_class());
            let u: f64 = rng.random();
            let life = law.inverse_survival(1.0 - u);
            let days = libm::round(life * DAYS_PER_YEAR).max(1.0);
            let failure = if days < 1.0e6 {
                a.commission_date.checked_add_days(Days::new(days as u64))
            } else {
                None
            };
            AssetRecord {
                failure_date: failure.filter(|d| *d <= cutoff),
                ..a.clone()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::Datelike;

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    #[test]
    fn lifetime_table_examples() {
        let cutoff = d(2021, 7, 1);
        let assets = [
            AssetRecord::new("A1", 110, d(2000, 1, 1), Some(d(2010, 1, 1)), Some("M3".into())).unwrap(),
            AssetRecord::new("A2", 380, d(2000, 1, 1), None, None).unwrap(),
            AssetRecord::new("A3", 150, d(2021, 7, 1), None, None).unwrap(),
        ];
        let table = build_lifetime_table(&assets, cutoff).unwrap();
        assert_eq!(table.len(), 3);
        assert!(table[0].event);
        assert!((table[0].duration - 3653.0 / 365.25).abs() < 1e-12);
        assert!((table[0].duration - 10.0).abs() < 0.01);
        assert!(!table[1].event);
        assert_eq!(table[1].voltage_class, VoltageClass::V220And380);
        assert!((table[1].duration - 21.5).abs() < 0.01);
        assert_eq!(table[2].duration, 0.0);
        assert!(!table[2].event);
    }

    #[test]
    fn failure_after_cutoff_is_rejected() {
        let a = AssetRecord::new("A1", 110, d(2000, 1, 1), Some(d(2022, 1, 1)), None).unwrap();
        let err = build_lifetime_table(&[a], d(2021, 7, 1)).unwrap_err();
        assert!(err.to_string().contains("outside window"), "{err}");
    }

    #[test]
    fn record_validation() {
        let err = AssetRecord::new("A3", 110, d(2010, 1, 1), Some(d(2005, 1, 1)), None).unwrap_err();
        assert!(err.to_string().contains("failure before commission"));
        assert!(AssetRecord::new("A4", 66, d(2010, 1, 1), None, None).is_err());
    }

    #[test]
    fn summary_counts() {
        assert_eq!(fleet_summary(&[]).total(), 0);
        assert!(fleet_summary(&[]).age_histogram.is_empty());
        let obs = [
            LifetimeObservation::event(3.0, VoltageClass::V110),
            LifetimeObservation::censored(12.0, VoltageClass::V110),
            LifetimeObservation::censored(7.0, VoltageClass::V150),
        ];
        let s = fleet_summary(&obs);
        assert_eq!(s.class(VoltageClass::V110).total, 2);
        assert_eq!(s.class(VoltageClass::V110).events, 1);
        assert_eq!(s.class(VoltageClass::V150).total, 1);
        assert_eq!(s.class(VoltageClass::V220And380).total, 0);
        let counts: Vec<usize> = s.age_histogram.iter().map(|b| b.count).collect();
        assert_eq!(counts, [1, 1, 1]);
        assert_eq!(s.age_histogram[2].start_years, 10);
    }

    #[test]
    fn synthetic_fleet_is_deterministic_and_sized() {
        let spec = SyntheticFleetSpec {
            sizes: PerClass { v110: 10, v150: 0, v220_380: 0 },
            first_year: 1980,
            last_year: 2020,
            seed: 42,
        };
        let a = generate_synthetic_fleet(&spec).unwrap();
        assert_eq!(a, generate_synthetic_fleet(&spec).unwrap());
        assert_eq!(a.len(), 10);
        assert!(a.iter().all(|r| r.commission_date.year() >= 1980 && r.commission_date.year() <= 2020));

        let reference_sized = SyntheticFleetSpec {
            sizes: PerClass { v110: 3168, v150: 10058, v220_380: 2982 },
            ..spec.clone()
        };
        let fleet = generate_synthetic_fleet(&reference_sized).unwrap();
        let obs = build_lifetime_table(&fleet, d(2021, 7, 1)).unwrap();
        let s = fleet_summary(&obs);
        assert_eq!(s.class(VoltageClass::V110).total, 3168);
        assert_eq!(s.class(VoltageClass::V150).total, 10058);
        assert_eq!(s.class(VoltageClass::V220And380).total, 2982);

        let empty = SyntheticFleetSpec { sizes: PerClass::default(), ..spec };
        assert!(generate_synthetic_fleet(&empty).unwrap().is_empty());
    }

    #[test]
    fn empty_year_range_rejected() {
        let spec = SyntheticFleetSpec { sizes: PerClass::default(), first_year: 2000, last_year: 1999, seed: 0 };
        assert!(generate_synthetic_fleet(&spec).is_err());
    }

    #[test]
    fn sampled_failures_respect_cutoff() {
        let spec = SyntheticFleetSpec {
            sizes: PerClass { v110: 500, v150: 0, v220_380: 0 },
            first_year: 1940,
            last_year: 2000,
            seed: 3,
        };
        let fleet = generate_synthetic_fleet(&spec).unwrap();
        let laws = PerClass::from_fn(|_| WeibullLaw::new(6.67, 63.79).unwrap());
        let cutoff = d(2021, 7, 1);
        let failed = with_sampled_failures(&fleet, &laws, cutoff, 9);
        assert!(failed.iter().all(|a| a.validate().is_ok()));
        assert!(failed.iter().filter_map(|a| a.failure_date).all(|f| f <= cutoff));
        let n = failed.iter().filter(|a| a.failure_date.is_some()).count();
        assert!(n > 50 && n < 450, "{n}");
    }
}
