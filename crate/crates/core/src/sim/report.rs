//! KPI series, cross-replication aggregation and scenario comparison.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::money::Money;

/// KPIs of one simulation year.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KpiYear {
    pub year: u32,
    /// Replacement spending (planned and corrective).
    pub capex: Money,
    /// Inspection spending.
    pub opex: Money,
    pub totex: Money,
    pub inspection_hours: f64,
    pub unavailability_hours: f64,
    pub failures: u64,
    pub replacements: u64,
    /// Person-hours of pending requests at year end.
    pub backlog_hours: f64,
    /// Person-hours consumed by executed activities, in thousandths.
    pub executed_person_millihours: u64,
    /// Person-hours available over the year, in thousandths; `None` when
    /// resources are unconstrained.
    pub capacity_person_millihours: Option<u64>,
}

impl KpiYear {
    pub fn new(year: u32) -> Self {
        KpiYear {
            year,
            capex: Money::ZERO,
            opex: Money::ZERO,
            totex: Money::ZERO,
            inspection_hours: 0.0,
            unavailability_hours: 0.0,
            failures: 0,
            replacements: 0,
            backlog_hours: 0.0,
            executed_person_millihours: 0,
            capacity_person_millihours: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KpiSeries {
    pub replication: u32,
    pub years: Vec<KpiYear>,
}

impl KpiSeries {
    pub fn total_capex(&self) -> Money {
        self.years.iter().map(|y| y.capex).sum()
    }

    pub fn total_opex(&self) -> Money {
        self.years.iter().map(|y| y.opex).sum()
    }

    pub fn total_totex(&self) -> Money {
        self.years.iter().map(|y| y.totex).sum()
    }

    pub fn peak_replacements(&self) -> u64 {
        self.years.iter().map(|y| y.replacements).max().unwrap_or(0)
    }

    pub fn final_backlog_hours(&self) -> f64 {
        self.years.last().map_or(0.0, |y| y.backlog_hours)
    }
}

/// Mean and 10th/90th percentiles across replications.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Stat {
    pub mean: f64,
    pub p10: f64,
    pub p90: f64,
}

impl Stat {
    /// Values are consumed in replication order; percentiles interpolate
    /// linearly between order statistics.
    pub fn of(values: &[f64]) -> Stat {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Stat { mean, p10: percentile(&sorted, 0.10), p90: percentile(&sorted, 0.90) }
    }
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let hi = libm::ceil(pos) as usize;
    let frac = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AggregateYear {
    pub year: u32,
    /// Monetary statistics are in euros.
    pub capex: Stat,
    pub opex: Stat,
    pub totex: Stat,
    pub inspection_hours: Stat,
    pub unavailability_hours: Stat,
    pub failures: Stat,
    pub replacements: Stat,
    pub backlog_hours: Stat,
}

fn euros(m: Money) -> f64 {
    m.millis() as f64 / 1000.0
}

/// Per-year statistics over replications, aggregated in replication order.
pub fn aggregate_replications(series: &[KpiSeries]) -> Result<Vec<AggregateYear>> {
    let Some(first) = series.first() else {
        return Err(Error::Incomparable("no replications to aggregate".into()));
    };
    let years = first.years.len();
    if let Some(bad) = series.iter().find(|s| s.years.len() != years) {
        return Err(Error::Incomparable(format!(
            "replication {} has {} years, expected {years}",
            bad.replication,
            bad.years.len()
        )));
    }
    let mut ordered: Vec<&KpiSeries> = series.iter().collect();
    ordered.sort_by_key(|s| s.replication);
    let stat = |f: &dyn Fn(&KpiYear) -> f64, y: usize| -> Stat {
        let values: Vec<f64> = ordered.iter().map(|s| f(&s.years[y])).collect();
        Stat::of(&values)
    };
    Ok((0..years)
        .map(|y| AggregateYear {
            year: first.years[y].year,
            capex: stat(&|k| euros(k.capex), y),
            opex: stat(&|k| euros(k.opex), y),
            totex: stat(&|k| euros(k.totex), y),
            inspection_hours: stat(&|k| k.inspection_hours, y),
            unavailability_hours: stat(&|k| k.unavailability_hours, y),
            failures: stat(&|k| k.failures as f64, y),
            replacements: stat(&|k| k.replacements as f64, y),
            backlog_hours: stat(&|k| k.backlog_hours, y),
        })
        .collect())
}

/// Outcome of one scenario run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimulationReport {
    pub scenario: String,
    pub horizon_years: u32,
    pub tick_months: u32,
    pub master_seed: u64,
    pub fleet_size: usize,
    pub replications: Vec<KpiSeries>,
    pub aggregates: Vec<AggregateYear>,
}

impl SimulationReport {
    /// Mean over replications of the peak-year replacement count.
    pub fn mean_peak_replacements(&self) -> f64 {
        let n = self.replications.len() as f64;
        self.replications.iter().map(|s| s.peak_replacements() as f64).sum::<f64>() / n
    }

    /// Mean cumulative TOTEX over the horizon, in euros.
    pub fn mean_total_totex(&self) -> f64 {
        let n = self.replications.len() as f64;
        self.replications.iter().map(|s| euros(s.total_totex())).sum::<f64>() / n
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComparisonYear {
    pub year: u32,
    pub totex_a: f64,
    pub totex_b: f64,
    /// `totex_b - totex_a`.
    pub delta: f64,
    pub cumulative_a: f64,
    pub cumulative_b: f64,
    pub cumulative_delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComparisonReport {
    pub scenario_a: String,
    pub scenario_b: String,
    pub years: Vec<ComparisonYear>,
    /// First year in which the sign of the cumulative difference flips.
    pub crossover_year: Option<u32>,
}

/// Year-by-year comparison of mean TOTEX (`b` relative to `a`).
pub fn compare_scenarios(a: &SimulationReport, b: &SimulationReport) -> Result<ComparisonReport> {
    if a.horizon_years != b.horizon_years || a.tick_months != b.tick_months {
        return Err(Error::Incomparable(format!(
            "horizon/tick {}y/{}m vs {}y/{}m",
            a.horizon_years, a.tick_months, b.horizon_years, b.tick_months
        )));
    }
    if a.aggregates.len() != b.aggregates.len() {
        return Err(Error::Incomparable("different numbers of aggregated years".into()));
    }
    let mut years = Vec::with_capacity(a.aggregates.len());
    let (mut cum_a, mut cum_b) = (0.0, 0.0);
    let mut sign = 0.0f64;
    let mut crossover_year = None;
    for (ya, yb) in a.aggregates.iter().zip(&b.aggregates) {
        let (ta, tb) = (ya.totex.mean, yb.totex.mean);
        cum_a += ta;
        cum_b += tb;
        let cumulative_delta = cum_b - cum_a;
        let s = if cumulative_delta > 0.0 {
            1.0
        } else if cumulative_delta < 0.0 {
            -1.0
        } else {
            0.0
        };
        if s != 0.0 {
            if sign != 0.0 && s != sign && crossover_year.is_none() {
                crossover_year = Some(ya.year);
            }
            sign = s;
        }
        years.push(ComparisonYear {
            year: ya.year,
            totex_a: ta,
            totex_b: tb,
            delta: tb - ta,
            cumulative_a: cum_a,
            cumulative_b: cum_b,
            cumulative_delta,
        });
    }
    Ok(ComparisonReport { scenario_a: a.scenario.clone(), scenario_b: b.scenario.clone(), years, crossover_year })
}
