//! CSV renderings of curves, scores, KPIs and comparisons.

use std::io::Write;

use itfleet_core::health::AhiScore;
use itfleet_core::sim::{AggregateYear, ComparisonReport, SimulationReport};
use itfleet_core::survival::SurvivalCurve;
use itfleet_core::VoltageClass;

pub const KM_HEADER: [&str; 5] = ["family", "t", "n_at_risk", "d_events", "survival"];
pub const AHI_HEADER: [&str; 7] = ["asset_id", "voltage_kv", "age", "apparent_age", "score", "band", "basis"];
pub const KPI_HEADER: [&str; 10] = [
    "year",
    "replication",
    "capex",
    "opex",
    "totex",
    "inspection_hours",
    "unavailability_hours",
    "failures",
    "replacements",
    "backlog_hours",
];

/// Kaplan-Meier rows; each family starts with its `t = 0` origin so a curve
/// without events still shows `S = 1`.
pub fn write_km_rows(w: &mut csv::Writer<impl Write>, family: VoltageClass, curve: &SurvivalCurve) -> csv::Result<()> {
    let label = family.label();
    w.write_record([label, "0", &curve.n_total.to_string(), "0", "1"])?;
    for p in &curve.points {
        w.write_record([
            label,
            &p.time.to_string(),
            &p.at_risk.to_string(),
            &p.events.to_string(),
            &p.survival.to_string(),
        ])?;
    }
    Ok(())
}

pub struct AhiRow<'a> {
    pub asset_id: &'a str,
    pub voltage_kv: u16,
    pub age: f64,
    pub apparent_age: f64,
    pub score: AhiScore,
}

pub fn write_ahi_row(w: &mut csv::Writer<impl Write>, r: &AhiRow<'_>) -> csv::Result<()> {
    w.write_record([
        r.asset_id,
        &r.voltage_kv.to_string(),
        &r.age.to_string(),
        &r.apparent_age.to_string(),
        &r.score.score().to_string(),
        r.score.band().label(),
        r.score.basis().label(),
    ])
}

pub fn write_kpis(report: &SimulationReport, sink: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(KPI_HEADER)?;
    for s in &report.replications {
        for y in &s.years {
            w.write_record([
                y.year.to_string(),
                s.replication.to_string(),
                y.capex.to_string(),
                y.opex.to_string(),
                y.totex.to_string(),
                y.inspection_hours.to_string(),
                y.unavailability_hours.to_string(),
                y.failures.to_string(),
                y.replacements.to_string(),
                y.backlog_hours.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_comparison(c: &ComparisonReport, sink: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["year", "totex_a", "totex_b", "delta", "cumulative_a", "cumulative_b", "cumulative_delta"])?;
    for y in &c.years {
        w.write_record([
            y.year.to_string(),
            y.totex_a.to_string(),
            y.totex_b.to_string(),
            y.delta.to_string(),
            y.cumulative_a.to_string(),
            y.cumulative_b.to_string(),
            y.cumulative_delta.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Mean CAPEX and OPEX per year (stacking to mean TOTEX) with the TOTEX
/// 10-90 % band.
pub fn write_totex_series(aggregates: &[AggregateYear], sink: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["year", "capex_mean", "opex_mean", "totex_mean", "totex_p10", "totex_p90"])?;
    for a in aggregates {
        w.write_record([
            a.year.to_string(),
            a.capex.mean.to_string(),
            a.opex.mean.to_string(),
            a.totex.mean.to_string(),
            a.totex.p10.to_string(),
            a.totex.p90.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
