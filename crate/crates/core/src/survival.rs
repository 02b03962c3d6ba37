//! Kaplan-Meier product-limit estimation on right-censored lifetimes.
//!
//! The estimate is a right-continuous step function: the survival value
//! stored at an event time `t_i` already includes that time's events, so
//! `S(t)` multiplies the factors of every `t_i <= t`. At tied times events
//! are processed before censorings, i.e. assets censored at `t_i` are still
//! counted at risk for the events at `t_i`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::fleet::LifetimeObservation;

/// One distinct event time of the estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SurvivalPoint {
    pub time: f64,
    pub at_risk: usize,
    pub events: usize,
    /// Survival just after `time`.
    pub survival: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SurvivalCurve {
    pub points: Vec<SurvivalPoint>,
    pub n_total: usize,
}

/// A survival quantile, which may not exist when the curve stays high.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantile {
    Finite(f64),
    /// The curve never drops to the requested level.
    Unbounded,
}

impl Quantile {
    pub fn finite(self) -> Option<f64> {
        match self {
            Quantile::Finite(t) => Some(t),
            Quantile::Unbounded => None,
        }
    }
}

// Slack for products that should land exactly on the target level.
const LEVEL_EPS: f64 = 1e-12;

/// Fits the Kaplan-Meier estimate.
///
/// A sample without events yields the constant curve `S = 1` (no points).
pub fn km_fit(observations: &[LifetimeObservation]) -> Result<SurvivalCurve> {
    if observations.is_empty() {
        return Err(Error::InvalidParameter("no observations".into()));
    }
    let mut sorted: Vec<(f64, bool)> = Vec::with_capacity(observations.len());
    for obs in observations {
        if !obs.duration.is_finite() {
            return Err(Error::NonFinite(obs.duration));
        }
        if obs.duration < 0.0 {
            return Err(Error::NegativeDuration(obs.duration));
        }
        sorted.push((obs.duration, obs.event));
    }
    // events (true) first within a tie
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then(b.1.cmp(&a.1)));

    let mut points = Vec::new();
    let mut at_risk = sorted.len();
    let mut survival = 1.0;
    let mut i = 0;
    while i < sorted.len() {
        let time = sorted[i].0;
        let mut events = 0;
        let mut censored = 0;
        while i < sorted.len() && sorted[i].0 == time {
            if sorted[i].1 {
                events += 1;
            } else {
                censored += 1;
            }
            i += 1;
        }
        if events > 0 {
            survival *= (at_risk - events) as f64 / at_risk as f64;
            points.push(SurvivalPoint { time, at_risk, events, survival });
        }
        at_risk -= events + censored;
    }
    Ok(SurvivalCurve { points, n_total: observations.len() })
}

impl SurvivalCurve {
    /// Value of the step function at `t`.
    pub fn survival_at(&self, t: f64) -> Result<f64> {
        if t.is_nan() {
            return Err(Error::NonFinite(t));
        }
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        let k = self.points.partition_point(|p| p.time <= t);
        Ok(if k == 0 { 1.0 } else { self.points[k - 1].survival })
    }

    /// Smallest `t` with `S(t) <= 1 - q`.
    pub fn quantile(&self, q: f64) -> Result<Quantile> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::ProbabilityOutOfRange(q));
        }
        let level = 1.0 - q;
        Ok(self
            .points
            .iter()
            .find(|p| p.survival <= level + LEVEL_EPS)
            .map_or(Quantile::Unbounded, |p| Quantile::Finite(p.time)))
    }

    pub fn median(&self) -> Quantile {
        self.quantile(0.5).expect("0.5 is a valid level")
    }

    pub fn event_count(&self) -> usize {
        self.points.iter().map(|p| p.events).sum()
    }

    pub fn min_survival(&self) -> f64 {
        self.points.last().map_or(1.0, |p| p.survival)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fleet::VoltageClass;
    use num_rational::Ratio;
    use proptest::prelude::*;

    const C: VoltageClass = VoltageClass::V110;

    fn obs(list: &[(f64, bool)]) -> Vec<LifetimeObservation> {
        list.iter().map(|&(d, e)| LifetimeObservation { duration: d, event: e, voltage_class: C }).collect()
    }

    /// Direct product-formula evaluation in exact rationals: for each
    /// candidate time, rescan the whole sample for at-risk and event counts.
    fn brute_force(sample: &[(f64, bool)], t: f64) -> Ratio<i64> {
        let mut times: Vec<f64> = sample.iter().filter(|s| s.1).map(|s| s.0).collect();
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        times.dedup();
        let mut s = Ratio::from_integer(1);
        for &ti in times.iter().filter(|&&ti| ti <= t) {
            let n = sample.iter().filter(|x| x.0 >= ti).count() as i64;
            let d = sample.iter().filter(|x| x.1 && x.0 == ti).count() as i64;
            s *= Ratio::new(n - d, n);
        }
        s
    }

    fn ratio_f64(r: Ratio<i64>) -> f64 {
        *r.numer() as f64 / *r.denom() as f64
    }

    #[test]
    fn mixed_censoring_example() {
        let curve = km_fit(&obs(&[(2.0, true), (3.0, false), (5.0, true)])).unwrap();
        assert_eq!(curve.points.len(), 2);
        assert!((curve.points[0].survival - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!((curve.points[1].at_risk, curve.points[1].events), (1, 1));
        assert_eq!(curve.points[1].survival, 0.0);
        assert!((curve.survival_at(4.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((curve.survival_at(2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(curve.survival_at(1.999).unwrap(), 1.0);
        assert_eq!(curve.survival_at(5.0).unwrap(), 0.0);
        assert_eq!(curve.survival_at(0.0).unwrap(), 1.0);
    }

    #[test]
    fn all_events_steps_by_quarters() {
        let curve = km_fit(&obs(&[(1.0, true), (2.0, true), (3.0, true), (4.0, true)])).unwrap();
        let s: Vec<f64> = curve.points.iter().map(|p| p.survival).collect();
        assert_eq!(s, [0.75, 0.5, 0.25, 0.0]);
        assert_eq!(curve.quantile(0.5).unwrap(), Quantile::Finite(2.0));
    }

    #[test]
    fn all_censored_is_flat() {
        let curve = km_fit(&obs(&[(1.0, false), (7.0, false)])).unwrap();
        assert!(curve.points.is_empty());
        assert_eq!(curve.survival_at(100.0).unwrap(), 1.0);
        assert_eq!(curve.median(), Quantile::Unbounded);
    }

    #[test]
    fn quantile_crossings() {
        // S drops 1 -> 0.6 at t = 10: 2 of 5 fail at 10, the rest censored later.
        let curve = km_fit(&obs(&[(10.0, true), (10.0, true), (20.0, false), (20.0, false), (20.0, false)])).unwrap();
        assert!((curve.survival_at(10.0).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(curve.quantile(0.4).unwrap(), Quantile::Finite(10.0));
        // minimum S = 0.8: 1 of 5 fails
        let curve = km_fit(&obs(&[(10.0, true), (20.0, false), (20.0, false), (20.0, false), (20.0, false)])).unwrap();
        assert_eq!(curve.min_survival(), 0.8);
        assert_eq!(curve.median(), Quantile::Unbounded);
        assert_eq!(curve.quantile(0.75).unwrap(), Quantile::Unbounded);
        assert_eq!(curve.quantile(0.2).unwrap(), Quantile::Finite(10.0));
    }

    #[test]
    fn tie_processes_events_before_censorings() {
        // censored at 2 still at risk for the event at 2
        let curve = km_fit(&obs(&[(2.0, false), (2.0, true), (4.0, true)])).unwrap();
        assert_eq!(curve.points[0].at_risk, 3);
        assert!((curve.points[0].survival - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(curve.points[1].at_risk, 1);
    }

    #[test]
    fn error_paths() {
        assert!(km_fit(&[]).is_err());
        assert_eq!(km_fit(&obs(&[(-1.0, true)])), Err(Error::NegativeDuration(-1.0)));
        let curve = km_fit(&obs(&[(1.0, true)])).unwrap();
        assert!(curve.survival_at(-0.5).is_err());
        assert!(curve.quantile(0.0).is_err());
        assert!(curve.quantile(1.0).is_err());
    }

    fn sample_strategy() -> impl Strategy<Value = Vec<(f64, bool)>> {
        // integer-valued durations make ties common
        prop::collection::vec((0u8..8, any::<bool>()), 1..=12)
            .prop_map(|v| v.into_iter().map(|(d, e)| (d as f64, e)).collect())
    }

    proptest! {
        #[test]
        fn matches_brute_force_product(sample in sample_strategy()) {
            let curve = km_fit(&obs(&sample)).unwrap();
            for p in &curve.points {
                prop_assert!(p.events >= 1);
                prop_assert!((p.survival - ratio_f64(brute_force(&sample, p.time))).abs() <= 1e-12);
            }
            for t in 0..9 {
                let t = t as f64 + 0.5;
                prop_assert!((curve.survival_at(t).unwrap() - ratio_f64(brute_force(&sample, t))).abs() <= 1e-12);
            }
            for w in curve.points.windows(2) {
                prop_assert!(w[0].time < w[1].time);
                prop_assert!(w[0].at_risk > w[1].at_risk);
                prop_assert!(w[0].survival >= w[1].survival);
            }
        }

        #[test]
        fn survival_is_monotone(sample in sample_strategy(), a in 0.0f64..10.0, b in 0.0f64..10.0) {
            let curve = km_fit(&obs(&sample)).unwrap();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(curve.survival_at(lo).unwrap() >= curve.survival_at(hi).unwrap());
        }

        #[test]
        fn early_censoring_is_neutral(sample in sample_strategy()) {
            // a censoring before the first event time is in no risk set
            let base = km_fit(&obs(&sample)).unwrap();
            let first = base.points.first().map_or(0.0, |p| p.time);
            prop_assume!(first > 0.0);
            let mut extended = sample.clone();
            extended.push((first / 2.0, false));
            let ext = km_fit(&obs(&extended)).unwrap();
            prop_assert_eq!(&base.points, &ext.points);
            prop_assert_eq!(ext.n_total, base.n_total + 1);
        }

        #[test]
        fn late_censoring_only_raises_risk_sets(sample in sample_strategy()) {
            let base = km_fit(&obs(&sample)).unwrap();
            let mut extended = sample.clone();
            extended.push((100.0, false));
            let ext = km_fit(&obs(&extended)).unwrap();
            prop_assert_eq!(base.points.len(), ext.points.len());
            for (p, q) in base.points.iter().zip(&ext.points) {
                prop_assert_eq!(p.time, q.time);
                prop_assert_eq!(p.events, q.events);
                prop_assert_eq!(p.at_risk + 1, q.at_risk);
                prop_assert!(q.survival >= p.survival);
            }
        }

        #[test]
        fn order_does_not_matter(sample in sample_strategy()) {
            let forward = km_fit(&obs(&sample)).unwrap();
            let mut reversed = sample.clone();
            reversed.reverse();
            prop_assert_eq!(forward, km_fit(&obs(&reversed)).unwrap());
        }
    }
}
