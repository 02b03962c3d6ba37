use chrono::{Months, NaiveDate};
use itfleet_core::sim::{
    builtin_scenario, run_scenario, DegradationDistribution, InspectionPlan, ResourceModel, Scenario, Simulation,
};
use itfleet_core::{AssetRecord, Money, PerClass, WeibullLaw};
use proptest::prelude::*;

fn start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2021, 7, 1).unwrap()
}

fn aged(id: &str, kv: u16, months: u32) -> AssetRecord {
    AssetRecord::new(id, kv, start() - Months::new(months), None, None).unwrap()
}

fn quiet(base: &str) -> Scenario {
    let mut s = builtin_scenario(base).unwrap();
    s.failures_enabled = false;
    s.degradation = DegradationDistribution::Constant(1.0);
    s.replications = 1;
    s
}

#[test]
fn time_based_schedule_is_periodic() {
    let s = quiet("time-based-unconstrained");
    let ages = [0u32, 1, 7, 20, 33, 44];
    let fleet: Vec<AssetRecord> = ages.iter().map(|&a| aged(&format!("A{a:02}"), 110, a * 12)).collect();
    let report = run_scenario(&fleet, &s).unwrap();
    let years = &report.replications[0].years;
    let mut expected = vec![0u64; 100];
    for &a in &ages {
        let mut y = 45 - a as usize;
        while y < 100 {
            expected[y] += 1;
            y += 45;
        }
    }
    let got: Vec<u64> = years.iter().map(|y| y.replacements).collect();
    assert_eq!(got, expected);
    let capex: Money = years.iter().map(|y| y.capex).sum();
    assert_eq!(capex, Money::from_millis(43_211_000) * expected.iter().sum::<u64>() as i64);
}

#[test]
fn waiting_failed_asset_accrues_tick_hours() {
    // a law that fails every new asset almost immediately
    let mut s = quiet("time-based-unconstrained");
    s.failures_enabled = true;
    s.horizon_years = 1;
    s.laws = PerClass::from_fn(|_| WeibullLaw::new(1.0, 1e-9).unwrap());
    s.policy.v110.inspection = InspectionPlan::None;
    let fleet = [aged("A", 110, 0)];

    let r = run_scenario(&fleet, &s).unwrap();
    let y = &r.replications[0].years[0];
    // down for the whole year, plus eleven 40 h corrective replacements
    assert_eq!(y.failures, 12);
    assert_eq!(y.replacements, 11);
    assert!((y.unavailability_hours - (8766.0 + 11.0 * 40.0)).abs() < 1e-3, "{}", y.unavailability_hours);

    // capacity below one replacement per tick is a configuration error
    s.resources = ResourceModel::Constrained { fte_count: 10, hours_per_fte_per_year: 240.0 };
    assert!(Simulation::new(&fleet, &s).is_err());

    // two such assets sharing capacity for one replacement per tick: each
    // waits a full tick (730.5 h) in turn, so both stay down all year
    s.resources = ResourceModel::Constrained { fte_count: 10, hours_per_fte_per_year: 480.0 };
    let r = run_scenario(&[aged("A", 110, 0), aged("B", 110, 0)], &s).unwrap();
    let y = &r.replications[0].years[0];
    assert_eq!(y.replacements, 11);
    assert_eq!(y.failures, 13);
    assert!((y.unavailability_hours - (2.0 * 8766.0 + 11.0 * 40.0)).abs() < 1e-3, "{}", y.unavailability_hours);
    // one corrective still waits after the final allocation of the year
    assert_eq!(y.backlog_hours, 400.0);
}

#[test]
fn unconstrained_matches_unlimited_capacity() {
    let mut s = builtin_scenario("condition-based-unconstrained").unwrap();
    s.horizon_years = 40;
    s.replications = 2;
    let fleet: Vec<AssetRecord> = (0..60).map(|i| aged(&format!("X{i:03}"), [110, 150, 220, 380][i % 4], 12 * i as u32)).collect();
    let a = run_scenario(&fleet, &s).unwrap();
    s.resources = ResourceModel::Constrained { fte_count: 1_000_000, hours_per_fte_per_year: 1600.0 };
    let b = run_scenario(&fleet, &s).unwrap();
    for (x, y) in a.replications.iter().zip(&b.replications) {
        for (p, q) in x.years.iter().zip(&y.years) {
            assert_eq!((p.capex, p.opex, p.failures, p.replacements), (q.capex, q.opex, q.failures, q.replacements));
        }
    }
}

fn arb_fleet() -> impl Strategy<Value = Vec<AssetRecord>> {
    prop::collection::vec((0usize..4, 0u32..900), 1..40).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (kv, months))| aged(&format!("P{i:03}"), [110, 150, 220, 380][kv], months))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conservation_and_ledger(fleet in arb_fleet(), fte in 10u32..40, seed in 0u64..1000, condition in any::<bool>()) {
        let mut s = builtin_scenario(if condition { "condition-based-fte40" } else { "time-based-fte40" }).unwrap();
        s.horizon_years = 30;
        s.replications = 1;
        s.master_seed = seed;
        s.resources = ResourceModel::Constrained { fte_count: fte, hours_per_fte_per_year: 1600.0 };
        let r = run_scenario(&fleet, &s).unwrap();
        prop_assert_eq!(r.fleet_size, fleet.len());
        let ys = &r.replications[0].years;
        let executed: u64 = ys.iter().map(|y| y.executed_person_millihours).sum();
        let capacity: u64 = ys.iter().map(|y| y.capacity_person_millihours.unwrap()).sum();
        prop_assert!(executed <= capacity);
        for y in ys {
            prop_assert!(y.executed_person_millihours <= y.capacity_person_millihours.unwrap());
            prop_assert_eq!(y.totex, y.capex + y.opex);
            prop_assert!(y.capex >= Money::ZERO && y.opex >= Money::ZERO);
            prop_assert!(y.unavailability_hours >= 0.0 && y.backlog_hours >= 0.0 && y.inspection_hours >= 0.0);
            // replacement prices are 43 211, 45 044 or 50 000 euros
            prop_assert!(y.capex >= Money::from_millis(43_211_000) * y.replacements as i64);
            prop_assert!(y.capex <= Money::from_millis(50_000_000) * y.replacements as i64);
        }
    }

    #[test]
    fn more_staff_never_grows_final_backlog(fleet in arb_fleet(), seed in 0u64..1000) {
        let mut s = builtin_scenario("time-based-fte40").unwrap();
        s.horizon_years = 20;
        s.replications = 1;
        s.master_seed = seed;
        s.failures_enabled = false;
        let mut last = f64::INFINITY;
        for fte in [0u32, 10, 20, 40, 80] {
            s.resources = ResourceModel::Constrained { fte_count: fte, hours_per_fte_per_year: 1600.0 };
            let b = run_scenario(&fleet, &s).unwrap().replications[0].final_backlog_hours();
            prop_assert!(b <= last, "fte {} backlog {} > {}", fte, b, last);
            last = b;
        }
    }
}

#[test]
fn replications_are_independent_of_run_order() {
    let mut s = builtin_scenario("condition-based-fte60").unwrap();
    s.horizon_years = 25;
    s.replications = 3;
    s.master_seed = 7;
    let fleet: Vec<AssetRecord> = (0..30).map(|i| aged(&format!("R{i:02}"), [110, 150, 220][i % 3], 18 * i as u32)).collect();
    let sim = Simulation::new(&fleet, &s).unwrap();
    let forward = sim.report((0..3).map(|r| sim.run_replication(r)).collect()).unwrap();
    let reverse = sim.report((0..3).rev().map(|r| sim.run_replication(r)).collect()).unwrap();
    assert_eq!(forward, reverse);
    assert_eq!(forward, run_scenario(&fleet, &s).unwrap());
    assert_ne!(forward.replications[0], forward.replications[1]);
}
