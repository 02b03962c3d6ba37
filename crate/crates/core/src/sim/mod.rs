//! Seeded Monte-Carlo simulation of maintenance policies.
//!
//! Time advances in ticks of `tick_months`. Each tick, triggers queue work,
//! the resource pool executes what fits in priority order, then failures
//! are drawn for the assets still in service. Replications are independent
//! and may run in any order or in parallel.

pub mod activity;
pub mod engine;
pub mod queue;
pub mod report;
pub mod rng;
pub mod scenario;

pub use activity::{ActivityKind, ActivitySpec, Catalog};
pub use engine::{
    apply_completion, evaluate_triggers, failure_probability, run_scenario, sample_failure, AssetState, AssetStatus,
    FailureModel, Simulation, TriggeredActivity,
};
pub use queue::{allocate_resources, Dispatch, Priority, Request, RequestQueue};
pub use report::{
    aggregate_replications, compare_scenarios, AggregateYear, ComparisonReport, ComparisonYear, KpiSeries, KpiYear,
    SimulationReport, Stat,
};
pub use scenario::{
    builtin_scenario, Cadence, DegradationDistribution, FamilyPolicy, HazardAge, InspectionPlan, Policy,
    ReplacementTrigger, ResourceModel, Scenario, BUILTIN_SCENARIOS,
};
