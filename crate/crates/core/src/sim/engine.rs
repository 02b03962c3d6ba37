//! Monthly-tick Monte-Carlo stepping of a fleet under one scenario.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, LogNormal};

use crate::error::{Error, Result};
use crate::fleet::{years_between, AssetRecord, VoltageClass};
use crate::health::{apparent_age, DegradationState};
use crate::money::Money;
use crate::sim::activity::{ActivityKind, Catalog};
use crate::sim::queue::{Dispatch, Priority, Request, RequestQueue};
use crate::sim::report::{aggregate_replications, KpiSeries, KpiYear, SimulationReport};
use crate::sim::rng::{asset_stream, StreamPurpose};
use crate::sim::scenario::{
    DegradationDistribution, FamilyPolicy, HazardAge, InspectionPlan, ReplacementTrigger, ResourceModel, Scenario,
    MAX_CADENCES,
};
use crate::weibull::WeibullLaw;
use crate::HOURS_PER_YEAR;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssetStatus {
    InService,
    Failed,
    /// Work in progress. Activities complete within the tick that executes
    /// them, so this state is never observed between ticks.
    UnderMaintenance,
}

/// Simulated state of one asset. Times are whole months relative to the
/// simulation start; assets already in service have a negative
/// `installed_at_month`.
#[derive(Debug, Clone, PartialEq)]
pub struct AssetState {
    pub asset_id: String,
    pub voltage_kv: u16,
    pub installed_at_month: i64,
    pub degradation: DegradationState,
    pub status: AssetStatus,
    /// Month at which each inspection cadence is next due; `None` means due
    /// as soon as the asset is old enough.
    pub next_inspection_month: [Option<i64>; MAX_CADENCES],
}

impl AssetState {
    pub fn new(asset_id: impl Into<String>, voltage_kv: u16, installed_at_month: i64) -> Self {
        AssetState {
            asset_id: asset_id.into(),
            voltage_kv,
            installed_at_month,
            degradation: DegradationState::default(),
            status: AssetStatus::InService,
            next_inspection_month: [None; MAX_CADENCES],
        }
    }

    /// Real age in years at `now_month`.
    pub fn age(&self, now_month: i64) -> f64 {
        (now_month - self.installed_at_month) as f64 / 12.0
    }

    pub fn apparent_age(&self, now_month: i64) -> f64 {
        apparent_age(self.age(now_month), &self.degradation)
    }
}

/// Activity a trigger asks for; `cadence` indexes the inspection plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriggeredActivity {
    pub kind: ActivityKind,
    pub cadence: u8,
}

/// Activities the policy requests for `asset` at `now_month`.
///
/// A failed asset requests its corrective replacement and nothing else.
pub fn evaluate_triggers(asset: &AssetState, policy: &FamilyPolicy, now_month: i64) -> Vec<TriggeredActivity> {
    if asset.status == AssetStatus::Failed {
        return vec![TriggeredActivity { kind: ActivityKind::CorrectiveReplacement, cadence: 0 }];
    }
    let mut out = Vec::new();
    for_each_trigger(asset, policy, now_month, false, 0, |kind, cadence| out.push(TriggeredActivity { kind, cadence }));
    out
}

/// Planned work due for an in-service asset, skipping requests already
/// pending (`inspection_pending` is a bit set over cadences).
fn for_each_trigger(
    asset: &AssetState,
    policy: &FamilyPolicy,
    now_month: i64,
    replacement_pending: bool,
    inspection_pending: u8,
    mut emit: impl FnMut(ActivityKind, u8),
) {
    let age = asset.age(now_month);
    if !replacement_pending {
        let due = match policy.replacement {
            ReplacementTrigger::TimeBased { age: limit } => age >= limit,
            ReplacementTrigger::ConditionBased { trigger_apparent_age } => {
                apparent_age(age, &asset.degradation) >= trigger_apparent_age
            }
        };
        if due {
            emit(ActivityKind::PlannedReplacement, 0);
        }
    }
    if let InspectionPlan::Periodic { start_age, cadences } = &policy.inspection {
        if age < *start_age {
            return;
        }
        for c in 0..cadences.len() {
            if inspection_pending & (1 << c) != 0 {
                continue;
            }
            if asset.next_inspection_month[c].is_none_or(|due| now_month >= due) {
                emit(ActivityKind::Inspection, c as u8);
            }
        }
    }
}

/// How failures are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FailureModel {
    pub enabled: bool,
    pub hazard_age: HazardAge,
}

impl FailureModel {
    fn hazard_age_of(&self, real_age: f64, degradation: &DegradationState) -> f64 {
        match self.hazard_age {
            HazardAge::Real => real_age,
            HazardAge::Apparent => apparent_age(real_age, degradation),
        }
    }
}

/// Probability that `asset` fails during the tick starting at `now_month`.
pub fn failure_probability(
    asset: &AssetState,
    law: &WeibullLaw,
    model: FailureModel,
    now_month: i64,
    tick_years: f64,
) -> f64 {
    if !model.enabled || tick_years <= 0.0 {
        return 0.0;
    }
    let real = asset.age(now_month).max(0.0);
    let start = model.hazard_age_of(real, &asset.degradation);
    let end = model.hazard_age_of(real + tick_years, &asset.degradation);
    let dh = law.hazard_integral(end) - law.hazard_integral(start);
    -libm::expm1(-dh)
}

/// Bernoulli draw with [`failure_probability`].
pub fn sample_failure(
    asset: &AssetState,
    law: &WeibullLaw,
    model: FailureModel,
    now_month: i64,
    tick_years: f64,
    rng: &mut impl Rng,
) -> bool {
    let p = failure_probability(asset, law, model, now_month, tick_years);
    p > 0.0 && rng.random::<f64>() < p
}

/// Real age at which an asset of real age `age` will fail.
///
/// Inverts the conditional survival function with one exponential draw:
/// the failure happens once the cumulative hazard has grown by `E ~ Exp(1)`.
/// Checking `age >= failure age` at the end of each tick is distributed
/// exactly like independent per-tick draws with [`failure_probability`].
fn draw_failure_age(
    law: &WeibullLaw,
    model: FailureModel,
    degradation: &DegradationState,
    age: f64,
    rng: &mut ChaCha8Rng,
) -> f64 {
    if !model.enabled {
        return f64::INFINITY;
    }
    let e: f64 = Exp1.sample(rng);
    let h0 = model.hazard_age_of(age, degradation);
    let h_star = law.eta * libm::pow(law.hazard_integral(h0) + e, 1.0 / law.beta);
    match model.hazard_age {
        HazardAge::Real => h_star,
        HazardAge::Apparent => {
            ((h_star - degradation.apparent_age_offset) / degradation.degradation_rate).max(age)
        }
    }
}

fn draw_degradation(dist: DegradationDistribution, rng: &mut ChaCha8Rng) -> DegradationState {
    let rate = match dist {
        DegradationDistribution::Constant(r) => r,
        DegradationDistribution::Lognormal { mu, sigma } => match LogNormal::new(mu, sigma) {
            Ok(d) => d.sample(rng),
            Err(_) => libm::exp(mu),
        },
    };
    DegradationState { degradation_rate: rate, apparent_age_offset: 0.0 }
}

/// Catalog entries resolved for one voltage.
#[derive(Debug, Clone)]
struct Resolved {
    voltage_kv: u16,
    planned: u16,
    corrective: u16,
    inspections: Vec<u16>,
}

#[derive(Debug, Clone)]
struct AssetInit {
    asset_id: String,
    voltage_kv: u16,
    class: VoltageClass,
    resolved: u8,
    installed_at_month: i64,
}

/// A validated scenario bound to a fleet, ready to run replications.
#[derive(Debug, Clone)]
pub struct Simulation {
    scenario: Scenario,
    assets: Vec<AssetInit>,
    resolved: Vec<Resolved>,
    capacity_millihours: Option<u64>,
    tick_hours: f64,
}

impl Simulation {
    /// Validates the scenario against the fleet and resolves every catalog
    /// entry the policy can request.
    ///
    /// Assets are simulated in asset-id order; the recorded failure dates
    /// of the input are not used.
    pub fn new(fleet: &[AssetRecord], scenario: &Scenario) -> Result<Simulation> {
        scenario.validate()?;
        if fleet.is_empty() {
            return Err(Error::InvalidParameter("fleet is empty".into()));
        }
        let mut sorted: Vec<&AssetRecord> = fleet.iter().collect();
        sorted.sort_by(|a, b| a.asset_id.cmp(&b.asset_id));
        for (i, a) in sorted.iter().enumerate() {
            a.validate()?;
            if i > 0 && sorted[i - 1].asset_id == a.asset_id {
                return Err(Error::InvalidAsset { asset_id: a.asset_id.clone(), reason: "duplicate asset id".into() });
            }
            if a.commission_date > scenario.start_date {
                return Err(Error::InvalidAsset {
                    asset_id: a.asset_id.clone(),
                    reason: format!("commissioned after simulation start {}", scenario.start_date),
                });
            }
        }
        if fleet.len() > u32::MAX as usize {
            return Err(Error::InvalidParameter("fleet too large".into()));
        }

        let catalog = &scenario.catalog;
        let mut resolved: Vec<Resolved> = Vec::new();
        let mut assets = Vec::with_capacity(sorted.len());
        for a in sorted {
            let class = a.voltage_class();
            let r = match resolved.iter().position(|r| r.voltage_kv == a.voltage_kv) {
                Some(r) => r,
                None => {
                    resolved.push(resolve(catalog, scenario.policy.get(class), a.voltage_kv)?);
                    resolved.len() - 1
                }
            };
            let age_months = libm::round(years_between(a.commission_date, scenario.start_date) * 12.0) as i64;
            assets.push(AssetInit {
                asset_id: a.asset_id.clone(),
                voltage_kv: a.voltage_kv,
                class,
                resolved: r as u8,
                installed_at_month: -age_months,
            });
        }

        let capacity_millihours = scenario.capacity_per_tick().map(|c| libm::floor(c * 1000.0) as u64);
        if let (ResourceModel::Constrained { fte_count, .. }, Some(cap)) = (scenario.resources, capacity_millihours) {
            // with no staff at all nothing is ever scheduled, which is a
            // legitimate scenario rather than a configuration error
            if fte_count > 0 {
                for r in &resolved {
                    for &i in [r.planned, r.corrective].iter().chain(&r.inspections) {
                        let a = catalog.get(i as usize);
                        if a.required_fte > fte_count {
                            return Err(Error::InvalidScenario(format!(
                                "activities: '{}' needs {} FTE but only {fte_count} are available",
                                a.name, a.required_fte
                            )));
                        }
                        if a.person_millihours() > cap {
                            return Err(Error::InvalidScenario(format!(
                                "activities: '{}' needs {} person-hours, more than one tick's capacity of {}",
                                a.name,
                                a.person_hours(),
                                cap as f64 / 1000.0
                            )));
                        }
                    }
                }
            }
        }

        Ok(Simulation {
            scenario: scenario.clone(),
            assets,
            resolved,
            capacity_millihours,
            tick_hours: HOURS_PER_YEAR * scenario.tick_years(),
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn fleet_size(&self) -> usize {
        self.assets.len()
    }

    /// Capacity per tick in thousandths of a person-hour.
    pub fn capacity_per_tick_millihours(&self) -> Option<u64> {
        self.capacity_millihours
    }

    fn failure_model(&self) -> FailureModel {
        FailureModel { enabled: self.scenario.failures_enabled, hazard_age: self.scenario.hazard_age }
    }

    /// Runs one replication. Results depend only on the scenario, the fleet
    /// and `replication`.
    pub fn run_replication(&self, replication: u32) -> KpiSeries {
        let sc = &self.scenario;
        let model = self.failure_model();
        let seed = sc.master_seed;

        let mut runs: Vec<Run> = self
            .assets
            .iter()
            .map(|a| {
                let mut failure_rng = asset_stream(seed, replication, &a.asset_id, StreamPurpose::Failure);
                let mut degradation_rng = asset_stream(seed, replication, &a.asset_id, StreamPurpose::Degradation);
                let mut state = AssetState::new(a.asset_id.as_str(), a.voltage_kv, a.installed_at_month);
                state.degradation = draw_degradation(sc.degradation, &mut degradation_rng);
                let law = sc.laws.get(a.class);
                let failure_age = draw_failure_age(law, model, &state.degradation, state.age(0), &mut failure_rng);
                Run {
                    state,
                    epoch: 0,
                    failure_age,
                    replacement_pending: false,
                    inspection_pending: 0,
                    pending_millihours: 0,
                    failure_rng,
                    degradation_rng,
                }
            })
            .collect();

        let tm = sc.tick_months as i64;
        let ticks = sc.ticks();
        let mut years: Vec<KpiYear> = (0..sc.horizon_years).map(KpiYear::new).collect();
        let mut queue = RequestQueue::new();
        let mut backlog: u64 = 0;

        for k in 0..ticks {
            let now = k as i64 * tm;
            let year = &mut years[(now / 12) as usize];

            for (i, run) in runs.iter_mut().enumerate() {
                if run.state.status != AssetStatus::InService {
                    continue;
                }
                let init = &self.assets[i];
                let res = &self.resolved[init.resolved as usize];
                let policy = sc.policy.get(init.class);
                let (replacement_pending, inspection_pending) = (run.replacement_pending, run.inspection_pending);
                let mut added = 0u64;
                for_each_trigger(&run.state, policy, now, replacement_pending, inspection_pending, |kind, cadence| {
                    let (priority, activity) = match kind {
                        ActivityKind::Inspection => (Priority::Inspection, res.inspections[cadence as usize]),
                        _ => (Priority::PlannedReplacement, res.planned),
                    };
                    let demand = sc.catalog.get(activity as usize).person_millihours();
                    queue.push(Request {
                        priority,
                        requested_tick: k,
                        asset: i as u32,
                        cadence,
                        activity,
                        epoch: run.epoch,
                        person_millihours: demand,
                    });
                    added += demand;
                    if kind == ActivityKind::Inspection {
                        run.inspection_pending |= 1 << cadence;
                    } else {
                        run.replacement_pending = true;
                    }
                });
                run.pending_millihours += added;
                backlog += added;
            }

            let mut step = Step { sim: self, runs: &mut runs, year, backlog: &mut backlog, now, model };
            queue.dispatch(self.capacity_millihours, &mut step);

            let end = now + tm;
            // backlog is work that was offered capacity and did not fit, so
            // it is read before this tick's failures queue new corrective work
            if end % 12 == 0 {
                year.backlog_hours = backlog as f64 / 1000.0;
            }
            for (i, run) in runs.iter_mut().enumerate() {
                match run.state.status {
                    AssetStatus::Failed => year.unavailability_hours += self.tick_hours,
                    AssetStatus::InService => {
                        let end_age = run.state.age(end);
                        if end_age < run.failure_age {
                            continue;
                        }
                        // down from the failure instant to the end of this tick
                        let since = (end_age - run.failure_age.max(run.state.age(now))) * HOURS_PER_YEAR;
                        year.unavailability_hours += since;
                        year.failures += 1;
                        run.state.status = AssetStatus::Failed;
                        run.invalidate(&mut backlog);
                        let activity = self.resolved[self.assets[i].resolved as usize].corrective;
                        let demand = sc.catalog.get(activity as usize).person_millihours();
                        queue.push(Request {
                            priority: Priority::Corrective,
                            requested_tick: k + 1,
                            asset: i as u32,
                            cadence: 0,
                            activity,
                            epoch: run.epoch,
                            person_millihours: demand,
                        });
                        run.pending_millihours += demand;
                        backlog += demand;
                    }
                    AssetStatus::UnderMaintenance => {}
                }
            }

            if let Some(cap) = self.capacity_millihours {
                *year.capacity_person_millihours.get_or_insert(0) += cap;
            }
        }

        for y in &mut years {
            y.totex = y.capex + y.opex;
        }
        KpiSeries { replication, years }
    }

    /// Assembles a report from replications (in any order).
    pub fn report(&self, mut replications: Vec<KpiSeries>) -> Result<SimulationReport> {
        replications.sort_by_key(|s| s.replication);
        let aggregates = aggregate_replications(&replications)?;
        Ok(SimulationReport {
            scenario: self.scenario.name.clone(),
            horizon_years: self.scenario.horizon_years,
            tick_months: self.scenario.tick_months,
            master_seed: self.scenario.master_seed,
            fleet_size: self.assets.len(),
            replications,
            aggregates,
        })
    }
}

fn resolve(catalog: &Catalog, policy: &FamilyPolicy, voltage_kv: u16) -> Result<Resolved> {
    let planned = catalog.replacement(voltage_kv, false)? as u16;
    let corrective = catalog.replacement(voltage_kv, true)? as u16;
    let inspections = match &policy.inspection {
        InspectionPlan::None => Vec::new(),
        InspectionPlan::Periodic { cadences, .. } => cadences
            .iter()
            .map(|c| catalog.inspection(&c.activity, voltage_kv).map(|i| i as u16))
            .collect::<Result<_>>()?,
    };
    Ok(Resolved { voltage_kv, planned, corrective, inspections })
}

/// Per-replication bookkeeping for one asset.
struct Run {
    state: AssetState,
    /// Bumped whenever queued requests for the asset stop applying.
    epoch: u32,
    failure_age: f64,
    replacement_pending: bool,
    inspection_pending: u8,
    pending_millihours: u64,
    failure_rng: ChaCha8Rng,
    degradation_rng: ChaCha8Rng,
}

impl Run {
    fn invalidate(&mut self, backlog: &mut u64) {
        self.epoch = self.epoch.wrapping_add(1);
        *backlog -= self.pending_millihours;
        self.pending_millihours = 0;
        self.replacement_pending = false;
        self.inspection_pending = 0;
    }
}

/// Applies executed activities for one tick.
struct Step<'a> {
    sim: &'a Simulation,
    runs: &'a mut [Run],
    year: &'a mut KpiYear,
    backlog: &'a mut u64,
    now: i64,
    model: FailureModel,
}

impl Dispatch for Step<'_> {
    fn is_live(&mut self, r: &Request) -> bool {
        self.runs[r.asset as usize].epoch == r.epoch
    }

    fn execute(&mut self, r: &Request) {
        let sc = &self.sim.scenario;
        let activity = sc.catalog.get(r.activity as usize);
        let run = &mut self.runs[r.asset as usize];
        run.pending_millihours -= r.person_millihours;
        *self.backlog -= r.person_millihours;
        apply_completion(self.year, activity.kind, activity.total_cost(), activity.duration_hours, r.person_millihours);
        if activity.kind.is_replacement() {
            run.invalidate(self.backlog);
            let s = &mut run.state;
            s.installed_at_month = self.now;
            s.status = AssetStatus::InService;
            s.next_inspection_month = [None; MAX_CADENCES];
            s.degradation = draw_degradation(sc.degradation, &mut run.degradation_rng);
            let law = sc.laws.get(self.sim.assets[r.asset as usize].class);
            run.failure_age = draw_failure_age(law, self.model, &s.degradation, 0.0, &mut run.failure_rng);
        } else {
            run.inspection_pending &= !(1 << r.cadence);
            if let InspectionPlan::Periodic { cadences, .. } =
                &sc.policy.get(self.sim.assets[r.asset as usize].class).inspection
            {
                run.state.next_inspection_month[r.cadence as usize] =
                    Some(self.now + cadences[r.cadence as usize].interval_months as i64);
            }
        }
    }
}

/// Books one completed activity into the year's ledger.
///
/// Replacements go to CAPEX, inspections to OPEX and inspection hours; all
/// work makes the asset unavailable for its duration.
pub fn apply_completion(year: &mut KpiYear, kind: ActivityKind, cost: Money, duration_hours: f64, person_millihours: u64) {
    if kind.is_replacement() {
        year.capex += cost;
        year.replacements += 1;
    } else {
        year.opex += cost;
        year.inspection_hours += duration_hours;
    }
    year.unavailability_hours += duration_hours;
    year.executed_person_millihours += person_millihours;
    year.totex = year.capex + year.opex;
}

/// Runs every replication sequentially.
pub fn run_scenario(fleet: &[AssetRecord], scenario: &Scenario) -> Result<SimulationReport> {
    let sim = Simulation::new(fleet, scenario)?;
    let series = (0..scenario.replications).map(|r| sim.run_replication(r)).collect();
    sim.report(series)
}
