use rayon::prelude::*;

use itfleet_core::sim::{Scenario, Simulation, SimulationReport};
use itfleet_core::AssetRecord;

use crate::error::{Error, Result};

/// Runs the scenario's replications on up to `jobs` threads.
///
/// Each replication owns its random streams and aggregation happens in
/// replication order, so the report does not depend on `jobs`.
pub fn run_parallel(fleet: &[AssetRecord], scenario: &Scenario, jobs: usize) -> Result<SimulationReport> {
    let sim = Simulation::new(fleet, scenario)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(format!("cannot start {jobs} worker threads: {e}")))?;
    let series = pool.install(|| (0..scenario.replications).into_par_iter().map(|r| sim.run_replication(r)).collect());
    Ok(sim.report(series)?)
}

/// Default worker count: the machine's available parallelism.
pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
