//! Priority queue of maintenance requests and per-tick resource allocation.

use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Priority {
    Corrective = 0,
    PlannedReplacement = 1,
    Inspection = 2,
}

impl Priority {
    pub const ALL: [Priority; 3] = [Priority::Corrective, Priority::PlannedReplacement, Priority::Inspection];
}

/// A pending maintenance request.
///
/// Requests are totally ordered by `(priority, requested_tick, asset,
/// cadence)`. `asset` is the asset's rank in asset-id order, so ties within
/// a tick go to the lower asset id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Request {
    pub priority: Priority,
    pub requested_tick: u32,
    pub asset: u32,
    /// Inspection cadence index; 0 for replacements.
    pub cadence: u8,
    pub activity: u16,
    /// Requests whose epoch no longer matches the asset's are stale.
    pub epoch: u32,
    pub person_millihours: u64,
}

impl Request {
    fn order_key(&self) -> (Priority, u32, u32, u8) {
        (self.priority, self.requested_tick, self.asset, self.cadence)
    }
}

/// Three FIFO lanes, one per priority.
#[derive(Debug, Clone)]
pub struct RequestQueue {
    lanes: [Vec<Request>; 3],
    /// Lower bound on the demand of any request in each lane.
    floor: [u64; 3],
}

impl Default for RequestQueue {
    fn default() -> Self {
        RequestQueue { lanes: Default::default(), floor: [u64::MAX; 3] }
    }
}

impl RequestQueue {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a request. Requests must arrive in non-decreasing key order
    /// within their lane, which holds when each tick submits its requests
    /// in asset order.
    pub fn push(&mut self, request: Request) {
        let p = request.priority as usize;
        self.floor[p] = self.floor[p].min(request.person_millihours);
        let lane = &mut self.lanes[p];
        debug_assert!(lane.last().is_none_or(|last| last.order_key() <= request.order_key()));
        lane.push(request);
    }

    /// Inserts a request at its ordered position regardless of arrival order.
    pub fn insert(&mut self, request: Request) {
        let p = request.priority as usize;
        self.floor[p] = self.floor[p].min(request.person_millihours);
        let lane = &mut self.lanes[p];
        let at = lane.partition_point(|r| r.order_key() <= request.order_key());
        lane.insert(at, request);
    }

    pub fn len(&self) -> usize {
        self.lanes.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.lanes.iter().all(Vec::is_empty)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Request> {
        self.lanes.iter().flatten()
    }

    /// First-fit allocation in priority order.
    ///
    /// Walks the requests in total order and executes each one whose
    /// person-hour demand fits the remaining capacity (`None` means
    /// unconstrained); activities are never split. Requests rejected by
    /// [`Dispatch::is_live`] are discarded, the rest stay queued with their
    /// original timestamps. Executions are reported to the handler in order,
    /// so an execution may invalidate requests later in the same round.
    pub fn dispatch(&mut self, capacity_millihours: Option<u64>, handler: &mut impl Dispatch) {
        let mut remaining = capacity_millihours.unwrap_or(u64::MAX);
        for (lane, floor) in self.lanes.iter_mut().zip(&mut self.floor) {
            if lane.is_empty() {
                *floor = u64::MAX;
                continue;
            }
            if capacity_millihours.is_some() && *floor > remaining {
                // nothing in this lane fits; stale entries are dropped on a later pass
                continue;
            }
            let mut kept = 0;
            let mut i = 0;
            while i < lane.len() {
                let r = lane[i];
                if capacity_millihours.is_some() && *floor > remaining {
                    lane.copy_within(i.., kept);
                    kept += lane.len() - i;
                    break;
                }
                i += 1;
                if !handler.is_live(&r) {
                    continue;
                }
                if r.person_millihours <= remaining {
                    remaining -= r.person_millihours;
                    handler.execute(&r);
                } else {
                    lane[kept] = r;
                    kept += 1;
                }
            }
            lane.truncate(kept);
        }
    }

    /// [`RequestQueue::dispatch`] collecting the executed requests.
    pub fn allocate(&mut self, capacity_millihours: Option<u64>, is_live: impl FnMut(&Request) -> bool) -> Vec<Request> {
        let mut collect = Collect { is_live, executed: Vec::new() };
        self.dispatch(capacity_millihours, &mut collect);
        collect.executed
    }
}

/// Receiver of one allocation round.
pub trait Dispatch {
    /// Whether a queued request still applies to its asset.
    fn is_live(&mut self, request: &Request) -> bool;
    /// Called for each executed request, in execution order.
    fn execute(&mut self, request: &Request);
}

struct Collect<F> {
    is_live: F,
    executed: Vec<Request>,
}

impl<F: FnMut(&Request) -> bool> Dispatch for Collect<F> {
    fn is_live(&mut self, request: &Request) -> bool {
        (self.is_live)(request)
    }

    fn execute(&mut self, request: &Request) {
        self.executed.push(*request);
    }
}

/// Runs one allocation round on `queue`. See [`RequestQueue::allocate`].
pub fn allocate_resources(queue: &mut RequestQueue, capacity_millihours: Option<u64>) -> Vec<Request> {
    queue.allocate(capacity_millihours, |_| true)
}
