//! The DLB protocol: repeated application of a matching schedule to a
//! network of indivisible loads.
//!
//! Each round visits every matching of the schedule in order; within a
//! matching every edge pools the mobile loads of its two endpoints and
//! re-places them with the chosen balls-into-bins algorithm (immobile loads
//! stay put and count as bin bases). The run records per-round discrepancy,
//! movement counts, signed per-edge balancing errors, and optionally the
//! deviation from the exactly-divisible continuous reference process, which
//! evolves by pairwise averaging over the same matchings.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binpack::{self, Algorithm, Ball, BinState};
use crate::math;
use crate::network::MatchingSchedule;
use crate::{Error, Result};

/// Load mobility model of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mobility {
    /// Every load may move in every matching.
    Full,
    /// A per-node random subset of loads is pinned to its node for the whole
    /// run.
    Partial,
}

impl Mobility {
    pub fn name(self) -> &'static str {
        match self {
            Mobility::Full => "full",
            Mobility::Partial => "partial",
        }
    }
}

/// An indivisible work packet. The weight is constant for the lifetime of a
/// run; only the hosting node changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Load {
    pub id: usize,
    pub weight: f64,
    pub mobile: bool,
}

/// Assignment of loads to nodes with derived per-node totals.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    loads: Vec<Load>,
    /// load id -> node id
    assignment: Vec<usize>,
    /// node id -> load ids, in list order (balancing preserves this order
    /// deterministically: immobile loads first, then placement order)
    node_loads: Vec<Vec<usize>>,
    node_totals: Vec<f64>,
    max_load_weight: f64,
}

impl NetworkState {
    /// Creates a state from `(weight, node)` pairs; load ids are assigned in
    /// input order and all loads start mobile.
    pub fn new(num_nodes: usize, loads: &[(f64, usize)]) -> Result<Self> {
        if num_nodes == 0 {
            return Err(Error::InvalidParameter("network needs at least one node"));
        }
        let mut state = NetworkState {
            loads: Vec::with_capacity(loads.len()),
            assignment: Vec::with_capacity(loads.len()),
            node_loads: vec![Vec::new(); num_nodes],
            node_totals: vec![0.0; num_nodes],
            max_load_weight: 0.0,
        };
        for (id, &(weight, node)) in loads.iter().enumerate() {
            if !weight.is_finite() || weight < 0.0 {
                return Err(Error::InvalidParameter(
                    "load weights must be finite and non-negative",
                ));
            }
            if node >= num_nodes {
                return Err(Error::InvalidParameter("load assigned to unknown node"));
            }
            state.loads.push(Load {
                id,
                weight,
                mobile: true,
            });
            state.assignment.push(node);
            state.node_loads[node].push(id);
            state.node_totals[node] += weight;
            state.max_load_weight = state.max_load_weight.max(weight);
        }
        Ok(state)
    }

    pub fn num_nodes(&self) -> usize {
        self.node_totals.len()
    }

    pub fn num_loads(&self) -> usize {
        self.loads.len()
    }

    pub fn loads(&self) -> &[Load] {
        &self.loads
    }

    pub fn load(&self, id: usize) -> &Load {
        &self.loads[id]
    }

    /// Node currently hosting the given load.
    pub fn assignment(&self, load_id: usize) -> usize {
        self.assignment[load_id]
    }

    pub fn node_loads(&self, node: usize) -> &[usize] {
        &self.node_loads[node]
    }

    pub fn node_totals(&self) -> &[f64] {
        &self.node_totals
    }

    pub fn node_total(&self, node: usize) -> f64 {
        self.node_totals[node]
    }

    /// Largest single load weight in the network, which scales all error
    /// bounds in the real-valued case.
    pub fn max_load_weight(&self) -> f64 {
        self.max_load_weight
    }

    pub fn total_weight(&self) -> f64 {
        self.node_totals.iter().sum()
    }

    pub fn discrepancy(&self) -> f64 {
        let max = self
            .node_totals
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let min = self
            .node_totals
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        max - min
    }

    /// Sorted multiset of load weights; invariant across a run.
    pub fn weight_multiset(&self) -> Vec<f64> {
        let mut weights: Vec<f64> = self.loads.iter().map(|l| l.weight).collect();
        weights.sort_by(f64::total_cmp);
        weights
    }

    /// Marks a per-node uniform random subset of loads immobile: a node with
    /// `m >= 2` loads pins `r` of them, `r` drawn uniformly from `1..=m-1`.
    /// Nodes with fewer than two loads keep all loads mobile. Deterministic
    /// per seed; mobility stays fixed for the run.
    pub fn assign_mobility(&mut self, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for node in 0..self.node_loads.len() {
            let m = self.node_loads[node].len();
            if m < 2 {
                continue;
            }
            let pinned = rng.gen_range(1..m);
            // Partial Fisher-Yates: the first `pinned` slots are a uniform
            // subset.
            let mut positions: Vec<usize> = (0..m).collect();
            for i in 0..pinned {
                let j = rng.gen_range(i..m);
                positions.swap(i, j);
            }
            for &p in &positions[..pinned] {
                let id = self.node_loads[node][p];
                self.loads[id].mobile = false;
            }
        }
    }

    /// Marks every load mobile again.
    pub fn reset_mobility(&mut self) {
        for load in &mut self.loads {
            load.mobile = true;
        }
    }

    pub fn all_mobile(&self) -> bool {
        self.loads.iter().all(|l| l.mobile)
    }

    /// Balances one matched edge: mobile loads of `u` and `v` are pooled (in
    /// current list order, `u` first) and re-placed by `algorithm` into two
    /// bins whose bases are the immobile weight sums of `u` and `v`.
    ///
    /// Returns the number of loads that changed node and the signed residual
    /// error `(x_u - x_v) / 2` after balancing.
    pub fn balance_matching(
        &mut self,
        u: usize,
        v: usize,
        algorithm: Algorithm,
    ) -> Result<BalanceOutcome> {
        self.balance_matching_impl(u, v, algorithm, None)
    }

    /// [`balance_matching`] with the first-ball special case resolved by a
    /// uniformly random bin draw from `rng` instead of bin `u`.
    ///
    /// [`balance_matching`]: NetworkState::balance_matching
    pub fn balance_matching_with_rng(
        &mut self,
        u: usize,
        v: usize,
        algorithm: Algorithm,
        rng: &mut ChaCha8Rng,
    ) -> Result<BalanceOutcome> {
        self.balance_matching_impl(u, v, algorithm, Some(rng))
    }

    fn balance_matching_impl(
        &mut self,
        u: usize,
        v: usize,
        algorithm: Algorithm,
        rng: Option<&mut ChaCha8Rng>,
    ) -> Result<BalanceOutcome> {
        if u == v {
            return Err(Error::InvalidParameter("matched nodes must differ"));
        }
        if u >= self.num_nodes() || v >= self.num_nodes() {
            return Err(Error::InvalidParameter("unknown node in matching"));
        }
        let mut pool: Vec<Ball> = Vec::new();
        let mut pinned_u: Vec<usize> = Vec::new();
        let mut pinned_v: Vec<usize> = Vec::new();
        let mut base_u = 0.0;
        let mut base_v = 0.0;
        for &id in &self.node_loads[u] {
            let load = &self.loads[id];
            if load.mobile {
                pool.push(Ball {
                    id,
                    weight: load.weight,
                });
            } else {
                base_u += load.weight;
                pinned_u.push(id);
            }
        }
        for &id in &self.node_loads[v] {
            let load = &self.loads[id];
            if load.mobile {
                pool.push(Ball {
                    id,
                    weight: load.weight,
                });
            } else {
                base_v += load.weight;
                pinned_v.push(id);
            }
        }
        let bins = [BinState::with_base(base_u), BinState::with_base(base_v)];
        let (bins, _) = match rng {
            None => binpack::place(algorithm, &pool, &bins)?,
            Some(rng) => binpack::place_with_rng(algorithm, &pool, &bins, rng)?,
        };

        let mut moves = 0usize;
        let mut rebuild = |node: usize, pinned: Vec<usize>, bin: &BinState, state: &mut Self| {
            let mut list = pinned;
            for &id in bin.contents() {
                if state.assignment[id] != node {
                    state.assignment[id] = node;
                    moves += 1;
                }
                list.push(id);
            }
            state.node_loads[node] = list;
            state.node_totals[node] = bin.total();
        };
        rebuild(u, pinned_u, &bins[0], self);
        rebuild(v, pinned_v, &bins[1], self);

        let error = (self.node_totals[u] - self.node_totals[v]) / 2.0;
        Ok(BalanceOutcome { moves, error })
    }
}

/// Result of balancing a single matched edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceOutcome {
    /// Loads whose hosting node changed.
    pub moves: usize,
    /// Half the residual gap, oriented `u` minus `v`; zero in the continuous
    /// case.
    pub error: f64,
}

/// Signed balancing error of one edge in one round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingError {
    /// 1-based round index.
    pub round: usize,
    /// The balanced edge `(u, v)` with `u < v`.
    pub edge: (usize, usize),
    /// `(x_u - x_v) / 2` after balancing.
    pub error: f64,
}

/// The exactly-divisible reference process: per-node real values that a
/// matching maps to pairwise averages.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousState {
    values: Vec<f64>,
}

impl ContinuousState {
    pub fn new(values: Vec<f64>) -> Self {
        ContinuousState { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn discrepancy(&self) -> f64 {
        let max = self
            .values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let min = self.values.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }

    /// Applies one matching in place: both entries of each matched pair
    /// become their average.
    pub fn apply_matching(&mut self, matching: &[(usize, usize)]) {
        for &(u, v) in matching {
            let avg = (self.values[u] + self.values[v]) / 2.0;
            self.values[u] = avg;
            self.values[v] = avg;
        }
    }
}

/// Returns the state after one matching of the continuous process.
pub fn continuous_step(state: &ContinuousState, matching: &[(usize, usize)]) -> ContinuousState {
    let mut next = state.clone();
    next.apply_matching(matching);
    next
}

/// Maximum absolute per-node difference between the discrete and continuous
/// processes. Both must have started from the same initial vector.
pub fn deviation(state: &NetworkState, reference: &ContinuousState) -> Result<f64> {
    if state.num_nodes() != reference.len() {
        return Err(Error::InvalidParameter("state and reference sizes differ"));
    }
    let mut max = 0.0f64;
    for (x, xi) in state.node_totals().iter().zip(reference.values()) {
        max = max.max(math::abs(x - xi));
    }
    Ok(max)
}

/// Rounds the continuous process needs to bring its discrepancy to `epsilon`
/// or below, applying the full schedule once per round. `None` when
/// `max_rounds` was reached first.
pub fn continuous_rounds_to_epsilon(
    initial: &[f64],
    schedule: &MatchingSchedule,
    epsilon: f64,
    max_rounds: usize,
) -> Option<usize> {
    let mut state = ContinuousState::new(initial.to_vec());
    if state.discrepancy() <= epsilon {
        return Some(0);
    }
    for round in 1..=max_rounds {
        for matching in schedule.matchings() {
            state.apply_matching(matching);
        }
        if state.discrepancy() <= epsilon {
            return Some(round);
        }
    }
    None
}

/// Iteration policy of [`run_dlb`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Iterations {
    /// Run exactly this many rounds (must be >= 1).
    Fixed(usize),
    /// Stop after the first round whose discrepancy improvement falls below
    /// `min_improvement`, or after `max_rounds`, whichever comes first.
    Converge {
        min_improvement: f64,
        max_rounds: usize,
    },
}

/// Options of [`run_dlb`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Track the continuous reference process (per matching) and record the
    /// per-round deviation from it.
    pub track_continuous: bool,
    /// Retain every per-edge [`MatchingError`] in the trace. Aggregates
    /// (per-round maximum absolute error, movement counts) are kept either
    /// way.
    pub record_matching_errors: bool,
    /// When set, the first-ball special case of each balancing draws a
    /// uniformly random bin from this seeded stream instead of using the
    /// lower-indexed node.
    pub random_first_ball: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            track_continuous: false,
            record_matching_errors: true,
            random_first_ball: None,
        }
    }
}

/// One row of the per-round trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    /// 1-based round index.
    pub round: usize,
    pub discrepancy: f64,
    pub max_total: f64,
    pub min_total: f64,
    /// Loads moved during this round.
    pub moves: u64,
    /// Largest `|error|` over this round's balanced edges.
    pub max_abs_error: f64,
    /// `max_w |x_w - xi_w|` against the continuous reference, when tracked.
    pub deviation: Option<f64>,
}

/// Full record of a DLB run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub initial_discrepancy: f64,
    pub initial_max: f64,
    pub initial_min: f64,
    pub rounds: Vec<RoundRecord>,
    /// Per-edge signed errors (empty when not recorded).
    pub matching_errors: Vec<MatchingError>,
    pub total_moves: u64,
    /// Number of edge balancings performed (edges per round times rounds).
    pub edge_balancings: u64,
    /// Largest single load weight in the network.
    pub max_load_weight: f64,
}

impl RunTrace {
    pub fn rounds_run(&self) -> usize {
        self.rounds.len()
    }

    pub fn final_discrepancy(&self) -> f64 {
        self.rounds
            .last()
            .map_or(self.initial_discrepancy, |r| r.discrepancy)
    }

    pub fn final_deviation(&self) -> Option<f64> {
        self.rounds.last().and_then(|r| r.deviation)
    }

    pub fn max_abs_error(&self) -> f64 {
        self.rounds
            .iter()
            .map(|r| r.max_abs_error)
            .fold(0.0, f64::max)
    }
}

/// Executes the DLB protocol: each round visits every matching of the
/// schedule in order and balances its edges in canonical order (edges within
/// a matching are vertex-disjoint, so the within-class order cannot change
/// the result).
pub fn run_dlb(
    state: &mut NetworkState,
    schedule: &MatchingSchedule,
    algorithm: Algorithm,
    iterations: Iterations,
    options: &RunOptions,
) -> Result<RunTrace> {
    if schedule.vertex_count() != state.num_nodes() {
        return Err(Error::InvalidParameter(
            "schedule and state vertex counts differ",
        ));
    }
    let max_rounds = match iterations {
        Iterations::Fixed(k) => {
            if k == 0 {
                return Err(Error::InvalidParameter("iteration count must be >= 1"));
            }
            k
        }
        Iterations::Converge { max_rounds, .. } => {
            if max_rounds == 0 {
                return Err(Error::InvalidParameter("round cap must be >= 1"));
            }
            max_rounds
        }
    };

    let mut reference = options
        .track_continuous
        .then(|| ContinuousState::new(state.node_totals().to_vec()));
    let mut first_ball_rng = options.random_first_ball.map(ChaCha8Rng::seed_from_u64);

    let initial_max = state
        .node_totals()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let initial_min = state
        .node_totals()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let mut trace = RunTrace {
        initial_discrepancy: initial_max - initial_min,
        initial_max,
        initial_min,
        rounds: Vec::new(),
        matching_errors: Vec::new(),
        total_moves: 0,
        edge_balancings: 0,
        max_load_weight: state.max_load_weight(),
    };

    let mut prev_discrepancy = trace.initial_discrepancy;
    for round in 1..=max_rounds {
        let mut round_moves = 0u64;
        let mut round_max_error = 0.0f64;
        for matching in schedule.matchings() {
            for &(u, v) in matching {
                let outcome = match first_ball_rng.as_mut() {
                    None => state.balance_matching(u, v, algorithm)?,
                    Some(rng) => state.balance_matching_with_rng(u, v, algorithm, rng)?,
                };
                round_moves += outcome.moves as u64;
                round_max_error = round_max_error.max(math::abs(outcome.error));
                trace.edge_balancings += 1;
                if options.record_matching_errors {
                    trace.matching_errors.push(MatchingError {
                        round,
                        edge: (u, v),
                        error: outcome.error,
                    });
                }
            }
            if let Some(reference) = reference.as_mut() {
                reference.apply_matching(matching);
            }
        }
        trace.total_moves += round_moves;
        let max_total = state
            .node_totals()
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let min_total = state
            .node_totals()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let discrepancy = max_total - min_total;
        let deviation_now = match reference.as_ref() {
            Some(reference) => Some(deviation(state, reference)?),
            None => None,
        };
        trace.rounds.push(RoundRecord {
            round,
            discrepancy,
            max_total,
            min_total,
            moves: round_moves,
            max_abs_error: round_max_error,
            deviation: deviation_now,
        });
        if let Iterations::Converge {
            min_improvement, ..
        } = iterations
        {
            if prev_discrepancy - discrepancy < min_improvement {
                break;
            }
        }
        prev_discrepancy = discrepancy;
    }
    Ok(trace)
}
