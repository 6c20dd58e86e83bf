//! The symbolic-hashing approximate counter.
//!
//! One round builds the symbolic universe of `φ`, samples a row-echelon
//! base, searches for the constraint count `p` at which a random cell holds
//! fewer than `hi_thresh` (stochastically counted) solutions, and returns
//! `2^p` times a fresh count of that cell. The driver takes the median over
//! independent rounds.

mod cell;
mod search;
mod universe;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

pub use cell::{bsat, bsat_on_hash, check_sat, exact_cell_count, threshold_trials, CellEstimate, ExactCell, EXACT_CELL_LIMIT};
pub use search::{bracket_search, probe_bound, SearchOutcome};
pub use universe::{build_universe, SymbolicUniverse, MAX_UNIVERSE_BITS};

use crate::error::{invalid, Error, Result};
use crate::formula::DnfFormula;
use crate::gf2::RandomSource;
use crate::hashing::{sample_base, BaseSample, RexHash};
use crate::par;

/// Accuracy and confidence targets with the derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CounterParams {
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub hi_thresh: f64,
    pub rounds: usize,
}

impl CounterParams {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Result<Self> {
        validate(epsilon, delta)?;
        Ok(Self {
            epsilon,
            delta,
            seed,
            hi_thresh: hi_thresh(epsilon),
            rounds: rounds(delta),
        })
    }

    /// Same targets and seed with a fixed number of rounds.
    pub fn with_rounds(mut self, rounds: usize) -> Self {
        self.rounds = rounds.max(1);
        self
    }
}

pub(crate) fn validate(epsilon: f64, delta: f64) -> Result<()> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(invalid(format!("epsilon must be > 0, got {epsilon}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

/// `2 · (1 + 9.84 · (1 + ε/(1+ε)) · (1 + 1/ε)²)`.
pub fn hi_thresh(epsilon: f64) -> f64 {
    2.0 * (1.0 + 9.84 * (1.0 + epsilon / (1.0 + epsilon)) * (1.0 + 1.0 / epsilon).powi(2))
}

/// `ceil(17 · log2(3/δ))`.
pub fn rounds(delta: f64) -> usize {
    (17.0 * (3.0 / delta).log2()).ceil() as usize
}

/// `max(0, floor(n - w_min - log2 hi_thresh))`, capped at `q - 1`.
pub fn initial_constraints(universe: &SymbolicUniverse, hi_thresh: f64) -> usize {
    let raw = (universe.num_vars() as f64 - universe.min_width() as f64 - hi_thresh.log2()).floor();
    let s = if raw > 0.0 { raw as usize } else { 0 };
    s.min(universe.q().saturating_sub(1))
}

/// Outcome of one estimation round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundResult {
    /// `(p, cell count)` with estimate `2^p · cell count`; `None` if the
    /// search ran off the top level.
    #[serde(skip)]
    pub estimate: Option<(usize, BigRational)>,
    /// Cube-membership draws across every cell count of the round.
    pub trials: u64,
    pub probes: usize,
    /// Largest draw count of a single cell count.
    pub max_bsat_trials: u64,
    /// Largest number of cell members visited by a single cell count.
    pub max_states_visited: u128,
    /// The round counted the whole universe exactly instead of hashing.
    pub exact: bool,
}

impl RoundResult {
    pub fn value(&self) -> Option<BigRational> {
        self.estimate
            .as_ref()
            .map(|(p, c)| c * BigRational::from_integer(BigInt::one() << *p))
    }

    fn record(&mut self, cell: &CellEstimate) {
        self.trials += cell.trials;
        self.max_bsat_trials = self.max_bsat_trials.max(cell.trials);
        self.max_states_visited = self.max_states_visited.max(cell.states_visited);
    }
}

/// One estimation round on a built universe.
pub fn core(phi: &DnfFormula, universe: &SymbolicUniverse, params: &CounterParams, src: &mut RandomSource) -> Result<RoundResult> {
    let q = universe.q();
    let threshold = threshold_trials(phi.num_cubes(), params.hi_thresh)?;
    let mut round = RoundResult {
        estimate: None,
        trials: 0,
        probes: 0,
        max_bsat_trials: 0,
        max_states_visited: 0,
        exact: false,
    };

    // Domain no larger than m · hi_thresh: count the single cell exactly.
    if q < 64 && (1u64 << q) <= threshold {
        let cell = exact_cell_count(phi, universe, &RexHash::trivial(q))?;
        round.exact = true;
        round.max_states_visited = 1u128 << q;
        round.estimate = Some((0, BigRational::from_integer(BigInt::from(cell.canonical))));
        return Ok(round);
    }

    let s_init = initial_constraints(universe, params.hi_thresh);
    let base = sample_base(q, s_init, src)?;
    let outcome = log_sat_search(phi, universe, &base, threshold, src, &mut round)?;
    round.probes = outcome.probes;
    if let Some(p) = outcome.level {
        let cell = bsat(phi, universe, &base, p, threshold, src)?;
        round.record(&cell);
        round.estimate = Some((p, cell.value()));
    }
    Ok(round)
}

/// Searches `[s_init, q - 1]` for the first level whose cell count falls
/// below the threshold. Every probe is recorded into `round`.
pub fn log_sat_search(
    phi: &DnfFormula,
    universe: &SymbolicUniverse,
    base: &BaseSample,
    threshold: u64,
    src: &mut RandomSource,
    round: &mut RoundResult,
) -> Result<SearchOutcome> {
    let low = base.initial_constraints();
    let hi = universe.q() - 1;
    bracket_search(low, hi, |p| {
        let cell = bsat(phi, universe, base, p, threshold, src)?;
        round.record(&cell);
        Ok(cell.trials < threshold)
    })
}

/// Final answer of a median-of-rounds counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountEstimate {
    pub value: BigRational,
    /// Constraint count of each round, `None` for failed rounds.
    pub p_used: Vec<Option<usize>>,
    pub rounds: Vec<RoundResult>,
    pub failed_rounds: usize,
    /// The trial threshold `ceil(m · hi_thresh)` cells were compared against.
    pub threshold_trials: u64,
}

impl CountEstimate {
    pub(crate) fn trivial(value: BigRational) -> Self {
        Self {
            value,
            p_used: Vec::new(),
            rounds: Vec::new(),
            failed_rounds: 0,
            threshold_trials: 0,
        }
    }

    pub fn total_trials(&self) -> u64 {
        self.rounds.iter().map(|r| r.trials).sum()
    }

    pub fn total_probes(&self) -> usize {
        self.rounds.iter().map(|r| r.probes).sum()
    }

    pub fn max_bsat_trials(&self) -> u64 {
        self.rounds.iter().map(|r| r.max_bsat_trials).max().unwrap_or(0)
    }
}

/// Exact answer for formulas that need no sampling.
pub(crate) fn trivial_count(phi: &DnfFormula) -> Option<BigRational> {
    if phi.is_unsatisfiable() {
        Some(BigRational::zero())
    } else if phi.is_tautology() {
        Some(BigRational::from_integer(BigInt::one() << phi.num_vars()))
    } else {
        None
    }
}

/// Lower median of exact values, independent of input order.
pub fn lower_median(mut values: Vec<BigRational>) -> Option<BigRational> {
    if values.is_empty() {
        return None;
    }
    values.sort();
    Some(values.swap_remove((values.len() - 1) / 2))
}

/// Median of `params.rounds` independent rounds of [`core`]. Round `r`
/// draws from stream `r` split off `(seed, 0)`, so the result does not
/// depend on scheduling.
pub fn approx_count(phi: &DnfFormula, params: &CounterParams) -> Result<CountEstimate> {
    validate(params.epsilon, params.delta)?;
    if let Some(v) = trivial_count(phi) {
        return Ok(CountEstimate::trivial(v));
    }
    let universe = build_universe(phi)?;
    let root = RandomSource::new(params.seed, 0);
    let rounds: Vec<RoundResult> = par::map_indexed(params.rounds, |r| {
        let mut src = root.split(r as u64);
        core(phi, &universe, params, &mut src)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    finish(rounds, threshold_trials(phi.num_cubes(), params.hi_thresh)?)
}

pub(crate) fn finish(rounds: Vec<RoundResult>, threshold_trials: u64) -> Result<CountEstimate> {
    let values: Vec<BigRational> = rounds.iter().filter_map(RoundResult::value).collect();
    let failed_rounds = rounds.len() - values.len();
    let value = lower_median(values).ok_or(Error::AllRoundsFailed { rounds: rounds.len() })?;
    Ok(CountEstimate {
        value,
        p_used: rounds.iter().map(|r| r.estimate.as_ref().map(|(p, _)| *p)).collect(),
        rounds,
        failed_rounds,
        threshold_trials,
    })
}
