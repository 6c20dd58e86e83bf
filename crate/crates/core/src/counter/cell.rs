use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::universe::SymbolicUniverse;
use crate::error::{invalid, Error, Result};
use crate::formula::{Assignment, DnfFormula};
use crate::gf2::RandomSource;
use crate::hashing::{BaseSample, RexHash};

/// Largest hash-domain width the exact cell oracle will enumerate.
pub const EXACT_CELL_LIMIT: usize = 24;

/// Stochastic count of one cell: `trials / m`, where `trials` is the sum of
/// the geometric trial counts `c_x` of the valid states visited.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellEstimate {
    pub trials: u64,
    pub m: usize,
    /// The walk stopped because `trials` reached the threshold.
    pub saturated: bool,
    /// Cell members visited, padding included.
    pub states_visited: u128,
}

impl CellEstimate {
    pub fn empty(m: usize) -> Self {
        Self {
            trials: 0,
            m,
            saturated: false,
            states_visited: 0,
        }
    }

    pub fn value(&self) -> BigRational {
        BigRational::new(BigInt::from(self.trials), BigInt::from(self.m))
    }
}

/// `ceil(m · hi_thresh)`, evaluated exactly on the binary value of
/// `hi_thresh`. A cell count `trials / m` is below `hi_thresh` iff
/// `trials < threshold_trials(m, hi_thresh)`.
pub fn threshold_trials(m: usize, hi_thresh: f64) -> Result<u64> {
    let h = BigRational::from_float(hi_thresh)
        .filter(|h| *h > BigRational::zero())
        .ok_or_else(|| invalid(format!("threshold must be a positive finite number, got {hi_thresh}")))?;
    let scaled = (h * BigRational::from_integer(BigInt::from(m))).ceil();
    scaled.to_integer().to_u64().ok_or(Error::LimitExceeded {
        what: "trial threshold",
        value: usize::MAX,
        limit: u64::MAX as usize,
    })
}

/// Draws cubes uniformly until one is satisfied by `x` and returns the
/// number of draws `c_x`. With a threshold, also stops as soon as
/// `running + c_x` reaches it.
///
/// `x` must satisfy at least one cube when no threshold is given.
#[inline]
pub fn check_sat(phi: &DnfFormula, x: &Assignment, running: u64, threshold: Option<u64>, src: &mut RandomSource) -> u64 {
    let m = phi.num_cubes() as u64;
    let mut c = 0u64;
    loop {
        c += 1;
        let j = src.rand_below(m) as usize;
        if phi.cube(j).satisfied_by(x) {
            return c;
        }
        if let Some(t) = threshold {
            if running + c >= t {
                return c;
            }
        }
    }
}

/// Stochastic count of the cell of `base.extract(p)`.
pub fn bsat(
    phi: &DnfFormula,
    universe: &SymbolicUniverse,
    base: &BaseSample,
    p: usize,
    threshold: u64,
    src: &mut RandomSource,
) -> Result<CellEstimate> {
    let hash = base.extract(p)?;
    bsat_on_hash(phi, universe, &hash, threshold, src)
}

/// Walks the cell of `hash` in Gray order, adding `c_x` for every valid
/// state, and stops early once the running total reaches `threshold`.
pub fn bsat_on_hash(
    phi: &DnfFormula,
    universe: &SymbolicUniverse,
    hash: &RexHash,
    threshold: u64,
    src: &mut RandomSource,
) -> Result<CellEstimate> {
    if hash.num_vars() != universe.q() {
        return Err(Error::Dimension(format!(
            "hash over {} bits, universe has {}",
            hash.num_vars(),
            universe.q()
        )));
    }
    let mut est = CellEstimate::empty(phi.num_cubes());
    let mut x = Assignment::zeros(phi.num_vars());
    let mut walk = hash.cell_walk();
    loop {
        est.states_visited += 1;
        if universe.decode_into(phi, walk.current().to_u128(), &mut x).is_some() {
            est.trials += check_sat(phi, &x, est.trials, Some(threshold), src);
            if est.trials >= threshold {
                est.saturated = true;
                return Ok(est);
            }
        }
        if !walk.advance() {
            return Ok(est);
        }
    }
}

/// Deterministic contents of one cell, for use as a test oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCell {
    /// Valid states `(x, i)` with `x` satisfying no cube before `i`.
    pub canonical: u64,
    /// `Σ 1/|cov(x)|` over the valid states of the cell.
    pub coverage_sum: BigRational,
    pub valid_states: u64,
}

pub fn exact_cell_count(phi: &DnfFormula, universe: &SymbolicUniverse, hash: &RexHash) -> Result<ExactCell> {
    if universe.q() > EXACT_CELL_LIMIT {
        return Err(Error::LimitExceeded {
            what: "hash-domain width for exact cell enumeration",
            value: universe.q(),
            limit: EXACT_CELL_LIMIT,
        });
    }
    if hash.num_vars() != universe.q() {
        return Err(Error::Dimension(format!(
            "hash over {} bits, universe has {}",
            hash.num_vars(),
            universe.q()
        )));
    }
    let m = phi.num_cubes();
    let mut by_coverage = vec![0u64; m + 1];
    let mut canonical = 0u64;
    let mut x = Assignment::zeros(phi.num_vars());
    for z in hash.cell_walk() {
        let Some(i) = universe.decode_into(phi, z.to_u128(), &mut x) else {
            continue;
        };
        if !phi.cubes()[..i].iter().any(|c| c.satisfied_by(&x)) {
            canonical += 1;
        }
        by_coverage[phi.coverage_size(&x)] += 1;
    }
    let coverage_sum = by_coverage
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &cnt)| BigRational::new(BigInt::from(cnt), BigInt::from(k)))
        .fold(BigRational::zero(), |a, b| a + b);
    Ok(ExactCell {
        canonical,
        coverage_sum,
        valid_states: by_coverage.iter().sum(),
    })
}
