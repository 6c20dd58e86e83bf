//! Reference counters used to cross-check the symbolic counter.
//!
//! [`klm_count`] is the Karp-Luby-Madras Monte Carlo estimator over the
//! symbolic universe with a fixed sample size. [`approxmc2_dnf_count`] is the
//! hashing counter over the original assignment space: fully random XOR
//! constraints, cells counted by Gaussian elimination per cube.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::counter::{self, bracket_search, build_universe, check_sat, CountEstimate, CounterParams, RoundResult};
use crate::error::{Error, Result};
use crate::formula::{Assignment, DnfFormula};
use crate::gf2::{rref, BitVec, GrayWalk, RandomSource};
use crate::hashing::{sample_hxor, XorHash};
use crate::par;

const KLM_STREAM: u64 = 0x6b6c6d;
const APPROXMC_STREAM: u64 = 0x616d63;
const KLM_CHUNK: usize = 1024;

/// Result of the Monte Carlo estimator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonteCarloEstimate {
    pub samples: u64,
    /// `Σ c_x` over all samples.
    pub trial_sum: u64,
    /// `S · trial_sum / (samples · m)`.
    #[serde(skip)]
    pub value: BigRational,
}

/// `ceil(8 · (1 + ε) · ln(2/δ) / ε²)`.
pub fn klm_samples(epsilon: f64, delta: f64) -> u64 {
    (8.0 * (1.0 + epsilon) * (2.0 / delta).ln() / (epsilon * epsilon)).ceil() as u64
}

pub fn klm_count(phi: &DnfFormula, epsilon: f64, delta: f64, seed: u64) -> Result<MonteCarloEstimate> {
    counter::validate(epsilon, delta)?;
    klm_count_with_samples(phi, klm_samples(epsilon, delta), seed)
}

/// Draws `samples` states uniformly from the symbolic universe and averages
/// their uncapped trial counts. Samples are processed in fixed chunks, each
/// on its own split stream, so the result depends only on `seed`.
pub fn klm_count_with_samples(phi: &DnfFormula, samples: u64, seed: u64) -> Result<MonteCarloEstimate> {
    if let Some(v) = counter::trivial_count(phi) {
        return Ok(MonteCarloEstimate {
            samples: 0,
            trial_sum: 0,
            value: v,
        });
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let universe = build_universe(phi)?;
    let root = RandomSource::new(seed, KLM_STREAM);
    let chunks = (samples as usize).div_ceil(KLM_CHUNK);
    let sums = par::map_indexed(chunks, |k| {
        let mut src = root.split(k as u64);
        let take = KLM_CHUNK.min(samples as usize - k * KLM_CHUNK);
        let mut x = Assignment::zeros(phi.num_vars());
        let mut sum = 0u64;
        for _ in 0..take {
            let s = src.rand_below_u128(universe.size());
            universe.decode_into(phi, s, &mut x).expect("sampled state is valid");
            sum += check_sat(phi, &x, 0, None, &mut src);
        }
        sum
    });
    let trial_sum: u64 = sums.into_iter().sum();
    let value = BigRational::new(
        BigInt::from(universe.size()) * BigInt::from(trial_sum),
        BigInt::from(samples) * BigInt::from(phi.num_cubes()),
    );
    Ok(MonteCarloEstimate {
        samples,
        trial_sum,
        value,
    })
}

/// Number of distinct `x ⊨ φ` with `A·x ⊕ b = y`, capped at
/// `ceil(hi_thresh)`.
///
/// Each cube's forced values are substituted into the system, which is then
/// reduced and its solutions enumerated over the cube's free variables.
pub fn ge_bsat(phi: &DnfFormula, hash: &XorHash, y: &BitVec, hi_thresh: f64) -> Result<u64> {
    Ok(ge_bsat_counted(phi, hash, y, hi_thresh)?.0)
}

/// [`ge_bsat`] plus the number of solutions enumerated along the way.
fn ge_bsat_counted(phi: &DnfFormula, hash: &XorHash, y: &BitVec, hi_thresh: f64) -> Result<(u64, u64)> {
    let n = phi.num_vars();
    if hash.num_vars() != n || y.len() != hash.num_constraints() {
        return Err(Error::Dimension(format!(
            "hash is {}x{} with a {}-bit cell, formula has {n} variables",
            hash.num_constraints(),
            hash.num_vars(),
            y.len()
        )));
    }
    let cap = hi_thresh.ceil().max(0.0) as usize;
    let rhs = &hash.b ^ y;
    let mut seen: HashSet<BitVec> = HashSet::with_capacity(cap.min(1 << 12));
    let mut enumerated = 0u64;
    for cube in phi.cubes() {
        if seen.len() >= cap {
            break;
        }
        let mut a = hash.a.clone();
        let mut aug = rhs.clone();
        for r in 0..a.num_rows() {
            if a.row(r).dot(cube.values()) {
                aug.flip(r);
            }
            a.row_mut(r).and_not_assign(cube.mask());
        }
        let ech = rref(&a, &aug)?;
        let Some((mut base, deltas)) = ech.solution_space() else {
            continue;
        };
        let deltas = ech
            .free_columns()
            .into_iter()
            .zip(deltas)
            .filter(|(f, _)| !cube.mask().get(*f))
            .map(|(_, d)| d)
            .collect();
        base.xor_assign(cube.values());
        for x in GrayWalk::new(base, deltas) {
            enumerated += 1;
            seen.insert(x);
            if seen.len() >= cap {
                break;
            }
        }
    }
    Ok((seen.len().min(cap) as u64, enumerated))
}

/// Median-of-rounds hashing counter over assignments with
/// `hi_thresh' = params.hi_thresh / 2` and levels `p ∈ [0, n - 1]`.
pub fn approxmc2_dnf_count(phi: &DnfFormula, params: &CounterParams) -> Result<CountEstimate> {
    counter::validate(params.epsilon, params.delta)?;
    if let Some(v) = counter::trivial_count(phi) {
        return Ok(CountEstimate::trivial(v));
    }
    let n = phi.num_vars();
    let thresh = params.hi_thresh / 2.0;
    let cap = thresh.ceil() as u64;
    let root = RandomSource::new(params.seed, APPROXMC_STREAM);
    let rounds: Vec<RoundResult> = par::map_indexed(params.rounds, |r| {
        let mut src = root.split(r as u64);
        let hash = sample_hxor(n, n - 1, &mut src);
        let y = src.rand_bits(n - 1);
        let mut round = RoundResult {
            estimate: None,
            trials: 0,
            probes: 0,
            max_bsat_trials: 0,
            max_states_visited: 0,
            exact: false,
        };
        let mut counts = vec![None; n];
        let outcome = bracket_search(0, n - 1, |p| {
            let (count, enumerated) = ge_bsat_counted(phi, &hash.prefix(p), &y.slice(0..p), thresh)?;
            round.trials += enumerated;
            round.max_bsat_trials = round.max_bsat_trials.max(enumerated);
            counts[p] = Some(count);
            Ok(count < cap)
        })?;
        round.probes = outcome.probes;
        round.estimate = outcome.level.map(|p| {
            let c = counts[p].expect("returned level was probed");
            (p, BigRational::from_integer(BigInt::from(c)))
        });
        Ok(round)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    counter::finish(rounds, cap)
}
