//! Scaling measurements run by `hashcount bench`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::baselines::approxmc2_dnf_count;
use crate::counter::{approx_count, threshold_trials, CountEstimate, CounterParams};
use crate::decimal::to_decimal;
use crate::error::{invalid, Error, Result};
use crate::formula::gen_random;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchSuite {
    ScalingM,
    ScalingN,
    VsBaseline,
}

impl FromStr for BenchSuite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scaling-m" => Ok(BenchSuite::ScalingM),
            "scaling-n" => Ok(BenchSuite::ScalingN),
            "vs-baseline" => Ok(BenchSuite::VsBaseline),
            other => Err(invalid(format!("unknown bench suite {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchAlgo {
    Symbolic,
    Approxmc2,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub suite: BenchSuite,
    pub algo: BenchAlgo,
    pub n: usize,
    pub m: usize,
    pub rounds: usize,
    pub failed_rounds: usize,
    /// Cube draws (symbolic) or enumerated solutions (approxmc2), all rounds.
    pub trials: u64,
    /// Mean of `trials` per round.
    pub trials_per_round: f64,
    pub probes: usize,
    /// Largest single cell count of the run.
    pub max_bsat_trials: u64,
    /// The per-cell limit `max_bsat_trials` must respect.
    pub trial_bound: u64,
    pub estimate_decimal: String,
    pub wall_ms: f64,
}

impl BenchRow {
    pub fn within_bound(&self) -> bool {
        self.max_bsat_trials <= self.trial_bound
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.8,
            delta: 0.2,
            seed: 0,
        }
    }
}

/// Cube widths for generated bench instances over `n` variables.
fn widths(n: usize) -> (usize, usize) {
    (3.min(n), 8.min(n))
}

fn measure(
    suite: BenchSuite,
    algo: BenchAlgo,
    n: usize,
    m: usize,
    cfg: &BenchConfig,
) -> Result<BenchRow> {
    let (wmin, wmax) = widths(n);
    let phi = gen_random(n, m, wmin, wmax, cfg.seed ^ ((n as u64) << 32 | m as u64))?;
    let params = CounterParams::new(cfg.epsilon, cfg.delta, cfg.seed)?;
    let start = Instant::now();
    let est: CountEstimate = match algo {
        BenchAlgo::Symbolic => approx_count(&phi, &params)?,
        BenchAlgo::Approxmc2 => approxmc2_dnf_count(&phi, &params)?,
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let trial_bound = match algo {
        BenchAlgo::Symbolic => threshold_trials(m, params.hi_thresh)?,
        BenchAlgo::Approxmc2 => est.threshold_trials * m as u64,
    };
    let trials = est.total_trials();
    Ok(BenchRow {
        suite,
        algo,
        n,
        m,
        rounds: est.rounds.len(),
        failed_rounds: est.failed_rounds,
        trials,
        trials_per_round: trials as f64 / est.rounds.len().max(1) as f64,
        probes: est.total_probes(),
        max_bsat_trials: est.max_bsat_trials(),
        trial_bound,
        estimate_decimal: to_decimal(&est.value),
        wall_ms,
    })
}

pub fn run_bench(suite: BenchSuite, cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    match suite {
        BenchSuite::ScalingM => [64, 128, 256]
            .into_iter()
            .map(|m| measure(suite, BenchAlgo::Symbolic, 40, m, cfg))
            .collect(),
        BenchSuite::ScalingN => [16, 32, 64]
            .into_iter()
            .map(|n| measure(suite, BenchAlgo::Symbolic, n, 32, cfg))
            .collect(),
        BenchSuite::VsBaseline => [BenchAlgo::Symbolic, BenchAlgo::Approxmc2]
            .into_iter()
            .map(|algo| measure(suite, algo, 64, 64, cfg))
            .collect(),
    }
}

impl fmt::Display for BenchRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<10} n={:<3} m={:<4} rounds={:<3} failed={:<2} trials/round={:<10.1} probes={:<4} max_cell={:<7} bound={:<7} est={:<18} {:>9.2} ms",
            format!("{:?}", self.algo).to_lowercase(),
            self.n,
            self.m,
            self.rounds,
            self.failed_rounds,
            self.trials_per_round,
            self.probes,
            self.max_bsat_trials,
            self.trial_bound,
            self.estimate_decimal,
            self.wall_ms
        )
    }
}
