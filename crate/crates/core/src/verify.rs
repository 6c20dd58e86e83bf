//! Self-check suites run by `hashcount verify`.
//!
//! Each suite runs a fixed set of invariant checks and returns one line per
//! check. A suite passes when all of its checks pass.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::counter::{approx_count, bsat_on_hash, build_universe, check_sat, exact_cell_count, CounterParams};
use crate::error::{invalid, Error, Result};
use crate::formula::{exact_count, gen_random, Assignment, DnfFormula, Literal};
use crate::gf2::{next_gray_bit, RandomSource};
use crate::hashing::{sample_base, verify_universality, Family, Mode, RexHash};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Universality,
    Gray,
    Estimator,
    Fpras,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "universality" => Ok(Suite::Universality),
            "gray" => Ok(Suite::Gray),
            "estimator" => Ok(Suite::Estimator),
            "fpras" => Ok(Suite::Fpras),
            other => Err(invalid(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Universality => universality(seed)?,
        Suite::Gray => gray(seed)?,
        Suite::Estimator => estimator(seed)?,
        Suite::Fpras => fpras(seed)?,
    };
    Ok(SuiteReport { suite, seed, checks })
}

fn universality(seed: u64) -> Result<Vec<Check>> {
    let mut src = RandomSource::new(seed, 0x756e69);
    let mut out = Vec::new();
    let cases = [(Family::Rex, 3, 1), (Family::Rex, 4, 2), (Family::Rex, 5, 2), (Family::Xor, 3, 1)];
    for (family, q, p) in cases {
        let r = verify_universality(family, q, p, Mode::Exhaustive, &mut src)?;
        out.push(check(
            format!("{family:?} q={q} p={p} exhaustive"),
            r.passes(),
            format!(
                "{} functions; Pr[h(x)=y] in [{}, {}]; max collision {}",
                r.functions, r.point_min, r.point_max, r.collision_max
            ),
        ));
    }
    let r = verify_universality(
        Family::Rex,
        16,
        6,
        Mode::Sampled {
            functions: 2000,
            points: 24,
        },
        &mut src,
    )?;
    let (coll, band) = r.pooled_collision.unwrap_or((f64::NAN, 0.0));
    out.push(check(
        "Rex q=16 p=6 sampled",
        r.passes(),
        format!("pooled collision {coll:.5} vs {:.5} ± {band:.5}", 1.0 / 64.0),
    ));
    Ok(out)
}

fn gray(seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut all = true;
    for l in 1..=16u32 {
        let mut seen = vec![false; 1 << l];
        let mut word = 0usize;
        seen[0] = true;
        let mut ok = true;
        for j in 0..(1u128 << l) - 1 {
            word ^= 1 << next_gray_bit(l, j)?;
            ok &= !std::mem::replace(&mut seen[word], true);
        }
        all &= ok && seen.iter().all(|&s| s);
    }
    out.push(check("gray cycle l=1..16", all, "every word visited exactly once"));

    let mut src = RandomSource::new(seed, 0x677279);
    let mut agree = 0;
    let cases = 100;
    for k in 0..cases {
        let q = 2 + k % 11;
        let s_init = src.rand_below(q as u64) as usize;
        let base = sample_base(q, s_init, &mut src)?;
        let p = s_init + src.rand_below((q - s_init) as u64) as usize;
        let hash = base.extract(p)?;
        let walked: std::collections::BTreeSet<_> = hash.cell_members().into_iter().collect();
        let (a, rhs) = hash.as_system();
        let solved: std::collections::BTreeSet<_> =
            crate::gf2::enumerate_solutions(&a, &rhs, &crate::gf2::BitVec::zeros(p), usize::MAX)?
                .into_iter()
                .collect();
        if walked == solved && walked.len() == 1usize << (q - p) {
            agree += 1;
        }
    }
    out.push(check(
        "gray walk matches elimination",
        agree == cases,
        format!("{agree}/{cases} random row-echelon cells agree and have 2^(q-p) members"),
    ));
    Ok(out)
}

/// Sample mean and its standard error.
fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn estimator(seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();

    // Four cubes, two of which hold at (x1, x2) = (1, 1).
    let phi = DnfFormula::new(
        2,
        vec![vec![Literal::pos(0)], vec![Literal::pos(1)], vec![Literal::neg(0)], vec![Literal::neg(1)]],
    )?;
    let x: Assignment = "11".parse()?;
    let draws = 100_000;
    let mut src = RandomSource::new(seed, 0x657374);
    let c: Vec<f64> = (0..draws).map(|_| check_sat(&phi, &x, 0, None, &mut src) as f64).collect();
    let c2: Vec<f64> = c.iter().map(|v| v * v).collect();
    let (m1, se1) = mean_and_se(&c);
    let (m2, se2) = mean_and_se(&c2);
    out.push(check(
        "trial count first moment",
        (m1 - 2.0).abs() <= 3.0 * se1,
        format!("mean c_x = {m1:.4}, expected 2 ± {:.4}", 3.0 * se1),
    ));
    out.push(check(
        "trial count second moment",
        (m2 - 6.0).abs() <= 3.0 * se2,
        format!("mean c_x^2 = {m2:.4}, expected 6 ± {:.4}", 3.0 * se2),
    ));

    let mut matched = 0;
    let instances = 30;
    for k in 0..instances {
        let phi = gen_random(6 + k % 7, 2 + k % 9, 1, 4, seed.wrapping_add(k as u64))?;
        let u = build_universe(&phi)?;
        let cell = exact_cell_count(&phi, &u, &RexHash::trivial(u.q()))?;
        if cell.coverage_sum == BigRational::from_integer(BigInt::from(exact_count(&phi)?)) {
            matched += 1;
        }
    }
    out.push(check(
        "coverage identity",
        matched == instances,
        format!("{matched}/{instances} instances: sum of 1/|cov| equals the exact count"),
    ));

    let phi = gen_random(8, 5, 2, 4, seed ^ 0x5eed)?;
    let u = build_universe(&phi)?;
    let mut hsrc = RandomSource::new(seed, 0x686173);
    let base = sample_base(u.q(), 0, &mut hsrc)?;
    let hash = base.extract(2.min(u.q() - 1))?;
    let exact = exact_cell_count(&phi, &u, &hash)?.coverage_sum.to_f64().unwrap_or(f64::NAN);
    let reps = 20_000;
    let root = RandomSource::new(seed, 0x726570);
    let values = par::map_indexed(reps, |r| {
        let mut s = root.split(r as u64);
        bsat_on_hash(&phi, &u, &hash, u64::MAX, &mut s).map(|e| e.value().to_f64().unwrap_or(f64::NAN))
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let (mean, se) = mean_and_se(&values);
    out.push(check(
        "cell estimate unbiased",
        (mean - exact).abs() <= 3.0 * se,
        format!("mean {mean:.4} over {reps} repetitions vs coverage sum {exact:.4} ± {:.4}", 3.0 * se),
    ));
    Ok(out)
}

/// Random instances with `n ∈ [8, 16]`, `m ∈ [2, 12]` and widths in `[2, 5]`.
pub fn calibration_instances(count: usize, seed: u64) -> Result<Vec<DnfFormula>> {
    let mut src = RandomSource::new(seed, 0x63616c);
    (0..count)
        .map(|_| {
            let n = 8 + src.rand_below(9) as usize;
            let m = 2 + src.rand_below(11) as usize;
            gen_random(n, m, 2, 5, src.next_u64())
        })
        .collect()
}

/// `true` when `estimate` lies within a factor `1 + epsilon` of `exact`.
pub fn within_factor(estimate: &BigRational, exact: u64, epsilon: f64) -> bool {
    let exact = BigInt::from(exact);
    if exact.is_zero() {
        return estimate.is_zero();
    }
    let f = BigRational::from_float(1.0 + epsilon).expect("finite factor");
    let e = BigRational::from_integer(exact);
    e.clone() <= estimate * &f && estimate <= &(e * f)
}

fn fpras(seed: u64) -> Result<Vec<Check>> {
    let (eps, delta) = (0.8, 0.2);
    let instances = calibration_instances(20, seed)?;
    let runs_per = 5;
    let outcomes = par::map_indexed(instances.len() * runs_per, |k| -> Result<bool> {
        let phi = &instances[k / runs_per];
        let params = CounterParams::new(eps, delta, seed.wrapping_mul(1000).wrapping_add(k as u64))?;
        let est = approx_count(phi, &params)?;
        Ok(within_factor(&est.value, exact_count(phi)?, eps))
    })
    .into_iter()
    .collect::<Result<Vec<bool>>>()?;
    let good = outcomes.iter().filter(|&&b| b).count();
    let frac = good as f64 / outcomes.len() as f64;
    Ok(vec![check(
        "fpras calibration",
        frac >= 0.75,
        format!("{good}/{} runs within factor 1.8 (eps = {eps}, delta = {delta})", outcomes.len()),
    )])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!("gray".parse::<Suite>().unwrap(), Suite::Gray);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn factor_check() {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert!(within_factor(&r(9, 1), 5, 0.8));
        assert!(!within_factor(&r(10, 1), 5, 0.8));
        assert!(within_factor(&r(25, 9), 5, 0.8));
        assert!(!within_factor(&r(27, 10), 5, 0.8));
        assert!(within_factor(&r(0, 1), 0, 0.8));
    }

    #[test]
    fn gray_and_universality_pass() {
        assert!(run_suite(Suite::Gray, 1).unwrap().passed());
        assert!(run_suite(Suite::Universality, 1).unwrap().passed());
    }
}
