//! Empirical and exhaustive checks of 2-universality.
//!
//! Exhaustive mode enumerates every member of the family once (each member
//! is equally likely, so counting members is computing probabilities), and
//! reports exact rationals. Sampled mode draws members from a
//! [`RandomSource`] and compares pooled frequencies against 3σ binomial
//! bands.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::gf2::RandomSource;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    Xor,
    Rex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { functions: usize, points: usize },
}

/// `hits / trials`, kept as integers so exhaustive results stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Probability {
    pub hits: u64,
    pub trials: u64,
}

impl Probability {
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.hits, self.trials.max(1))
    }

    pub fn value(&self) -> f64 {
        self.hits as f64 / self.trials.max(1) as f64
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ratio())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct UniversalityReport {
    pub family: Family,
    pub q: usize,
    pub p: usize,
    pub exact: bool,
    pub functions: u64,
    /// Extremes of `Pr[h(x) = y]` over the checked `(x, y)`.
    pub point_min: Probability,
    pub point_max: Probability,
    /// Largest `Pr[h(x1) = h(x2)]` over checked pairs `x1 != x2`.
    pub collision_max: Probability,
    /// REX only: pairs whose XOR has an all-zero free part.
    pub free_zero_collision_max: Option<Probability>,
    /// REX only: pairs whose XOR has a nonzero free part.
    pub free_nonzero_collision_min: Option<Probability>,
    pub free_nonzero_collision_max: Option<Probability>,
    /// Sampled mode: pooled collision frequency over all checked pairs with
    /// nonzero free part (all pairs for XOR), and its 3σ half-width.
    pub pooled_collision: Option<(f64, f64)>,
    pub pooled_point: Option<(f64, f64)>,
    #[serde(skip)]
    pair_hits: Option<Vec<u64>>,
}

impl UniversalityReport {
    pub fn target(&self) -> Ratio<u64> {
        Ratio::new(1, 1u64 << self.p)
    }

    /// Exact `Pr[h(x1) = h(x2)]` for points written as integers (bit 0 is
    /// coordinate 0). Only recorded in exhaustive mode with `q <= 8`.
    pub fn pair_collision(&self, x1: u64, x2: u64) -> Option<Ratio<u64>> {
        let table = self.pair_hits.as_ref()?;
        let size = 1u64 << self.q;
        if x1 >= size || x2 >= size {
            return None;
        }
        Some(Ratio::new(table[(x1 * size + x2) as usize], self.functions))
    }

    pub fn passes(&self) -> bool {
        let target = self.target();
        if self.exact {
            let uniform = self.point_min.ratio() == target && self.point_max.ratio() == target;
            let bounded = self.collision_max.ratio() <= target;
            let cases = match self.family {
                Family::Xor => true,
                Family::Rex => {
                    self.free_zero_collision_max.is_none_or(|c| c.hits == 0)
                        && self.free_nonzero_collision_min.is_none_or(|c| c.ratio() == target)
                        && self.free_nonzero_collision_max.is_none_or(|c| c.ratio() == target)
                }
            };
            uniform && bounded && cases
        } else {
            let t = 1.0 / (1u64 << self.p) as f64;
            let within = |s: Option<(f64, f64)>| s.is_none_or(|(est, band)| (est - t).abs() <= band);
            let case1 = self.free_zero_collision_max.is_none_or(|c| c.hits == 0);
            within(self.pooled_collision) && within(self.pooled_point) && case1
        }
    }
}

/// Evaluates one family member on integer-coded points.
struct Member {
    p: usize,
    // Rows as bit masks over the hash domain; for REX over free bits only.
    rows: Vec<u64>,
    b: u64,
    family: Family,
}

impl Member {
    #[inline]
    fn eval(&self, x: u64) -> u64 {
        let mut h = self.b;
        let (dep, free) = match self.family {
            Family::Rex => (x & ((1u64 << self.p) - 1), x >> self.p),
            Family::Xor => (0, x),
        };
        h ^= dep;
        for (i, &r) in self.rows.iter().enumerate() {
            h ^= (((r & free).count_ones() & 1) as u64) << i;
        }
        h
    }
}

fn row_width(family: Family, q: usize, p: usize) -> usize {
    match family {
        Family::Rex => q - p,
        Family::Xor => q,
    }
}

fn member_from_bits(family: Family, q: usize, p: usize, mut bits: u64) -> Member {
    let w = row_width(family, q, p);
    let mut rows = Vec::with_capacity(p);
    for _ in 0..p {
        rows.push(bits & ((1u64 << w) - 1));
        bits >>= w;
    }
    Member {
        p,
        rows,
        b: bits & ((1u64 << p) - 1),
        family,
    }
}

fn member_random(family: Family, q: usize, p: usize, src: &mut RandomSource) -> Member {
    let w = row_width(family, q, p);
    let rows = (0..p).map(|_| src.next_u64() & ((1u64 << w) - 1)).collect();
    Member {
        p,
        rows,
        b: src.next_u64() & ((1u64 << p) - 1),
        family,
    }
}

fn free_part_zero(family: Family, p: usize, diff: u64) -> bool {
    family == Family::Rex && diff >> p == 0
}

/// Checks the two 2-universality conditions for `family` at `(q, p)`.
///
/// Exhaustive mode needs at most 24 bits to describe a member and a
/// bounded amount of pair work; sampled mode works for `q <= 62`.
pub fn verify_universality(
    family: Family,
    q: usize,
    p: usize,
    mode: Mode,
    src: &mut RandomSource,
) -> Result<UniversalityReport> {
    if p > q || q == 0 || q > 62 {
        return Err(invalid(format!("need 0 <= p <= q <= 62, got q = {q}, p = {p}")));
    }
    if family == Family::Rex && p == q {
        return Err(invalid("row-echelon family needs at least one free variable"));
    }
    match mode {
        Mode::Exhaustive => exhaustive(family, q, p),
        Mode::Sampled { functions, points } => sampled(family, q, p, functions, points, src),
    }
}

fn exhaustive(family: Family, q: usize, p: usize) -> Result<UniversalityReport> {
    let bits = p * row_width(family, q, p) + p;
    if bits > 24 {
        return Err(invalid(format!("exhaustive mode needs at most 24 family bits, got {bits}")));
    }
    let functions = 1u64 << bits;
    let size = 1u64 << q;
    if (functions as u128) * (size as u128) * (size as u128) > 1u128 << 33 {
        return Err(invalid("exhaustive pair enumeration too large; use sampled mode"));
    }
    let cells = 1u64 << p;
    let mut point_hits = vec![0u64; (size * cells) as usize];
    let mut pair_hits = vec![0u64; (size * size) as usize];
    let mut image = vec![0u64; size as usize];

    for f in 0..functions {
        let h = member_from_bits(family, q, p, f);
        for x in 0..size {
            let y = h.eval(x);
            image[x as usize] = y;
            point_hits[(x * cells + y) as usize] += 1;
        }
        for x1 in 0..size {
            for x2 in x1 + 1..size {
                if image[x1 as usize] == image[x2 as usize] {
                    pair_hits[(x1 * size + x2) as usize] += 1;
                }
            }
        }
    }
    for x1 in 0..size {
        for x2 in 0..x1 {
            pair_hits[(x1 * size + x2) as usize] = pair_hits[(x2 * size + x1) as usize];
        }
    }

    let prob = |hits| Probability { hits, trials: functions };
    let point_min = prob(*point_hits.iter().min().unwrap());
    let point_max = prob(*point_hits.iter().max().unwrap());

    let mut collision_max = prob(0);
    let mut fz_max: Option<u64> = None;
    let mut fnz_min: Option<u64> = None;
    let mut fnz_max: Option<u64> = None;
    for x1 in 0..size {
        for x2 in x1 + 1..size {
            let c = pair_hits[(x1 * size + x2) as usize];
            collision_max.hits = collision_max.hits.max(c);
            if family == Family::Rex {
                if free_part_zero(family, p, x1 ^ x2) {
                    fz_max = Some(fz_max.map_or(c, |m| m.max(c)));
                } else {
                    fnz_min = Some(fnz_min.map_or(c, |m| m.min(c)));
                    fnz_max = Some(fnz_max.map_or(c, |m| m.max(c)));
                }
            }
        }
    }

    Ok(UniversalityReport {
        family,
        q,
        p,
        exact: true,
        functions,
        point_min,
        point_max,
        collision_max,
        free_zero_collision_max: fz_max.map(prob),
        free_nonzero_collision_min: fnz_min.map(prob),
        free_nonzero_collision_max: fnz_max.map(prob),
        pooled_collision: None,
        pooled_point: None,
        pair_hits: (q <= 8).then_some(pair_hits),
    })
}

fn sampled(
    family: Family,
    q: usize,
    p: usize,
    functions: usize,
    points: usize,
    src: &mut RandomSource,
) -> Result<UniversalityReport> {
    if functions == 0 || points < 2 {
        return Err(invalid("sampled mode needs at least one function and two points"));
    }
    let mask = if q == 64 { u64::MAX } else { (1u64 << q) - 1 };
    let mut xs: Vec<u64> = Vec::with_capacity(points);
    while xs.len() < points.min(1usize << q.min(20)) {
        let x = src.next_u64() & mask;
        if !xs.contains(&x) {
            xs.push(x);
        }
    }
    let ys: Vec<u64> = xs.iter().map(|_| src.next_u64() & ((1u64 << p) - 1)).collect();

    let n_pairs = xs.len() * (xs.len() - 1) / 2;
    let mut pair_hits = vec![0u64; n_pairs];
    let mut point_hits = vec![0u64; xs.len()];
    let mut image = vec![0u64; xs.len()];
    for _ in 0..functions {
        let h = member_random(family, q, p, src);
        for (i, &x) in xs.iter().enumerate() {
            image[i] = h.eval(x);
            if image[i] == ys[i] {
                point_hits[i] += 1;
            }
        }
        let mut k = 0;
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                if image[i] == image[j] {
                    pair_hits[k] += 1;
                }
                k += 1;
            }
        }
    }

    let trials = functions as u64;
    let prob = |hits| Probability { hits, trials };
    let t = 1.0 / (1u64 << p) as f64;
    let band = |n: u64| 3.0 * (t * (1.0 - t) / n.max(1) as f64).sqrt();

    let mut collision_max = 0;
    let mut fz_max: Option<u64> = None;
    let (mut fnz_min, mut fnz_max): (Option<u64>, Option<u64>) = (None, None);
    let (mut pooled_hits, mut pooled_n) = (0u64, 0u64);
    let mut k = 0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let c = pair_hits[k];
            k += 1;
            collision_max = collision_max.max(c);
            if free_part_zero(family, p, xs[i] ^ xs[j]) {
                fz_max = Some(fz_max.map_or(c, |m| m.max(c)));
            } else {
                if family == Family::Rex {
                    fnz_min = Some(fnz_min.map_or(c, |m| m.min(c)));
                    fnz_max = Some(fnz_max.map_or(c, |m| m.max(c)));
                }
                pooled_hits += c;
                pooled_n += trials;
            }
        }
    }
    let point_total: u64 = point_hits.iter().sum();
    let point_n = trials * xs.len() as u64;

    Ok(UniversalityReport {
        family,
        q,
        p,
        exact: false,
        functions: trials,
        point_min: prob(*point_hits.iter().min().unwrap()),
        point_max: prob(*point_hits.iter().max().unwrap()),
        collision_max: prob(collision_max),
        free_zero_collision_max: fz_max.map(prob),
        free_nonzero_collision_min: fnz_min.map(prob),
        free_nonzero_collision_max: fnz_max.map(prob),
        pooled_collision: (pooled_n > 0).then(|| (pooled_hits as f64 / pooled_n as f64, band(pooled_n))),
        pooled_point: Some((point_total as f64 / point_n as f64, band(point_n))),
        pair_hits: None,
    })
}
