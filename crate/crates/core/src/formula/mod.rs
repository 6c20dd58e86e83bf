//! DNF formulas: data model, normalization, text format, random instances
//! and the brute-force counting oracle.
//!
//! Variables and cubes are 0-based in memory. The text format and all
//! user-facing reports use 1-based indices; [`io`] is the only place that
//! converts between the two.

mod generate;
mod io;

pub use generate::gen_random;
pub use io::{parse_dnf, serialize_dnf};

use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::gf2::BitVec;
use crate::par;

/// Default bound on `n` for [`exact_count`].
pub const DEFAULT_EXACT_LIMIT: usize = 26;
/// Hard ceiling for the brute-force limit knob.
pub const MAX_EXACT_LIMIT: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: u32, positive: bool) -> Self {
        Self { var, positive }
    }

    pub fn pos(var: u32) -> Self {
        Self::new(var, true)
    }

    pub fn neg(var: u32) -> Self {
        Self::new(var, false)
    }
}

/// A conjunction of literals over distinct variables, sorted by variable.
///
/// `mask` marks the constrained variables and `values` their forced values,
/// so `x ⊨ c` is a word-wise `x & mask == values` test.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cube {
    literals: Vec<Literal>,
    mask: BitVec,
    values: BitVec,
}

impl Cube {
    /// Normalizes `literals` over `n` variables: duplicates merge, and a
    /// contradictory cube (`x ∧ ¬x`) yields `Ok(None)`.
    pub fn new(n: usize, mut literals: Vec<Literal>) -> Result<Option<Cube>> {
        if let Some(l) = literals.iter().find(|l| l.var as usize >= n) {
            return Err(invalid(format!("variable {} out of range for n = {n}", l.var)));
        }
        literals.sort_unstable();
        literals.dedup();
        if literals.windows(2).any(|w| w[0].var == w[1].var) {
            return Ok(None);
        }
        let mut mask = BitVec::zeros(n);
        let mut values = BitVec::zeros(n);
        for l in &literals {
            mask.set(l.var as usize, true);
            values.set(l.var as usize, l.positive);
        }
        Ok(Some(Cube { literals, mask, values }))
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn width(&self) -> usize {
        self.literals.len()
    }

    pub fn mask(&self) -> &BitVec {
        &self.mask
    }

    pub fn values(&self) -> &BitVec {
        &self.values
    }

    #[inline]
    pub fn satisfied_by(&self, x: &Assignment) -> bool {
        let xw = x.bits().words();
        self.mask
            .words()
            .iter()
            .zip(self.values.words())
            .zip(xw)
            .all(|((m, v), x)| x & m == *v)
    }
}

impl fmt::Debug for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}x{}", if l.positive { "" } else { "¬" }, l.var + 1)?;
        }
        f.write_str("}")
    }
}

/// `x ⊨ c`.
pub fn cube_satisfies(x: &Assignment, c: &Cube) -> bool {
    c.satisfied_by(x)
}

/// Total assignment to the `n` variables; bit `v` is the value of variable `v`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Assignment {
    bits: BitVec,
}

impl Assignment {
    pub fn new(bits: BitVec) -> Self {
        Self { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: BitVec::zeros(n) }
    }

    pub fn from_u128(value: u128, n: usize) -> Self {
        Self::new(BitVec::from_u128(value, n))
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn bits_mut(&mut self) -> &mut BitVec {
        &mut self.bits
    }

    pub fn into_bits(self) -> BitVec {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, var: usize) -> bool {
        self.bits.get(var)
    }
}

impl std::str::FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(Self::new(s.parse()?))
    }
}

/// A normalized DNF formula `c_1 ∨ … ∨ c_m` over `n` variables.
///
/// An empty cube list is the canonical unsatisfiable formula: it is what
/// remains when every input cube was contradictory.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DnfFormula {
    n: usize,
    cubes: Vec<Cube>,
}

impl DnfFormula {
    /// Builds and normalizes a formula. Contradictory cubes are dropped.
    pub fn new(n: usize, cubes: Vec<Vec<Literal>>) -> Result<Self> {
        let mut out = Vec::with_capacity(cubes.len());
        for lits in cubes {
            if let Some(c) = Cube::new(n, lits)? {
                out.push(c);
            }
        }
        Ok(Self { n, cubes: out })
    }

    pub fn from_cubes(n: usize, cubes: Vec<Cube>) -> Result<Self> {
        if cubes.iter().any(|c| c.mask.len() != n) {
            return Err(invalid("cube built for a different variable count"));
        }
        Ok(Self { n, cubes })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_cubes(&self) -> usize {
        self.cubes.len()
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn cube(&self, i: usize) -> &Cube {
        &self.cubes[i]
    }

    pub fn is_unsatisfiable(&self) -> bool {
        self.cubes.is_empty()
    }

    /// Contains a width-0 cube, so every assignment satisfies it.
    pub fn is_tautology(&self) -> bool {
        self.cubes.iter().any(|c| c.width() == 0)
    }

    pub fn min_width(&self) -> Option<usize> {
        self.cubes.iter().map(Cube::width).min()
    }

    pub fn max_width(&self) -> Option<usize> {
        self.cubes.iter().map(Cube::width).max()
    }

    pub fn normalize(&self) -> Self {
        let cubes = self.cubes.iter().map(|c| c.literals.clone()).collect();
        Self::new(self.n, cubes).expect("normalized cubes stay in range")
    }

    pub fn satisfied_by(&self, x: &Assignment) -> bool {
        self.cubes.iter().any(|c| c.satisfied_by(x))
    }

    /// Number of cubes satisfied by `x`, i.e. `|cov(x)|`.
    pub fn coverage_size(&self, x: &Assignment) -> usize {
        self.cubes.iter().filter(|c| c.satisfied_by(x)).count()
    }
}

impl fmt::Debug for DnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DnfFormula(n={}, {:?})", self.n, self.cubes)
    }
}

/// 0-based indices of the cubes satisfied by `x`.
pub fn coverage(phi: &DnfFormula, x: &Assignment) -> Vec<usize> {
    phi.cubes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.satisfied_by(x))
        .map(|(i, _)| i)
        .collect()
}

/// Exact model count by enumerating all `2^n` assignments, `n <= 26`.
pub fn exact_count(phi: &DnfFormula) -> Result<u64> {
    exact_count_with_limit(phi, DEFAULT_EXACT_LIMIT)
}

pub fn exact_count_with_limit(phi: &DnfFormula, limit: usize) -> Result<u64> {
    let limit = limit.min(MAX_EXACT_LIMIT);
    let n = phi.n;
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "variable count for brute-force counting",
            value: n,
            limit,
        });
    }
    if phi.is_tautology() {
        return Ok(1u64 << n);
    }
    let cubes: Vec<(u64, u64)> = phi
        .cubes
        .iter()
        .map(|c| {
            let m = c.mask.words().first().copied().unwrap_or(0);
            let v = c.values.words().first().copied().unwrap_or(0);
            (m, v)
        })
        .collect();
    // Split the space into chunks on the high bits for the parallel sweep.
    let chunk_bits = n.min(12);
    let low_bits = n - chunk_bits;
    let counts = par::map_indexed(1usize << chunk_bits, |hi| {
        let base = (hi as u64) << low_bits;
        let mut count = 0u64;
        for lo in 0..(1u64 << low_bits) {
            let x = base | lo;
            if cubes.iter().any(|&(m, v)| x & m == v) {
                count += 1;
            }
        }
        count
    });
    Ok(counts.into_iter().sum())
}
