use crate::error::{precondition, Error, Result};
use crate::formula::{Assignment, DnfFormula};
use crate::gf2::BitVec;

/// Largest hash-domain width supported; states are addressed as `u128`.
pub const MAX_UNIVERSE_BITS: usize = 126;

/// The symbolic universe `U' = {(x, i) : x ⊨ c_i}` laid out on integers.
///
/// Cube `i` owns the interval `[offsets[i], offsets[i+1])` of length
/// `2^(n - w_i)`; state `offsets[i] + r` is the pair `(x, i)` where `x`
/// takes the forced values of `c_i` and bit `t` of `r` goes to the `t`-th
/// variable (ascending) that `c_i` leaves free. The hash domain is
/// `{0,1}^q` with `q = ceil(log2 S)`; states `s >= S` are padding.
#[derive(Debug, Clone)]
pub struct SymbolicUniverse {
    n: usize,
    q: usize,
    w_min: usize,
    offsets: Vec<u128>,
    free_vars: Vec<Vec<u32>>,
}

pub fn build_universe(phi: &DnfFormula) -> Result<SymbolicUniverse> {
    if phi.is_unsatisfiable() {
        return Err(precondition("symbolic universe needs at least one cube"));
    }
    if phi.is_tautology() {
        return Err(precondition("width-0 cube: count is 2^n, no universe needed"));
    }
    let n = phi.num_vars();
    let mut offsets = Vec::with_capacity(phi.num_cubes() + 1);
    offsets.push(0u128);
    let mut total: u128 = 0;
    let too_big = || Error::LimitExceeded {
        what: "symbolic universe width in bits",
        value: MAX_UNIVERSE_BITS + 1,
        limit: MAX_UNIVERSE_BITS,
    };
    for c in phi.cubes() {
        let free = n - c.width();
        if free > MAX_UNIVERSE_BITS {
            return Err(too_big());
        }
        total = total.checked_add(1u128 << free).ok_or_else(too_big)?;
        offsets.push(total);
    }
    let q = ceil_log2(total);
    if q > MAX_UNIVERSE_BITS {
        return Err(Error::LimitExceeded {
            what: "symbolic universe width in bits",
            value: q,
            limit: MAX_UNIVERSE_BITS,
        });
    }
    let free_vars = phi
        .cubes()
        .iter()
        .map(|c| (0..n as u32).filter(|&v| !c.mask().get(v as usize)).collect())
        .collect();
    Ok(SymbolicUniverse {
        n,
        q,
        w_min: phi.min_width().unwrap_or(0),
        offsets,
        free_vars,
    })
}

fn ceil_log2(s: u128) -> usize {
    if s <= 1 {
        0
    } else {
        (128 - (s - 1).leading_zeros()) as usize
    }
}

impl SymbolicUniverse {
    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_cubes(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Width of the hash domain.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn min_width(&self) -> usize {
        self.w_min
    }

    pub fn offsets(&self) -> &[u128] {
        &self.offsets
    }

    /// Number of valid states, `S = Σ 2^(n - w_i)`.
    pub fn size(&self) -> u128 {
        *self.offsets.last().unwrap()
    }

    /// Cube owning state `s`, if `s` is not padding.
    #[inline]
    pub fn cube_of(&self, s: u128) -> Option<usize> {
        if s >= self.size() {
            return None;
        }
        Some(self.offsets.partition_point(|&o| o <= s) - 1)
    }

    /// Decodes state `s` into `x` (reusing its storage) and returns the cube.
    #[inline]
    pub fn decode_into(&self, phi: &DnfFormula, s: u128, x: &mut Assignment) -> Option<usize> {
        let i = self.cube_of(s)?;
        let r = s - self.offsets[i];
        let bits = x.bits_mut();
        bits.copy_from(phi.cube(i).values());
        for (t, &v) in self.free_vars[i].iter().enumerate() {
            if (r >> t) & 1 == 1 {
                bits.set(v as usize, true);
            }
        }
        Some(i)
    }

    /// `z ↦ (x, i)`, or `None` for a padding state. `z` has `q` bits and is
    /// read as an integer with bit 0 least significant.
    pub fn interpret(&self, phi: &DnfFormula, z: &BitVec) -> Option<(Assignment, usize)> {
        assert_eq!(z.len(), self.q, "state must have q bits");
        let mut x = Assignment::zeros(self.n);
        let i = self.decode_into(phi, z.to_u128(), &mut x)?;
        Some((x, i))
    }

    /// Inverse of [`interpret`](Self::interpret); `None` unless `x ⊨ c_i`.
    pub fn encode(&self, phi: &DnfFormula, x: &Assignment, i: usize) -> Option<BitVec> {
        if i >= self.num_cubes() || !phi.cube(i).satisfied_by(x) {
            return None;
        }
        let r = self.free_vars[i]
            .iter()
            .enumerate()
            .filter(|(_, &v)| x.get(v as usize))
            .fold(0u128, |acc, (t, _)| acc | (1u128 << t));
        Some(BitVec::from_u128(self.offsets[i] + r, self.q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{gen_random, parse_dnf, Literal};
    use std::collections::HashSet;

    fn example() -> DnfFormula {
        parse_dnf("p dnf 3 2\n1 -2 0\n3 0\n").unwrap()
    }

    #[test]
    fn offsets_for_example() {
        let u = build_universe(&example()).unwrap();
        assert_eq!(u.offsets(), &[0, 2, 6]);
        assert_eq!(u.size(), 6);
        assert_eq!(u.q(), 3);
    }

    #[test]
    fn uniform_width_layout() {
        let phi = gen_random(10, 8, 3, 3, 1).unwrap();
        let u = build_universe(&phi).unwrap();
        assert_eq!(u.size(), 1024);
        assert_eq!(u.q(), 10);

        let single = DnfFormula::new(9, vec![vec![Literal::pos(0), Literal::pos(4)]]).unwrap();
        assert_eq!(build_universe(&single).unwrap().q(), 7);
    }

    #[test]
    fn interpret_examples() {
        let phi = example();
        let u = build_universe(&phi).unwrap();
        let (x, i) = u.interpret(&phi, &BitVec::from_u128(0, 3)).unwrap();
        assert_eq!((x.bits().to_string(), i), ("100".to_string(), 0));
        assert!(u.interpret(&phi, &BitVec::from_u128(7, 3)).is_none());
        let (x, i) = u.interpret(&phi, &BitVec::from_u128(2, 3)).unwrap();
        assert_eq!((x.bits().to_string(), i), ("001".to_string(), 1));
    }

    #[test]
    fn rejects_trivial_formulas() {
        assert!(build_universe(&parse_dnf("p dnf 2 1\n0\n").unwrap()).is_err());
        assert!(build_universe(&parse_dnf("p dnf 2 1\n1 -1 0\n").unwrap()).is_err());
        let huge = DnfFormula::new(200, vec![vec![Literal::pos(0)]]).unwrap();
        assert!(matches!(build_universe(&huge), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn bijection_over_valid_states() {
        for seed in 0..20 {
            let phi = gen_random(9, 1 + seed as usize % 7, 1, 5, seed).unwrap();
            let u = build_universe(&phi).unwrap();
            assert!(u.q() <= 14);
            assert!(u.size() <= 1u128 << u.q());
            if u.q() > 0 {
                assert!(u.size() > 1u128 << (u.q() - 1));
            }
            let mut seen = HashSet::new();
            let mut valid = 0u128;
            for s in 0..1u128 << u.q() {
                let z = BitVec::from_u128(s, u.q());
                match u.interpret(&phi, &z) {
                    Some((x, i)) => {
                        valid += 1;
                        assert!(phi.cube(i).satisfied_by(&x));
                        assert!(seen.insert((x.clone(), i)), "not injective");
                        assert_eq!(u.encode(&phi, &x, i), Some(z));
                    }
                    None => assert!(s >= u.size()),
                }
            }
            assert_eq!(valid, u.size());
        }
    }
}
