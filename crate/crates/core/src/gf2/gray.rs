use super::BitVec;
use crate::error::{invalid, Result};

/// Position of the bit that differs between the `j`-th and `(j+1)`-th
/// reflected Gray codewords of width `l`.
///
/// This is the number of trailing zeros of `j + 1`. Requires `j < 2^l - 1`.
pub fn next_gray_bit(l: u32, j: u128) -> Result<u32> {
    if l < 128 && j >= (1u128 << l) - 1 {
        return Err(invalid(format!("gray step {j} out of range for width {l}")));
    }
    if l == 0 {
        return Err(invalid("gray code of width 0 has no steps"));
    }
    Ok((j + 1).trailing_zeros())
}

/// Walks an affine space `start + span(deltas)` in Gray order.
///
/// Each step XORs exactly one delta into the state, so a walk over `f`
/// generators visits all `2^f` points with one vector XOR per point.
#[derive(Debug, Clone)]
pub struct GrayWalk {
    state: BitVec,
    deltas: Vec<BitVec>,
    step: u128,
    // None when 2^f does not fit in u128; callers stop early in that case.
    total: Option<u128>,
    yielded_first: bool,
}

impl GrayWalk {
    pub fn new(start: BitVec, deltas: Vec<BitVec>) -> Self {
        let total = u32::try_from(deltas.len())
            .ok()
            .and_then(|f| 1u128.checked_shl(f));
        Self {
            state: start,
            deltas,
            step: 0,
            total,
            yielded_first: false,
        }
    }

    #[inline]
    pub fn current(&self) -> &BitVec {
        &self.state
    }

    /// Number of points in the walk, if it fits in a `u128`.
    pub fn total(&self) -> Option<u128> {
        self.total
    }

    pub fn dimension(&self) -> usize {
        self.deltas.len()
    }

    /// Moves to the next point. Returns `false` once the walk is exhausted.
    #[inline]
    pub fn advance(&mut self) -> bool {
        if let Some(total) = self.total {
            if self.step + 1 >= total {
                return false;
            }
        }
        let k = (self.step + 1).trailing_zeros() as usize;
        self.state.xor_assign(&self.deltas[k]);
        self.step += 1;
        true
    }
}

impl Iterator for GrayWalk {
    type Item = BitVec;

    fn next(&mut self) -> Option<BitVec> {
        if !self.yielded_first {
            self.yielded_first = true;
            return Some(self.state.clone());
        }
        if self.advance() {
            Some(self.state.clone())
        } else {
            None
        }
    }
}
