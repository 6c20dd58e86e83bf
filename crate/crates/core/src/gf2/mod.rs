//! Packed linear algebra over GF(2).
//!
//! Bit 0 of every [`BitVec`] is the logically first coordinate. Matrices are
//! stored row-major, one [`BitVec`] per row. The same Gray-code stepping
//! machinery ([`GrayWalk`]) drives both the generic solution enumerator here
//! and the row-echelon hash cells in [`crate::hashing`].

mod bitmat;
mod bitvec;
mod gray;
mod rng;
mod solve;

pub use bitmat::BitMat;
pub use bitvec::BitVec;
pub use gray::{next_gray_bit, GrayWalk};
pub use rng::RandomSource;
pub use solve::{enumerate_solutions, mat_vec_mul, rref, Echelon};
