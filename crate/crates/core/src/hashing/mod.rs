//! 2-universal XOR hash families over `{0,1}^q`.
//!
//! [`XorHash`] is the fully random family `h(x) = A·x ⊕ b`. [`RexHash`] is the
//! row-echelon family `h(z) = [I_p | D]·z ⊕ b`: the first `p` coordinates of
//! `z` are dependent and the last `q - p` are free, so a cell
//! `{z : h(z) = y}` has exactly `2^(q-p)` members and can be walked in Gray
//! order without elimination.
//!
//! Nested row-echelon hashes for a constraint search come from one
//! [`BaseSample`]: [`BaseSample::extract`] returns the hash with `p`
//! constraints, and the cell at `p + 1` is always a subset of the cell at `p`.

mod universality;

pub use universality::{verify_universality, Family, Mode, Probability, UniversalityReport};

use crate::error::{precondition, Error, Result};
use crate::gf2::{mat_vec_mul, BitMat, BitVec, GrayWalk, RandomSource};

/// Member of the fully random XOR family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorHash {
    pub a: BitMat,
    pub b: BitVec,
}

impl XorHash {
    pub fn num_constraints(&self) -> usize {
        self.a.num_rows()
    }

    pub fn num_vars(&self) -> usize {
        self.a.num_cols()
    }

    pub fn eval(&self, x: &BitVec) -> Result<BitVec> {
        let mut h = mat_vec_mul(&self.a, x)?;
        h.xor_assign(&self.b);
        Ok(h)
    }

    /// The hash made of the first `p` constraints.
    pub fn prefix(&self, p: usize) -> XorHash {
        assert!(p <= self.num_constraints());
        XorHash {
            a: self.a.submatrix(0..p, 0..self.a.num_cols()),
            b: self.b.slice(0..p),
        }
    }
}

/// Every bit of `A` and `b` i.i.d. uniform. `p = 0` gives the constant hash.
pub fn sample_hxor(q: usize, p: usize, src: &mut RandomSource) -> XorHash {
    let rows = (0..p).map(|_| src.rand_bits(q)).collect();
    XorHash {
        a: BitMat::from_rows(q, rows).expect("rows sampled at width q"),
        b: src.rand_bits(p),
    }
}

/// Member of the row-echelon family together with a cell label `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RexHash {
    p: usize,
    q: usize,
    d: BitMat,
    b: BitVec,
    y: BitVec,
}

impl RexHash {
    pub fn new(d: BitMat, b: BitVec, y: BitVec) -> Result<Self> {
        let p = d.num_rows();
        if b.len() != p || y.len() != p {
            return Err(Error::Dimension(format!(
                "D has {p} rows but b has {} bits and y has {}",
                b.len(),
                y.len()
            )));
        }
        Ok(Self {
            p,
            q: p + d.num_cols(),
            d,
            b,
            y,
        })
    }

    /// The unconstrained hash over `q` bits: one cell holding everything.
    pub fn trivial(q: usize) -> Self {
        Self::new(BitMat::zeros(0, q), BitVec::zeros(0), BitVec::zeros(0)).expect("empty shapes agree")
    }

    pub fn num_constraints(&self) -> usize {
        self.p
    }

    pub fn num_vars(&self) -> usize {
        self.q
    }

    pub fn d(&self) -> &BitMat {
        &self.d
    }

    pub fn b(&self) -> &BitVec {
        &self.b
    }

    pub fn y(&self) -> &BitVec {
        &self.y
    }

    /// Same hash, different cell.
    pub fn with_cell(&self, y: BitVec) -> Result<Self> {
        Self::new(self.d.clone(), self.b.clone(), y)
    }

    /// `[I_p | D]·z ⊕ b`.
    pub fn eval(&self, z: &BitVec) -> BitVec {
        assert_eq!(z.len(), self.q);
        let mut h = z.slice(0..self.p);
        let v = z.slice(self.p..self.q);
        for (i, row) in self.d.rows().iter().enumerate() {
            if row.dot(&v) {
                h.flip(i);
            }
        }
        h.xor_assign(&self.b);
        h
    }

    pub fn in_cell(&self, z: &BitVec) -> bool {
        self.eval(z) == self.y
    }

    /// `2^(q-p)`, when it fits.
    pub fn cell_size(&self) -> Option<u128> {
        1u128.checked_shl((self.q - self.p) as u32)
    }

    /// Gray-order walk over the cell, starting at `[b ⊕ y : 0]`. Step `k`
    /// flips free bit `k` and XORs column `k` of `D` into the dependent part.
    pub fn cell_walk(&self) -> GrayWalk {
        let u = &self.b ^ &self.y;
        let start = u.concat(&BitVec::zeros(self.q - self.p));
        let deltas = (0..self.q - self.p)
            .map(|k| {
                let mut delta = self.d.column(k).concat(&BitVec::zeros(self.q - self.p));
                delta.set(self.p + k, true);
                delta
            })
            .collect();
        GrayWalk::new(start, deltas)
    }

    /// Cell members as a plain list; meant for small `q`.
    pub fn cell_members(&self) -> Vec<BitVec> {
        self.cell_walk().collect()
    }

    /// The same system written as a dense `p × q` matrix `[I_p | D]` with
    /// right-hand side `b ⊕ y`.
    pub fn as_system(&self) -> (BitMat, BitVec) {
        let rows = (0..self.p)
            .map(|i| {
                let mut unit = BitVec::zeros(self.p);
                unit.set(i, true);
                unit.concat(self.d.row(i))
            })
            .collect();
        (BitMat::from_rows(self.q, rows).expect("rows built at width q"), &self.b ^ &self.y)
    }
}

/// One step of the Gray walk over a row-echelon cell: flips free bit `k` of
/// `v` and XORs column `k` of `D` into `u`. If `[u : v]` satisfies
/// `[I | D]·z ⊕ b = y`, so does the result.
pub fn enum_next_rex(d: &BitMat, u: &BitVec, v: &BitVec, k: usize) -> Result<(BitVec, BitVec)> {
    if k >= d.num_cols() || v.len() != d.num_cols() || u.len() != d.num_rows() {
        return Err(precondition(format!(
            "free bit {k} with D of shape {}x{}, |u| = {}, |v| = {}",
            d.num_rows(),
            d.num_cols(),
            u.len(),
            v.len()
        )));
    }
    let mut v2 = v.clone();
    v2.flip(k);
    let mut u2 = u.clone();
    u2.xor_assign(&d.column(k));
    Ok((u2, v2))
}

/// Shared randomness from which every nested row-echelon hash of a search
/// is extracted.
///
/// `dhat` is `(q-1) × (q-s_init)`. Its top `s_init` rows are uniform (the
/// `G` block); the remaining `q - s_init - 1` rows form an upper-triangular
/// block with unit diagonal and uniform entries above it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSample {
    q: usize,
    s_init: usize,
    dhat: BitMat,
    bhat: BitVec,
    yhat: BitVec,
}

pub fn sample_base(q: usize, s_init: usize, src: &mut RandomSource) -> Result<BaseSample> {
    if q == 0 || s_init > q - 1 {
        return Err(precondition(format!("need 0 <= s_init <= q - 1, got s_init = {s_init}, q = {q}")));
    }
    let width = q - s_init;
    let mut rows = Vec::with_capacity(q - 1);
    for _ in 0..s_init {
        rows.push(src.rand_bits(width));
    }
    for i in 0..width - 1 {
        let mut row = src.rand_bits(width);
        for j in 0..i {
            row.set(j, false);
        }
        row.set(i, true);
        rows.push(row);
    }
    Ok(BaseSample {
        q,
        s_init,
        dhat: BitMat::from_rows(width, rows).expect("rows sampled at base width"),
        bhat: src.rand_bits(q - 1),
        yhat: src.rand_bits(q - 1),
    })
}

impl BaseSample {
    pub fn num_vars(&self) -> usize {
        self.q
    }

    pub fn initial_constraints(&self) -> usize {
        self.s_init
    }

    pub fn dhat(&self) -> &BitMat {
        &self.dhat
    }

    pub fn bhat(&self) -> &BitVec {
        &self.bhat
    }

    pub fn yhat(&self) -> &BitVec {
        &self.yhat
    }

    /// Row `i` of the base system over `z`, as a `q`-bit vector. Rows below
    /// `s_init` carry an identity bit at coordinate `i`; the triangular rows
    /// already have their pivot at coordinate `i` inside `dhat`.
    pub fn system_row(&self, i: usize) -> BitVec {
        let mut row = BitVec::zeros(self.q);
        if i < self.s_init {
            row.set(i, true);
        }
        row.xor_shifted(self.dhat.row(i), self.s_init);
        row
    }

    /// Row-echelon hash with `p` constraints, `s_init <= p <= q - 1`.
    ///
    /// Each triangular row `i` in `s_init..p` clears its pivot column from
    /// all rows above it, leaving `[I_p | D]` with `D` the last `q - p`
    /// columns.
    pub fn extract(&self, p: usize) -> Result<RexHash> {
        if p < self.s_init || p > self.q - 1 {
            return Err(precondition(format!(
                "extract needs {} <= p <= {}, got {p}",
                self.s_init,
                self.q - 1
            )));
        }
        let width = self.q - self.s_init;
        let mut dp = self.dhat.submatrix(0..p, 0..width);
        let mut b = self.bhat.slice(0..p);
        let mut y = self.yhat.slice(0..p);
        for i in self.s_init..p {
            let col = i - self.s_init;
            for j in 0..i {
                if dp.get(j, col) {
                    dp.xor_row_into(i, j);
                    if b.get(i) {
                        b.flip(j);
                    }
                    if y.get(i) {
                        y.flip(j);
                    }
                }
            }
        }
        let d = dp.submatrix(0..p, p - self.s_init..width);
        RexHash::new(d, b, y)
    }
}
