use super::{BitMat, BitVec, GrayWalk};
use crate::error::{Error, Result};

/// `A·x` over GF(2).
pub fn mat_vec_mul(a: &BitMat, x: &BitVec) -> Result<BitVec> {
    if x.len() != a.num_cols() {
        return Err(Error::Dimension(format!(
            "vector has {} bits, matrix has {} columns",
            x.len(),
            a.num_cols()
        )));
    }
    let mut out = BitVec::zeros(a.num_rows());
    for (i, row) in a.rows().iter().enumerate() {
        if row.dot(x) {
            out.set(i, true);
        }
    }
    Ok(out)
}

/// Reduced row-echelon form of an augmented system `[A | aug]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub matrix: BitMat,
    pub aug: BitVec,
    pub rank: usize,
    /// Pivot column of row `r`, for `r < rank`.
    pub pivots: Vec<usize>,
    /// Whether the augmented rank equals the rank of `A`.
    pub consistent: bool,
}

impl Echelon {
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.matrix.num_cols()];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.matrix.num_cols()).filter(|&c| !is_pivot[c]).collect()
    }

    /// One solution (free variables zero) and the Gray-walk generators of the
    /// solution space: flipping free column `f` also flips every pivot
    /// variable whose row has a one in column `f`.
    pub fn solution_space(&self) -> Option<(BitVec, Vec<BitVec>)> {
        if !self.consistent {
            return None;
        }
        let cols = self.matrix.num_cols();
        let mut base = BitVec::zeros(cols);
        for (r, &p) in self.pivots.iter().enumerate() {
            if self.aug.get(r) {
                base.set(p, true);
            }
        }
        let deltas = self
            .free_columns()
            .into_iter()
            .map(|f| {
                let mut d = BitVec::zeros(cols);
                d.set(f, true);
                for (r, &p) in self.pivots.iter().enumerate() {
                    if self.matrix.get(r, f) {
                        d.flip(p);
                    }
                }
                d
            })
            .collect();
        Some((base, deltas))
    }
}

/// Gauss-Jordan elimination of `[A | aug]`. Row operations are applied to the
/// augmentation jointly, so the solution set of `A·x = aug` is preserved.
pub fn rref(a: &BitMat, aug: &BitVec) -> Result<Echelon> {
    if aug.len() != a.num_rows() {
        return Err(Error::Dimension(format!(
            "augmentation has {} bits, matrix has {} rows",
            aug.len(),
            a.num_rows()
        )));
    }
    let mut m = a.clone();
    let mut aug = aug.clone();
    let rows = m.num_rows();
    let mut rank = 0;
    let mut pivots = Vec::new();

    for col in 0..m.num_cols() {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| m.get(r, col)) else {
            continue;
        };
        if pivot != rank {
            m.swap_rows(pivot, rank);
            let (x, y) = (aug.get(pivot), aug.get(rank));
            aug.set(pivot, y);
            aug.set(rank, x);
        }
        for r in 0..rows {
            if r != rank && m.get(r, col) {
                m.xor_row_into(rank, r);
                if aug.get(rank) {
                    aug.flip(r);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }

    let consistent = (rank..rows).all(|r| !aug.get(r));
    Ok(Echelon {
        matrix: m,
        aug,
        rank,
        pivots,
        consistent,
    })
}

/// Up to `limit` distinct solutions of `A·x ⊕ b = y`, walked in Gray order over
/// the free variables. Inconsistent systems yield nothing.
pub fn enumerate_solutions(a: &BitMat, b: &BitVec, y: &BitVec, limit: usize) -> Result<Vec<BitVec>> {
    if b.len() != a.num_rows() || y.len() != a.num_rows() {
        return Err(Error::Dimension("b and y must have one bit per row".into()));
    }
    let ech = rref(a, &(b ^ y))?;
    let Some((base, deltas)) = ech.solution_space() else {
        return Ok(Vec::new());
    };
    Ok(GrayWalk::new(base, deltas).take(limit).collect())
}
