use std::collections::BTreeSet;

use hashcount::gf2::{enumerate_solutions, next_gray_bit, BitMat, BitVec, RandomSource};
use hashcount::hashing::{enum_next_rex, sample_base, sample_hxor, verify_universality, Family, Mode, RexHash};
use num_rational::Ratio;

/// States of `q` bits satisfying the first `p` rows of a base system,
/// rebuilt from its parts: row `i` is `e_i` (for `i < s_init`) plus row `i`
/// of `dhat` placed at columns `s_init..q`.
fn base_cell(base: &hashcount::hashing::BaseSample, p: usize) -> BTreeSet<u128> {
    let (q, s) = (base.num_vars(), base.initial_constraints());
    (0..1u128 << q)
        .filter(|&z| {
            (0..p).all(|i| {
                let mut parity = if i < s { (z >> i) & 1 == 1 } else { false };
                for c in 0..q - s {
                    if base.dhat().get(i, c) && (z >> (s + c)) & 1 == 1 {
                        parity = !parity;
                    }
                }
                parity ^ base.bhat().get(i) == base.yhat().get(i)
            })
        })
        .collect()
}

fn cell_of(hash: &RexHash) -> BTreeSet<u128> {
    hash.cell_members().iter().map(BitVec::to_u128).collect()
}

#[test]
fn xor_hash_shapes_and_determinism() {
    let mut a = RandomSource::new(4, 4);
    let mut b = RandomSource::new(4, 4);
    let h = sample_hxor(7, 3, &mut a);
    assert_eq!(h, sample_hxor(7, 3, &mut b));
    assert_eq!((h.num_constraints(), h.num_vars()), (3, 7));
    let empty = sample_hxor(5, 0, &mut a);
    assert_eq!(empty.eval(&BitVec::ones(5)).unwrap().len(), 0);
}

#[test]
fn base_shapes() {
    let mut src = RandomSource::new(1, 1);
    let base = sample_base(10, 4, &mut src).unwrap();
    assert_eq!((base.dhat().num_rows(), base.dhat().num_cols()), (9, 6));
    let e = base.dhat().submatrix(4..9, 0..6);
    for i in 0..5 {
        assert!(e.get(i, i));
        assert!((0..i).all(|j| !e.get(i, j)));
    }
    assert_eq!(e.rank(), 5);

    let base = sample_base(5, 0, &mut src).unwrap();
    assert_eq!((base.dhat().num_rows(), base.dhat().num_cols()), (4, 5));
    for i in 0..4 {
        assert!(base.dhat().get(i, i) && (0..i).all(|j| !base.dhat().get(i, j)));
    }
}

#[test]
fn extract_shapes() {
    let mut src = RandomSource::new(2, 2);
    let base = sample_base(9, 3, &mut src).unwrap();
    let h = base.extract(3).unwrap();
    assert_eq!(h.d(), &base.dhat().submatrix(0..3, 0..6));
    let h = base.extract(8).unwrap();
    assert_eq!((h.d().num_rows(), h.d().num_cols()), (8, 1));
    assert!(base.extract(2).is_err() && base.extract(9).is_err());
}

#[test]
fn extracted_cells_are_the_base_prefix_cells_and_nest() {
    let mut src = RandomSource::new(8, 2);
    for _ in 0..10 {
        let base = sample_base(8, 2, &mut src).unwrap();
        for p in 2..8 {
            assert_eq!(cell_of(&base.extract(p).unwrap()), base_cell(&base, p), "p = {p}");
        }
        let at4 = cell_of(&base.extract(4).unwrap());
        let at5 = cell_of(&base.extract(5).unwrap());
        assert!(at5.is_subset(&at4));
    }
}

#[test]
fn gray_steps_visit_every_solution() {
    let mut src = RandomSource::new(6, 3);
    for _ in 0..20 {
        let base = sample_base(6, 0, &mut src).unwrap();
        let h = base.extract(3).unwrap();
        let mut u = h.b().clone();
        u.xor_assign(h.y());
        let mut v = BitVec::zeros(3);
        let mut seen = BTreeSet::from([u.concat(&v)]);
        for j in 0..7 {
            let k = next_gray_bit(3, j).unwrap() as usize;
            (u, v) = enum_next_rex(h.d(), &u, &v, k).unwrap();
            seen.insert(u.concat(&v));
        }
        let (a, rhs) = h.as_system();
        let solved: BTreeSet<BitVec> = enumerate_solutions(&a, &rhs, &BitVec::zeros(3), usize::MAX)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(seen.len(), 8);
        assert_eq!(seen, solved);
    }
}

#[test]
fn enum_step_edge_cases() {
    let u = "101".parse::<BitVec>().unwrap();
    let v = "00".parse::<BitVec>().unwrap();
    let (u2, v2) = enum_next_rex(&BitMat::zeros(3, 2), &u, &v, 1).unwrap();
    assert_eq!((u2, v2), (u.clone(), "01".parse().unwrap()));
    let d = BitMat::from_strs(2, &["10", "10", "10"]).unwrap();
    let (u2, _) = enum_next_rex(&d, &u, &v, 0).unwrap();
    assert_eq!(u2, "010".parse().unwrap());
}

#[test]
fn small_family_collisions_match_hand_enumeration() {
    // q = 3, p = 1: h(z) = z0 ⊕ d0·z1 ⊕ d1·z2 ⊕ b over 8 choices of (d0, d1, b).
    let h = |f: u64, z: u64| (z & 1) ^ (f & (z >> 1) & 1) ^ ((f >> 1) & (z >> 2) & 1) ^ ((f >> 2) & 1);
    let oracle = |x1: u64, x2: u64| Ratio::new((0..8).filter(|&f| h(f, x1) == h(f, x2)).count() as u64, 8);
    let mut src = RandomSource::new(0, 0);
    let r = verify_universality(Family::Rex, 3, 1, Mode::Exhaustive, &mut src).unwrap();
    assert!(r.passes());
    assert_eq!(r.functions, 8);
    assert_eq!(r.pair_collision(0b000, 0b001), Some(Ratio::new(0, 1)));
    assert_eq!(r.pair_collision(0b000, 0b100), Some(Ratio::new(1, 2)));
    for x1 in 0..8 {
        for x2 in 0..8 {
            if x1 != x2 {
                assert_eq!(r.pair_collision(x1, x2), Some(oracle(x1, x2)));
            }
        }
    }
    let r = verify_universality(Family::Rex, 4, 2, Mode::Exhaustive, &mut src).unwrap();
    assert!(r.passes());
    assert_eq!((r.point_min.ratio(), r.point_max.ratio()), (Ratio::new(1, 4), Ratio::new(1, 4)));
    let r = verify_universality(Family::Xor, 3, 1, Mode::Exhaustive, &mut src).unwrap();
    assert_eq!(r.functions, 16);
    assert_eq!((r.point_min.ratio(), r.point_max.ratio()), (Ratio::new(1, 2), Ratio::new(1, 2)));
}
