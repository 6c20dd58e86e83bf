mod common;

use common::{brute_count, example, EXAMPLE};
use hashcount::formula::{coverage, cube_satisfies, exact_count, gen_random, Assignment, Cube, Literal};
use hashcount::{parse_dnf, serialize_dnf};

fn x(s: &str) -> Assignment {
    s.parse().unwrap()
}

#[test]
fn parses_the_three_variable_example() {
    let phi = example();
    assert_eq!(phi.num_vars(), 3);
    assert_eq!(phi.num_cubes(), 2);
    assert_eq!(phi.cube(0).literals(), &[Literal::pos(0), Literal::neg(1)]);
    assert_eq!(phi.cube(1).literals(), &[Literal::pos(2)]);
}

#[test]
fn contradictory_cube_is_dropped() {
    let phi = parse_dnf("p dnf 2 1\n1 -1 0\n").unwrap();
    assert_eq!(phi.num_cubes(), 0);
    assert!(phi.is_unsatisfiable());
    assert_eq!(exact_count(&phi).unwrap(), 0);
}

#[test]
fn empty_cube_is_a_tautology() {
    let phi = parse_dnf("p dnf 2 1\n0\n").unwrap();
    assert!(phi.is_tautology());
    assert_eq!(exact_count(&phi).unwrap(), 4);
}

#[test]
fn cube_satisfaction() {
    let phi = example();
    let c = phi.cube(0);
    assert!(cube_satisfies(&x("101"), c));
    assert!(!cube_satisfies(&x("001"), c));
    let empty = Cube::new(3, vec![]).unwrap().unwrap();
    for v in 0..8 {
        assert!(cube_satisfies(&Assignment::from_u128(v, 3), &empty));
    }
}

#[test]
fn coverage_examples() {
    let phi = example();
    assert_eq!(coverage(&phi, &x("101")), vec![0, 1]);
    assert_eq!(coverage(&phi, &x("100")), vec![0]);
    assert!(coverage(&phi, &x("000")).is_empty());
}

#[test]
fn exact_count_matches_brute_force() {
    let phi = example();
    assert_eq!(exact_count(&phi).unwrap(), 5);
    assert_eq!(brute_count(&phi), 5);
    for seed in 0..40 {
        let phi = gen_random(4 + seed as usize % 9, 1 + seed as usize % 7, 1, 4, seed).unwrap();
        assert_eq!(exact_count(&phi).unwrap(), brute_count(&phi), "seed {seed}");
    }
}

#[test]
fn single_cube_has_free_variable_models() {
    for (n, w) in [(6, 2), (10, 10), (12, 1)] {
        let lits = (0..w as u32).map(Literal::pos).collect();
        let phi = hashcount::DnfFormula::new(n, vec![lits]).unwrap();
        assert_eq!(exact_count(&phi).unwrap(), 1 << (n - w));
    }
}

#[test]
fn generator_examples() {
    assert_eq!(gen_random(10, 4, 3, 3, 7).unwrap(), gen_random(10, 4, 3, 3, 7).unwrap());
    for s in 0..10 {
        let phi = gen_random(5, 3, 5, 5, s).unwrap();
        assert!(phi.cubes().iter().all(|c| c.width() == 5));
        assert!(brute_count(&phi) <= 3);
    }
    for s in 0..10 {
        let phi = gen_random(16, 8, 2, 5, s).unwrap();
        let c = brute_count(&phi);
        assert!((1 << 11..=1 << 16).contains(&c), "seed {s}: {c}");
    }
}

#[test]
fn serialization_round_trips() {
    let phi = example();
    assert_eq!(serialize_dnf(&phi), EXAMPLE);
    assert_eq!(parse_dnf(&serialize_dnf(&phi)).unwrap(), phi);
    let taut = parse_dnf("p dnf 2 1\n0\n").unwrap();
    assert!(serialize_dnf(&taut).lines().any(|l| l.trim() == "0"));
    let g = gen_random(20, 9, 2, 6, 7).unwrap();
    assert_eq!(serialize_dnf(&g), serialize_dnf(&gen_random(20, 9, 2, 6, 7).unwrap()));
    assert_eq!(parse_dnf(&serialize_dnf(&g)).unwrap(), g);
}
