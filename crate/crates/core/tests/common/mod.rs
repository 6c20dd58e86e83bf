#![allow(dead_code)]

use hashcount::formula::DnfFormula;
use hashcount::parse_dnf;
use num_bigint::BigInt;
use num_rational::BigRational;

/// `(x1 ∧ ¬x2) ∨ x3`, which has 5 models.
pub const EXAMPLE: &str = "p dnf 3 2\n1 -2 0\n3 0\n";

pub fn example() -> DnfFormula {
    parse_dnf(EXAMPLE).unwrap()
}

/// Model count by checking every literal on every assignment. Bit `v` of
/// the integer `x` is the value of variable `v`.
pub fn brute_count(phi: &DnfFormula) -> u64 {
    (0..1u64 << phi.num_vars()).filter(|&x| brute_sat(phi, x)).count() as u64
}

pub fn brute_sat(phi: &DnfFormula, x: u64) -> bool {
    phi.cubes()
        .iter()
        .any(|c| c.literals().iter().all(|l| ((x >> l.var) & 1 == 1) == l.positive))
}

pub fn rat(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `exact / factor <= estimate <= exact · factor`, in exact arithmetic.
pub fn within(estimate: &BigRational, exact: u64, factor: f64) -> bool {
    let f = BigRational::from_float(factor).unwrap();
    let e = rat(exact);
    e <= estimate * &f && *estimate <= e * f
}
