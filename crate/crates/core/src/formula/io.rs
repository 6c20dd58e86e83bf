//! The `p dnf <n> <m>` text format.
//!
//! One cube per line as nonzero integers terminated by `0`: `k > 0` is
//! variable `k` positive, `k < 0` is variable `|k|` negated. Lines starting
//! with `c` are comments. Variable `k` in the file is variable `k - 1` in
//! memory.

use std::fmt::Write as _;

use super::{DnfFormula, Literal};
use crate::error::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_dnf(text: &str) -> Result<DnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut cubes: Vec<Vec<Literal>> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let Some((n, m)) = header else {
            header = Some(parse_header(line, line_no)?);
            continue;
        };
        if line.starts_with('p') {
            return Err(err(line_no, "duplicate header"));
        }
        if cubes.len() == m {
            return Err(err(line_no, format!("more than the declared {m} cubes")));
        }
        cubes.push(parse_cube(line, line_no, n)?);
    }

    let Some((n, m)) = header else {
        return Err(err(last_line.max(1), "missing `p dnf <n> <m>` header"));
    };
    if cubes.len() != m {
        return Err(err(last_line, format!("declared {m} cubes, found {}", cubes.len())));
    }
    DnfFormula::new(n, cubes)
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    match parts.as_slice() {
        ["p", "dnf", n, m] => {
            let n: usize = n.parse().map_err(|_| err(line_no, format!("bad variable count {n:?}")))?;
            let m: usize = m.parse().map_err(|_| err(line_no, format!("bad cube count {m:?}")))?;
            if n == 0 {
                return Err(err(line_no, "variable count must be at least 1"));
            }
            if m == 0 {
                return Err(err(line_no, "cube count must be at least 1"));
            }
            if n > u32::MAX as usize {
                return Err(err(line_no, "variable count too large"));
            }
            Ok((n, m))
        }
        _ => Err(err(line_no, format!("malformed header {line:?}"))),
    }
}

fn parse_cube(line: &str, line_no: usize, n: usize) -> Result<Vec<Literal>> {
    let mut lits = Vec::new();
    let mut terminated = false;
    for tok in line.split_whitespace() {
        if terminated {
            return Err(err(line_no, "tokens after terminating 0"));
        }
        let k: i64 = tok.parse().map_err(|_| err(line_no, format!("bad literal {tok:?}")))?;
        if k == 0 {
            terminated = true;
            continue;
        }
        let var = k.unsigned_abs();
        if var > n as u64 {
            return Err(err(line_no, format!("literal {k} out of range for {n} variables")));
        }
        lits.push(Literal::new((var - 1) as u32, k > 0));
    }
    if !terminated {
        return Err(err(line_no, "cube not terminated by 0"));
    }
    Ok(lits)
}

/// Writes `phi` in the text format with LF line endings. An unsatisfiable
/// formula is written as the single cube `1 -1 0`.
pub fn serialize_dnf(phi: &DnfFormula) -> String {
    let mut out = String::new();
    if phi.is_unsatisfiable() {
        let _ = writeln!(out, "p dnf {} 1", phi.num_vars());
        out.push_str("1 -1 0\n");
        return out;
    }
    let _ = writeln!(out, "p dnf {} {}", phi.num_vars(), phi.num_cubes());
    for cube in phi.cubes() {
        for l in cube.literals() {
            let k = l.var as i64 + 1;
            let _ = write!(out, "{} ", if l.positive { k } else { -k });
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{exact_count, gen_random};
    use proptest::prelude::*;

    #[test]
    fn parses_example() {
        let phi = parse_dnf("p dnf 3 2\n1 -2 0\n3 0\n").unwrap();
        assert_eq!(phi.num_vars(), 3);
        assert_eq!(phi.num_cubes(), 2);
        assert_eq!(phi.cube(0).literals(), &[Literal::pos(0), Literal::neg(1)]);
        assert_eq!(phi.cube(1).literals(), &[Literal::pos(2)]);
    }

    #[test]
    fn contradictory_and_empty_cubes() {
        let dead = parse_dnf("p dnf 2 1\n1 -1 0\n").unwrap();
        assert!(dead.is_unsatisfiable());
        assert_eq!(exact_count(&dead).unwrap(), 0);

        let taut = parse_dnf("p dnf 2 1\n0\n").unwrap();
        assert!(taut.is_tautology());
        assert_eq!(exact_count(&taut).unwrap(), 4);
        assert_eq!(serialize_dnf(&taut), "p dnf 2 1\n0\n");
    }

    #[test]
    fn comments_and_blank_lines() {
        let phi = parse_dnf("c hello\n\np dnf 2 1\nc mid\n-2 0\n").unwrap();
        assert_eq!(phi.cube(0).literals(), &[Literal::neg(1)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("p cnf 3 1\n1 0\n", 1),
            ("p dnf 3 1\n4 0\n", 2),
            ("p dnf 3 2\n1 0\n", 2),
            ("p dnf 3 1\n1 0\n2 0\n", 3),
            ("p dnf 3 1\n1 2\n", 2),
            ("p dnf 3 1\n1 0 2\n", 2),
            ("p dnf 3 1\nc x\n1 a 0\n", 3),
            ("", 1),
        ];
        for (text, line) in cases {
            match parse_dnf(text) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn serialized_generator_output_is_stable() {
        let a = serialize_dnf(&gen_random(10, 4, 3, 3, 7).unwrap());
        let b = serialize_dnf(&gen_random(10, 4, 3, 3, 7).unwrap());
        assert_eq!(a, b);
        assert!(a.is_ascii() && !a.contains('\r'));
    }

    #[test]
    fn unsat_roundtrip() {
        let dead = parse_dnf("p dnf 4 2\n1 -1 0\n2 -2 3 0\n").unwrap();
        assert_eq!(parse_dnf(&serialize_dnf(&dead)).unwrap(), dead);
    }

    proptest! {
        #[test]
        fn parse_inverts_serialize(n in 1usize..20, m in 1usize..8, seed in any::<u64>(), wmax in 0usize..6) {
            let wmax = wmax.min(n).max(1);
            let phi = gen_random(n, m, 1, wmax, seed).unwrap();
            let text = serialize_dnf(&phi);
            prop_assert_eq!(parse_dnf(&text).unwrap(), phi);
        }
    }
}
