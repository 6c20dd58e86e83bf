//! Decimal rendering of exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

/// Significant digits used by [`to_decimal`].
pub const SIGNIFICANT_DIGITS: usize = 15;

/// Renders `v` with at most 15 significant digits, rounding half to even.
///
/// Integers are printed in full. Other values use positional notation when
/// the decimal exponent lies in `[-6, 20]` and `d.ddde±x` otherwise.
/// Trailing fractional zeros are dropped.
pub fn to_decimal(v: &BigRational) -> String {
    to_decimal_digits(v, SIGNIFICANT_DIGITS)
}

pub fn to_decimal_digits(v: &BigRational, digits: usize) -> String {
    assert!(digits >= 1);
    if v.is_integer() {
        return v.to_integer().to_string();
    }
    let sign = if v.is_negative() { "-" } else { "" };
    let num = v.numer().abs();
    let den = v.denom().clone();

    // Decimal exponent e with 10^e <= num/den < 10^(e+1).
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    if scaled_cmp_lt(&num, &den, e) {
        e -= 1;
    }
    let shift = digits as i64 - 1 - e;
    let mut mantissa = round_half_even(&num, &den, shift);
    if mantissa.to_string().len() > digits {
        // Rounded up to the next power of ten.
        mantissa /= 10;
        e += 1;
    }
    let digits_str = mantissa.to_string();
    let body = if (-6..=20).contains(&e) {
        positional(&digits_str, e)
    } else {
        scientific(&digits_str, e)
    };
    format!("{sign}{body}")
}

/// `num/den < 10^e`.
fn scaled_cmp_lt(num: &BigInt, den: &BigInt, e: i64) -> bool {
    if e >= 0 {
        num < &(den * pow10(e as u32))
    } else {
        &(num * pow10((-e) as u32)) < den
    }
}

fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

/// `round(num/den · 10^shift)` with ties to even.
fn round_half_even(num: &BigInt, den: &BigInt, shift: i64) -> BigInt {
    let (n, d) = if shift >= 0 {
        (num * pow10(shift as u32), den.clone())
    } else {
        (num.clone(), den * pow10((-shift) as u32))
    };
    let (q, r) = n.div_rem(&d);
    let twice = &r * 2u32;
    match twice.cmp(&d) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + BigInt::one(),
        std::cmp::Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + BigInt::one()
            }
        }
    }
}

/// Places the decimal point in `digits` (a significand whose first digit
/// has weight `10^e`).
fn positional(digits: &str, e: i64) -> String {
    let len = digits.len() as i64;
    let out = if e < 0 {
        format!("0.{}{}", "0".repeat((-e - 1) as usize), digits)
    } else if e + 1 >= len {
        format!("{}{}", digits, "0".repeat((e + 1 - len) as usize))
    } else {
        let (int, frac) = digits.split_at((e + 1) as usize);
        format!("{int}.{frac}")
    };
    strip_fraction_zeros(out)
}

fn scientific(digits: &str, e: i64) -> String {
    let (first, rest) = digits.split_at(1);
    let mantissa = strip_fraction_zeros(format!("{first}.{rest}"));
    let sign = if e < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{}", e.abs())
}

fn strip_fraction_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn integers_print_in_full() {
        assert_eq!(to_decimal(&r(5, 1)), "5");
        assert_eq!(to_decimal(&r(0, 1)), "0");
        let big = BigRational::from_integer(BigInt::one() << 100u32);
        assert_eq!(to_decimal(&big), "1267650600228229401496703205376");
    }

    #[test]
    fn fractions() {
        assert_eq!(to_decimal(&r(1, 3)), "0.333333333333333");
        assert_eq!(to_decimal(&r(2, 3)), "0.666666666666667");
        assert_eq!(to_decimal(&r(10, 3)), "3.33333333333333");
        assert_eq!(to_decimal(&r(5, 2)), "2.5");
        assert_eq!(to_decimal(&r(-7, 4)), "-1.75");
        assert_eq!(to_decimal(&r(1, 8)), "0.125");
    }

    #[test]
    fn ties_go_to_even() {
        // 1 + 5e-15 sits exactly halfway between two 15-digit values.
        let half_up = r(1, 1) + r(5, 1_000_000_000_000_000);
        assert_eq!(to_decimal(&half_up), "1");
        let odd = r(1, 1) + r(15, 1_000_000_000_000_000);
        assert_eq!(to_decimal(&odd), "1.00000000000002");
        assert_eq!(to_decimal_digits(&r(25, 100), 1), "0.2");
        assert_eq!(to_decimal_digits(&r(35, 100), 1), "0.4");
    }

    #[test]
    fn carry_into_next_decade() {
        assert_eq!(to_decimal_digits(&r(9999, 1000), 3), "10");
        assert_eq!(to_decimal(&(r(1, 1) - r(1, 10i64.pow(17)))), "1");
    }

    #[test]
    fn extreme_exponents_use_scientific() {
        assert_eq!(to_decimal(&r(1, 10i64.pow(9))), "1e-9");
        assert_eq!(to_decimal(&r(3, 2 * 10i64.pow(7))), "1.5e-7");
        assert_eq!(to_decimal(&r(1, 1_000_000)), "0.000001");
        let big = BigRational::new(BigInt::from(10).pow(30) + BigInt::one(), BigInt::from(3));
        assert_eq!(to_decimal(&big), "3.33333333333333e+29");
    }

    #[test]
    fn large_non_integers_positional() {
        assert_eq!(to_decimal(&r(123_456_789_012_345_679, 10)), "12345678901234600");
    }
}
