//! Exponents polynomial in n and certified evaluation of rational powers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numth;

/// An exponent `n2·n² + n1·n + c` with rational coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exponent {
    pub n2: Rational64,
    pub n1: Rational64,
    pub c: Rational64,
}

impl Exponent {
    pub fn new(n2: (i64, i64), n1: (i64, i64), c: (i64, i64)) -> Self {
        Exponent {
            n2: Rational64::new(n2.0, n2.1),
            n1: Rational64::new(n1.0, n1.1),
            c: Rational64::new(c.0, c.1),
        }
    }

    pub fn at(&self, n: usize) -> Rational64 {
        let n = Rational64::from_integer(n as i64);
        self.n2 * n * n + self.n1 * n + self.c
    }
}

/// Orders exponents by their growth as n → ∞.
impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n2, self.n1, self.c).cmp(&(other.n2, other.n1, other.c))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (coef, var) in [(self.n2, "n^2"), (self.n1, "n"), (self.c, "")] {
            if coef.is_zero() {
                continue;
            }
            let sign = if coef.is_negative() { "-" } else if out.is_empty() { "" } else { "+" };
            let mag = coef.abs();
            let body = match (mag.is_one(), var.is_empty()) {
                (true, false) => var.to_string(),
                (_, true) => mag.to_string(),
                _ if mag.is_integer() => format!("{mag}{var}"),
                _ => format!("({mag}){var}"),
            };
            out.push_str(sign);
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// A rational value together with whether it is exact or a certified
/// one-sided approximation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certified {
    pub value: BigRational,
    pub exact: bool,
}

fn big(n: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn root_floor_ceil(x: &BigUint, k: u32) -> (BigUint, BigUint, bool) {
    let r = x.nth_root(k);
    let exact = &r.pow(k) == x;
    let up = if exact { r.clone() } else { &r + 1u32 };
    (r, up, exact)
}

fn split(e: Rational64) -> (bool, BigUint, u32) {
    let a = e.numer().unsigned_abs();
    let b = *e.denom() as u32;
    (e.is_negative(), BigUint::from(a), b)
}

/// A certified upper bound for `base^e`: `ceil((base^a)^{1/b})` for
/// `e = a/b ≥ 0` and `1/floor((base^{|a|})^{1/b})` for `e < 0`.
pub fn pow_upper(base: u64, e: Rational64) -> Certified {
    let (negative, a, b) = split(e);
    let x = numth::big_pow(base, a.to_u64().expect("exponent numerator fits u64"));
    let (down, up, exact) = root_floor_ceil(&x, b);
    let value = if negative {
        big(down).recip()
    } else {
        big(up)
    };
    Certified { value, exact }
}

/// A certified lower bound for `base^e`, rounding the other way.
pub fn pow_lower(base: u64, e: Rational64) -> Certified {
    let (negative, a, b) = split(e);
    let x = numth::big_pow(base, a.to_u64().expect("exponent numerator fits u64"));
    let (down, up, exact) = root_floor_ceil(&x, b);
    let value = if negative {
        big(up).recip()
    } else {
        big(down)
    };
    Certified { value, exact }
}

/// A term `coeff · q^{exponent(n)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: BigRational,
    pub exponent: Exponent,
}

impl Term {
    pub fn new(coeff: (i64, i64), exponent: Exponent) -> Self {
        Term {
            coeff: BigRational::new(BigInt::from(coeff.0), BigInt::from(coeff.1)),
            exponent,
        }
    }

    /// Certified upper bound at `(n, q)`.
    pub fn eval(&self, n: usize, q: u64) -> Certified {
        let p = pow_upper(q, self.exponent.at(n));
        Certified {
            value: &self.coeff * p.value,
            exact: p.exact,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*q^({})", self.coeff, self.exponent)
    }
}

/// A certified rational upper bound for `log₂ log₂ q` (q ≥ 2), accurate to
/// about 1/64.
pub fn log2_log2_upper(q: u64) -> BigRational {
    const D: u32 = 64;
    // log₂ q ≤ a/D with a least such that 2^a ≥ q^D.
    let qd = numth::big_pow(q, D as u64);
    let a = qd.bits() - u64::from(qd.count_ones() == 1);
    // log₂(a/D) ≤ b/D with b least such that 2^b · D^D ≥ a^D.
    let lhs = BigUint::from(a).pow(D);
    let dd = BigUint::from(D).pow(D);
    // a ≥ D since q ≥ 2, so b ≥ 0.
    let mut b: u64 = 0;
    while (BigUint::one() << b) * &dd < lhs {
        b += 1;
    }
    BigRational::new(BigInt::from(b), BigInt::from(D))
}

/// A certified upper bound on `N(n,q) = 2(2n)^{5.2} + 2n log₂ log₂ q`, the
/// class-count bound for nearly simple subgroups.
pub fn c9_count_bound(n: usize, q: u64) -> BigRational {
    let two_n = 2 * n as u64;
    let power = pow_upper(two_n, Rational64::new(26, 5)).value;
    let two = BigRational::from_integer(BigInt::from(2));
    let log_term = BigRational::from_integer(BigInt::from(two_n)) * log2_log2_upper(q);
    two * power + log_term
}

/// Whether `N(n,q) < 3q^{2.6n}` is certified: the upper bound on N against
/// a lower bound on the right side.
pub fn c9_count_check(n: usize, q: u64) -> bool {
    let rhs = BigRational::from_integer(BigInt::from(3))
        * pow_lower(q, Rational64::new(13 * n as i64, 5)).value;
    c9_count_bound(n, q) < rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn exponent_display_and_order() {
        let e = Exponent::new((-1, 1), (1, 1), (2, 1));
        assert_eq!(e.to_string(), "-n^2+n+2");
        let f = Exponent::new((-4, 3), (4, 3), (2, 1));
        assert_eq!(f.to_string(), "-(4/3)n^2+(4/3)n+2");
        assert!(e > Exponent::new((-1, 1), (0, 1), (0, 1)));
        assert!(Exponent::new((-1, 2), (0, 1), (0, 1)) > e);
        assert_eq!(e.at(3), Rational64::from_integer(-4));
    }

    #[test]
    fn powers_round_in_the_safe_direction() {
        let up = pow_upper(32, Rational64::new(1, 5));
        assert_eq!(up.value, r(2, 1));
        assert!(up.exact);
        let up = pow_upper(2, Rational64::new(26, 5));
        assert_eq!(up.value, r(37, 1));
        assert!(!up.exact);
        let lo = pow_lower(2, Rational64::new(26, 5));
        assert_eq!(lo.value, r(36, 1));
        let neg = pow_upper(2, Rational64::new(-26, 5));
        assert_eq!(neg.value, r(1, 36));
        assert_eq!(pow_lower(2, Rational64::new(-26, 5)).value, r(1, 37));
        assert_eq!(pow_upper(3, Rational64::from_integer(-4)).value, r(1, 81));
    }

    #[test]
    fn loglog_bounds() {
        assert_eq!(log2_log2_upper(2), r(0, 1));
        assert_eq!(log2_log2_upper(4), r(1, 1));
        assert_eq!(log2_log2_upper(16), r(2, 1));
        let v = log2_log2_upper(9).to_f64().unwrap();
        let exact = (9f64).log2().log2();
        assert!(v >= exact && v < exact + 0.05);
        let v = log2_log2_upper(3).to_f64().unwrap();
        let exact = (3f64).log2().log2();
        assert!(v >= exact && v < exact + 0.05);
    }

    #[test]
    fn class_count_bounds() {
        assert_eq!(c9_count_bound(1, 2), r(74, 1));
        assert!(c9_count_check(9, 2));
        for n in 9..=30 {
            for q in [2, 3, 4, 5, 7, 8, 9] {
                assert!(c9_count_check(n, q));
                assert!(c9_count_bound(n + 1, q) > c9_count_bound(n, q));
            }
        }
    }
}
