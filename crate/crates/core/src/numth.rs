//! Small integer number theory: factorization, divisors, multiplicative order.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;

pub fn is_prime(n: u64) -> bool {
    num_prime::nt_funcs::is_prime64(n)
}

/// Prime factorization as an ordered map prime -> exponent. `factor(1)` is empty.
pub fn factor(n: u64) -> BTreeMap<u64, u32> {
    if n <= 1 {
        return BTreeMap::new();
    }
    num_prime::nt_funcs::factorize64(n)
        .into_iter()
        .map(|(p, e)| (p, e as u32))
        .collect()
}

/// All positive divisors of `n`, sorted ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factor(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for &d in &divs {
            let mut pk = 1u64;
            for _ in 0..=e {
                next.push(d * pk);
                pk *= p;
            }
        }
        divs = next;
    }
    divs.sort_unstable();
    divs
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut acc: u128 = 1;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Multiplicative order of `q` modulo `m`, or `None` when gcd(q, m) != 1.
pub fn mult_order(q: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(q % m, m) != 1 {
        return None;
    }
    let lambda = carmichael(m);
    let mut ord = lambda;
    for (p, _) in factor(lambda) {
        while ord % p == 0 && pow_mod(q, ord / p, m) == 1 {
            ord /= p;
        }
    }
    Some(ord)
}

fn carmichael(m: u64) -> u64 {
    factor(m).into_iter().fold(1u64, |acc, (p, e)| {
        let pe1 = p.pow(e - 1);
        let l = if p == 2 && e >= 3 { pe1 / 2 } else { pe1 * (p - 1) };
        acc.lcm(&l)
    })
}

/// Writes `q = p^e` with `p` prime, or returns `None`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = factor(q);
    if f.len() == 1 {
        let (&p, &e) = f.iter().next().unwrap();
        Some((p, e))
    } else {
        None
    }
}

/// Integer power with overflow detection.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub fn big_pow(base: u64, exp: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// Serializes an exact rational as its `num/den` string.
pub fn serialize_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisors_of_small_numbers() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(66430).len(), 32);
    }

    #[test]
    fn orders_match_naive_loop() {
        for m in 2..200u64 {
            for q in 2..20u64 {
                let naive = if gcd(q, m) != 1 {
                    None
                } else {
                    let mut k = 1;
                    let mut x = q % m;
                    while x != 1 {
                        x = x * q % m;
                        k += 1;
                    }
                    Some(k)
                };
                assert_eq!(mult_order(q, m), naive, "q={q} m={m}");
            }
        }
    }

    #[test]
    fn phi_and_prime_power() {
        assert_eq!(euler_phi(40), 16);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(2), Some((2, 1)));
    }
}
