//! Dense univariate polynomials over a [`FieldSpec`], stored low degree first.
//!
//! The zero polynomial is the empty vector; every other value is kept trimmed
//! so that the last coefficient is nonzero.

use super::{Fe, FieldSpec};

pub type Poly = Vec<Fe>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[Fe]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn add(f: &FieldSpec, a: &[Fe], b: &[Fe]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            f.add(x, y)
        })
        .collect();
    trim(out)
}

pub fn sub(f: &FieldSpec, a: &[Fe], b: &[Fe]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            f.sub(x, y)
        })
        .collect();
    trim(out)
}

pub fn scale(f: &FieldSpec, a: &[Fe], c: Fe) -> Poly {
    trim(a.iter().map(|&x| f.mul(x, c)).collect())
}

pub fn mul(f: &FieldSpec, a: &[Fe], b: &[Fe]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Quotient and remainder; panics on division by the zero polynomial.
pub fn divrem(f: &FieldSpec, a: &[Fe], b: &[Fe]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut r: Poly = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = f.inv(b[db]);
    let mut q = vec![0; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        let shift = dr - db;
        q[shift] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = f.sub(r[shift + j], f.mul(c, bj));
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(f: &FieldSpec, a: &[Fe], b: &[Fe]) -> Poly {
    divrem(f, a, b).1
}

pub fn monic(f: &FieldSpec, a: &[Fe]) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&c) => scale(f, a, f.inv(c)),
    }
}

/// Monic greatest common divisor.
pub fn gcd(f: &FieldSpec, a: &[Fe], b: &[Fe]) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn mulmod(f: &FieldSpec, a: &[Fe], b: &[Fe], m: &[Fe]) -> Poly {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &FieldSpec, a: &[Fe], mut e: u64, m: &[Fe]) -> Poly {
    let mut acc: Poly = rem(f, &[1], m);
    let mut base = rem(f, a, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        base = mulmod(f, &base, &base, m);
        e >>= 1;
    }
    acc
}

pub fn eval(f: &FieldSpec, a: &[Fe], x: Fe) -> Fe {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Ben-Or irreducibility test: `a` has no factor of degree at most deg/2.
pub fn is_irreducible(f: &FieldSpec, a: &[Fe]) -> bool {
    let a = trim(a.to_vec());
    let d = match degree(&a) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    if d == 1 {
        return true;
    }
    if a[0] == 0 {
        return false;
    }
    let x: Poly = vec![0, 1];
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        h = powmod(f, &h, f.order(), &a);
        let g = gcd(f, &a, &sub(f, &h, &x));
        if degree(&g).unwrap_or(0) > 0 {
            return false;
        }
    }
    true
}

/// All monic polynomials of the given degree, in lexicographic order of the
/// coefficient list `[c0, c1, ..., c_{d-1}, 1]` (c0 most significant).
pub fn monic_polys(f: &FieldSpec, d: usize) -> impl Iterator<Item = Poly> + '_ {
    monic_polys_from(f, d, 0)
}

/// The monic polynomials of degree `d` with nonzero constant term, in the
/// same order as [`monic_polys`].
pub fn monic_polys_unit_constant(f: &FieldSpec, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let start = f.order().checked_pow(d.saturating_sub(1) as u32).expect("too many polynomials");
    monic_polys_from(f, d, if d == 0 { 0 } else { start })
}

fn monic_polys_from(f: &FieldSpec, d: usize, start: u64) -> impl Iterator<Item = Poly> + '_ {
    let q = f.order();
    let count = q.checked_pow(d as u32).expect("too many polynomials");
    (start..count).map(move |mut idx| {
        let mut coeffs = vec![0; d + 1];
        for i in (0..d).rev() {
            coeffs[i] = (idx % q) as Fe;
            idx /= q;
        }
        coeffs[d] = 1;
        coeffs
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::{make_field, prime_field};

    fn has_small_factor(f: &FieldSpec, a: &[Fe]) -> bool {
        let d = a.len() - 1;
        (1..=d / 2).any(|k| monic_polys(f, k).any(|g| rem(f, a, &g).is_empty()))
    }

    #[test]
    fn ben_or_agrees_with_exhaustive_factor_search() {
        for (p, e) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1)] {
            let f = make_field(p, e).unwrap();
            for d in 1..=4usize {
                if f.order().pow(d as u32) > 5000 {
                    continue;
                }
                for a in monic_polys(&f, d) {
                    assert_eq!(is_irreducible(&f, &a), !has_small_factor(&f, &a), "{a:?}");
                }
            }
        }
    }

    #[test]
    fn divrem_reconstructs() {
        let f = prime_field(7).unwrap();
        let a = vec![3, 0, 5, 1, 6];
        let b = vec![2, 4, 1];
        let (q, r) = divrem(&f, &a, &b);
        assert!(r.len() < b.len());
        assert_eq!(add(&f, &mul(&f, &q, &b), &r), a);
    }

    #[test]
    fn lexicographic_order_starts_at_x_power() {
        let f = prime_field(3).unwrap();
        let first: Vec<Poly> = monic_polys(&f, 2).take(4).collect();
        assert_eq!(first[0], vec![0, 0, 1]);
        assert_eq!(first[1], vec![0, 1, 1]);
        assert_eq!(first[3], vec![1, 0, 1]);
    }
}
