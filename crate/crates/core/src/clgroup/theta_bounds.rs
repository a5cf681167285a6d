//! Exact grid checks of the two-sided estimates for Θ(k,n;±q) and their
//! ratios.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

/// A failed comparison `lhs < rhs` (or `lhs ≤ rhs`) with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaViolation {
    pub inequality: &'static str,
    /// `k` for the single-product and ratio estimates, `m` for the
    /// prefix-ratio estimates, 0 for the half-range ratio.
    pub k: u32,
    pub n: u32,
    pub q: u64,
    pub lhs: f64,
    pub rhs: f64,
    /// The two sides are equal, so only a strict comparison failed.
    pub equality: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ThetaSuite {
    pub n_max: u32,
    pub q_max: u64,
    pub checked: u64,
    pub violations: Vec<ThetaViolation>,
}

impl ThetaSuite {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, inequality: &'static str, strict: bool, at: (u32, u32, u64), lhs: &BigRational, rhs: &BigRational) {
        self.checked += 1;
        let ok = if strict { lhs < rhs } else { lhs <= rhs };
        if !ok {
            self.violations.push(ThetaViolation {
                inequality,
                k: at.0,
                n: at.1,
                q: at.2,
                lhs: lhs.to_f64().unwrap_or(f64::NAN),
                rhs: rhs.to_f64().unwrap_or(f64::NAN),
                equality: lhs == rhs,
            });
        }
    }
}

/// Prefix products `P[j] = Θ(1, j; base)` for `j = 0..=n_max`, where `base`
/// is `q` or `−q`.
fn prefixes(q: u64, negative: bool, n_max: u32) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    let mut power = BigRational::one();
    let qr = BigRational::from_integer(BigInt::from(q));
    for i in 1..=n_max {
        power /= &qr;
        let term = if negative && i % 2 == 1 { -power.clone() } else { power.clone() };
        let next = out.last().expect("nonempty") * (BigRational::one() - term);
        out.push(next);
    }
    out
}

fn inv_pow(q: u64, e: u32) -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(q), e as usize))
}

/// Checks every estimate for `1 ≤ k ≤ n ≤ n_max` (ratios for `k < n`, the
/// half-range ratio for even `n ≥ 4`, prefix ratios for `1 ≤ m < n`) and
/// `2 ≤ q ≤ q_max`, in exact arithmetic.
pub fn theta_inequality_suite(n_max: u32, q_max: u64) -> ThetaSuite {
    let mut s = ThetaSuite {
        n_max,
        q_max,
        ..ThetaSuite::default()
    };
    let one = BigRational::one();
    for q in 2..=q_max {
        let pos = prefixes(q, false, n_max);
        let neg = prefixes(q, true, n_max);
        let sq = prefixes(q * q, false, n_max);
        let th = |p: &[BigRational], k: u32, n: u32| &p[n as usize] / &p[k as usize - 1];
        let low = &one - inv_pow(q, 1) - inv_pow(q, 2);
        for n in 1..=n_max {
            for k in 1..=n {
                let at = (k, n, q);
                let tp = th(&pos, k, n);
                let tn = th(&neg, k, n);
                s.check("1-1/q-1/q^2 < Θ(k,n;q)", true, at, &low, &tp);
                s.check("Θ(k,n;q) < 1", true, at, &tp, &one);
                if k % 2 == 1 {
                    s.check("1 < Θ(k,n;-q), k odd", true, at, &one, &tn);
                    s.check("Θ(k,n;-q) ≤ 1+q^-k, k odd", false, at, &tn, &(&one + inv_pow(q, k)));
                } else {
                    s.check("1-q^-k < Θ(k,n;-q), k even", true, at, &(&one - inv_pow(q, k)), &tn);
                    s.check("Θ(k,n;-q) < 1, k even", true, at, &tn, &one);
                }
                if k < n {
                    let rp = th(&pos, k + 1, n) / th(&pos, 1, n - k);
                    let rn = th(&neg, k + 1, n) / th(&neg, 1, n - k);
                    s.check("1 < Θ(k+1,n;q)/Θ(1,n-k;q)", true, at, &one, &rp);
                    s.check("Θ(k+1,n;q)/Θ(1,n-k;q) < 1/(1-1/q-1/q^2)", true, at, &rp, &low.recip());
                    let plus1 = &one + inv_pow(q, 1);
                    if k % 2 == 1 {
                        let lo = (&one - inv_pow(q, k + 1)) / &plus1;
                        s.check("(1-q^-(k+1))/(1+1/q) < Θ(k+1,n;-q)/Θ(1,n-k;-q), k odd", true, at, &lo, &rn);
                        s.check("Θ(k+1,n;-q)/Θ(1,n-k;-q) < 1, k odd", true, at, &rn, &one);
                    } else {
                        s.check("1/(1+1/q) < Θ(k+1,n;-q)/Θ(1,n-k;-q), k even", true, at, &plus1.recip(), &rn);
                        let hi = &one + inv_pow(q, k + 1);
                        s.check("Θ(k+1,n;-q)/Θ(1,n-k;-q) < 1+q^-(k+1), k even", true, at, &rn, &hi);
                    }
                }
            }
            if n % 2 == 0 && n >= 4 {
                let h = n / 2;
                let ratio = th(&sq, 1, h - 1) / th(&sq, h, n - 1);
                let den = &one - inv_pow(q, n);
                let lo = (&one - inv_pow(q, 2) - inv_pow(q, 4)) / &den;
                s.check("(1-q^-2-q^-4)/(1-q^-n) < Θ(1,n/2-1;q^2)/Θ(n/2,n-1;q^2)", true, (0, n, q), &lo, &ratio);
                s.check("Θ(1,n/2-1;q^2)/Θ(n/2,n-1;q^2) < 1/(1-q^-n)", true, (0, n, q), &ratio, &den.recip());
            }
            for m in 1..n {
                let at = (m, n, q);
                let up = &neg[n as usize] / &neg[m as usize];
                let bound = if m % 2 == 1 { one.clone() } else { &one + inv_pow(q, m + 1) };
                s.check("Θ(1,n;-q)/Θ(1,m;-q) ≤ 1 (m odd), 1+q^-(m+1) (m even)", false, at, &up, &bound);
                let down = up.recip();
                let bound = if m % 2 == 0 { one.clone() } else { (&one - inv_pow(q, m + 1)).recip() };
                s.check("Θ(1,m;-q)/Θ(1,n;-q) ≤ 1 (m even), 1/(1-q^-(m+1)) (m odd)", false, at, &down, &bound);
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clgroup::theta;

    #[test]
    fn prefixes_agree_with_theta() {
        for q in [2, 3, 5] {
            for negative in [false, true] {
                let p = prefixes(q, negative, 8);
                for j in 0..=8u32 {
                    let expected = if j == 0 { BigRational::one() } else { theta(1, j, q, negative).unwrap() };
                    assert_eq!(p[j as usize], expected);
                }
            }
        }
    }

    #[test]
    fn failures_are_boundary_equalities() {
        let s = theta_inequality_suite(10, 4);
        assert!(s.checked > 1000);
        assert!(s.violations.iter().all(|v| v.equality));
        // Θ(k,k;-q) = 1 - q^-k for k even meets its strict lower bound.
        assert!(s
            .violations
            .iter()
            .any(|v| v.k == 2 && v.n == 2 && v.inequality.starts_with("1-q^-k")));
    }
}
