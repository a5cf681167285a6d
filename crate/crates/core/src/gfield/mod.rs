//! Finite fields GF(p^e) and extension towers.
//!
//! Elements are encoded as integer codes `Fe`. For a field built as a
//! degree-f extension of a base K, the code of `c0 + c1 x + ... ` is
//! `Σ c_i |K|^i` where each `c_i` is itself a code of K. Because
//! `|K|^i = p^{e_K i}`, the base-p digits of any code are its coordinates over
//! the prime field, and an element of K embeds into every field above it in
//! the tower with the same code.

pub mod poly;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::numth;

pub type Fe = u32;

/// Default bound on field orders accepted by the public constructors.
pub const DEFAULT_LIMIT: u64 = 1 << 20;
/// Fields up to this order get log/exp tables.
const LOG_TABLE_LIMIT: u64 = 1 << 20;
/// Fields up to this order get full addition and multiplication tables.
const SMALL_TABLE_LIMIT: u64 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field order {base}^{degree} exceeds the magnitude limit {limit}")]
    TooLarge { base: u64, degree: u32, limit: u64 },
    #[error("zero has no multiplicative order")]
    ZeroOrder,
    #[error("{0} is not a subfield on the tower of {1}")]
    NotSubfield(String, String),
    #[error("code {0} is out of range for {1}")]
    OutOfRange(u64, String),
    #[error("cannot parse: {0}")]
    Parse(String),
}

struct LogTables {
    exp: Vec<Fe>,
    log: Vec<u32>,
}

struct SmallTables {
    add: Vec<Fe>,
    mul: Vec<Fe>,
    neg: Vec<Fe>,
    inv: Vec<Fe>,
}

/// A finite field together with its construction data.
pub struct FieldSpec {
    id: usize,
    p: u32,
    order: u64,
    prime_degree: u32,
    rel_degree: u32,
    base: Option<Arc<FieldSpec>>,
    modulus: Vec<Fe>,
    generator: Fe,
    logs: Option<LogTables>,
    small: Option<SmallTables>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.order)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for FieldSpec {}

impl Hash for FieldSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum FieldKey {
    Prime(u32),
    Ext(usize, u32),
}

fn registry() -> &'static Mutex<HashMap<FieldKey, Arc<FieldSpec>>> {
    static REG: OnceLock<Mutex<HashMap<FieldKey, Arc<FieldSpec>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

fn next_id() -> usize {
    static NEXT: AtomicUsize = AtomicUsize::new(1);
    NEXT.fetch_add(1, Ordering::Relaxed)
}

fn lookup_or_build(
    key: FieldKey,
    build: impl FnOnce() -> Result<FieldSpec, FieldError>,
) -> Result<Arc<FieldSpec>, FieldError> {
    if let Some(f) = registry().lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let built = Arc::new(build()?);
    let mut reg = registry().lock().unwrap();
    Ok(reg.entry(key).or_insert(built).clone())
}

/// The prime field GF(p).
pub fn prime_field(p: u64) -> Result<Arc<FieldSpec>, FieldError> {
    if !numth::is_prime(p) || p > u32::MAX as u64 {
        return Err(FieldError::NotPrime(p));
    }
    lookup_or_build(FieldKey::Prime(p as u32), || {
        let mut f = FieldSpec {
            id: next_id(),
            p: p as u32,
            order: p,
            prime_degree: 1,
            rel_degree: 1,
            base: None,
            modulus: vec![0, 1],
            generator: 0,
            logs: None,
            small: None,
        };
        f.finish();
        Ok(f)
    })
}

/// GF(p^e) built as a degree-e extension of GF(p), with the default magnitude limit.
pub fn make_field(p: u64, e: u32) -> Result<Arc<FieldSpec>, FieldError> {
    make_field_with_limit(p, e, DEFAULT_LIMIT)
}

pub fn make_field_with_limit(p: u64, e: u32, limit: u64) -> Result<Arc<FieldSpec>, FieldError> {
    if e == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let base = prime_field(p)?;
    if e == 1 {
        return Ok(base);
    }
    ext_field_with_limit(&base, e, limit)
}

/// The field of order `q`, which must be a prime power.
pub fn field_of_order(q: u64) -> Result<Arc<FieldSpec>, FieldError> {
    let (p, e) = numth::prime_power(q).ok_or(FieldError::NotPrime(q))?;
    make_field(p, e)
}

pub fn ext_field(base: &Arc<FieldSpec>, f: u32) -> Result<Arc<FieldSpec>, FieldError> {
    ext_field_with_limit(base, f, DEFAULT_LIMIT)
}

/// Degree-`f` extension of `base` defined by the lexicographically least monic
/// irreducible polynomial of degree `f` over `base`.
pub fn ext_field_with_limit(
    base: &Arc<FieldSpec>,
    f: u32,
    limit: u64,
) -> Result<Arc<FieldSpec>, FieldError> {
    if f == 0 {
        return Err(FieldError::ZeroDegree);
    }
    if f == 1 {
        return Ok(base.clone());
    }
    let too_large = FieldError::TooLarge {
        base: base.order,
        degree: f,
        limit,
    };
    let order = numth::checked_pow(base.order, f).ok_or(too_large.clone())?;
    if order > limit || order > u32::MAX as u64 {
        return Err(too_large);
    }
    let base = base.clone();
    lookup_or_build(FieldKey::Ext(base.id, f), move || {
        // Polynomials with zero constant term are reducible and sort first.
        let modulus = poly::monic_polys_unit_constant(&base, f as usize)
            .find(|c| poly::is_irreducible(&base, c))
            .expect("irreducible polynomials exist in every degree");
        let mut spec = FieldSpec {
            id: next_id(),
            p: base.p,
            order,
            prime_degree: base.prime_degree * f,
            rel_degree: f,
            base: Some(base),
            modulus,
            generator: 0,
            logs: None,
            small: None,
        };
        spec.finish();
        Ok(spec)
    })
}

impl FieldSpec {
    fn finish(&mut self) {
        self.generator = self.find_generator();
        if self.order <= LOG_TABLE_LIMIT {
            let n = (self.order - 1) as usize;
            let mut exp = vec![0; 2 * n.max(1)];
            let mut log = vec![0u32; self.order as usize];
            let mut x: Fe = 1;
            for i in 0..n {
                exp[i] = x;
                exp[i + n] = x;
                log[x as usize] = i as u32;
                x = self.mul_slow(x, self.generator);
            }
            if n == 0 {
                exp[0] = 1;
            }
            self.logs = Some(LogTables { exp, log });
        }
        if self.order <= SMALL_TABLE_LIMIT {
            let q = self.order as usize;
            let mut add = vec![0; q * q];
            let mut mul = vec![0; q * q];
            let mut neg = vec![0; q];
            let mut inv = vec![0; q];
            for a in 0..q {
                neg[a] = self.neg_digits(a as Fe);
                if a != 0 {
                    inv[a] = self.pow(a as Fe, self.order - 2);
                }
                for b in 0..q {
                    add[a * q + b] = self.add_digits(a as Fe, b as Fe);
                    mul[a * q + b] = self.mul(a as Fe, b as Fe);
                }
            }
            self.small = Some(SmallTables { add, mul, neg, inv });
        }
    }

    fn find_generator(&self) -> Fe {
        let n = self.order - 1;
        if n == 1 {
            return 1;
        }
        let primes: Vec<u64> = numth::factor(n).keys().copied().collect();
        (2..self.order as Fe)
            .find(|&c| primes.iter().all(|&r| self.pow_slow(c, n / r) != 1))
            .expect("the multiplicative group is cyclic")
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.prime_degree
    }

    /// Degree over the immediate base field (1 for a prime field).
    pub fn rel_degree(&self) -> u32 {
        self.rel_degree
    }

    pub fn base(&self) -> Option<&Arc<FieldSpec>> {
        self.base.as_ref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.base.is_none()
    }

    /// Defining polynomial over the immediate base, low degree first.
    pub fn modulus(&self) -> &[Fe] {
        &self.modulus
    }

    pub fn generator(&self) -> Fe {
        self.generator
    }

    pub fn zero(&self) -> Fe {
        0
    }

    pub fn one(&self) -> Fe {
        1
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        0..self.order as Fe
    }

    /// True when `sub` is this field or one of its tower ancestors.
    pub fn has_subfield(&self, sub: &FieldSpec) -> bool {
        if self.id == sub.id {
            return true;
        }
        let mut cur = self.base.as_ref();
        while let Some(f) = cur {
            if f.id == sub.id {
                return true;
            }
            cur = f.base.as_ref();
        }
        false
    }

    /// Coordinates over the immediate base field.
    pub fn coords(&self, a: Fe) -> Vec<Fe> {
        let k = self.base_order();
        let mut a = a as u64;
        (0..self.rel_degree)
            .map(|_| {
                let c = (a % k) as Fe;
                a /= k;
                c
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[Fe]) -> Fe {
        let k = self.base_order();
        coords.iter().rev().fold(0u64, |acc, &c| acc * k + c as u64) as Fe
    }

    /// Coordinates over any tower subfield `sub`, in the basis of products of
    /// the tower power bases (base-|sub| digits of the code).
    pub fn coords_over(&self, a: Fe, sub: &FieldSpec) -> Result<Vec<Fe>, FieldError> {
        if !self.has_subfield(sub) {
            return Err(not_subfield(sub, self));
        }
        let k = sub.order;
        let mut a = a as u64;
        Ok((0..self.prime_degree / sub.prime_degree)
            .map(|_| {
                let c = (a % k) as Fe;
                a /= k;
                c
            })
            .collect())
    }

    fn base_order(&self) -> u64 {
        self.base.as_ref().map_or(self.order, |b| b.order)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return a ^ b;
        }
        if let Some(t) = &self.small {
            return t.add[a as usize * self.order as usize + b as usize];
        }
        self.add_digits(a, b)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        if let Some(t) = &self.small {
            return t.neg[a as usize];
        }
        self.neg_digits(a)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if let Some(t) = &self.small {
            return t.mul[a as usize * self.order as usize + b as usize];
        }
        if a == 0 || b == 0 {
            return 0;
        }
        if let Some(t) = &self.logs {
            return t.exp[(t.log[a as usize] + t.log[b as usize]) as usize];
        }
        self.mul_slow(a, b)
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(a != 0, "inverse of zero in {self:?}");
        if let Some(t) = &self.small {
            return t.inv[a as usize];
        }
        if let Some(t) = &self.logs {
            let n = (self.order - 1) as u32;
            return t.exp[((n - t.log[a as usize]) % n) as usize];
        }
        self.pow(a, self.order - 2)
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if let Some(t) = &self.logs {
            let n = self.order - 1;
            let idx = (t.log[a as usize] as u64 * (e % n)) % n;
            return t.exp[idx as usize];
        }
        self.pow_slow(a, e)
    }

    fn pow_slow(&self, a: Fe, mut e: u64) -> Fe {
        let mut acc: Fe = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        acc
    }

    fn add_digits(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p as u64;
        let (mut a, mut b) = (a as u64, b as u64);
        let (mut r, mut pw) = (0u64, 1u64);
        for _ in 0..self.prime_degree {
            r += ((a % p + b % p) % p) * pw;
            pw *= p;
            a /= p;
            b /= p;
        }
        r as Fe
    }

    fn neg_digits(&self, a: Fe) -> Fe {
        let p = self.p as u64;
        let mut a = a as u64;
        let (mut r, mut pw) = (0u64, 1u64);
        for _ in 0..self.prime_degree {
            r += ((p - a % p) % p) * pw;
            pw *= p;
            a /= p;
        }
        r as Fe
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let base = match &self.base {
            None => return ((a as u64 * b as u64) % self.p as u64) as Fe,
            Some(k) => k,
        };
        if a == 0 || b == 0 {
            return 0;
        }
        let f = self.rel_degree as usize;
        let ac = self.coords(a);
        let bc = self.coords(b);
        let mut prod = vec![0; 2 * f - 1];
        for (i, &x) in ac.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in bc.iter().enumerate() {
                prod[i + j] = base.add(prod[i + j], base.mul(x, y));
            }
        }
        for d in (f..2 * f - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for j in 0..f {
                prod[d - f + j] = base.sub(prod[d - f + j], base.mul(c, self.modulus[j]));
            }
            prod[d] = 0;
        }
        self.from_coords(&prod[..f])
    }

    /// Frobenius x ↦ x^{p^k}.
    pub fn frobenius(&self, a: Fe, k: u32) -> Fe {
        let e = (k % self.prime_degree) as u64;
        self.pow(a, (self.p as u64).pow(e as u32))
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: Fe) -> Result<u64, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroOrder);
        }
        let n = self.order - 1;
        let mut ord = n;
        for (r, _) in numth::factor(n) {
            while ord % r == 0 && self.pow(a, ord / r) == 1 {
                ord /= r;
            }
        }
        Ok(ord)
    }

    /// `p^e:[c0,...,ce]`, with the base field prefixed for towers over a
    /// non-prime base.
    pub fn serialize(&self) -> String {
        let coeffs: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
        let here = format!("{}^{}:[{}]", self.p, self.prime_degree, coeffs.join(","));
        match &self.base {
            Some(b) if !b.is_prime_field() => format!("{}/{}", b.serialize(), here),
            _ => here,
        }
    }

    /// Inverse of [`serialize`](Self::serialize); the defining polynomial is
    /// recomputed and checked against the text.
    pub fn parse(text: &str) -> Result<Arc<FieldSpec>, FieldError> {
        let bad = || FieldError::Parse(text.to_string());
        let mut field: Option<Arc<FieldSpec>> = None;
        for part in text.trim().split('/') {
            let (head, body) = part.split_once(':').ok_or_else(bad)?;
            let (p, e) = head.split_once('^').ok_or_else(bad)?;
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let e: u32 = e.trim().parse().map_err(|_| bad())?;
            let coeffs = parse_list(body).ok_or_else(bad)?;
            let next = match &field {
                None => make_field(p, e)?,
                Some(b) => {
                    if e % b.prime_degree != 0 || p != b.p as u64 {
                        return Err(bad());
                    }
                    ext_field(b, e / b.prime_degree)?
                }
            };
            if next.modulus != coeffs {
                return Err(bad());
            }
            field = Some(next);
        }
        field.ok_or_else(bad)
    }
}

fn parse_list(body: &str) -> Option<Vec<Fe>> {
    let inner = body.trim().strip_prefix('[')?.strip_suffix(']')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|s| s.trim().parse().ok()).collect()
}

/// An element bundled with its field.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<FieldSpec>,
    code: Fe,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.id == other.field.id && self.code == other.code
    }
}
impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.id.hash(state);
        self.code.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self, self.field)
    }
}

/// Coefficients over the immediate base field, low degree first.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords().iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", c.join(","))
    }
}

impl FieldElement {
    pub fn new(field: &Arc<FieldSpec>, code: Fe) -> Result<Self, FieldError> {
        if code as u64 >= field.order {
            return Err(FieldError::OutOfRange(code as u64, format!("{field:?}")));
        }
        Ok(FieldElement {
            field: field.clone(),
            code,
        })
    }

    pub fn from_coords(field: &Arc<FieldSpec>, coords: &[Fe]) -> Result<Self, FieldError> {
        let k = field.base_order();
        if coords.len() != field.rel_degree as usize || coords.iter().any(|&c| c as u64 >= k) {
            return Err(FieldError::Parse(format!("{coords:?}")));
        }
        Self::new(field, field.from_coords(coords))
    }

    pub fn parse(text: &str, field: &Arc<FieldSpec>) -> Result<Self, FieldError> {
        let coords = parse_list(text).ok_or_else(|| FieldError::Parse(text.to_string()))?;
        Self::from_coords(field, &coords)
    }

    pub fn zero(field: &Arc<FieldSpec>) -> Self {
        FieldElement {
            field: field.clone(),
            code: 0,
        }
    }

    pub fn one(field: &Arc<FieldSpec>) -> Self {
        FieldElement {
            field: field.clone(),
            code: 1,
        }
    }

    pub fn generator(field: &Arc<FieldSpec>) -> Self {
        FieldElement {
            field: field.clone(),
            code: field.generator,
        }
    }

    pub fn code(&self) -> Fe {
        self.code
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn coords(&self) -> Vec<Fe> {
        self.field.coords(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn with(&self, code: Fe) -> Self {
        FieldElement {
            field: self.field.clone(),
            code,
        }
    }

    fn check(&self, other: &Self) {
        assert!(
            self.field.id == other.field.id,
            "mixing elements of {:?} and {:?}",
            self.field,
            other.field
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        self.with(self.field.add(self.code, other.code))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        self.with(self.field.sub(self.code, other.code))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        self.with(self.field.mul(self.code, other.code))
    }

    pub fn neg(&self) -> Self {
        self.with(self.field.neg(self.code))
    }

    pub fn inv(&self) -> Option<Self> {
        (self.code != 0).then(|| self.with(self.field.inv(self.code)))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.with(self.field.pow(self.code, e))
    }

    /// View this element inside a field higher up the tower.
    pub fn embed(&self, target: &Arc<FieldSpec>) -> Result<Self, FieldError> {
        if !target.has_subfield(&self.field) {
            return Err(not_subfield(&self.field, target));
        }
        Ok(FieldElement {
            field: target.clone(),
            code: self.code,
        })
    }

    /// The same element viewed in a subfield, if it lies there.
    pub fn project(&self, sub: &Arc<FieldSpec>) -> Result<Self, FieldError> {
        if !self.field.has_subfield(sub) {
            return Err(not_subfield(sub, &self.field));
        }
        if self.code as u64 >= sub.order {
            return Err(FieldError::OutOfRange(self.code as u64, format!("{sub:?}")));
        }
        Ok(FieldElement {
            field: sub.clone(),
            code: self.code,
        })
    }
}

fn not_subfield(sub: &FieldSpec, top: &FieldSpec) -> FieldError {
    FieldError::NotSubfield(format!("{sub:?}"), format!("{top:?}"))
}

fn tower_degree(x: &FieldElement, sub: &Arc<FieldSpec>) -> Result<u32, FieldError> {
    if !x.field.has_subfield(sub) {
        return Err(not_subfield(sub, &x.field));
    }
    Ok(x.field.prime_degree / sub.prime_degree)
}

/// Norm from the field of `x` down to `sub`: the product of the conjugates
/// `x^{|sub|^i}`.
pub fn norm(x: &FieldElement, sub: &Arc<FieldSpec>) -> Result<FieldElement, FieldError> {
    let d = tower_degree(x, sub)?;
    let f = &x.field;
    let mut acc: Fe = 1;
    let mut conj = x.code;
    for _ in 0..d {
        acc = f.mul(acc, conj);
        conj = f.pow(conj, sub.order);
    }
    x.with(acc).project(sub)
}

/// Trace from the field of `x` down to `sub`.
pub fn trace(x: &FieldElement, sub: &Arc<FieldSpec>) -> Result<FieldElement, FieldError> {
    let d = tower_degree(x, sub)?;
    let f = &x.field;
    let mut acc: Fe = 0;
    let mut conj = x.code;
    for _ in 0..d {
        acc = f.add(acc, conj);
        conj = f.pow(conj, sub.order);
    }
    x.with(acc).project(sub)
}

pub fn frobenius(x: &FieldElement, k: u32) -> FieldElement {
    x.with(x.field.frobenius(x.code, k))
}

pub fn element_order(x: &FieldElement) -> Result<u64, FieldError> {
    x.field.element_order(x.code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_two_has_generator_one() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.generator(), 1);
    }

    #[test]
    fn gf9_uses_least_irreducible_quadratic() {
        let f = make_field(3, 2).unwrap();
        // x^2 + 1 is the least of x^2+1, x^2+x+2, x^2+2x+2.
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.element_order(f.generator()).unwrap(), 8);
    }

    #[test]
    fn gf16_generator_has_order_fifteen() {
        let f = make_field(2, 4).unwrap();
        assert_eq!(f.element_order(f.generator()).unwrap(), 15);
        let zeta = f.pow(f.generator(), 3);
        assert_eq!(f.element_order(zeta).unwrap(), 5);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            let f = field_of_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                assert_eq!(f.pow(a, q), a, "Frobenius fixed point in GF({q})");
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                }
            }
        }
    }

    #[test]
    fn distributivity_exhaustive_up_to_49() {
        for q in [4u64, 8, 9, 16, 25, 27, 49] {
            let f = field_of_order(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    for c in f.elements() {
                        let lhs = f.mul(a, f.add(b, c));
                        let rhs = f.add(f.mul(a, b), f.mul(a, c));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn embedding_from_base_is_identity_on_codes() {
        let k = make_field(2, 1).unwrap();
        let f = ext_field(&k, 4).unwrap();
        let g = make_field(2, 4).unwrap();
        assert!(Arc::ptr_eq(&f, &g));
        for c in 0..2 {
            let x = FieldElement::new(&k, c).unwrap();
            assert_eq!(x.embed(&f).unwrap().code(), c);
        }
    }

    #[test]
    fn gf64_as_gf4_space() {
        let k = make_field(2, 2).unwrap();
        let f = ext_field(&k, 3).unwrap();
        assert_eq!(f.order(), 64);
        assert_eq!(f.rel_degree(), 3);
        assert!(f.has_subfield(&k));
        let x = FieldElement::new(&f, 45).unwrap();
        assert_eq!(x.coords().len(), 3);
        assert_eq!(FieldElement::from_coords(&f, &x.coords()).unwrap(), x);
    }

    #[test]
    fn norm_gf9_to_gf3_has_fibres_of_four() {
        let k = make_field(3, 1).unwrap();
        let f = ext_field(&k, 2).unwrap();
        let mut counts = [0usize; 3];
        for c in 1..9 {
            let x = FieldElement::new(&f, c).unwrap();
            counts[norm(&x, &k).unwrap().code() as usize] += 1;
        }
        assert_eq!(counts, [0, 4, 4]);
    }

    #[test]
    fn norm_is_transitive_in_tower() {
        let k2 = make_field(2, 1).unwrap();
        let k4 = ext_field(&k2, 2).unwrap();
        let k16 = ext_field(&k4, 2).unwrap();
        for c in 0..16 {
            let x = FieldElement::new(&k16, c).unwrap();
            let direct = norm(&x, &k2).unwrap();
            let stepped = norm(&norm(&x, &k4).unwrap(), &k2).unwrap();
            assert_eq!(direct, stepped);
        }
    }

    #[test]
    fn norm_of_order_five_element_is_one() {
        let k2 = make_field(2, 1).unwrap();
        let k16 = make_field(2, 4).unwrap();
        let zeta = FieldElement::generator(&k16).pow(3);
        assert_eq!(element_order(&zeta).unwrap(), 5);
        assert_eq!(norm(&zeta, &k2).unwrap().code(), 1);
        assert!(trace(&FieldElement::zero(&k16), &k2).unwrap().is_zero());
    }

    #[test]
    fn trace_lands_in_subfield_and_is_additive() {
        let k = make_field(3, 1).unwrap();
        let f = ext_field(&k, 3).unwrap();
        for a in 0..27 {
            for b in 0..27 {
                let x = FieldElement::new(&f, a).unwrap();
                let y = FieldElement::new(&f, b).unwrap();
                let lhs = trace(&x.add(&y), &k).unwrap();
                let rhs = trace(&x, &k).unwrap().add(&trace(&y, &k).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn frobenius_has_order_e() {
        for q in [4u64, 8, 9, 16, 25, 27, 49, 81] {
            let f = field_of_order(q).unwrap();
            for a in f.elements() {
                let x = FieldElement::new(&f, a).unwrap();
                assert_eq!(frobenius(&x, f.degree()), x);
            }
        }
    }

    #[test]
    fn element_orders_divide_group_order() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 32, 64, 81, 125, 128, 243, 256] {
            let f = field_of_order(q).unwrap();
            for a in 1..q as Fe {
                let o = f.element_order(a).unwrap();
                assert_eq!((q - 1) % o, 0);
                assert_eq!(f.pow(a, o), 1);
            }
        }
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.element_order(f.generator()).unwrap(), 3);
        assert_eq!(f.element_order(1).unwrap(), 1);
        assert!(f.element_order(0).is_err());
    }

    #[test]
    fn table_free_field_matches_tabled_arithmetic() {
        // GF(3^14) is above the table limit; cross-check against GF(3^7) inside it.
        let k = make_field(3, 1).unwrap();
        let big = ext_field_with_limit(&k, 14, u32::MAX as u64).unwrap();
        assert!(big.logs.is_none());
        let g = big.generator();
        let n = big.order() - 1;
        assert_eq!(big.element_order(g).unwrap(), n);
        let x = big.pow(g, 1234567);
        assert_eq!(big.mul(x, big.inv(x)), 1);
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(make_field(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(make_field(2, 0).unwrap_err(), FieldError::ZeroDegree);
        assert!(matches!(make_field(2, 21), Err(FieldError::TooLarge { .. })));
        let k2 = make_field(2, 2).unwrap();
        let x = FieldElement::new(&make_field(3, 2).unwrap(), 1).unwrap();
        assert!(norm(&x, &k2).is_err());
    }

    #[test]
    fn serialization_round_trips() {
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.serialize(), "3^2:[1,0,1]");
        assert!(Arc::ptr_eq(&FieldSpec::parse(&f.serialize()).unwrap(), &f));
        let t = ext_field(&f, 3).unwrap();
        assert!(Arc::ptr_eq(&FieldSpec::parse(&t.serialize()).unwrap(), &t));
        let x = FieldElement::new(&t, 500).unwrap();
        assert_eq!(FieldElement::parse(&x.to_string(), &t).unwrap(), x);
        assert!(FieldSpec::parse("3^2:[2,0,1]").is_err());
    }
}
