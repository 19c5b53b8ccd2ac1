//! Finite fields F_q with q = p^n, p an odd prime.
//!
//! Elements are stored as their enumeration index: the coordinate vector
//! `(c_0, .., c_{n-1})` in the power basis of the modulus packs into
//! `c_0 + c_1 p + .. + c_{n-1} p^{n-1}`. The integer `c < p` therefore
//! denotes the same prime-subfield element in every extension of F_p,
//! and `0..q` walks the field in the documented enumeration order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

/// Largest field cardinality any counting call may touch.
pub const MAX_CARDINALITY: u64 = 1 << 62;

/// Character tables are only materialized up to this many elements.
pub const TABLE_LIMIT: u64 = 1 << 28;

// p >= 3 and p^n <= 2^62 bound n by 39.
const MAX_DEGREE: usize = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is even; only odd characteristic is supported")]
    EvenCharacteristic(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of size {p}^{n} exceeds the 2^62 cardinality limit")]
    TooLarge { p: u64, n: u32 },
    #[error("modulus must be monic of degree {0} with coefficients below p")]
    BadModulus(u32),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("a prime field takes no modulus")]
    UnexpectedModulus,
    #[error("cannot parse field spec `{0}`")]
    Parse(String),
    #[error("operands belong to different fields ({0} vs {1})")]
    Mismatch(String, String),
    #[error("zero has no inverse")]
    DivisionByZero,
    #[error("expected {expected} coordinates, got {got}")]
    BadCoordinates { expected: usize, got: usize },
}

struct Inner {
    p: u64,
    n: u32,
    q: u64,
    /// Ascending, monic, length n + 1. Present exactly when n >= 2.
    modulus: Option<Vec<u64>>,
    chars: OnceLock<Vec<i8>>,
}

/// A validated finite field. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

fn default_fields() -> &'static Mutex<HashMap<(u64, u32), FieldSpec>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), FieldSpec>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl FieldSpec {
    /// Builds F_{p^n}. Without an explicit modulus an extension uses the
    /// lexicographically smallest monic irreducible polynomial of degree n,
    /// coefficients compared from the constant term upward.
    pub fn new(p: u64, n: u32, modulus: Option<&[u64]>) -> Result<Self, FieldError> {
        if p.is_multiple_of(2) {
            return Err(FieldError::EvenCharacteristic(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = checked_pow(p, n)
            .filter(|&q| q <= MAX_CARDINALITY)
            .ok_or(FieldError::TooLarge { p, n })?;
        let modulus = match (n, modulus) {
            (1, None) => None,
            (1, Some(_)) => return Err(FieldError::UnexpectedModulus),
            (_, Some(m)) => {
                if m.len() != n as usize + 1 || m[n as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(FieldError::BadModulus(n));
                }
                if !fp::is_irreducible(m, p) {
                    return Err(FieldError::ReducibleModulus(p));
                }
                Some(m.to_vec())
            }
            (_, None) => {
                let cache = default_fields();
                if let Some(spec) = cache.lock().unwrap().get(&(p, n)) {
                    return Ok(spec.clone());
                }
                let spec = FieldSpec::from_parts(p, n, q, Some(fp::smallest_irreducible(p, n)));
                cache.lock().unwrap().insert((p, n), spec.clone());
                return Ok(spec);
            }
        };
        Ok(FieldSpec::from_parts(p, n, q, modulus))
    }

    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        FieldSpec::new(p, 1, None)
    }

    fn from_parts(p: u64, n: u32, q: u64, modulus: Option<Vec<u64>>) -> Self {
        FieldSpec(Arc::new(Inner { p, n, q, modulus, chars: OnceLock::new() }))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn n(&self) -> u32 {
        self.0.n
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.n == 1
    }

    /// Ascending monic modulus, `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u64]> {
        self.0.modulus.as_deref()
    }

    pub fn same_field(&self, other: &FieldSpec) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.n == other.0.n && self.0.modulus == other.0.modulus)
    }

    pub(crate) fn check_same(&self, other: &FieldSpec) -> Result<(), FieldError> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(FieldError::Mismatch(self.to_string(), other.to_string()))
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElement {
        self.wrap(self.reduce_int(v))
    }

    pub(crate) fn reduce_int(&self, v: i64) -> u64 {
        v.rem_euclid(self.0.p as i64) as u64
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<FieldElement, FieldError> {
        let n = self.0.n as usize;
        if coords.len() != n {
            return Err(FieldError::BadCoordinates { expected: n, got: coords.len() });
        }
        let reduced: Vec<u64> = coords.iter().map(|&c| c % self.0.p).collect();
        Ok(self.wrap(self.encode(&reduced)))
    }

    /// Element at position `index` of the enumeration order.
    pub fn element(&self, index: u64) -> Option<FieldElement> {
        (index < self.0.q).then(|| self.wrap(index))
    }

    /// All q elements, constant coordinate varying fastest.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(move |i| self.wrap(i))
    }

    /// Smallest non-square of the field, in enumeration order.
    pub fn non_square(&self) -> FieldElement {
        let v = (2..self.0.q)
            .find(|&a| self.chi_raw(a) == -1)
            .expect("odd q has non-squares");
        self.wrap(v)
    }

    /// Quadratic character of every element, indexed by enumeration order.
    /// Built once per field by squaring every element.
    pub fn char_table(&self) -> Result<&[i8], FieldError> {
        if self.0.q > TABLE_LIMIT {
            return Err(FieldError::TooLarge { p: self.0.p, n: self.0.n });
        }
        Ok(self.0.chars.get_or_init(|| {
            let q = self.0.q;
            let mut table = vec![-1i8; q as usize];
            table[0] = 0;
            // y and -y share an index half only in prime fields.
            let last = if self.0.n == 1 { (q - 1) / 2 } else { q - 1 };
            for y in 1..=last {
                table[self.mul_raw(y, y) as usize] = 1;
            }
            table
        }))
    }

    pub(crate) fn wrap(&self, value: u64) -> FieldElement {
        FieldElement { spec: self.clone(), value }
    }

    fn decode(&self, mut a: u64, out: &mut [u64; MAX_DEGREE]) {
        let p = self.0.p;
        for c in out.iter_mut().take(self.0.n as usize) {
            *c = a % p;
            a /= p;
        }
    }

    fn encode(&self, coords: &[u64]) -> u64 {
        let p = self.0.p;
        coords.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    pub(crate) fn coords_raw(&self, a: u64) -> Vec<u64> {
        let mut buf = [0u64; MAX_DEGREE];
        self.decode(a, &mut buf);
        buf[..self.0.n as usize].to_vec()
    }

    // Raw arithmetic on packed indices. Callers guarantee operands < q.

    #[inline]
    pub(crate) fn add_raw(&self, a: u64, b: u64) -> u64 {
        let p = self.0.p;
        if self.0.n == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut x, mut y) = ([0u64; MAX_DEGREE], [0u64; MAX_DEGREE]);
        self.decode(a, &mut x);
        self.decode(b, &mut y);
        let n = self.0.n as usize;
        for i in 0..n {
            let s = x[i] + y[i];
            x[i] = if s >= p { s - p } else { s };
        }
        self.encode(&x[..n])
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u64) -> u64 {
        let p = self.0.p;
        if self.0.n == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut x = [0u64; MAX_DEGREE];
        self.decode(a, &mut x);
        let n = self.0.n as usize;
        for c in x.iter_mut().take(n) {
            if *c != 0 {
                *c = p - *c;
            }
        }
        self.encode(&x[..n])
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u64, b: u64) -> u64 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        let p = self.0.p;
        if self.0.n == 1 {
            if p < 1 << 32 {
                return (a * b) % p;
            }
            return ((a as u128 * b as u128) % p as u128) as u64;
        }
        let n = self.0.n as usize;
        let (mut x, mut y) = ([0u64; MAX_DEGREE], [0u64; MAX_DEGREE]);
        self.decode(a, &mut x);
        self.decode(b, &mut y);
        // p < 2^31 whenever n >= 2, so single products fit in u64.
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        let modulus = self.0.modulus.as_deref().expect("extension has a modulus");
        for top in (n..2 * n - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for j in 0..n {
                prod[top - n + j] = (prod[top - n + j] + neg * modulus[j]) % p;
            }
        }
        self.encode(&prod[..n])
    }

    pub(crate) fn pow_raw(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv_raw(&self, a: u64) -> Option<u64> {
        (a != 0).then(|| self.pow_raw(a, self.0.q - 2))
    }

    /// Euler's criterion a^{(q-1)/2}.
    pub(crate) fn chi_raw(&self, a: u64) -> i8 {
        if a == 0 {
            return 0;
        }
        if self.0.q <= TABLE_LIMIT {
            if let Some(table) = self.0.chars.get() {
                return table[a as usize];
            }
        }
        if self.pow_raw(a, (self.0.q - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({self})")
    }
}

/// `p` for prime fields, `p^n:c0,..,cn` otherwise (the modulus is always
/// spelled out so the string round-trips).
impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.modulus {
            None => write!(f, "{}", self.0.p),
            Some(m) => {
                let coeffs: Vec<String> = m.iter().map(u64::to_string).collect();
                write!(f, "{}^{}:{}", self.0.p, self.0.n, coeffs.join(","))
            }
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::Parse(s.to_string());
        let s = s.trim();
        let (size, modulus) = match s.split_once(':') {
            Some((size, m)) => (size, Some(m)),
            None => (s, None),
        };
        let (p, n) = match size.split_once('^') {
            Some((p, n)) => (p.trim(), n.trim().parse::<u32>().map_err(|_| bad())?),
            None => (size.trim(), 1),
        };
        let p = p.parse::<u64>().map_err(|_| bad())?;
        let modulus = modulus
            .map(|m| {
                m.split(',')
                    .map(|c| c.trim().parse::<u64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        FieldSpec::new(p, n, modulus.as_deref())
    }
}

/// An element of a specific [`FieldSpec`].
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    spec: FieldSpec,
    value: u64,
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Position in the field's enumeration order.
    pub fn index(&self) -> u64 {
        self.value
    }

    pub fn coords(&self) -> Vec<u64> {
        self.spec.coords_raw(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn checked_add(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.spec.check_same(&rhs.spec)?;
        Ok(self.spec.wrap(self.spec.add_raw(self.value, rhs.value)))
    }

    pub fn checked_sub(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.spec.check_same(&rhs.spec)?;
        Ok(self.spec.wrap(self.spec.sub_raw(self.value, rhs.value)))
    }

    pub fn checked_mul(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.spec.check_same(&rhs.spec)?;
        Ok(self.spec.wrap(self.spec.mul_raw(self.value, rhs.value)))
    }

    pub fn checked_div(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.checked_mul(&rhs.inv()?)
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        self.spec
            .inv_raw(self.value)
            .map(|v| self.spec.wrap(v))
            .ok_or(FieldError::DivisionByZero)
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.spec.wrap(self.spec.pow_raw(self.value, e))
    }

    /// Quadratic character: 0 at zero, +1 on non-zero squares, -1 otherwise.
    pub fn quad_char(&self) -> i8 {
        if self.value == 0 {
            return 0;
        }
        if self.spec.pow_raw(self.value, (self.spec.q() - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }
}

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        self.spec.wrap(self.spec.neg_raw(self.value))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prime-field elements print as integers; extension elements as a
/// polynomial in the generator `r`.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spec.is_prime_field() {
            return write!(f, "{}", self.value);
        }
        let coords = self.coords();
        let mut terms = Vec::new();
        for (i, &c) in coords.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "r".to_string(),
                (1, c) => format!("{c}r"),
                (i, 1) => format!("r^{i}"),
                (i, c) => format!("{c}r^{i}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

fn checked_pow(base: u64, e: u32) -> Option<u64> {
    (0..e).try_fold(1u64, |acc, _| acc.checked_mul(base))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for
/// every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Dense polynomials over F_p, used only to validate and choose moduli.
mod fp {
    use super::{mul_mod, pow_mod};

    fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
        trim(&mut a);
        let db = b.len() - 1;
        let lead_inv = pow_mod(b[db], p - 2, p);
        while a.len() > db {
            let top = a.len() - 1;
            let c = mul_mod(a[top], lead_inv, p);
            for (j, &bj) in b.iter().enumerate() {
                let idx = top - db + j;
                a[idx] = (a[idx] + p - mul_mod(c, bj, p)) % p;
            }
            trim(&mut a);
        }
        a
    }

    fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        rem(prod, m, p)
    }

    fn pow_rem(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut base = rem(base.to_vec(), m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_rem(&acc, &base, m, p);
            }
            base = mul_rem(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or: monic f of degree n is irreducible iff
    /// gcd(x^{p^i} - x, f) = 1 for every i <= n/2.
    pub(super) fn is_irreducible(f: &[u64], p: u64) -> bool {
        let n = f.len() - 1;
        let mut h = vec![0u64, 1];
        for _ in 0..n / 2 {
            h = pow_rem(&h, p, f, p);
            let mut diff = h.clone();
            if diff.len() < 2 {
                diff.resize(2, 0);
            }
            diff[1] = (diff[1] + p - 1) % p;
            if gcd(f.to_vec(), diff, p).len() > 1 {
                return false;
            }
        }
        true
    }

    pub(super) fn smallest_irreducible(p: u64, n: u32) -> Vec<u64> {
        let n = n as usize;
        let mut coeffs = vec![0u64; n + 1];
        coeffs[n] = 1;
        // Odometer over (c_0, .., c_{n-1}) with c_0 most significant.
        loop {
            if coeffs[0] != 0 && is_irreducible(&coeffs, p) {
                return coeffs;
            }
            let mut i = n - 1;
            loop {
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                assert!(i > 0, "irreducible polynomials exist in every degree");
                i -= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f25() -> FieldSpec {
        FieldSpec::new(5, 2, Some(&[1, 1, 1])).unwrap()
    }

    #[test]
    fn make_field_examples() {
        let f17 = FieldSpec::new(17, 1, None).unwrap();
        assert_eq!(f17.q(), 17);
        assert!(f17.modulus().is_none());
        assert_eq!(f25().q(), 25);
        assert_eq!(f25().modulus(), Some(&[1, 1, 1][..]));
        // x^2 + 1 = (x + 2)(x + 3) over F_5.
        assert_eq!(FieldSpec::new(5, 2, Some(&[1, 0, 1])), Err(FieldError::ReducibleModulus(5)));
        // x^2 + 2 has no root mod 5, so it is accepted.
        assert!(FieldSpec::new(5, 2, Some(&[2, 0, 1])).is_ok());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldSpec::prime(4), Err(FieldError::EvenCharacteristic(4)));
        assert_eq!(FieldSpec::prime(2), Err(FieldError::EvenCharacteristic(2)));
        assert_eq!(FieldSpec::prime(15), Err(FieldError::NotPrime(15)));
        assert_eq!(FieldSpec::prime(1), Err(FieldError::NotPrime(1)));
        assert_eq!(FieldSpec::new(5, 0, None), Err(FieldError::ZeroDegree));
        assert_eq!(FieldSpec::new(5, 2, Some(&[1, 1, 2])), Err(FieldError::BadModulus(2)));
        assert_eq!(FieldSpec::new(5, 2, Some(&[1, 1])), Err(FieldError::BadModulus(2)));
        assert!(matches!(FieldSpec::new(3, 40, None), Err(FieldError::TooLarge { .. })));
    }

    #[test]
    fn default_modulus_is_smallest_irreducible() {
        // x^2 + 1 splits mod 5, x^2 + x + 1 does not.
        assert_eq!(FieldSpec::new(5, 2, None).unwrap().modulus(), Some(&[1, 1, 1][..]));
        // -1 is a non-square mod 3.
        assert_eq!(FieldSpec::new(3, 2, None).unwrap().modulus(), Some(&[1, 0, 1][..]));
        // (c0, c1, c2) = (1, 0, 0) is x^3 + 1, divisible by x + 1; next comes
        // x^3 + x^2 + 1, which has no root mod 7.
        assert_eq!(FieldSpec::new(7, 3, None).unwrap().modulus(), Some(&[1, 0, 1, 1][..]));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("17".parse::<FieldSpec>().unwrap().q(), 17);
        let f = "13^2".parse::<FieldSpec>().unwrap();
        assert_eq!(f.q(), 169);
        let g = "5^2:1,1,1".parse::<FieldSpec>().unwrap();
        assert_eq!(g, f25());
        assert_eq!(g.to_string(), "5^2:1,1,1");
        assert_eq!(g.to_string().parse::<FieldSpec>().unwrap(), g);
        assert!(matches!("x".parse::<FieldSpec>(), Err(FieldError::Parse(_))));
        assert!(matches!("5^".parse::<FieldSpec>(), Err(FieldError::Parse(_))));
        assert_eq!("4".parse::<FieldSpec>(), Err(FieldError::EvenCharacteristic(4)));
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.one().inv().unwrap(), f5.one());
        assert_eq!(f5.from_int(2).checked_mul(&f5.from_int(3)).unwrap(), f5.one());
        let f = f25();
        let r = f.from_coords(&[0, 1]).unwrap();
        assert_eq!(r.checked_mul(&r).unwrap().coords(), vec![4, 4]);
        assert_eq!(f.zero().inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = FieldSpec::prime(5).unwrap().one();
        let b = FieldSpec::prime(7).unwrap().one();
        assert!(matches!(a.checked_add(&b), Err(FieldError::Mismatch(..))));
        assert!(matches!(a.checked_mul(&b), Err(FieldError::Mismatch(..))));
    }

    #[test]
    fn quad_char_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.zero().quad_char(), 0);
        assert_eq!(f5.one().quad_char(), 1);
        assert_eq!(f5.from_int(2).quad_char(), -1);
    }

    #[test]
    fn element_enumeration() {
        let f3 = FieldSpec::prime(3).unwrap();
        let idx: Vec<u64> = f3.elements().map(|e| e.index()).collect();
        assert_eq!(idx, vec![0, 1, 2]);
        let f = f25();
        let all: Vec<_> = f.elements().collect();
        assert_eq!(all.len(), 25);
        assert!(all[0].is_zero());
        assert_eq!(all[1].coords(), vec![1, 0]);
        assert_eq!(all[5].coords(), vec![0, 1]);
    }

    #[test]
    fn char_table_f5() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.char_table().unwrap(), &[0, 1, -1, -1, 1]);
    }

    #[test]
    fn field_laws_exhaustive_small() {
        for spec in ["3", "5", "7", "3^2", "5^2", "3^3", "7^2", "5^2:2,0,1"] {
            let f: FieldSpec = spec.parse().unwrap();
            let q = f.q();
            let table = f.char_table().unwrap().to_vec();
            assert_eq!(table.iter().filter(|&&c| c == 1).count() as u64, (q - 1) / 2);
            assert_eq!(table.iter().filter(|&&c| c == -1).count() as u64, (q - 1) / 2);
            assert_eq!(table.iter().map(|&c| c as i64).sum::<i64>(), 0);
            for a in f.elements() {
                assert_eq!(a.pow(q), a, "Frobenius in {spec}");
                assert_eq!(a.quad_char(), table[a.index() as usize]);
                if !a.is_zero() {
                    assert_eq!(a.inv().unwrap().checked_mul(&a).unwrap(), f.one());
                    for b in f.elements().filter(|b| !b.is_zero()) {
                        let ab = a.checked_mul(&b).unwrap();
                        assert_eq!(ab.quad_char(), a.quad_char() * b.quad_char());
                    }
                }
            }
        }
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(4_611_686_018_427_387_847));
        assert!(!is_prime(3_215_031_751));
    }
}
