//! Dense univariate polynomials over a [`FieldSpec`].

use std::fmt;

use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("subset must be non-empty and within 1..={0}")]
    BadSubset(usize),
    #[error("cannot parse polynomial `{0}`")]
    Parse(String),
    #[error("lifting needs a prime base field and a target of the same characteristic")]
    BadLift,
}

/// Polynomial with ascending coefficients, constant term first. The
/// coefficient vector never ends in zero; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    spec: FieldSpec,
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(spec: &FieldSpec, coeffs: &[FieldElement]) -> Result<Self, PolyError> {
        let mut raw = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            spec.check_same(c.spec())?;
            raw.push(c.index());
        }
        Ok(Poly::from_raw(spec, raw))
    }

    /// Coefficients from integers reduced into the prime subfield.
    pub fn from_ints(spec: &FieldSpec, coeffs: &[i64]) -> Self {
        Poly::from_raw(spec, coeffs.iter().map(|&c| spec.reduce_int(c)).collect())
    }

    pub(crate) fn from_raw(spec: &FieldSpec, mut coeffs: Vec<u64>) -> Self {
        trim(&mut coeffs);
        Poly { spec: spec.clone(), coeffs }
    }

    pub fn zero(spec: &FieldSpec) -> Self {
        Poly::from_raw(spec, Vec::new())
    }

    pub fn one(spec: &FieldSpec) -> Self {
        Poly::from_raw(spec, vec![1])
    }

    /// The monomial x.
    pub fn x(spec: &FieldSpec) -> Self {
        Poly::from_raw(spec, vec![0, 1])
    }

    /// Parses the comma-separated coefficient format, constant term first.
    /// Each coefficient is an integer (reduced mod p) or a bracketed
    /// coordinate vector `[c0,c1,..]` for extension fields.
    pub fn parse(spec: &FieldSpec, text: &str) -> Result<Self, PolyError> {
        let bad = || PolyError::Parse(text.to_string());
        let mut coeffs = Vec::new();
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(bad());
        }
        while !rest.is_empty() {
            let (token, tail) = if rest.starts_with('[') {
                let close = rest.find(']').ok_or_else(bad)?;
                (&rest[..=close], &rest[close + 1..])
            } else {
                match rest.find(',') {
                    Some(i) => (&rest[..i], &rest[i..]),
                    None => (rest, ""),
                }
            };
            let token = token.trim();
            let value = if let Some(inner) = token.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                let coords = inner
                    .split(',')
                    .map(|c| c.trim().parse::<u64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?;
                spec.from_coords(&coords).map_err(|_| bad())?.index()
            } else {
                spec.reduce_int(token.parse::<i64>().map_err(|_| bad())?)
            };
            coeffs.push(value);
            let tail = tail.trim_start();
            rest = match tail.strip_prefix(',') {
                Some(t) => {
                    if t.trim().is_empty() {
                        return Err(bad());
                    }
                    t.trim_start()
                }
                None if tail.is_empty() => "",
                None => return Err(bad()),
            };
        }
        Ok(Poly::from_raw(spec, coeffs))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub(crate) fn raw(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coefficients(&self) -> Vec<FieldElement> {
        self.coeffs.iter().map(|&c| self.spec.wrap(c)).collect()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.spec.wrap(self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<FieldElement> {
        self.coeffs.last().map(|&c| self.spec.wrap(c))
    }

    pub fn eval(&self, x: &FieldElement) -> Result<FieldElement, PolyError> {
        self.spec.check_same(x.spec())?;
        Ok(self.spec.wrap(self.eval_raw(x.index())))
    }

    /// Horner evaluation on packed field values.
    #[inline]
    pub(crate) fn eval_raw(&self, x: u64) -> u64 {
        eval_slice(&self.spec, &self.coeffs, x)
    }

    pub fn derivative(&self) -> Poly {
        let p = self.spec.p();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.spec.mul_raw(c, (i as u64) % p))
            .collect();
        Poly::from_raw(&self.spec, coeffs)
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.spec.check_same(&other.spec)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                self.spec.add_raw(a, b)
            })
            .collect();
        Ok(Poly::from_raw(&self.spec, coeffs))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let coeffs = self.coeffs.iter().map(|&c| self.spec.neg_raw(c)).collect();
        Poly::from_raw(&self.spec, coeffs)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.spec.check_same(&other.spec)?;
        let mut out = Vec::new();
        mul_slices(&self.spec, &self.coeffs, &other.coeffs, &mut out);
        Ok(Poly::from_raw(&self.spec, out))
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Poly, PolyError> {
        self.spec.check_same(c.spec())?;
        let coeffs = self.coeffs.iter().map(|&a| self.spec.mul_raw(a, c.index())).collect();
        Ok(Poly::from_raw(&self.spec, coeffs))
    }

    /// Scaled to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lc) => {
                let inv = self.spec.inv_raw(lc).expect("leading coefficient is non-zero");
                let coeffs = self.coeffs.iter().map(|&a| self.spec.mul_raw(a, inv)).collect();
                Poly::from_raw(&self.spec, coeffs)
            }
        }
    }

    /// Euclidean division: `self = quot * divisor + rem` with deg rem < deg divisor.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        self.spec.check_same(&divisor.spec)?;
        let db = divisor.degree().ok_or(PolyError::ZeroPolynomial)?;
        let spec = &self.spec;
        let lead_inv = spec.inv_raw(divisor.coeffs[db]).expect("non-zero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len().saturating_sub(db)];
        while rem.len() > db {
            let top = rem.len() - 1;
            let c = spec.mul_raw(rem[top], lead_inv);
            quot[top - db] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let idx = top - db + j;
                rem[idx] = spec.sub_raw(rem[idx], spec.mul_raw(c, b));
            }
            trim(&mut rem);
        }
        Ok((Poly::from_raw(spec, quot), Poly::from_raw(spec, rem)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.spec.check_same(&other.spec)?;
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::BothZero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// True iff gcd(f, f') is constant.
    pub fn is_separable(&self) -> Result<bool, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(self.gcd(&self.derivative())?.degree() == Some(0))
    }

    /// Product of the polynomials whose 1-based positions lie in `subset`.
    pub fn subset_product(fs: &[Poly], subset: &[usize]) -> Result<Poly, PolyError> {
        let k = fs.len();
        if subset.is_empty() || subset.iter().any(|&i| i == 0 || i > k) {
            return Err(PolyError::BadSubset(k));
        }
        let mut acc = fs[subset[0] - 1].clone();
        for &i in &subset[1..] {
            acc = acc.checked_mul(&fs[i - 1])?;
        }
        Ok(acc)
    }

    /// Same polynomial read over an extension of its prime base field.
    pub fn lift(&self, ext: &FieldSpec) -> Result<Poly, PolyError> {
        if !self.spec.is_prime_field() || ext.p() != self.spec.p() {
            return Err(PolyError::BadLift);
        }
        // Prime-subfield values keep their packed index under the embedding.
        Ok(Poly::from_raw(ext, self.coeffs.clone()))
    }

    /// Coefficient list in the CLI text format.
    pub fn to_coeff_string(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|&c| {
                if self.spec.is_prime_field() {
                    c.to_string()
                } else {
                    let coords: Vec<String> =
                        self.spec.coords_raw(c).iter().map(u64::to_string).collect();
                    format!("[{}]", coords.join(","))
                }
            })
            .collect();
        parts.join(",")
    }
}

/// Human form, e.g. `x^4 + x^3 + 16x^2 + 15x + 1`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let elem = self.spec.wrap(c).to_string();
            let coeff = if elem.contains(' ') { format!("({elem})") } else { elem };
            let term = match (i, c) {
                (0, _) => coeff,
                (1, 1) => "x".to_string(),
                (1, _) => format!("{coeff}x"),
                (_, 1) => format!("x^{i}"),
                _ => format!("{coeff}x^{i}"),
            };
            terms.push(term);
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.spec, self)
    }
}

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

#[inline]
pub(crate) fn eval_slice(spec: &FieldSpec, coeffs: &[u64], x: u64) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0, |acc, &c| spec.add_raw(spec.mul_raw(acc, x), c))
}

/// Schoolbook product into `out` (cleared first, capacity reused).
pub(crate) fn mul_slices(spec: &FieldSpec, a: &[u64], b: &[u64], out: &mut Vec<u64>) {
    out.clear();
    if a.is_empty() || b.is_empty() {
        return;
    }
    out.resize(a.len() + b.len() - 1, 0);
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = spec.add_raw(out[i + j], spec.mul_raw(x, y));
        }
    }
    trim(out);
}

/// Degree of gcd(a, b) via in-place Euclid; both buffers are clobbered.
/// Inputs must be trimmed and not both empty.
pub(crate) fn gcd_degree_in_place(spec: &FieldSpec, a: &mut Vec<u64>, b: &mut Vec<u64>) -> usize {
    loop {
        if b.is_empty() {
            return a.len() - 1;
        }
        // a <- a mod b
        let db = b.len() - 1;
        let lead_inv = spec.inv_raw(b[db]).expect("trimmed");
        while a.len() > db {
            let top = a.len() - 1;
            let c = spec.mul_raw(a[top], lead_inv);
            for (j, &bj) in b.iter().enumerate() {
                let idx = top - db + j;
                a[idx] = spec.sub_raw(a[idx], spec.mul_raw(c, bj));
            }
            trim(a);
        }
        std::mem::swap(a, b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f17 = f(17);
        let g = Poly::parse(&f17, "1,15,16,1,1").unwrap();
        assert_eq!(g.eval(&f17.zero()).unwrap(), f17.one());
        assert_eq!(Poly::zero(&f17).eval(&f17.from_int(7)).unwrap(), f17.zero());
        let f5 = f(5);
        let h = Poly::from_ints(&f5, &[0, 1, 0, 1]);
        assert!(h.eval(&f5.from_int(2)).unwrap().is_zero());
        assert!(h.eval(&f17.one()).is_err());
    }

    #[test]
    fn derivative_examples() {
        let f5 = f(5);
        assert!(Poly::from_ints(&f5, &[3]).derivative().is_zero());
        assert!(Poly::from_ints(&f5, &[0, 0, 0, 0, 0, 1]).derivative().is_zero());
        assert_eq!(Poly::from_ints(&f5, &[1, 1, 1]).derivative(), Poly::from_ints(&f5, &[1, 2]));
    }

    #[test]
    fn gcd_examples() {
        let f5 = f(5);
        let g = Poly::from_ints(&f5, &[2, 0, 3]);
        assert_eq!(g.gcd(&Poly::zero(&f5)).unwrap(), g.monic());
        let a = Poly::from_ints(&f5, &[-1, 0, 1]);
        let b = Poly::from_ints(&f5, &[-1, 1]);
        assert_eq!(a.gcd(&b).unwrap(), Poly::from_ints(&f5, &[4, 1]));
        let c = Poly::from_ints(&f5, &[1, 1]);
        assert_eq!(c.gcd(&b).unwrap(), Poly::one(&f5));
        assert_eq!(Poly::zero(&f5).gcd(&Poly::zero(&f5)), Err(PolyError::BothZero));
    }

    #[test]
    fn subset_product_examples() {
        let f5 = f(5);
        let fs = [Poly::from_ints(&f5, &[0, 1]), Poly::from_ints(&f5, &[1, 1])];
        assert_eq!(Poly::subset_product(&fs, &[1]).unwrap(), fs[0]);
        assert_eq!(Poly::subset_product(&fs, &[1, 2]).unwrap(), Poly::from_ints(&f5, &[0, 1, 1]));
        assert_eq!(Poly::subset_product(&fs, &[]), Err(PolyError::BadSubset(2)));
        assert_eq!(Poly::subset_product(&fs, &[3]), Err(PolyError::BadSubset(2)));
    }

    #[test]
    fn separability_examples() {
        let f5 = f(5);
        // x^2 + 1 = (x + 2)(x + 3) over F_5: distinct roots.
        assert!(Poly::from_ints(&f5, &[1, 0, 1]).is_separable().unwrap());
        // (x + 4)^2 has the double root 1.
        assert!(!Poly::from_ints(&f5, &[1, 3, 1]).is_separable().unwrap());
        assert!(Poly::x(&f5).is_separable().unwrap());
        let f17 = f(17);
        let a = Poly::parse(&f17, "1,15,16,1,1").unwrap();
        let b = Poly::parse(&f17, "15,0,16,13,1").unwrap();
        assert!(a.checked_mul(&b).unwrap().is_separable().unwrap());
        assert_eq!(Poly::zero(&f5).is_separable(), Err(PolyError::ZeroPolynomial));
        // x^p has zero derivative.
        assert!(!Poly::from_ints(&f5, &[0, 0, 0, 0, 0, 1]).is_separable().unwrap());
    }

    #[test]
    fn leading_coeff_and_degree() {
        let f23 = f(23);
        let g = Poly::parse(&f23, "11,1,0,1").unwrap();
        assert_eq!(g.leading_coeff().unwrap(), f23.one());
        assert_eq!(Poly::parse(&f23, "1,2,3,4,1").unwrap().degree(), Some(4));
        let f5 = f(5);
        assert_eq!(Poly::from_ints(&f5, &[1, 0, 3]).leading_coeff().unwrap(), f5.from_int(3));
        assert_eq!(Poly::zero(&f5).degree(), None);
        assert_eq!(Poly::zero(&f5).leading_coeff(), None);
    }

    #[test]
    fn parse_and_print() {
        let f17 = f(17);
        let g = Poly::parse(&f17, "1,15,16,1,1").unwrap();
        assert_eq!(g.to_string(), "x^4 + x^3 + 16x^2 + 15x + 1");
        assert_eq!(g.to_coeff_string(), "1,15,16,1,1");
        assert_eq!(Poly::parse(&f17, "1, -2").unwrap(), Poly::from_ints(&f17, &[1, 15]));
        for bad in ["", "1,,2", "a", "1,", "[1,2"] {
            assert!(Poly::parse(&f17, bad).is_err(), "{bad}");
        }
        let f25: FieldSpec = "5^2:1,1,1".parse().unwrap();
        let h = Poly::parse(&f25, "0,[0,1],1,0,1").unwrap();
        assert_eq!(h.to_coeff_string(), "[0,0],[0,1],[1,0],[0,0],[1,0]");
        assert_eq!(Poly::parse(&f25, &h.to_coeff_string()).unwrap(), h);
        assert_eq!(h.to_string(), "x^4 + x^2 + rx");
        assert!(Poly::parse(&f25, "[1,2,3]").is_err());
    }

    #[test]
    fn div_rem_reconstructs() {
        let f7 = f(7);
        let a = Poly::from_ints(&f7, &[3, 1, 4, 1, 5, 2]);
        let b = Poly::from_ints(&f7, &[6, 0, 2]);
        let (quot, rem) = a.div_rem(&b).unwrap();
        assert!(rem.degree().is_none_or(|d| d < 2));
        assert_eq!(quot.checked_mul(&b).unwrap().checked_add(&rem).unwrap(), a);
    }

    #[test]
    fn lift_requires_prime_base() {
        let f5 = f(5);
        let f25: FieldSpec = "5^2".parse().unwrap();
        let g = Poly::from_ints(&f5, &[1, 2, 3]);
        let lifted = g.lift(&f25).unwrap();
        assert_eq!(lifted.spec(), &f25);
        assert_eq!(lifted.eval(&f25.from_int(2)).unwrap(), f25.from_int(2));
        assert_eq!(lifted.lift(&f25), Err(PolyError::BadLift));
        assert_eq!(g.lift(&f(7)), Err(PolyError::BadLift));
    }
}
