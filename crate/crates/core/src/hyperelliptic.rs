//! Single hyperelliptic curves y² = f(x): point counts, traces and
//! L-polynomials.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::{FieldError, FieldSpec};
use crate::kernel::subset_char_sums;
use crate::poly::{Poly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("curve polynomial must have degree at least 1")]
    Constant,
    #[error("curve polynomial is not separable")]
    Inseparable,
    #[error("extension counting needs a prime base field")]
    NotPrimeField,
    #[error("extension degree must be at least 1")]
    ZeroExtension,
    #[error("genus-0 curve has no non-trivial L-polynomial")]
    GenusZero,
    #[error("need {needed} traces, got {got}")]
    TooFewTraces { needed: usize, got: usize },
    #[error("Newton recursion produced a non-integer coefficient at T^{0}")]
    NonIntegral(usize),
    #[error("L-polynomials over different fields (q = {0} vs {1})")]
    FieldMismatch(u64, u64),
}

/// Genus of y² = f for deg f = `degree` ≥ 1.
pub fn genus_for_degree(degree: usize) -> usize {
    degree.saturating_sub(1) / 2
}

pub fn genus_hyper(f: &Poly) -> Result<usize, CurveError> {
    match f.degree() {
        None | Some(0) => Err(CurveError::Constant),
        Some(d) => Ok(genus_for_degree(d)),
    }
}

/// Smooth model of y² = f(x), f separable of degree ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticCurve {
    f: Poly,
}

impl HyperellipticCurve {
    pub fn new(f: Poly) -> Result<Self, CurveError> {
        genus_hyper(&f)?;
        if !f.is_separable()? {
            return Err(CurveError::Inseparable);
        }
        Ok(HyperellipticCurve { f })
    }

    pub fn poly(&self) -> &Poly {
        &self.f
    }

    pub fn spec(&self) -> &FieldSpec {
        self.f.spec()
    }

    pub fn degree(&self) -> usize {
        self.f.degree().expect("validated non-zero")
    }

    pub fn genus(&self) -> usize {
        genus_for_degree(self.degree())
    }

    /// Affine solutions (x, y) ∈ F_q², i.e. Σ_x (1 + χ(f(x))).
    pub fn affine_count(&self) -> u64 {
        let sums = subset_char_sums(self.spec(), &[self.f.raw()]);
        (self.spec().q() as i64 + sums[1]) as u64
    }

    /// Rational points over x = ∞: one for odd degree, otherwise two or none
    /// by squareness of the leading coefficient.
    pub fn infinity_count(&self) -> u64 {
        infinity_points(self.spec(), self.degree(), *self.f.raw().last().unwrap())
    }

    pub fn point_count(&self) -> u64 {
        self.affine_count() + self.infinity_count()
    }

    /// A = q + 1 - |C(F_q)|.
    pub fn trace_a(&self) -> i64 {
        self.spec().q() as i64 + 1 - self.point_count() as i64
    }

    /// |C(F_{q^m})| with the coefficients read in F_{q^m}. Prime base fields only.
    pub fn count_over_extension(&self, m: u32) -> Result<u64, CurveError> {
        if !self.spec().is_prime_field() {
            return Err(CurveError::NotPrimeField);
        }
        match m {
            0 => Err(CurveError::ZeroExtension),
            1 => Ok(self.point_count()),
            _ => {
                let ext = FieldSpec::new(self.spec().p(), m, None)?;
                let lifted = self.f.lift(&ext)?;
                let sums = subset_char_sums(&ext, &[lifted.raw()]);
                let affine = (ext.q() as i64 + sums[1]) as u64;
                Ok(affine + infinity_points(&ext, self.degree(), *lifted.raw().last().unwrap()))
            }
        }
    }

    /// a_1..a_m with a_j = q^j + 1 - |C(F_{q^j})|.
    pub fn traces(&self, m: u32) -> Result<TraceSequence, CurveError> {
        let q = self.spec().q();
        let mut values = Vec::with_capacity(m as usize);
        for j in 1..=m {
            let qj = FieldSpec::new(self.spec().p(), j, None)?.q();
            values.push(qj as i64 + 1 - self.count_over_extension(j)? as i64);
        }
        Ok(TraceSequence { q, genus: self.genus(), values })
    }

    /// L-polynomial from the counts over F_{q^j}, j ≤ g, via Newton's identities.
    pub fn l_polynomial(&self) -> Result<LPolynomial, CurveError> {
        let g = self.genus();
        if g == 0 {
            return Err(CurveError::GenusZero);
        }
        let traces = self.traces(g as u32)?;
        LPolynomial::from_traces(self.spec().q(), g, &traces.values)
    }
}

pub(crate) fn infinity_points(spec: &FieldSpec, degree: usize, lead: u64) -> u64 {
    if degree % 2 == 1 {
        1
    } else {
        (1 + spec.chi_raw(lead)) as u64
    }
}

/// Frobenius power sums a_j = q^j + 1 - |C(F_{q^j})|, j = 1, 2, ..
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceSequence {
    pub q: u64,
    pub genus: usize,
    pub values: Vec<i64>,
}

impl TraceSequence {
    /// |a_j| ≤ 2g·q^{j/2} for every stored j, checked as a_j² ≤ 4g²q^j.
    pub fn within_weil_bound(&self) -> bool {
        self.values.iter().enumerate().all(|(i, &a)| {
            let qj = (self.q as i128).pow(i as u32 + 1);
            let g = self.genus as i128;
            (a as i128) * (a as i128) <= 4 * g * g * qj
        })
    }
}

/// L(T) = Σ c_i T^i = Π (1 - β_i T), degree 2g, c_0 = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    q: u64,
    coeffs: Vec<i128>,
}

impl LPolynomial {
    /// The empty product, L = 1.
    pub fn one(q: u64) -> Self {
        LPolynomial { q, coeffs: vec![1] }
    }

    /// Builds L from a_1..a_g (extra traces are ignored). The lower half
    /// comes from Newton's identities k·c_k = -Σ_{j=1..k} c_{k-j} a_j in
    /// exact integers; the upper half from c_{2g-i} = q^{g-i} c_i.
    pub fn from_traces(q: u64, genus: usize, traces: &[i64]) -> Result<Self, CurveError> {
        if traces.len() < genus {
            return Err(CurveError::TooFewTraces { needed: genus, got: traces.len() });
        }
        let mut coeffs = vec![0i128; 2 * genus + 1];
        coeffs[0] = 1;
        for k in 1..=genus {
            let num: i128 = -(1..=k).map(|j| coeffs[k - j] * traces[j - 1] as i128).sum::<i128>();
            if num % k as i128 != 0 {
                return Err(CurveError::NonIntegral(k));
            }
            coeffs[k] = num / k as i128;
        }
        for i in 0..genus {
            coeffs[2 * genus - i] = (q as i128).pow((genus - i) as u32) * coeffs[i];
        }
        Ok(LPolynomial { q, coeffs })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Σ β_i^j for j = 1..=m, by running Newton's identities forward.
    pub fn power_sums(&self, m: usize) -> Vec<i128> {
        let c = |i: usize| self.coeffs.get(i).copied().unwrap_or(0);
        let mut sums: Vec<i128> = Vec::with_capacity(m);
        for j in 1..=m {
            let tail: i128 = (1..j).map(|i| c(j - i) * sums[i - 1]).sum();
            sums.push(-(j as i128) * c(j) - tail);
        }
        sums
    }

    /// |C(F_{q^m})| = q^m + 1 - Σ β_i^m.
    pub fn predicted_count(&self, m: usize) -> i128 {
        (self.q as i128).pow(m as u32) + 1 - self.power_sums(m)[m - 1]
    }

    /// L(1), the order of the Jacobian over F_q.
    pub fn jacobian_order(&self) -> i128 {
        self.coeffs.iter().sum()
    }

    pub fn functional_equation_holds(&self) -> bool {
        let g = self.genus();
        (0..=g).all(|i| self.coeffs[2 * g - i] == (self.q as i128).pow((g - i) as u32) * self.coeffs[i])
    }

    /// Power sums 1..=m respect |s_j| ≤ 2g·q^{j/2}.
    pub fn weil_bound_holds(&self, m: usize) -> bool {
        let g = self.genus() as i128;
        self.power_sums(m)
            .iter()
            .enumerate()
            .all(|(i, &s)| s * s <= 4 * g * g * (self.q as i128).pow(i as u32 + 1))
    }

    pub fn checked_mul(&self, other: &LPolynomial) -> Result<LPolynomial, CurveError> {
        if self.q != other.q {
            return Err(CurveError::FieldMismatch(self.q, other.q));
        }
        let mut coeffs = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(LPolynomial { q: self.q, coeffs })
    }
}

/// Serialized as the ascending integer coefficient list.
impl Serialize for LPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}
