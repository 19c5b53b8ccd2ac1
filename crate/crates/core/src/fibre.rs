//! Fibre products y_i² = f_i(x), i = 1..k, over a common x-line.
//!
//! Subsets I ⊆ {1..k} are encoded as bitmasks with bit i-1 selecting f_i;
//! every per-subset listing is ordered by mask.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, FieldSpec, MAX_CARDINALITY};
use crate::hyperelliptic::{genus_for_degree, infinity_points, CurveError, HyperellipticCurve, LPolynomial};
use crate::kernel::subset_char_sums;
use crate::poly::{eval_slice, Poly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("a curve system needs at least one polynomial")]
    Empty,
    #[error("f_{0} is constant")]
    Constant(usize),
    #[error("the product f_1···f_k is not separable")]
    Inseparable,
    #[error("isogeny verification needs a prime base field")]
    NotPrimeField,
    #[error("q^g exceeds the 2^62 cardinality limit")]
    TooLarge,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Validated tuple (f_1, .., f_k) with separable product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSystem {
    spec: FieldSpec,
    polys: Vec<Poly>,
    degrees: Vec<usize>,
}

impl CurveSystem {
    pub fn new(spec: &FieldSpec, polys: Vec<Poly>) -> Result<Self, SystemError> {
        if polys.is_empty() {
            return Err(SystemError::Empty);
        }
        let mut degrees = Vec::with_capacity(polys.len());
        for (i, f) in polys.iter().enumerate() {
            spec.check_same(f.spec())?;
            match f.degree() {
                None | Some(0) => return Err(SystemError::Constant(i + 1)),
                Some(d) => degrees.push(d),
            }
        }
        let product = Poly::subset_product(&polys, &(1..=polys.len()).collect::<Vec<_>>())?;
        if !product.is_separable()? {
            return Err(SystemError::Inseparable);
        }
        Ok(CurveSystem { spec: spec.clone(), polys, degrees })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn k(&self) -> usize {
        self.polys.len()
    }

    pub fn genus(&self) -> u64 {
        genus_fibre(&self.degrees).expect("non-empty").0
    }

    /// f_I for the subset encoded by `mask`.
    pub fn subset_poly(&self, mask: u64) -> Result<Poly, SystemError> {
        Ok(Poly::subset_product(&self.polys, &mask_members(mask))?)
    }

    fn raw_polys(&self) -> Vec<&[u64]> {
        self.polys.iter().map(Poly::raw).collect()
    }
}

/// 1-based members of the subset encoded by `mask`.
pub fn mask_members(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// Genus g and correction δ_k of the fibre product. For k ≥ 2,
/// g = 2^{k-2}(Σd_i - 4) + 1 + δ_k with δ_k = 2^{k-2} when some d_i is odd;
/// for k = 1 the curve is hyperelliptic and g = ⌊(d_1 - 1)/2⌋, δ = 0.
pub fn genus_fibre(degrees: &[usize]) -> Result<(u64, u64), SystemError> {
    let k = degrees.len();
    match k {
        0 => Err(SystemError::Empty),
        1 => Ok((genus_for_degree(degrees[0]) as u64, 0)),
        _ => {
            let scale = 1i128 << (k - 2);
            let any_odd = degrees.iter().any(|d| d % 2 == 1);
            let delta = if any_odd { scale } else { 0 };
            let total: i128 = degrees.iter().map(|&d| d as i128).sum();
            let g = scale * (total - 4) + 1 + delta;
            Ok((g as u64, delta as u64))
        }
    }
}

/// Geometric points over x = ∞: 2^{k-1} if some d_i is odd, else 2^k.
pub fn geometric_infinity(degrees: &[usize]) -> u64 {
    let k = degrees.len() as u32;
    if degrees.iter().any(|d| d % 2 == 1) {
        1 << (k - 1)
    } else {
        1 << k
    }
}

/// q + 1 + g⌊2√q⌋.
pub fn hws_bound(q: u64, g: u64) -> u64 {
    q + 1 + g * (4 * q as u128).isqrt() as u64
}

/// Data for one subset curve C_I : y² = f_I(x).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetReport {
    #[serde(rename = "bitmask")]
    pub mask: u64,
    pub subset: Vec<usize>,
    #[serde(rename = "d")]
    pub degree: usize,
    #[serde(rename = "g")]
    pub genus: usize,
    pub affine: u64,
    pub infinity: u64,
    #[serde(rename = "A")]
    pub a: i64,
}

/// One report per non-empty subset, from a single pass of character sums.
pub fn subset_reports(sys: &CurveSystem) -> Vec<SubsetReport> {
    let spec = &sys.spec;
    let q = spec.q() as i64;
    let sums = subset_char_sums(spec, &sys.raw_polys());
    (1..1u64 << sys.k())
        .map(|mask| {
            let subset = mask_members(mask);
            let degree: usize = subset.iter().map(|&i| sys.degrees[i - 1]).sum();
            let lead = subset
                .iter()
                .fold(1, |acc, &i| spec.mul_raw(acc, *sys.polys[i - 1].raw().last().unwrap()));
            let affine = (q + sums[mask as usize]) as u64;
            let infinity = infinity_points(spec, degree, lead);
            SubsetReport {
                mask,
                subset,
                degree,
                genus: genus_for_degree(degree),
                affine,
                infinity,
                a: q + 1 - (affine + infinity) as i64,
            }
        })
        .collect()
}

/// Σ_x Π_i (1 + χ(f_i(x))): affine points of the fibre product.
pub fn affine_oracle(sys: &CurveSystem) -> u64 {
    affine_product_count(&sys.spec, &sys.raw_polys())
}

fn affine_product_count(spec: &FieldSpec, polys: &[&[u64]]) -> u64 {
    let table = spec.char_table().ok();
    (0..spec.q())
        .map(|x| {
            polys
                .iter()
                .map(|f| {
                    let v = eval_slice(spec, f, x);
                    (1 + table.map_or_else(|| spec.chi_raw(v), |t| t[v as usize])) as u64
                })
                .product::<u64>()
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfinityMethod {
    /// All degrees even: every sign vector is rational iff every lc is a square.
    Direct,
    /// N minus the affine count, range-checked.
    Difference,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalInfinity {
    pub count: u64,
    pub method: InfinityMethod,
}

/// Genus, count and bounds of a fibre product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemReport {
    pub field: String,
    pub polys: Vec<Vec<Coefficient>>,
    pub degrees: Vec<usize>,
    pub genus: u64,
    pub delta_k: u64,
    pub geometric_infinity: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub hws: u64,
    pub subsets: Vec<SubsetReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub affine_oracle: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rational_infinity: Option<RationalInfinity>,
}

/// A JSON coefficient: an integer in a prime field, coordinates otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Int(u64),
    Coords(Vec<u64>),
}

pub(crate) fn coefficient_lists(sys: &CurveSystem) -> Vec<Vec<Coefficient>> {
    sys.polys
        .iter()
        .map(|f| {
            f.coefficients()
                .iter()
                .map(|c| {
                    if sys.spec.is_prime_field() {
                        Coefficient::Int(c.index())
                    } else {
                        Coefficient::Coords(c.coords())
                    }
                })
                .collect()
        })
        .collect()
}

/// N = q + 1 - Σ_I A_I together with every subset report.
pub fn point_count(sys: &CurveSystem) -> SystemReport {
    let subsets = subset_reports(sys);
    let q = sys.spec.q();
    let n = (q as i64 + 1 - subsets.iter().map(|s| s.a).sum::<i64>()) as u64;
    let (genus, delta_k) = genus_fibre(&sys.degrees).expect("non-empty");
    SystemReport {
        field: sys.spec.to_string(),
        polys: coefficient_lists(sys),
        degrees: sys.degrees.clone(),
        genus,
        delta_k,
        geometric_infinity: geometric_infinity(&sys.degrees),
        n,
        hws: hws_bound(q, genus),
        subsets,
        affine_oracle: None,
        rational_infinity: None,
    }
}

/// [`point_count`] with the affine oracle and rational infinity filled in.
pub fn full_report(sys: &CurveSystem) -> Result<SystemReport, SystemError> {
    let mut report = point_count(sys);
    let affine = affine_oracle(sys);
    report.rational_infinity = Some(rational_infinity_from(sys, report.n, affine)?);
    report.affine_oracle = Some(affine);
    if report.n > report.hws {
        return Err(SystemError::Invariant(format!(
            "N = {} exceeds the Hasse-Weil-Serre bound {}",
            report.n, report.hws
        )));
    }
    Ok(report)
}

/// Rational points of C over x = ∞.
pub fn rational_infinity(sys: &CurveSystem) -> Result<RationalInfinity, SystemError> {
    rational_infinity_from(sys, point_count(sys).n, affine_oracle(sys))
}

fn rational_infinity_from(sys: &CurveSystem, n: u64, affine: u64) -> Result<RationalInfinity, SystemError> {
    let spec = &sys.spec;
    if sys.degrees.iter().all(|d| d % 2 == 0) {
        let all_square = sys.polys.iter().all(|f| spec.chi_raw(*f.raw().last().unwrap()) == 1);
        let count = if all_square { 1 << sys.k() } else { 0 };
        return Ok(RationalInfinity { count, method: InfinityMethod::Direct });
    }
    let geometric = geometric_infinity(&sys.degrees);
    match n.checked_sub(affine) {
        Some(count) if count <= geometric => Ok(RationalInfinity { count, method: InfinityMethod::Difference }),
        _ => Err(SystemError::Invariant(format!(
            "N - affine = {} - {} is outside [0, {}]",
            n, affine, geometric
        ))),
    }
}

/// Extension-field comparison for one m in [`verify_isogeny`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsogenyResidual {
    pub m: u32,
    /// q^m + 1 minus the m-th power sum of the product L-polynomial.
    pub predicted: i128,
    /// Affine points of C over F_{q^m}.
    pub affine: u64,
    /// predicted - affine; must land in [0, geometric infinity].
    pub defect: i128,
    pub in_range: bool,
}

/// Each factor's own L-polynomial against its count at m = g_I + 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorCheck {
    pub mask: u64,
    pub genus: usize,
    pub m: u32,
    pub predicted: i128,
    pub counted: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsogenyCheck {
    pub genus: u64,
    pub product: LPolynomial,
    pub factors: Vec<(u64, LPolynomial)>,
    pub residuals: Vec<IsogenyResidual>,
    pub factor_checks: Vec<FactorCheck>,
}

impl IsogenyCheck {
    pub fn passed(&self) -> bool {
        self.product.degree() as u64 == 2 * self.genus
            && self.residuals.iter().all(|r| r.in_range)
            && self.factor_checks.iter().all(|f| f.predicted == f.counted as i128)
    }
}

/// Numerical check that Jac(C) and Π_I Jac(C_I) share their zeta data:
/// the product of subset L-polynomials has degree 2g and predicts the
/// counts of C over F_{q^m}, m = 1..g, up to points at infinity.
pub fn verify_isogeny(sys: &CurveSystem) -> Result<IsogenyCheck, SystemError> {
    let spec = &sys.spec;
    if !spec.is_prime_field() {
        return Err(SystemError::NotPrimeField);
    }
    let q = spec.q();
    let genus = sys.genus();
    (q as u128)
        .checked_pow(genus as u32)
        .filter(|&v| v <= MAX_CARDINALITY as u128)
        .ok_or(SystemError::TooLarge)?;

    let mut product = LPolynomial::one(q);
    let mut factors = Vec::new();
    let mut factor_checks = Vec::new();
    for mask in 1..1u64 << sys.k() {
        let curve = HyperellipticCurve::new(sys.subset_poly(mask)?)?;
        if curve.genus() == 0 {
            continue;
        }
        let l = curve.l_polynomial()?;
        let m = curve.genus() as u32 + 1;
        factor_checks.push(FactorCheck {
            mask,
            genus: curve.genus(),
            m,
            predicted: l.predicted_count(m as usize),
            counted: curve.count_over_extension(m)?,
        });
        product = product.checked_mul(&l)?;
        factors.push((mask, l));
    }

    let geometric = geometric_infinity(&sys.degrees) as i128;
    let sums = product.power_sums(genus as usize);
    let mut residuals = Vec::with_capacity(genus as usize);
    for m in 1..=genus as u32 {
        let ext = FieldSpec::new(spec.p(), m, None)?;
        let lifted = sys
            .polys
            .iter()
            .map(|f| f.lift(&ext))
            .collect::<Result<Vec<_>, _>>()?;
        let raw: Vec<&[u64]> = lifted.iter().map(Poly::raw).collect();
        let affine = affine_product_count(&ext, &raw);
        let predicted = (ext.q() as i128) + 1 - sums[m as usize - 1];
        let defect = predicted - affine as i128;
        residuals.push(IsogenyResidual {
            m,
            predicted,
            affine,
            defect,
            in_range: (0..=geometric).contains(&defect),
        });
    }
    Ok(IsogenyCheck { genus, product, factors, residuals, factor_checks })
}
