//! Genus and rational-point counts for fibre products of hyperelliptic
//! curves y_i² = f_i(x) over odd-characteristic finite fields, with a
//! record-search harness and reproducible fixtures.
//!
//! The point count of the fibre product decomposes over the 2^k - 1
//! subset curves y² = Π_{i∈I} f_i(x): N = q + 1 - Σ_I A_I, where
//! A_I = q + 1 - |C_I(F_q)|.

pub mod fibre;
pub mod field;
pub mod fixtures;
pub mod hyperelliptic;
mod kernel;
pub mod poly;
pub mod records;
pub mod search;

use thiserror::Error;

pub use fibre::{
    affine_oracle, full_report, genus_fibre, geometric_infinity, hws_bound, point_count,
    rational_infinity, subset_reports, verify_isogeny, CurveSystem, SubsetReport, SystemError,
    SystemReport,
};
pub use field::{FieldElement, FieldError, FieldSpec};
pub use hyperelliptic::{CurveError, HyperellipticCurve, LPolynomial, TraceSequence};
pub use fixtures::{bundled_fixtures, verify_all, verify_row, FixtureError, FixtureRow, RowCheck};
pub use poly::{Poly, PolyError};
pub use records::{ingest_records, RecordsError, RecordsTable};
pub use search::{
    evaluate_candidate, run_search, throughput_probe, CharCache, RecordEntry, SearchConfig,
    SearchError, SearchOutcome, Strategy,
};

/// Any failure surfaced by the library, grouped by the CLI exit code it maps to.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Search(#[from] search::SearchError),
    #[error(transparent)]
    Records(#[from] records::RecordsError),
    #[error(transparent)]
    Fixtures(#[from] fixtures::FixtureError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
}

impl Error {
    /// 2 usage/parse, 3 validation, 4 internal invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Field(_) | Error::Records(_) | Error::Fixtures(_) | Error::Usage(_) => 2,
            Error::Poly(PolyError::Parse(_)) | Error::Poly(PolyError::Field(_)) => 2,
            Error::System(SystemError::Invariant(_)) => 4,
            Error::Search(search::SearchError::Invariant(_)) => 4,
            Error::Search(search::SearchError::Config(_)) => 2,
            Error::Curve(CurveError::NonIntegral(_)) => 4,
            _ => 3,
        }
    }
}
