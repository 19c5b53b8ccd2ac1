//! Published example pairs (f_1, f_2) with their printed A-values and N,
//! recomputed from scratch.
//!
//! A row is internally consistent when its printed values satisfy
//! N = q + 1 - (A_1 + A_2 + A_3). Consistent rows must reproduce exactly;
//! inconsistent rows are recomputed and reported without failing.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fibre::{point_count, CurveSystem};
use crate::field::FieldSpec;
use crate::poly::Poly;

const BUNDLED: &str = include_str!("../data/fixtures.toml");
const BUNDLED_BOUNDS: &str = include_str!("../data/known_bounds.csv");

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("fixtures file: {0}")]
    Parse(String),
    #[error("fixture {label}: {message}")]
    Row { label: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureRow {
    pub label: String,
    pub field: String,
    pub genus: u64,
    pub f1: String,
    pub f2: String,
    pub a: [i64; 3],
    pub n: u64,
    #[serde(default)]
    pub listed_n: Option<u64>,
    pub consistent: bool,
    #[serde(default)]
    pub erratum_f1: Option<String>,
    #[serde(default)]
    pub erratum_f2: Option<String>,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Deserialize)]
struct FixtureFile {
    row: Vec<FixtureRow>,
}

impl FixtureRow {
    fn err(&self, message: impl Into<String>) -> FixtureError {
        FixtureError::Row { label: self.label.clone(), message: message.into() }
    }

    pub fn spec(&self) -> Result<FieldSpec, FixtureError> {
        self.field.parse().map_err(|e| self.err(format!("{e}")))
    }

    fn system_from(&self, f1: &str, f2: &str) -> Result<CurveSystem, FixtureError> {
        let spec = self.spec()?;
        let parse = |s: &str| Poly::parse(&spec, s).map_err(|e| self.err(e.to_string()));
        CurveSystem::new(&spec, vec![parse(f1)?, parse(f2)?]).map_err(|e| self.err(e.to_string()))
    }

    /// The system exactly as printed.
    pub fn system(&self) -> Result<CurveSystem, FixtureError> {
        self.system_from(&self.f1, &self.f2)
    }

    /// The printed system with any recorded coefficient correction applied.
    pub fn erratum_system(&self) -> Result<Option<CurveSystem>, FixtureError> {
        if self.erratum_f1.is_none() && self.erratum_f2.is_none() {
            return Ok(None);
        }
        let f1 = self.erratum_f1.as_deref().unwrap_or(&self.f1);
        let f2 = self.erratum_f2.as_deref().unwrap_or(&self.f2);
        self.system_from(f1, f2).map(Some)
    }

    /// Whether the printed values satisfy N = q + 1 - ΣA.
    pub fn arithmetic_holds(&self) -> Result<bool, FixtureError> {
        let q = self.spec()?.q() as i64;
        Ok(q + 1 - self.a.iter().sum::<i64>() == self.n as i64)
    }
}

/// Parses a fixtures file and checks every `consistent` flag.
pub fn parse_fixtures(text: &str) -> Result<Vec<FixtureRow>, FixtureError> {
    let file: FixtureFile = toml::from_str(text).map_err(|e| FixtureError::Parse(e.to_string()))?;
    for row in &file.row {
        if row.arithmetic_holds()? != row.consistent {
            return Err(row.err(format!(
                "consistent = {} but the printed values say otherwise",
                row.consistent
            )));
        }
    }
    Ok(file.row)
}

pub fn load_fixtures(path: impl AsRef<Path>) -> Result<Vec<FixtureRow>, FixtureError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| FixtureError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_fixtures(&text)
}

pub fn bundled_fixtures() -> Vec<FixtureRow> {
    parse_fixtures(BUNDLED).expect("bundled fixtures are valid")
}

/// Text of the bundled known-bounds CSV.
pub fn bundled_bounds_csv() -> &'static str {
    BUNDLED_BOUNDS
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowOutcome {
    /// Consistent and reproduced exactly.
    Pass,
    /// Consistent but the printed polynomials give other values.
    Fail,
    /// Printed A-values and N disagree with each other.
    Discrepant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowCheck {
    pub label: String,
    pub field: String,
    pub outcome: RowOutcome,
    pub printed_a: [i64; 3],
    pub printed_n: u64,
    pub printed_g: u64,
    pub computed_a: [i64; 3],
    pub computed_n: u64,
    pub computed_g: u64,
    /// Whether the recorded correction reproduces every printed value.
    pub erratum_reproduces: Option<bool>,
}

fn counts(sys: &CurveSystem) -> ([i64; 3], u64, u64) {
    let report = point_count(sys);
    let a = [report.subsets[0].a, report.subsets[1].a, report.subsets[2].a];
    (a, report.n, report.genus)
}

pub fn verify_row(row: &FixtureRow) -> Result<RowCheck, FixtureError> {
    let (computed_a, computed_n, computed_g) = counts(&row.system()?);
    let matches = |a: [i64; 3], n: u64, g: u64| a == row.a && n == row.n && g == row.genus;
    let outcome = if !row.consistent {
        RowOutcome::Discrepant
    } else if matches(computed_a, computed_n, computed_g) {
        RowOutcome::Pass
    } else {
        RowOutcome::Fail
    };
    let erratum_reproduces = row.erratum_system()?.map(|sys| {
        let (a, n, g) = counts(&sys);
        matches(a, n, g)
    });
    Ok(RowCheck {
        label: row.label.clone(),
        field: row.field.clone(),
        outcome,
        printed_a: row.a,
        printed_n: row.n,
        printed_g: row.genus,
        computed_a,
        computed_n,
        computed_g,
        erratum_reproduces,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub rows: Vec<RowCheck>,
}

fn fmt_a(a: [i64; 3]) -> String {
    format!("({},{},{})", a[0], a[1], a[2])
}

fn render_line(tag: &str, r: &RowCheck) -> String {
    format!(
        "{tag} {:<8} field={:<10} printed A={} N={} g={}  computed A={} N={} g={}",
        r.label,
        r.field,
        fmt_a(r.printed_a),
        r.printed_n,
        r.printed_g,
        fmt_a(r.computed_a),
        r.computed_n,
        r.computed_g
    )
}

impl FixtureReport {
    /// True iff every consistent row reproduced.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.outcome != RowOutcome::Fail)
    }

    pub fn discrepant(&self) -> impl Iterator<Item = &RowCheck> {
        self.rows.iter().filter(|r| r.outcome == RowOutcome::Discrepant)
    }

    /// Plain-text table: reproduced and failed rows first, then a
    /// separate section for discrepant rows.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in self.rows.iter().filter(|r| r.outcome != RowOutcome::Discrepant) {
            let tag = if r.outcome == RowOutcome::Pass { "PASS" } else { "FAIL" };
            out += &render_line(tag, r);
            match r.erratum_reproduces {
                Some(true) => out += "  (erratum reproduces)",
                Some(false) => out += "  (erratum does not reproduce)",
                None => {}
            }
            out.push('\n');
        }
        out += "discrepant rows (printed A-values and N disagree):\n";
        for r in self.discrepant() {
            out += &render_line("DISCREPANT", r);
            out.push('\n');
        }
        out
    }

    pub fn failed_labels(&self) -> Vec<&str> {
        self.rows
            .iter()
            .filter(|r| r.outcome == RowOutcome::Fail)
            .map(|r| r.label.as_str())
            .collect()
    }
}

pub fn verify_all(rows: &[FixtureRow]) -> Result<FixtureReport, FixtureError> {
    Ok(FixtureReport { rows: rows.iter().map(verify_row).collect::<Result<_, _>>()? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(label: &str) -> FixtureRow {
        bundled_fixtures().into_iter().find(|r| r.label == label).unwrap()
    }

    #[test]
    fn q17_row_passes() {
        let c = verify_row(&row("g5-q17")).unwrap();
        assert_eq!(c.outcome, RowOutcome::Pass);
        assert_eq!((c.computed_a, c.computed_n, c.computed_g), ([-8, -6, -16], 48, 5));
    }

    #[test]
    fn inconsistent_rows_are_discrepant() {
        for label in ["g5-q79", "g5-q89", "g7-q29"] {
            assert_eq!(verify_row(&row(label)).unwrap().outcome, RowOutcome::Discrepant);
        }
    }

    #[test]
    fn errata_reproduce() {
        for label in ["g5-q61", "g6-q59"] {
            let c = verify_row(&row(label)).unwrap();
            assert_eq!(c.outcome, RowOutcome::Fail);
            assert_eq!(c.erratum_reproduces, Some(true));
        }
    }

    #[test]
    fn bad_flag_is_rejected() {
        let text = BUNDLED.replacen("consistent = true", "consistent = false", 1);
        assert!(matches!(parse_fixtures(&text), Err(FixtureError::Row { .. })));
        assert!(matches!(parse_fixtures("row = 3"), Err(FixtureError::Parse(_))));
    }

    #[test]
    fn bundled_bounds_parse() {
        let t = crate::records::RecordsTable::from_reader(bundled_bounds_csv().as_bytes()).unwrap();
        assert_eq!(t.rows.len(), 28);
        assert_eq!(t.lookup(89, 5).unwrap().lower, Some(136));
    }
}
