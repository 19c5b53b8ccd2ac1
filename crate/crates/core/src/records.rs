//! Known N_q(g) intervals read from a CSV table with header
//! `g,q,lower,upper,source`. An empty `lower` means no lower bound is
//! listed.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldSpec;

#[derive(Debug, Error)]
pub enum RecordsError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("records table has no header `g,q,lower,upper,source`")]
    Header,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecordRow {
    pub g: u64,
    pub q_spec: String,
    pub q: u64,
    pub lower: Option<u64>,
    pub upper: u64,
    pub source: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RecordsTable {
    pub rows: Vec<RecordRow>,
}

#[derive(Deserialize)]
struct RawRow {
    g: u64,
    q: String,
    lower: Option<u64>,
    upper: u64,
    source: String,
}

impl RecordsTable {
    pub fn from_reader<R: std::io::Read>(reader: R) -> Result<Self, RecordsError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers().map_err(|_| RecordsError::Header)?;
        if header.iter().collect::<Vec<_>>() != ["g", "q", "lower", "upper", "source"] {
            return Err(RecordsError::Header);
        }
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| RecordsError::Row {
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line());
            let bad = |message: String| RecordsError::Row { line, message };
            let raw: RawRow = rec.deserialize(None).map_err(|e| bad(e.to_string()))?;
            let spec: FieldSpec = raw.q.parse().map_err(|e| bad(format!("{e}")))?;
            if raw.lower.is_some_and(|l| l > raw.upper) {
                return Err(bad(format!("lower bound above upper bound {}", raw.upper)));
            }
            rows.push(RecordRow {
                g: raw.g,
                q_spec: raw.q,
                q: spec.q(),
                lower: raw.lower,
                upper: raw.upper,
                source: raw.source,
            });
        }
        Ok(RecordsTable { rows })
    }

    /// Bounds depend on q and g only, not on the chosen modulus.
    pub fn lookup(&self, q: u64, g: u64) -> Option<&RecordRow> {
        self.rows.iter().find(|r| r.q == q && r.g == g)
    }
}

pub fn ingest_records(path: impl AsRef<Path>) -> Result<RecordsTable, RecordsError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| RecordsError::Io {
        path: path.display().to_string(),
        source,
    })?;
    RecordsTable::from_reader(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RecordsTable, RecordsError> {
        RecordsTable::from_reader(text.as_bytes())
    }

    #[test]
    fn rows_with_and_without_lower() {
        let t = parse(
            "g,q,lower,upper,source\n5,17,,53,table1-old\n5,89,136,180,table1-old\n6,23,60,78,table1-old\n5,13^2,232,300,x\n",
        )
        .unwrap();
        assert_eq!(t.rows[0].lower, None);
        assert_eq!(t.rows[0].upper, 53);
        assert_eq!((t.rows[1].lower, t.rows[1].upper), (Some(136), 180));
        assert_eq!(t.lookup(23, 6).unwrap().lower, Some(60));
        assert_eq!(t.lookup(169, 5).unwrap().upper, 300);
        assert!(t.lookup(17, 6).is_none());
    }

    #[test]
    fn malformed_rows_carry_line_numbers() {
        let err = parse("g,q,lower,upper,source\n5,17,,53,a\n5,18,,53,b\n").unwrap_err();
        assert!(matches!(err, RecordsError::Row { line: 3, .. }), "{err}");
        let err = parse("g,q,lower,upper,source\n5,17,60,53,a\n").unwrap_err();
        assert!(matches!(err, RecordsError::Row { line: 2, .. }));
        let err = parse("g,q,lower,upper,source\n5,17,x,53,a\n").unwrap_err();
        assert!(matches!(err, RecordsError::Row { line: 2, .. }));
        assert!(matches!(parse("a,b\n1,2\n"), Err(RecordsError::Header)));
    }
}
