//! The `povm/1` JSON document and CSV scan tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, C64};
use crate::povm::Povm;

pub const SCHEMA_VERSION: &str = "povm/1";

/// On-disk POVM: `elements[j][row][col] = [re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmDocument {
    pub schema_version: String,
    pub dim: usize,
    pub elements: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl PovmDocument {
    pub fn from_povm(p: &Povm) -> Self {
        let d = p.dim();
        let elements = p
            .elements()
            .iter()
            .map(|a| (0..d).map(|r| (0..d).map(|c| [a[(r, c)].re, a[(r, c)].im]).collect()).collect())
            .collect();
        Self { schema_version: SCHEMA_VERSION.into(), dim: d, elements, labels: Some(p.labels().to_vec()) }
    }

    pub fn to_povm(&self) -> Result<Povm> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "schema_version: expected \"{SCHEMA_VERSION}\", found \"{}\"",
                self.schema_version
            )));
        }
        let d = self.dim;
        if d == 0 {
            return Err(Error::Parse("dim: must be positive".into()));
        }
        if self.elements.is_empty() {
            return Err(Error::Parse("elements: empty list".into()));
        }
        let mut mats = Vec::with_capacity(self.elements.len());
        for (j, el) in self.elements.iter().enumerate() {
            if el.len() != d {
                return Err(Error::Parse(format!("elements[{j}]: expected {d} rows, found {}", el.len())));
            }
            let mut data = Vec::with_capacity(d * d);
            for (r, row) in el.iter().enumerate() {
                if row.len() != d {
                    return Err(Error::Parse(format!("elements[{j}][{r}]: expected {d} entries, found {}", row.len())));
                }
                for (c, z) in row.iter().enumerate() {
                    if !z[0].is_finite() || !z[1].is_finite() {
                        return Err(Error::Parse(format!("elements[{j}][{r}][{c}]: non-finite number")));
                    }
                    data.push(C64::new(z[0], z[1]));
                }
            }
            mats.push(ComplexMatrix::from_vec(d, data)?);
        }
        if let Some(l) = &self.labels {
            if l.len() != mats.len() {
                return Err(Error::Parse(format!("labels: {} labels for {} elements", l.len(), mats.len())));
            }
        }
        Povm::new(d, mats, self.labels.clone())
    }
}

/// Parses and validates a `povm/1` document.
pub fn parse_povm(text: &str) -> Result<Povm> {
    let doc: PovmDocument = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    doc.to_povm()
}

pub fn povm_to_json(p: &Povm) -> String {
    serde_json::to_string_pretty(&PovmDocument::from_povm(p)).expect("finite POVM serializes")
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
}

impl Cell {
    pub fn as_f64(self) -> f64 {
        match self {
            Cell::Int(i) => i as f64,
            Cell::Real(x) => x,
        }
    }
}

/// Header plus rows, written as comma-separated text with LF endings.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ScanTable {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k].as_f64()).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(i) => i.to_string(),
                    Cell::Real(x) => format_real(*x),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Reads back a table written by [`ScanTable::to_csv`]; every cell is parsed as a real.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header: Vec<String> =
            lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?.split(',').map(String::from).collect();
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|s| s.parse::<f64>().map(Cell::Real).map_err(|e| Error::Parse(format!("row {}: {e}", n + 1))))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != header.len() {
                return Err(Error::Parse(format!("row {}: {} cells for {} columns", n + 1, row.len(), header.len())));
            }
            rows.push(row);
        }
        Ok(Self { header, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{computational_basis, sic_d3};

    #[test]
    fn round_trip() {
        let p = sic_d3(0.3);
        let q = parse_povm(&povm_to_json(&p)).unwrap();
        assert!(p.is_equivalent(&q));
        assert_eq!(q.labels(), p.labels());
    }

    #[test]
    fn diagnostics() {
        let e = parse_povm("{\"schema_version\": \"povm/1\", \"dim\": 2, ").unwrap_err();
        assert!(matches!(e, Error::Parse(m) if m.starts_with("line 1")));
        let bad_rows = r#"{"schema_version":"povm/1","dim":2,"elements":[[[[1,0],[0,0]]]]}"#;
        assert!(matches!(parse_povm(bad_rows), Err(Error::Parse(m)) if m.starts_with("elements[0]")));
        let incomplete = r#"{"schema_version":"povm/1","dim":2,"elements":[[[[1,0],[0,0]],[[0,0],[0,0]]]]}"#;
        assert!(matches!(parse_povm(incomplete), Err(Error::InvalidPovm(_))));
        let huge = r#"{"schema_version":"povm/1","dim":1,"elements":[[[[1e999,0]]]]}"#;
        assert!(parse_povm(huge).is_err());
        let version = povm_to_json(&computational_basis(2)).replace("povm/1", "povm/2");
        assert!(matches!(parse_povm(&version), Err(Error::Parse(m)) if m.starts_with("schema_version")));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let mut t = ScanTable::new(&["d", "x"]);
        t.rows.push(vec![Cell::Int(3), Cell::Real(std::f64::consts::PI / 7.0)]);
        t.rows.push(vec![Cell::Int(4), Cell::Real(1e-300)]);
        let back = ScanTable::parse_csv(&t.to_csv()).unwrap();
        assert_eq!(back.column("x"), t.column("x"));
    }
}
