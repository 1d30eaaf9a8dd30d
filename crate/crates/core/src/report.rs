//! Tabular experiment output.
//!
//! Exact cells are integers or `n/d` fractions; approximate cells are
//! decimals accompanied by a precision column.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rectangular table of pre-rendered cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// CSV body: header line plus one line per row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Invariant(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("cells are UTF-8"))
    }

    /// CSV with `# key=value` provenance lines ahead of the body.
    pub fn write_csv_with_provenance<W: Write>(&self, out: &mut W, provenance: &[(String, String)]) -> Result<()> {
        let io = |e: std::io::Error| Error::Invariant(e.to_string());
        for (k, v) in provenance {
            writeln!(out, "# {k}={v}").map_err(io)?;
        }
        out.write_all(self.to_csv()?.as_bytes()).map_err(io)
    }

    /// Rows as JSON objects keyed by column name.
    pub fn to_json_records(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(r.iter().map(|c| serde_json::Value::String(c.clone())))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Invariant(format!("csv: {e}"))
}

/// Strips `# ...` provenance lines, leaving the CSV body.
pub fn csv_body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}

/// Serde adapter: rationals as `"n"` or `"n/d"` strings.
pub mod rational_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::arith::{fmt_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: big integers as decimal strings.
pub mod bigint_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rendering() {
        let mut t = Table::new(["X", "sum", "ratio"]);
        t.push(vec!["10".into(), "123".into(), "7/5".into()]);
        let mut buf = Vec::new();
        t.write_csv_with_provenance(&mut buf, &[("tool".into(), "formsums 0.1.0".into())]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "# tool=formsums 0.1.0\nX,sum,ratio\n10,123,7/5\n");
        assert_eq!(csv_body(&text), "X,sum,ratio\n10,123,7/5\n");
        assert_eq!(t.to_json_records()[0]["ratio"], "7/5");
    }
}
