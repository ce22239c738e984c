//! Deterministic table emission.
//!
//! CSV carries `#`-prefixed metadata lines (the resolved run parameters),
//! then a header row, then data rows with floats printed as `{:.16e}` —
//! 17 significant digits, enough to round-trip any double exactly. JSON
//! mirrors the same table as one object. No timestamps anywhere: two runs
//! of the same spec produce identical bytes.

use std::io::{self, Write};

use serde_json::json;

/// One table cell.
#[derive(Clone, Debug)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Text(v) => v.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => json!(v),
            // NaN (an absent value, e.g. a pole angle that does not exist)
            // has no JSON number; it becomes null.
            Cell::Num(v) => json!(v),
            Cell::Text(v) => json!(v),
        }
    }
}

/// A finished result table: metadata echo, column names, rows.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        for (key, value) in &self.metadata {
            writeln!(w, "# {key} = {value}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.columns.len());
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn write_json(&self, w: &mut dyn Write) -> io::Result<()> {
        let metadata: serde_json::Map<String, serde_json::Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), json!(v)))
            .collect();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| serde_json::Value::Array(row.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({
            "metadata": metadata,
            "columns": self.columns,
            "rows": rows,
        });
        writeln!(w, "{doc:#}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        Table {
            metadata: vec![("command".into(), "simulate".into())],
            columns: vec!["x", "mu"],
            rows: vec![
                vec![Cell::Int(-1), Cell::Num(0.25)],
                vec![Cell::Int(1), Cell::Num(0.75)],
            ],
        }
    }

    #[test]
    fn csv_has_metadata_header_and_full_precision() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# command = simulate");
        assert_eq!(lines[1], "x,mu");
        assert_eq!(lines[2], "-1,2.5000000000000000e-1");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn seventeen_digits_round_trip() {
        let value = std::f64::consts::PI / 3.0;
        let printed = format!("{value:.16e}");
        let back: f64 = printed.parse().unwrap();
        assert_eq!(back, value);
    }

    #[test]
    fn json_mirrors_the_table() {
        let mut buf = Vec::new();
        sample().write_json(&mut buf).unwrap();
        let doc: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(doc["metadata"]["command"], "simulate");
        assert_eq!(doc["columns"][1], "mu");
        assert_eq!(doc["rows"][1][0], 1);
    }

    #[test]
    fn absent_numbers_become_null_in_json() {
        let table = Table {
            metadata: vec![],
            columns: vec!["gamma"],
            rows: vec![vec![Cell::Num(f64::NAN)]],
        };
        let mut buf = Vec::new();
        table.write_json(&mut buf).unwrap();
        let doc: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert!(doc["rows"][0][0].is_null());
    }
}
