//! Output records and their CSV and JSON renderings.

use std::fmt;

use anyhow::Result;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl fmt::Display for Cell {
    // Both f64 renderings are the shortest strings that parse back to the same double.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(v) if *v == 0.0 || !v.is_finite() || (1e-4..1e16).contains(&v.abs()) => write!(f, "{v}"),
            Cell::Num(v) => write!(f, "{v:e}"),
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl Cell {
    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(v) => Value::String(v.to_string()),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerdictLine {
    pub name: String,
    pub verdict: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub verdicts: Vec<VerdictLine>,
}

impl OutputRecord {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        OutputRecord {
            command: command.into(),
            inputs: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Cell>) {
        self.inputs.push((key.into(), value.into()));
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn verdict(&mut self, name: impl Into<String>, verdict: impl Into<String>, pass: bool) {
        self.verdicts.push(VerdictLine { name: name.into(), verdict: verdict.into(), pass });
    }

    /// Pass/fail verdict for a tolerance check.
    pub fn check(&mut self, name: impl Into<String>, pass: bool) {
        self.verdict(name, if pass { "pass" } else { "fail" }, pass);
    }

    pub fn passes(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// Header lines start with `#`; then one header row and the data rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = format!("# schema_version: {SCHEMA_VERSION}\n# command: {}\n", self.command);
        for (k, v) in &self.inputs {
            out.push_str(&format!("# input {k}: {v}\n"));
        }
        for v in &self.verdicts {
            out.push_str(&format!("# verdict {}: {} pass={}\n", v.name, v.verdict, v.pass));
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|c| c.to_string()))?;
        }
        out.push_str(&String::from_utf8(w.into_inner()?)?);
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        let inputs: Map<String, Value> = self.inputs.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect()))
            .collect();
        let verdicts: Vec<Value> =
            self.verdicts.iter().map(|v| json!({"name": v.name, "verdict": v.verdict, "pass": v.pass})).collect();
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": inputs,
            "columns": self.columns,
            "rows": rows,
            "verdicts": verdicts,
        });
        Ok(serde_json::to_string_pretty(&doc)? + "\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OutputRecord {
        let mut r = OutputRecord::new("kernel", &["x", "y", "value"]);
        r.input("z", "0.3");
        r.row(vec![0.5.into(), 1.5.into(), (0.1 + 0.2).into()]);
        r.row(vec![(-0.5).into(), 2.5.into(), 1e-300.into()]);
        r.row(vec![(-0.5).into(), 2.5.into(), (-2.0f64 / 3.0 * 1e20).into()]);
        r.check("finite", true);
        r
    }

    #[test]
    fn csv_numbers_round_trip() {
        let text = sample().to_csv().unwrap();
        let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows[0][2].parse::<f64>().unwrap(), 0.1 + 0.2);
        assert_eq!(rows[1][2].parse::<f64>().unwrap(), 1e-300);
        assert_eq!(&rows[1][2], "1e-300");
        assert_eq!(rows[2][2].parse::<f64>().unwrap(), -2.0f64 / 3.0 * 1e20);
        assert!(text.starts_with("# schema_version: 1\n"));
    }

    #[test]
    fn json_mirrors_rows() {
        let v: Value = serde_json::from_str(&sample().to_json().unwrap()).unwrap();
        assert_eq!(v["rows"][0]["value"].as_f64().unwrap(), 0.1 + 0.2);
        assert_eq!(v["inputs"]["z"], "0.3");
        assert_eq!(v["verdicts"][0]["pass"], true);
        let mut r = sample();
        r.row(vec![0.5.into(), 0.5.into(), f64::NAN.into()]);
        assert!(r.to_json().unwrap().contains("\"NaN\""));
    }
}
