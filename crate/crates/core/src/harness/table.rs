use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::stats::Estimate;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ColumnData {
    Real(Vec<f64>),
    Integer(Vec<i64>),
    Text(Vec<String>),
}

impl ColumnData {
    fn len(&self) -> usize {
        match self {
            ColumnData::Real(v) => v.len(),
            ColumnData::Integer(v) => v.len(),
            ColumnData::Text(v) => v.len(),
        }
    }

    fn cell(&self, i: usize) -> String {
        match self {
            ColumnData::Real(v) => format!("{:e}", v[i]),
            ColumnData::Integer(v) => v[i].to_string(),
            ColumnData::Text(v) => v[i].clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
    pub data: ColumnData,
}

/// Named columns plus metadata. CSV form: `# key: value` lines (metadata,
/// then `units`), a header row, then the rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub name: String,
    pub columns: Vec<Column>,
    pub metadata: BTreeMap<String, String>,
}

impl ResultTable {
    pub fn new(name: &str, config_hash: &str) -> Self {
        let mut metadata = BTreeMap::new();
        metadata.insert("config_hash".to_string(), config_hash.to_string());
        metadata.insert("code_version".to_string(), env!("CARGO_PKG_VERSION").to_string());
        Self { name: name.to_string(), columns: Vec::new(), metadata }
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.data.len())
    }

    fn push(&mut self, name: &str, unit: &str, data: ColumnData) -> &mut Self {
        if let Some(first) = self.columns.first() {
            assert_eq!(first.data.len(), data.len(), "column {name} has the wrong length");
        }
        self.columns.push(Column { name: name.to_string(), unit: unit.to_string(), data });
        self
    }

    pub fn real(&mut self, name: &str, unit: &str, values: Vec<f64>) -> &mut Self {
        self.push(name, unit, ColumnData::Real(values))
    }

    pub fn integer(&mut self, name: &str, unit: &str, values: Vec<i64>) -> &mut Self {
        self.push(name, unit, ColumnData::Integer(values))
    }

    pub fn text(&mut self, name: &str, values: Vec<String>) -> &mut Self {
        self.push(name, "", ColumnData::Text(values))
    }

    /// `name` and `name_err` columns from Monte Carlo estimates.
    pub fn estimates(&mut self, name: &str, unit: &str, values: &[Estimate]) -> &mut Self {
        self.real(name, unit, values.iter().map(|e| e.value).collect());
        self.real(&format!("{name}_err"), unit, values.iter().map(|e| e.stderr).collect())
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn reals(&self, name: &str) -> Option<&[f64]> {
        match &self.column(name)?.data {
            ColumnData::Real(v) => Some(v),
            _ => None,
        }
    }

    pub fn config_hash(&self) -> Option<&str> {
        self.metadata.get("config_hash").map(String::as_str)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), HarnessError> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        let units: Vec<String> = self
            .columns
            .iter()
            .filter(|c| !c.unit.is_empty())
            .map(|c| format!("{}={}", c.name, c.unit))
            .collect();
        writeln!(out, "# units: {}", units.join(" "))?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for i in 0..self.rows() {
            w.write_record(self.columns.iter().map(|c| c.data.cell(i)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 table")
    }

    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    /// Reads a table written by [`write_csv`](Self::write_csv). Columns
    /// that parse as integers or reals throughout are typed accordingly.
    pub fn read_csv<R: BufRead>(input: R, name: &str) -> Result<Self, HarnessError> {
        let mut metadata = BTreeMap::new();
        let mut units = BTreeMap::new();
        let mut body = String::new();
        for line in input.lines() {
            let line = line?;
            if let Some(rest) = line.strip_prefix("# ") {
                let (k, v) = rest
                    .split_once(": ")
                    .or_else(|| rest.strip_suffix(':').map(|k| (k, "")))
                    .ok_or_else(|| HarnessError::Table(format!("bad metadata line {line:?}")))?;
                if k == "units" {
                    for pair in v.split_whitespace() {
                        if let Some((c, u)) = pair.split_once('=') {
                            units.insert(c.to_string(), u.to_string());
                        }
                    }
                } else {
                    metadata.insert(k.to_string(), v.to_string());
                }
            } else {
                body.push_str(&line);
                body.push('\n');
            }
        }
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let headers: Vec<String> = reader.headers()?.iter().map(String::from).collect();
        let mut cells: Vec<Vec<String>> = vec![Vec::new(); headers.len()];
        for record in reader.records() {
            let record = record?;
            for (col, field) in cells.iter_mut().zip(record.iter()) {
                col.push(field.to_string());
            }
        }
        let columns = headers
            .into_iter()
            .zip(cells)
            .map(|(h, raw)| {
                let data = if let Ok(v) = raw.iter().map(|s| s.parse::<i64>()).collect() {
                    ColumnData::Integer(v)
                } else if let Ok(v) = raw.iter().map(|s| s.parse::<f64>()).collect() {
                    ColumnData::Real(v)
                } else {
                    ColumnData::Text(raw)
                };
                Column { unit: units.get(&h).cloned().unwrap_or_default(), name: h, data }
            })
            .collect();
        Ok(Self { name: name.to_string(), columns, metadata })
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("table");
        Self::read_csv(std::io::BufReader::new(std::fs::File::open(path)?), name)
    }
}

/// Loads a golden table and refuses it unless it was produced by the
/// config with hash `expected`.
pub fn check_golden(path: &Path, expected: &str) -> Result<ResultTable, HarnessError> {
    let table = ResultTable::load(path)?;
    let found = table.config_hash().unwrap_or("").to_string();
    if found != expected {
        return Err(HarnessError::StaleGolden {
            path: path.display().to_string(),
            expected: expected.to_string(),
            found,
        });
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut t = ResultTable::new("demo", "0123456789abcdef");
        t.integer("degree", "", vec![0, 1, 2]);
        t.estimates("msd", "site^2", &[Estimate { value: 1.5, stderr: 0.1, n: 10 }; 3]);
        t.text("sigma", vec!["(1 2)".into(), "(2 1)".into(), "x,y".into()]);
        let text = t.to_csv_string();
        assert!(text.starts_with("# code_version: "));
        let back = ResultTable::read_csv(text.as_bytes(), "demo").unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn stale_golden_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.csv");
        let mut t = ResultTable::new("g", "aaaa");
        t.integer("x", "", vec![1]);
        t.save(&path).unwrap();
        assert!(check_golden(&path, "aaaa").is_ok());
        assert!(matches!(check_golden(&path, "bbbb"), Err(HarnessError::StaleGolden { .. })));
    }
}
