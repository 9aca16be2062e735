use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::model::Variable;

/// Complete tabular data: one column per variable, each cell a state index
/// of that column's variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordSet {
    columns: Vec<Variable>,
    rows: Vec<Vec<usize>>,
}

impl RecordSet {
    pub fn new(columns: Vec<Variable>, rows: Vec<Vec<usize>>) -> Result<Self> {
        for (r, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::argument(format!(
                    "row {r} has {} cells, expected {}",
                    row.len(),
                    columns.len()
                )));
            }
            for (c, &s) in row.iter().enumerate() {
                if s >= columns[c].card() {
                    return Err(Error::argument(format!(
                        "row {r}: state index {s} out of range for '{}'",
                        columns[c].name
                    )));
                }
            }
        }
        Ok(RecordSet { columns, rows })
    }

    /// Builds a record set from state labels.
    pub fn from_labels<S: AsRef<str>>(columns: Vec<Variable>, rows: &[Vec<S>]) -> Result<Self> {
        let mut indexed = Vec::with_capacity(rows.len());
        for (r, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::argument(format!(
                    "row {r} has {} cells, expected {}",
                    row.len(),
                    columns.len()
                )));
            }
            indexed.push(
                row.iter()
                    .zip(&columns)
                    .map(|(cell, var)| label_index(var, cell.as_ref(), r))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok(RecordSet { columns, rows: indexed })
    }

    pub fn columns(&self) -> &[Variable] {
        &self.columns
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|v| v.name == name)
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn label(&self, row: usize, column: usize) -> &str {
        &self.columns[column].states[self.rows[row][column]]
    }

    /// Reads CSV with a header line of variable names. Each header name
    /// must be one of `vocabulary`; cells must be declared states. Empty
    /// cells are rejected.
    pub fn read_csv<R: Read>(reader: R, vocabulary: &[Variable]) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::None)
            .from_reader(reader);
        let headers = rdr.headers().map_err(csv_error)?.clone();
        let mut columns = Vec::with_capacity(headers.len());
        for name in headers.iter() {
            let var = vocabulary
                .iter()
                .find(|v| v.name == name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            if columns.iter().any(|c: &Variable| c.name == name) {
                return Err(Error::schema("header", format!("column '{name}' appears twice")));
            }
            columns.push(var.clone());
        }
        let mut rows = Vec::new();
        for (r, record) in rdr.records().enumerate() {
            let record = record.map_err(csv_error)?;
            rows.push(
                record
                    .iter()
                    .zip(&columns)
                    .map(|(cell, var)| label_index(var, cell, r))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok(RecordSet { columns, rows })
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .quote_style(csv::QuoteStyle::Never)
            .from_writer(writer);
        let io = |e: csv::Error| Error::Io {
            path: "<csv output>".into(),
            source: std::io::Error::other(e),
        };
        wtr.write_record(self.columns.iter().map(|c| c.name.as_str())).map_err(io)?;
        for row in &self.rows {
            wtr.write_record(row.iter().zip(&self.columns).map(|(&s, c)| c.states[s].as_str()))
                .map_err(io)?;
        }
        wtr.flush().map_err(|e| Error::Io {
            path: "<csv output>".into(),
            source: e,
        })
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("labels are UTF-8")
    }
}

fn label_index(var: &Variable, cell: &str, row: usize) -> Result<usize> {
    if cell.is_empty() {
        return Err(Error::argument(format!(
            "row {row}: missing value for '{}' (complete data required)",
            var.name
        )));
    }
    var.state_index(cell).ok_or_else(|| Error::UnknownState {
        variable: var.name.clone(),
        state: cell.to_string(),
    })
}

fn csv_error(e: csv::Error) -> Error {
    let locus = e
        .position()
        .map(|p| format!("line {}", p.line()))
        .unwrap_or_else(|| "csv".to_string());
    Error::Parse {
        locus,
        message: e.to_string(),
    }
}
