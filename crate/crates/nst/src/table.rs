//! Numeric CSV files: a header, rows of numbers, and optional `#` comment
//! lines at the very end.

use std::fs;
use std::path::Path;

use crate::error::AppError;
use crate::format::shortest;

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Comment lines without the leading `#`.
    pub comments: Vec<String>,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            comments: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// LF-terminated text with every number in shortest round-trip form.
    pub fn render(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| shortest(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for c in &self.comments {
            out.push('#');
            out.push_str(c);
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), AppError> {
        fs::write(path, self.render()).map_err(|e| AppError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self, AppError> {
        let text = fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses `text`; errors carry `origin` and the 1-based line number.
    pub fn parse(text: &str, origin: &str) -> Result<Self, AppError> {
        let bad = |line: u64, message: String| AppError::Csv {
            path: origin.to_string(),
            line,
            message,
        };
        let lines: Vec<&str> = text.split_terminator('\n').collect();
        let body_len = lines
            .iter()
            .position(|l| l.starts_with('#'))
            .unwrap_or(lines.len());
        let mut comments = Vec::new();
        for (i, l) in lines.iter().enumerate().skip(body_len) {
            match l.strip_prefix('#') {
                Some(c) => comments.push(c.to_string()),
                None => return Err(bad(i as u64 + 1, "data after a comment line".into())),
            }
        }
        if let Some(i) = lines[..body_len].iter().position(|l| l.trim().is_empty()) {
            return Err(bad(i as u64 + 1, "empty line".into()));
        }
        if body_len == 0 {
            return Err(bad(1, "missing header".into()));
        }
        let body = lines[..body_len].join("\n");
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(body.as_bytes());
        let columns: Vec<String> = reader
            .headers()
            .map_err(|e| bad(1, e.to_string()))?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                bad(line, e.to_string())
            })?;
            let line = record.position().map_or(0, |p| p.line());
            let row = record
                .iter()
                .map(|cell| {
                    cell.trim()
                        .parse::<f64>()
                        .map_err(|_| bad(line, format!("not a number: {cell:?}")))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            rows.push(row);
        }
        Ok(Self {
            columns,
            rows,
            comments,
        })
    }
}
