use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use chiral_cqed::io::format_f64;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) if v.is_nan() => String::new(),
            Cell::Num(v) => format_f64(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

/// CSV table with `#` comment lines above the header row.
#[derive(Clone, Debug)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Empty table whose comments record the tool version and the resolved
    /// configuration.
    pub fn new(cfg: &RunConfig, command: &str, columns: &[&'static str]) -> Self {
        let params = cfg
            .to_pairs()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        Self {
            comments: vec![
                format!("chiral-cqed {TOOL_VERSION} {command}"),
                format!("params: {params}"),
            ],
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        w.flush()
    }

    /// Writes to `path`, or to stdout when `path` is `None`.
    pub fn emit(&self, path: Option<&Path>) -> Result<()> {
        match path {
            Some(path) => {
                let f = File::create(path).map_err(|e| CliError::io(path, e))?;
                self.write_to(BufWriter::new(f)).map_err(|e| CliError::io(path, e))
            }
            None => self
                .write_to(io::stdout().lock())
                .map_err(|e| CliError::io("<stdout>", e)),
        }
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }
}

/// Parsed CSV: header names and raw string rows, comments dropped.
#[derive(Clone, Debug)]
pub struct CsvData {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvData {
    pub fn read(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| CliError::io(path, e))?;
        Self::from_reader(f)
    }

    pub fn from_reader<R: io::Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(r);
        let columns = rdr
            .headers()
            .map_err(|e| CliError::Schema(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let rows = rdr
            .records()
            .map(|r| {
                r.map(|r| r.iter().map(str::to_string).collect())
                    .map_err(|e| CliError::Schema(e.to_string()))
            })
            .collect::<Result<_>>()?;
        Ok(Self { columns, rows })
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| CliError::Schema(format!("missing column `{name}`")))
    }

    pub fn has(&self, names: &[&str]) -> bool {
        names.iter().all(|n| self.columns.iter().any(|c| c == n))
    }

    /// Column `name` as numbers; empty cells become NaN.
    pub fn numbers(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.index(name)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(n, r)| {
                let s = r.get(i).map(String::as_str).unwrap_or("");
                if s.is_empty() {
                    Ok(f64::NAN)
                } else {
                    s.parse()
                        .map_err(|_| CliError::Schema(format!("row {}: `{name}` is not a number: `{s}`", n + 1)))
                }
            })
            .collect()
    }

    pub fn strings(&self, name: &str) -> Result<Vec<String>> {
        let i = self.index(name)?;
        Ok(self.rows.iter().map(|r| r.get(i).cloned().unwrap_or_default()).collect())
    }
}
