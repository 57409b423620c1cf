use std::io::Write;
use std::path::PathBuf;

use serde_json::{json, Value};

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => format!("{x}"),
            Cell::Num(_) | Cell::Empty => String::new(),
            Cell::Int(k) => k.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(_) | Cell::Empty => Value::Null,
            Cell::Int(k) => json!(k),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<i32> for Cell {
    fn from(k: i32) -> Self {
        Cell::Int(k as i64)
    }
}

impl From<u32> for Cell {
    fn from(k: u32) -> Self {
        Cell::Int(k as i64)
    }
}

impl From<usize> for Cell {
    fn from(k: usize) -> Self {
        Cell::Int(k as i64)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Column name plus the unit written into the JSON mirror.
#[derive(Clone, Debug)]
pub struct Column {
    pub name: String,
    pub unit: Option<&'static str>,
}

pub fn col(name: &str, unit: &'static str) -> Column {
    Column {
        name: name.to_string(),
        unit: Some(unit),
    }
}

pub fn text(name: &str) -> Column {
    Column {
        name: name.to_string(),
        unit: None,
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: Vec<Column>) -> Self {
        Table {
            name: name.to_string(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))
            .map_err(csv_error)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv)).map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        let columns: Vec<Value> = self
            .columns
            .iter()
            .map(|c| json!({"name": c.name, "unit": c.unit}))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        json!({"table": self.name, "columns": columns, "rows": rows})
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Usage(format!("csv: {e}"))
}

/// Where results go: files in an output directory, or the primary result on
/// standard output.
pub struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(dir: Option<PathBuf>) -> Result<Self, CliError> {
        if let Some(d) = &dir {
            std::fs::create_dir_all(d)
                .map_err(|e| CliError::Usage(format!("cannot create output directory {}: {e}", d.display())))?;
        }
        Ok(Sink { dir })
    }

    fn write(&self, file: &str, body: &str) -> Result<(), CliError> {
        let d = self.dir.as_ref().expect("only called with a directory");
        let path = d.join(file);
        std::fs::write(&path, body).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
    }

    /// CSV plus JSON mirror in the output directory; without one, the
    /// primary table goes to stdout as CSV and the rest are dropped.
    pub fn table(&self, table: &Table, primary: bool) -> Result<(), CliError> {
        match &self.dir {
            Some(_) => {
                self.write(&format!("{}.csv", table.name), &table.to_csv()?)?;
                let js = serde_json::to_string_pretty(&table.to_json()).expect("table json");
                self.write(&format!("{}.json", table.name), &(js + "\n"))
            }
            None if primary => stdout(&table.to_csv()?),
            None => Ok(()),
        }
    }

    pub fn json(&self, name: &str, value: &Value, primary: bool) -> Result<(), CliError> {
        let js = serde_json::to_string_pretty(value).expect("json value") + "\n";
        match &self.dir {
            Some(_) => self.write(&format!("{name}.json"), &js),
            None if primary => stdout(&js),
            None => Ok(()),
        }
    }
}

fn stdout(s: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(s.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Usage(format!("stdout: {e}")))
}
