//! Run reports and their JSON/CSV rendering.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

/// A single output value. Floats are printed with 17 significant digits;
/// non-finite floats become `null`.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Str(String),
    Int(i64),
    Num(f64),
    Bool(bool),
    Ints(Vec<usize>),
    Nums(Vec<f64>),
}

fn format_num(v: f64) -> Option<String> {
    v.is_finite().then(|| format!("{v:.16e}"))
}

impl Field {
    fn csv_text(&self) -> String {
        match self {
            Field::Str(s) => s.clone(),
            Field::Int(i) => i.to_string(),
            Field::Num(v) => format_num(*v).unwrap_or_else(|| v.to_string()),
            Field::Bool(b) => b.to_string(),
            Field::Ints(v) => v
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(";"),
            Field::Nums(v) => v
                .iter()
                .map(|x| format_num(*x).unwrap_or_else(|| x.to_string()))
                .collect::<Vec<_>>()
                .join(";"),
        }
    }
}

struct Number(f64);

impl Serialize for Number {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match format_num(self.0) {
            Some(text) => RawValue::from_string(text)
                .map_err(serde::ser::Error::custom)?
                .serialize(s),
            None => s.serialize_none(),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Field::Str(v) => s.serialize_str(v),
            Field::Int(v) => s.serialize_i64(*v),
            Field::Num(v) => Number(*v).serialize(s),
            Field::Bool(v) => s.serialize_bool(*v),
            Field::Ints(v) => v.serialize(s),
            Field::Nums(v) => s.collect_seq(v.iter().map(|x| Number(*x))),
        }
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Str(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Str(v)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v as i64)
    }
}

impl From<i64> for Field {
    fn from(v: i64) -> Self {
        Field::Int(v)
    }
}

impl From<Vec<usize>> for Field {
    fn from(v: Vec<usize>) -> Self {
        Field::Ints(v)
    }
}

impl From<Vec<f64>> for Field {
    fn from(v: Vec<f64>) -> Self {
        Field::Nums(v)
    }
}

impl<const N: usize> From<[f64; N]> for Field {
    fn from(v: [f64; N]) -> Self {
        Field::Nums(v.to_vec())
    }
}

/// Key/value pairs kept in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(Vec<(String, Field)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Field>) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Field>) {
        self.0.push((key.to_string(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(k, _)| k.as_str())
    }
}

impl Serialize for Record {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// How a residual is compared with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// Passes when `residual < tolerance`.
    Below,
    /// Passes when `residual > tolerance`, for checks that expect a property
    /// to be broken.
    Above,
}

/// One named check with its residual and tolerance.
pub fn check(name: &str, residual: f64, tolerance: f64, bound: Bound) -> Record {
    let pass = match bound {
        Bound::Below => residual < tolerance,
        Bound::Above => residual > tolerance,
    };
    Record::new()
        .with("check", name)
        .with("residual", residual)
        .with("tolerance", tolerance)
        .with(
            "bound",
            match bound {
                Bound::Below => "<",
                Bound::Above => ">",
            },
        )
        .with("pass", pass)
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Record,
    pub results: Vec<Record>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, config: Record) -> Self {
        Self {
            command: command.to_string(),
            config,
            results: Vec::new(),
            pass: true,
        }
    }

    /// Appends a result row; a row with `pass: false` fails the report.
    pub fn add(&mut self, row: Record) {
        if row.get("pass") == Some(&Field::Bool(false)) {
            self.pass = false;
        }
        self.results.push(row);
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// One row per result. Columns are `command`, `seed` (when configured),
    /// then every result key in order of first appearance.
    pub fn to_csv(&self) -> String {
        let mut columns: Vec<&str> = Vec::new();
        for row in &self.results {
            for k in row.keys() {
                if !columns.contains(&k) {
                    columns.push(k);
                }
            }
        }
        let seed = self.config.get("seed").map(Field::csv_text);
        let mut out = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["command"];
        if seed.is_some() {
            header.push("seed");
        }
        header.extend(&columns);
        out.write_record(&header).expect("in-memory write");
        for row in &self.results {
            let mut line = vec![self.command.clone()];
            line.extend(seed.clone());
            line.extend(
                columns
                    .iter()
                    .map(|c| row.get(c).map(Field::csv_text).unwrap_or_default()),
            );
            out.write_record(&line).expect("in-memory write");
        }
        String::from_utf8(out.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }
}
