use std::fmt::Write as _;

use crate::args::OutputFormat;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Str(String),
    Null,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(i64::try_from(v).unwrap_or(i64::MAX))
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(i64::from(v))
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

/// Seventeen significant digits: enough to round-trip any `f64`.
fn float(v: f64) -> String {
    format!("{v:.16e}")
}

impl Value {
    fn json(&self) -> String {
        match self {
            Value::Num(v) if v.is_finite() => float(*v),
            Value::Num(_) | Value::Null => "null".into(),
            Value::Int(v) => v.to_string(),
            Value::Bool(v) => v.to_string(),
            Value::Str(s) => serde_json::to_string(s).expect("strings serialize"),
        }
    }

    fn csv(&self) -> String {
        match self {
            Value::Num(v) if v.is_finite() => float(*v),
            Value::Num(v) => v.to_string(),
            Value::Null => String::new(),
            Value::Int(v) => v.to_string(),
            Value::Bool(v) => v.to_string(),
            Value::Str(s) => csv_field(s),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// A flat record with ordered keys.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(Vec<(String, Value)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.push(key, value);
        self
    }

    pub fn with_all(mut self, other: Record) -> Self {
        self.0.extend(other.0);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.0.push((key.to_owned(), value.into()));
    }

    /// Adds the entry only when `value` is present.
    pub fn push_some(&mut self, key: &str, value: Option<impl Into<Value>>) {
        if let Some(v) = value {
            self.push(key, v);
        }
    }

    fn json(&self) -> String {
        let mut out = String::from("{");
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(
                out,
                "{}:{}",
                serde_json::to_string(k).expect("strings serialize"),
                v.json()
            );
        }
        out.push('}');
        out
    }
}

/// Result of a command: a single object or a list of rows.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Object(Record),
    Table { header: Vec<String>, rows: Vec<Record> },
}

impl Document {
    pub fn table(header: &[&str], rows: Vec<Record>) -> Self {
        Document::Table {
            header: header.iter().map(|s| (*s).to_owned()).collect(),
            rows,
        }
    }

    /// Table whose header is taken from the first row.
    pub fn rows(rows: Vec<Record>) -> Self {
        let header = rows
            .first()
            .map(|r| r.0.iter().map(|(k, _)| k.clone()).collect())
            .unwrap_or_default();
        Document::Table { header, rows }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match (self, format) {
            (Document::Object(r), OutputFormat::Json) => format!("{}\n", r.json()),
            (Document::Table { rows, .. }, OutputFormat::Json) => {
                let body: Vec<String> = rows.iter().map(Record::json).collect();
                if body.is_empty() {
                    "[]\n".into()
                } else {
                    format!("[\n{}\n]\n", body.join(",\n"))
                }
            }
            (Document::Object(r), OutputFormat::Csv) => {
                let header: Vec<&str> = r.0.iter().map(|(k, _)| k.as_str()).collect();
                let header: Vec<String> = header.iter().map(|s| (*s).to_owned()).collect();
                render_csv(&header, std::slice::from_ref(r))
            }
            (Document::Table { header, rows }, OutputFormat::Csv) => render_csv(header, rows),
        }
    }
}

fn render_csv(header: &[String], rows: &[Record]) -> String {
    let mut out = header.iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = header
            .iter()
            .map(|h| {
                row.0
                    .iter()
                    .find(|(k, _)| k == h)
                    .map_or_else(String::new, |(_, v)| v.csv())
            })
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300, -2.5e17] {
            let s = Value::Num(v).json();
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(Value::Num(f64::NAN).json(), "null");
    }

    #[test]
    fn csv_quotes_special_fields() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(csv_field("plain"), "plain");
    }

    #[test]
    fn empty_table_keeps_its_header() {
        let doc = Document::table(&["R", "lower"], Vec::new());
        assert_eq!(doc.render(OutputFormat::Csv), "R,lower\n");
        assert_eq!(doc.render(OutputFormat::Json), "[]\n");
    }

    #[test]
    fn json_object_is_flat_and_ordered() {
        let r = Record::new().with("b", 1u32).with("a", true).with("s", "x");
        assert_eq!(
            Document::Object(r).render(OutputFormat::Json),
            "{\"b\":1,\"a\":true,\"s\":\"x\"}\n"
        );
    }
}
