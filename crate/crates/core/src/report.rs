//! Row-oriented report rendering.
//!
//! A [`Row`] is an ordered list of named fields. The same row renders either
//! as one JSON object per line or as a CSV record, so both formats carry
//! identical text for every number. Integers print exactly; floats print
//! with 17 significant digits (`{:.16e}`), which round-trips any `f64`.

use std::io::{self, Write};

use num_bigint::BigInt;

use crate::moments::{CdfPoint, CdfReport, MomentReport};
use crate::series::{Lemma2Ratios, SeriesPoint};
use crate::tauberian::AsymptoteDiagnostic;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(String),
    Float(f64),
    Str(String),
    Bool(bool),
}

impl Value {
    fn number_text(&self) -> Option<String> {
        match self {
            Value::Int(s) => Some(s.clone()),
            Value::Float(x) => Some(format_float(*x)),
            _ => None,
        }
    }

    fn json(&self) -> String {
        match self {
            Value::Str(s) => json_string(s),
            Value::Bool(b) => b.to_string(),
            Value::Float(x) if !x.is_finite() => "null".into(),
            v => v.number_text().expect("numeric"),
        }
    }

    fn csv(&self) -> String {
        match self {
            Value::Str(s) => csv_field(s),
            Value::Bool(b) => b.to_string(),
            Value::Float(x) if !x.is_finite() => String::new(),
            v => v.number_text().expect("numeric"),
        }
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v.to_string())
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(v.to_string())
    }
}

impl From<u128> for Value {
    fn from(v: u128) -> Self {
        Value::Int(v.to_string())
    }
}

impl From<&BigInt> for Value {
    fn from(v: &BigInt) -> Self {
        Value::Int(v.to_string())
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row {
    fields: Vec<(String, Value)>,
}

impl Row {
    pub fn new() -> Self {
        Row::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.to_string(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.fields.iter().map(|(k, _)| k.as_str())
    }

    pub fn to_json(&self) -> String {
        let body: Vec<String> = self
            .fields
            .iter()
            .map(|(k, v)| format!("{}:{}", json_string(k), v.json()))
            .collect();
        format!("{{{}}}", body.join(","))
    }

    pub fn csv_header(&self) -> String {
        self.fields
            .iter()
            .map(|(k, _)| csv_field(k))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn to_csv(&self) -> String {
        self.fields
            .iter()
            .map(|(_, v)| v.csv())
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Streams rows; CSV gets a header before the first row and again whenever
/// the set of keys changes.
pub struct ReportWriter<W: Write> {
    out: W,
    format: Format,
    header: Option<String>,
}

impl<W: Write> ReportWriter<W> {
    pub fn new(out: W, format: Format) -> Self {
        ReportWriter {
            out,
            format,
            header: None,
        }
    }

    pub fn write(&mut self, row: &Row) -> io::Result<()> {
        match self.format {
            Format::Json => writeln!(self.out, "{}", row.to_json())?,
            Format::Csv => {
                let header = row.csv_header();
                if self.header.as_deref() != Some(header.as_str()) {
                    writeln!(self.out, "{header}")?;
                    self.header = Some(header);
                }
                writeln!(self.out, "{}", row.to_csv())?;
            }
        }
        self.out.flush()
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl From<&MomentReport> for Row {
    fn from(r: &MomentReport) -> Self {
        Row::new()
            .with("quantity", r.kind.name())
            .with("n", r.n)
            .with("order", r.kind.order())
            .with("exact_num", r.exact.numer())
            .with("exact_den", r.exact.denom())
            .with("float", r.value())
            .with("limit", r.limit_value())
            .with("deviation", r.deviation())
    }
}

/// Same keys as a moment row: the distance is the value, the limit is 0.
impl From<&CdfReport> for Row {
    fn from(r: &CdfReport) -> Self {
        let d = r.distance_value();
        Row::new()
            .with("quantity", "kolmogorov")
            .with("n", r.n)
            .with("order", 0u32)
            .with("exact_num", r.distance.numer())
            .with("exact_den", r.distance.denom())
            .with("float", d)
            .with("limit", 0.0)
            .with("deviation", d)
    }
}

impl From<&CdfPoint> for Row {
    fn from(p: &CdfPoint) -> Self {
        Row::new()
            .with("k", p.k)
            .with("u", p.u)
            .with("cdf", p.cdf)
            .with("left_cdf", p.left_cdf)
            .with("limit_cdf", p.limit)
    }
}

impl From<&AsymptoteDiagnostic> for Row {
    fn from(d: &AsymptoteDiagnostic) -> Self {
        Row::new()
            .with("quantity", d.quantity.name())
            .with("n", d.n)
            .with("measured", d.measured)
            .with("predicted", d.predicted)
            .with("ratio", d.ratio)
            .with("implied_constant", d.implied_constant)
    }
}

impl From<&SeriesPoint> for Row {
    fn from(p: &SeriesPoint) -> Self {
        Row::new()
            .with("z", p.z)
            .with("eps", p.eps)
            .with("f", p.f)
            .with("f_prime", p.f_prime)
            .with("f_double_prime", p.f_double_prime)
            .with("p_max", p.p_max)
            .with("tail_bound", p.tail_bound())
    }
}

impl Row {
    /// Appends the asymptote ratio fields to a series row.
    pub fn with_lemma2(mut self, r: &Lemma2Ratios) -> Self {
        let names = ["f", "f_prime", "f_double_prime"];
        self.push("log_term", r.log_term);
        for (name, v) in names.iter().zip(r.ratios) {
            self.push(&format!("ratio_{name}"), v);
        }
        for (name, v) in names.iter().zip(r.implied) {
            self.push(&format!("implied_{name}"), v);
        }
        self
    }
}
