//! Report rows and their JSON/CSV rendering.
//!
//! Every float is written as `{:.16e}` (17 significant digits) so that
//! repeated runs produce identical bytes.

use std::io::{self, Write};

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Null,
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Num(v) => s.serialize_f64(*v),
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Bool(v) => s.serialize_bool(*v),
            Cell::Text(v) => s.serialize_str(v),
            Cell::Null => s.serialize_unit(),
        }
    }
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Num(v) => fixed(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
            Cell::Null => String::new(),
        }
    }
}

pub fn fixed(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// Ordered key/value record.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row(pub Vec<(&'static str, Cell)>);

impl Row {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, key: &'static str, v: f64) -> Self {
        self.0.push((key, Cell::Num(v)));
        self
    }

    pub fn opt_num(mut self, key: &'static str, v: Option<f64>) -> Self {
        self.0.push((key, v.map_or(Cell::Null, Cell::Num)));
        self
    }

    pub fn int(mut self, key: &'static str, v: i64) -> Self {
        self.0.push((key, Cell::Int(v)));
        self
    }

    pub fn flag(mut self, key: &'static str, v: bool) -> Self {
        self.0.push((key, Cell::Bool(v)));
        self
    }

    pub fn text(mut self, key: &'static str, v: impl Into<String>) -> Self {
        self.0.push((key, Cell::Text(v.into())));
        self
    }

    pub fn append(mut self, other: Row) -> Self {
        self.0.extend(other.0);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.0.iter().find(|(k, _)| *k == key).map(|(_, c)| c)
    }
}

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// Wraps a layout formatter and writes floats in fixed scientific form.
struct ReportFormatter<F>(F);

impl<F: Formatter> Formatter for ReportFormatter<F> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(fixed(v).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(v))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T, pretty: bool) -> Vec<u8> {
    fn write<T: Serialize, F: Formatter>(value: &T, out: &mut Vec<u8>, fmt: F) {
        let mut ser = serde_json::Serializer::with_formatter(out, ReportFormatter(fmt));
        value.serialize(&mut ser).expect("report values always serialize");
    }
    let mut out = Vec::new();
    if pretty {
        write(value, &mut out, PrettyFormatter::with_indent(b"  "));
    } else {
        write(value, &mut out, CompactFormatter);
    }
    out.push(b'\n');
    out
}

#[derive(Debug, Serialize)]
pub struct Report<'a, C: Serialize> {
    pub config: &'a C,
    pub rows: &'a [Row],
    pub summary: &'a Row,
}

/// CSV body with the config and summary as leading `#` comment lines.
pub fn to_csv<C: Serialize>(report: &Report<'_, C>) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(b"# config: ");
    out.extend(to_json(report.config, false));
    out.extend_from_slice(b"# summary: ");
    out.extend(to_json(report.summary, false));
    let mut w = csv::Writer::from_writer(&mut out);
    if let Some(first) = report.rows.first() {
        w.write_record(first.0.iter().map(|(k, _)| *k)).expect("in-memory write");
        for row in report.rows {
            w.write_record(row.0.iter().map(|(_, c)| c.csv_text())).expect("in-memory write");
        }
    }
    w.flush().expect("in-memory write");
    drop(w);
    out
}
