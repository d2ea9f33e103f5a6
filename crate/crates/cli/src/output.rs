//! Serialization: fixed-order JSON with 17 significant digits, CSV and
//! plain-text tables.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Writes every float as `{:.16e}` so repeated runs are byte-identical.
struct FixedFloats;

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(v))
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats);
    v.serialize(&mut ser).expect("serializing plain data cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub enum Cell {
    F(f64),
    OptF(Option<f64>),
    I(i64),
    OptI(Option<i64>),
    B(bool),
    S(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(x) | Cell::OptF(Some(x)) => format!("{x:.16e}"),
            Cell::I(n) | Cell::OptI(Some(n)) => n.to_string(),
            Cell::OptF(None) | Cell::OptI(None) => String::new(),
            Cell::B(b) => b.to_string(),
            Cell::S(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::S(s) => s.clone(),
        }
    }

    fn text(&self) -> String {
        match self {
            Cell::F(x) | Cell::OptF(Some(x)) if *x != 0.0 && !(1e-4..1e6).contains(&x.abs()) => format!("{x:.6e}"),
            Cell::F(x) | Cell::OptF(Some(x)) => format!("{x:.12}"),
            Cell::OptF(None) | Cell::OptI(None) => "-".into(),
            Cell::S(s) => s.clone(),
            other => other.csv(),
        }
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn text(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
        let width: Vec<usize> = (0..self.header.len())
            .map(|j| cells.iter().map(|r| r[j].len()).chain([self.header[j].len()]).max().unwrap_or(0))
            .collect();
        let line = |v: Vec<&str>| -> String {
            let s: Vec<String> = v.iter().zip(&width).map(|(c, w)| format!("{c:>w$}")).collect();
            s.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(self.header.clone());
        for r in &cells {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
        }
        out
    }
}

/// A command result renderable in every output format.
pub trait Report: Serialize {
    fn table(&self) -> Table;
}

pub fn render<R: Report>(r: &R, format: Format) -> String {
    match format {
        Format::Json => to_json(r),
        Format::Csv => r.table().csv(),
        Format::Text => r.table().text(),
    }
}
