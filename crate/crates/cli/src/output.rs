//! Deterministic CSV / JSON emission.
//!
//! CSV layout: `# key = value` header comments with the resolved config,
//! optional `#` annotation lines, one column-header row, then data rows with
//! every float printed as C-style `%.12e`. Line endings are LF; identical
//! input always yields byte-identical output.

use serde::Serialize;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// C-style `%.12e`: 12 fractional digits, signed two-digit-minimum exponent.
pub fn fmt_e(x: f64) -> String {
    let s = format!("{:.12e}", x);
    let (mantissa, exp) = s.split_once('e').expect("float repr always has e");
    let (sign, digits) = match exp.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exp),
    };
    format!("{mantissa}e{sign}{digits:0>2}")
}

/// Config entries are echoed with the shortest round-trip float repr so a
/// re-parse reproduces the exact resolved values.
#[derive(Debug, Clone)]
pub enum ConfigValue {
    Float(f64),
    Int(usize),
    Text(String),
    Bool(bool),
}

impl std::fmt::Display for ConfigValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Float(v) => write!(f, "{v}"),
            Self::Int(v) => write!(f, "{v}"),
            Self::Text(v) => write!(f, "{v}"),
            Self::Bool(v) => write!(f, "{v}"),
        }
    }
}

/// One tabular result: resolved config, free-form annotations, columns and
/// float rows.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub config: Vec<(String, ConfigValue)>,
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn push_config(&mut self, key: &str, value: ConfigValue) {
        self.config.push((key.to_string(), value));
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        for (key, value) in &self.config {
            writeln!(out, "# {key} = {value}")?;
        }
        for comment in &self.comments {
            writeln!(out, "# {comment}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| fmt_e(v)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        #[derive(Serialize)]
        struct JsonTable<'a> {
            config: serde_json::Map<String, serde_json::Value>,
            comments: &'a [String],
            columns: &'a [String],
            rows: &'a [Vec<f64>],
        }
        let mut config = serde_json::Map::new();
        for (key, value) in &self.config {
            let v = match value {
                ConfigValue::Float(f) => serde_json::json!(f),
                ConfigValue::Int(i) => serde_json::json!(i),
                ConfigValue::Text(t) => serde_json::json!(t),
                ConfigValue::Bool(b) => serde_json::json!(b),
            };
            config.insert(key.clone(), v);
        }
        let table = JsonTable {
            config,
            comments: &self.comments,
            columns: &self.columns,
            rows: &self.rows,
        };
        serde_json::to_writer_pretty(&mut *out, &table)?;
        writeln!(out)?;
        Ok(())
    }

    pub fn write<W: Write>(&self, out: &mut W, format: Format) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_exponent_format() {
        assert_eq!(fmt_e(1.0), "1.000000000000e+00");
        assert_eq!(fmt_e(-0.0123), "-1.230000000000e-02");
        assert_eq!(fmt_e(6.02e23), "6.020000000000e+23");
        assert_eq!(fmt_e(1e-120), "1.000000000000e-120");
        assert_eq!(fmt_e(0.0), "0.000000000000e+00");
    }
}
