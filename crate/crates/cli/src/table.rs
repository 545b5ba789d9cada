//! Fixed-column tables: theta_or_x, re, im, abs2, route_diff.

use std::io::Write;
use std::path::Path;

use gpcs::Complex64;
use serde_json::{json, Value};

use crate::config::Format;

pub const COLUMNS: [&str; 5] = ["theta_or_x", "re", "im", "abs2", "route_diff"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub theta_or_x: f64,
    pub value: Complex64,
    pub route_diff: f64,
}

impl Row {
    pub fn new(theta_or_x: f64, value: Complex64, route_diff: f64) -> Self {
        Row {
            theta_or_x,
            value,
            route_diff,
        }
    }

    fn fields(&self) -> [f64; 5] {
        [self.theta_or_x, self.value.re, self.value.im, self.value.norm_sqr(), self.route_diff]
    }
}

/// 17 significant digits, enough to round-trip any f64.
fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn render(rows: &[Row], format: Format, meta: Value) -> String {
    match format {
        Format::Csv => {
            let mut s = COLUMNS.join(",");
            s.push('\n');
            for r in rows {
                let line: Vec<String> = r.fields().iter().map(|&x| fmt_num(x)).collect();
                s.push_str(&line.join(","));
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let f = r.fields();
                    json!({
                        "theta_or_x": f[0],
                        "re": f[1],
                        "im": f[2],
                        "abs2": f[3],
                        "route_diff": f[4],
                    })
                })
                .collect();
            let mut doc = meta;
            doc["rows"] = Value::Array(rows);
            let mut s = serde_json::to_string_pretty(&doc).expect("table serialization cannot fail");
            s.push('\n');
            s
        }
    }
}

/// Writes to `out`, or to stdout when absent.
pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}
