//! Rendering of result rows as JSON, CSV or a LaTeX table.

use qkw_core::symcore::{DimVector, IntPoly, RatFun};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

/// One result record; CSV and LaTeX columns follow its key order.
pub type Row = Vec<(&'static str, Value)>;

pub fn dim_json(v: &DimVector) -> Value {
    json!(v.0)
}

/// Coefficients from the constant term up, as decimal strings.
pub fn poly_json(p: &IntPoly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(c.to_string())).collect())
}

pub fn ratfun_fields(r: &RatFun) -> [(&'static str, Value); 2] {
    [("numerator", poly_json(r.numer())), ("denominator", poly_json(r.denom()))]
}

pub struct Document {
    pub quiver: Value,
    pub command: &'static str,
    pub bx: DimVector,
    pub rows: Vec<Row>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn columns(rows: &[Row]) -> Vec<&'static str> {
    let mut cols: Vec<&'static str> = Vec::new();
    for r in rows {
        for (k, _) in r {
            if !cols.contains(k) {
                cols.push(k);
            }
        }
    }
    cols
}

fn lookup<'a>(row: &'a Row, k: &str) -> Option<&'a Value> {
    row.iter().find(|(c, _)| *c == k).map(|(_, v)| v)
}

impl Document {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let results: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Object(r.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<Map<_, _>>()))
                    .collect();
                let mut doc = Map::new();
                doc.insert("quiver".into(), self.quiver.clone());
                doc.insert("command".into(), json!(self.command));
                doc.insert("box".into(), dim_json(&self.bx));
                doc.insert("results".into(), Value::Array(results));
                let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json values always serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let cols = columns(&self.rows);
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&cols).expect("writing to memory");
                for r in &self.rows {
                    w.write_record(cols.iter().map(|c| lookup(r, c).map(cell).unwrap_or_default())).expect("writing to memory");
                }
                String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
            }
            Format::Latex => {
                let cols = columns(&self.rows);
                let esc = |s: &str| s.replace('_', "\\_").replace('&', "\\&").replace('%', "\\%");
                let mut s = format!("\\begin{{tabular}}{{{}}}\n\\hline\n", "l".repeat(cols.len().max(1)));
                s += &cols.iter().map(|c| esc(c)).collect::<Vec<_>>().join(" & ");
                s += " \\\\\n\\hline\n";
                for r in &self.rows {
                    s += &cols.iter().map(|c| esc(&lookup(r, c).map(cell).unwrap_or_default())).collect::<Vec<_>>().join(" & ");
                    s += " \\\\\n";
                }
                s += "\\hline\n\\end{tabular}\n";
                s
            }
        }
    }
}
