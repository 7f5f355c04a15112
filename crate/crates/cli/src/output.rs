use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Number, Value};

pub const SCHEMA: &str = "corank-report/1";

/// A command result: the JSON payload and the flat table behind `--format csv`.
pub struct Output {
    pub payload: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    /// Set when an invariant checked by the command failed.
    pub invariant_failed: bool,
}

impl Output {
    pub fn new(payload: impl Serialize, columns: Vec<&'static str>) -> Self {
        Self {
            payload: to_value(payload),
            columns,
            rows: Vec::new(),
            invariant_failed: false,
        }
    }

    pub fn row(&mut self, cells: Vec<Value>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }
}

/// Serializes and then rewrites every float with 17 significant digits.
pub fn to_value(x: impl Serialize) -> Value {
    let mut v = serde_json::to_value(x).expect("report types serialize");
    normalize(&mut v);
    v
}

pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("valid float literal"))
}

fn normalize(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            *v = float(n.as_f64().expect("checked f64"));
        }
        Value::Array(items) => items.iter_mut().for_each(normalize),
        Value::Object(map) => map.values_mut().for_each(normalize),
        _ => {}
    }
}

pub fn envelope(command: &str, argv: &[String], seed: Option<u64>, timestamp: Option<String>, payload: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    m.insert("argv".into(), json!(argv));
    m.insert("seed".into(), json!(seed));
    m.insert("timestamp".into(), json!(timestamp));
    m.insert("payload".into(), payload);
    Value::Object(m)
}

fn cell(v: &Value) -> String {
    let raw = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

pub fn csv(out: &Output) -> String {
    let mut s = out.columns.join(",");
    s.push('\n');
    for row in &out.rows {
        let line: Vec<String> = row.iter().map(cell).collect();
        writeln!(s, "{}", line.join(",")).expect("string write");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_17_digits() {
        assert_eq!(float(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(float(1.0).to_string(), "1.0000000000000000e+0");
        assert_eq!(float(f64::NAN), Value::Null);
        let v = to_value(vec![0.5f64]);
        assert_eq!(v.to_string(), "[5.0000000000000000e-1]");
    }

    #[test]
    fn integers_untouched() {
        assert_eq!(to_value(42u64).to_string(), "42");
    }

    #[test]
    fn csv_quoting() {
        let mut o = Output::new(json!({}), vec!["a", "b"]);
        o.row(vec![json!("x,y"), json!(3)]);
        assert_eq!(csv(&o), "a,b\n\"x,y\",3\n");
    }
}
