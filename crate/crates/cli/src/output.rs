use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A float rendered with 17 significant digits, or null when not finite.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted float is a JSON number"))
}

/// Rewrites every non-integer number in `v` with [`float`], so that output
/// does not depend on the shortest-representation printer.
fn normalise(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            if s.contains(['.', 'e', 'E']) {
                float(s.parse().unwrap_or(f64::NAN))
            } else {
                Value::Number(n)
            }
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(normalise).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, normalise(v))).collect()),
        other => other,
    }
}

/// Serialises `x` with floats at full precision.
pub fn to_value<T: Serialize>(x: &T) -> Value {
    normalise(serde_json::to_value(x).expect("report types serialise"))
}

/// Object built from key/value pairs, preserving their order.
pub fn object<I: IntoIterator<Item = (&'static str, Value)>>(pairs: I) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// CSV projection of a list of objects: one column per top-level key of
/// the first row, nested values written as JSON.
fn csv(rows: &[Value]) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = match rows.first() {
        Some(Value::Object(m)) => m.keys().cloned().collect(),
        _ => vec!["value".into()],
    };
    w.write_record(&header)?;
    for row in rows {
        let record: Vec<String> = match row {
            Value::Object(m) => header.iter().map(|k| m.get(k).map(cell).unwrap_or_default()).collect(),
            other => vec![cell(other)],
        };
        w.write_record(&record)?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn render(rows: &[Value], format: Format) -> io::Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(io::Error::other)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => csv(rows),
    }
}

pub fn emit(rows: &[Value], format: Format, out: Option<&Path>) -> io::Result<()> {
    let text = render(rows, format)?;
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(float(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(float(2.0).to_string(), "2.0000000000000000e+0");
        assert_eq!(float(f64::NAN), Value::Null);
        let back: f64 = float(std::f64::consts::PI).to_string().parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn integers_stay_integers() {
        #[derive(Serialize)]
        struct Row {
            n: usize,
            x: f64,
        }
        let v = to_value(&Row { n: 7, x: 1.5 });
        assert_eq!(v.to_string(), r#"{"n":7,"x":1.5000000000000000e+0}"#);
    }

    #[test]
    fn csv_quotes_ids_with_commas() {
        let rows = vec![object([("entry", Value::String("geomcp:c=0.1,q=0.5".into())), ("x", float(1.0))])];
        let text = render(&rows, Format::Csv).unwrap();
        assert_eq!(text, "entry,x\n\"geomcp:c=0.1,q=0.5\",1.0000000000000000e+0\n");
    }
}
