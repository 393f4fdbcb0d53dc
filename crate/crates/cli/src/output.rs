//! Deterministic rendering: JSON with sorted keys and 17 significant
//! digits, plain CSV with '.' decimals, and a `key = value` text view.

use anyhow::{Context, Result};
use serde_json::Value;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => anyhow::bail!("config key `format`: expected json, csv or text, got `{s}`"),
        }
    }
}

/// Shortest-width rendering with exactly 17 significant digits, positional
/// for moderate exponents and scientific otherwise.
pub fn fmt17(x: f64) -> String {
    fmt_sig(x, 17)
}

/// `digits` significant digits, trailing zeros kept.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits_str: String = mantissa.chars().filter(|c| *c != '.').collect();
    if exp < -5 || exp >= digits as i32 {
        return format!("{sign}{mantissa}e{exp}");
    }
    if exp < 0 {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("{sign}0.{zeros}{digits_str}")
    } else {
        let split = exp as usize + 1;
        let (int, frac) = digits_str.split_at(split);
        let frac = if frac.is_empty() { "0" } else { frac };
        format!("{sign}{int}.{frac}")
    }
}

fn push_indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn render_scalar(v: &Value, out: &mut String) {
    match v {
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) if !n.is_f64() => out.push_str(&u.to_string()),
            (_, Some(i)) if !n.is_f64() => out.push_str(&i.to_string()),
            _ => out.push_str(&fmt17(n.as_f64().expect("finite number"))),
        },
        other => out.push_str(&other.to_string()),
    }
}

fn render(v: &Value, level: usize, out: &mut String) {
    match v {
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                render_scalar(item, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                push_indent(out, level + 1);
                render(item, level + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            push_indent(out, level);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                push_indent(out, level + 1);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                render(item, level + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            push_indent(out, level);
            out.push('}');
        }
        scalar => render_scalar(scalar, out),
    }
}

/// Pretty JSON; object keys come out sorted because `serde_json::Map` is
/// ordered.
pub fn to_json(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out.push('\n');
    out
}

/// `path = value` lines; floats at six significant digits unless `full`.
pub fn to_text(v: &Value, full: bool) -> String {
    fn walk(prefix: &str, v: &Value, full: bool, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, item) in map {
                    let p = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&p, item, full, out);
                }
            }
            Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                for (k, item) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{k}]"), item, full, out);
                }
            }
            Value::Array(items) => {
                let parts: Vec<String> = items.iter().map(|i| text_scalar(i, full)).collect();
                out.push_str(&format!("{prefix} = [{}]\n", parts.join(", ")));
            }
            scalar => out.push_str(&format!("{prefix} = {}\n", text_scalar(scalar, full))),
        }
    }
    let mut out = String::new();
    walk("", v, full, &mut out);
    out
}

fn text_scalar(v: &Value, full: bool) -> String {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            if full {
                fmt17(x)
            } else {
                fmt_sig(x, 6)
            }
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// A CSV document with `#` comment lines, a fixed header and rows.
pub struct Csv {
    comments: Vec<String>,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&'static str]) -> Self {
        Csv {
            comments: Vec::new(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

/// Joins numbers with ';' so a list fits in one CSV cell.
pub fn csv_list(xs: &[f64]) -> String {
    xs.iter().map(|x| fmt17(*x)).collect::<Vec<_>>().join(";")
}

/// Writes through a temporary file in the target directory, so a failed
/// run never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(0.5), "0.50000000000000000");
        assert_eq!(fmt17(3.0), "3.0000000000000000");
        assert_eq!(fmt17(-0.001), "-0.0010000000000000000");
        assert_eq!(fmt17(1e-7), "9.9999999999999995e-8");
        assert_eq!(fmt17(1e20), "1.0000000000000000e20");
        assert_eq!(fmt17(0.0), "0.0");
        for x in [0.055127080819480305, 1.0 / 3.0, 123456.789, 2.5e-300] {
            assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn six_digits() {
        assert_eq!(fmt_sig(0.055127080819480305, 6), "0.0551271");
        assert_eq!(fmt_sig(1.5, 6), "1.50000");
    }

    #[test]
    fn json_is_sorted_and_parseable() {
        let v = json!({"b": 1.5, "a": [1, 2.0], "c": {"z": true, "y": "s"}});
        let s = to_json(&v);
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"], json!(1.5));
        assert_eq!(back["a"][0], json!(1));
    }

    #[test]
    fn text_view() {
        let v = json!({"M": 0.055127080819480305, "roots": [0.5, 0.25]});
        let t = to_text(&v, false);
        assert!(t.contains("M = 0.0551271"));
        assert!(t.contains("roots = [0.500000, 0.250000]"));
    }
}
