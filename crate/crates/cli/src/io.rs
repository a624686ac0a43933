//! Input loading with schema paths, report emission and exit codes.

use std::fmt::Write as _;
use std::io::Write as _;

use gelfkit_core::Error;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_STRUCTURAL: i32 = 1;
pub const EXIT_VERDICT: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Failure before any check ran: the input could not be read or was
/// malformed. `path` points into the offending document.
#[derive(Debug)]
pub struct Failure {
    pub kind: &'static str,
    pub source: String,
    pub path: String,
    pub message: String,
}

impl Failure {
    pub fn structural(source: &str, message: impl Into<String>) -> Self {
        Failure { kind: "structural", source: source.into(), path: String::new(), message: message.into() }
    }

    pub fn from_core(source: &str, e: Error) -> Self {
        let (kind, message) = match e {
            Error::Structural(m) => ("structural", m),
            Error::Domain(m) => ("domain", m),
            Error::Mode(m) => ("mode", m),
            Error::Resource { msg, partial } if partial.is_empty() => ("resource", msg),
            Error::Resource { msg, partial } => ("resource", format!("{msg} ({partial})")),
        };
        Failure { kind, source: source.into(), path: String::new(), message }
    }

    pub fn emit(&self, format: Format) {
        let at = if self.path.is_empty() { String::new() } else { format!(" at {}", self.path) };
        eprintln!("error: {}{}: {} error: {}", self.source, at, self.kind, self.message);
        if format == Format::Json {
            let doc = serde_json::json!({
                "error": {"kind": self.kind, "source": self.source, "path": self.path, "message": self.message}
            });
            emit(&doc, Format::Json);
        }
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

pub trait Context<T> {
    fn within(self, source: &str) -> CliResult<T>;
}

impl<T> Context<T> for gelfkit_core::Result<T> {
    fn within(self, source: &str) -> CliResult<T> {
        self.map_err(|e| Failure::from_core(source, e))
    }
}

/// Inline JSON when the argument starts with `{` or `[`, a file path
/// otherwise.
pub fn read_arg(arg: &str) -> CliResult<(String, String)> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(("<inline>".into(), arg.to_string()));
    }
    std::fs::read_to_string(arg)
        .map(|s| (arg.to_string(), s))
        .map_err(|e| Failure::structural(arg, format!("cannot read: {e}")))
}

pub fn parse<T: DeserializeOwned>(source: &str, text: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Failure { kind: "schema", source: source.into(), path: if path == "." { String::new() } else { path }, message: e.into_inner().to_string() }
    })
}

pub fn load<T: DeserializeOwned>(arg: &str) -> CliResult<(String, T)> {
    let (source, text) = read_arg(arg)?;
    let v = parse(&source, &text)?;
    Ok((source, v))
}

/// Writes the report to stdout; a closed pipe is not an error.
pub fn emit<T: Serialize>(report: &T, format: Format) {
    let v = serde_json::to_value(report).expect("reports serialise");
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&v).expect("json") + "\n",
        Format::Text => render_text(&v),
    };
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

/// `key: value` lines, nested by indentation; scalars in arrays are joined.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(a) if a.iter().all(|x| x.is_array() && scalar(x).is_some()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}{k}: {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}- {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}[{i}]").unwrap();
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        _ => writeln!(out, "{pad}{}", scalar(v).unwrap_or_default()).unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_errors_carry_paths() {
        #[derive(serde::Deserialize, Debug)]
        #[allow(dead_code)]
        struct Doc {
            a: Vec<u32>,
        }
        let e = parse::<Doc>("x", r#"{"a":[1,"two"]}"#).unwrap_err();
        assert_eq!(e.path, "a[1]");
        assert_eq!(e.kind, "schema");
    }

    #[test]
    fn text_rendering() {
        let v = serde_json::json!({"H":[{"rank":1},{"rank":0,"torsion":[2]}],"ok":true});
        assert_eq!(render_text(&v), "H:\n  [0]\n    rank: 1\n  [1]\n    rank: 0\n    torsion: [2]\nok: true\n");
    }
}
