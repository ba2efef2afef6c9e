use crate::{CliResult, Format};
use serde_json::{Map, Value};
use std::io::Write;
use std::path::Path;

/// Prints a flat summary record on standard output.
pub fn emit(format: Format, record: Map<String, Value>) -> CliResult {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &Value::Object(record))
                .map_err(hyperdirac::Error::from)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let cell = |v: &Value| match v {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                other => other.to_string(),
            };
            w.write_record(record.keys())
                .and_then(|_| w.write_record(record.values().map(cell)))
                .and_then(|_| w.flush().map_err(csv::Error::from))
                .map_err(hyperdirac::Error::from)?;
        }
    }
    Ok(())
}

/// Writes `text` to `path`, or to standard output when there is none.
pub fn write_text(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[macro_export]
macro_rules! record {
    ($($key:literal => $value:expr),* $(,)?) => {{
        let mut m = serde_json::Map::new();
        $(m.insert($key.to_string(), serde_json::json!($value));)*
        m
    }};
}
