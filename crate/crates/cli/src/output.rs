use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    /// Plain lines for reading.
    Text,
    /// One JSON object per line.
    Machine,
}

/// Writes results to stdout in the selected format.
pub struct Output {
    format: Format,
}

impl Output {
    pub fn new(format: Format) -> Self {
        Output { format }
    }

    /// `text` in text mode; otherwise `{"record": kind, ...fields}`.
    pub fn record(&self, kind: &str, fields: Value, text: impl AsRef<str>) {
        match self.format {
            Format::Text => emit(text.as_ref()),
            Format::Machine => {
                let mut obj = Map::new();
                obj.insert("record".into(), Value::from(kind));
                if let Value::Object(rest) = fields {
                    obj.extend(rest);
                }
                emit(&Value::Object(obj).to_string());
            }
        }
    }
}

/// Prints a line; a closed pipe (e.g. `| head`) ends the process quietly.
fn emit(line: &str) {
    if let Err(e) = writeln!(io::stdout().lock(), "{line}") {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("failed writing to stdout: {e}");
    }
}
