//! Rendering of command results in the three output formats.

use clap::ValueEnum;
use krein_core::{render, RationalMatrix, TripletSpec};
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

/// What a command produced, before formatting.
pub struct Output {
    pub json: Value,
    pub csv: Option<String>,
    pub latex: Option<String>,
}

impl Output {
    pub fn json(value: impl Serialize) -> Self {
        Self { json: to_value(value), csv: None, latex: None }
    }

    pub fn with_csv(mut self, text: String) -> Self {
        self.csv = Some(text);
        self
    }

    pub fn with_latex(mut self, text: String) -> Self {
        self.latex = Some(text);
        self
    }

    /// A matrix tagged with its problem instance; the JSON re-parses as a matrix.
    pub fn matrix(spec: &TripletSpec, m: &RationalMatrix) -> Self {
        let mut obj = instance(spec);
        if let Value::Object(fields) = to_value(m) {
            obj.extend(fields);
        }
        Self::json(Value::Object(obj)).with_csv(render::csv(m)).with_latex(render::latex_pmatrix(m))
    }

    /// The rendered text, or `None` when the command has no rendering in `format`.
    pub fn render(&self, format: Format, stamp: bool) -> Option<String> {
        let version = env!("CARGO_PKG_VERSION");
        let text = match format {
            Format::Json => {
                let mut value = self.json.clone();
                if let (true, Value::Object(obj)) = (stamp, &mut value) {
                    obj.insert("version".into(), json!(version));
                }
                serde_json::to_string_pretty(&value).expect("JSON values serialize")
            }
            Format::Csv => {
                let body = self.csv.as_ref()?;
                if stamp {
                    format!("# krein {version}\n{body}")
                } else {
                    body.clone()
                }
            }
            Format::Latex => {
                let body = self.latex.as_ref()?;
                if stamp {
                    format!("% krein {version}\n{body}")
                } else {
                    body.clone()
                }
            }
        };
        Some(if text.ends_with('\n') { text } else { text + "\n" })
    }
}

pub fn instance(spec: &TripletSpec) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("n".into(), json!(spec.n()));
    obj.insert("a".into(), json!(krein_core::rational::format(spec.a())));
    obj.insert("b".into(), json!(krein_core::rational::format(spec.b())));
    obj
}

pub fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}
