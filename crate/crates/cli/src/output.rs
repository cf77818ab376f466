//! Rendering of result records as text, CSV or JSON.

use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::CliError;
use crate::units::Dimension;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!(
                "unknown format `{other}`; expected text, csv or json"
            )),
        }
    }
}

/// Twelve significant digits in scientific notation.
pub fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

fn sig12_json(v: f64) -> Value {
    sig12(v)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Num(f64, Dimension),
    Text(String),
    Flag(bool),
}

impl Field {
    fn unit(&self) -> &'static str {
        match self {
            Field::Num(_, d) => d.si_unit(),
            _ => "",
        }
    }

    fn plain(&self) -> String {
        match self {
            Field::Num(v, _) => sig12(*v),
            Field::Text(s) => s.clone(),
            Field::Flag(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Num(v, _) => sig12_json(*v),
            Field::Text(s) => Value::String(s.clone()),
            Field::Flag(b) => Value::Bool(*b),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Record(pub Vec<(String, Field)>);

impl Record {
    pub fn num(mut self, name: &str, v: f64, dim: Dimension) -> Self {
        self.0.push((name.to_string(), Field::Num(v, dim)));
        self
    }

    pub fn text(mut self, name: &str, s: impl Into<String>) -> Self {
        self.0.push((name.to_string(), Field::Text(s.into())));
        self
    }

    pub fn flag(mut self, name: &str, b: bool) -> Self {
        self.0.push((name.to_string(), Field::Flag(b)));
        self
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.0.iter().map(|(k, f)| (k.clone(), f.json())).collect())
    }

    pub fn units_json(&self) -> Value {
        Value::Object(
            self.0
                .iter()
                .filter(|(_, f)| matches!(f, Field::Num(..)))
                .map(|(k, f)| (k.clone(), Value::String(f.unit().to_string())))
                .collect(),
        )
    }

    fn text_block(&self) -> String {
        self.0
            .iter()
            .map(|(k, f)| match f {
                Field::Num(_, Dimension::Dimensionless) | Field::Text(_) | Field::Flag(_) => {
                    format!("{k} = {}\n", f.plain())
                }
                Field::Num(..) => format!("{k} = {} {}\n", f.plain(), f.unit()),
            })
            .collect()
    }
}

/// CSV header cell `name [unit]`.
pub fn header_cell(name: &str, unit: &str) -> String {
    if unit.is_empty() {
        name.to_string()
    } else {
        format!("{name} [{unit}]")
    }
}

/// Renders records that share one layout. `json_extra` members are merged
/// into the JSON object.
pub fn render(
    records: &[Record],
    format: Format,
    json_extra: Map<String, Value>,
) -> Result<String, CliError> {
    match format {
        Format::Text => Ok(records
            .iter()
            .map(Record::text_block)
            .collect::<Vec<_>>()
            .join("\n")),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if let Some(first) = records.first() {
                w.write_record(first.0.iter().map(|(k, f)| header_cell(k, f.unit())))?;
            }
            for r in records {
                w.write_record(r.0.iter().map(|(_, f)| f.plain()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
        }
        Format::Json => {
            let mut obj = json_extra;
            match records {
                [one] => {
                    obj.insert("result".into(), one.to_json());
                    obj.insert("units".into(), one.units_json());
                }
                many => {
                    obj.insert(
                        "results".into(),
                        Value::Array(many.iter().map(Record::to_json).collect()),
                    );
                    if let Some(first) = many.first() {
                        obj.insert("units".into(), first.units_json());
                    }
                }
            }
            Ok(serde_json::to_string_pretty(&Value::Object(obj))? + "\n")
        }
    }
}
