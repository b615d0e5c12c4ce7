use clap::ValueEnum;
use serde_json::{Number, Value};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub struct Printer {
    pub format: Format,
    precision: usize,
}

impl Printer {
    pub fn new(format: Format, precision: usize) -> Self {
        Self {
            format,
            precision: precision.clamp(1, 17),
        }
    }

    /// Rounds to the configured number of significant digits.
    pub fn round(&self, x: f64) -> f64 {
        if !x.is_finite() || x == 0.0 {
            return x;
        }
        format!("{:.*e}", self.precision - 1, x)
            .parse()
            .unwrap_or(x)
    }

    pub fn num(&self, x: f64) -> String {
        let r = self.round(x);
        if r != 0.0 && r.is_finite() && (r.abs() < 1e-4 || r.abs() >= 1e15) {
            format!("{r:e}")
        } else {
            r.to_string()
        }
    }

    pub fn json_num(&self, x: f64) -> Value {
        Number::from_f64(self.round(x)).map_or(Value::Null, Value::Number)
    }

    /// Applies [`Printer::round`] to every non-integer number in `v`.
    pub fn round_floats(&self, v: Value) -> Value {
        match v {
            Value::Number(n) if n.is_f64() => self.json_num(n.as_f64().unwrap_or(f64::NAN)),
            Value::Array(items) => {
                Value::Array(items.into_iter().map(|i| self.round_floats(i)).collect())
            }
            Value::Object(map) => Value::Object(
                map.into_iter()
                    .map(|(k, v)| (k, self.round_floats(v)))
                    .collect(),
            ),
            other => other,
        }
    }
}

/// Pretty JSON with the top-level `"schema": 1` tag.
pub fn render_json(mut v: Value) -> String {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), Value::from(1));
    }
    serde_json::to_string_pretty(&v).expect("values built from serde_json serialize")
}
