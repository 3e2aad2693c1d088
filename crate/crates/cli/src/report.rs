use std::fmt::Write as _;

use num_bigint::BigInt;
use serde_json::{Map, Number, Value as Json};

use crate::args::OutputFormat;

#[derive(Clone, Debug)]
pub enum Value {
    Int(BigInt),
    Bool(bool),
    Text(String),
    List(Vec<Value>),
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Int(n.into())
    }
}

impl From<BigInt> for Value {
    fn from(n: BigInt) -> Self {
        Value::Int(n)
    }
}

impl From<&BigInt> for Value {
    fn from(n: &BigInt) -> Self {
        Value::Int(n.clone())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl<T: Into<Value>> From<Vec<T>> for Value {
    fn from(items: Vec<T>) -> Self {
        Value::List(items.into_iter().map(Into::into).collect())
    }
}

impl Value {
    fn text(&self, out: &mut String) {
        match self {
            Value::Int(n) => write!(out, "{n}").unwrap(),
            Value::Bool(b) => write!(out, "{b}").unwrap(),
            Value::Text(s) if s.contains(' ') => write!(out, "\"{s}\"").unwrap(),
            Value::Text(s) => out.push_str(s),
            Value::List(items) => {
                out.push('[');
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    v.text(out);
                }
                out.push(']');
            }
        }
    }

    fn json(&self) -> Json {
        match self {
            // integers that overflow i64 stay exact as strings
            Value::Int(n) => {
                i64::try_from(n).map_or_else(|_| Json::String(n.to_string()), |v| Json::Number(Number::from(v)))
            }
            Value::Bool(b) => Json::Bool(*b),
            Value::Text(s) => Json::String(s.clone()),
            Value::List(items) => Json::Array(items.iter().map(Value::json).collect()),
        }
    }
}

/// One report line: a record kind and ordered fields.
#[derive(Clone, Debug)]
pub struct Record {
    kind: &'static str,
    fields: Vec<(&'static str, Value)>,
}

impl Record {
    pub fn new(kind: &'static str) -> Self {
        Record { kind, fields: Vec::new() }
    }

    pub fn field(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.fields.push((key, value.into()));
        self
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => {
                let mut out = self.kind.to_string();
                for (k, v) in &self.fields {
                    write!(out, " {k}=").unwrap();
                    v.text(&mut out);
                }
                out
            }
            OutputFormat::JsonLines => {
                let mut map = Map::new();
                map.insert("record".into(), Json::String(self.kind.into()));
                for (k, v) in &self.fields {
                    map.insert((*k).into(), v.json());
                }
                Json::Object(map).to_string()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_quotes_values_with_spaces() {
        let r = Record::new("fixedpoints").field("f", "u1 - 2").field("torsion", vec![BigInt::from(31)]);
        assert_eq!(r.render(OutputFormat::Text), "fixedpoints f=\"u1 - 2\" torsion=[31]");
    }

    #[test]
    fn json_keeps_field_order_and_big_values() {
        let big: BigInt = BigInt::from(1) << 80u32;
        let r = Record::new("snf").field("invariants", vec![BigInt::from(2), big.clone()]).field("ok", true);
        assert_eq!(
            r.render(OutputFormat::JsonLines),
            format!("{{\"record\":\"snf\",\"invariants\":[2,\"{big}\"],\"ok\":true}}")
        );
    }
}
