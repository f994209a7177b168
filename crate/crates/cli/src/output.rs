use std::fmt::{self, Write as _};

use serde_json::{Map, Value as Json};

use crate::command::Format;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Int(u128),
    Bool(bool),
    Str(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => write!(f, "{s}"),
        }
    }
}

impl Value {
    fn json(&self) -> Json {
        match self {
            Value::Int(v) => match u64::try_from(*v) {
                Ok(small) => Json::from(small),
                Err(_) => Json::from(v.to_string()),
            },
            Value::Bool(b) => Json::from(*b),
            Value::Str(s) => Json::from(s.as_str()),
        }
    }
}

macro_rules! from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Value {
            fn from(v: $t) -> Self {
                Value::Int(v as u128)
            }
        }
    )*};
}
from_int!(u8, u16, u32, u64, u128, usize);

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

/// Named fields in a fixed order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record {
    pub fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.to_string(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    fn kv_line(&self) -> String {
        let mut line = String::new();
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            let text = v.to_string();
            if text.is_empty() || text.chars().any(|c| c.is_whitespace() || c == '"' || c == '=') {
                let _ = write!(line, "{k}={}", Json::from(text));
            } else {
                let _ = write!(line, "{k}={text}");
            }
        }
        line
    }

    fn json_line(&self) -> String {
        let map: Map<String, Json> = self.fields.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        Json::Object(map).to_string()
    }

    fn text_block(&self) -> String {
        let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.fields {
            let _ = writeln!(out, "{k:<width$}  {}", v);
        }
        out
    }
}

/// What a command prints: records, and optionally a custom text rendering.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    /// Text format output; records are printed as aligned blocks when unset.
    pub text: Option<String>,
    pub records: Vec<Record>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => match &self.text {
                Some(t) => t.clone(),
                None => self.records.iter().map(Record::text_block).collect::<Vec<_>>().join("\n"),
            },
            Format::Kv => self.records.iter().map(|r| r.kv_line() + "\n").collect(),
            Format::Json => self.records.iter().map(|r| r.json_line() + "\n").collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report {
            text: Some("12\n".into()),
            records: vec![Record::new()
                .with("command", "hn")
                .with("group", "C2xC3")
                .with("n", 2usize)
                .with("hn", 12u128)
                .with("note", "two words")
                .with("big", u128::MAX)],
        }
    }

    #[test]
    fn formats() {
        let r = sample();
        assert_eq!(r.render(Format::Text), "12\n");
        assert_eq!(
            r.render(Format::Kv),
            format!("command=hn group=C2xC3 n=2 hn=12 note=\"two words\" big={}\n", u128::MAX)
        );
        assert_eq!(
            r.render(Format::Json),
            format!(
                "{{\"command\":\"hn\",\"group\":\"C2xC3\",\"n\":2,\"hn\":12,\"note\":\"two words\",\"big\":\"{}\"}}\n",
                u128::MAX
            )
        );
    }

    #[test]
    fn text_without_headline_aligns_keys() {
        let r = Report {
            text: None,
            records: vec![Record::new().with("order", 6usize).with("abelian", false)],
        };
        assert_eq!(r.render(Format::Text), "order    6\nabelian  false\n");
    }
}
