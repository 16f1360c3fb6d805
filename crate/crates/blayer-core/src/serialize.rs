//! Deterministic artifact serialization.
//!
//! Every data artifact the library emits (constants, profile tables,
//! sweep reports) must be byte-identical across runs with the same
//! configuration. Three rules make that hold:
//!
//! * floating-point leaves are written as `{:.16e}` strings (17
//!   significant digits round-trip every finite `f64` exactly and the
//!   text form is platform-independent);
//! * objects are backed by a sorted map, so key order never depends on
//!   insertion order;
//! * documents end with a single trailing newline.
//!
//! Configuration identity is a SHA-256 over the sorted `key=value` lines,
//! so two configs hash equal iff they bind the same values regardless of
//! the order the pairs were collected in.

use num_complex::Complex64;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Canonical text form of a floating-point leaf.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Parse a floating-point leaf written by [`fmt_f64`].
pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Serde(format!("bad float literal {s:?}: {e}")))
}

/// A JSON document with sorted keys and canonical numeric leaves.
///
/// Thin wrapper over [`serde_json::Map`] (BTree-backed, hence sorted) that
/// funnels every `f64` through [`fmt_f64`] on the way in and validates on
/// the way out.
#[derive(Debug, Clone, Default)]
pub struct JsonDoc {
    map: Map<String, Value>,
}

impl JsonDoc {
    /// Empty document.
    pub fn new() -> Self {
        JsonDoc { map: Map::new() }
    }

    /// Set a string field.
    pub fn set_str(&mut self, key: &str, v: &str) -> &mut Self {
        self.map.insert(key.into(), Value::String(v.into()));
        self
    }

    /// Set a boolean field.
    pub fn set_bool(&mut self, key: &str, v: bool) -> &mut Self {
        self.map.insert(key.into(), Value::Bool(v));
        self
    }

    /// Set an unsigned integer field (integers are exact in JSON and stay
    /// native numbers).
    pub fn set_u64(&mut self, key: &str, v: u64) -> &mut Self {
        self.map.insert(key.into(), Value::Number(v.into()));
        self
    }

    /// Set a floating-point field (canonical string form).
    pub fn set_f64(&mut self, key: &str, v: f64) -> &mut Self {
        self.map.insert(key.into(), Value::String(fmt_f64(v)));
        self
    }

    /// Set a complex field as an object with `re`/`im` leaves.
    pub fn set_c64(&mut self, key: &str, v: Complex64) -> &mut Self {
        let mut obj = Map::new();
        obj.insert("im".into(), Value::String(fmt_f64(v.im)));
        obj.insert("re".into(), Value::String(fmt_f64(v.re)));
        self.map.insert(key.into(), Value::Object(obj));
        self
    }

    /// Set an array of floating-point leaves.
    pub fn set_f64_slice(&mut self, key: &str, vs: &[f64]) -> &mut Self {
        let arr = vs.iter().map(|&v| Value::String(fmt_f64(v))).collect();
        self.map.insert(key.into(), Value::Array(arr));
        self
    }

    /// Set an array of complex leaves (each an `re`/`im` object).
    pub fn set_c64_slice(&mut self, key: &str, vs: &[Complex64]) -> &mut Self {
        let arr = vs
            .iter()
            .map(|v| {
                let mut obj = Map::new();
                obj.insert("im".into(), Value::String(fmt_f64(v.im)));
                obj.insert("re".into(), Value::String(fmt_f64(v.re)));
                Value::Object(obj)
            })
            .collect();
        self.map.insert(key.into(), Value::Array(arr));
        self
    }

    /// Set a nested document.
    pub fn set_doc(&mut self, key: &str, doc: JsonDoc) -> &mut Self {
        self.map.insert(key.into(), Value::Object(doc.map));
        self
    }

    /// Set an array of nested documents.
    pub fn set_docs(&mut self, key: &str, docs: Vec<JsonDoc>) -> &mut Self {
        let arr = docs.into_iter().map(|d| Value::Object(d.map)).collect();
        self.map.insert(key.into(), Value::Array(arr));
        self
    }

    fn field(&self, key: &str) -> Result<&Value> {
        self.map
            .get(key)
            .ok_or_else(|| Error::Serde(format!("missing field {key:?}")))
    }

    /// Read a string field.
    pub fn get_str(&self, key: &str) -> Result<&str> {
        self.field(key)?
            .as_str()
            .ok_or_else(|| Error::Serde(format!("field {key:?} is not a string")))
    }

    /// Read a boolean field.
    pub fn get_bool(&self, key: &str) -> Result<bool> {
        self.field(key)?
            .as_bool()
            .ok_or_else(|| Error::Serde(format!("field {key:?} is not a boolean")))
    }

    /// Read an unsigned integer field.
    pub fn get_u64(&self, key: &str) -> Result<u64> {
        self.field(key)?
            .as_u64()
            .ok_or_else(|| Error::Serde(format!("field {key:?} is not an unsigned integer")))
    }

    /// Read a floating-point field.
    pub fn get_f64(&self, key: &str) -> Result<f64> {
        parse_f64(self.get_str(key)?)
    }

    /// Read a complex field.
    pub fn get_c64(&self, key: &str) -> Result<Complex64> {
        let obj = self
            .field(key)?
            .as_object()
            .ok_or_else(|| Error::Serde(format!("field {key:?} is not a complex object")))?;
        let part = |name: &str| -> Result<f64> {
            let v = obj
                .get(name)
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Serde(format!("field {key:?} lacks a {name:?} leaf")))?;
            parse_f64(v)
        };
        Ok(Complex64::new(part("re")?, part("im")?))
    }

    /// Read an array of floating-point leaves.
    pub fn get_f64_slice(&self, key: &str) -> Result<Vec<f64>> {
        let arr = self
            .field(key)?
            .as_array()
            .ok_or_else(|| Error::Serde(format!("field {key:?} is not an array")))?;
        arr.iter()
            .map(|v| {
                v.as_str()
                    .ok_or_else(|| Error::Serde(format!("field {key:?} holds a non-string leaf")))
                    .and_then(parse_f64)
            })
            .collect()
    }

    /// Read a nested document.
    pub fn get_doc(&self, key: &str) -> Result<JsonDoc> {
        let obj = self
            .field(key)?
            .as_object()
            .ok_or_else(|| Error::Serde(format!("field {key:?} is not an object")))?;
        Ok(JsonDoc { map: obj.clone() })
    }

    /// Read an array of nested documents.
    pub fn get_docs(&self, key: &str) -> Result<Vec<JsonDoc>> {
        let arr = self
            .field(key)?
            .as_array()
            .ok_or_else(|| Error::Serde(format!("field {key:?} is not an array")))?;
        arr.iter()
            .map(|v| {
                v.as_object()
                    .map(|obj| JsonDoc { map: obj.clone() })
                    .ok_or_else(|| Error::Serde(format!("field {key:?} holds a non-object item")))
            })
            .collect()
    }

    /// Whether a field is present.
    pub fn contains(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    /// Canonical text: pretty-printed, sorted keys, trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&Value::Object(self.map.clone()))
            .expect("maps of strings always serialize");
        s.push('\n');
        s
    }

    /// Parse a document previously written by [`Self::to_json`] (or any
    /// JSON object).
    pub fn from_json(s: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(s).map_err(|e| Error::Serde(format!("invalid JSON: {e}")))?;
        match v {
            Value::Object(map) => Ok(JsonDoc { map }),
            _ => Err(Error::Serde("top-level JSON value is not an object".into())),
        }
    }
}

/// SHA-256 of the sorted `key=value` lines of a configuration, in lowercase
/// hex. Insensitive to the order the pairs are supplied in; sensitive to
/// every value change.
pub fn config_hash<K: AsRef<str>, V: AsRef<str>>(pairs: &[(K, V)]) -> String {
    let mut lines: Vec<String> = pairs
        .iter()
        .map(|(k, v)| format!("{}={}", k.as_ref(), v.as_ref()))
        .collect();
    lines.sort();
    let mut hasher = Sha256::new();
    for line in &lines {
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        use std::fmt::Write;
        write!(hex, "{byte:02x}").expect("writing to a String cannot fail");
    }
    hex
}
