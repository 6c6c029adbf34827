//! Canonical JSON for reports: sorted keys, floats at 17 significant digits, and a
//! `schema` version stamp.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::linalg2::{Sl2Vector, C64};

pub const SCHEMA_VERSION: &str = "1.0.0";

pub fn report_schema_version() -> &'static str {
    SCHEMA_VERSION
}

/// Pretty formatter that prints every float as `d.dddddddddddddddde±x`.
struct Canonical<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident),*) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
            self.0.$name(w)
        })*
    };
}

impl Formatter for Canonical<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    delegate!(begin_array, end_array, end_array_value, begin_object, end_object, end_object_value);
}

/// Serializes with sorted keys and fixed float formatting; identical values give
/// identical bytes.
pub fn to_canonical_string(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, Canonical(PrettyFormatter::with_indent(b"  ")));
    // `Value` objects are BTreeMaps, so keys come out sorted
    value.serialize(&mut ser).expect("in-memory write");
    let mut s = String::from_utf8(buf).expect("serde_json emits UTF-8");
    s.push('\n');
    s
}

/// Adds the `schema` and `kind` fields to a report object.
pub fn stamp(kind: &str, body: Value) -> Value {
    let mut map = match body {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("body".into(), other);
            m
        }
    };
    map.insert("schema".into(), Value::from(SCHEMA_VERSION));
    map.insert("kind".into(), Value::from(kind));
    Value::Object(map)
}

pub fn check_schema(value: &Value) -> Result<()> {
    match value.get("schema").and_then(Value::as_str) {
        Some(SCHEMA_VERSION) => Ok(()),
        Some(other) => Err(Error::Report(format!("unsupported schema {other}"))),
        None => Err(Error::Report("missing schema field".into())),
    }
}

pub fn complex(z: C64) -> Value {
    Value::from(vec![z.re, z.im])
}

pub fn complex_vec(v: &[C64]) -> Value {
    Value::Array(v.iter().copied().map(complex).collect())
}

pub fn sl2_vector(x: &Sl2Vector) -> Value {
    complex_vec(&x.coords())
}

/// Floats that may be non-finite: JSON has no infinity, so those become `null`.
pub fn real(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}
