//! JSON encoding shared by all commands: reals with 17 significant digits,
//! complex numbers as [re, im], ∞ as "infinity".

use modatlas::ext::ExtComplex;
use num_complex::Complex64;
use serde_json::{Map, Number, Value};
use std::str::FromStr;

pub fn real(x: f64) -> Value {
    if x.is_nan() {
        Value::Null
    } else if x.is_infinite() {
        Value::String(if x > 0.0 { "infinity" } else { "-infinity" }.into())
    } else {
        Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted float is a JSON number"))
    }
}

pub fn int(n: i64) -> Value {
    Value::Number(n.into())
}

pub fn complex(z: Complex64) -> Value {
    Value::Array(vec![real(z.re), real(z.im)])
}

pub fn ext(v: ExtComplex) -> Value {
    match v {
        ExtComplex::Finite(z) => complex(z),
        ExtComplex::Infinity => Value::String("infinity".into()),
    }
}

/// An object with keys in insertion order.
pub fn object<I, K>(entries: I) -> Value
where
    I: IntoIterator<Item = (K, Value)>,
    K: Into<String>,
{
    Value::Object(entries.into_iter().map(|(k, v)| (k.into(), v)).collect::<Map<String, Value>>())
}

/// Pretty-printed and newline-terminated.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
