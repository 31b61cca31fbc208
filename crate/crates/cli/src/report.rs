use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};
use tubegeo::linalg::{fmt_sig12, sig12};

use crate::config::RunConfig;
use crate::exit::Failure;

/// Rounds every float in the tree to 12 significant digits.
pub fn round(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = sig12(n.as_f64().unwrap());
            serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round(v))).collect()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

/// Report skeleton: command, config hash, seed, tolerances and the resolved config.
pub fn header(cfg: &RunConfig, tolerances: Value) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(cfg.command));
    m.insert("config_hash".into(), json!(cfg.hash()));
    m.insert("seed".into(), json!(cfg.seed));
    m.insert("tolerances".into(), tolerances);
    m.insert("config".into(), to_value(cfg));
    m
}

/// Formats a float for CSV cells.
pub fn num(x: f64) -> String {
    fmt_sig12(x)
}

/// Writes the finished report in one go to `--out` or stdout.
pub fn emit(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Config(format!("cannot write {}: {}", path.display(), e))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::Config(e.to_string()))
        }
    }
}

pub fn json_text(v: Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&round(Value::Object(v))).expect("report serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_integers_and_trims_floats() {
        let v = round(json!({"a": 1, "b": [0.1 + 0.2, 1.0 / 3.0]}));
        assert_eq!(v["a"], json!(1));
        assert_eq!(v["b"][0], json!(0.3));
        assert_eq!(v["b"][1].as_f64().unwrap().to_string(), "0.333333333333");
    }
}
