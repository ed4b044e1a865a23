//! Parameter files: flat `key=value` text or a JSON object, with the field
//! names `f, w, s_A, s_V, x, z, y, u_T, p`. Values may be numbers or
//! strings holding fractions like `"1/24"`.

use std::collections::BTreeMap;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rollup_game::rollup::ProtocolParams;

use crate::number::{parse_rational, to_f64};

pub const FIELDS: [&str; 9] = ["f", "w", "s_A", "s_V", "x", "z", "y", "u_T", "p"];

/// Defaults for the stakes, search cost and attack value when neither a
/// file nor a flag supplies them.
const DEFAULTS: [(&str, (i64, i64)); 4] = [
    ("s_A", (1, 1)),
    ("s_V", (1, 1)),
    ("x", (1, 24)),
    ("z", (24, 1)),
];

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("unknown parameter {0:?} (expected one of f, w, s_A, s_V, x, z, y, u_T, p)")]
    UnknownKey(String),
    #[error("parameter {0:?} given twice")]
    DuplicateKey(String),
    #[error("line {line}: expected key=value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("parameter {key}: {reason}")]
    Value { key: String, reason: String },
    #[error("invalid JSON parameter file: {0}")]
    Json(String),
}

/// Exact parameter values keyed by field name; absent keys fall back to
/// defaults when converted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamSet {
    values: BTreeMap<&'static str, BigRational>,
}

fn field(key: &str) -> Result<&'static str, ConfigError> {
    FIELDS
        .iter()
        .copied()
        .find(|f| *f == key)
        .ok_or_else(|| ConfigError::UnknownKey(key.to_string()))
}

impl ParamSet {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_key_values(text)
        }
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    fn insert_new(&mut self, key: &str, value: BigRational) -> Result<(), ConfigError> {
        let key = field(key)?;
        if self.values.insert(key, value).is_some() {
            return Err(ConfigError::DuplicateKey(key.to_string()));
        }
        Ok(())
    }

    fn parse_key_values(text: &str) -> Result<Self, ConfigError> {
        let mut set = ParamSet::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            })?;
            let key = key.trim();
            let value = parse_rational(value).map_err(|reason| ConfigError::Value {
                key: key.to_string(),
                reason,
            })?;
            set.insert_new(key, value)?;
        }
        Ok(set)
    }

    fn parse_json(text: &str) -> Result<Self, ConfigError> {
        let map: serde_json::Map<String, serde_json::Value> =
            serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))?;
        let mut set = ParamSet::default();
        for (key, value) in map {
            let text = match &value {
                serde_json::Value::Number(n) => n.to_string(),
                serde_json::Value::String(s) => s.clone(),
                other => {
                    return Err(ConfigError::Value {
                        key,
                        reason: format!("expected a number or fraction string, got {other}"),
                    })
                }
            };
            let value = parse_rational(&text).map_err(|reason| ConfigError::Value {
                key: key.clone(),
                reason,
            })?;
            set.insert_new(&key, value)?;
        }
        Ok(set)
    }

    /// Sets or overrides a value.
    pub fn set(&mut self, key: &str, value: BigRational) -> Result<(), ConfigError> {
        self.values.insert(field(key)?, value);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&BigRational> {
        self.values.get(key)
    }

    fn value_or_default(&self, key: &'static str) -> BigRational {
        if let Some(v) = self.values.get(key) {
            return v.clone();
        }
        DEFAULTS
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, (n, d))| BigRational::new((*n).into(), (*d).into()))
            .unwrap_or_else(BigRational::zero)
    }

    pub fn exact(&self) -> ProtocolParams<BigRational> {
        let v = |k| self.value_or_default(k);
        ProtocolParams {
            f: v("f"),
            w: v("w"),
            s_a: v("s_A"),
            s_v: v("s_V"),
            x: v("x"),
            z: v("z"),
            y: v("y"),
            u_t: self.values.get("u_T").cloned(),
            p: self.values.get("p").cloned(),
        }
    }

    pub fn float(&self) -> ProtocolParams {
        let e = self.exact();
        ProtocolParams {
            f: to_f64(&e.f),
            w: to_f64(&e.w),
            s_a: to_f64(&e.s_a),
            s_v: to_f64(&e.s_v),
            x: to_f64(&e.x),
            z: to_f64(&e.z),
            y: to_f64(&e.y),
            u_t: e.u_t.as_ref().map(to_f64),
            p: e.p.as_ref().map(to_f64),
        }
    }

    /// Key=value text that parses back to the same set.
    pub fn to_key_values(&self) -> String {
        self.values
            .iter()
            .map(|(k, v)| {
                if v.denom().is_one() {
                    format!("{k}={}\n", v.numer())
                } else {
                    format!("{k}={}/{}\n", v.numer(), v.denom())
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_missing_fields() {
        let p = ParamSet::default().float();
        assert_eq!((p.s_a, p.s_v, p.z, p.f), (1.0, 1.0, 24.0, 0.0));
        assert_eq!(p.x, 1.0 / 24.0);
        assert!(p.p.is_none() && p.u_t.is_none());
    }

    #[test]
    fn comments_and_blank_lines() {
        let set = ParamSet::parse("# scenario\n\ns_A = 2 # stake\nz=1/3\n").unwrap();
        assert_eq!(set.get("s_A"), Some(&BigRational::from_integer(2.into())));
        assert_eq!(set.float().z, 1.0 / 3.0);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        match ParamSet::parse("s_A=1\nz 24\n") {
            Err(ConfigError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
