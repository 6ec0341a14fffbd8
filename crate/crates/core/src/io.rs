//! Fan file parsing and report serialization.
//!
//! A fan file is a single JSON object, either
//!   {"dim": 2, "rays": [[1,0],[0,1],[-1,-2]], "max_cones": [[0,1],[1,2],[2,0]]}
//! or {"wps": [1,1,2]}, optionally with a "label". Integers are arbitrary
//! precision, written in decimal. Machine-format reports are JSON with
//! sorted keys, byte-identical across runs for identical inputs.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::fan::{validate_fan, Cone, Fan};

#[derive(Clone, Debug)]
pub struct ParsedFan {
    pub fan: Fan,
    pub label: Option<String>,
    pub warnings: Vec<String>,
}

fn value_to_bigint(v: &Value, ctx: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string())
            .map_err(|_| Error::Parse(format!("{ctx}: {n} is not an integer"))),
        other => Err(Error::Parse(format!("{ctx}: expected an integer, got {other}"))),
    }
}

fn value_to_usize(v: &Value, ctx: &str) -> Result<usize> {
    let big = value_to_bigint(v, ctx)?;
    let (sign, digits) = big.to_u64_digits();
    match (sign, digits.len()) {
        (num_bigint::Sign::NoSign, _) => Ok(0),
        (num_bigint::Sign::Plus, 1) => Ok(digits[0] as usize),
        _ => Err(Error::Parse(format!("{ctx}: index out of range"))),
    }
}

fn int_vector(v: &Value, ctx: &str) -> Result<Vec<BigInt>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{ctx}: expected an array")))?;
    arr.iter().map(|x| value_to_bigint(x, ctx)).collect()
}

/// Parse and validate a fan definition.
pub fn parse_fan(text: &str) -> Result<ParsedFan> {
    let parsed = parse_fan_raw(text)?;
    validate_fan(&parsed.fan)?;
    Ok(parsed)
}

/// Parse a fan definition without validating the fan axioms (weighted
/// projective inputs are still constructed, hence validated).
pub fn parse_fan_raw(text: &str) -> Result<ParsedFan> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("fan file must be a JSON object".into()))?;
    let label = obj.get("label").and_then(|v| v.as_str()).map(String::from);
    if let Some(wps) = obj.get("wps") {
        let weights = int_vector(wps, "wps")?;
        let built = crate::fan::make_wps_fan(&weights)?;
        return Ok(ParsedFan { fan: built.fan, label, warnings: built.warnings });
    }
    let dim = value_to_usize(
        obj.get("dim").ok_or_else(|| Error::Parse("missing \"dim\"".into()))?,
        "dim",
    )?;
    let rays_val = obj
        .get("rays")
        .ok_or_else(|| Error::Parse("missing \"rays\"".into()))?
        .as_array()
        .ok_or_else(|| Error::Parse("\"rays\" must be an array".into()))?
        .clone();
    let rays: Vec<Vec<BigInt>> = rays_val
        .iter()
        .map(|r| int_vector(r, "rays"))
        .collect::<Result<_>>()?;
    let cones_val = obj
        .get("max_cones")
        .ok_or_else(|| Error::Parse("missing \"max_cones\"".into()))?
        .as_array()
        .ok_or_else(|| Error::Parse("\"max_cones\" must be an array".into()))?
        .clone();
    let max_cones: Vec<Cone> = cones_val
        .iter()
        .map(|c| {
            let arr = c
                .as_array()
                .ok_or_else(|| Error::Parse("each cone must be an array".into()))?;
            let idx: Result<Vec<usize>> =
                arr.iter().map(|x| value_to_usize(x, "max_cones")).collect();
            Ok(Cone::new(idx?))
        })
        .collect::<Result<_>>()?;
    let fan = Fan::new(dim, rays, max_cones);
    Ok(ParsedFan { fan, label, warnings: Vec::new() })
}

/// Emit a fan definition as a JSON value (inverse of `parse_fan` up to key
/// order).
pub fn emit_fan(fan: &Fan, label: Option<&str>) -> Value {
    let mut obj = Map::new();
    if let Some(l) = label {
        obj.insert("label".into(), Value::String(l.into()));
    }
    obj.insert("dim".into(), Value::Number(fan.dim.into()));
    obj.insert(
        "rays".into(),
        Value::Array(
            fan.rays
                .iter()
                .map(|r| Value::Array(r.iter().map(bigint_value).collect()))
                .collect(),
        ),
    );
    obj.insert(
        "max_cones".into(),
        Value::Array(
            fan.max_cones
                .iter()
                .map(|c| {
                    Value::Array(
                        c.ray_indices()
                            .iter()
                            .map(|&i| Value::Number(i.into()))
                            .collect(),
                    )
                })
                .collect(),
        ),
    );
    Value::Object(obj)
}

pub fn bigint_value(x: &BigInt) -> Value {
    Value::Number(
        serde_json::Number::from_str(&x.to_string()).expect("integer literals parse as numbers"),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Human,
    Machine,
}

/// A structured command report; the machine rendering round-trips through
/// JSON, the human rendering is a plain-text digest.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub warnings: Vec<String>,
    pub assumptions: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            inputs: Value::Object(Map::new()),
            results: Value::Object(Map::new()),
            warnings: Vec::new(),
            assumptions: Vec::new(),
        }
    }

    pub fn input(mut self, key: &str, value: Value) -> Self {
        if let Value::Object(map) = &mut self.inputs {
            map.insert(key.into(), value);
        }
        self
    }

    pub fn result(mut self, key: &str, value: Value) -> Self {
        if let Value::Object(map) = &mut self.results {
            map.insert(key.into(), value);
        }
        self
    }
}

fn render_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(val, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", plain(val))),
                }
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str(&format!("{pad}(none)\n"));
            } else if items.iter().all(|i| !matches!(i, Value::Object(_) | Value::Array(_))) {
                out.push_str(&format!("{pad}{}\n", items.iter().map(plain).collect::<Vec<_>>().join(", ")));
            } else {
                for item in items {
                    match item {
                        Value::Object(_) | Value::Array(_) => {
                            out.push_str(&format!("{pad}-\n"));
                            render_value(item, indent + 1, out);
                        }
                        _ => out.push_str(&format!("{pad}- {}\n", plain(item))),
                    }
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", plain(v))),
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Serialize a report. Machine format is single-line JSON with sorted keys;
/// human format is an indented digest of the same data.
pub fn emit_report(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Machine => {
            // route through Value so keys are sorted deterministically
            let value = serde_json::to_value(report).expect("report serializes");
            serde_json::to_string(&value).expect("value serializes")
        }
        ReportFormat::Human => {
            let mut out = String::new();
            out.push_str(&format!("== {} ==\n", report.command));
            if let Value::Object(map) = &report.inputs {
                if !map.is_empty() {
                    out.push_str("inputs:\n");
                    render_value(&report.inputs, 1, &mut out);
                }
            }
            out.push_str("results:\n");
            render_value(&report.results, 1, &mut out);
            if report.warnings.is_empty() {
                out.push_str("warnings: (none)\n");
            } else {
                out.push_str("warnings:\n");
                for w in &report.warnings {
                    out.push_str(&format!("  - {w}\n"));
                }
            }
            if !report.assumptions.is_empty() {
                out.push_str("assumptions:\n");
                for a in &report.assumptions {
                    out.push_str(&format!("  - {a}\n"));
                }
            }
            out
        }
    }
}

/// Parse a machine-format report back into the structure.
pub fn parse_report(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid report: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::bi;

    const P112: &str =
        r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-2]],"max_cones":[[0,1],[1,2],[2,0]]}"#;

    #[test]
    fn parse_explicit_fan() {
        let parsed = parse_fan(P112).unwrap();
        assert_eq!(parsed.fan.dim, 2);
        assert_eq!(parsed.fan.rays[2], vec![bi(-1), bi(-2)]);
        assert_eq!(parsed.fan.max_cones.len(), 3);
    }

    #[test]
    fn parse_wps_fan() {
        let parsed = parse_fan(r#"{"wps":[1,1,2],"label":"P(1,1,2)"}"#).unwrap();
        assert_eq!(parsed.fan.rays[2], vec![bi(-1), bi(-2)]);
        assert_eq!(parsed.label.as_deref(), Some("P(1,1,2)"));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_fan(r#"{"dim":2,"max_cones":[[0,1]]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_fan(r#"{"dim":2,"rays":[[2,0],[0,1]],"max_cones":[[0,1]]}"#),
            Err(Error::InvalidFan(_))
        ));
    }

    #[test]
    fn fan_roundtrip() {
        let parsed = parse_fan(P112).unwrap();
        let emitted = emit_fan(&parsed.fan, None);
        let reparsed = parse_fan(&emitted.to_string()).unwrap();
        assert_eq!(parsed.fan, reparsed.fan);
    }

    #[test]
    fn report_roundtrip_and_determinism() {
        let report = Report::new("kh")
            .input("fan", Value::String("P(1,1,2)".into()))
            .result("multiplicities", serde_json::json!({"0": 3}));
        let a = emit_report(&report, ReportFormat::Machine);
        let b = emit_report(&report, ReportFormat::Machine);
        assert_eq!(a, b);
        let back = parse_report(&a).unwrap();
        assert_eq!(report, back);
        assert!(a.contains(r#""multiplicities":{"0":3}"#));
    }

    #[test]
    fn big_integer_rays_roundtrip() {
        let big = "123456789012345678901234567890";
        let text = format!(
            r#"{{"dim":1,"rays":[[1],[-1]],"max_cones":[[0],[1]],"label":"{big}"}}"#
        );
        let parsed = parse_fan(&text).unwrap();
        assert_eq!(parsed.label.as_deref(), Some(big));
        let v = bigint_value(&BigInt::from_str(big).unwrap());
        assert_eq!(v.to_string(), big);
    }
}
