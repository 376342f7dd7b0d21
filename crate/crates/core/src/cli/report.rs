//! JSON report layout (schema 1) and the CSV sweep table.

use serde_json::{json, Map, Value};

use crate::inequality::{InequalityReport, Provenance};
use crate::scalar::Probability;

pub const TABLE_HEADER: &str = "param_rad,mean_a,mean_b,corr,upper_slack,lower_slack";

pub fn provenance_name(p: Provenance) -> &'static str {
    match p {
        Provenance::SingleDistribution => "single-distribution",
        Provenance::Mixed => "mixed",
    }
}

fn verdict_name(satisfied: bool) -> &'static str {
    if satisfied {
        "satisfied"
    } else {
        "violated"
    }
}

/// The sections every report carries, from an inequality check.
pub fn check_sections<T: Probability>(report: &InequalityReport<T>) -> Map<String, Value> {
    let r = report.to_f64();
    let witness = |w: &Option<crate::inequality::SlackWitness<f64>>| match w {
        Some(w) => json!({ "cell": w.cell, "probability": w.probability, "slack": 4.0 * w.probability }),
        None => Value::Null,
    };
    let witnesses = if r.witness_upper.is_some() || r.witness_lower.is_some() {
        json!({ "upper": witness(&r.witness_upper), "lower": witness(&r.witness_lower) })
    } else {
        Value::Null
    };
    let mut map = Map::new();
    map.insert("provenance".into(), json!(provenance_name(r.summary.provenance)));
    map.insert(
        "summary".into(),
        json!({ "mean_a": r.summary.mean_a, "mean_b": r.summary.mean_b, "corr": r.summary.corr }),
    );
    map.insert("bounds".into(), json!({ "upper": r.upper_bound, "lower": r.lower_bound }));
    map.insert("slacks".into(), json!({ "upper": r.upper_slack, "lower": r.lower_slack }));
    map.insert("tolerance".into(), json!(r.tolerance));
    map.insert("witnesses".into(), witnesses);
    map.insert("verdict".into(), json!(verdict_name(r.satisfied)));
    map
}

/// Exact values as `p/q` strings, for rational runs.
pub fn exact_section(report: &InequalityReport<num_rational::BigRational>) -> Value {
    let s = |x: &num_rational::BigRational| x.to_string();
    json!({
        "mean_a": s(&report.summary.mean_a),
        "mean_b": s(&report.summary.mean_b),
        "corr": s(&report.summary.corr),
        "upper_bound": s(&report.upper_bound),
        "lower_bound": s(&report.lower_bound),
        "upper_slack": s(&report.upper_slack),
        "lower_slack": s(&report.lower_slack),
    })
}

/// Locale-independent float with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn table_row(param: f64, report: &InequalityReport<f64>) -> String {
    [
        param,
        report.summary.mean_a,
        report.summary.mean_b,
        report.summary.corr,
        report.upper_slack,
        report.lower_slack,
    ]
    .map(format_float)
    .join(",")
}

const SCENARIOS: [&str; 6] = ["check", "trace", "quantum", "sweep", "mixed", "mc"];

fn number_fields(value: &Value, section: &str, fields: &[&str]) -> Result<(), String> {
    let obj = value
        .get(section)
        .and_then(Value::as_object)
        .ok_or_else(|| format!("missing object \"{section}\""))?;
    for field in fields {
        if !obj.get(*field).is_some_and(Value::is_number) {
            return Err(format!("\"{section}.{field}\" must be a number"));
        }
    }
    Ok(())
}

/// Checks a report document against schema 1.
pub fn validate_report(value: &Value) -> Result<(), String> {
    if value.get("schema").and_then(Value::as_u64) != Some(1) {
        return Err("\"schema\" must be 1".into());
    }
    let scenario = value.get("scenario").and_then(Value::as_str).ok_or("missing \"scenario\"")?;
    if !SCENARIOS.contains(&scenario) {
        return Err(format!("unknown scenario {scenario:?}"));
    }
    if !value.get("config").is_some_and(Value::is_object) {
        return Err("missing object \"config\"".into());
    }
    match value.get("provenance").and_then(Value::as_str) {
        Some("single-distribution" | "mixed") => {}
        _ => return Err("\"provenance\" must be single-distribution or mixed".into()),
    }
    match value.get("verdict").and_then(Value::as_str) {
        Some("satisfied" | "violated" | "inconclusive") => {}
        _ => return Err("\"verdict\" must be satisfied, violated or inconclusive".into()),
    }
    number_fields(value, "summary", &["mean_a", "mean_b", "corr"])?;
    number_fields(value, "bounds", &["upper", "lower"])?;
    number_fields(value, "slacks", &["upper", "lower"])?;
    match value.get("witnesses") {
        Some(Value::Null) => {}
        Some(Value::Object(w)) => {
            for side in ["upper", "lower"] {
                let entry = w.get(side).and_then(Value::as_object).ok_or(format!("missing witness {side}"))?;
                if !entry.get("cell").is_some_and(Value::is_string) || !entry.get("probability").is_some_and(Value::is_number) {
                    return Err(format!("malformed witness {side}"));
                }
            }
        }
        _ => return Err("\"witnesses\" must be an object or null".into()),
    }
    let extra = match scenario {
        "trace" => "trace",
        "sweep" => "sweep",
        "mc" => "monte_carlo",
        "mixed" => "sources",
        _ => return Ok(()),
    };
    if value.get(extra).is_none_or(Value::is_null) {
        return Err(format!("scenario {scenario} report lacks \"{extra}\""));
    }
    Ok(())
}
