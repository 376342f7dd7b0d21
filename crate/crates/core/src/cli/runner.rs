use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::config::{ScenarioConfig, ScenarioKind, SweepParam};
use super::report::{check_sections, exact_section, format_float, table_row, TABLE_HEADER};
use super::{CliError, ExitStatus};
use crate::derivation::derivation_trace;
use crate::distribution::validate_distribution;
use crate::hv::mixed_triple;
use crate::inequality::{check_distribution, check_summary, summarize, InequalityReport};
use crate::montecarlo::{empirical_check, estimate, sample_counts, Verdict, DEFAULT_Z};
use crate::outcome::SettingPair;
use crate::quantum::{born_joint, singlet_closed_form};

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub status: ExitStatus,
    pub report: Value,
    /// CSV text for sweep runs.
    pub table: Option<String>,
    pub report_path: Option<PathBuf>,
}

fn finish(config: &ScenarioConfig, scenario: ScenarioKind, mut sections: Map<String, Value>) -> Value {
    sections.insert("schema".into(), json!(1));
    sections.insert("scenario".into(), json!(scenario.name()));
    sections.insert("config".into(), serde_json::to_value(config).expect("config serializes"));
    Value::Object(sections)
}

fn status_of(report: &Value) -> ExitStatus {
    ExitStatus::from_verdict(report["verdict"] == "satisfied")
}

/// Runs the scenario without touching the filesystem.
pub fn evaluate(config: &ScenarioConfig) -> Result<RunOutcome, CliError> {
    let scenario = config.validate()?;
    if config.sweep.is_some() {
        return sweep(config, scenario);
    }
    let report = match scenario {
        ScenarioKind::Check => {
            let dist = validate_distribution(config.exact_distribution()?)?;
            let report = check_distribution(&dist)?;
            let mut sections = check_sections(&report);
            sections.insert("exact".into(), exact_section(&report));
            sections.insert("distribution".into(), json!(dist.to_f64().probabilities()));
            finish(config, scenario, sections)
        }
        ScenarioKind::Trace => {
            let dist = validate_distribution(config.exact_distribution()?)?;
            let report = check_distribution(&dist)?;
            let trace = derivation_trace(&dist)?;
            let steps: Vec<Value> = trace
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "label": s.label,
                        "identity": s.label.is_identity(),
                        "lhs": s.lhs.to_string(),
                        "middle": s.middle.as_ref().map(|m| m.to_string()),
                        "rhs": s.rhs.to_string(),
                        "slack": s.slack.to_string(),
                        "slack_value": crate::scalar::Probability::approx(&s.slack),
                        "witness": s.witness.as_ref().map(|w| json!({ "cell": w.cell, "probability": w.probability.to_string() })),
                    })
                })
                .collect();
            let mut sections = check_sections(&report);
            sections.insert("exact".into(), exact_section(&report));
            sections.insert("distribution".into(), json!(dist.to_f64().probabilities()));
            sections.insert("trace".into(), Value::Array(steps));
            finish(config, scenario, sections)
        }
        ScenarioKind::Quantum => {
            let pair = config.setting_pair()?;
            let dist = born_joint(&config.two_qubit_state()?, pair)?;
            let report = check_distribution(&dist)?;
            let mut sections = check_sections(&report);
            sections.insert("distribution".into(), json!(dist.probabilities()));
            if config.state.as_ref().is_some_and(|s| s.is_singlet()) {
                let closed = singlet_closed_form(pair, config.kind);
                sections.insert(
                    "closed_form".into(),
                    json!({
                        "mean_a": closed.mean_a,
                        "mean_b": closed.mean_b,
                        "corr": closed.corr,
                        "max_deviation": (report.summary.corr - closed.corr).abs()
                            .max(report.summary.mean_a.abs())
                            .max(report.summary.mean_b.abs()),
                    }),
                );
            }
            finish(config, scenario, sections)
        }
        ScenarioKind::Mixed => {
            let pair = config.setting_pair()?;
            let mixed = mixed_triple(&config.malus_model()?, pair, &config.two_qubit_state()?, pair)?;
            let report = check_summary(&mixed.summary)?;
            let mut sections = check_sections(&report);
            sections.insert(
                "sources".into(),
                json!({ "marginals": mixed.marginal_source, "correlation": mixed.correlation_source }),
            );
            finish(config, scenario, sections)
        }
        ScenarioKind::Mc => {
            let dist = validate_distribution(config.exact_distribution()?)?;
            let n = config.samples.unwrap_or(0);
            let seed = config.seed.unwrap_or(0);
            let z = config.z.unwrap_or(DEFAULT_Z);
            let counts = sample_counts(&dist, n, seed)?;
            let est = estimate(&counts)?;
            let empirical = empirical_check(&counts, z)?;
            let truth = summarize(&dist)?.to_f64();
            let mut sections = check_sections(&empirical.report);
            sections.insert(
                "verdict".into(),
                json!(match empirical.verdict {
                    Verdict::Satisfied => "satisfied",
                    Verdict::Violated => "violated",
                    Verdict::Inconclusive => "inconclusive",
                }),
            );
            sections.insert(
                "monte_carlo".into(),
                json!({
                    "counts": { "++": counts.n_pp, "+-": counts.n_pm, "-+": counts.n_mp, "--": counts.n_mm },
                    "n_total": counts.n_total(),
                    "seed": seed,
                    "z": z,
                    "standard_errors": { "mean_a": est.summary.se_a, "mean_b": est.summary.se_b, "corr": est.summary.se_corr },
                    "slack_error": empirical.slack_error,
                    "threshold": empirical.threshold,
                    "true_summary": { "mean_a": truth.mean_a, "mean_b": truth.mean_b, "corr": truth.corr },
                }),
            );
            finish(config, scenario, sections)
        }
        ScenarioKind::Sweep => unreachable!("sweep scenarios carry a sweep block after validation"),
    };
    Ok(RunOutcome { status: status_of(&report), report, table: None, report_path: config.output.report.clone() })
}

fn sweep(config: &ScenarioConfig, scenario: ScenarioKind) -> Result<RunOutcome, CliError> {
    let block = config.sweep.expect("checked by caller");
    let points = block.points()?;
    let base = config.setting_pair()?;
    let state = config.two_qubit_state()?;
    let mixed = matches!(scenario, ScenarioKind::Mixed) || (scenario == ScenarioKind::Sweep && config.marginal_model.is_some());
    let model = if mixed { Some(config.malus_model()?) } else { None };

    let evaluate_at = |theta: f64| -> Result<InequalityReport<f64>, CliError> {
        let pair = match block.param {
            SweepParam::A => SettingPair::new(theta, base.b.angle())?,
            SweepParam::B => SettingPair::new(base.a.angle(), theta)?,
            SweepParam::Ab => SettingPair::new(theta, theta)?,
        };
        Ok(match &model {
            Some(model) => check_summary(&mixed_triple(model, pair, &state, pair)?.summary)?,
            None => check_distribution(&born_joint(&state, pair)?)?,
        })
    };
    let reports: Vec<InequalityReport<f64>> = points.par_iter().map(|&t| evaluate_at(t)).collect::<Result<_, _>>()?;

    let mut table = String::from(TABLE_HEADER);
    table.push('\n');
    for (theta, r) in points.iter().zip(&reports) {
        table.push_str(&table_row(*theta, r));
        table.push('\n');
    }

    let worst = reports
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| x.min_slack().total_cmp(&y.min_slack()))
        .map(|(i, _)| i)
        .expect("at least two points");
    let min_upper = reports.iter().map(|r| r.upper_slack).fold(f64::INFINITY, f64::min);
    let min_lower = reports.iter().map(|r| r.lower_slack).fold(f64::INFINITY, f64::min);
    let all_satisfied = reports.iter().all(|r| r.satisfied);

    let mut sections = check_sections(&reports[worst]);
    sections.insert("verdict".into(), json!(if all_satisfied { "satisfied" } else { "violated" }));
    let rows: Vec<Value> = points
        .iter()
        .zip(&reports)
        .map(|(theta, r)| {
            json!({
                "param_rad": theta,
                "mean_a": r.summary.mean_a,
                "mean_b": r.summary.mean_b,
                "corr": r.summary.corr,
                "upper_slack": r.upper_slack,
                "lower_slack": r.lower_slack,
                "satisfied": r.satisfied,
            })
        })
        .collect();
    sections.insert(
        "sweep".into(),
        json!({
            "param": block.param,
            "mode": if mixed { "mixed" } else { "quantum" },
            "points": rows,
            "min_upper_slack": min_upper,
            "min_lower_slack": min_lower,
            "min_slack": min_upper.min(min_lower),
            "min_slack_at": points[worst],
            "min_slack_text": format_float(min_upper.min(min_lower)),
        }),
    );
    let report = finish(config, scenario, sections);
    Ok(RunOutcome { status: status_of(&report), report, table: Some(table), report_path: config.output.report.clone() })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

/// Evaluates `config` and writes the report and any sweep table.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunOutcome, CliError> {
    let outcome = evaluate(config)?;
    if let Some(path) = &config.output.report {
        let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
        write_file(path, &(text + "\n"))?;
    }
    if let (Some(path), Some(table)) = (&config.output.table, &outcome.table) {
        write_file(path, table)?;
    }
    Ok(outcome)
}

/// [`run_scenario`] for configs that must carry a sweep block.
pub fn run_sweep(config: &ScenarioConfig) -> Result<RunOutcome, CliError> {
    if config.sweep.is_none() {
        return Err(CliError::Config("no sweep block given".into()));
    }
    run_scenario(config)
}
