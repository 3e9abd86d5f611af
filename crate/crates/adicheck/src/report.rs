//! Report emission: the full pipeline behind one scenario, parameter
//! sweeps, and machine-readable output.
//!
//! [`run_scenario`] orchestrates model building, spectral flow, condition
//! evaluation, and exact propagation for every requested initial state,
//! and returns a versioned [`Report`]. Physics-level failures (a closing
//! gap mid-grid, an undefined phase) end up in the report's `diagnostics`
//! section instead of aborting — a report is produced whenever the
//! scenario file itself is sound.
//!
//! Reports serialize with every float carrying 17 significant digits, so
//! a serialize/parse cycle is bit-exact; [`to_json_string`] /
//! [`from_json_str`] implement that contract and round-trip to the same
//! text. Requested series are embedded as columnar tables and can be
//! externalized to CSV files with [`externalize_series`]. [`sweep`] runs
//! one pipeline per parameter value and renders a fixed-column CSV table;
//! a failing value becomes a mostly-empty row plus a diagnostic, never an
//! abort.

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};

use crate::conditions::{amplitude_pair, evaluate_conditions, g_series, ConditionReport};
use crate::error::{Error, Result};
use crate::flow::SpectralFlow;
use crate::propagate::{deviation_metrics, evolve_exact};
use crate::scenario::{coefficients_to_state, Scenario};

/// Version tag carried by every report.
pub const REPORT_SCHEMA: &str = "adicheck-report/1";

/// Deviation numbers for one initial state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeviationEntry {
    /// Which start this row describes (`basis_n` or `custom`).
    pub initial: String,
    /// `max_{k,n} |c_n(t_k) - c_n(t_0)|`.
    pub max_coeff_drift: f64,
    /// Per-level `max_k | |c_n(t_k)| - |c_n(t_0)| |`.
    pub coeff_mod_drift: Vec<f64>,
    /// `|c_n(T)|` per level; squares are final populations.
    pub final_coeff_mods: Vec<f64>,
    /// `1 - |<psi_ad(T)|psi(T)>|^2`.
    pub final_infidelity: f64,
    /// Uncorrected integrator norm drift.
    pub max_norm_drift: f64,
    /// Accepted integrator steps.
    pub steps_accepted: usize,
    /// Rejected integrator steps.
    pub steps_rejected: usize,
}

/// Everything one scenario run produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    /// Schema version tag ([`REPORT_SCHEMA`]).
    pub schema: String,
    /// Echo of the scenario that was run.
    pub scenario: Scenario,
    /// Condition evaluation; `None` when the spectral flow itself failed
    /// (see `diagnostics`).
    pub conditions: Option<ConditionReport>,
    /// One entry per initial state that propagated successfully.
    pub deviation: Vec<DeviationEntry>,
    /// Requested series: name -> columnar table
    /// `{"columns": [...], "data": [[...], ...]}` or, after
    /// [`externalize_series`], name -> CSV file path.
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub series: Map<String, Value>,
    /// Physics-level problems encountered along the way.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

/// JSON formatter that writes every finite `f64` as `{:.16e}` —
/// 17 significant digits, enough to reproduce the double bit-exactly —
/// while keeping pretty indentation. Non-finite floats are turned into
/// `null` by the serializer before the formatter sees them.
struct ReportFormatter<'a> {
    pretty: PrettyFormatter<'a>,
}

impl Formatter for ReportFormatter<'_> {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.pretty.begin_array(writer)
    }

    fn end_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.pretty.end_array(writer)
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.pretty.begin_array_value(writer, first)
    }

    fn end_array_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.pretty.end_array_value(writer)
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.pretty.begin_object(writer)
    }

    fn end_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.pretty.end_object(writer)
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.pretty.begin_object_key(writer, first)
    }

    fn end_object_key<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.pretty.end_object_key(writer)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.pretty.begin_object_value(writer)
    }

    fn end_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.pretty.end_object_value(writer)
    }
}

/// Serialize a report with the 17-significant-digit float contract.
pub fn to_json_string(report: &Report) -> Result<String> {
    let mut out = Vec::new();
    let formatter = ReportFormatter {
        pretty: PrettyFormatter::new(),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, formatter);
    report
        .serialize(&mut ser)
        .map_err(|e| Error::invalid("report", format!("serialization failed: {e}")))?;
    let mut text = String::from_utf8(out)
        .map_err(|e| Error::invalid("report", format!("non-UTF8 output: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Parse a report previously produced by [`to_json_string`].
pub fn from_json_str(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| Error::ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Write a report to a file.
pub fn write_report(report: &Report, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_json_string(report)?).map_err(|e| Error::io(path, e))
}

/// Read a report from a file.
pub fn load_report(path: impl AsRef<Path>) -> Result<Report> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json_str(&text)
}

fn columnar(columns: Vec<(&str, Vec<f64>)>) -> Value {
    let names: Vec<Value> = columns
        .iter()
        .map(|(name, _)| Value::String((*name).to_string()))
        .collect();
    let data: Vec<Value> = columns
        .into_iter()
        .map(|(_, col)| json!(col))
        .collect();
    json!({ "columns": names, "data": data })
}

/// Build the requested series tables from the flow and the drift
/// profiles. Pairs whose phase is undefined still get amplitude columns
/// (with a zeroed envelope phase).
fn build_series(
    flow: &SpectralFlow,
    outputs: &[String],
    drift_profiles: &[(String, Vec<f64>)],
    diagnostics: &mut Vec<String>,
) -> Map<String, Value> {
    let mut series = Map::new();
    let ts = flow.ts().to_vec();
    let dim = flow.dim();
    for output in outputs {
        match output.as_str() {
            "phases" => {
                let mut cols: Vec<(String, Vec<f64>)> = vec![("t".to_string(), ts.clone())];
                let mut ok = true;
                for n in 0..dim {
                    match (flow.dynamic_phase(n), flow.berry_phase(n)) {
                        (Ok(alpha), Ok(beta)) => {
                            cols.push((format!("alpha_{n}"), alpha));
                            cols.push((format!("beta_{n}"), beta));
                        }
                        (Err(e), _) | (_, Err(e)) => {
                            diagnostics.push(format!("phases series failed: {e}"));
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    let borrowed: Vec<(&str, Vec<f64>)> =
                        cols.iter().map(|(n, v)| (n.as_str(), v.clone())).collect();
                    series.insert("phases".to_string(), columnar(borrowed));
                }
            }
            "coupling" | "g" => {
                for m in 0..dim {
                    for n in (m + 1)..dim {
                        match amplitude_pair(flow, m, n) {
                            Ok((pair, _)) => {
                                if output == "coupling" {
                                    series.insert(
                                        format!("coupling_{m}_{n}"),
                                        columnar(vec![
                                            ("t", ts.clone()),
                                            ("abs_a", pair.abs_a.clone()),
                                            ("gamma", pair.gamma.clone()),
                                            ("theta", pair.theta.clone()),
                                            ("theta_dot", pair.theta_dot.clone()),
                                        ]),
                                    );
                                } else {
                                    match g_series(flow.ts(), &pair) {
                                        Ok(g) => {
                                            series.insert(
                                                format!("g_{m}_{n}"),
                                                columnar(vec![("t", ts.clone()), ("g", g)]),
                                            );
                                        }
                                        Err(e) => diagnostics.push(format!(
                                            "g series for pair ({m},{n}) failed: {e}"
                                        )),
                                    }
                                }
                            }
                            Err(e) => diagnostics.push(format!(
                                "{output} series for pair ({m},{n}) failed: {e}"
                            )),
                        }
                    }
                }
            }
            "drift" => {
                for (label, profile) in drift_profiles {
                    series.insert(
                        format!("deviation_{label}"),
                        columnar(vec![("t", ts.clone()), ("drift", profile.clone())]),
                    );
                }
            }
            other => diagnostics.push(format!("unknown series {other:?} skipped")),
        }
    }
    series
}

/// Run the complete pipeline for one scenario.
///
/// Hard errors are reserved for problems with the request itself: an
/// invalid scenario, an unreadable tabulated file, an out-of-range
/// initial level. Everything the physics can do wrong — degeneracies,
/// lost continuity, propagation failures — lands in `diagnostics` and
/// leaves the corresponding section empty.
pub fn run_scenario(scenario: &Scenario) -> Result<Report> {
    scenario.validate()?;
    let model = scenario.build_model()?;
    let mut diagnostics = Vec::new();

    let flow = match SpectralFlow::build(
        model,
        scenario.t_total,
        scenario.steps,
        scenario.gauge,
    ) {
        Ok(flow) => flow,
        Err(e) => {
            diagnostics.push(format!("spectral flow failed: {e}"));
            return Ok(Report {
                schema: REPORT_SCHEMA.to_string(),
                scenario: scenario.clone(),
                conditions: None,
                deviation: Vec::new(),
                series: Map::new(),
                diagnostics,
            });
        }
    };

    let conditions = match evaluate_conditions(&flow, scenario.epsilon) {
        Ok(c) => Some(c),
        Err(e) => {
            diagnostics.push(format!("condition evaluation failed: {e}"));
            None
        }
    };

    let starts = scenario.initial_coefficients(flow.dim())?;
    let mut deviation = Vec::new();
    let mut drift_profiles = Vec::new();
    for (label, c0) in &starts {
        let psi0 = coefficients_to_state(&flow.frames()[0], c0);
        let outcome = evolve_exact(flow.model(), flow.ts(), &psi0, Some(scenario.tol))
            .and_then(|traj| Ok((deviation_metrics(&flow, &traj)?, traj)));
        match outcome {
            Ok((dev, traj)) => {
                drift_profiles.push((label.clone(), dev.drift_profile.clone()));
                deviation.push(DeviationEntry {
                    initial: label.clone(),
                    max_coeff_drift: dev.max_coeff_drift,
                    coeff_mod_drift: dev.coeff_mod_drift,
                    final_coeff_mods: dev.final_coeff_mods,
                    final_infidelity: dev.final_infidelity,
                    max_norm_drift: dev.max_norm_drift,
                    steps_accepted: traj.steps_accepted,
                    steps_rejected: traj.steps_rejected,
                });
            }
            Err(e) => diagnostics.push(format!("propagation from {label} failed: {e}")),
        }
    }

    let series = build_series(&flow, &scenario.outputs, &drift_profiles, &mut diagnostics);

    Ok(Report {
        schema: REPORT_SCHEMA.to_string(),
        scenario: scenario.clone(),
        conditions,
        deviation,
        series,
        diagnostics,
    })
}

fn csv_cell(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        String::new()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Render one embedded columnar table as CSV (header row, LF endings,
/// floats with 17 significant digits).
fn table_to_csv(table: &Value) -> Result<String> {
    let columns = table
        .get("columns")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::invalid("series", "table missing columns"))?;
    let data = table
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::invalid("series", "table missing data"))?;
    let names: Vec<&str> = columns.iter().filter_map(Value::as_str).collect();
    let cols: Vec<Vec<f64>> = data
        .iter()
        .map(|col| {
            col.as_array()
                .map(|a| a.iter().filter_map(Value::as_f64).collect())
                .unwrap_or_default()
        })
        .collect();
    let rows = cols.first().map(Vec::len).unwrap_or(0);
    let mut out = String::new();
    out.push_str(&names.join(","));
    out.push('\n');
    for k in 0..rows {
        let row: Vec<String> = cols
            .iter()
            .map(|c| c.get(k).copied().map(csv_cell).unwrap_or_default())
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Move every embedded series table out to `<dir>/<name>.csv`, replacing
/// the in-report value with the file path.
pub fn externalize_series(report: &mut Report, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let names: Vec<String> = report.series.keys().cloned().collect();
    for name in names {
        let table = report.series[&name].clone();
        if table.is_string() {
            continue; // already externalized
        }
        let csv = table_to_csv(&table)?;
        let path = dir.join(format!("{name}.csv"));
        std::fs::write(&path, csv).map_err(|e| Error::io(&path, e))?;
        report
            .series
            .insert(name, Value::String(path.display().to_string()));
    }
    Ok(())
}

/// One row of a parameter sweep; empty metrics mean that value's pipeline
/// failed (see its diagnostics).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub g_max: Option<f64>,
    pub bound4: Option<f64>,
    pub bound5: Option<f64>,
    pub traditional_max: Option<f64>,
    pub ratio6_max: Option<f64>,
    pub max_coeff_drift: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

/// A parameter sweep: the varied name and one row per value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepTable {
    pub param: String,
    pub rows: Vec<SweepRow>,
}

/// Scenario-level sweep parameters (everything else must be a model
/// parameter of the scenario's kind).
const SCENARIO_PARAMS: [&str; 4] = ["T", "epsilon", "steps", "tol"];

fn model_params_for(kind: &str) -> &'static [&'static str] {
    match kind {
        "rotating_spin" => &["omega0", "theta", "omega"],
        "landau_zener" => &["v", "delta", "t0"],
        _ => &[],
    }
}

fn apply_param(scenario: &mut Scenario, param: &str, value: f64) -> Result<()> {
    match param {
        "T" => scenario.t_total = value,
        "epsilon" => scenario.epsilon = value,
        "steps" => {
            if !(value.is_finite() && value >= 1.0) {
                return Err(Error::invalid("steps", "must be a positive count"));
            }
            scenario.steps = value.round() as usize;
        }
        "tol" => scenario.tol = value,
        name => {
            scenario
                .model
                .params
                .insert(name.to_string(), json!(value));
        }
    }
    Ok(())
}

/// Run the pipeline once per value of `param`, collecting summary
/// metrics. The parameter must be scenario-level (`T`, `epsilon`,
/// `steps`, `tol`) or a model parameter of the scenario's kind. A value
/// whose run fails contributes a row with diagnostics; the sweep itself
/// never aborts on a single value.
pub fn sweep(scenario: &Scenario, param: &str, values: &[f64]) -> Result<SweepTable> {
    scenario.validate()?;
    let known_model = model_params_for(&scenario.model.kind);
    if !SCENARIO_PARAMS.contains(&param) && !known_model.contains(&param) {
        return Err(Error::invalid(
            "param",
            format!(
                "unknown sweep parameter {param:?} for kind {:?}; \
                 scenario-level: {}; model-level: {}",
                scenario.model.kind,
                SCENARIO_PARAMS.join(", "),
                if known_model.is_empty() {
                    "none".to_string()
                } else {
                    known_model.join(", ")
                },
            ),
        ));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("values", "must all be finite"));
    }

    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        let mut row = SweepRow {
            value,
            g_max: None,
            bound4: None,
            bound5: None,
            traditional_max: None,
            ratio6_max: None,
            max_coeff_drift: None,
            diagnostics: Vec::new(),
        };
        let mut varied = scenario.clone();
        if let Err(e) = apply_param(&mut varied, param, value) {
            row.diagnostics.push(e.to_string());
            rows.push(row);
            continue;
        }
        match varied.validate().and_then(|()| run_scenario(&varied)) {
            Ok(report) => {
                if let Some(c) = &report.conditions {
                    row.g_max = Some(c.g_max);
                    row.bound4 = Some(c.bound4);
                    row.bound5 = c.bound5;
                    row.traditional_max = Some(c.traditional_max);
                    row.ratio6_max = c.ratio6_max;
                }
                row.max_coeff_drift = report
                    .deviation
                    .iter()
                    .map(|d| d.max_coeff_drift)
                    .fold(None, |acc: Option<f64>, d| {
                        Some(acc.map_or(d, |a| a.max(d)))
                    });
                row.diagnostics = report.diagnostics;
            }
            Err(e) => row.diagnostics.push(e.to_string()),
        }
        rows.push(row);
    }
    Ok(SweepTable {
        param: param.to_string(),
        rows,
    })
}

/// Render a sweep as CSV with the fixed column set. An empty sweep is a
/// header-only table.
pub fn sweep_to_csv(table: &SweepTable) -> String {
    let mut out = String::from(
        "value,g_max,bound4,bound5,traditional_max,ratio6_max,max_coeff_drift\n",
    );
    let opt = |v: Option<f64>| v.map(csv_cell).unwrap_or_default();
    for row in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            csv_cell(row.value),
            opt(row.g_max),
            opt(row.bound4),
            opt(row.bound5),
            opt(row.traditional_max),
            opt(row.ratio6_max),
            opt(row.max_coeff_drift),
        ));
    }
    out
}
