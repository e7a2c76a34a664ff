//! Tabular and key-value renderings of correlation reports.

use std::io::Write;

use serde::Serialize;
use weak_discord::CorrelationReport;

pub const COLUMNS: [&str; 9] = [
    "x",
    "delta_F",
    "delta_D",
    "cost",
    "discord",
    "weak_discord",
    "fidelity",
    "theta_opt",
    "phi_opt",
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub x: f64,
    #[serde(rename = "delta_F")]
    pub delta_f: f64,
    #[serde(rename = "delta_D")]
    pub delta_d: f64,
    pub cost: f64,
    pub discord: f64,
    pub weak_discord: f64,
    pub fidelity: f64,
    pub theta_opt: f64,
    pub phi_opt: f64,
}

impl From<&CorrelationReport> for ReportRow {
    fn from(r: &CorrelationReport) -> Self {
        Self {
            x: r.x,
            delta_f: r.delta_fidelity,
            delta_d: r.delta_discord,
            cost: r.cost,
            discord: r.discord,
            weak_discord: r.weak_discord,
            fidelity: r.fidelity,
            theta_opt: r.theta_opt,
            phi_opt: r.phi_opt,
        }
    }
}

impl ReportRow {
    pub fn values(&self) -> [f64; 9] {
        [
            self.x,
            self.delta_f,
            self.delta_d,
            self.cost,
            self.discord,
            self.weak_discord,
            self.fidelity,
            self.theta_opt,
            self.phi_opt,
        ]
    }

    /// `cost = ΔF + ΔD` to 1e-12 and every entry finite.
    pub fn is_consistent(&self) -> bool {
        self.values().iter().all(|v| v.is_finite()) && (self.cost - (self.delta_f + self.delta_d)).abs() <= 1e-12
    }
}

/// Indices into [`COLUMNS`] for a comma-separated selection.
pub fn select_columns(spec: &str) -> Result<Vec<usize>, String> {
    spec.split(',')
        .map(|name| {
            COLUMNS
                .iter()
                .position(|c| *c == name.trim())
                .ok_or_else(|| format!("unknown column `{name}` (expected one of {})", COLUMNS.join(",")))
        })
        .collect()
}

pub fn write_rows<W: Write>(out: W, rows: &[ReportRow], columns: &[usize]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns.iter().map(|&i| COLUMNS[i]))?;
    for row in rows {
        let v = row.values();
        w.serialize(columns.iter().map(|&i| v[i]).collect::<Vec<_>>())?;
    }
    w.flush()?;
    Ok(())
}

/// `key: value` lines for every field of a serialisable record, in
/// declaration order.
pub fn key_values<T: Serialize>(record: &T) -> String {
    let value = serde_json::to_value(record).expect("reports serialise");
    let mut out = String::new();
    if let serde_json::Value::Object(map) = value {
        for (k, v) in map {
            match v {
                serde_json::Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                serde_json::Value::Null => out.push_str(&format!("{k}: none\n")),
                other => out.push_str(&format!("{k}: {other}\n")),
            }
        }
    }
    out
}
