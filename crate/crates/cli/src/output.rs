//! Text, JSON and CSV rendering.

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

use sphere_extremes::verify::{CampaignReport, OutputFormat};

pub fn render_report(report: &CampaignReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["name", "instances", "min_margin", "pass", "worst_case_payload"])?;
            for c in &report.checks {
                w.write_record([
                    c.name.clone(),
                    c.instances.to_string(),
                    format!("{:e}", c.min_margin),
                    c.pass.to_string(),
                    serde_json::to_string(&c.worst_case_payload)?,
                ])?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        OutputFormat::Text => {
            let mut out = String::new();
            let cfg = &report.config;
            out += &format!(
                "seed {}  trials {}  tolerance {:e}  schema v{}\n",
                cfg.seed, cfg.trials, cfg.tolerance, report.schema_version
            );
            for c in &report.checks {
                out += &format!(
                    "{}  {:<32} instances {:>6}  min margin {:+.3e}\n",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.instances,
                    c.min_margin
                );
            }
            out += &format!(
                "overall: {}  ({:.2}s)\n",
                if report.pass { "PASS" } else { "FAIL" },
                report.wall_time_s
            );
            Ok(out)
        }
    }
}

/// Tables of flat records: tab-separated text, a JSON array, or CSV with a header row.
pub fn render_rows<T: Serialize>(rows: &[T], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
        OutputFormat::Csv | OutputFormat::Text => {
            let mut b = csv::WriterBuilder::new();
            if format == OutputFormat::Text {
                b.delimiter(b'\t');
            }
            let mut w = b.from_writer(Vec::new());
            for r in rows {
                w.serialize(r)?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
    }
}

/// `key.sub = value` lines for a nested JSON object.
pub fn render_flat(value: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, v) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, v, out);
                }
            }
            _ => *out += &format!("{prefix} = {v}\n"),
        }
    }
    let mut out = String::new();
    walk("", value, &mut out);
    out
}
