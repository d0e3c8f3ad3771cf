//! Summary JSON, per-time CSV and the human-readable tables.

use std::fmt::Write;

use serde_json::{json, Value};

use trajmetric::analysis::RankEntry;
use trajmetric::ErrorReport;

pub const CSV_COMMENT: &str = "# weighted, normalised p-th power costs per step; the switch cost of the transition k -> k+1 is reported in row k";
pub const CSV_HEADER: &str = "k,loc,miss,false,switch";

/// Two decimals, half away from zero on the value scaled by 100.
pub fn fmt2(x: f64) -> String {
    format!("{:.2}", (x * 100.0).round() / 100.0)
}

pub fn summary_json(report: &ErrorReport, window: usize, p: f64) -> Value {
    let mut out = json!({
        "metric": report.kind.name(),
        "is_metric": report.is_metric,
        "T": window,
        "p": p,
        "total": report.total,
    });
    if report.is_decomposed() {
        let c = report.components();
        out["loc"] = json!(c.loc);
        out["miss"] = json!(c.miss);
        out["false"] = json!(c.false_target);
        out["switch"] = json!(c.switch);
    }
    if let Some(res) = report.residuals {
        out["residuals"] = json!(res);
    }
    out
}

pub fn per_time_csv(report: &ErrorReport) -> String {
    let mut out = format!("{CSV_COMMENT}\n{CSV_HEADER}\n");
    for (n, s) in report.per_time.iter().enumerate() {
        let _ = writeln!(out, "{},{},{},{},{}", n + 1, s.loc, s.miss, s.false_target, s.switch);
    }
    out
}

pub fn eval_table(report: &ErrorReport, window: usize) -> String {
    let mut out = String::new();
    let flag = if report.is_metric { "" } else { " (not a metric)" };
    let _ = writeln!(out, "metric  {}{flag}", report.kind);
    let _ = writeln!(out, "T       {window}");
    let _ = writeln!(out, "total   {}", fmt2(report.total));
    if report.is_decomposed() {
        let c = report.components();
        for (name, v) in [("loc", c.loc), ("miss", c.miss), ("false", c.false_target), ("switch", c.switch)] {
            let _ = writeln!(out, "{name:<8}{}", fmt2(v));
        }
    }
    out
}

pub fn ranking_table(ranking: &[RankEntry]) -> String {
    let width = ranking.iter().map(|e| e.name.len()).max().unwrap_or(4).max(4);
    let mut out = format!("rank  {:<width$}  aggregate\n", "name");
    for e in ranking {
        let tie = if e.tied_with_previous { "=" } else { " " };
        let _ = writeln!(out, "{:>3}{tie}  {:<width$}  {}", e.rank, e.name, fmt2(e.aggregate));
    }
    out
}
