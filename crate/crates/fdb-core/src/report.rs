//! Deterministic table emitters: delimiter-separated text and markdown with
//! the fixed column layout lb, ub, fdb, eps, delta, ii, cog.

use crate::bounds::{BoundsReport, SensitivityRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Markdown),
            other => Err(format!("unknown format {other:?} (expected csv or md)")),
        }
    }
}

const COLUMNS: [&str; 7] = ["lb", "ub", "fdb", "eps", "delta", "ii", "cog"];

fn row_values(r: &BoundsReport, pct: bool) -> [f64; 7] {
    let v = [r.lb, r.ub, r.fdb, r.eps, r.delta, r.ii, r.cog];
    if pct {
        v.map(|x| r.pct_of_mv0(x))
    } else {
        v
    }
}

fn emit_table(rows: &[(String, [f64; 7])], label: &str, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(label);
            for c in COLUMNS {
                out.push(',');
                out.push_str(c);
            }
            out.push('\n');
            for (name, vals) in rows {
                out.push_str(name);
                for v in vals {
                    out.push_str(&format!(",{v:.2}"));
                }
                out.push('\n');
            }
        }
        Format::Markdown => {
            out.push_str(&format!("| {label} |"));
            for c in COLUMNS {
                out.push_str(&format!(" {c} |"));
            }
            out.push('\n');
            out.push_str(&"|---".repeat(COLUMNS.len() + 1));
            out.push_str("|\n");
            for (name, vals) in rows {
                out.push_str(&format!("| {name} |"));
                for v in vals {
                    out.push_str(&format!(" {v:.2} |"));
                }
                out.push('\n');
            }
        }
    }
    out
}

/// Per-date bound reports, absolute currency units.
pub fn emit_report(rows: &[(String, BoundsReport)], format: Format) -> String {
    let rows: Vec<(String, [f64; 7])> = rows
        .iter()
        .map(|(name, r)| (name.clone(), row_values(r, false)))
        .collect();
    emit_table(&rows, "date", format)
}

/// Per-date bound reports in percent of initial asset market value.
pub fn emit_report_pct(rows: &[(String, BoundsReport)], format: Format) -> String {
    let rows: Vec<(String, [f64; 7])> = rows
        .iter()
        .map(|(name, r)| (name.clone(), row_values(r, true)))
        .collect();
    emit_table(&rows, "date (% of mv0)", format)
}

/// Sensitivity deltas in percent of the reported figure.
pub fn emit_sensitivities(rows: &[(String, SensitivityRow)], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("scenario,date,dfdb,dlb,dub\n");
            for (date, r) in rows {
                out.push_str(&format!(
                    "{},{date},{:.2},{:.2},{:.2}\n",
                    r.scenario, r.d_fdb, r.d_lb, r.d_ub
                ));
            }
        }
        Format::Markdown => {
            out.push_str("| scenario | date | dfdb | dlb | dub |\n|---|---|---|---|---|\n");
            for (date, r) in rows {
                out.push_str(&format!(
                    "| {} | {date} | {:.2} | {:.2} | {:.2} |\n",
                    r.scenario, r.d_fdb, r.d_lb, r.d_ub
                ));
            }
        }
    }
    out
}
