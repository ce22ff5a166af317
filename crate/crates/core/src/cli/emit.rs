//! Report collections and their JSON, CSV and text renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Format;
use crate::constants::ConstantTable;
use crate::halfspace::HardyMazyaRow;
use crate::report::{IdentityResidualReport, MarginReport, Verdict};
use crate::verifier::SharpnessTable;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Report {
    Constants(ConstantTable),
    Margin(MarginReport),
    Identity(IdentityResidualReport),
    Sharpness(SharpnessTable),
    /// ∫∫|∇v|²/∫∫v²/y² along windows shrinking towards y = 0
    HardyMazya {
        #[serde(rename = "N")]
        n: u32,
        rows: Vec<HardyMazyaRow>,
    },
}

impl Report {
    /// `None` for purely informational reports.
    pub fn passed(&self) -> Option<bool> {
        match self {
            Report::Margin(r) => Some(r.verdict.passed()),
            Report::Identity(r) => Some(r.verdict.passed()),
            Report::Sharpness(t) => Some(t.lower_bound_holds),
            Report::Constants(_) | Report::HardyMazya { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
}

/// Everything one command emits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Run {
    pub command: String,
    /// version of the suite manifest the test functions came from
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub suite_version: Option<String>,
    pub reports: Vec<Report>,
    pub summary: Summary,
}

impl Run {
    pub fn new(command: &str, reports: Vec<Report>) -> Run {
        let verdicts: Vec<bool> = reports.iter().filter_map(Report::passed).collect();
        let passed = verdicts.iter().filter(|&&p| p).count();
        Run {
            command: command.to_string(),
            suite_version: None,
            summary: Summary {
                checked: verdicts.len(),
                passed,
                failed: verdicts.len() - passed,
            },
            reports,
        }
    }

    pub fn with_suite(command: &str, reports: Vec<Report>) -> Run {
        Run {
            suite_version: Some(crate::suite::version().to_string()),
            ..Run::new(command, reports)
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.summary.failed == 0 {
            super::EXIT_PASS
        } else {
            super::EXIT_FAIL
        }
    }
}

pub fn render(run: &Run, format: Format) -> std::io::Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(run)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => csv_long(run),
        Format::Text => Ok(text(run)),
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
    }
}

fn identity_case(r: &IdentityResidualReport) -> String {
    match (r.mode, r.alpha) {
        (Some(m), _) => format!("{}(n={m})", r.identity_name),
        (None, Some(a)) => format!("{}(alpha={a})", r.identity_name),
        (None, None) => r.identity_name.clone(),
    }
}

/// Long format: one (case, N, function_id, term_name, value) row per number.
fn csv_long(run: &Run) -> std::io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["case", "N", "function_id", "term_name", "value"])?;
    for report in &run.reports {
        let mut rows: Vec<[String; 5]> = Vec::new();
        let mut push = |case: &str, n: u32, fid: &str, name: &str, value: String| {
            rows.push([
                case.to_string(),
                n.to_string(),
                fid.to_string(),
                name.to_string(),
                value,
            ]);
        };
        match report {
            Report::Constants(t) => {
                let case = format!("k={},l={}", t.case.k, t.case.l);
                for (name, v) in t.entries() {
                    push(&case, t.case.n, "", &name, v.to_string());
                }
            }
            Report::Margin(r) => {
                for t in &r.terms {
                    push(&r.case, r.n, &r.function_id, &t.name, t.value.to_string());
                }
                for (name, v) in [
                    ("lhs", r.lhs),
                    ("rhs", r.rhs),
                    ("margin", r.margin),
                    ("noise", r.noise),
                ] {
                    push(&r.case, r.n, &r.function_id, name, v.to_string());
                }
                push(
                    &r.case,
                    r.n,
                    &r.function_id,
                    "verdict",
                    verdict_str(r.verdict).into(),
                );
            }
            Report::Identity(r) => {
                let case = identity_case(r);
                push(
                    &case,
                    r.n,
                    &r.function_id,
                    "max_abs_residual",
                    r.max_abs_residual.to_string(),
                );
                push(
                    &case,
                    r.n,
                    &r.function_id,
                    "max_rel_residual",
                    r.max_rel_residual.to_string(),
                );
                push(
                    &case,
                    r.n,
                    &r.function_id,
                    "verdict",
                    verdict_str(r.verdict).into(),
                );
                if let Some(a) = &r.alternate {
                    let name = format!("alternate:{}:max_rel_residual", a.reading);
                    push(
                        &case,
                        r.n,
                        &r.function_id,
                        &name,
                        a.max_rel_residual.to_string(),
                    );
                }
            }
            Report::Sharpness(t) => {
                for row in &t.rows {
                    push(
                        t.case.label(),
                        t.n,
                        &row.function_id,
                        "param",
                        row.param.value().to_string(),
                    );
                    push(
                        t.case.label(),
                        t.n,
                        &row.function_id,
                        "quotient",
                        row.quotient.to_string(),
                    );
                }
            }
            Report::HardyMazya { n, rows: table } => {
                for row in table {
                    push(
                        "hardy_mazya_quotient",
                        *n,
                        &row.function_id,
                        "lo",
                        row.lo.to_string(),
                    );
                    push(
                        "hardy_mazya_quotient",
                        *n,
                        &row.function_id,
                        "quotient",
                        row.quotient.to_string(),
                    );
                }
            }
        }
        for row in rows {
            w.write_record(&row)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    String::from_utf8(bytes).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
}

fn text(run: &Run) -> String {
    let mut s = String::new();
    if let Some(v) = &run.suite_version {
        let _ = writeln!(s, "suite version {v}");
    }
    let mut worst_residual: Option<f64> = None;
    for report in &run.reports {
        match report {
            Report::Constants(t) => {
                let _ = writeln!(s, "k={} l={} N={}", t.case.k, t.case.l, t.case.n);
                for (name, v) in t.entries() {
                    if v.0.is_integer() {
                        let _ = writeln!(s, "  {name} = {v}");
                    } else {
                        let _ = writeln!(s, "  {name} = {v} ≈ {}", v.decimal());
                    }
                }
            }
            Report::Margin(r) => {
                let _ = writeln!(
                    s,
                    "{} {} N={} {}: margin {:.6e} (lhs {:.6e}, rhs {:.6e}, noise {:.1e})",
                    verdict_str(r.verdict).to_uppercase(),
                    r.case,
                    r.n,
                    r.function_id,
                    r.margin,
                    r.lhs,
                    r.rhs,
                    r.noise
                );
            }
            Report::Identity(r) => {
                worst_residual = Some(worst_residual.unwrap_or(0.0).max(r.max_rel_residual));
                let _ = write!(
                    s,
                    "{} {} N={} {}: relative residual {:.3e} (absolute {:.3e})",
                    verdict_str(r.verdict).to_uppercase(),
                    identity_case(r),
                    r.n,
                    r.function_id,
                    r.max_rel_residual,
                    r.max_abs_residual
                );
                if let Some(a) = &r.alternate {
                    let _ = write!(s, "; alternate {}: {:.3e}", a.reading, a.max_rel_residual);
                }
                s.push('\n');
            }
            Report::Sharpness(t) => {
                let _ = writeln!(
                    s,
                    "{} N={} sharp constant {}",
                    t.case.label(),
                    t.n,
                    t.sharp_constant
                );
                let _ = writeln!(s, "  param quotient");
                for row in &t.rows {
                    let _ = writeln!(s, "  {} {:.9}", row.param.value(), row.quotient);
                }
                let _ = writeln!(s, "  min quotient {:.9}", t.min_quotient);
                let _ = writeln!(
                    s,
                    "  decreasing {}",
                    if t.is_decreasing() { "yes" } else { "no" }
                );
                let _ = writeln!(
                    s,
                    "  lower bound holds {}",
                    if t.lower_bound_holds { "yes" } else { "no" }
                );
            }
            Report::HardyMazya { n, rows } => {
                let _ = writeln!(s, "hardy_mazya quotient N={n} (limit 1/4)");
                let _ = writeln!(s, "  lo quotient");
                for row in rows {
                    let _ = writeln!(s, "  {:e} {:.9}", row.lo, row.quotient);
                }
            }
        }
    }
    if let Some(w) = worst_residual {
        let _ = writeln!(s, "max residual {w:.3e}");
    }
    if run.summary.checked > 0 {
        let _ = writeln!(
            s,
            "{} checked: {} pass, {} fail",
            run.summary.checked, run.summary.passed, run.summary.failed
        );
    }
    s
}
