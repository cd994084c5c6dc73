//! Report serialization: CSV tables, JSON, and the per-iteration trace as
//! JSON lines. Cell ordering and number formatting are fixed, so re-running
//! a seeded experiment reproduces every file byte-for-byte apart from the
//! timing columns.

use crate::engine::TraceEntry;
use crate::graph::NodeId;
use crate::harness::{CaseResult, SuccessTable, TPointReport};
use serde::Serialize;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
#[error("cannot write {path}: {source}")]
pub struct ReportError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    TraceJsonl,
}

/// Anything the harness can emit.
#[derive(Debug, Clone, Copy)]
pub enum Report<'a> {
    Success(&'a SuccessTable),
    TPoint(&'a TPointReport),
    Trace(&'a [TraceEntry]),
}

/// Renders `report` in `format` and writes it atomically to `destination`
/// (write to a temporary sibling, then rename; no partial files on failure).
pub fn emit_report(
    report: Report<'_>,
    format: ReportFormat,
    destination: &Path,
) -> Result<(), ReportError> {
    let rendered = render_report(report, format).map_err(|message| ReportError {
        path: destination.to_path_buf(),
        source: io::Error::new(io::ErrorKind::InvalidInput, message),
    })?;
    write_atomic(destination, &rendered)
}

fn render_report(report: Report<'_>, format: ReportFormat) -> Result<String, String> {
    match (report, format) {
        (Report::Success(table), ReportFormat::Csv) => Ok(success_table_csv(table)),
        (Report::TPoint(r), ReportFormat::Csv) => Ok(tpoint_report_csv(r)),
        (Report::Trace(t), ReportFormat::TraceJsonl) => Ok(trace_jsonl(t)),
        (Report::Success(table), ReportFormat::Json) => to_json(table),
        (Report::TPoint(r), ReportFormat::Json) => to_json(r),
        (Report::Trace(_), ReportFormat::Csv | ReportFormat::Json) => {
            Err("traces are emitted as JSON lines".into())
        }
        (_, ReportFormat::TraceJsonl) => Err("jsonl is only defined for traces".into()),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value).map_err(|e| e.to_string())
}

/// `size,criterion,success_rate,failed,budget_exhausted,mean_time_s,mean_iterations`
pub fn success_table_csv(table: &SuccessTable) -> String {
    let mut out = String::from(
        "size,criterion,success_rate,failed,budget_exhausted,mean_time_s,mean_iterations\n",
    );
    for cell in &table.cells {
        let _ = writeln!(
            out,
            "{},{},{:.2},{},{},{},{}",
            cell.size,
            cell.criterion,
            cell.success_rate,
            cell.failed_count,
            cell.budget_exhausted_count,
            cell.mean_time_s
                .map_or(String::new(), |t| format!("{t:.6}")),
            cell.mean_iterations
                .map_or(String::new(), |it| format!("{it:.2}")),
        );
    }
    out
}

/// Timing view of the same table: `size,criterion,mean_time_s,mean_iterations`.
pub fn runtime_table_csv(table: &SuccessTable) -> String {
    let mut out = String::from("size,criterion,mean_time_s,mean_iterations\n");
    for cell in &table.cells {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            cell.size,
            cell.criterion,
            cell.mean_time_s
                .map_or(String::new(), |t| format!("{t:.6}")),
            cell.mean_iterations
                .map_or(String::new(), |it| format!("{it:.2}")),
        );
    }
    out
}

/// Per-run detail rows:
/// `graph_id,size,graph_index,criterion,outcome,iterations,final_length,oracle_length,wall_time_s`
pub fn cases_csv(cases: &[CaseResult]) -> String {
    let mut out = String::from(
        "graph_id,size,graph_index,criterion,outcome,iterations,final_length,oracle_length,wall_time_s\n",
    );
    for c in cases {
        let _ = writeln!(
            out,
            "{},{},{},{},{:?},{},{},{},{:.6}",
            c.graph_id,
            c.size,
            c.graph_index,
            c.criterion,
            c.outcome,
            c.iterations_used,
            c.final_length.map_or(String::new(), |l| format!("{l}")),
            c.oracle_length,
            c.wall_time_s,
        );
    }
    out
}

/// `repeat,tpoint_iteration,time_to_tpoint_s,confirmed`
pub fn tpoint_report_csv(report: &TPointReport) -> String {
    let mut out = String::from("repeat,tpoint_iteration,time_to_tpoint_s,confirmed\n");
    for run in &report.runs {
        let _ = writeln!(
            out,
            "{},{},{:.6},{}",
            run.repeat, run.tpoint_iteration, run.time_to_tpoint_s, run.confirmed
        );
    }
    out
}

#[derive(Serialize)]
struct TraceRow<'a> {
    iteration: usize,
    dpath_length: Option<f64>,
    dpath_nodes: &'a [NodeId],
    #[serde(rename = "sum_abs_delta_D")]
    sum_abs_delta_d: f64,
    elapsed_ns: u64,
}

/// One JSON object per iteration:
/// `{"iteration":..,"dpath_length":..,"dpath_nodes":[..],"sum_abs_delta_D":..,"elapsed_ns":..}`.
/// A failed extraction serializes as `dpath_length: null` with empty nodes.
pub fn trace_jsonl(trace: &[TraceEntry]) -> String {
    let mut out = String::new();
    for entry in trace {
        let row = TraceRow {
            iteration: entry.iteration,
            dpath_length: entry.dpath.as_ref().map(|p| p.length()),
            dpath_nodes: entry.dpath.as_ref().map_or(&[], |p| p.nodes()),
            sum_abs_delta_d: entry.sum_abs_delta_d,
            elapsed_ns: entry.elapsed.as_nanos() as u64,
        };
        out.push_str(&serde_json::to_string(&row).expect("trace row serializes"));
        out.push('\n');
    }
    out
}

/// Writes via a temporary file in the same directory plus an atomic rename,
/// so a failed write never leaves a partial file at `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), ReportError> {
    let err = |source: io::Error| ReportError {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let file_name = path.file_name().ok_or_else(|| {
        err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "not a file path",
        ))
    })?;
    let mut tmp = PathBuf::from(dir.unwrap_or_else(|| Path::new(".")));
    tmp.push(format!(".{}.tmp", file_name.to_string_lossy()));
    std::fs::write(&tmp, contents).map_err(err)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        err(e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dpath::TerminationCriterion;
    use crate::engine::SolverConfig;
    use crate::graph::triangle_fixture;
    use crate::harness::{run_success_suite, run_tpoint_eval, SuiteSpec};

    fn small_table() -> SuccessTable {
        let mut spec = SuiteSpec::new(
            vec![5],
            3,
            vec![TerminationCriterion::DPathStable { k: 5 }],
            1,
            10_000,
        );
        spec.jobs = 1;
        run_success_suite(&spec).unwrap().table
    }

    #[test]
    fn success_csv_schema() {
        let csv = success_table_csv(&small_table());
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "size,criterion,success_rate,failed,budget_exhausted,mean_time_s,mean_iterations"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("5,k=5,"));
        assert_eq!(row.split(',').count(), 7);
    }

    #[test]
    fn csv_is_deterministic_outside_timing_column() {
        let strip_time = |csv: &str| -> Vec<String> {
            csv.lines()
                .map(|l| {
                    let mut f: Vec<&str> = l.split(',').collect();
                    if f.len() == 7 {
                        f[5] = "-";
                    }
                    f.join(",")
                })
                .collect()
        };
        let a = success_table_csv(&small_table());
        let b = success_table_csv(&small_table());
        assert_eq!(strip_time(&a), strip_time(&b));
    }

    #[test]
    fn trace_jsonl_schema() {
        let g = triangle_fixture();
        let record = crate::engine::run(
            &g,
            &SolverConfig::default(),
            &TerminationCriterion::DPathStable { k: 3 },
        )
        .unwrap();
        let jsonl = trace_jsonl(&record.trace);
        let first = jsonl.lines().next().unwrap();
        let value: serde_json::Value = serde_json::from_str(first).unwrap();
        assert_eq!(value["iteration"], 1);
        assert_eq!(value["dpath_length"], 7.0);
        assert_eq!(value["dpath_nodes"], serde_json::json!([1, 3, 2]));
        assert!(value["sum_abs_delta_D"].is_number());
        assert!(value["elapsed_ns"].is_u64());
        assert_eq!(jsonl.lines().count(), record.trace.len());
    }

    #[test]
    fn tpoint_csv_schema() {
        let g = triangle_fixture();
        let report = run_tpoint_eval(
            &g,
            &SolverConfig::default(),
            &TerminationCriterion::DPathStable { k: 10 },
            1,
            50,
        )
        .unwrap();
        let csv = tpoint_report_csv(&report);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "repeat,tpoint_iteration,time_to_tpoint_s,confirmed"
        );
        assert!(lines.next().unwrap().starts_with("0,1,"));
    }

    #[test]
    fn atomic_write_roundtrip() {
        let dir = std::env::temp_dir().join(format!("physarum-report-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("table.csv");
        write_atomic(&path, "hello\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "hello\n");
        // no temp file is left behind
        assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn emit_report_rejects_mismatched_formats() {
        let g = triangle_fixture();
        let record = crate::engine::run(
            &g,
            &SolverConfig::default(),
            &TerminationCriterion::DPathStable { k: 3 },
        )
        .unwrap();
        let dest = std::env::temp_dir().join("physarum-bad-format.csv");
        let err = emit_report(Report::Trace(&record.trace), ReportFormat::Csv, &dest).unwrap_err();
        assert!(err.to_string().contains("JSON lines"));
        assert!(!dest.exists());
    }
}
