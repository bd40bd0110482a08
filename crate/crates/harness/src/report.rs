//! CSV and JSON report formatting.
//!
//! CSV column order (one row per frame, one block per repetition seed):
//! `seed,frame,box_x,box_y,box_w,box_h,truth_x,truth_y,truth_w,truth_h,`
//! `iou,r1,r2,confidence,low_confidence,et_ms`. Unknown fields are blank,
//! booleans are 0/1, and `et_ms` is the only wall-clock (non-deterministic)
//! column — it is always last so determinism checks can strip it.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bench::{BenchRow, GridCell, GridCellSummary, ParallelRow};
use crate::experiment::{ExperimentReport, RunReport};

pub const RUN_CSV_HEADER: &str = "seed,frame,box_x,box_y,box_w,box_h,truth_x,truth_y,truth_w,truth_h,iou,r1,r2,confidence,low_confidence,et_ms";

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.6}")).unwrap_or_default()
}

/// Rows of one run, without the header.
pub fn run_rows_csv(run: &RunReport) -> String {
    let mut out = String::new();
    for r in &run.rows {
        let (tx, ty, tw, th) = match r.truth {
            Some(t) => (
                t.x.to_string(),
                t.y.to_string(),
                t.w.to_string(),
                t.h.to_string(),
            ),
            None => Default::default(),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.3}",
            run.seed,
            r.frame,
            r.reported.x,
            r.reported.y,
            r.reported.w,
            r.reported.h,
            tx,
            ty,
            tw,
            th,
            opt_f64(r.iou),
            opt(r.r1),
            opt(r.r2),
            opt_f64(r.confidence),
            r.low_confidence as u8,
            r.et_ms,
        )
        .expect("string write");
    }
    out
}

pub fn experiment_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(RUN_CSV_HEADER);
    out.push('\n');
    for run in &report.runs {
        out.push_str(&run_rows_csv(run));
    }
    out
}

/// Drops the trailing wall-clock column from every line, leaving only the
/// deterministic columns.
pub fn strip_timing_column(csv: &str) -> String {
    csv.lines()
        .map(|line| match line.rfind(',') {
            Some(i) => &line[..i],
            None => line,
        })
        .fold(String::new(), |mut acc, line| {
            acc.push_str(line);
            acc.push('\n');
            acc
        })
}

#[derive(Serialize)]
struct RunSummaryJson<'a> {
    seed: u64,
    corruption: f64,
    #[serde(flatten)]
    summary: &'a crate::experiment::RunSummary,
}

pub fn summary_json(report: &ExperimentReport) -> String {
    let summaries: Vec<RunSummaryJson> = report
        .runs
        .iter()
        .map(|r| RunSummaryJson {
            seed: r.seed,
            corruption: r.corruption,
            summary: &r.summary,
        })
        .collect();
    serde_json::to_string_pretty(&summaries).expect("summary serializes")
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("node_size,mean_et_ms,node_table_bits,footprint_bits,first_failure\n");
    for r in rows {
        writeln!(
            out,
            "{},{:.3},{},{},{}",
            r.node_size,
            r.mean_et_ms,
            r.node_table_bits,
            r.footprint_bits,
            opt(r.first_failure)
        )
        .expect("string write");
    }
    out
}

pub fn grid_sweep_csv(cells: &[GridCell], summaries: &[GridCellSummary]) -> String {
    let mut out = String::from("preset,corruption,seed,first_failure,survived_frames\n");
    for c in cells {
        writeln!(
            out,
            "{},{},{},{},{}",
            c.preset,
            c.corruption,
            c.seed,
            opt(c.first_failure),
            c.survived_frames
        )
        .expect("string write");
    }
    out.push_str("\npreset,corruption,no_failure_majority,survived_median\n");
    for s in summaries {
        writeln!(
            out,
            "{},{},{},{}",
            s.preset, s.corruption, s.no_failure_majority as u8, s.survived_median
        )
        .expect("string write");
    }
    out
}

pub fn parallel_sweep_csv(rows: &[ParallelRow]) -> String {
    let mut out = String::from("mode,central_fraction,corruption,seed,first_failure,survived_frames\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.mode_name(),
            opt(r.central_fraction()),
            r.corruption,
            r.seed,
            opt(r.first_failure),
            r.survived_frames
        )
        .expect("string write");
    }
    out
}
