//! Robustness sweeps and the node-size timing benchmark.
//!
//! Every sweep resolves its input sequence once and reruns the tracker with
//! varied settings, comparing first-failure frames (`None` = survived the
//! whole sequence). Timings are means over per-frame step wall time after a
//! 3-frame warmup.

use pwot_core::tracker::ParallelConfig;

use crate::error::Result;
use crate::experiment::{resolve_input, run_tracking, ExperimentConfig, RunReport};

fn median(mut values: Vec<u64>) -> u64 {
    values.sort_unstable();
    values[values.len() / 2]
}

/// One node size's row in the benchmark table.
///
/// `node_table_bits` is the size of a single RAM node table (`2^N`), the
/// column that doubles exactly per address bit. `footprint_bits` is the
/// whole template (`k · 2^N` with `k = ceil(total_bits / N)`).
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BenchRow {
    pub node_size: usize,
    pub mean_et_ms: f64,
    pub node_table_bits: u64,
    pub footprint_bits: u64,
    pub first_failure: Option<u64>,
}

/// Runs the base experiment once per node size on the same input and
/// reports the timing/footprint curve.
pub fn bench_node_sizes(sizes: &[usize], base: &ExperimentConfig) -> Result<Vec<BenchRow>> {
    let data = resolve_input(&base.input)?;
    let slw = base
        .slw
        .or_else(|| data.suggested_slw())
        .ok_or_else(|| crate::Error::BadConfig("benchmark needs a selection window".into()))?;
    let seeds = base.repetition_seeds();
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let mut tracker = base.tracker.clone();
        tracker.node_size = size;
        tracker.parallel = None;
        let mut runs: Vec<RunReport> = Vec::new();
        for &seed in &seeds {
            runs.push(run_tracking(
                &data.frames,
                data.truth.as_deref(),
                slw,
                &tracker,
                base.corruption,
                seed,
            )?);
        }
        let mean_et_ms =
            runs.iter().map(|r| r.summary.mean_et_ms).sum::<f64>() / runs.len() as f64;
        rows.push(BenchRow {
            node_size: size,
            mean_et_ms,
            node_table_bits: 1u64 << size,
            footprint_bits: runs[0].summary.template_footprint_bits,
            first_failure: runs[0].summary.first_failure,
        });
    }
    Ok(rows)
}

/// One (preset, corruption, seed) cell of the grid-density sweep.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GridCell {
    pub preset: String,
    pub corruption: f64,
    pub seed: u64,
    pub first_failure: Option<u64>,
    pub survived_frames: u64,
}

/// Majority summary of one (preset, corruption) cell across seeds.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GridCellSummary {
    pub preset: String,
    pub corruption: f64,
    /// True when more than half of the seeds survived the whole sequence.
    pub no_failure_majority: bool,
    pub survived_median: u64,
}

/// Cross product of grid presets × corruption fractions × repetition seeds.
pub fn sweep_grids(
    presets: &[String],
    corruptions: &[f64],
    base: &ExperimentConfig,
) -> Result<(Vec<GridCell>, Vec<GridCellSummary>)> {
    let data = resolve_input(&base.input)?;
    let slw = base
        .slw
        .or_else(|| data.suggested_slw())
        .ok_or_else(|| crate::Error::BadConfig("sweep needs a selection window".into()))?;
    let seeds = base.repetition_seeds();
    let mut cells = Vec::new();
    let mut summaries = Vec::new();
    for preset in presets {
        for &corruption in corruptions {
            let mut tracker = base.tracker.clone();
            tracker.layout = pwot_core::tracker::LayoutChoice::Preset(preset.clone());
            let mut survived = Vec::with_capacity(seeds.len());
            for &seed in &seeds {
                let run = run_tracking(
                    &data.frames,
                    data.truth.as_deref(),
                    slw,
                    &tracker,
                    corruption,
                    seed,
                )?;
                survived.push(run.survived_frames());
                cells.push(GridCell {
                    preset: preset.clone(),
                    corruption,
                    seed,
                    first_failure: run.summary.first_failure,
                    survived_frames: run.survived_frames(),
                });
            }
            let frames = data.frames.len() as u64;
            let no_failure = survived.iter().filter(|&&s| s >= frames).count();
            summaries.push(GridCellSummary {
                preset: preset.clone(),
                corruption,
                no_failure_majority: 2 * no_failure > seeds.len(),
                survived_median: median(survived),
            });
        }
    }
    Ok((cells, summaries))
}

/// Tracker variant exercised by the parallel-fraction sweep.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum ParallelMode {
    /// Dual-node-size parallel discriminator at this central fraction.
    Parallel(f64),
    /// Single-network baseline at this node size.
    Single(usize),
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ParallelRow {
    pub mode: ParallelMode,
    pub corruption: f64,
    pub seed: u64,
    pub first_failure: Option<u64>,
    pub survived_frames: u64,
}

impl ParallelRow {
    pub fn mode_name(&self) -> String {
        match self.mode {
            ParallelMode::Parallel(_) => "parallel".into(),
            ParallelMode::Single(n) => format!("single{n}"),
        }
    }

    pub fn central_fraction(&self) -> Option<f64> {
        match self.mode {
            ParallelMode::Parallel(p) => Some(p),
            ParallelMode::Single(_) => None,
        }
    }
}

/// For each corruption level: runs the parallel tracker at every central
/// fraction plus the two single-network baselines (the parallel config's
/// inner and outer node sizes).
pub fn sweep_parallel(
    fractions: &[f64],
    corruptions: &[f64],
    base: &ExperimentConfig,
) -> Result<Vec<ParallelRow>> {
    let data = resolve_input(&base.input)?;
    let slw = base
        .slw
        .or_else(|| data.suggested_slw())
        .ok_or_else(|| crate::Error::BadConfig("sweep needs a selection window".into()))?;
    let seeds = base.repetition_seeds();
    let parallel_base = base.tracker.parallel.unwrap_or_default();

    let mut modes: Vec<ParallelMode> = fractions.iter().map(|&p| ParallelMode::Parallel(p)).collect();
    modes.push(ParallelMode::Single(parallel_base.inner_node_size));
    modes.push(ParallelMode::Single(parallel_base.outer_node_size));

    let mut rows = Vec::new();
    for &mode in &modes {
        for &corruption in corruptions {
            let mut tracker = base.tracker.clone();
            match mode {
                ParallelMode::Parallel(p) => {
                    tracker.parallel = Some(ParallelConfig {
                        central_fraction: p,
                        ..parallel_base
                    });
                }
                ParallelMode::Single(n) => {
                    tracker.parallel = None;
                    tracker.node_size = n;
                }
            }
            for &seed in &seeds {
                let run = run_tracking(
                    &data.frames,
                    data.truth.as_deref(),
                    slw,
                    &tracker,
                    corruption,
                    seed,
                )?;
                rows.push(ParallelRow {
                    mode,
                    corruption,
                    seed,
                    first_failure: run.summary.first_failure,
                    survived_frames: run.survived_frames(),
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bench_columns_follow_the_formulas() {
        let mut cfg = ExperimentConfig::preset_scene("easy", 3);
        cfg.tracker.seed = 7;
        let rows = bench_node_sizes(&[3, 4, 5], &cfg).unwrap();
        assert_eq!(rows.len(), 3);
        // per-node table doubles exactly per address bit
        assert_eq!(rows[1].node_table_bits, 2 * rows[0].node_table_bits);
        assert_eq!(rows[2].node_table_bits, 2 * rows[1].node_table_bits);
        // template footprint is k * 2^N with k = ceil(total / N)
        let total = 46 * 26; // suggested SLW of the easy preset
        for row in &rows {
            let k = (total + row.node_size - 1) / row.node_size;
            assert_eq!(row.footprint_bits, (k as u64) << row.node_size);
        }
        assert!(rows.iter().all(|r| r.first_failure.is_none()));
    }

    #[test]
    fn parallel_extremes_match_single_baselines() {
        let mut cfg = ExperimentConfig::preset_scene("easy", 11);
        cfg.tracker.seed = 5;
        cfg.corruption = 0.15;
        let rows = sweep_parallel(&[0.0, 1.0], &[0.15], &cfg).unwrap();
        let survived = |pred: &dyn Fn(&ParallelRow) -> bool| -> u64 {
            rows.iter().find(|r| pred(r)).unwrap().survived_frames
        };
        let p0 = survived(&|r| r.mode == ParallelMode::Parallel(0.0));
        let p1 = survived(&|r| r.mode == ParallelMode::Parallel(1.0));
        let s3 = survived(&|r| r.mode == ParallelMode::Single(3));
        let s15 = survived(&|r| r.mode == ParallelMode::Single(15));
        assert_eq!(p1, s3, "P=1 must equal the inner-node baseline");
        assert_eq!(p0, s15, "P=0 must equal the outer-node baseline");
    }
}
