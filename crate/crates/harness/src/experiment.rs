//! Experiment execution: resolve an input sequence, run the tracker over it
//! (optionally corrupting every quantized region), and collect per-frame
//! rows plus a summary per repetition seed.

use std::path::PathBuf;

use pwot_core::quantize::{FramePixels, Rect};
use pwot_core::rng::derive;
use pwot_core::tracker::{iou, RegionNoise, Tracker, TrackerConfig};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::synth::{self, SyntheticSpec};
use crate::{io, report};

/// Substream tag separating corruption draws from everything else derived
/// from a repetition seed.
const CORRUPTION_STREAM: u64 = 0xC0DE;

/// Where the frames come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExperimentInput {
    FramesDir {
        frames_dir: PathBuf,
        /// Optional ground-truth boxes (JSON list of rects) for IoU columns.
        #[serde(default)]
        truth: Option<PathBuf>,
    },
    Synthetic {
        synthetic: SyntheticSpec,
    },
    Preset {
        preset: String,
        #[serde(default)]
        scene_seed: u64,
    },
}

fn default_repetitions() -> usize {
    1
}

/// One experiment: an input sequence, a tracker configuration, a corruption
/// level and the repetition seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub input: ExperimentInput,
    /// First-frame selection window; defaults to the synthetic scene's
    /// suggested window when omitted.
    #[serde(default)]
    pub slw: Option<Rect>,
    #[serde(default)]
    pub tracker: TrackerConfig<f64>,
    /// Post-quantization flip fraction applied to every evaluated region.
    #[serde(default)]
    pub corruption: f64,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    /// Explicit per-repetition seeds; derived from the tracker seed when
    /// omitted.
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn preset_scene(name: &str, scene_seed: u64) -> Self {
        ExperimentConfig {
            input: ExperimentInput::Preset {
                preset: name.into(),
                scene_seed,
            },
            slw: None,
            tracker: TrackerConfig::default(),
            corruption: 0.0,
            repetitions: 1,
            seeds: None,
            output: None,
        }
    }

    pub fn repetition_seeds(&self) -> Vec<u64> {
        match &self.seeds {
            Some(seeds) if !seeds.is_empty() => seeds.clone(),
            _ => (0..self.repetitions.max(1))
                .map(|i| derive(self.tracker.seed, 0xEE00 + i as u64))
                .collect(),
        }
    }
}

/// A resolved input: frames plus ground truth when available.
pub struct SequenceData {
    pub frames: Vec<FramePixels>,
    pub truth: Option<Vec<Rect>>,
}

impl SequenceData {
    pub fn suggested_slw(&self) -> Option<Rect> {
        self.truth.as_deref().and_then(synth::suggested_slw)
    }
}

pub fn resolve_input(input: &ExperimentInput) -> Result<SequenceData> {
    match input {
        ExperimentInput::FramesDir { frames_dir, truth } => Ok(SequenceData {
            frames: io::load_frame_sequence(frames_dir)?,
            truth: truth
                .as_deref()
                .map(io::read_truth_json)
                .transpose()?,
        }),
        ExperimentInput::Synthetic { synthetic } => {
            let (frames, truth) = synth::generate(synthetic)?;
            Ok(SequenceData {
                frames,
                truth: Some(truth),
            })
        }
        ExperimentInput::Preset { preset, scene_seed } => {
            let spec = synth::preset(preset, *scene_seed)?;
            let (frames, truth) = synth::generate(&spec)?;
            Ok(SequenceData {
                frames,
                truth: Some(truth),
            })
        }
    }
}

/// One CSV row. `truth`, `iou`, `r1`, `r2` and `confidence` are blank where
/// unknown (frame 0 carries the initialization, not a search).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameRow {
    pub frame: u64,
    pub reported: Rect,
    pub truth: Option<Rect>,
    pub iou: Option<f64>,
    pub r1: Option<u32>,
    pub r2: Option<u32>,
    pub confidence: Option<f64>,
    pub low_confidence: bool,
    pub et_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    /// First frame whose reported box has IoU < 0.5 with the truth; `None`
    /// when the tracker never fails (or no truth is known).
    pub first_failure: Option<u64>,
    /// Mean per-frame tracking time after a 3-frame warmup, milliseconds.
    pub mean_et_ms: f64,
    pub frames: usize,
    pub low_confidence_frames: usize,
    /// Node-table bits of the trained template.
    pub template_footprint_bits: u64,
    /// Node count (largest possible response) of the template.
    pub template_max_response: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub seed: u64,
    pub corruption: f64,
    pub rows: Vec<FrameRow>,
    pub summary: RunSummary,
}

impl RunReport {
    /// Frames survived before the first failure; the full sequence length
    /// when the tracker never failed. The comparison currency of the
    /// robustness sweeps.
    pub fn survived_frames(&self) -> u64 {
        self.summary
            .first_failure
            .unwrap_or(self.rows.len() as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub runs: Vec<RunReport>,
}

/// Runs the tracker once over in-memory frames.
///
/// `seed` replaces the tracker's mapping seed and (mixed with a substream
/// tag) seeds the per-frame, per-region corruption draws. Row 0 records the
/// initialization; a step row is emitted for every later frame.
pub fn run_tracking(
    frames: &[FramePixels],
    truth: Option<&[Rect]>,
    slw: Rect,
    tracker_config: &TrackerConfig<f64>,
    corruption: f64,
    seed: u64,
) -> Result<RunReport> {
    if frames.is_empty() {
        return Err(Error::BadConfig("experiment needs at least one frame".into()));
    }
    let mut config = tracker_config.clone();
    config.seed = seed;
    let noise = (corruption > 0.0).then_some(RegionNoise {
        flip_fraction: corruption,
        seed: derive(seed, CORRUPTION_STREAM),
    });

    let init_started = std::time::Instant::now();
    let mut tracker = Tracker::init(&frames[0], slw, config)?;
    let init_ms = init_started.elapsed().as_secs_f64() * 1e3;
    if tracker.uninformative_model() {
        eprintln!(
            "warning: training pattern is uniform ({} of {} bits set); the model carries no shape",
            tracker.training_pattern().count_ones(),
            tracker.training_pattern().len()
        );
    }

    let truth_at = |i: usize| -> Option<Rect> { truth.and_then(|t| t.get(i).copied()) };
    let mut rows = Vec::with_capacity(frames.len());
    let slw_sized_truth = |b: Rect| -> Rect {
        // truth boxes are target-sized; compare SLW-sized boxes around the
        // same center so the ratio measures position error, not the margin
        let (cx, cy) = b.center();
        Rect::centered_at(cx, cy, slw.w, slw.h)
    };
    rows.push(FrameRow {
        frame: 0,
        reported: slw,
        truth: truth_at(0),
        iou: truth_at(0).map(|t| iou(slw, slw_sized_truth(t))),
        r1: None,
        r2: None,
        confidence: None,
        low_confidence: false,
        et_ms: init_ms,
    });

    for (i, frame) in frames.iter().enumerate().skip(1) {
        let res = tracker.step_with_noise(frame, noise.as_ref())?;
        let truth_box = truth_at(i);
        rows.push(FrameRow {
            frame: res.frame,
            reported: res.reported,
            truth: truth_box,
            iou: truth_box.map(|t| iou(res.reported, slw_sized_truth(t))),
            r1: Some(res.r1),
            r2: Some(res.r2),
            confidence: res.confidence,
            low_confidence: res.low_confidence,
            et_ms: res.elapsed.as_secs_f64() * 1e3,
        });
    }

    let first_failure = rows
        .iter()
        .find(|r| matches!(r.iou, Some(v) if v < 0.5))
        .map(|r| r.frame);
    let step_rows = &rows[1..];
    let warmup = 3.min(step_rows.len().saturating_sub(1));
    let timed = &step_rows[warmup..];
    let mean_et_ms = if timed.is_empty() {
        0.0
    } else {
        timed.iter().map(|r| r.et_ms).sum::<f64>() / timed.len() as f64
    };
    let summary = RunSummary {
        first_failure,
        mean_et_ms,
        frames: rows.len(),
        low_confidence_frames: rows.iter().filter(|r| r.low_confidence).count(),
        template_footprint_bits: tracker.footprint_bits(),
        template_max_response: tracker.max_response(),
    };
    Ok(RunReport {
        seed,
        corruption,
        rows,
        summary,
    })
}

/// Resolves the input once and runs one repetition per seed.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let data = resolve_input(&config.input)?;
    let slw = config
        .slw
        .or_else(|| data.suggested_slw())
        .ok_or_else(|| {
            Error::BadConfig("no selection window: set `slw` or use an input with truth".into())
        })?;
    let mut runs = Vec::new();
    for seed in config.repetition_seeds() {
        runs.push(run_tracking(
            &data.frames,
            data.truth.as_deref(),
            slw,
            &config.tracker,
            config.corruption,
            seed,
        )?);
    }
    Ok(ExperimentReport { runs })
}

/// Runs the experiment and writes the CSV (and JSON summary next to it)
/// when an output path is configured.
pub fn run_experiment_to_files(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let rep = run_experiment(config)?;
    if let Some(path) = &config.output {
        std::fs::write(path, report::experiment_csv(&rep))
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        let summary_path = path.with_extension("summary.json");
        std::fs::write(&summary_path, report::summary_json(&rep))
            .map_err(|e| Error::io(summary_path.display().to_string(), e))?;
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_config(corruption: f64) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::preset_scene("easy", 5);
        cfg.corruption = corruption;
        cfg.tracker.seed = 42;
        cfg
    }

    #[test]
    fn clean_easy_scene_never_fails() {
        let rep = run_experiment(&quick_config(0.0)).unwrap();
        assert_eq!(rep.runs.len(), 1);
        let run = &rep.runs[0];
        assert_eq!(run.summary.first_failure, None);
        assert_eq!(run.rows.len(), 60);
        assert!(run.rows.iter().all(|r| r.iou.unwrap() >= 0.5));
    }

    #[test]
    fn fully_inverted_patterns_fail_early() {
        let rep = run_experiment(&quick_config(1.0)).unwrap();
        let run = &rep.runs[0];
        let failure = run.summary.first_failure.expect("must fail");
        assert!(failure <= 10, "failed only at {failure}");
    }

    #[test]
    fn repetition_seeds_do_not_change_clean_iou_columns() {
        // A noiseless scene quantizes to exact masks and a 1 px dense layer
        // always contains the perfectly aligned region, whose full response
        // is the unique maximum for every input mapping. The winner — hence
        // the IoU column — is then independent of the repetition seed.
        let mut spec = crate::synth::preset("easy", 5).unwrap();
        spec.background.std = [0.0; 3];
        spec.target.std = [0.0; 3];
        spec.noise_std = 0.0;
        let mut cfg = ExperimentConfig {
            input: ExperimentInput::Synthetic { synthetic: spec },
            ..quick_config(0.0)
        };
        cfg.tracker.layout = pwot_core::tracker::LayoutChoice::Preset("GP11".into());
        cfg.seeds = Some(vec![1, 2, 3, 4, 5]);
        let rep = run_experiment(&cfg).unwrap();
        assert_eq!(rep.runs.len(), 5);
        let reference: Vec<Option<f64>> = rep.runs[0].rows.iter().map(|r| r.iou).collect();
        for run in &rep.runs[1..] {
            let ious: Vec<Option<f64>> = run.rows.iter().map(|r| r.iou).collect();
            assert_eq!(ious, reference);
        }
    }

    #[test]
    fn reports_replay_exactly_per_seed() {
        let cfg = quick_config(0.3);
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        let strip = |r: &RunReport| -> Vec<(u64, Rect, Option<u32>, Option<u32>, bool)> {
            r.rows
                .iter()
                .map(|row| (row.frame, row.reported, row.r1, row.r2, row.low_confidence))
                .collect()
        };
        assert_eq!(strip(&a.runs[0]), strip(&b.runs[0]));
    }

    #[test]
    fn missing_slw_without_truth_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        crate::io::write_ppm(
            &dir.path().join("f0.ppm"),
            &FramePixels::solid(64, 64, [9, 9, 9]),
        )
        .unwrap();
        let cfg = ExperimentConfig {
            input: ExperimentInput::FramesDir {
                frames_dir: dir.path().to_path_buf(),
                truth: None,
            },
            ..ExperimentConfig::preset_scene("easy", 1)
        };
        assert!(matches!(run_experiment(&cfg), Err(Error::BadConfig(_))));
    }
}
