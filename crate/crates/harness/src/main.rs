//! `pwot` — parallel WiSARD object tracker CLI.
//!
//! Subcommands: `track` (run the tracker over a frame directory), `synth`
//! (generate a synthetic sequence with ground truth), `bench` (node-size
//! timing/footprint curve), `sweep-grids` (grid presets × corruption) and
//! `sweep-parallel` (central fraction × corruption against single-network
//! baselines). Set `PWOT_VERBOSE=1` for progress output.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use pwot_core::quantize::Rect;
use pwot_core::tracker::TrackerConfig;
use pwot_harness::experiment::{
    run_experiment, ExperimentConfig, ExperimentInput,
};
use pwot_harness::{bench, io, report, synth};

#[derive(Parser)]
#[command(name = "pwot", version, about = "Parallel WiSARD object tracker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonConfig {
    /// Experiment config JSON (ExperimentConfig schema; see the README).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path (stdout when omitted). A `.summary.json` file is
    /// written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Track a target through a directory of PPM/PNG frames.
    Track {
        /// Directory holding the frame sequence.
        #[arg(long)]
        frames: PathBuf,
        /// First-frame selection window as X,Y,W,H.
        #[arg(long, value_parser = parse_rect)]
        slw: Option<Rect>,
        /// Ground-truth boxes JSON (enables IoU columns and first-failure).
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Write per-frame overlay PPMs into this directory.
        #[arg(long)]
        dump_overlays: Option<PathBuf>,
        #[command(flatten)]
        common: CommonConfig,
    },
    /// Generate a synthetic sequence (frames as PPM plus truth.json).
    Synth {
        /// Scene spec JSON (SyntheticSpec schema).
        #[arg(long, conflicts_with = "preset")]
        spec: Option<PathBuf>,
        /// Scene preset: easy | low-contrast | maneuver.
        #[arg(long)]
        preset: Option<String>,
        /// Scene seed (presets only).
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Time the tracker across RAM-node sizes on one input.
    Bench {
        /// Comma-separated node sizes, e.g. 2,3,4,8,14,20.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[command(flatten)]
        common: CommonConfig,
    },
    /// First-failure frames across grid presets and corruption levels.
    SweepGrids {
        /// Comma-separated preset names, e.g. GP8,GP9,GP10,GP11.
        #[arg(long, value_delimiter = ',', required = true)]
        presets: Vec<String>,
        /// Comma-separated corruption flip fractions.
        #[arg(long, value_delimiter = ',', default_value = "0.0,0.2")]
        corruption: Vec<f64>,
        #[command(flatten)]
        common: CommonConfig,
    },
    /// Parallel-discriminator central-fraction sweep with single-network
    /// baselines.
    SweepParallel {
        /// Comma-separated central fractions in [0,1].
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
        fractions: Vec<f64>,
        /// Comma-separated corruption flip fractions.
        #[arg(long, value_delimiter = ',', default_value = "0.2")]
        corruption: Vec<f64>,
        #[command(flatten)]
        common: CommonConfig,
    },
}

fn parse_rect(s: &str) -> Result<Rect, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err("expected X,Y,W,H".into());
    }
    let parse = |i: usize| parts[i].trim().parse::<i64>().map_err(|e| e.to_string());
    let (x, y, w, h) = (parse(0)?, parse(1)?, parse(2)?, parse(3)?);
    if w < 1 || h < 1 {
        return Err("width and height must be positive".into());
    }
    Ok(Rect::new(x as i32, y as i32, w as u32, h as u32))
}

fn verbose() -> bool {
    std::env::var("PWOT_VERBOSE").map_or(false, |v| v == "1" || v.eq_ignore_ascii_case("true"))
}

fn load_config(path: &Option<PathBuf>) -> anyhow::Result<ExperimentConfig> {
    match path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
        }
        None => Ok(ExperimentConfig::preset_scene("easy", 7)),
    }
}

fn emit(out: &Option<PathBuf>, csv: &str, summary: Option<String>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
            if let Some(summary) = summary {
                let sp = path.with_extension("summary.json");
                fs::write(&sp, summary).with_context(|| format!("writing {}", sp.display()))?;
            }
            if verbose() {
                eprintln!("wrote {}", path.display());
            }
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Track {
            frames,
            slw,
            truth,
            dump_overlays,
            common,
        } => {
            let mut config = load_config(&common.config)?;
            config.input = ExperimentInput::FramesDir {
                frames_dir: frames,
                truth,
            };
            if slw.is_some() {
                config.slw = slw;
            }
            if config.slw.is_none() && matches!(config.input, ExperimentInput::FramesDir { ref truth, .. } if truth.is_none()) {
                bail!("either --slw or --truth must provide the first-frame selection window");
            }
            if verbose() {
                eprintln!("tracking with layout {:?}", config.tracker.layout);
            }
            let rep = run_experiment(&config)?;
            if let Some(dir) = dump_overlays {
                let data = pwot_harness::experiment::resolve_input(&config.input)?;
                let reported: Vec<(usize, Rect)> = rep.runs[0]
                    .rows
                    .iter()
                    .map(|r| (r.frame as usize, r.reported))
                    .collect();
                io::write_overlays(&dir, &data.frames, &reported, data.truth.as_deref())?;
                if verbose() {
                    eprintln!("overlays in {}", dir.display());
                }
            }
            emit(
                &common.out,
                &report::experiment_csv(&rep),
                Some(report::summary_json(&rep)),
            )?;
        }
        Command::Synth {
            spec,
            preset,
            seed,
            out,
        } => {
            let spec = match (spec, preset) {
                (Some(path), None) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str(&text)
                        .with_context(|| format!("parsing {}", path.display()))?
                }
                (None, Some(name)) => synth::preset(&name, seed)?,
                (None, None) => synth::preset("easy", seed)?,
                (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
            };
            let (frames, truth) = synth::generate(&spec)?;
            io::save_frames_ppm(&out, &frames)?;
            io::write_truth_json(&out.join("truth.json"), &truth)?;
            let slw = synth::suggested_slw(&truth).expect("nonempty sequence");
            println!(
                "wrote {} frames to {}; suggested --slw {},{},{},{}",
                frames.len(),
                out.display(),
                slw.x,
                slw.y,
                slw.w,
                slw.h
            );
        }
        Command::Bench { sizes, common } => {
            let config = load_config(&common.config)?;
            let rows = bench::bench_node_sizes(&sizes, &config)?;
            emit(&common.out, &report::bench_csv(&rows), None)?;
        }
        Command::SweepGrids {
            presets,
            corruption,
            common,
        } => {
            let config = load_config(&common.config)?;
            let (cells, summaries) = bench::sweep_grids(&presets, &corruption, &config)?;
            emit(&common.out, &report::grid_sweep_csv(&cells, &summaries), None)?;
        }
        Command::SweepParallel {
            fractions,
            corruption,
            common,
        } => {
            let config = load_config(&common.config)?;
            let rows = bench::sweep_parallel(&fractions, &corruption, &config)?;
            emit(&common.out, &report::parallel_sweep_csv(&rows), None)?;
        }
    }
    Ok(())
}

// keep the tracker config type reachable for config-file docs
#[allow(dead_code)]
type FullTrackerConfig = TrackerConfig<f64>;
