//! Seeded synthetic sequences with ground truth.
//!
//! A scene is a static textured background with a static textured target
//! rectangle moving along a piecewise-linear path; optional per-frame pixel
//! noise sits on top. Everything derives from one seed, so sequences replay
//! bit for bit. Three presets cover the robustness studies: `easy`
//! (well-separated colors, constant velocity), `low-contrast` (small
//! target/background separation → intrinsic quantization errors) and
//! `maneuver` (instantaneous direction change mid-sequence).

use pwot_core::quantize::{FramePixels, Rect};
use pwot_core::rng::{derive, SplitMix64};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Independent per-channel normal distribution of RGB values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColorDistribution {
    pub mean: [f64; 3],
    pub std: [f64; 3],
}

/// Target-center position at a given frame; positions between waypoints are
/// linearly interpolated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub frame: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub width: u32,
    pub height: u32,
    pub frames: usize,
    pub background: ColorDistribution,
    pub target: ColorDistribution,
    pub target_size: (u32, u32),
    /// Target-center waypoints, strictly increasing frame indices.
    pub path: Vec<Waypoint>,
    /// Standard deviation of the per-frame additive pixel noise.
    pub noise_std: f64,
    pub seed: u64,
}

pub const PRESET_NAMES: [&str; 3] = ["easy", "low-contrast", "maneuver"];

/// Builds a named scene preset with the given seed.
pub fn preset(name: &str, seed: u64) -> Result<SyntheticSpec> {
    let base = |target_mean: [f64; 3], target_std: f64, noise: f64, path: Vec<Waypoint>| {
        SyntheticSpec {
            width: 320,
            height: 240,
            frames: 60,
            background: ColorDistribution {
                mean: [60.0, 90.0, 140.0],
                std: [6.0, 6.0, 6.0],
            },
            target: ColorDistribution {
                mean: target_mean,
                std: [target_std; 3],
            },
            target_size: (40, 20),
            path,
            noise_std: noise,
            seed,
        }
    };
    let spec = match name {
        // 2 px/frame constant velocity, strong color separation
        "easy" => base(
            [185.0, 70.0, 45.0],
            5.0,
            2.0,
            vec![
                Waypoint { frame: 0, x: 80.0, y: 120.0 },
                Waypoint { frame: 59, x: 198.0, y: 120.0 },
            ],
        ),
        // small luma/chroma gap to the sea colors: background bits flicker
        // inside the threshold ranges and real distractors appear
        "low-contrast" => {
            let mut spec = base(
                [102.0, 110.0, 158.0],
                8.0,
                3.0,
                vec![
                    Waypoint { frame: 0, x: 80.0, y: 120.0 },
                    Waypoint { frame: 59, x: 198.0, y: 120.0 },
                ],
            );
            spec.background = ColorDistribution {
                mean: [70.0, 100.0, 150.0],
                std: [8.0, 8.0, 8.0],
            };
            spec
        }
        // instantaneous direction change mid-sequence
        "maneuver" => base(
            [185.0, 70.0, 45.0],
            5.0,
            2.0,
            vec![
                Waypoint { frame: 0, x: 90.0, y: 100.0 },
                Waypoint { frame: 31, x: 214.0, y: 100.0 },
                Waypoint { frame: 59, x: 90.0, y: 162.0 },
            ],
        ),
        _ => {
            return Err(Error::BadConfig(format!(
                "unknown scene preset {name:?}; valid presets: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(spec)
}

/// First-frame selection window used by experiments on this scene: the
/// frame-0 truth box inflated by a 3-pixel margin.
pub fn suggested_slw(truth: &[Rect]) -> Option<Rect> {
    truth.first().map(|b| b.inflate(3))
}

fn validate(spec: &SyntheticSpec) -> Result<()> {
    if spec.frames == 0 {
        return Err(Error::BadConfig("sequence needs at least one frame".into()));
    }
    if spec.width == 0 || spec.height == 0 {
        return Err(Error::BadConfig("frame must have a nonzero size".into()));
    }
    if spec.path.is_empty() {
        return Err(Error::BadConfig("path needs at least one waypoint".into()));
    }
    if spec.path.windows(2).any(|w| w[1].frame <= w[0].frame) {
        return Err(Error::BadConfig(
            "waypoint frame indices must be strictly increasing".into(),
        ));
    }
    let (tw, th) = spec.target_size;
    if tw == 0 || th == 0 || tw > spec.width || th > spec.height {
        return Err(Error::BadConfig(format!(
            "target size {tw}x{th} does not fit a {}x{} frame",
            spec.width, spec.height
        )));
    }
    for std in spec.background.std.iter().chain(spec.target.std.iter()) {
        if *std < 0.0 {
            return Err(Error::BadConfig("color std must be >= 0".into()));
        }
    }
    if spec.noise_std < 0.0 {
        return Err(Error::BadConfig("noise std must be >= 0".into()));
    }
    Ok(())
}

/// Target-center position at frame `t` along the waypoint polyline.
pub fn path_position(path: &[Waypoint], t: usize) -> (f64, f64) {
    let first = path.first().expect("validated nonempty path");
    let last = path.last().expect("validated nonempty path");
    if t <= first.frame {
        return (first.x, first.y);
    }
    if t >= last.frame {
        return (last.x, last.y);
    }
    for pair in path.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if t >= a.frame && t < b.frame {
            let s = (t - a.frame) as f64 / (b.frame - a.frame) as f64;
            return (a.x + s * (b.x - a.x), a.y + s * (b.y - a.y));
        }
    }
    (last.x, last.y)
}

fn texture(w: u32, h: u32, dist: &ColorDistribution, rng: &mut SplitMix64) -> Vec<[f64; 3]> {
    (0..w as usize * h as usize)
        .map(|_| {
            let mut px = [0.0; 3];
            for c in 0..3 {
                px[c] = dist.mean[c] + dist.std[c] * rng.next_gaussian();
            }
            px
        })
        .collect()
}

/// Renders the sequence and its ground-truth boxes. Frames are identical
/// across calls with the same spec.
pub fn generate(spec: &SyntheticSpec) -> Result<(Vec<FramePixels>, Vec<Rect>)> {
    validate(spec)?;
    let (w, h) = (spec.width, spec.height);
    let (tw, th) = spec.target_size;
    let bg = texture(w, h, &spec.background, &mut SplitMix64::new(derive(spec.seed, 1)));
    let tg = texture(tw, th, &spec.target, &mut SplitMix64::new(derive(spec.seed, 2)));

    let mut frames = Vec::with_capacity(spec.frames);
    let mut truth = Vec::with_capacity(spec.frames);
    for t in 0..spec.frames {
        let (cx, cy) = path_position(&spec.path, t);
        let rect = Rect::centered_at(cx.round() as i32, cy.round() as i32, tw, th);
        if rect.x < 0 || rect.y < 0 || rect.right() > w as i64 || rect.bottom() > h as i64 {
            return Err(Error::PathOutOfFrame { frame: t });
        }
        truth.push(rect);

        let mut noise = if spec.noise_std > 0.0 {
            Some(SplitMix64::new(derive(spec.seed, 100 + t as u64)))
        } else {
            None
        };
        let mut data = Vec::with_capacity(w as usize * h as usize * 3);
        for y in 0..h as i32 {
            for x in 0..w as i32 {
                let on_target = x >= rect.x
                    && (x as i64) < rect.right()
                    && y >= rect.y
                    && (y as i64) < rect.bottom();
                let base = if on_target {
                    tg[((y - rect.y) as u32 * tw + (x - rect.x) as u32) as usize]
                } else {
                    bg[(y as u32 * w + x as u32) as usize]
                };
                for base_c in base {
                    let v = match &mut noise {
                        Some(rng) => base_c + spec.noise_std * rng.next_gaussian(),
                        None => base_c,
                    };
                    data.push(v.round().clamp(0.0, 255.0) as u8);
                }
            }
        }
        frames.push(FramePixels::new(w, h, data)?);
    }
    Ok((frames, truth))
}
