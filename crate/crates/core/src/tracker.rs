//! Per-frame tracking orchestration.
//!
//! The first frame fixes everything: thresholds come from the operator's
//! selection window (SLW), every discriminator trains on the one quantized
//! SLW pattern, and the search-region size equals the SLW size. Each later
//! frame anchors the grid layers at the predicted position, quantizes each
//! search region with the frozen thresholds, and reports the region with the
//! highest response — provided its confidence level `C = (R1 − R2) / R1`
//! clears the configured minimum. Low confidence means ambiguity: the
//! tracker coasts on the prediction and skips the measurement update.
//!
//! All discriminators are trained identically, so one trained template
//! (per node-size configuration) is evaluated at every grid position instead
//! of keeping hundreds of identical copies.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bits::BitPattern;
use crate::error::{Error, Result};
use crate::grid::{instantiate_layer, Anchor, CenterSet, LayerSpec, LayoutSpec};
use crate::predictor::{displacement_plausible, KalmanConfig, KalmanFilter, PositionHistory};
use crate::quantize::{
    channel_stats, prewitt_border_points, quantize_region, sample_bands, thresholds_rgb,
    thresholds_ycbcr, ycbcr_default_scales, ColorSpace, CorruptionSpec, FramePixels,
    QuantizedMask, Rect, ThresholdSet,
};
use crate::rng::derive;
use crate::wnn::{make_input_mapping_with_limit, new_discriminator, Discriminator,
    ParallelDiscriminator, DEFAULT_MAX_NODE_SIZE};
use crate::Real;

/// Position-predictor knobs exposed to configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PredictorConfig<F: Real> {
    pub q: F,
    pub r: F,
    pub initial_covariance: F,
    /// FIFO depth of the reported-position history.
    pub history_capacity: usize,
    /// Reject per-frame jumps longer than this many SLW diagonals.
    pub max_jump_factor: F,
}

impl<F: Real> Default for PredictorConfig<F> {
    fn default() -> Self {
        PredictorConfig {
            q: F::from_config(0.1),
            r: F::from_config(2.0),
            initial_covariance: F::from_config(10.0),
            history_capacity: 10,
            max_jump_factor: F::from_config(3.0),
        }
    }
}

impl<F: Real> PredictorConfig<F> {
    fn kalman(&self) -> KalmanConfig<F> {
        KalmanConfig {
            q: self.q,
            r: self.r,
            initial_covariance: self.initial_covariance,
        }
    }
}

/// Dual-node-size parallel discriminator settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParallelConfig {
    /// Fraction `P` of the SLW area covered by the central (small-node)
    /// discriminator.
    pub central_fraction: f64,
    pub inner_node_size: usize,
    pub outer_node_size: usize,
}

impl Default for ParallelConfig {
    fn default() -> Self {
        ParallelConfig {
            central_fraction: 0.4,
            inner_node_size: 3,
            outer_node_size: 15,
        }
    }
}

/// Grid layout selection: a preset name or an explicit custom layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LayoutChoice {
    Preset(String),
    Custom(LayoutSpec),
}

impl Default for LayoutChoice {
    fn default() -> Self {
        LayoutChoice::Preset("GP5".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrackerConfig<F: Real> {
    pub layout: LayoutChoice,
    /// Node address width when running a single network.
    pub node_size: usize,
    /// Enables the parallel dual-node-size discriminator.
    pub parallel: Option<ParallelConfig>,
    /// Threshold colorspace; `None` falls back to the layout's hint, then
    /// to YCbCr.
    pub colorspace: Option<ColorSpace>,
    /// Minimum confidence level accepted as a detection, in `[0, 1)`.
    pub c_min: F,
    /// Seed of the input mappings.
    pub seed: u64,
    pub predictor: PredictorConfig<F>,
    /// Overrides the layout's predictor flag when set.
    pub predictor_enabled: Option<bool>,
    /// Ceiling on node address widths.
    pub max_node_size: usize,
}

impl<F: Real> Default for TrackerConfig<F> {
    fn default() -> Self {
        TrackerConfig {
            layout: LayoutChoice::default(),
            node_size: 3,
            parallel: None,
            colorspace: None,
            c_min: F::from_config(0.05),
            seed: 1,
            predictor: PredictorConfig::default(),
            predictor_enabled: None,
            max_node_size: DEFAULT_MAX_NODE_SIZE,
        }
    }
}

impl<F: Real> TrackerConfig<F> {
    pub fn resolve_layout(&self) -> Result<LayoutSpec> {
        let layout = match &self.layout {
            LayoutChoice::Preset(name) => crate::grid::preset(name)?,
            LayoutChoice::Custom(spec) => spec.clone(),
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<()> {
        if self.c_min < F::zero() || self.c_min >= F::one() {
            return Err(Error::Config(format!(
                "minimum confidence {} outside [0, 1)",
                self.c_min
            )));
        }
        let check_node = |n: usize| -> Result<()> {
            if n == 0 || n > self.max_node_size {
                return Err(Error::Config(format!(
                    "node size {n} outside supported range 1..={}",
                    self.max_node_size
                )));
            }
            Ok(())
        };
        check_node(self.node_size)?;
        if let Some(p) = &self.parallel {
            check_node(p.inner_node_size)?;
            check_node(p.outer_node_size)?;
            if !(0.0..=1.0).contains(&p.central_fraction) {
                return Err(Error::Config(format!(
                    "central fraction {} outside [0, 1]",
                    p.central_fraction
                )));
            }
        }
        self.resolve_layout().map(|_| ())
    }
}

/// One trained recognizer evaluated at every grid position.
#[derive(Debug, Clone, PartialEq)]
enum Template {
    Single(Discriminator),
    Parallel(ParallelDiscriminator),
}

impl Template {
    fn train(&mut self, pattern: &BitPattern) -> Result<()> {
        match self {
            Template::Single(d) => d.train(pattern),
            Template::Parallel(p) => p.train(pattern),
        }
    }

    fn respond(&self, pattern: &BitPattern) -> Result<u32> {
        match self {
            Template::Single(d) => d.respond(pattern),
            Template::Parallel(p) => p.respond(pattern),
        }
    }

    fn max_response(&self) -> u32 {
        match self {
            Template::Single(d) => d.node_count() as u32,
            Template::Parallel(p) => p.max_response(),
        }
    }

    fn footprint_bits(&self) -> u64 {
        match self {
            Template::Single(d) => d.memory_footprint_bits(),
            Template::Parallel(p) => p.memory_footprint_bits(),
        }
    }
}

/// Best center of one layer in one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerWinner {
    pub layer: usize,
    pub center: (i32, i32),
    pub response: u32,
}

/// Per-frame tracking output.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackResult<F> {
    pub frame: u64,
    /// SLW-sized box, always inside the frame.
    pub reported: Rect,
    /// Highest response this frame.
    pub r1: u32,
    /// Second highest response (equals `r1` when the maximum is duplicated).
    pub r2: u32,
    /// `(R1 − R2) / R1`; `None` when `R1 = 0`.
    pub confidence: Option<F>,
    /// Set when the frame was rejected (ambiguous or implausible) and the
    /// tracker coasted on the prediction.
    pub low_confidence: bool,
    pub layer_winners: Vec<LayerWinner>,
    /// Wall time spent inside `step`.
    pub elapsed: Duration,
}

/// Post-quantization bit corruption applied to every evaluated region; the
/// effective seed varies per frame and per region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionNoise {
    pub flip_fraction: f64,
    pub seed: u64,
}

struct Eval {
    center: (i32, i32),
    layer: usize,
    order: usize,
    response: u32,
}

/// Tracking state: frozen thresholds, the trained template, grid layout,
/// predictor state and the position history.
#[derive(Debug, Clone, PartialEq)]
pub struct Tracker<F: Real> {
    config: TrackerConfig<F>,
    layout: LayoutSpec,
    colorspace: ColorSpace,
    predictor_enabled: bool,
    thresholds: ThresholdSet<F>,
    template: Template,
    training_pattern: BitPattern,
    uninformative_model: bool,
    slw_w: u32,
    slw_h: u32,
    frame_w: u32,
    frame_h: u32,
    kalman: KalmanFilter<F>,
    history: PositionHistory<F>,
    /// Last accepted target center (initially the SLW center). Anchors the
    /// grid when the predictor is disabled.
    last_position: (i32, i32),
    frame_index: u64,
}

impl<F: Real> Tracker<F> {
    /// Builds the target model from the first frame: border points → bands →
    /// statistics → thresholds → quantized SLW pattern → trained template.
    /// The search anchor and the predictor start at the SLW center.
    pub fn init(frame: &FramePixels, slw: Rect, config: TrackerConfig<F>) -> Result<Self> {
        config.validate()?;
        let layout = config.resolve_layout()?;
        if !frame.contains(slw) {
            return Err(Error::RegionOutsideFrame {
                x: slw.x,
                y: slw.y,
                w: slw.w,
                h: slw.h,
                frame_w: frame.width(),
                frame_h: frame.height(),
            });
        }
        let node_size = config
            .parallel
            .as_ref()
            .map_or(config.node_size, |p| p.inner_node_size.min(p.outer_node_size));
        if (slw.area() as usize) < node_size {
            return Err(Error::Config(format!(
                "selection window area {} smaller than the node size {node_size}",
                slw.area()
            )));
        }
        let colorspace = config
            .colorspace
            .or(layout.quantizer_hint)
            .unwrap_or(ColorSpace::YCbCr);

        let points = prewitt_border_points(frame, slw)?;
        let bands = sample_bands(frame, slw, points)?;
        let thresholds = match colorspace {
            ColorSpace::Rgb => thresholds_rgb(
                &bands.pf_colors(frame),
                &bands.pw_colors(frame),
                &crate::quantize::default_scale_grid::<F>(),
            )?,
            ColorSpace::YCbCr => {
                let stats = channel_stats::<F>(&bands.pf_colors(frame), ColorSpace::YCbCr)?;
                thresholds_ycbcr(&stats, ycbcr_default_scales())?
            }
        };

        let training_pattern = quantize_region(frame, slw, &thresholds)?;
        let ones = training_pattern.count_ones();
        let uninformative_model = ones == 0 || ones == training_pattern.len();

        let mut template = match &config.parallel {
            None => {
                let mapping = make_input_mapping_with_limit(
                    training_pattern.len(),
                    config.node_size,
                    config.seed,
                    config.max_node_size,
                )?;
                Template::Single(new_discriminator(mapping))
            }
            Some(p) => Template::Parallel(ParallelDiscriminator::new(
                slw.w,
                slw.h,
                p.central_fraction,
                p.inner_node_size,
                p.outer_node_size,
                config.seed,
            )?),
        };
        template.train(&training_pattern)?;

        let center = slw.center();
        let center_f = (
            F::from_config(center.0 as f64),
            F::from_config(center.1 as f64),
        );
        let kalman = KalmanFilter::new(center_f, config.predictor.kalman());
        let mut history = PositionHistory::new(config.predictor.history_capacity);
        history.push(0, center_f.0, center_f.1)?;
        let predictor_enabled = config.predictor_enabled.unwrap_or(layout.predictor);

        Ok(Tracker {
            predictor_enabled,
            colorspace,
            layout,
            thresholds,
            template,
            training_pattern,
            uninformative_model,
            slw_w: slw.w,
            slw_h: slw.h,
            frame_w: frame.width(),
            frame_h: frame.height(),
            kalman,
            history,
            last_position: center,
            frame_index: 0,
            config,
        })
    }

    pub fn thresholds(&self) -> &ThresholdSet<F> {
        &self.thresholds
    }

    pub fn training_pattern(&self) -> &BitPattern {
        &self.training_pattern
    }

    /// True when the training pattern quantized all-0 or all-1 — the model
    /// carries no shape information.
    pub fn uninformative_model(&self) -> bool {
        self.uninformative_model
    }

    pub fn layout(&self) -> &LayoutSpec {
        &self.layout
    }

    pub fn colorspace(&self) -> ColorSpace {
        self.colorspace
    }

    pub fn config(&self) -> &TrackerConfig<F> {
        &self.config
    }

    pub fn history(&self) -> &PositionHistory<F> {
        &self.history
    }

    pub fn kalman(&self) -> &KalmanFilter<F> {
        &self.kalman
    }

    pub fn last_position(&self) -> (i32, i32) {
        self.last_position
    }

    pub fn frame_index(&self) -> u64 {
        self.frame_index
    }

    /// Largest possible response of the trained template.
    pub fn max_response(&self) -> u32 {
        self.template.max_response()
    }

    /// Node-table memory of the trained template in bits.
    pub fn footprint_bits(&self) -> u64 {
        self.template.footprint_bits()
    }

    pub fn slw_size(&self) -> (u32, u32) {
        (self.slw_w, self.slw_h)
    }

    /// Tracks one frame. Equivalent to `step_with_noise(frame, None)`.
    pub fn step(&mut self, frame: &FramePixels) -> Result<TrackResult<F>> {
        self.step_with_noise(frame, None)
    }

    /// Tracks one frame, optionally corrupting every quantized region.
    pub fn step_with_noise(
        &mut self,
        frame: &FramePixels,
        noise: Option<&RegionNoise>,
    ) -> Result<TrackResult<F>> {
        let started = Instant::now();
        if (frame.width(), frame.height()) != (self.frame_w, self.frame_h) {
            return Err(Error::Shape {
                expected_w: self.frame_w,
                expected_h: self.frame_h,
                got_w: frame.width(),
                got_h: frame.height(),
            });
        }
        self.frame_index += 1;

        let prediction = if self.predictor_enabled {
            let (px, py) = self.kalman.predict();
            (
                round_coord(px, self.last_position.0),
                round_coord(py, self.last_position.1),
            )
        } else {
            self.last_position
        };

        // pass 1: the coarse layer
        let coarse_set = self.clamped_lattice(&self.layout.layers[0], prediction, 0)?;
        let mut evals = self.evaluate(frame, std::slice::from_ref(&coarse_set), noise, 0)?;

        // pass 2: dense layers anchored at the prediction or at the top
        // coarse responses
        if self.layout.layers.len() > 1 {
            let top_centers = top_response_centers(&evals);
            let mut dense_sets = Vec::new();
            for (layer_id, layer) in self.layout.layers.iter().enumerate().skip(1) {
                let anchor = match layer.anchor {
                    Anchor::PredictedPosition => prediction,
                    Anchor::TopResponse(rank) => top_centers
                        .get(rank as usize - 1)
                        .copied()
                        .unwrap_or(prediction),
                };
                dense_sets.push(self.clamped_lattice(layer, anchor, layer_id)?);
            }
            let dense_evals = self.evaluate(frame, &dense_sets, noise, evals.len())?;
            evals.extend(dense_evals);
        }

        if evals.is_empty() {
            return Err(Error::TrackingLost(
                "no evaluable search regions after clipping".into(),
            ));
        }

        // winner: highest response, then nearest to the prediction, then
        // evaluation order (row-major within layers)
        let mut best = 0usize;
        for i in 1..evals.len() {
            if eval_beats(&evals[i], &evals[best], prediction) {
                best = i;
            }
        }
        let r1 = evals[best].response;
        let winner = evals[best].center;
        // Overlapping dense layers can evaluate the very same region twice;
        // a duplicate of the winner position says nothing about ambiguity,
        // so the runner-up is the best response at any other center.
        let r2 = evals
            .iter()
            .filter(|e| e.center != winner)
            .map(|e| e.response)
            .max()
            .unwrap_or(0);

        let conf = confidence(&[F::from_count(r1 as usize), F::from_count(r2 as usize)])?;
        let plausible = displacement_plausible(
            (
                F::from_config(self.last_position.0 as f64),
                F::from_config(self.last_position.1 as f64),
            ),
            (
                F::from_config(winner.0 as f64),
                F::from_config(winner.1 as f64),
            ),
            F::from_config(
                ((self.slw_w as f64).powi(2) + (self.slw_h as f64).powi(2)).sqrt(),
            ),
            self.config.predictor.max_jump_factor,
        );
        let accepted = match conf {
            Some(c) => c >= self.config.c_min && plausible,
            None => false,
        };

        let reported = if accepted {
            Rect::centered_at(winner.0, winner.1, self.slw_w, self.slw_h)
        } else {
            Rect::centered_at(prediction.0, prediction.1, self.slw_w, self.slw_h)
        }
        .shift_inside_frame(self.frame_w, self.frame_h);

        if accepted {
            let wf = (
                F::from_config(winner.0 as f64),
                F::from_config(winner.1 as f64),
            );
            self.history.push(self.frame_index, wf.0, wf.1)?;
            if self.predictor_enabled {
                self.kalman.update(wf);
            }
            self.last_position = winner;
        }

        let mut layer_winners: Vec<LayerWinner> = Vec::new();
        for e in &evals {
            match layer_winners.iter_mut().find(|w| w.layer == e.layer) {
                None => layer_winners.push(LayerWinner {
                    layer: e.layer,
                    center: e.center,
                    response: e.response,
                }),
                Some(w) if e.response > w.response => {
                    w.center = e.center;
                    w.response = e.response;
                }
                _ => {}
            }
        }

        Ok(TrackResult {
            frame: self.frame_index,
            reported,
            r1,
            r2,
            confidence: conf,
            low_confidence: !accepted,
            layer_winners,
            elapsed: started.elapsed(),
        })
    }

    /// Lattice for `layer` shifted the minimal amount that keeps every
    /// search region inside the frame.
    fn clamped_lattice(
        &self,
        layer: &LayerSpec,
        anchor: (i32, i32),
        layer_id: usize,
    ) -> Result<CenterSet> {
        let (span_x, span_y) = layer.span();
        let hw = (self.slw_w / 2) as i32;
        let hh = (self.slw_h / 2) as i32;
        let cmin_x = hw;
        let cmax_x = (self.frame_w - self.slw_w) as i32 + hw;
        let cmin_y = hh;
        let cmax_y = (self.frame_h - self.slw_h) as i32 + hh;
        if span_x as i32 > cmax_x - cmin_x || span_y as i32 > cmax_y - cmin_y {
            return Err(Error::TrackingLost(format!(
                "layer {layer_id} lattice ({span_x}x{span_y} px plus the search region) \
                 does not fit the {}x{} frame",
                self.frame_w, self.frame_h
            )));
        }
        let x0 = (anchor.0 - (span_x / 2) as i32).clamp(cmin_x, cmax_x - span_x as i32);
        let y0 = (anchor.1 - (span_y / 2) as i32).clamp(cmin_y, cmax_y - span_y as i32);
        let shifted_anchor = (x0 + (span_x / 2) as i32, y0 + (span_y / 2) as i32);
        Ok(instantiate_layer(layer, shifted_anchor, layer_id))
    }

    /// Quantizes the union of the sets' search regions once, then responds
    /// per region, corrupting each extracted pattern when noise is on.
    fn evaluate(
        &self,
        frame: &FramePixels,
        sets: &[CenterSet],
        noise: Option<&RegionNoise>,
        order_start: usize,
    ) -> Result<Vec<Eval>> {
        let mut roi: Option<Rect> = None;
        for set in sets {
            if set.centers.is_empty() {
                continue;
            }
            let r = crate::grid::roi_of(set, (self.slw_w, self.slw_h));
            roi = Some(match roi {
                None => r,
                Some(b) => b.union_bounds(&r),
            });
        }
        let Some(roi) = roi else {
            return Ok(Vec::new());
        };
        let mask = QuantizedMask::build(frame, roi, &self.thresholds)?;
        let frame_noise_seed = noise.map(|n| derive(n.seed, self.frame_index));

        let mut evals = Vec::with_capacity(sets.iter().map(|s| s.centers.len()).sum());
        let mut order = order_start;
        for set in sets {
            for c in &set.centers {
                let region = Rect::centered_at(c.x, c.y, self.slw_w, self.slw_h);
                let mut pattern = mask
                    .extract(region)
                    .expect("search region lies inside its own ROI");
                if let (Some(n), Some(fs)) = (noise, frame_noise_seed) {
                    pattern = crate::quantize::corrupt_bits(
                        &pattern,
                        &CorruptionSpec {
                            flip_fraction: n.flip_fraction,
                            seed: derive(fs, order as u64),
                        },
                    );
                }
                evals.push(Eval {
                    center: (c.x, c.y),
                    layer: c.layer,
                    order,
                    response: self.template.respond(&pattern)?,
                });
                order += 1;
            }
        }
        Ok(evals)
    }
}

fn round_coord<F: Real>(v: F, fallback: i32) -> i32 {
    if v.is_finite() {
        v.round().to_i32().unwrap_or(fallback)
    } else {
        fallback
    }
}

fn dist2(a: (i32, i32), b: (i32, i32)) -> i64 {
    let dx = (a.0 - b.0) as i64;
    let dy = (a.1 - b.1) as i64;
    dx * dx + dy * dy
}

fn eval_beats(candidate: &Eval, incumbent: &Eval, prediction: (i32, i32)) -> bool {
    if candidate.response != incumbent.response {
        return candidate.response > incumbent.response;
    }
    let dc = dist2(candidate.center, prediction);
    let di = dist2(incumbent.center, prediction);
    if dc != di {
        return dc < di;
    }
    candidate.order < incumbent.order
}

/// Centers of the three highest responses, best first (ties by evaluation
/// order).
fn top_response_centers(evals: &[Eval]) -> Vec<(i32, i32)> {
    let mut order: Vec<usize> = (0..evals.len()).collect();
    order.sort_by(|&a, &b| {
        evals[b]
            .response
            .cmp(&evals[a].response)
            .then(evals[a].order.cmp(&evals[b].order))
    });
    order.iter().take(3).map(|&i| evals[i].center).collect()
}

/// Confidence level: `(R1 − R2) / R1` with `R1` the maximum response and
/// `R2` the second highest (duplicates of the maximum count, so a tied
/// maximum gives 0). Undefined when `R1 = 0`.
pub fn confidence<F: Real>(responses: &[F]) -> Result<Option<F>> {
    if responses.len() < 2 {
        return Err(Error::TooFewResponses(responses.len()));
    }
    let mut r1 = F::neg_infinity();
    let mut r2 = F::neg_infinity();
    for &r in responses {
        if r > r1 {
            r2 = r1;
            r1 = r;
        } else if r > r2 {
            r2 = r;
        }
    }
    if r1 <= F::zero() {
        return Ok(None);
    }
    Ok(Some((r1 - r2) / r1))
}

/// Intersection area over union area of two rectangles, in `[0, 1]`.
pub fn iou<F: Real>(a: Rect, b: Rect) -> F {
    let inter = a.intersect(&b).map_or(0, |r| r.area());
    let union = a.area() + b.area() - inter;
    if union == 0 {
        return F::zero();
    }
    F::from_config(inter as f64) / F::from_config(union as f64)
}

/// The published failure rule: a reported box with IoU < 0.5 against the
/// truth box is a tracking error.
pub fn is_failure(reported: Rect, truth: Rect) -> bool {
    iou::<f64>(reported, truth) < 0.5
}
