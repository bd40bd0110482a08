//! RAM-discriminator object tracking: weightless n-tuple discriminators over
//! threshold-quantized pixels, searched on a grid of regions around a
//! predicted target position.
//!
//! The crate has five pieces:
//!
//! - [`wnn`] — the weightless neural network core: seeded input mappings,
//!   one-bit RAM node tables, and the dual-node-size parallel discriminator.
//! - [`quantize`] — pixel-to-bit conversion: edge-guided band sampling,
//!   per-channel statistics, six-threshold rules in RGB or YCbCr, and a
//!   seeded bit-corruption injector for robustness studies.
//! - [`grid`] — discriminator grid geometry: the GP1–GP11 presets and
//!   multi-layer center lattices.
//! - [`predictor`] — FIFO position history and a constant-velocity Kalman
//!   filter supplying the next-frame search anchor.
//! - [`tracker`] — per-frame orchestration: train every discriminator once on
//!   the first-frame selection window, then report the best-responding
//!   region each frame with a confidence level.
//!
//! Scalar-valued math (statistics, thresholds, filtering, confidence) is
//! generic over [`Real`]; the aliases at the crate root pin `f64`, which is
//! what the harness and CLI use.

pub mod bits;
pub mod error;
pub mod grid;
pub mod predictor;
pub mod quantize;
pub mod rng;
pub mod tracker;
pub mod wnn;

pub use bits::BitPattern;
pub use error::{Error, Result};
pub use grid::{Anchor, CenterSet, LayerSpec, LayoutSpec};
pub use quantize::{ColorSpace, CorruptionSpec, FramePixels, Rect};
pub use rng::SplitMix64;
pub use wnn::{Discriminator, InputMapping, ParallelDiscriminator};

/// Scalar type of all real-valued math in this crate. `f32` and `f64` both
/// satisfy it through the blanket impl.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + std::fmt::Debug
    + std::fmt::Display
    + Default
    + Send
    + Sync
    + 'static
{
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn from_channel(v: u8) -> Self {
        Self::from_u8(v).expect("channel value representable in scalar type")
    }

    fn from_config(v: f64) -> Self {
        Self::from_f64(v).expect("configuration value representable in scalar type")
    }
}

impl<T> Real for T where
    T: num_traits::Float
        + num_traits::FromPrimitive
        + num_traits::ToPrimitive
        + std::fmt::Debug
        + std::fmt::Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Default scalar used by the concrete aliases below and by the CLI.
pub type Scalar = f64;

pub type ChannelStats = quantize::ChannelStats<Scalar>;
pub type ThresholdSet = quantize::ThresholdSet<Scalar>;
pub type KalmanConfig = predictor::KalmanConfig<Scalar>;
pub type KalmanFilter = predictor::KalmanFilter<Scalar>;
pub type PositionHistory = predictor::PositionHistory<Scalar>;
pub type PredictorConfig = tracker::PredictorConfig<Scalar>;
pub type TrackerConfig = tracker::TrackerConfig<Scalar>;
pub type Tracker = tracker::Tracker<Scalar>;
pub type TrackResult = tracker::TrackResult<Scalar>;
