//! Experiment harness for the parallel WiSARD object tracker.
//!
//! Provides frame ingestion (binary PPM and PNG sequences), a seeded
//! synthetic-scene generator with ground truth, experiment execution with
//! post-quantization bit corruption, robustness sweeps (node sizes, grid
//! presets, parallel fraction) and CSV/JSON reporting. The `pwot` binary
//! exposes all of it as subcommands.

pub mod bench;
pub mod error;
pub mod experiment;
pub mod io;
pub mod report;
pub mod synth;

pub use error::{Error, Result};
