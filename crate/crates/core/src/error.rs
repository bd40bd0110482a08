use thiserror::Error;

/// Errors produced by the tracking core.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its supported range or a structural rule was
    /// violated at construction time.
    #[error("configuration error: {0}")]
    Config(String),

    /// A bit sequence or sample had the wrong length.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// A pattern or frame had the wrong width × height.
    #[error("shape mismatch: expected {expected_w}x{expected_h}, got {got_w}x{got_h}")]
    Shape {
        expected_w: u32,
        expected_h: u32,
        got_w: u32,
        got_h: u32,
    },

    /// A region must be clipped to the frame before use.
    #[error("region ({x},{y} {w}x{h}) not inside {frame_w}x{frame_h} frame; clip it first")]
    RegionOutsideFrame {
        x: i32,
        y: i32,
        w: u32,
        h: u32,
        frame_w: u32,
        frame_h: u32,
    },

    /// An operation that needs pixels received none.
    #[error("empty pixel sample: {0}")]
    EmptySample(&'static str),

    /// Position history requires strictly increasing frame indices.
    #[error("frame index {got} does not follow {last}")]
    FrameOrdering { last: u64, got: u64 },

    /// Confidence needs a best and a second-best response.
    #[error("need at least two responses, got {0}")]
    TooFewResponses(usize),

    /// No search region could be evaluated this frame.
    #[error("tracking lost: {0}")]
    TrackingLost(String),
}

pub type Result<T> = std::result::Result<T, Error>;
