use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no frames found in {0}")]
    EmptyDirectory(PathBuf),

    #[error("frame dimensions differ: {first} is {first_w}x{first_h}, {second} is {second_w}x{second_h}")]
    MixedDimensions {
        first: String,
        first_w: u32,
        first_h: u32,
        second: String,
        second_w: u32,
        second_h: u32,
    },

    #[error("cannot decode {file}: {reason}")]
    Decode { file: String, reason: String },

    #[error("{file}: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },

    #[error("target leaves the frame at frame {frame}")]
    PathOutOfFrame { frame: usize },

    #[error("invalid configuration: {0}")]
    BadConfig(String),

    #[error(transparent)]
    Core(#[from] pwot_core::Error),
}

impl Error {
    pub(crate) fn io(file: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            file: file.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
