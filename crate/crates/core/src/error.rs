use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid image dimensions {width}x{height} for {len} pixels")]
    InvalidDimensions {
        width: usize,
        height: usize,
        len: usize,
    },
    #[error("image dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("empty histogram range [{0}, {1}]")]
    EmptyHistogramRange(u8, u8),
    #[error("invalid intensity range [{0}, {1}]")]
    InvalidRange(u8, u8),
    #[error("grid exceeds image dimensions: {rows}x{cols} grid on {width}x{height} image")]
    GridExceedsImage {
        rows: usize,
        cols: usize,
        width: usize,
        height: usize,
    },
    #[error("malformed tile grid: {0}")]
    MalformedTileGrid(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("undefined correlation: zero variance")]
    UndefinedCorrelation,
    #[error("undefined SNR: zero signal and zero noise")]
    UndefinedSnr,
    #[error("image smaller than {window}x{window} UIQ window")]
    WindowTooLarge { window: usize },
    #[error("UIQ undefined: every window is degenerate")]
    UndefinedUiq,
}
