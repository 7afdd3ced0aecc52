use thiserror::Error;

/// Errors produced by the watermarking pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A plane or image was constructed with zero rows or columns.
    #[error("plane must be non-empty, got {rows}x{cols}")]
    EmptyPlane { rows: usize, cols: usize },

    /// Sample buffer length does not match the declared dimensions.
    #[error("sample count {got} does not match {rows}x{cols}")]
    SampleCountMismatch { rows: usize, cols: usize, got: usize },

    /// Two planes that must be aligned have different dimensions.
    #[error("dimension mismatch: {a_rows}x{a_cols} vs {b_rows}x{b_cols}")]
    DimensionMismatch {
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },

    /// Blockwise transform input is not a multiple of the block size.
    #[error("plane dimensions {rows}x{cols} are not multiples of 8")]
    NotBlockMultiple { rows: usize, cols: usize },

    /// The device ID used for key derivation was empty.
    #[error("device ID must be a non-empty string")]
    EmptyDeviceId,

    /// Verification needs at least one complete 8x8 block.
    #[error("image {rows}x{cols} is too small to verify (needs at least 8x8)")]
    DegenerateImage { rows: usize, cols: usize },

    /// Tolerance calibration was asked to run over zero images.
    #[error("calibration corpus is empty")]
    EmptyCorpus,

    /// An attack region falls outside the target image.
    #[error("attack region rows {r1}..={r2}, cols {c1}..={c2} out of bounds for {rows}x{cols} image")]
    RegionOutOfBounds {
        r1: usize,
        r2: usize,
        c1: usize,
        c2: usize,
        rows: usize,
        cols: usize,
    },

    /// An attack specification is internally inconsistent.
    #[error("invalid attack spec: {0}")]
    InvalidAttackSpec(String),

    /// An unrecognized substitution-strategy name.
    #[error("unknown strategy {0:?} (expected dc, fac, mac or lac)")]
    InvalidStrategy(String),

    /// Verification tolerance must be positive.
    #[error("tolerance must be a positive number, got {0}")]
    InvalidTolerance(f64),

    /// Output format not usable for watermarked images.
    #[error("unsupported output format: {0}")]
    UnsupportedFormat(String),

    /// UIQI is undefined when either image has zero luma variance.
    #[error("metric undefined: {0} has zero luma variance")]
    ZeroVariance(&'static str),

    /// A manifest file could not be parsed.
    #[error("invalid manifest: {0}")]
    InvalidManifest(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("image codec error: {0}")]
    Image(#[from] image::ImageError),
}

pub type Result<T> = std::result::Result<T, Error>;
