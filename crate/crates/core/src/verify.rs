//! Forgery detection: recompute what each block's watermark coefficient
//! should be from the received blue channel, compare with what the received
//! red channel actually carries.
//!
//! A block is flagged when the absolute deviation between the observed and
//! expected coefficient exceeds the tolerance. The only drift a clean image
//! exhibits is quantization noise from rounding the embedded red plane to
//! 8-bit, so the tolerance can sit far below any real tamper signal.
//!
//! # Boundary blocks
//!
//! When image dimensions are not multiples of 8, the padded rim that carried
//! watermark data at embed time is cropped away and cannot be reconstructed
//! exactly at verify time (re-padding replicates the *watermarked* edge, not
//! the original one). Blocks that contain padding samples are therefore
//! reported as `partial` and never flagged: the rim of a non-8-multiple image
//! (under 8 pixels on the right/bottom edges) is outside the verifiable area.
//! Full blocks — the entire image for 8-multiple dimensions — are unaffected.

use serde::Serialize;

use crate::crypto;
use crate::embed::{embed, SubstitutionStrategy};
use crate::error::{Error, Result};
use crate::image_model::{pad_to_block_multiple, split_channels, RgbImage};
use crate::transform::forward_plane;
use crate::BLOCK_SIZE;

/// Tolerances never calibrate below this, guarding degenerate corpora whose
/// clean round-trip happens to be exact.
pub const TOLERANCE_FLOOR: f64 = 0.5;

/// What verification covers: which channel edits are detectable.
pub const CHANNEL_COVERAGE: &str =
    "red and blue channel modifications are detectable; green-only edits are not";

/// Per-block comparison record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockRecord {
    /// Coefficient read from the received red channel.
    pub observed: f64,
    /// Coefficient recomputed from the received blue channel and key.
    pub expected: f64,
    /// `|observed - expected|`.
    pub deviation: f64,
    /// Whether the deviation exceeds the tolerance (always false for partial blocks).
    pub flagged: bool,
    /// Whether the block contains padding samples (see module docs).
    pub partial: bool,
}

/// Grid of per-block verification records for one image.
#[derive(Debug, Clone)]
pub struct TamperMap {
    block_rows: usize,
    block_cols: usize,
    image_rows: usize,
    image_cols: usize,
    tolerance: f64,
    strategy: SubstitutionStrategy,
    blocks: Vec<BlockRecord>,
}

impl TamperMap {
    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    pub fn image_rows(&self) -> usize {
        self.image_rows
    }

    pub fn image_cols(&self) -> usize {
        self.image_cols
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn strategy(&self) -> SubstitutionStrategy {
        self.strategy
    }

    /// Record for the block at zero-based block coordinates.
    pub fn block(&self, block_row: usize, block_col: usize) -> &BlockRecord {
        &self.blocks[block_row * self.block_cols + block_col]
    }

    /// Iterates records as `(block_row, block_col, record)`, zero-based.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BlockRecord)> {
        let cols = self.block_cols;
        self.blocks
            .iter()
            .enumerate()
            .map(move |(i, b)| (i / cols, i % cols, b))
    }

    pub fn total_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn flagged_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.flagged).count()
    }

    pub fn partial_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.partial).count()
    }

    pub fn full_count(&self) -> usize {
        self.total_blocks() - self.partial_count()
    }

    /// Largest deviation among full (non-partial) blocks.
    pub fn max_full_deviation(&self) -> f64 {
        self.blocks
            .iter()
            .filter(|b| !b.partial)
            .map(|b| b.deviation)
            .fold(0.0, f64::max)
    }
}

/// One-based inclusive pixel rectangle covering a flagged block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PixelBox {
    pub row_start: usize,
    pub row_end: usize,
    pub col_start: usize,
    pub col_end: usize,
}

impl PixelBox {
    /// Whether this box intersects another one-based inclusive rectangle.
    pub fn intersects(&self, rows: (usize, usize), cols: (usize, usize)) -> bool {
        self.row_start <= rows.1
            && rows.0 <= self.row_end
            && self.col_start <= cols.1
            && cols.0 <= self.col_end
    }
}

/// A flagged block in report coordinates (one-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlaggedBlock {
    pub block_row: usize,
    pub block_col: usize,
    pub deviation: f64,
    pub pixel_box: PixelBox,
}

/// Aggregate verdict over a tamper map.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub tampered: bool,
    pub flagged_count: usize,
    pub tolerance: f64,
    pub strategy: SubstitutionStrategy,
    /// Flagged blocks with one-based coordinates and their 8x8-aligned pixel
    /// boxes; adjacent boxes are intentionally not merged.
    pub flagged: Vec<FlaggedBlock>,
}

/// Compares expected vs. observed coefficients for every block.
///
/// `tolerance` must be positive (infinity is allowed — useful for reading raw
/// deviations). The image must contain at least one whole block.
pub fn verify(
    image: &RgbImage,
    device_id: &str,
    strategy: SubstitutionStrategy,
    tolerance: f64,
) -> Result<TamperMap> {
    if image.height() < BLOCK_SIZE || image.width() < BLOCK_SIZE {
        return Err(Error::DegenerateImage {
            rows: image.height(),
            cols: image.width(),
        });
    }
    if !(tolerance > 0.0) {
        return Err(Error::InvalidTolerance(tolerance));
    }

    let key = crypto::derive_key(device_id)?;
    let (red, _green, blue) = split_channels(image);
    let padded_red = pad_to_block_multiple(&red);
    let padded_blue = pad_to_block_multiple(&blue);

    let cipher_blue = crypto::encrypt_plane(padded_blue.plane(), &key)?;
    let expected_grid = forward_plane(&cipher_blue)?;
    let observed_grid = forward_plane(padded_red.plane())?;

    let pos = strategy.position();
    let block_rows = observed_grid.block_rows();
    let block_cols = observed_grid.block_cols();
    let mut blocks = Vec::with_capacity(block_rows * block_cols);
    for br in 0..block_rows {
        for bc in 0..block_cols {
            let observed = observed_grid.block_value(br, bc, pos);
            let expected = expected_grid.block_value(br, bc, pos);
            let deviation = (observed - expected).abs();
            let partial = (br + 1) * BLOCK_SIZE > image.height()
                || (bc + 1) * BLOCK_SIZE > image.width();
            blocks.push(BlockRecord {
                observed,
                expected,
                deviation,
                flagged: !partial && deviation > tolerance,
                partial,
            });
        }
    }

    Ok(TamperMap {
        block_rows,
        block_cols,
        image_rows: image.height(),
        image_cols: image.width(),
        tolerance,
        strategy,
        blocks,
    })
}

/// Collapses a tamper map into the reportable verdict.
pub fn summarize(map: &TamperMap) -> Verdict {
    let mut flagged = Vec::new();
    for (br, bc, record) in map.iter() {
        if record.flagged {
            flagged.push(FlaggedBlock {
                block_row: br + 1,
                block_col: bc + 1,
                deviation: record.deviation,
                pixel_box: PixelBox {
                    row_start: br * BLOCK_SIZE + 1,
                    row_end: (br + 1) * BLOCK_SIZE,
                    col_start: bc * BLOCK_SIZE + 1,
                    col_end: (bc + 1) * BLOCK_SIZE,
                },
            });
        }
    }
    Verdict {
        tampered: !flagged.is_empty(),
        flagged_count: flagged.len(),
        tolerance: map.tolerance(),
        strategy: map.strategy(),
        flagged,
    }
}

/// Measures the worst clean round-trip deviation over a corpus and returns
/// `max(2 * worst, 0.5)` — the default tolerance for that strategy.
pub fn calibrate_tolerance(
    corpus: &[RgbImage],
    device_id: &str,
    strategy: SubstitutionStrategy,
) -> Result<f64> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut worst: f64 = 0.0;
    for image in corpus {
        let watermarked = embed(image, device_id, strategy)?;
        let map = verify(&watermarked.image, device_id, strategy, f64::INFINITY)?;
        worst = worst.max(map.max_full_deviation());
    }
    Ok((2.0 * worst).max(TOLERANCE_FLOOR))
}

#[derive(Debug, serde::Deserialize)]
struct GoldenCalibration {
    device_id: String,
    dc: f64,
    fac: f64,
    mac: f64,
    lac: f64,
}

fn golden() -> &'static GoldenCalibration {
    use std::sync::OnceLock;
    static GOLDEN: OnceLock<GoldenCalibration> = OnceLock::new();
    GOLDEN.get_or_init(|| {
        serde_json::from_str(include_str!("../calibration.json"))
            .expect("bundled calibration.json is valid")
    })
}

/// The frozen default tolerance for a strategy, measured once over the
/// bundled corpus (see `calibration.json`) and recomputed by the test suite.
pub fn default_tolerance(strategy: SubstitutionStrategy) -> f64 {
    let g = golden();
    match strategy {
        SubstitutionStrategy::Dc => g.dc,
        SubstitutionStrategy::Fac => g.fac,
        SubstitutionStrategy::Mac => g.mac,
        SubstitutionStrategy::Lac => g.lac,
    }
}

/// Device ID under which the bundled calibration was measured.
pub fn calibration_device_id() -> &'static str {
    &golden().device_id
}
