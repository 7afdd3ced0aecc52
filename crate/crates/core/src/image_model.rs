//! Image container, channel separation/merging and padding to 8-multiples.
//!
//! All pixel data is stored as 8-bit samples at rest; transform math happens
//! in `f64` inside [`crate::transform`]. Padding replicates the last row and
//! column so the added content stays spectrally quiet.

use crate::error::{Error, Result};
use crate::BLOCK_SIZE;

/// One channel of an image: a row-major matrix of 8-bit intensities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plane {
    rows: usize,
    cols: usize,
    samples: Vec<u8>,
}

impl Plane {
    /// Builds a plane from row-major samples. Rejects empty dimensions and
    /// buffers that do not match `rows * cols`.
    pub fn new(rows: usize, cols: usize, samples: Vec<u8>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyPlane { rows, cols });
        }
        if samples.len() != rows * cols {
            return Err(Error::SampleCountMismatch {
                rows,
                cols,
                got: samples.len(),
            });
        }
        Ok(Self { rows, cols, samples })
    }

    /// Builds a plane by evaluating `f(row, col)` over the grid.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyPlane { rows, cols });
        }
        let mut samples = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                samples.push(f(r, c));
            }
        }
        Ok(Self { rows, cols, samples })
    }

    /// Constant-valued plane.
    pub fn filled(rows: usize, cols: usize, value: u8) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Sample at `(row, col)`, zero-based.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        debug_assert!(row < self.rows && col < self.cols);
        self.samples[row * self.cols + col]
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize, value: u8) {
        debug_assert!(row < self.rows && col < self.cols);
        self.samples[row * self.cols + col] = value;
    }

    /// Row-major sample buffer.
    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn same_dimensions(&self, other: &Plane) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    fn dimension_error(&self, other: &Plane) -> Error {
        Error::DimensionMismatch {
            a_rows: self.rows,
            a_cols: self.cols,
            b_rows: other.rows,
            b_cols: other.cols,
        }
    }
}

/// An RGB image as three aligned planes. `height` is the row count, `width`
/// the column count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    red: Plane,
    green: Plane,
    blue: Plane,
}

impl RgbImage {
    pub fn new(red: Plane, green: Plane, blue: Plane) -> Result<Self> {
        if !red.same_dimensions(&green) {
            return Err(red.dimension_error(&green));
        }
        if !red.same_dimensions(&blue) {
            return Err(red.dimension_error(&blue));
        }
        Ok(Self { red, green, blue })
    }

    /// Builds an image by evaluating `f(row, col) -> (r, g, b)`.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> (u8, u8, u8),
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyPlane { rows, cols });
        }
        let mut red = Vec::with_capacity(rows * cols);
        let mut green = Vec::with_capacity(rows * cols);
        let mut blue = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let (pr, pg, pb) = f(r, c);
                red.push(pr);
                green.push(pg);
                blue.push(pb);
            }
        }
        Ok(Self {
            red: Plane::new(rows, cols, red)?,
            green: Plane::new(rows, cols, green)?,
            blue: Plane::new(rows, cols, blue)?,
        })
    }

    pub fn height(&self) -> usize {
        self.red.rows
    }

    pub fn width(&self) -> usize {
        self.red.cols
    }

    pub fn red(&self) -> &Plane {
        &self.red
    }

    pub fn green(&self) -> &Plane {
        &self.green
    }

    pub fn blue(&self) -> &Plane {
        &self.blue
    }

    /// Pixel at `(row, col)`, zero-based, as an `(r, g, b)` triple.
    pub fn pixel(&self, row: usize, col: usize) -> (u8, u8, u8) {
        (
            self.red.get(row, col),
            self.green.get(row, col),
            self.blue.get(row, col),
        )
    }

    /// Total number of samples over all three channels.
    pub fn sample_count(&self) -> usize {
        3 * self.height() * self.width()
    }
}

/// A plane grown to 8-multiple dimensions, remembering its original size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedPlane {
    plane: Plane,
    original_rows: usize,
    original_cols: usize,
}

impl PaddedPlane {
    /// Wraps an already padded plane. `plane` must have 8-multiple dimensions
    /// that cover `original_rows x original_cols` with less than one block of
    /// slack in each direction.
    pub fn from_parts(plane: Plane, original_rows: usize, original_cols: usize) -> Result<Self> {
        if plane.rows % BLOCK_SIZE != 0 || plane.cols % BLOCK_SIZE != 0 {
            return Err(Error::NotBlockMultiple {
                rows: plane.rows,
                cols: plane.cols,
            });
        }
        let row_slack = plane.rows.checked_sub(original_rows);
        let col_slack = plane.cols.checked_sub(original_cols);
        match (row_slack, col_slack) {
            (Some(rs), Some(cs)) if rs < BLOCK_SIZE && cs < BLOCK_SIZE => Ok(Self {
                plane,
                original_rows,
                original_cols,
            }),
            _ => Err(Error::DimensionMismatch {
                a_rows: plane.rows,
                a_cols: plane.cols,
                b_rows: original_rows,
                b_cols: original_cols,
            }),
        }
    }

    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    pub fn original_rows(&self) -> usize {
        self.original_rows
    }

    pub fn original_cols(&self) -> usize {
        self.original_cols
    }

    /// True when padding added any rows or columns.
    pub fn is_padded(&self) -> bool {
        self.plane.rows != self.original_rows || self.plane.cols != self.original_cols
    }
}

/// Rounds a dimension up to the next multiple of 8; exact multiples are kept.
pub(crate) fn padded_extent(n: usize) -> usize {
    if n % BLOCK_SIZE == 0 {
        n
    } else {
        n + (BLOCK_SIZE - n % BLOCK_SIZE)
    }
}

/// Separates an image into its red, green and blue planes.
pub fn split_channels(image: &RgbImage) -> (Plane, Plane, Plane) {
    (image.red.clone(), image.green.clone(), image.blue.clone())
}

/// Recombines three equally sized planes into an image.
pub fn merge_channels(red: Plane, green: Plane, blue: Plane) -> Result<RgbImage> {
    RgbImage::new(red, green, blue)
}

/// Grows a plane to 8-multiple dimensions by replicating the last row and
/// column. Returns the plane unchanged (zero slack) when both dimensions are
/// already multiples of 8.
pub fn pad_to_block_multiple(plane: &Plane) -> PaddedPlane {
    let rows = padded_extent(plane.rows);
    let cols = padded_extent(plane.cols);
    if rows == plane.rows && cols == plane.cols {
        return PaddedPlane {
            plane: plane.clone(),
            original_rows: plane.rows,
            original_cols: plane.cols,
        };
    }
    let mut samples = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let src_r = r.min(plane.rows - 1);
        for c in 0..cols {
            let src_c = c.min(plane.cols - 1);
            samples.push(plane.get(src_r, src_c));
        }
    }
    PaddedPlane {
        plane: Plane { rows, cols, samples },
        original_rows: plane.rows,
        original_cols: plane.cols,
    }
}

/// Extracts the original top-left region of a padded plane.
pub fn crop_to_original(padded: &PaddedPlane) -> Plane {
    if !padded.is_padded() {
        return padded.plane.clone();
    }
    let rows = padded.original_rows;
    let cols = padded.original_cols;
    let mut samples = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let start = r * padded.plane.cols;
        samples.extend_from_slice(&padded.plane.samples[start..start + cols]);
    }
    Plane { rows, cols, samples }
}
