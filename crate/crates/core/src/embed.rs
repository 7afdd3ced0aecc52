//! Watermark creation: coefficient substitution from the ciphered blue
//! channel into the red channel.
//!
//! Per 8x8 block, exactly one red-channel DCT coefficient is overwritten with
//! the co-located coefficient of the AES-ciphered blue channel; the other 63
//! are kept. The strategy names the position: DC picks the zero-frequency
//! coefficient (visually worst, strongest mean shift), FAC the first AC,
//! MAC a mid-band AC (the default — best fidelity in practice), LAC the
//! highest-frequency AC.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::crypto;
use crate::error::{Error, Result};
use crate::image_model::{
    crop_to_original, merge_channels, pad_to_block_multiple, split_channels, Plane, RgbImage,
};
use crate::transform::{forward_plane, inverse_plane, Block};

/// Which coefficient of each 8x8 block carries the watermark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubstitutionStrategy {
    /// Zero-frequency coefficient, position (1,1) in 1-based terms.
    Dc,
    /// First AC coefficient, position (1,2).
    Fac,
    /// Middle AC coefficient, position (3,6).
    #[default]
    Mac,
    /// Last AC coefficient, position (8,8).
    Lac,
}

impl SubstitutionStrategy {
    pub const ALL: [SubstitutionStrategy; 4] = [
        SubstitutionStrategy::Dc,
        SubstitutionStrategy::Fac,
        SubstitutionStrategy::Mac,
        SubstitutionStrategy::Lac,
    ];

    /// Zero-based in-block coefficient position `(row, col)`.
    pub fn position(self) -> (usize, usize) {
        match self {
            SubstitutionStrategy::Dc => (0, 0),
            SubstitutionStrategy::Fac => (0, 1),
            SubstitutionStrategy::Mac => (2, 5),
            SubstitutionStrategy::Lac => (7, 7),
        }
    }

    /// One-based position as used in reports and documentation.
    pub fn position_one_based(self) -> (usize, usize) {
        let (r, c) = self.position();
        (r + 1, c + 1)
    }

    pub fn name(self) -> &'static str {
        match self {
            SubstitutionStrategy::Dc => "dc",
            SubstitutionStrategy::Fac => "fac",
            SubstitutionStrategy::Mac => "mac",
            SubstitutionStrategy::Lac => "lac",
        }
    }
}

impl fmt::Display for SubstitutionStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SubstitutionStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dc" => Ok(SubstitutionStrategy::Dc),
            "fac" => Ok(SubstitutionStrategy::Fac),
            "mac" => Ok(SubstitutionStrategy::Mac),
            "lac" => Ok(SubstitutionStrategy::Lac),
            other => Err(Error::InvalidStrategy(other.to_string())),
        }
    }
}

/// The embedding result: a full image plus the audit metadata the sidecar
/// manifest records.
#[derive(Debug, Clone)]
pub struct WatermarkedImage {
    pub image: RgbImage,
    pub strategy: SubstitutionStrategy,
    /// Uppercase-hex SHA-1 of the device ID; auditable without revealing the ID.
    pub device_id_digest: String,
}

/// Returns `red_block` with the strategy-position coefficient replaced by the
/// co-located coefficient of `cipher_block`.
pub fn substitute_coefficient(
    red_block: &Block,
    cipher_block: &Block,
    strategy: SubstitutionStrategy,
) -> Block {
    let (r, c) = strategy.position();
    let mut out = *red_block;
    out[r][c] = cipher_block[r][c];
    out
}

/// Quantizes one real sample back to u8: round half away from zero, clamp to
/// `[0, 255]`.
pub fn round_clamp(value: f64) -> u8 {
    value.round().clamp(0.0, 255.0) as u8
}

/// Runs the embedding pipeline: split, pad red and blue, derive the key,
/// cipher the blue plane, transform both, substitute one coefficient per
/// block, inverse-transform, quantize, crop, and merge with the untouched
/// green and blue planes.
pub fn embed(
    image: &RgbImage,
    device_id: &str,
    strategy: SubstitutionStrategy,
) -> Result<WatermarkedImage> {
    let key = crypto::derive_key(device_id)?;
    let digest = crypto::device_digest_hex(device_id)?;

    let (red, green, blue) = split_channels(image);
    let padded_red = pad_to_block_multiple(&red);
    let padded_blue = pad_to_block_multiple(&blue);
    debug_assert!(padded_red.plane().same_dimensions(padded_blue.plane()));

    let cipher_blue = crypto::encrypt_plane(padded_blue.plane(), &key)?;
    let mut red_grid = forward_plane(padded_red.plane())?;
    let cipher_grid = forward_plane(&cipher_blue)?;

    for br in 0..red_grid.block_rows() {
        for bc in 0..red_grid.block_cols() {
            let substituted =
                substitute_coefficient(&red_grid.block(br, bc), &cipher_grid.block(br, bc), strategy);
            red_grid.set_block(br, bc, &substituted);
        }
    }

    let spatial = inverse_plane(&red_grid);
    let quantized = Plane::from_fn(spatial.rows(), spatial.cols(), |r, c| {
        round_clamp(spatial.get(r, c))
    })?;
    let padded_out = crate::image_model::PaddedPlane::from_parts(
        quantized,
        padded_red.original_rows(),
        padded_red.original_cols(),
    )?;
    let watermarked_red = crop_to_original(&padded_out);

    Ok(WatermarkedImage {
        image: merge_channels(watermarked_red, green, blue)?,
        strategy,
        device_id_digest: digest,
    })
}
