//! Fragile watermarking for medical images.
//!
//! Every 8x8 block of the red channel carries one DCT coefficient copied from
//! the AES-ciphered blue channel, keyed by the capture-device ID. A receiver
//! that knows the device ID recomputes the expected coefficients from the
//! blue channel it received and compares them against the red channel it
//! received; any mismatch localizes tampering to 8x8 tiles.
//!
//! The crate is organized around the pipeline stages:
//!
//! - [`image_model`]: planes, channel separation, padding to 8-multiples
//! - [`transform`]: orthonormal 8x8 DCT-II and blockwise transforms
//! - [`crypto`]: SHA-1 key derivation and AES-128 codebook encryption
//! - [`embed`]: coefficient substitution and the embedding pipeline
//! - [`verify`]: expected-vs-observed comparison, tamper maps, calibration
//! - [`metrics`]: MSE / MAE / PSNR / UIQI / SSIM / entropy
//! - [`attack`]: region-overwrite attack simulation and the built-in presets
//! - [`io`], [`manifest`], [`report`]: file formats used by the CLI
//! - [`synth`]: deterministic synthetic images (test corpus generation)

pub mod attack;
pub mod crypto;
pub mod embed;
mod error;
pub mod image_model;
pub mod io;
pub mod manifest;
pub mod metrics;
pub mod report;
pub mod synth;
pub mod transform;
pub mod verify;

pub use attack::{apply_attack, AttackMode, AttackSpec, Channel};
pub use embed::{embed, round_clamp, SubstitutionStrategy, WatermarkedImage};
pub use error::{Error, Result};
pub use image_model::{
    merge_channels, pad_to_block_multiple, split_channels, PaddedPlane, Plane, RgbImage,
};
pub use metrics::QualityReport;
pub use verify::{calibrate_tolerance, default_tolerance, summarize, verify, TamperMap, Verdict};

/// Side length of the transform blocks; the whole pipeline is built on 8x8 tiles.
pub const BLOCK_SIZE: usize = 8;
