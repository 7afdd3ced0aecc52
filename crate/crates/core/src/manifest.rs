//! Sidecar manifests describing how an image was watermarked.
//!
//! A manifest never stores the device identifier itself, only its
//! uppercase SHA-1 digest, so the sidecar can travel with the image
//! without leaking the embedding secret.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::crypto::device_digest_hex;
use crate::embed::{SubstitutionStrategy, WatermarkedImage};
use crate::error::{Error, Result};

/// Provenance record written next to every watermarked image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    /// Uppercase hex SHA-1 digest of the device identifier.
    pub device_id_digest: String,
    /// Coefficient substitution strategy used at embed time.
    pub strategy: SubstitutionStrategy,
    /// Version of the tool that produced the image.
    pub tool_version: String,
    /// Image width in pixels.
    pub width: usize,
    /// Image height in pixels.
    pub height: usize,
}

impl Manifest {
    /// Builds a manifest for a freshly watermarked image.
    pub fn for_watermarked(marked: &WatermarkedImage) -> Self {
        Manifest {
            device_id_digest: marked.device_id_digest.clone(),
            strategy: marked.strategy,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            width: marked.image.width(),
            height: marked.image.height(),
        }
    }

    /// Parses and validates a manifest from JSON text.
    pub fn from_json(text: &str) -> Result<Self> {
        let manifest: Manifest =
            serde_json::from_str(text).map_err(|e| Error::InvalidManifest(e.to_string()))?;
        manifest.validate()?;
        Ok(manifest)
    }

    /// Serializes the manifest as pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    /// Reads and validates the manifest at `path`.
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Writes the manifest to `path` as JSON.
    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// True when `device_id` hashes to the digest recorded here.
    pub fn matches_device_id(&self, device_id: &str) -> Result<bool> {
        Ok(device_digest_hex(device_id)? == self.device_id_digest)
    }

    fn validate(&self) -> Result<()> {
        let digest_ok = self.device_id_digest.len() == 40
            && self
                .device_id_digest
                .bytes()
                .all(|b| b.is_ascii_digit() || (b'A'..=b'F').contains(&b));
        if !digest_ok {
            return Err(Error::InvalidManifest(format!(
                "device_id_digest must be 40 uppercase hex characters, got {:?}",
                self.device_id_digest
            )));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidManifest(format!(
                "image dimensions must be positive, got {}x{}",
                self.width, self.height
            )));
        }
        Ok(())
    }
}

/// Path of the manifest that accompanies `image_path`:
/// the full file name plus a `.oic.json` suffix.
pub fn sidecar_path(image_path: &Path) -> PathBuf {
    let mut name = image_path.as_os_str().to_os_string();
    name.push(".oic.json");
    PathBuf::from(name)
}
