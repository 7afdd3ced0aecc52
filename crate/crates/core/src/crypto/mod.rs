//! Key derivation and the deterministic channel cipher.
//!
//! A capture-device ID is hashed with SHA-1 and rendered as uppercase hex;
//! the first sixteen hex characters, taken as ASCII bytes, become the AES-128
//! key. The blue channel is then encrypted in place as a codebook: the
//! row-major sample buffer is split into consecutive 16-byte groups and each
//! group is AES-encrypted independently. No chaining, IV or nonce is involved
//! on purpose — both sides must be able to reproduce the exact same cipher
//! bytes from the image content alone, and tampering must stay localized to
//! the groups it touches.

pub mod aes;
pub mod sha1;

pub use aes::Aes128;
pub use sha1::sha1;

use crate::error::{Error, Result};
use crate::image_model::Plane;
use crate::BLOCK_SIZE;

/// Byte length of both the derived key and one cipher group.
pub const KEY_LEN: usize = 16;

fn hex_upper(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02X}")).collect()
}

/// Uppercase-hex SHA-1 digest of a device ID (40 characters).
pub fn device_digest_hex(device_id: &str) -> Result<String> {
    if device_id.is_empty() {
        return Err(Error::EmptyDeviceId);
    }
    Ok(hex_upper(&sha1(device_id.as_bytes())))
}

/// Derives the AES-128 key from a device ID: the ASCII bytes of the first
/// sixteen uppercase-hex digest characters.
///
/// The key alphabet is therefore `0-9A-F` — 64 bits of digest entropy spread
/// over 16 bytes — which is all the secrecy this scheme asks of it: the key
/// only needs to be reproducible from the device ID and unknown to a forger.
pub fn derive_key(device_id: &str) -> Result<[u8; KEY_LEN]> {
    let digest = device_digest_hex(device_id)?;
    let mut key = [0u8; KEY_LEN];
    key.copy_from_slice(&digest.as_bytes()[..KEY_LEN]);
    Ok(key)
}

/// Encrypts a block-aligned plane's row-major bytes in independent 16-byte
/// groups, producing a cipher plane of the same dimensions.
///
/// Requires 8-multiple dimensions (as produced by padding), which guarantees
/// the buffer length is a multiple of the group size. Groups ignore row
/// boundaries: when the width is an odd multiple of 8, a group spans the end
/// of one row and the start of the next.
pub fn encrypt_plane(plane: &Plane, key: &[u8; KEY_LEN]) -> Result<Plane> {
    if plane.rows() % BLOCK_SIZE != 0 || plane.cols() % BLOCK_SIZE != 0 {
        return Err(Error::NotBlockMultiple {
            rows: plane.rows(),
            cols: plane.cols(),
        });
    }
    let cipher = Aes128::new(key);
    let mut out = Vec::with_capacity(plane.samples().len());
    for group in plane.samples().chunks_exact(KEY_LEN) {
        let mut block = [0u8; KEY_LEN];
        block.copy_from_slice(group);
        out.extend_from_slice(&cipher.encrypt_block(&block));
    }
    Plane::new(plane.rows(), plane.cols(), out)
}

/// Index range (in row-major bytes) of the cipher group containing `index`.
pub fn group_span(index: usize) -> std::ops::Range<usize> {
    let start = index - index % KEY_LEN;
    start..start + KEY_LEN
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_is_ascii_hex_of_digest_prefix() {
        // SHA-1("abc") = a9993e364706816aba3e25717850c26c9cd0d89d.
        assert_eq!(&derive_key("abc").unwrap(), b"A9993E364706816A");
    }

    #[test]
    fn digest_is_full_uppercase_hex() {
        assert_eq!(
            device_digest_hex("abc").unwrap(),
            "A9993E364706816ABA3E25717850C26C9CD0D89D"
        );
    }

    #[test]
    fn empty_device_id_is_rejected() {
        assert!(matches!(derive_key(""), Err(Error::EmptyDeviceId)));
        assert!(matches!(device_digest_hex(""), Err(Error::EmptyDeviceId)));
    }

    #[test]
    fn distinct_ids_give_distinct_keys() {
        assert_ne!(derive_key("scanner-1").unwrap(), derive_key("scanner-2").unwrap());
    }

    #[test]
    fn encrypt_plane_preserves_dimensions_and_determinism() {
        let plane = Plane::from_fn(8, 16, |r, c| (r * 16 + c) as u8).unwrap();
        let key = derive_key("abc").unwrap();
        let a = encrypt_plane(&plane, &key).unwrap();
        let b = encrypt_plane(&plane, &key).unwrap();
        assert_eq!(a.rows(), 8);
        assert_eq!(a.cols(), 16);
        assert_eq!(a, b);
        assert_ne!(a.samples(), plane.samples());
    }

    #[test]
    fn equal_groups_encrypt_equally() {
        // Rows 0 and 1 of an 8x16 plane hold the same two 16-byte groups.
        let plane = Plane::from_fn(8, 16, |r, c| if r < 2 { c as u8 } else { (r * c) as u8 })
            .unwrap();
        let key = derive_key("abc").unwrap();
        let cipher = encrypt_plane(&plane, &key).unwrap();
        assert_eq!(&cipher.samples()[0..16], &cipher.samples()[16..32]);
    }

    #[test]
    fn cipher_matches_block_cipher_directly() {
        let key = [
            0x00, 0x01, 0x02, 0x03, 0x04, 0x05, 0x06, 0x07, 0x08, 0x09, 0x0a, 0x0b, 0x0c, 0x0d,
            0x0e, 0x0f,
        ];
        let mut first = [0u8; 16];
        for (i, b) in first.iter_mut().enumerate() {
            *b = (i as u8) * 0x11;
        }
        let plane = Plane::from_fn(8, 16, |r, c| {
            if r == 0 {
                first[c]
            } else {
                0
            }
        })
        .unwrap();
        let cipher = encrypt_plane(&plane, &key).unwrap();
        assert_eq!(
            &cipher.samples()[..16],
            &Aes128::new(&key).encrypt_block(&first)
        );
    }

    #[test]
    fn unaligned_plane_is_rejected() {
        let plane = Plane::filled(4, 16, 0).unwrap();
        assert!(matches!(
            encrypt_plane(&plane, &[0; 16]),
            Err(Error::NotBlockMultiple { .. })
        ));
    }

    #[test]
    fn group_span_covers_index() {
        assert_eq!(group_span(0), 0..16);
        assert_eq!(group_span(15), 0..16);
        assert_eq!(group_span(16), 16..32);
        assert_eq!(group_span(100), 96..112);
    }
}
