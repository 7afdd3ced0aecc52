//! Image file I/O: PNG/BMP/JPEG decoding, PNG encoding.
//!
//! Inputs may be lossy (a JPEG is decoded to raw RGB and treated as the
//! ground truth from then on), but outputs are always PNG: verification
//! depends on bit-stable pixels, which a lossy encoder would destroy.

use std::path::Path;

use crate::error::{Error, Result};
use crate::image_model::{Plane, RgbImage};

/// Decodes an image file (PNG, BMP or JPEG) into RGB planes.
pub fn load_image(path: &Path) -> Result<RgbImage> {
    let bytes = std::fs::read(path)?;
    load_image_from_bytes(&bytes)
}

/// Decodes an in-memory image (format sniffed from the bytes).
pub fn load_image_from_bytes(bytes: &[u8]) -> Result<RgbImage> {
    let decoded = image::load_from_memory(bytes)?;
    let rgb = decoded.to_rgb8();
    let (width, height) = rgb.dimensions();
    if width == 0 || height == 0 {
        return Err(Error::EmptyPlane {
            rows: height as usize,
            cols: width as usize,
        });
    }
    let (rows, cols) = (height as usize, width as usize);
    let buf = rgb.as_raw();
    let mut red = Vec::with_capacity(rows * cols);
    let mut green = Vec::with_capacity(rows * cols);
    let mut blue = Vec::with_capacity(rows * cols);
    for px in buf.chunks_exact(3) {
        red.push(px[0]);
        green.push(px[1]);
        blue.push(px[2]);
    }
    RgbImage::new(
        Plane::new(rows, cols, red)?,
        Plane::new(rows, cols, green)?,
        Plane::new(rows, cols, blue)?,
    )
}

/// Encodes an image losslessly. The path must end in `.png`.
pub fn save_image(image: &RgbImage, path: &Path) -> Result<()> {
    let ext = path
        .extension()
        .and_then(std::ffi::OsStr::to_str)
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    if ext != "png" {
        return Err(Error::UnsupportedFormat(format!(
            "{} (outputs are written as PNG so pixels stay bit-stable)",
            path.display()
        )));
    }
    to_buffer(image).save_with_format(path, image::ImageFormat::Png)?;
    Ok(())
}

/// Encodes to PNG bytes in memory (used by tests and fuzz seeds).
pub fn encode_png(image: &RgbImage) -> Result<Vec<u8>> {
    let mut out = std::io::Cursor::new(Vec::new());
    to_buffer(image).write_to(&mut out, image::ImageFormat::Png)?;
    Ok(out.into_inner())
}

fn to_buffer(image: &RgbImage) -> image::RgbImage {
    let (rows, cols) = (image.height(), image.width());
    let mut buf = Vec::with_capacity(rows * cols * 3);
    for r in 0..rows {
        for c in 0..cols {
            let (red, green, blue) = image.pixel(r, c);
            buf.extend_from_slice(&[red, green, blue]);
        }
    }
    image::RgbImage::from_raw(cols as u32, rows as u32, buf)
        .expect("buffer length matches dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn sample() -> RgbImage {
        RgbImage::from_fn(13, 21, |r, c| ((r * 17 + c) as u8, (r + c * 5) as u8, (r * c) as u8))
            .unwrap()
    }

    #[test]
    fn png_roundtrip_is_lossless() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("img.png");
        let img = sample();
        save_image(&img, &path).unwrap();
        assert_eq!(load_image(&path).unwrap(), img);
    }

    #[test]
    fn in_memory_roundtrip() {
        let img = sample();
        let bytes = encode_png(&img).unwrap();
        assert_eq!(load_image_from_bytes(&bytes).unwrap(), img);
    }

    #[test]
    fn lossy_or_unknown_output_extensions_are_rejected() {
        let dir = tempdir().unwrap();
        let img = sample();
        for name in ["img.jpg", "img.jpeg", "img.tiff", "img"] {
            assert!(matches!(
                save_image(&img, &dir.path().join(name)),
                Err(Error::UnsupportedFormat(_))
            ));
        }
    }

    #[test]
    fn garbage_bytes_error_rather_than_panic() {
        assert!(load_image_from_bytes(b"not an image").is_err());
        assert!(load_image_from_bytes(&[]).is_err());
        // A PNG signature with a truncated body must also fail cleanly.
        assert!(load_image_from_bytes(&[0x89, b'P', b'N', b'G', 0x0d, 0x0a, 0x1a, 0x0a]).is_err());
    }

    #[test]
    fn missing_file_is_an_io_error() {
        assert!(matches!(
            load_image(Path::new("/nonexistent/zzz.png")),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn bmp_input_is_accepted() {
        let img = sample();
        let mut out = std::io::Cursor::new(Vec::new());
        to_buffer(&img).write_to(&mut out, image::ImageFormat::Bmp).unwrap();
        assert_eq!(load_image_from_bytes(&out.into_inner()).unwrap(), img);
    }
}
