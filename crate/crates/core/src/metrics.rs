//! Fidelity metrics: MSE, MAE, PSNR over all RGB samples; UIQI, SSIM and
//! entropy over the BT.601 luma plane.
//!
//! MSE/MAE/PSNR treat the image as one pool of `3 * m * n` samples. UIQI and
//! SSIM are computed globally (one set of statistics for the whole image, not
//! sliding-window), with population (1/N) variance and covariance. Entropy is
//! Shannon entropy of the 256-bin luma histogram.

use crate::embed::round_clamp;
use crate::error::{Error, Result};
use crate::image_model::{Plane, RgbImage};

/// SSIM stabilizer `(0.01 * 255)^2`.
pub const SSIM_C1: f64 = 6.5025;
/// SSIM stabilizer `(0.03 * 255)^2`.
pub const SSIM_C2: f64 = 58.5225;

/// All metrics for an original/processed pair. `entropy` is the entropy of
/// the processed image (the quantity of interest when judging watermark
/// output); the original's entropy is available via [`entropy`] directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub mse: f64,
    pub mae: f64,
    pub psnr: f64,
    pub uiqi: f64,
    pub ssim: f64,
    pub entropy: f64,
}

impl QualityReport {
    pub fn compute(original: &RgbImage, processed: &RgbImage) -> Result<Self> {
        Ok(Self {
            mse: mse(original, processed)?,
            mae: mae(original, processed)?,
            psnr: psnr(original, processed)?,
            uiqi: uiqi(original, processed)?,
            ssim: ssim(original, processed)?,
            entropy: entropy(processed),
        })
    }
}

fn check_dims(a: &RgbImage, b: &RgbImage) -> Result<()> {
    if a.height() != b.height() || a.width() != b.width() {
        return Err(Error::DimensionMismatch {
            a_rows: a.height(),
            a_cols: a.width(),
            b_rows: b.height(),
            b_cols: b.width(),
        });
    }
    Ok(())
}

fn sample_pairs<'a>(a: &'a RgbImage, b: &'a RgbImage) -> impl Iterator<Item = (f64, f64)> + 'a {
    let planes = [
        (a.red(), b.red()),
        (a.green(), b.green()),
        (a.blue(), b.blue()),
    ];
    planes.into_iter().flat_map(|(pa, pb)| {
        pa.samples()
            .iter()
            .zip(pb.samples())
            .map(|(&x, &y)| (x as f64, y as f64))
    })
}

/// Mean squared error over all `3 * m * n` samples.
pub fn mse(a: &RgbImage, b: &RgbImage) -> Result<f64> {
    check_dims(a, b)?;
    let n = a.sample_count() as f64;
    Ok(sample_pairs(a, b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / n)
}

/// Mean absolute error over all `3 * m * n` samples.
pub fn mae(a: &RgbImage, b: &RgbImage) -> Result<f64> {
    check_dims(a, b)?;
    let n = a.sample_count() as f64;
    Ok(sample_pairs(a, b).map(|(x, y)| (x - y).abs()).sum::<f64>() / n)
}

/// Number of samples (over all three channels) where the two images differ.
pub fn differing_samples(a: &RgbImage, b: &RgbImage) -> Result<usize> {
    check_dims(a, b)?;
    Ok(sample_pairs(a, b).filter(|(x, y)| x != y).count())
}

/// Peak signal-to-noise ratio in dB, `10 * log10(255^2 / mse)`; positive
/// infinity for identical images.
pub fn psnr(a: &RgbImage, b: &RgbImage) -> Result<f64> {
    let m = mse(a, b)?;
    if m == 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(10.0 * (255.0 * 255.0 / m).log10())
    }
}

/// BT.601 luma plane, rounded to 8-bit.
pub fn luma(image: &RgbImage) -> Plane {
    Plane::from_fn(image.height(), image.width(), |r, c| {
        let (red, green, blue) = image.pixel(r, c);
        round_clamp(0.299 * red as f64 + 0.587 * green as f64 + 0.114 * blue as f64)
    })
    .expect("image planes are non-empty")
}

struct Stats {
    mean_a: f64,
    mean_b: f64,
    var_a: f64,
    var_b: f64,
    cov: f64,
}

/// Population (1/N) statistics over two aligned planes.
fn luma_stats(a: &Plane, b: &Plane) -> Stats {
    let n = (a.rows() * a.cols()) as f64;
    let (mut sa, mut sb) = (0.0, 0.0);
    for (&x, &y) in a.samples().iter().zip(b.samples()) {
        sa += x as f64;
        sb += y as f64;
    }
    let mean_a = sa / n;
    let mean_b = sb / n;
    let (mut va, mut vb, mut cov) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.samples().iter().zip(b.samples()) {
        let dx = x as f64 - mean_a;
        let dy = y as f64 - mean_b;
        va += dx * dx;
        vb += dy * dy;
        cov += dx * dy;
    }
    Stats {
        mean_a,
        mean_b,
        var_a: va / n,
        var_b: vb / n,
        cov: cov / n,
    }
}

/// Universal image quality index: the product of correlation, luminance and
/// contrast factors, computed globally on luma. Undefined (error) when either
/// image has zero luma variance.
pub fn uiqi(a: &RgbImage, b: &RgbImage) -> Result<f64> {
    check_dims(a, b)?;
    let s = luma_stats(&luma(a), &luma(b));
    if s.var_a == 0.0 {
        return Err(Error::ZeroVariance("first image"));
    }
    if s.var_b == 0.0 {
        return Err(Error::ZeroVariance("second image"));
    }
    Ok(4.0 * s.cov * s.mean_a * s.mean_b
        / ((s.var_a + s.var_b) * (s.mean_a * s.mean_a + s.mean_b * s.mean_b)))
}

/// Global structural similarity on luma with the standard stabilizers.
pub fn ssim(a: &RgbImage, b: &RgbImage) -> Result<f64> {
    check_dims(a, b)?;
    let s = luma_stats(&luma(a), &luma(b));
    Ok(
        (2.0 * s.mean_a * s.mean_b + SSIM_C1) * (2.0 * s.cov + SSIM_C2)
            / ((s.mean_a * s.mean_a + s.mean_b * s.mean_b + SSIM_C1)
                * (s.var_a + s.var_b + SSIM_C2)),
    )
}

/// Shannon entropy (bits) of the 256-bin luma histogram.
pub fn entropy(image: &RgbImage) -> f64 {
    let plane = luma(image);
    let mut hist = [0u64; 256];
    for &v in plane.samples() {
        hist[v as usize] += 1;
    }
    let n = plane.samples().len() as f64;
    hist.iter()
        .filter(|&&count| count > 0)
        .map(|&count| {
            let p = count as f64 / n;
            -p * p.log2()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn image_from(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> (u8, u8, u8)) -> RgbImage {
        RgbImage::from_fn(rows, cols, f).unwrap()
    }

    fn gradient(rows: usize, cols: usize) -> RgbImage {
        image_from(rows, cols, |r, c| {
            (
                (r * 5 + c) as u8,
                (r + c * 3) as u8,
                (2 * r + 2 * c) as u8,
            )
        })
    }

    #[test]
    fn identical_images_have_perfect_scores() {
        let img = gradient(9, 13);
        assert_eq!(mse(&img, &img).unwrap(), 0.0);
        assert_eq!(mae(&img, &img).unwrap(), 0.0);
        assert_eq!(psnr(&img, &img).unwrap(), f64::INFINITY);
        assert!((ssim(&img, &img).unwrap() - 1.0).abs() < 1e-12);
        assert!((uiqi(&img, &img).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_differences_are_analytic() {
        let a = image_from(4, 4, |_, _| (10, 20, 30));
        let b2 = image_from(4, 4, |_, _| (12, 22, 32));
        assert_eq!(mse(&a, &b2).unwrap(), 4.0);
        let b3 = image_from(4, 4, |_, _| (13, 23, 33));
        assert_eq!(mae(&a, &b3).unwrap(), 3.0);
    }

    #[test]
    fn psnr_reference_points() {
        let black = image_from(2, 2, |_, _| (0, 0, 0));
        let white = image_from(2, 2, |_, _| (255, 255, 255));
        // MSE = 255^2 -> 0 dB.
        assert!(psnr(&black, &white).unwrap().abs() < 1e-12);

        // 3 of 12 samples differ by 51: MSE = 2601 / 4 = 650.25 -> 20 dB.
        let a = image_from(2, 2, |_, _| (0, 0, 0));
        let b = image_from(2, 2, |r, c| if (r, c) == (0, 0) { (51, 51, 51) } else { (0, 0, 0) });
        assert_eq!(mse(&a, &b).unwrap(), 650.25);
        assert!((psnr(&a, &b).unwrap() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn differing_samples_counts_per_channel() {
        let a = gradient(4, 4);
        assert_eq!(differing_samples(&a, &a).unwrap(), 0);
        // One pixel changed in two of its three channels.
        let b = image_from(4, 4, |r, c| {
            let (red, green, blue) = a.pixel(r, c);
            if (r, c) == (2, 1) {
                (red.wrapping_add(1), green, blue.wrapping_add(5))
            } else {
                (red, green, blue)
            }
        });
        assert_eq!(differing_samples(&a, &b).unwrap(), 2);
    }

    #[test]
    fn psnr_decreases_as_mse_grows() {
        let a = image_from(4, 4, |_, _| (100, 100, 100));
        let small = image_from(4, 4, |_, _| (102, 102, 102));
        let large = image_from(4, 4, |_, _| (110, 110, 110));
        assert!(psnr(&a, &small).unwrap() > psnr(&a, &large).unwrap());
    }

    #[test]
    fn luma_uses_bt601_weights() {
        let red = image_from(1, 1, |_, _| (255, 0, 0));
        let green = image_from(1, 1, |_, _| (0, 255, 0));
        let blue = image_from(1, 1, |_, _| (0, 0, 255));
        assert_eq!(luma(&red).samples(), &[76]);
        assert_eq!(luma(&green).samples(), &[150]);
        assert_eq!(luma(&blue).samples(), &[29]);
    }

    #[test]
    fn ssim_of_black_vs_white_matches_formula() {
        let black = image_from(4, 4, |_, _| (0, 0, 0));
        let white = image_from(4, 4, |_, _| (255, 255, 255));
        let expected = SSIM_C1 / (255.0 * 255.0 + SSIM_C1);
        assert!((ssim(&black, &white).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn uiqi_goes_negative_for_inverted_images() {
        let a = gradient(8, 8);
        let inverted = image_from(8, 8, |r, c| {
            let (x, y, z) = a.pixel(r, c);
            (255 - x, 255 - y, 255 - z)
        });
        assert!(uiqi(&a, &inverted).unwrap() < 0.0);
    }

    #[test]
    fn uiqi_requires_nonzero_variance() {
        let flat = image_from(4, 4, |_, _| (50, 50, 50));
        let varied = gradient(4, 4);
        assert!(matches!(
            uiqi(&flat, &varied),
            Err(Error::ZeroVariance("first image"))
        ));
        assert!(matches!(
            uiqi(&varied, &flat),
            Err(Error::ZeroVariance("second image"))
        ));
    }

    #[test]
    fn entropy_reference_points() {
        let flat = image_from(5, 5, |_, _| (7, 7, 7));
        assert_eq!(entropy(&flat), 0.0);

        let two_tone = image_from(2, 2, |r, _| if r == 0 { (0, 0, 0) } else { (255, 255, 255) });
        assert!((entropy(&two_tone) - 1.0).abs() < 1e-12);

        let all_levels = image_from(16, 16, |r, c| {
            let v = (r * 16 + c) as u8;
            (v, v, v)
        });
        assert!((entropy(&all_levels) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = gradient(4, 4);
        let b = gradient(4, 5);
        assert!(mse(&a, &b).is_err());
        assert!(mae(&a, &b).is_err());
        assert!(psnr(&a, &b).is_err());
        assert!(uiqi(&a, &b).is_err());
        assert!(ssim(&a, &b).is_err());
    }

    #[test]
    fn report_bundles_individual_metrics() {
        let a = gradient(8, 8);
        let b = image_from(8, 8, |r, c| {
            let (x, y, z) = a.pixel(r, c);
            (x.wrapping_add(3), y, z)
        });
        let report = QualityReport::compute(&a, &b).unwrap();
        assert_eq!(report.mse, mse(&a, &b).unwrap());
        assert_eq!(report.mae, mae(&a, &b).unwrap());
        assert_eq!(report.psnr, psnr(&a, &b).unwrap());
        assert_eq!(report.uiqi, uiqi(&a, &b).unwrap());
        assert_eq!(report.ssim, ssim(&a, &b).unwrap());
        assert_eq!(report.entropy, entropy(&b));
    }

    fn arb_image_pair() -> impl Strategy<Value = (RgbImage, RgbImage)> {
        (2usize..10, 2usize..10).prop_flat_map(|(rows, cols)| {
            let n = rows * cols * 3;
            (
                Just(rows),
                Just(cols),
                proptest::collection::vec(0u8..=255, n),
                proptest::collection::vec(0u8..=255, n),
            )
                .prop_map(|(rows, cols, va, vb)| {
                    let build = |v: &[u8]| {
                        RgbImage::from_fn(rows, cols, |r, c| {
                            let i = 3 * (r * cols + c);
                            (v[i], v[i + 1], v[i + 2])
                        })
                        .unwrap()
                    };
                    (build(&va), build(&vb))
                })
        })
    }

    proptest! {
        #[test]
        fn symmetry((a, b) in arb_image_pair()) {
            prop_assert_eq!(mse(&a, &b).unwrap(), mse(&b, &a).unwrap());
            prop_assert_eq!(mae(&a, &b).unwrap(), mae(&b, &a).unwrap());
            let s_ab = ssim(&a, &b).unwrap();
            let s_ba = ssim(&b, &a).unwrap();
            prop_assert!((s_ab - s_ba).abs() < 1e-12);
            if let (Ok(q_ab), Ok(q_ba)) = (uiqi(&a, &b), uiqi(&b, &a)) {
                prop_assert!((q_ab - q_ba).abs() < 1e-12);
            }
        }

        #[test]
        fn jensen_and_bounds((a, b) in arb_image_pair()) {
            let m = mae(&a, &b).unwrap();
            prop_assert!(m * m <= mse(&a, &b).unwrap() + 1e-9);
            let s = ssim(&a, &b).unwrap();
            prop_assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&s));
            if let Ok(q) = uiqi(&a, &b) {
                prop_assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&q));
            }
            let e = entropy(&a);
            prop_assert!((0.0..=8.0 + 1e-9).contains(&e));
        }
    }
}
