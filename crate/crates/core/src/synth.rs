//! Deterministic synthetic test images.
//!
//! The bundled corpus drives calibration and the acceptance suite, so the
//! generators are tuned for the watermarking pipeline's operating envelope:
//!
//! - red-channel means sit near 90 (well away from the 127.5 a ciphered
//!   block's mean gravitates to, so DC substitution visibly hurts fidelity)
//!   with enough headroom that coefficient substitution rarely clamps;
//! - green, which embedding copies through untouched, carries most of the
//!   contrast so the correlation-style metrics see real structure;
//! - red/blue content is smooth (broad waves, soft-edged blobs) plus a faint
//!   near-Nyquist dither that keeps flat areas from quantizing to repeated
//!   cipher groups;
//! - every image is deterministic: fixed seeds, fixed parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embed::round_clamp;
use crate::image_model::RgbImage;

/// A named corpus entry.
pub struct CorpusImage {
    pub name: &'static str,
    pub image: RgbImage,
}

/// The bundled corpus: six deterministic images, each at most 640x480, one
/// with non-8-multiple dimensions to exercise the padding path.
pub fn corpus() -> Vec<CorpusImage> {
    vec![
        CorpusImage { name: "gradient-640x480", image: gradient(480, 640) },
        CorpusImage { name: "noise-640x480", image: value_noise(480, 640, 11) },
        CorpusImage { name: "phantom-576x448", image: phantom(448, 576, 23) },
        CorpusImage { name: "speckle-512x384", image: speckle(384, 512, 41) },
        CorpusImage { name: "blobs-499x472", image: blobs(472, 499, 57) },
        CorpusImage { name: "bands-448x320", image: bands(320, 448) },
    ]
}

/// A real-valued scalar field sampled at (possibly offset) integer
/// coordinates; each channel reads the field at a different offset so the
/// channels correlate like a photograph's but are nowhere identical.
struct Field {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl Field {
    fn build(rows: usize, cols: usize, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                values.push(f(r as f64, c as f64));
            }
        }
        Self { rows, cols, values }
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }

    /// Reads with reflected indexing so channel offsets stay in range.
    fn at_offset(&self, r: usize, c: usize, dr: usize, dc: usize) -> f64 {
        let reflect = |i: usize, n: usize| {
            let period = 2 * n.max(1);
            let m = i % period;
            if m < n {
                m
            } else {
                period - 1 - m
            }
        };
        self.at(reflect(r + dr, self.rows), reflect(c + dc, self.cols))
    }

    fn into_image(self) -> RgbImage {
        RgbImage::from_fn(self.rows, self.cols, |r, c| {
            let (rf, cf) = (r as f64, c as f64);
            // Fine-grained deterministic texture. On the blue channel this is
            // what keeps flat regions from quantizing to repeated 16-byte
            // cipher groups (identical groups would make forged-key
            // deviations collapse to a handful of values); the frequencies
            // sit near Nyquist so none of the low-frequency coefficients the
            // strategies compare are disturbed.
            let red_dither = 1.7 * (TAU * (0.37 * rf + 0.61 * cf)).sin();
            let green_dither = 2.0 * (TAU * (0.31 * rf + 0.47 * cf)).sin();
            let blue_dither = 2.4 * (TAU * (0.29 * rf + 0.53 * cf)).sin()
                + 1.6 * (TAU * (0.47 * rf - 0.31 * cf)).sin();
            let red = self.at(r, c) + red_dither;
            // Green carries most of the image contrast: it is copied through
            // embedding untouched, so it can swing freely without any risk of
            // clamping watermarked samples.
            let green = 120.0 + 2.0 * (self.at_offset(r, c, 13, 31) - 90.0) + green_dither;
            let blue = 0.88 * self.at_offset(r, c, 37, 11) + 15.0 + blue_dither;
            (round_clamp(red), round_clamp(green), round_clamp(blue))
        })
        .expect("fields are non-empty")
    }
}

const TAU: f64 = std::f64::consts::TAU;

/// Soft radial bumps: centers, spread and amplitude drawn from a seeded RNG.
struct Bumps {
    /// (row, col, 1/(2*sigma^2), amplitude, 3*sigma cutoff squared)
    list: Vec<(f64, f64, f64, f64, f64)>,
}

impl Bumps {
    fn random(
        rng: &mut ChaCha8Rng,
        count: usize,
        rows: usize,
        cols: usize,
        sigma: (f64, f64),
        amp: (f64, f64),
    ) -> Self {
        let mut list = Vec::with_capacity(count);
        for i in 0..count {
            let r = rng.gen_range(0.0..rows as f64);
            let c = rng.gen_range(0.0..cols as f64);
            let s = rng.gen_range(sigma.0..sigma.1);
            let mut a = rng.gen_range(amp.0..amp.1);
            // Alternate signs so the image mean stays near the base level.
            if i % 2 == 1 {
                a = -a * 0.75;
            }
            list.push((r, c, 1.0 / (2.0 * s * s), a, (3.0 * s) * (3.0 * s)));
        }
        Self { list }
    }

    fn eval(&self, r: f64, c: f64) -> f64 {
        let mut sum = 0.0;
        for &(br, bc, inv2s2, amp, cutoff2) in &self.list {
            let d2 = (r - br) * (r - br) + (c - bc) * (c - bc);
            if d2 < cutoff2 {
                sum += amp * (-d2 * inv2s2).exp();
            }
        }
        sum
    }
}

/// Bilinearly interpolated lattice noise; smooth at the scale of `cell`.
struct Lattice {
    cell: f64,
    cols_nodes: usize,
    nodes: Vec<f64>,
}

impl Lattice {
    fn random(rng: &mut ChaCha8Rng, rows: usize, cols: usize, cell: f64, amp: f64) -> Self {
        let rows_nodes = (rows as f64 / cell).ceil() as usize + 2;
        let cols_nodes = (cols as f64 / cell).ceil() as usize + 2;
        let nodes = (0..rows_nodes * cols_nodes)
            .map(|_| rng.gen_range(-amp..amp))
            .collect();
        Self { cell, cols_nodes, nodes }
    }

    fn eval(&self, r: f64, c: f64) -> f64 {
        let gr = r / self.cell;
        let gc = c / self.cell;
        let (ir, ic) = (gr.floor() as usize, gc.floor() as usize);
        let (fr, fc) = (gr.fract(), gc.fract());
        let node = |i: usize, j: usize| self.nodes[i * self.cols_nodes + j];
        let top = node(ir, ic) * (1.0 - fc) + node(ir, ic + 1) * fc;
        let bottom = node(ir + 1, ic) * (1.0 - fc) + node(ir + 1, ic + 1) * fc;
        top * (1.0 - fr) + bottom * fr
    }
}

/// Smooth diagonal illumination with broad waves. No randomness.
pub fn gradient(rows: usize, cols: usize) -> RgbImage {
    Field::build(rows, cols, |r, c| {
        92.0 + 28.0 * (TAU * c / 104.0).sin()
            + 5.0 * (TAU * r / 150.0).sin()
            + 10.0 * (c / cols as f64 - 0.5)
            + 6.0 * (r / rows as f64 - 0.5)
    })
    .into_image()
}

/// Coarse lattice noise over a wavy base.
pub fn value_noise(rows: usize, cols: usize, seed: u64) -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lattice = Lattice::random(&mut rng, rows, cols, 20.0, 12.0);
    Field::build(rows, cols, |r, c| {
        92.0 + lattice.eval(r, c) + 28.0 * (TAU * c / 106.0).sin() + 4.0 * (TAU * r / 110.0).sin()
    })
    .into_image()
}

/// Radiograph-like scene: dark surround, one bright soft-edged oval with
/// internal structure.
pub fn phantom(rows: usize, cols: usize, seed: u64) -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bumps = Bumps::random(&mut rng, 14, rows, cols, (16.0, 30.0), (10.0, 16.0));
    let (cr, cc) = (rows as f64 / 2.0, cols as f64 / 2.0);
    let (ar, ac) = (rows as f64 * 0.34, cols as f64 * 0.36);
    Field::build(rows, cols, |r, c| {
        let e = ((r - cr) / ar).powi(2) + ((c - cc) / ac).powi(2);
        // Soft oval edge: full strength inside, fading over the rim.
        let oval = 18.0 / (1.0 + ((e - 1.0) * 9.0).exp());
        84.0 + 6.0 * (r / rows as f64)
            + oval
            + bumps.eval(r, c)
            + 28.0 * (TAU * c / 108.0).sin()
    })
    .into_image()
}

/// Dense field of small soft granules, like coherent imaging noise.
pub fn speckle(rows: usize, cols: usize, seed: u64) -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grains = Bumps::random(&mut rng, 70, rows, cols, (9.0, 16.0), (10.0, 16.0));
    Field::build(rows, cols, |r, c| {
        92.0 + grains.eval(r, c) + 28.0 * (TAU * c / 100.0).sin() + 4.0 * (TAU * r / 90.0).sin()
    })
    .into_image()
}

/// Large overlapping soft blobs; sized off the 8-pixel grid on purpose.
pub fn blobs(rows: usize, cols: usize, seed: u64) -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bumps = Bumps::random(&mut rng, 26, rows, cols, (18.0, 32.0), (12.0, 20.0));
    Field::build(rows, cols, |r, c| {
        92.0 + bumps.eval(r, c) + 28.0 * (TAU * c / 112.0).sin() + 4.0 * (TAU * r / 170.0).sin()
    })
    .into_image()
}

/// Soft vertical banding — strong low-frequency horizontal content. No
/// randomness.
pub fn bands(rows: usize, cols: usize) -> RgbImage {
    Field::build(rows, cols, |r, c| {
        90.0 + 29.0 * (TAU * c / 96.0).sin()
            + 5.0 * (TAU * r / 64.0).sin()
            + 4.0 * (TAU * (r + c) / 220.0).sin()
    })
    .into_image()
}
