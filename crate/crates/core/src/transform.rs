//! Orthonormal 8x8 DCT-II over block-aligned planes.
//!
//! The basis matrix is `C[k][n] = a_k * cos((2n + 1) * k * pi / 16)` with
//! `a_0 = sqrt(1/8)` and `a_k = 1/2` for `k >= 1`, so `C * C^T = I` and the
//! inverse transform is the exact transpose pair. Orthonormality is what lets
//! a verifier recompute coefficients bit-for-bit: forward-then-inverse is
//! lossless up to f64 rounding, and per-sample energy is preserved.
//!
//! All loops run in a fixed order so results are reproducible across targets.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::image_model::Plane;
use crate::BLOCK_SIZE;

/// One 8x8 tile of real values, row-major.
pub type Block = [[f64; BLOCK_SIZE]; BLOCK_SIZE];

fn basis() -> &'static Block {
    static BASIS: OnceLock<Block> = OnceLock::new();
    BASIS.get_or_init(|| {
        let n = BLOCK_SIZE as f64;
        let mut c = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
        for (k, row) in c.iter_mut().enumerate() {
            let alpha = if k == 0 {
                (1.0 / n).sqrt()
            } else {
                (2.0 / n).sqrt()
            };
            for (t, entry) in row.iter_mut().enumerate() {
                let angle = (2 * t + 1) as f64 * k as f64 * std::f64::consts::PI / (2.0 * n);
                *entry = alpha * angle.cos();
            }
        }
        c
    })
}

/// Forward transform of one tile: `Y = C * X * C^T`.
pub fn dct2_block(x: &Block) -> Block {
    let c = basis();
    let mut t = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
    for k in 0..BLOCK_SIZE {
        for j in 0..BLOCK_SIZE {
            let mut acc = 0.0;
            for n in 0..BLOCK_SIZE {
                acc += c[k][n] * x[n][j];
            }
            t[k][j] = acc;
        }
    }
    let mut y = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
    for k in 0..BLOCK_SIZE {
        for l in 0..BLOCK_SIZE {
            let mut acc = 0.0;
            for j in 0..BLOCK_SIZE {
                acc += t[k][j] * c[l][j];
            }
            y[k][l] = acc;
        }
    }
    y
}

/// Inverse transform of one tile: `X = C^T * Y * C`.
pub fn idct2_block(y: &Block) -> Block {
    let c = basis();
    let mut t = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
    for n in 0..BLOCK_SIZE {
        for l in 0..BLOCK_SIZE {
            let mut acc = 0.0;
            for k in 0..BLOCK_SIZE {
                acc += c[k][n] * y[k][l];
            }
            t[n][l] = acc;
        }
    }
    let mut x = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
    for n in 0..BLOCK_SIZE {
        for m in 0..BLOCK_SIZE {
            let mut acc = 0.0;
            for l in 0..BLOCK_SIZE {
                acc += t[n][l] * c[l][m];
            }
            x[n][m] = acc;
        }
    }
    x
}

/// A real-valued matrix with 8-multiple dimensions and block accessors.
///
/// Used for both domains: DCT coefficients after [`forward_plane`] and
/// spatial samples after [`inverse_plane`] (before quantization back to u8).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientGrid {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl CoefficientGrid {
    fn zeroed(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyPlane { rows, cols });
        }
        if rows % BLOCK_SIZE != 0 || cols % BLOCK_SIZE != 0 {
            return Err(Error::NotBlockMultiple { rows, cols });
        }
        Ok(Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of block rows (`rows / 8`).
    pub fn block_rows(&self) -> usize {
        self.rows / BLOCK_SIZE
    }

    /// Number of block columns (`cols / 8`).
    pub fn block_cols(&self) -> usize {
        self.cols / BLOCK_SIZE
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[row * self.cols + col] = value;
    }

    /// Copies out the tile at block coordinates `(block_row, block_col)`,
    /// zero-based.
    pub fn block(&self, block_row: usize, block_col: usize) -> Block {
        let mut out = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
        let r0 = block_row * BLOCK_SIZE;
        let c0 = block_col * BLOCK_SIZE;
        for (i, row) in out.iter_mut().enumerate() {
            let start = (r0 + i) * self.cols + c0;
            row.copy_from_slice(&self.data[start..start + BLOCK_SIZE]);
        }
        out
    }

    pub fn set_block(&mut self, block_row: usize, block_col: usize, block: &Block) {
        let r0 = block_row * BLOCK_SIZE;
        let c0 = block_col * BLOCK_SIZE;
        for (i, row) in block.iter().enumerate() {
            let start = (r0 + i) * self.cols + c0;
            self.data[start..start + BLOCK_SIZE].copy_from_slice(row);
        }
    }

    /// Value at in-block position `pos` (zero-based) of the given tile.
    pub fn block_value(&self, block_row: usize, block_col: usize, pos: (usize, usize)) -> f64 {
        self.get(block_row * BLOCK_SIZE + pos.0, block_col * BLOCK_SIZE + pos.1)
    }

    pub fn set_block_value(
        &mut self,
        block_row: usize,
        block_col: usize,
        pos: (usize, usize),
        value: f64,
    ) {
        self.set(
            block_row * BLOCK_SIZE + pos.0,
            block_col * BLOCK_SIZE + pos.1,
            value,
        );
    }
}

/// Transforms every 8x8 tile of a block-aligned plane into DCT coefficients.
pub fn forward_plane(plane: &Plane) -> Result<CoefficientGrid> {
    let mut grid = CoefficientGrid::zeroed(plane.rows(), plane.cols())?;
    transform_tiles(plane.rows(), plane.cols(), |block_row, block_col| {
        let mut x = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
        for (i, row) in x.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = plane.get(block_row * BLOCK_SIZE + i, block_col * BLOCK_SIZE + j) as f64;
            }
        }
        (block_row, block_col, dct2_block(&x))
    })
    .into_iter()
    .for_each(|(br, bc, y)| grid.set_block(br, bc, &y));
    Ok(grid)
}

/// Inverse-transforms every tile back to spatial real values.
pub fn inverse_plane(grid: &CoefficientGrid) -> CoefficientGrid {
    let mut out = CoefficientGrid::zeroed(grid.rows(), grid.cols())
        .expect("grid dimensions are already validated");
    transform_tiles(grid.rows(), grid.cols(), |block_row, block_col| {
        let y = grid.block(block_row, block_col);
        (block_row, block_col, idct2_block(&y))
    })
    .into_iter()
    .for_each(|(br, bc, x)| out.set_block(br, bc, &x));
    out
}

/// Runs `f` over every block coordinate, in parallel, collecting the results.
fn transform_tiles<F>(rows: usize, cols: usize, f: F) -> Vec<(usize, usize, Block)>
where
    F: Fn(usize, usize) -> (usize, usize, Block) + Sync,
{
    use rayon::prelude::*;
    let block_rows = rows / BLOCK_SIZE;
    let block_cols = cols / BLOCK_SIZE;
    (0..block_rows * block_cols)
        .into_par_iter()
        .map(|i| f(i / block_cols, i % block_cols))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Textbook quadruple-sum DCT-II, used as an independent oracle for the
    /// matrix-product implementation.
    fn dct2_direct(x: &Block) -> Block {
        let n = BLOCK_SIZE as f64;
        let mut y = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
        for u in 0..BLOCK_SIZE {
            for v in 0..BLOCK_SIZE {
                let au = if u == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
                let av = if v == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
                let mut acc = 0.0;
                for r in 0..BLOCK_SIZE {
                    for c in 0..BLOCK_SIZE {
                        acc += x[r][c]
                            * ((2 * r + 1) as f64 * u as f64 * std::f64::consts::PI / (2.0 * n))
                                .cos()
                            * ((2 * c + 1) as f64 * v as f64 * std::f64::consts::PI / (2.0 * n))
                                .cos();
                    }
                }
                y[u][v] = au * av * acc;
            }
        }
        y
    }

    fn block_from(values: &[f64]) -> Block {
        let mut b = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
        for (i, v) in values.iter().enumerate() {
            b[i / BLOCK_SIZE][i % BLOCK_SIZE] = *v;
        }
        b
    }

    fn max_abs_diff(a: &Block, b: &Block) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..BLOCK_SIZE {
            for j in 0..BLOCK_SIZE {
                m = m.max((a[i][j] - b[i][j]).abs());
            }
        }
        m
    }

    #[test]
    fn basis_is_orthonormal() {
        let c = basis();
        for i in 0..BLOCK_SIZE {
            for j in 0..BLOCK_SIZE {
                let dot: f64 = (0..BLOCK_SIZE).map(|t| c[i][t] * c[j][t]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (dot - expected).abs() < 1e-12,
                    "row {i} . row {j} = {dot}"
                );
            }
        }
    }

    #[test]
    fn constant_block_concentrates_in_dc() {
        let x = [[128.0; BLOCK_SIZE]; BLOCK_SIZE];
        let y = dct2_block(&x);
        assert!((y[0][0] - 1024.0).abs() < 1e-9, "dc = {}", y[0][0]);
        for u in 0..BLOCK_SIZE {
            for v in 0..BLOCK_SIZE {
                if (u, v) != (0, 0) {
                    assert!(y[u][v].abs() < 1e-9, "ac[{u}][{v}] = {}", y[u][v]);
                }
            }
        }
    }

    #[test]
    fn matches_direct_summation_on_ramp() {
        let mut x = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
        for (r, row) in x.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = (r * 16 + c * 3) as f64;
            }
        }
        assert!(max_abs_diff(&dct2_block(&x), &dct2_direct(&x)) < 1e-9);
    }

    #[test]
    fn roundtrip_is_exact_to_fp_noise() {
        let mut x = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
        for (r, row) in x.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = ((r * 37 + c * 113) % 256) as f64;
            }
        }
        let back = idct2_block(&dct2_block(&x));
        assert!(max_abs_diff(&x, &back) < 1e-10);
    }

    #[test]
    fn forward_plane_rejects_unaligned_dimensions() {
        let plane = Plane::filled(12, 16, 0).unwrap();
        assert!(matches!(
            forward_plane(&plane),
            Err(Error::NotBlockMultiple { rows: 12, cols: 16 })
        ));
    }

    #[test]
    fn plane_roundtrip_recovers_samples() {
        let plane = Plane::from_fn(24, 40, |r, c| ((r * 201 + c * 57) % 256) as u8).unwrap();
        let spatial = inverse_plane(&forward_plane(&plane).unwrap());
        for r in 0..plane.rows() {
            for c in 0..plane.cols() {
                let diff = (spatial.get(r, c) - plane.get(r, c) as f64).abs();
                assert!(diff < 1e-9, "({r},{c}) drifted by {diff}");
            }
        }
    }

    #[test]
    fn block_value_addresses_within_tile() {
        let plane = Plane::from_fn(16, 16, |r, c| if r < 8 && c >= 8 { 200 } else { 0 }).unwrap();
        let grid = forward_plane(&plane).unwrap();
        // Tile (0,1) is constant 200 -> its DC is 8 * 200 = 1600.
        assert!((grid.block_value(0, 1, (0, 0)) - 1600.0).abs() < 1e-9);
        assert!(grid.block_value(1, 1, (0, 0)).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn preserves_energy(values in proptest::collection::vec(0u8..=255, 64)) {
            let x = block_from(&values.iter().map(|&v| v as f64).collect::<Vec<_>>());
            let y = dct2_block(&x);
            let ex: f64 = x.iter().flatten().map(|v| v * v).sum();
            let ey: f64 = y.iter().flatten().map(|v| v * v).sum();
            prop_assert!((ex - ey).abs() <= 1e-6 * ex.max(1.0));
        }

        #[test]
        fn agrees_with_direct_summation(values in proptest::collection::vec(0u8..=255, 64)) {
            let x = block_from(&values.iter().map(|&v| v as f64).collect::<Vec<_>>());
            prop_assert!(max_abs_diff(&dct2_block(&x), &dct2_direct(&x)) < 1e-9);
        }

        #[test]
        fn inverse_undoes_forward(values in proptest::collection::vec(0u8..=255, 64)) {
            let x = block_from(&values.iter().map(|&v| v as f64).collect::<Vec<_>>());
            prop_assert!(max_abs_diff(&x, &idct2_block(&dct2_block(&x))) < 1e-10);
        }
    }
}
