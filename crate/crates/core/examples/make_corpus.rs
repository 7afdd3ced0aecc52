//! Regenerates the checked-in `corpus/` PNGs from the synthetic generators.
//!
//! Run from the repository root: `cargo run --release --example make_corpus`.
//! The images are deterministic, so this only produces changes when the
//! generators themselves change (in which case `calibration.json` must be
//! refreshed too — see the README).

use std::path::Path;

fn main() {
    let dir = Path::new("corpus");
    std::fs::create_dir_all(dir).expect("create corpus dir");
    for entry in oicmark::synth::corpus() {
        let path = dir.join(format!("{}.png", entry.name));
        oicmark::io::save_image(&entry.image, &path).expect("write corpus image");
        println!(
            "wrote {} ({}x{})",
            path.display(),
            entry.image.width(),
            entry.image.height()
        );
    }
}
