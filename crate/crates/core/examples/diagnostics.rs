//! Prints the measured operating envelope of the bundled corpus: clean
//! round-trip deviations per strategy (the inputs to `calibration.json`),
//! fidelity metrics and margins, and wrong-key detection rates.
//!
//! Run with `cargo run --release --example diagnostics`.

use std::time::Instant;

use oicmark::{
    embed, metrics, summarize, synth, verify, QualityReport, SubstitutionStrategy,
};

const CAL_ID: &str = "OIC-CAL-0001";
const WRONG_ID: &str = "OIC-CAL-9999";

fn main() {
    let t0 = Instant::now();
    let corpus = synth::corpus();

    println!("== corpus levels ==");
    for entry in &corpus {
        let img = &entry.image;
        let red = img.red().samples();
        let n = red.len() as f64;
        let mean = red.iter().map(|&v| v as f64).sum::<f64>() / n;
        let min = *red.iter().min().unwrap();
        let max = *red.iter().max().unwrap();
        let luma = metrics::luma(img);
        let lmean = luma.samples().iter().map(|&v| v as f64).sum::<f64>() / n;
        let lstd = (luma
            .samples()
            .iter()
            .map(|&v| (v as f64 - lmean).powi(2))
            .sum::<f64>()
            / n)
            .sqrt();
        println!(
            "{:<18} red mean {:7.2} range [{:3},{:3}]  luma std {:6.2}  entropy {:.3}",
            entry.name,
            mean,
            min,
            max,
            lstd,
            metrics::entropy(img)
        );
    }

    println!("\n== clean max full-block deviation (tolerance inputs) ==");
    let mut worst = [0.0f64; 4];
    for entry in &corpus {
        print!("{:<18}", entry.name);
        for (i, s) in SubstitutionStrategy::ALL.into_iter().enumerate() {
            let wm = embed(&entry.image, CAL_ID, s).unwrap();
            let map = verify(&wm.image, CAL_ID, s, f64::INFINITY).unwrap();
            let d = map.max_full_deviation();
            worst[i] = worst[i].max(d);
            print!("  {s}: {d:8.4}");
        }
        println!();
    }
    print!("{:<18}", "=> calibration");
    for (i, s) in SubstitutionStrategy::ALL.into_iter().enumerate() {
        print!("  {s}: {:8.4}", (2.0 * worst[i]).max(0.5));
    }
    println!();

    println!("\n== fidelity per strategy ==");
    for entry in &corpus {
        let mut q = Vec::new();
        for s in SubstitutionStrategy::ALL {
            let wm = embed(&entry.image, CAL_ID, s).unwrap();
            q.push(QualityReport::compute(&entry.image, &wm.image).unwrap());
        }
        let [dc, fac, mac, lac] = [q[0], q[1], q[2], q[3]];
        println!(
            "{:<18} mse dc {:9.3} fac {:7.3} mac {:7.3} lac {:7.3} | fac-mac {:+7.3} | psnr mac-dc {:+6.2} dB | ssim(mac) {:.4} uiqi(mac) {:.5}",
            entry.name,
            dc.mse,
            fac.mse,
            mac.mse,
            lac.mse,
            fac.mse - mac.mse,
            mac.psnr - dc.psnr,
            mac.ssim,
            mac.uiqi
        );
        assert!(lac.mse > 0.0);
    }

    println!("\n== wrong-key flag fraction (default-ish tolerances) ==");
    for entry in &corpus {
        print!("{:<18}", entry.name);
        for (s, tol) in [
            (SubstitutionStrategy::Mac, 2.0 * worst[2].max(0.25)),
            (SubstitutionStrategy::Dc, 2.0 * worst[0].max(0.25)),
        ] {
            let wm = embed(&entry.image, CAL_ID, s).unwrap();
            let map = verify(&wm.image, WRONG_ID, s, tol).unwrap();
            let verdict = summarize(&map);
            print!(
                "  {s}@{tol:.2}: {:5}/{:5} ({:.2}%)",
                verdict.flagged_count,
                map.full_count(),
                100.0 * verdict.flagged_count as f64 / map.full_count() as f64
            );
        }
        println!();
    }

    println!("\ntotal wall time: {:.2?}", t0.elapsed());
}
