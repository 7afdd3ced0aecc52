//! Machine-readable reports with stable field names, plus the human-readable
//! sweep table. All numbers in a report come straight from library results;
//! the only transformation here is layout. Non-finite values (a PSNR of
//! positive infinity, an infinite tolerance) serialize as the string `"inf"`
//! because JSON has no infinity literal.

use serde_json::{json, Value};

use crate::attack::AttackSpec;
use crate::embed::SubstitutionStrategy;
use crate::metrics::QualityReport;
use crate::verify::{Verdict, CHANNEL_COVERAGE};

/// JSON value for a metric: a number, or `"inf"` / `"-inf"` when infinite.
fn number(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v == f64::INFINITY {
        json!("inf")
    } else if v == f64::NEG_INFINITY {
        json!("-inf")
    } else {
        json!("nan")
    }
}

fn quality_fields(q: &QualityReport) -> Value {
    json!({
        "mse": number(q.mse),
        "mae": number(q.mae),
        "psnr": number(q.psnr),
        "uiqi": number(q.uiqi),
        "ssim": number(q.ssim),
        "entropy": number(q.entropy),
    })
}

/// Report for a single original/processed comparison.
pub fn metrics_report(original: &str, processed: &str, q: &QualityReport) -> Value {
    let mut v = quality_fields(q);
    v["original"] = json!(original);
    v["processed"] = json!(processed);
    v
}

/// Report for one verification run.
pub fn verify_report(
    image: &str,
    device_id_digest: &str,
    verdict: &Verdict,
    dims: (usize, usize),
    block_counts: (usize, usize, usize),
) -> Value {
    let (rows, cols) = dims;
    let (total, full, partial) = block_counts;
    json!({
        "verdict": if verdict.tampered { "tampered" } else { "clean" },
        "image": image,
        "width": cols,
        "height": rows,
        "strategy": verdict.strategy.name(),
        "tolerance": number(verdict.tolerance),
        "device_id_digest": device_id_digest,
        "blocks": {
            "total": total,
            "full": full,
            "partial": partial,
            "flagged": verdict.flagged_count,
        },
        "coverage": CHANNEL_COVERAGE,
        "flagged": verdict.flagged,
    })
}

/// Report for one attack application.
pub fn attack_report(input: &str, output: &str, spec: &AttackSpec, modified_samples: usize) -> Value {
    json!({
        "input": input,
        "output": output,
        "attack": spec,
        "modified_samples": modified_samples,
    })
}

/// Renders the strategy-sweep comparison as a fixed-width text table:
/// one row per metric, one column per strategy.
pub fn render_sweep(entries: &[(SubstitutionStrategy, QualityReport)]) -> String {
    const METRICS: [(&str, fn(&QualityReport) -> f64); 6] = [
        ("mse", |q| q.mse),
        ("mae", |q| q.mae),
        ("psnr", |q| q.psnr),
        ("uiqi", |q| q.uiqi),
        ("ssim", |q| q.ssim),
        ("entropy", |q| q.entropy),
    ];
    let mut out = String::new();
    out.push_str(&format!("{:<9}", "metric"));
    for (strategy, _) in entries {
        out.push_str(&format!("{:>13}", strategy.name()));
    }
    out.push('\n');
    for (name, get) in METRICS {
        out.push_str(&format!("{:<9}", name));
        for (_, q) in entries {
            out.push_str(&format!("{:>13}", cell(get(q))));
        }
        out.push('\n');
    }
    out
}

/// JSON form of the sweep: strategy name -> quality fields.
pub fn sweep_report(original: &str, entries: &[(SubstitutionStrategy, QualityReport)]) -> Value {
    let mut strategies = serde_json::Map::new();
    for (strategy, q) in entries {
        strategies.insert(strategy.name().to_string(), quality_fields(q));
    }
    json!({ "original": original, "strategies": strategies })
}

fn cell(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6}")
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}
