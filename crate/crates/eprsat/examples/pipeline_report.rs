//! The file pipeline over plain and padded inputs: both runs must reach the
//! same verdict, and the padded run additionally reports its time
//! normalized by the inflated input length.
//!
//! Run with: cargo run --example pipeline_report

use std::fs;

use eprsat::padding::pad;
use eprsat::{run_pipeline, PipelineOptions, SolveOptions};

fn main() {
    let dir = std::env::temp_dir().join("eprsat-pipeline-example");
    fs::create_dir_all(&dir).unwrap();

    let text = "forall y . P(y) | Q(a)"; // 22 bytes -> 4 MiB padded at k=1
    let plain = dir.join("sentence.fol");
    fs::write(&plain, text).unwrap();

    let blob = pad(text.as_bytes(), 1, 1 << 22).unwrap();
    let padded = dir.join("sentence.fol.padded");
    fs::write(&padded, blob.to_bytes()).unwrap();

    let plain_report = run_pipeline(
        &plain,
        &PipelineOptions {
            solve: SolveOptions {
                oracle_check: true,
                ..SolveOptions::default()
            },
            ..PipelineOptions::default()
        },
    )
    .unwrap();
    println!("plain run:");
    println!("{}\n", serde_json::to_string_pretty(&plain_report).unwrap());

    let padded_report = run_pipeline(
        &padded,
        &PipelineOptions {
            padded: true,
            k: 1,
            ..PipelineOptions::default()
        },
    )
    .unwrap();
    println!("padded run:");
    println!("{}", serde_json::to_string_pretty(&padded_report).unwrap());

    assert_eq!(plain_report.verdict, padded_report.verdict);
    println!("\nverdicts agree: padding is semantically inert");
}
