//! Seeded instance families: ground-instance counts scale as universe^t,
//! and identical seeds reproduce identical formulas.
//!
//! Run with: cargo run --example seeded_benchmark

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use eprsat::generator::{generate_segment, InstanceConfig};
use eprsat::{solve_fragment, FragmentClass, SolveOptions};

fn main() {
    let seed = 7;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let options = SolveOptions::default();

    println!("m,t,ground_count,prop_vars,verdict,total_ms");
    for t in 1..=4 {
        let cfg = InstanceConfig::segment(t, 2, &[("P", 1), ("R", 2)], 4);
        let seg = generate_segment(&cfg, &mut rng);
        let fragment = FragmentClass::Sbs(seg);

        let started = Instant::now();
        let run = solve_fragment(&fragment, &options).unwrap();
        let total_ms = started.elapsed().as_secs_f64() * 1e3;

        println!(
            "2,{t},{},{},{},{total_ms:.3}",
            run.ground_count,
            run.prop_var_count,
            run.verdict_str()
        );
    }

    println!("\nSame family again with the same seed:");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 1..=4 {
        let cfg = InstanceConfig::segment(t, 2, &[("P", 1), ("R", 2)], 4);
        let seg = generate_segment(&cfg, &mut rng);
        println!("  t={t}: {}", seg.to_formula());
    }
}
