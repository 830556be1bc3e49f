//! Decide satisfiability of prefix sentences end to end: classify, ground,
//! translate, solve, and print the ground-atom witness for SAT verdicts.
//!
//! Run with: cargo run --example solve_end_to_end

use eprsat::{solve_text, SolveOptions};

fn main() {
    let inputs = [
        "forall y . P(y) | Q(a)",
        "forall y . P(y) & ~P(a)",
        "forall y1 y2 . (R(y1,y2) -> R(y2,y1)) & R(a,b)",
        "exists x . forall y . R(x,y)",
    ];

    let options = SolveOptions::default();
    for text in inputs {
        let run = solve_text(text, &options).unwrap();
        println!(
            "{text}\n  class={} ground_count={} prop_vars={} -> {}",
            run.class,
            run.ground_count,
            run.prop_var_count,
            run.verdict_str()
        );
        if let Some(witness) = &run.witness {
            for (atom, value) in witness {
                println!("    {atom} = {}", if *value { "T" } else { "F" });
            }
        }
        println!();
    }
}
