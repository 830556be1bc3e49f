//! The two readings of the existential prefix, demonstrated on the formula
//! where they part ways.
//!
//! `exists x . P(x) & ~P(a)` is satisfiable: take a two-element domain and
//! let P hold only of the element `a` does not denote. A witness drawn from
//! the formula's own constants can never show this — the only candidate is
//! `a` itself, and `P(a) & ~P(a)` is contradictory. Fresh witness constants
//! repair completeness.
//!
//! Run with: cargo run --example witness_policies

use eprsat::grounding::WitnessPolicy;
use eprsat::{solve_text, SolveOptions};

fn main() {
    let text = "exists x . P(x) & ~P(a)";
    println!("{text}\n");

    for policy in [WitnessPolicy::PaperLiteral, WitnessPolicy::Skolem] {
        let options = SolveOptions {
            policy,
            oracle_check: true,
            ..SolveOptions::default()
        };
        let run = solve_text(text, &options).unwrap();
        let oracle = run.oracle.as_ref().unwrap();
        println!(
            "policy={:<14} verdict={:<6} oracle={} (bound {}) {}",
            policy.to_string(),
            run.verdict_str(),
            if oracle.sat { "SAT" } else { "UNSAT" },
            oracle.bound,
            if oracle.agrees { "agree" } else { "DIVERGE" }
        );
    }

    println!(
        "\nThe paper-literal policy under-approximates: its SAT answers are\n\
         always right, its UNSAT answers are not trustworthy on sentences\n\
         whose only models avoid the named constants."
    );
}
