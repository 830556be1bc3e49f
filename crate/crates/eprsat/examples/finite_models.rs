//! Brute-force model search: enumerate finite structures in canonical
//! order, stop at the first model, and cross-check the fragment bound that
//! makes the search complete.
//!
//! Run with: cargo run --example finite_models

use eprsat::{check_text, find_model, parse, BoundVerdict, FragmentClass, ModelSearch};

fn main() {
    // The standard witness formula: satisfiable, but only with a domain
    // element that is not the denotation of `a`.
    let text = "exists x . P(x) & ~P(a)";
    let (formula, symbols) = parse(text).unwrap();

    println!("{text}");
    match find_model(&formula, &symbols, 2, eprsat::DEFAULT_ENUMERATION_GUARD).unwrap() {
        ModelSearch::Sat(model) => {
            println!("first model in canonical order:");
            println!("{}", serde_json::to_string_pretty(&model).unwrap());
        }
        ModelSearch::UnsatUpTo(bound) => println!("no model up to size {bound}"),
    }

    // decide_by_bound caps the search at the fragment's model bound, which
    // turns "no model up to the bound" into a definitive UNSAT.
    println!();
    for text in [
        "forall y . P(y) & ~P(a)",
        "forall y1 y2 . R(y1,y2) -> R(y2,y1)",
    ] {
        let (_, fragment) = check_text(text).unwrap();
        let seg = match fragment {
            FragmentClass::Sbs(seg) => seg,
            other => panic!("expected segment, got {}", other.name()),
        };
        let decision = seg
            .decide_by_bound(eprsat::DEFAULT_ENUMERATION_GUARD)
            .unwrap();
        match decision.verdict {
            BoundVerdict::Sat(model) => println!(
                "{text}\n  SAT at domain size {} (bound {})",
                model.domain_size, decision.bound
            ),
            BoundVerdict::Unsat => {
                println!(
                    "{text}\n  UNSAT (exhausted all models up to {})",
                    decision.bound
                )
            }
        }
    }
}
