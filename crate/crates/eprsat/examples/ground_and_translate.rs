//! Build the Herbrand universe of a universal sentence, enumerate its
//! ground instances, and translate them into propositional formulas with an
//! atom table and a DIMACS rendering.
//!
//! Run with: cargo run --example ground_and_translate

use eprsat::dimacs::emit_dimacs;
use eprsat::{
    check_text, ground, pi_translate, segment_universe, to_cnf, FragmentClass, DEFAULT_INSTANCE_CAP,
};

fn main() {
    let text = "forall y1 y2 . R(y1,y2) | S(a) | S(b)";
    let (_, fragment) = check_text(text).unwrap();
    let seg = match fragment {
        FragmentClass::Sbs(seg) => seg,
        other => panic!("expected a universal segment, got {}", other.name()),
    };

    let universe = segment_universe(&seg);
    println!("sentence: {text}");
    println!(
        "universe: [{}] (auto constant added: {})",
        universe.names().collect::<Vec<_>>().join(", "),
        universe.auto_added_a0()
    );

    let instances = ground(&seg, &universe, DEFAULT_INSTANCE_CAP).unwrap();
    println!(
        "\n{} ground instances ({}^{}):",
        instances.len(),
        universe.len(),
        seg.t()
    );
    print!("{}", instances.to_text());

    let (props, atoms) = pi_translate(&instances);
    println!("\natom table ({} distinct atoms):", atoms.len());
    for (index, atom) in atoms.iter() {
        println!("  p{index} <-> {atom}");
    }

    let cnf = to_cnf(&props);
    println!("\nDIMACS:\n{}", emit_dimacs(&cnf, &atoms));
}
