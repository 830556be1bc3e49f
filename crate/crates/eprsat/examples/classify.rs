//! Parse formulas and report which fragment each one belongs to.
//!
//! Run with: cargo run --example classify

use eprsat::{classify, parse, FragmentClass};

fn main() {
    let inputs = [
        "forall y1 y2 . R(y1,y2) | ~R(y2,y1)",
        "exists x . forall y . P(x) & ~P(y)",
        "P(a) & ~Q(a)",
        "forall y . y = a",
        "forall y . P(f(y))",
        "forall y . exists x . R(x,y)",
        "forall y z . P(y)",
    ];

    for text in inputs {
        let (formula, symbols) = parse(text).expect("all inputs are grammatical");
        print!("{text:45} => ");
        match classify(&formula, &symbols) {
            FragmentClass::Sbs(seg) => {
                println!("SBS  t={} constants={}", seg.t(), seg.constant_count());
            }
            FragmentClass::Bs(expr) => {
                println!("BS   s={} t={}", expr.s(), expr.t());
            }
            FragmentClass::General(violations) => {
                let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                println!("general  [{}]", list.join(", "));
            }
        }
    }
}
