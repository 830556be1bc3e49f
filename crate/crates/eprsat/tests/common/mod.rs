//! Shared helpers for the integration suites: seeded generators for
//! general first-order formulas (round-trip tests) and for propositional
//! formulas (solver cross-checks).

// Each suite uses only part of this module.
#![allow(dead_code)]

use rand::{Rng, RngExt};

use eprsat::prop::PropFormula;
use eprsat::syntax::{Formula, Term};

const VARS: &[&str] = &["x1", "x2", "x3", "x4"];
const CONSTS: &[&str] = &["a", "b", "c"];
const RELATIONS: &[(&str, usize)] = &[("P", 1), ("Q", 1), ("R", 2)];
const FUNCTIONS: &[(&str, usize)] = &[("f", 1), ("g", 2)];

/// A random closed formula that follows the concrete-syntax conventions:
/// lowercase variables bound somewhere, lowercase constants, uppercase
/// relations, functions and equality allowed. Closed means every variable
/// occurrence sits under a binder of that name, so pretty-printing and
/// re-parsing reproduce the same tree.
pub fn random_general_formula(rng: &mut impl Rng, depth: usize) -> Formula {
    let mut scope = Vec::new();
    node(rng, depth, &mut scope)
}

fn node(rng: &mut impl Rng, depth: usize, scope: &mut Vec<&'static str>) -> Formula {
    if depth == 0 {
        return leaf(rng, scope);
    }
    match rng.random_range(0..10u8) {
        0 | 1 => leaf(rng, scope),
        2 => Formula::not(node(rng, depth - 1, scope)),
        3 => Formula::and(node(rng, depth - 1, scope), node(rng, depth - 1, scope)),
        4 => Formula::or(node(rng, depth - 1, scope), node(rng, depth - 1, scope)),
        5 => Formula::implies(node(rng, depth - 1, scope), node(rng, depth - 1, scope)),
        6 => Formula::iff(node(rng, depth - 1, scope), node(rng, depth - 1, scope)),
        7 | 8 => {
            let var = VARS[rng.random_range(0..VARS.len())];
            scope.push(var);
            let body = node(rng, depth - 1, scope);
            scope.pop();
            Formula::forall(var, body)
        }
        _ => {
            let var = VARS[rng.random_range(0..VARS.len())];
            scope.push(var);
            let body = node(rng, depth - 1, scope);
            scope.pop();
            Formula::exists(var, body)
        }
    }
}

fn leaf(rng: &mut impl Rng, scope: &[&'static str]) -> Formula {
    if rng.random_bool(0.15) {
        Formula::Equal(term(rng, scope, 1), term(rng, scope, 1))
    } else {
        let (name, arity) = RELATIONS[rng.random_range(0..RELATIONS.len())];
        let args = (0..arity).map(|_| term(rng, scope, 1)).collect();
        Formula::Atom(name.to_string(), args)
    }
}

fn term(rng: &mut impl Rng, scope: &[&'static str], fuel: usize) -> Term {
    let can_var = !scope.is_empty();
    if can_var && rng.random_bool(0.45) {
        return Term::var(scope[rng.random_range(0..scope.len())]);
    }
    if fuel > 0 && rng.random_bool(0.2) {
        let (name, arity) = FUNCTIONS[rng.random_range(0..FUNCTIONS.len())];
        let args = (0..arity).map(|_| term(rng, scope, fuel - 1)).collect();
        return Term::FunctionApp(name.to_string(), args);
    }
    Term::constant(CONSTS[rng.random_range(0..CONSTS.len())])
}

/// A random propositional formula over variables `1..=max_var` in the
/// negation/disjunction core.
pub fn random_prop_formula(rng: &mut impl Rng, depth: usize, max_var: u32) -> PropFormula {
    if depth == 0 || rng.random_bool(0.3) {
        return PropFormula::var(rng.random_range(1..=max_var));
    }
    if rng.random_bool(0.4) {
        PropFormula::not(random_prop_formula(rng, depth - 1, max_var))
    } else {
        PropFormula::or(
            random_prop_formula(rng, depth - 1, max_var),
            random_prop_formula(rng, depth - 1, max_var),
        )
    }
}
