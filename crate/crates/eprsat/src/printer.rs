//! Canonical text rendering for terms and formulas.
//!
//! Precedence, loosest to tightest: quantifier prefixes, `<->`, `->`, `|`,
//! `&`, `~`. Implication and biconditional are right-associative, the
//! lattice connectives left-associative. Parentheses are emitted only where
//! the tree departs from those defaults, so output re-parses to the same
//! tree.

use std::fmt;

use crate::syntax::{Formula, Term};

const PREC_QUANT: u8 = 0;
const PREC_IFF: u8 = 1;
const PREC_IMPLIES: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_NOT: u8 = 5;
const PREC_ATOM: u8 = 6;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Exists(..) => PREC_QUANT,
        Formula::Iff(..) => PREC_IFF,
        Formula::Implies(..) => PREC_IMPLIES,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        Formula::Not(..) => PREC_NOT,
        Formula::Atom(..) | Formula::Equal(..) => PREC_ATOM,
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Variable(name) | Term::Constant(name) => write!(f, "{name}"),
            Term::FunctionApp(name, args) => {
                write!(f, "{name}(")?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{arg}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write(self, f)
    }
}

fn write(formula: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match formula {
        Formula::Atom(r, terms) => {
            write!(out, "{r}(")?;
            for (i, t) in terms.iter().enumerate() {
                if i > 0 {
                    write!(out, ",")?;
                }
                write!(out, "{t}")?;
            }
            write!(out, ")")
        }
        Formula::Equal(t1, t2) => write!(out, "{t1} = {t2}"),
        Formula::Not(inner) => {
            write!(out, "~")?;
            child(inner, PREC_NOT, out)
        }
        Formula::And(l, r) => binary(l, "&", r, PREC_AND, Assoc::Left, out),
        Formula::Or(l, r) => binary(l, "|", r, PREC_OR, Assoc::Left, out),
        Formula::Implies(l, r) => binary(l, "->", r, PREC_IMPLIES, Assoc::Right, out),
        Formula::Iff(l, r) => binary(l, "<->", r, PREC_IFF, Assoc::Right, out),
        Formula::Forall(..) | Formula::Exists(..) => {
            // Collapse a run of same-kind binders into one prefix block.
            let mut cursor = formula;
            loop {
                let (keyword, mut vars): (&str, Vec<&str>) = match cursor {
                    Formula::Forall(v, _) => ("forall", vec![v]),
                    Formula::Exists(v, _) => ("exists", vec![v]),
                    _ => unreachable!(),
                };
                let same_kind = |f: &Formula| {
                    matches!(
                        (cursor, f),
                        (Formula::Forall(..), Formula::Forall(..))
                            | (Formula::Exists(..), Formula::Exists(..))
                    )
                };
                let mut body = match cursor {
                    Formula::Forall(_, b) | Formula::Exists(_, b) => b.as_ref(),
                    _ => unreachable!(),
                };
                while same_kind(body) {
                    match body {
                        Formula::Forall(v, b) | Formula::Exists(v, b) => {
                            vars.push(v);
                            body = b.as_ref();
                        }
                        _ => unreachable!(),
                    }
                }
                write!(out, "{keyword} {} . ", vars.join(" "))?;
                match body {
                    Formula::Forall(..) | Formula::Exists(..) => cursor = body,
                    _ => return write(body, out),
                }
            }
        }
    }
}

enum Assoc {
    Left,
    Right,
}

fn binary(
    left: &Formula,
    op: &str,
    right: &Formula,
    prec: u8,
    assoc: Assoc,
    out: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    let (left_min, right_min) = match assoc {
        Assoc::Left => (prec, prec + 1),
        Assoc::Right => (prec + 1, prec),
    };
    child(left, left_min, out)?;
    write!(out, " {op} ")?;
    child(right, right_min, out)
}

fn child(f: &Formula, min_prec: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if precedence(f) < min_prec {
        write!(out, "(")?;
        write(f, out)?;
        write!(out, ")")
    } else {
        write(f, out)
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{Formula, Term};

    fn p(name: &str) -> Formula {
        Formula::atom(name, vec![Term::constant("a")])
    }

    #[test]
    fn quantifier_prefix() {
        let f = Formula::forall("y", Formula::atom("P", vec![Term::var("y")]));
        assert_eq!(f.to_string(), "forall y . P(y)");
    }

    #[test]
    fn negated_disjunction_gets_parens() {
        let f = Formula::not(Formula::or(p("P"), p("Q")));
        assert_eq!(f.to_string(), "~(P(a) | Q(a))");
    }

    #[test]
    fn left_associated_iff_shows_parens() {
        let f = Formula::iff(Formula::iff(p("P"), p("Q")), p("R"));
        assert_eq!(f.to_string(), "(P(a) <-> Q(a)) <-> R(a)");
    }

    #[test]
    fn right_associated_iff_is_bare() {
        let f = Formula::iff(p("P"), Formula::iff(p("Q"), p("R")));
        assert_eq!(f.to_string(), "P(a) <-> Q(a) <-> R(a)");
    }

    #[test]
    fn mixed_precedence() {
        // a | (b & c) needs no parens; (a | b) & c does.
        let f = Formula::or(p("P"), Formula::and(p("Q"), p("R")));
        assert_eq!(f.to_string(), "P(a) | Q(a) & R(a)");
        let g = Formula::and(Formula::or(p("P"), p("Q")), p("R"));
        assert_eq!(g.to_string(), "(P(a) | Q(a)) & R(a)");
    }

    #[test]
    fn collapsed_quantifier_block() {
        let f = Formula::forall(
            "y1",
            Formula::forall(
                "y2",
                Formula::or(
                    Formula::atom("R", vec![Term::var("y1"), Term::var("y2")]),
                    Formula::not(Formula::atom("R", vec![Term::var("y2"), Term::var("y1")])),
                ),
            ),
        );
        assert_eq!(f.to_string(), "forall y1 y2 . R(y1,y2) | ~R(y2,y1)");
    }

    #[test]
    fn alternating_blocks() {
        let f = Formula::exists(
            "x",
            Formula::forall(
                "y",
                Formula::and(
                    Formula::atom("P", vec![Term::var("x")]),
                    Formula::not(Formula::atom("P", vec![Term::var("y")])),
                ),
            ),
        );
        assert_eq!(f.to_string(), "exists x . forall y . P(x) & ~P(y)");
    }

    #[test]
    fn quantifier_under_connective_is_parenthesized() {
        let f = Formula::or(
            Formula::forall("y", Formula::atom("P", vec![Term::var("y")])),
            p("Q"),
        );
        assert_eq!(f.to_string(), "(forall y . P(y)) | Q(a)");
    }

    #[test]
    fn double_negation() {
        let f = Formula::not(Formula::not(p("P")));
        assert_eq!(f.to_string(), "~~P(a)");
    }

    #[test]
    fn equality_renders_infix() {
        let f = Formula::Equal(Term::constant("a"), Term::constant("b"));
        assert_eq!(f.to_string(), "a = b");
    }
}
