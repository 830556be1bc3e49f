//! First-order abstract syntax: terms, formulas, symbol tables, and the
//! inductive var/free/con functions together with ground substitution.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

/// A first-order term: a variable, a constant, or a function application.
///
/// Function applications are representable so that arbitrary first-order
/// syntax can be built and printed, but both fragment validators reject
/// them (see [`mod@crate::classify`]).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Variable(String),
    Constant(String),
    FunctionApp(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Variable(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Constant(name.into())
    }

    /// The set of variable names occurring in this term.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Variable(name) => {
                out.insert(name.clone());
            }
            Term::Constant(_) => {}
            Term::FunctionApp(_, args) => {
                for arg in args {
                    arg.collect_vars(out);
                }
            }
        }
    }

    /// The set of constant names occurring in this term.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Variable(_) => {}
            Term::Constant(name) => {
                out.insert(name.clone());
            }
            Term::FunctionApp(_, args) => {
                for arg in args {
                    arg.collect_constants(out);
                }
            }
        }
    }

    fn contains_function(&self) -> bool {
        matches!(self, Term::FunctionApp(..))
    }
}

/// A first-order formula over relation atoms, equality, the usual
/// connectives, and quantifiers.
///
/// `And`, `Implies`, and `Iff` are first-class nodes rather than sugar so
/// that printing is faithful to the input; they are desugared to the
/// negation/disjunction core only when crossing into the propositional
/// layer (see [`Formula::desugared`]).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Equal(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(relation: impl Into<String>, terms: Vec<Term>) -> Self {
        Formula::Atom(relation.into(), terms)
    }

    // Constructor, not `ops::Not`; formulas are negated by wrapping.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Self {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Self {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Self {
        Formula::Implies(Box::new(f), Box::new(g))
    }

    pub fn iff(f: Formula, g: Formula) -> Self {
        Formula::Iff(Box::new(f), Box::new(g))
    }

    pub fn forall(var: impl Into<String>, f: Formula) -> Self {
        Formula::Forall(var.into(), Box::new(f))
    }

    pub fn exists(var: impl Into<String>, f: Formula) -> Self {
        Formula::Exists(var.into(), Box::new(f))
    }

    /// The set of free variable names, computed inductively: quantifiers
    /// remove their bound variable from the free set of the body.
    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            Formula::Atom(_, terms) => {
                let mut out = BTreeSet::new();
                for t in terms {
                    t.collect_vars(&mut out);
                }
                out
            }
            Formula::Equal(t1, t2) => {
                let mut out = t1.vars();
                out.extend(t2.vars());
                out
            }
            Formula::Not(f) => f.free_vars(),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => {
                let mut out = f.free_vars();
                out.extend(g.free_vars());
                out
            }
            Formula::Forall(x, f) | Formula::Exists(x, f) => {
                let mut out = f.free_vars();
                out.remove(x);
                out
            }
        }
    }

    /// The set of constant names occurring anywhere in the formula.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, terms) => {
                for t in terms {
                    t.collect_constants(out);
                }
            }
            Formula::Equal(t1, t2) => {
                t1.collect_constants(out);
                t2.collect_constants(out);
            }
            Formula::Not(f) => f.collect_constants(out),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => {
                f.collect_constants(out);
                g.collect_constants(out);
            }
            Formula::Forall(_, f) | Formula::Exists(_, f) => f.collect_constants(out),
        }
    }

    /// True if no quantifier occurs anywhere in the formula.
    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(..) | Formula::Equal(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => f.is_quantifier_free() && g.is_quantifier_free(),
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    /// True if no equality atom occurs anywhere in the formula.
    pub fn is_equality_free(&self) -> bool {
        match self {
            Formula::Atom(..) => true,
            Formula::Equal(..) => false,
            Formula::Not(f) => f.is_equality_free(),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => f.is_equality_free() && g.is_equality_free(),
            Formula::Forall(_, f) | Formula::Exists(_, f) => f.is_equality_free(),
        }
    }

    /// True if no function application occurs in any term position.
    pub fn is_function_free(&self) -> bool {
        match self {
            Formula::Atom(_, terms) => !terms.iter().any(Term::contains_function),
            Formula::Equal(t1, t2) => !t1.contains_function() && !t2.contains_function(),
            Formula::Not(f) => f.is_function_free(),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => f.is_function_free() && g.is_function_free(),
            Formula::Forall(_, f) | Formula::Exists(_, f) => f.is_function_free(),
        }
    }

    /// True if the formula contains no variables at all.
    pub fn is_ground(&self) -> bool {
        self.free_vars().is_empty() && self.is_quantifier_free()
    }

    /// Rewrites `And`, `Implies`, and `Iff` into their negation/disjunction
    /// forms: `f & g` becomes `~(~f | ~g)`, `f -> g` becomes `~f | g`, and
    /// `f <-> g` becomes `~(f | g) | ~(~f | ~g)`.
    pub fn desugared(&self) -> Formula {
        match self {
            Formula::Atom(..) | Formula::Equal(..) => self.clone(),
            Formula::Not(f) => Formula::not(f.desugared()),
            Formula::Or(f, g) => Formula::or(f.desugared(), g.desugared()),
            Formula::And(f, g) => {
                let f = f.desugared();
                let g = g.desugared();
                Formula::not(Formula::or(Formula::not(f), Formula::not(g)))
            }
            Formula::Implies(f, g) => Formula::or(Formula::not(f.desugared()), g.desugared()),
            Formula::Iff(f, g) => {
                let f = f.desugared();
                let g = g.desugared();
                Formula::or(
                    Formula::not(Formula::or(f.clone(), g.clone())),
                    Formula::not(Formula::or(Formula::not(f), Formula::not(g))),
                )
            }
            Formula::Forall(x, f) => Formula::forall(x.clone(), f.desugared()),
            Formula::Exists(x, f) => Formula::exists(x.clone(), f.desugared()),
        }
    }

    /// Replaces every variable occurrence by the constant it is mapped to.
    ///
    /// The formula must be quantifier-free (so capture cannot arise) and the
    /// mapping must cover every free variable; the result is ground.
    pub fn substitute_ground(
        &self,
        mapping: &BTreeMap<String, String>,
    ) -> Result<Formula, SubstitutionError> {
        if !self.is_quantifier_free() {
            return Err(SubstitutionError::NotQuantifierFree);
        }
        self.substitute_ground_inner(mapping)
    }

    fn substitute_ground_inner(
        &self,
        mapping: &BTreeMap<String, String>,
    ) -> Result<Formula, SubstitutionError> {
        Ok(match self {
            Formula::Atom(r, terms) => {
                let terms = terms
                    .iter()
                    .map(|t| substitute_term(t, mapping))
                    .collect::<Result<Vec<_>, _>>()?;
                Formula::Atom(r.clone(), terms)
            }
            Formula::Equal(t1, t2) => {
                Formula::Equal(substitute_term(t1, mapping)?, substitute_term(t2, mapping)?)
            }
            Formula::Not(f) => Formula::not(f.substitute_ground_inner(mapping)?),
            Formula::And(f, g) => Formula::and(
                f.substitute_ground_inner(mapping)?,
                g.substitute_ground_inner(mapping)?,
            ),
            Formula::Or(f, g) => Formula::or(
                f.substitute_ground_inner(mapping)?,
                g.substitute_ground_inner(mapping)?,
            ),
            Formula::Implies(f, g) => Formula::implies(
                f.substitute_ground_inner(mapping)?,
                g.substitute_ground_inner(mapping)?,
            ),
            Formula::Iff(f, g) => Formula::iff(
                f.substitute_ground_inner(mapping)?,
                g.substitute_ground_inner(mapping)?,
            ),
            Formula::Forall(..) | Formula::Exists(..) => {
                return Err(SubstitutionError::NotQuantifierFree)
            }
        })
    }
}

fn substitute_term(
    term: &Term,
    mapping: &BTreeMap<String, String>,
) -> Result<Term, SubstitutionError> {
    Ok(match term {
        Term::Variable(x) => match mapping.get(x) {
            Some(c) => Term::Constant(c.clone()),
            None => return Err(SubstitutionError::UnmappedFreeVariable(x.clone())),
        },
        Term::Constant(c) => Term::Constant(c.clone()),
        Term::FunctionApp(f, args) => Term::FunctionApp(
            f.clone(),
            args.iter()
                .map(|a| substitute_term(a, mapping))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstitutionError {
    #[error("free variable `{0}` has no image in the substitution")]
    UnmappedFreeVariable(String),
    #[error(
        "formula contains a quantifier; ground substitution requires a quantifier-free formula"
    )]
    NotQuantifierFree,
}

/// The non-logical signature of a formula: relation symbols with their
/// arities, function symbols with theirs, and an ordered list of constants.
///
/// The constant list is kept sorted and duplicate-free; this order is the
/// canonical enumeration order used by the grounder.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolTable {
    relations: BTreeMap<String, usize>,
    functions: BTreeMap<String, usize>,
    constants: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("relation `{name}` declared with arity {second} but previously {first}")]
    RelationArity {
        name: String,
        first: usize,
        second: usize,
    },
    #[error("function `{name}` declared with arity {second} but previously {first}")]
    FunctionArity {
        name: String,
        first: usize,
        second: usize,
    },
    #[error("arity must be at least 1 for `{0}`")]
    ZeroArity(String),
    #[error("symbol `{0}` is used both as {1} and as {2}")]
    NameClash(String, &'static str, &'static str),
    #[error("undeclared relation `{0}`")]
    UndeclaredRelation(String),
    #[error("relation `{name}` applied to {found} terms but has arity {expected}")]
    AtomArity {
        name: String,
        expected: usize,
        found: usize,
    },
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_relation(&mut self, name: &str, arity: usize) -> Result<(), SymbolError> {
        if arity == 0 {
            return Err(SymbolError::ZeroArity(name.to_string()));
        }
        if self.functions.contains_key(name) {
            return Err(SymbolError::NameClash(name.into(), "relation", "function"));
        }
        if self.constants.iter().any(|c| c == name) {
            return Err(SymbolError::NameClash(name.into(), "relation", "constant"));
        }
        match self.relations.get(name) {
            Some(&existing) if existing != arity => Err(SymbolError::RelationArity {
                name: name.to_string(),
                first: existing,
                second: arity,
            }),
            _ => {
                self.relations.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn declare_function(&mut self, name: &str, arity: usize) -> Result<(), SymbolError> {
        if arity == 0 {
            return Err(SymbolError::ZeroArity(name.to_string()));
        }
        if self.relations.contains_key(name) {
            return Err(SymbolError::NameClash(name.into(), "function", "relation"));
        }
        if self.constants.iter().any(|c| c == name) {
            return Err(SymbolError::NameClash(name.into(), "function", "constant"));
        }
        match self.functions.get(name) {
            Some(&existing) if existing != arity => Err(SymbolError::FunctionArity {
                name: name.to_string(),
                first: existing,
                second: arity,
            }),
            _ => {
                self.functions.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn declare_constant(&mut self, name: &str) -> Result<(), SymbolError> {
        if self.relations.contains_key(name) {
            return Err(SymbolError::NameClash(name.into(), "constant", "relation"));
        }
        if self.functions.contains_key(name) {
            return Err(SymbolError::NameClash(name.into(), "constant", "function"));
        }
        if let Err(pos) = self.constants.binary_search_by(|c| c.as_str().cmp(name)) {
            self.constants.insert(pos, name.to_string());
        }
        Ok(())
    }

    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        self.relations.get(name).copied()
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, usize)> {
        self.relations.iter().map(|(n, &a)| (n.as_str(), a))
    }

    /// Constants in canonical (lexicographic) order.
    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.constants
            .binary_search_by(|c| c.as_str().cmp(name))
            .is_ok()
    }

    /// Checks every atom of `f` against the declared relation arities.
    pub fn validate(&self, f: &Formula) -> Result<(), SymbolError> {
        match f {
            Formula::Atom(r, terms) => match self.relations.get(r) {
                None => Err(SymbolError::UndeclaredRelation(r.clone())),
                Some(&arity) if arity != terms.len() => Err(SymbolError::AtomArity {
                    name: r.clone(),
                    expected: arity,
                    found: terms.len(),
                }),
                Some(_) => Ok(()),
            },
            Formula::Equal(..) => Ok(()),
            Formula::Not(f) => self.validate(f),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => {
                self.validate(f)?;
                self.validate(g)
            }
            Formula::Forall(_, f) | Formula::Exists(_, f) => self.validate(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn term_vars_base_cases() {
        assert_eq!(Term::var("x").vars(), set(&["x"]));
        assert_eq!(Term::constant("c").vars(), set(&[]));
    }

    #[test]
    fn term_vars_function_union() {
        let t = Term::FunctionApp(
            "f".into(),
            vec![Term::var("x"), Term::constant("c"), Term::var("y")],
        );
        assert_eq!(t.vars(), set(&["x", "y"]));
    }

    #[test]
    fn free_vars_quantifier_removes_bound() {
        // forall y . P(y, x) leaves x free
        let f = Formula::forall(
            "y",
            Formula::atom("P", vec![Term::var("y"), Term::var("x")]),
        );
        assert_eq!(f.free_vars(), set(&["x"]));
    }

    #[test]
    fn free_vars_ground_atom() {
        let f = Formula::atom("P", vec![Term::constant("a")]);
        assert_eq!(f.free_vars(), set(&[]));
    }

    #[test]
    fn free_vars_shadow_scope() {
        // (exists x . R(x, y)) & Q(x): the second x occurs outside the
        // binder's scope and stays free. Verified against a brute-force
        // occurrence scan below.
        let f = Formula::and(
            Formula::exists(
                "x",
                Formula::atom("R", vec![Term::var("x"), Term::var("y")]),
            ),
            Formula::atom("Q", vec![Term::var("x")]),
        );
        assert_eq!(f.free_vars(), set(&["y", "x"]));
        assert_eq!(f.free_vars(), scan_free(&f, &BTreeSet::new()));
    }

    // Independent free-occurrence scanner: walks the tree carrying the set
    // of currently bound names.
    fn scan_free(f: &Formula, bound: &BTreeSet<String>) -> BTreeSet<String> {
        fn term_free(t: &Term, bound: &BTreeSet<String>, out: &mut BTreeSet<String>) {
            match t {
                Term::Variable(x) => {
                    if !bound.contains(x) {
                        out.insert(x.clone());
                    }
                }
                Term::Constant(_) => {}
                Term::FunctionApp(_, args) => {
                    for a in args {
                        term_free(a, bound, out);
                    }
                }
            }
        }
        match f {
            Formula::Atom(_, terms) => {
                let mut out = BTreeSet::new();
                for t in terms {
                    term_free(t, bound, &mut out);
                }
                out
            }
            Formula::Equal(t1, t2) => {
                let mut out = BTreeSet::new();
                term_free(t1, bound, &mut out);
                term_free(t2, bound, &mut out);
                out
            }
            Formula::Not(f) => scan_free(f, bound),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => {
                let mut out = scan_free(f, bound);
                out.extend(scan_free(g, bound));
                out
            }
            Formula::Forall(x, f) | Formula::Exists(x, f) => {
                let mut inner = bound.clone();
                inner.insert(x.clone());
                scan_free(f, &inner)
            }
        }
    }

    #[test]
    fn constants_through_quantifiers() {
        let f = Formula::forall("y", Formula::atom("P", vec![Term::var("y")]));
        assert_eq!(f.constants(), set(&[]));

        let g = Formula::or(
            Formula::atom("R", vec![Term::constant("a"), Term::constant("b")]),
            Formula::not(Formula::atom(
                "R",
                vec![Term::constant("b"), Term::constant("a")],
            )),
        );
        assert_eq!(g.constants(), set(&["a", "b"]));

        let h = Formula::forall(
            "y",
            Formula::implies(
                Formula::atom("P", vec![Term::var("y")]),
                Formula::atom("Q", vec![Term::constant("a")]),
            ),
        );
        assert_eq!(h.constants(), set(&["a"]));
    }

    #[test]
    fn substitute_ground_basic() {
        // P(y) | ~Q(y, a) under {y -> b}
        let f = Formula::or(
            Formula::atom("P", vec![Term::var("y")]),
            Formula::not(Formula::atom(
                "Q",
                vec![Term::var("y"), Term::constant("a")],
            )),
        );
        let mut map = BTreeMap::new();
        map.insert("y".to_string(), "b".to_string());
        let g = f.substitute_ground(&map).unwrap();
        assert_eq!(
            g,
            Formula::or(
                Formula::atom("P", vec![Term::constant("b")]),
                Formula::not(Formula::atom(
                    "Q",
                    vec![Term::constant("b"), Term::constant("a")]
                )),
            )
        );
        assert!(g.free_vars().is_empty());
    }

    #[test]
    fn substitute_ground_repeated_variable() {
        let f = Formula::atom("R", vec![Term::var("y1"), Term::var("y2")]);
        let mut map = BTreeMap::new();
        map.insert("y1".to_string(), "a".to_string());
        map.insert("y2".to_string(), "a".to_string());
        assert_eq!(
            f.substitute_ground(&map).unwrap(),
            Formula::atom("R", vec![Term::constant("a"), Term::constant("a")])
        );
    }

    #[test]
    fn substitute_ground_errors() {
        let f = Formula::atom("P", vec![Term::var("y")]);
        assert_eq!(
            f.substitute_ground(&BTreeMap::new()),
            Err(SubstitutionError::UnmappedFreeVariable("y".into()))
        );

        let q = Formula::forall("y", Formula::atom("P", vec![Term::var("y")]));
        assert_eq!(
            q.substitute_ground(&BTreeMap::new()),
            Err(SubstitutionError::NotQuantifierFree)
        );
    }

    #[test]
    fn desugar_implication() {
        let f = Formula::implies(
            Formula::atom("P", vec![Term::constant("a")]),
            Formula::atom("Q", vec![Term::constant("a")]),
        );
        assert_eq!(
            f.desugared(),
            Formula::or(
                Formula::not(Formula::atom("P", vec![Term::constant("a")])),
                Formula::atom("Q", vec![Term::constant("a")]),
            )
        );
    }

    #[test]
    fn symbol_table_rejects_conflicts() {
        let mut st = SymbolTable::new();
        st.declare_relation("P", 1).unwrap();
        assert!(matches!(
            st.declare_relation("P", 2),
            Err(SymbolError::RelationArity { .. })
        ));
        assert!(matches!(
            st.declare_constant("P"),
            Err(SymbolError::NameClash(..))
        ));
        assert!(matches!(
            st.declare_relation("Q", 0),
            Err(SymbolError::ZeroArity(..))
        ));
    }

    #[test]
    fn symbol_table_constants_sorted() {
        let mut st = SymbolTable::new();
        for c in ["b", "a", "c", "a"] {
            st.declare_constant(c).unwrap();
        }
        assert_eq!(st.constants(), &["a", "b", "c"]);
    }

    #[test]
    fn validate_checks_atom_arity() {
        let mut st = SymbolTable::new();
        st.declare_relation("P", 1).unwrap();
        let bad = Formula::atom("P", vec![Term::constant("a"), Term::constant("b")]);
        assert!(matches!(
            st.validate(&bad),
            Err(SymbolError::AtomArity { .. })
        ));
    }
}
