//! Herbrand grounding: universe construction, existential-witness handling,
//! ground-instance enumeration, and the translation of ground formulas into
//! propositional formulas via an atom table.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::classify::{BsExpression, BsSegment};
use crate::prop::PropFormula;
use crate::syntax::{Formula, Term};

/// Automatically introduced constant used when a sentence has no constant
/// symbols of its own.
pub const AUTO_CONSTANT: &str = "a0";

/// Prefix for fresh witness constants. Source identifiers cannot start with
/// an underscore, so these never collide.
pub const SKOLEM_PREFIX: &str = "_sk";

/// How leading existential variables are discharged.
///
/// `Skolem` introduces one fresh constant per existential variable and is
/// sound and complete. `PaperLiteral` draws witnesses only from the
/// formula's own constants, trying every tuple; it is sound but can report
/// UNSAT for satisfiable inputs (`exists x . P(x) & ~P(a)` is the standard
/// counterexample), and exists to make that behaviour reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WitnessPolicy {
    #[default]
    Skolem,
    PaperLiteral,
}

impl fmt::Display for WitnessPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessPolicy::Skolem => write!(f, "skolem"),
            WitnessPolicy::PaperLiteral => write!(f, "paper-literal"),
        }
    }
}

impl FromStr for WitnessPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "skolem" => Ok(WitnessPolicy::Skolem),
            "paper-literal" => Ok(WitnessPolicy::PaperLiteral),
            other => Err(format!(
                "unknown policy `{other}` (expected `skolem` or `paper-literal`)"
            )),
        }
    }
}

/// The ground-term universe of a sentence: its source constants in
/// canonical order, followed by any fresh witness constants, with a record
/// of whether the automatic constant had to be introduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HerbrandUniverse {
    source: Vec<String>,
    skolem: Vec<String>,
    auto_added_a0: bool,
}

impl HerbrandUniverse {
    fn from_parts(mut source: Vec<String>, skolem: Vec<String>) -> Self {
        debug_assert!(
            skolem.iter().all(|s| !source.contains(s)),
            "witness constants must be fresh"
        );
        let auto_added_a0 = source.is_empty() && skolem.is_empty();
        if auto_added_a0 {
            source.push(AUTO_CONSTANT.to_string());
        }
        HerbrandUniverse {
            source,
            skolem,
            auto_added_a0,
        }
    }

    /// All universe constants: source constants in lexicographic order,
    /// then witness constants.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.source
            .iter()
            .chain(self.skolem.iter())
            .map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.source.len() + self.skolem.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one constant
    }

    pub fn source_constants(&self) -> &[String] {
        &self.source
    }

    pub fn skolem_constants(&self) -> &[String] {
        &self.skolem
    }

    pub fn auto_added_a0(&self) -> bool {
        self.auto_added_a0
    }
}

/// Universe of a universal segment: its own constants, or the automatic
/// constant if it has none. Witness policy plays no role when there is no
/// existential prefix.
pub fn segment_universe(seg: &BsSegment) -> HerbrandUniverse {
    let source: Vec<String> = seg.matrix().constants().into_iter().collect();
    HerbrandUniverse::from_parts(source, Vec::new())
}

/// Universe of a prefix expression under the chosen policy: the source
/// constants plus, under `Skolem`, one fresh constant per existential
/// variable. The automatic constant appears only if the result would
/// otherwise be empty.
pub fn expression_universe(expr: &BsExpression, policy: WitnessPolicy) -> HerbrandUniverse {
    let source: Vec<String> = expr.matrix().constants().into_iter().collect();
    let skolem = match policy {
        WitnessPolicy::Skolem => skolem_names(expr.s()),
        WitnessPolicy::PaperLiteral => Vec::new(),
    };
    HerbrandUniverse::from_parts(source, skolem)
}

pub fn skolem_names(s: usize) -> Vec<String> {
    (1..=s).map(|i| format!("{SKOLEM_PREFIX}{i}")).collect()
}

/// Replaces each existential variable with its fresh witness constant,
/// yielding a universal segment over the extended symbol table.
/// Satisfiability is preserved in both directions because the fresh
/// constants occur nowhere else.
pub fn skolemize(expr: &BsExpression) -> BsSegment {
    let names = skolem_names(expr.s());
    let mapping: BTreeMap<String, String> = expr
        .exist_vars()
        .iter()
        .cloned()
        .zip(names.iter().cloned())
        .collect();
    let matrix = substitute_partial(expr.matrix(), &mapping);
    let mut symbols = expr.symbols().clone();
    for name in &names {
        symbols
            .declare_constant(name)
            .expect("skolem names cannot clash with source identifiers");
    }
    BsSegment::new(expr.univ_vars().to_vec(), matrix, symbols)
        .expect("skolemizing a validated expression yields a validated segment")
}

/// Substitutes the mapped variables and leaves the rest untouched.
pub(crate) fn substitute_partial(f: &Formula, mapping: &BTreeMap<String, String>) -> Formula {
    fn term(t: &Term, mapping: &BTreeMap<String, String>) -> Term {
        match t {
            Term::Variable(x) => match mapping.get(x) {
                Some(c) => Term::Constant(c.clone()),
                None => t.clone(),
            },
            Term::Constant(_) => t.clone(),
            Term::FunctionApp(name, args) => Term::FunctionApp(
                name.clone(),
                args.iter().map(|a| term(a, mapping)).collect(),
            ),
        }
    }
    match f {
        Formula::Atom(r, terms) => {
            Formula::Atom(r.clone(), terms.iter().map(|t| term(t, mapping)).collect())
        }
        Formula::Equal(t1, t2) => Formula::Equal(term(t1, mapping), term(t2, mapping)),
        Formula::Not(g) => Formula::not(substitute_partial(g, mapping)),
        Formula::And(g, h) => Formula::and(
            substitute_partial(g, mapping),
            substitute_partial(h, mapping),
        ),
        Formula::Or(g, h) => Formula::or(
            substitute_partial(g, mapping),
            substitute_partial(h, mapping),
        ),
        Formula::Implies(g, h) => Formula::implies(
            substitute_partial(g, mapping),
            substitute_partial(h, mapping),
        ),
        Formula::Iff(g, h) => Formula::iff(
            substitute_partial(g, mapping),
            substitute_partial(h, mapping),
        ),
        Formula::Forall(x, g) => Formula::forall(x.clone(), substitute_partial(g, mapping)),
        Formula::Exists(x, g) => Formula::exists(x.clone(), substitute_partial(g, mapping)),
    }
}

pub const DEFAULT_INSTANCE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("grounding would produce {required} instances, above the cap of {cap}")]
    ExplosionGuard { required: u128, cap: u64 },
}

/// One ground instance: the constant tuple substituted for the universal
/// variables, and the resulting ground formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundInstance {
    pub substitution: Vec<String>,
    pub formula: Formula,
}

/// The full ground instance set of a segment over a universe, in
/// lexicographic tuple order. Exactly `|universe|^t` instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundInstanceSet {
    instances: Vec<GroundInstance>,
    universe_size: usize,
    t: usize,
}

impl GroundInstanceSet {
    pub fn instances(&self) -> &[GroundInstance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Ground-set file body: one pretty-printed ground formula per line, in
    /// enumeration order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for instance in &self.instances {
            out.push_str(&instance.formula.to_string());
            out.push('\n');
        }
        out
    }
}

/// Enumerates every `t`-tuple over the universe in lexicographic order
/// (repetition allowed, rightmost position varying fastest) and substitutes
/// it into the matrix. Distinct tuples give distinct formulas because every
/// universal variable occurs in the matrix, so the count is exactly
/// `|universe|^t`.
pub fn ground(
    seg: &BsSegment,
    universe: &HerbrandUniverse,
    cap: u64,
) -> Result<GroundInstanceSet, GroundError> {
    let names: Vec<&str> = universe.names().collect();
    let t = seg.t();
    let required = (names.len() as u128)
        .checked_pow(t as u32)
        .unwrap_or(u128::MAX);
    if required > cap as u128 {
        return Err(GroundError::ExplosionGuard { required, cap });
    }

    let mut instances = Vec::with_capacity(required as usize);
    for tuple in tuples(&names, t) {
        let mapping: BTreeMap<String, String> = seg
            .univ_vars()
            .iter()
            .cloned()
            .zip(tuple.iter().map(|s| s.to_string()))
            .collect();
        let formula = seg
            .matrix()
            .substitute_ground(&mapping)
            .expect("validated segment matrices ground cleanly");
        instances.push(GroundInstance {
            substitution: tuple.iter().map(|s| s.to_string()).collect(),
            formula,
        });
    }
    debug_assert_eq!(instances.len() as u128, required);
    Ok(GroundInstanceSet {
        instances,
        universe_size: names.len(),
        t,
    })
}

/// All length-`len` tuples over `items` in lexicographic order, rightmost
/// position varying fastest. A zero-length request yields one empty tuple.
pub fn tuples<'a, T: Clone>(items: &'a [T], len: usize) -> impl Iterator<Item = Vec<T>> + 'a {
    let total = if items.is_empty() && len > 0 {
        0
    } else {
        (items.len() as u128).pow(len as u32)
    };
    let mut counter: Vec<usize> = vec![0; len];
    let mut produced: u128 = 0;
    std::iter::from_fn(move || {
        if produced >= total {
            return None;
        }
        let tuple: Vec<T> = counter.iter().map(|&i| items[i].clone()).collect();
        produced += 1;
        for slot in (0..len).rev() {
            counter[slot] += 1;
            if counter[slot] < items.len() {
                break;
            }
            counter[slot] = 0;
        }
        Some(tuple)
    })
}

/// A ground atom `R(c1, ..., cn)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub relation: String,
    pub args: Vec<String>,
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.relation, self.args.join(","))
    }
}

/// The bijection between the ground atoms that occur and 1-based
/// propositional variable indices, assigned in first-occurrence order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomTable {
    forward: HashMap<GroundAtom, u32>,
    backward: Vec<GroundAtom>,
}

impl AtomTable {
    fn intern(&mut self, atom: GroundAtom) -> u32 {
        if let Some(&index) = self.forward.get(&atom) {
            return index;
        }
        self.backward.push(atom.clone());
        let index = self.backward.len() as u32;
        self.forward.insert(atom, index);
        index
    }

    pub fn index_of(&self, atom: &GroundAtom) -> Option<u32> {
        self.forward.get(atom).copied()
    }

    pub fn atom(&self, index: u32) -> Option<&GroundAtom> {
        if index == 0 {
            return None;
        }
        self.backward.get(index as usize - 1)
    }

    pub fn len(&self) -> usize {
        self.backward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.backward.is_empty()
    }

    /// Registered atoms with their indices, in index order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &GroundAtom)> {
        self.backward
            .iter()
            .enumerate()
            .map(|(i, atom)| (i as u32 + 1, atom))
    }

    /// The inverse translation: rebuilds the first-order ground formula (in
    /// negation/disjunction form) denoted by a propositional formula.
    /// Returns `None` if some variable has no registered atom.
    pub fn decode(&self, f: &PropFormula) -> Option<Formula> {
        match f {
            PropFormula::Var(i) => self.atom(*i).map(|atom| {
                Formula::Atom(
                    atom.relation.clone(),
                    atom.args
                        .iter()
                        .map(|a| Term::Constant(a.clone()))
                        .collect(),
                )
            }),
            PropFormula::Not(g) => self.decode(g).map(Formula::not),
            PropFormula::Or(g, h) => Some(Formula::or(self.decode(g)?, self.decode(h)?)),
        }
    }
}

/// Translates every ground instance into a propositional formula. Each
/// distinct ground atom receives one variable index, assigned in
/// first-occurrence order across the whole list; conjunction, implication,
/// and biconditional are desugared to negation/disjunction on the way.
pub fn pi_translate(set: &GroundInstanceSet) -> (Vec<PropFormula>, AtomTable) {
    let mut atoms = AtomTable::default();
    let formulas = set
        .instances
        .iter()
        .map(|instance| translate(&instance.formula.desugared(), &mut atoms))
        .collect();
    (formulas, atoms)
}

fn translate(f: &Formula, atoms: &mut AtomTable) -> PropFormula {
    match f {
        Formula::Atom(relation, terms) => {
            let args = terms
                .iter()
                .map(|t| match t {
                    Term::Constant(c) => c.clone(),
                    other => unreachable!("non-constant term {other:?} in ground atom"),
                })
                .collect();
            let index = atoms.intern(GroundAtom {
                relation: relation.clone(),
                args,
            });
            PropFormula::Var(index)
        }
        Formula::Not(g) => PropFormula::not(translate(g, atoms)),
        Formula::Or(g, h) => PropFormula::or(translate(g, atoms), translate(h, atoms)),
        other => unreachable!("desugared ground formulas contain only atoms, `~`, `|`: {other:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify, FragmentClass};
    use crate::parser::parse;

    fn segment(text: &str) -> BsSegment {
        let (f, st) = parse(text).unwrap();
        match classify(&f, &st) {
            FragmentClass::Sbs(seg) => seg,
            other => panic!("expected segment, got {other:?}"),
        }
    }

    fn expression(text: &str) -> BsExpression {
        let (f, st) = parse(text).unwrap();
        match classify(&f, &st) {
            FragmentClass::Bs(expr) => expr,
            other => panic!("expected expression, got {other:?}"),
        }
    }

    #[test]
    fn universe_auto_constant() {
        let seg = segment("forall y1 y2 . R(y1,y2)");
        let u = segment_universe(&seg);
        assert_eq!(u.names().collect::<Vec<_>>(), vec![AUTO_CONSTANT]);
        assert!(u.auto_added_a0());
    }

    #[test]
    fn universe_from_constants() {
        let seg = segment("forall y . P(y) | Q(a)");
        let u = segment_universe(&seg);
        assert_eq!(u.names().collect::<Vec<_>>(), vec!["a"]);
        assert!(!u.auto_added_a0());
    }

    #[test]
    fn expression_universe_by_policy() {
        let expr = expression("exists x . P(x) & ~P(a)");
        let skolem = expression_universe(&expr, WitnessPolicy::Skolem);
        assert_eq!(skolem.names().collect::<Vec<_>>(), vec!["a", "_sk1"]);
        let literal = expression_universe(&expr, WitnessPolicy::PaperLiteral);
        assert_eq!(literal.names().collect::<Vec<_>>(), vec!["a"]);
    }

    #[test]
    fn skolemize_single() {
        let expr = expression("exists x . forall y . R(x,y)");
        let seg = skolemize(&expr);
        assert_eq!(seg.to_formula().to_string(), "forall y . R(_sk1,y)");
    }

    #[test]
    fn skolemize_two_witnesses() {
        let expr = expression("exists x1 x2 . forall y . P(x1) | Q(x2,y)");
        let seg = skolemize(&expr);
        assert_eq!(
            seg.to_formula().to_string(),
            "forall y . P(_sk1) | Q(_sk2,y)"
        );
    }

    #[test]
    fn skolemize_identity_when_no_existentials() {
        let expr = segment("forall y . P(y)").to_expression();
        let seg = skolemize(&expr);
        assert_eq!(seg.to_formula().to_string(), "forall y . P(y)");
    }

    #[test]
    fn ground_single_instance() {
        let seg = segment("forall y . P(y)");
        let u = segment_universe(&seg);
        let gis = ground(&seg, &u, DEFAULT_INSTANCE_CAP).unwrap();
        assert_eq!(gis.len(), 1);
        assert_eq!(gis.to_text(), "P(a0)\n");
    }

    #[test]
    fn ground_order_two_squared() {
        // Two constants, two variables: four instances in lexicographic
        // order with the right position varying fastest.
        let seg = segment("forall y1 y2 . R(y1,y2) | S(a) | S(b)");
        let u = segment_universe(&seg);
        let gis = ground(&seg, &u, DEFAULT_INSTANCE_CAP).unwrap();
        let subs: Vec<&[String]> = gis
            .instances()
            .iter()
            .map(|i| i.substitution.as_slice())
            .collect();
        assert_eq!(
            subs,
            vec![
                &["a".to_string(), "a".to_string()][..],
                &["a".to_string(), "b".to_string()][..],
                &["b".to_string(), "a".to_string()][..],
                &["b".to_string(), "b".to_string()][..],
            ]
        );
    }

    #[test]
    fn ground_degenerate_sentence() {
        let seg = segment("P(a) & ~P(a)");
        let u = segment_universe(&seg);
        let gis = ground(&seg, &u, DEFAULT_INSTANCE_CAP).unwrap();
        assert_eq!(gis.len(), 1);
        assert_eq!(gis.to_text(), "P(a) & ~P(a)\n");
    }

    #[test]
    fn explosion_guard() {
        let seg = segment("forall y1 y2 y3 . R(y1,y2) | R(y2,y3) | S(a) | S(b)");
        let u = segment_universe(&seg);
        assert_eq!(
            ground(&seg, &u, 7),
            Err(GroundError::ExplosionGuard {
                required: 8,
                cap: 7
            })
        );
    }

    #[test]
    fn pi_translate_shares_atoms() {
        let seg = segment("forall y1 y2 . R(y1,y2) | S(a) | S(b)");
        let u = segment_universe(&seg);
        let gis = ground(&seg, &u, DEFAULT_INSTANCE_CAP).unwrap();
        let (props, atoms) = pi_translate(&gis);
        assert_eq!(props.len(), 4);
        // R over each pair plus the two shared S atoms.
        assert_eq!(atoms.len(), 6);
        let r_aa = GroundAtom {
            relation: "R".into(),
            args: vec!["a".into(), "a".into()],
        };
        assert_eq!(atoms.index_of(&r_aa), Some(1));
    }

    #[test]
    fn pi_translate_desugars_conjunction() {
        let seg = segment("P(a) & ~P(a)");
        let u = segment_universe(&seg);
        let gis = ground(&seg, &u, DEFAULT_INSTANCE_CAP).unwrap();
        let (props, atoms) = pi_translate(&gis);
        assert_eq!(atoms.len(), 1);
        // p1 & ~p1 in negation/disjunction form.
        let expected = PropFormula::not(PropFormula::or(
            PropFormula::not(PropFormula::var(1)),
            PropFormula::not(PropFormula::not(PropFormula::var(1))),
        ));
        assert_eq!(props, vec![expected]);
    }

    #[test]
    fn decode_inverts_translate() {
        let seg = segment("forall y . P(y) -> Q(y,a)");
        let u = segment_universe(&seg);
        let gis = ground(&seg, &u, DEFAULT_INSTANCE_CAP).unwrap();
        let (props, atoms) = pi_translate(&gis);
        for (prop, instance) in props.iter().zip(gis.instances()) {
            let decoded = atoms.decode(prop).unwrap();
            assert_eq!(decoded, instance.formula.desugared());
        }
    }

    #[test]
    fn tuples_zero_length() {
        let items = ["a"];
        let all: Vec<Vec<&str>> = tuples(&items, 0).collect();
        assert_eq!(all, vec![Vec::<&str>::new()]);
    }
}
