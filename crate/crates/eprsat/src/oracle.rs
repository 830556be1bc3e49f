//! Brute-force finite-model search and first-order evaluation over explicit
//! structures. This is the independent ground truth the grounding pipeline
//! is checked against: the fragments have the finite-model property, so
//! exhaustive search up to the fragment's bound is a complete decision
//! procedure.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::classify::{BsExpression, BsSegment};
use crate::syntax::{Formula, SymbolTable, Term};

/// A finite structure: domain `{0, .., domain_size-1}`, one element per
/// declared constant, and an explicit tuple set per relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteStructure {
    pub domain_size: usize,
    pub constants: BTreeMap<String, usize>,
    pub relations: BTreeMap<String, BTreeSet<Vec<usize>>>,
}

/// Maps free variables to domain elements during evaluation.
pub type VariableAssignment = BTreeMap<String, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoEvalError {
    #[error("symbol `{0}` is not interpreted by the structure")]
    UndeclaredSymbol(String),
    #[error("free variable `{0}` has no assigned element")]
    UnassignedFreeVariable(String),
}

/// Satisfaction over a finite structure: equality is element equality,
/// quantifiers range over the whole domain, connectives short-circuit.
/// Function applications are never interpreted (structures carry no
/// function tables) and report the symbol as undeclared.
pub fn fo_evaluate(
    structure: &FiniteStructure,
    beta: &VariableAssignment,
    formula: &Formula,
) -> Result<bool, FoEvalError> {
    fn term_value(
        structure: &FiniteStructure,
        beta: &VariableAssignment,
        term: &Term,
    ) -> Result<usize, FoEvalError> {
        match term {
            Term::Variable(x) => beta
                .get(x)
                .copied()
                .ok_or_else(|| FoEvalError::UnassignedFreeVariable(x.clone())),
            Term::Constant(c) => structure
                .constants
                .get(c)
                .copied()
                .ok_or_else(|| FoEvalError::UndeclaredSymbol(c.clone())),
            Term::FunctionApp(f, _) => Err(FoEvalError::UndeclaredSymbol(f.clone())),
        }
    }

    match formula {
        Formula::Atom(relation, terms) => {
            let table = structure
                .relations
                .get(relation)
                .ok_or_else(|| FoEvalError::UndeclaredSymbol(relation.clone()))?;
            let tuple = terms
                .iter()
                .map(|t| term_value(structure, beta, t))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(table.contains(&tuple))
        }
        Formula::Equal(t1, t2) => {
            Ok(term_value(structure, beta, t1)? == term_value(structure, beta, t2)?)
        }
        Formula::Not(f) => Ok(!fo_evaluate(structure, beta, f)?),
        Formula::And(f, g) => {
            Ok(fo_evaluate(structure, beta, f)? && fo_evaluate(structure, beta, g)?)
        }
        Formula::Or(f, g) => {
            Ok(fo_evaluate(structure, beta, f)? || fo_evaluate(structure, beta, g)?)
        }
        Formula::Implies(f, g) => {
            Ok(!fo_evaluate(structure, beta, f)? || fo_evaluate(structure, beta, g)?)
        }
        Formula::Iff(f, g) => {
            Ok(fo_evaluate(structure, beta, f)? == fo_evaluate(structure, beta, g)?)
        }
        Formula::Forall(x, f) => {
            for a in 0..structure.domain_size {
                let mut inner = beta.clone();
                inner.insert(x.clone(), a);
                if !fo_evaluate(structure, &inner, f)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Exists(x, f) => {
            for a in 0..structure.domain_size {
                let mut inner = beta.clone();
                inner.insert(x.clone(), a);
                if fo_evaluate(structure, &inner, f)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

pub const DEFAULT_ENUMERATION_GUARD: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search space of {required} interpretations exceeds the guard of {guard}")]
    EnumerationGuard { required: u128, guard: u64 },
    #[error(transparent)]
    Eval(#[from] FoEvalError),
}

/// Result of a bounded model search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelSearch {
    Sat(FiniteStructure),
    UnsatUpTo(usize),
}

/// Enumerates structures of domain size 1..=max_size in canonical order and
/// returns the first model of the sentence, if any.
///
/// Canonical order: domain sizes ascending; constant denotations as an
/// odometer over the formula's constants in name order (rightmost fastest);
/// relation tables as per-relation bitmask counters over the formula's
/// relations in name order (rightmost fastest), where bit `j` of a mask
/// holds the `j`-th tuple in lexicographic order.
pub fn find_model(
    sentence: &Formula,
    symbols: &SymbolTable,
    max_size: usize,
    guard: u64,
) -> Result<ModelSearch, OracleError> {
    let compiled = Compiled::build(sentence, symbols)?;
    let total = search_space(&compiled, max_size);
    if total > guard as u128 {
        return Err(OracleError::EnumerationGuard {
            required: total,
            guard,
        });
    }

    for d in 1..=max_size {
        if let Some(structure) = search_domain(&compiled, d) {
            debug_assert_eq!(
                fo_evaluate(&structure, &VariableAssignment::new(), sentence),
                Ok(true),
                "compiled and direct evaluation must agree on the witness"
            );
            return Ok(ModelSearch::Sat(structure));
        }
    }
    Ok(ModelSearch::UnsatUpTo(max_size))
}

/// Total number of interpretations examined up to `max_size`.
fn search_space(compiled: &Compiled, max_size: usize) -> u128 {
    let mut total: u128 = 0;
    for d in 1..=max_size {
        let mut per_d: u128 = (d as u128).saturating_pow(compiled.constants.len() as u32);
        for &(_, arity) in &compiled.relations {
            let tuple_count = (d as u128).saturating_pow(arity as u32);
            if tuple_count >= 128 {
                return u128::MAX;
            }
            per_d = per_d.saturating_mul(1u128 << tuple_count);
        }
        total = total.saturating_add(per_d);
    }
    total
}

fn search_domain(compiled: &Compiled, d: usize) -> Option<FiniteStructure> {
    let n_consts = compiled.constants.len();
    let n_rels = compiled.relations.len();
    let mut const_vals = vec![0usize; n_consts];
    let limits: Vec<u64> = compiled
        .relations
        .iter()
        .map(|&(_, arity)| 1u64 << (d as u64).pow(arity as u32))
        .collect();
    let mut env = Vec::new();
    loop {
        let mut masks = vec![0u64; n_rels];
        loop {
            let candidate = Candidate {
                d,
                const_vals: &const_vals,
                masks: &masks,
            };
            if compiled.eval(&candidate, &mut env) {
                return Some(compiled.realize(&candidate));
            }
            // Advance the relation-table odometer, rightmost fastest.
            let mut slot = n_rels;
            loop {
                if slot == 0 {
                    break;
                }
                slot -= 1;
                masks[slot] += 1;
                if masks[slot] < limits[slot] {
                    break;
                }
                masks[slot] = 0;
                if slot == 0 {
                    break;
                }
            }
            if masks.iter().all(|&m| m == 0) {
                break;
            }
        }
        // Advance the constant-denotation odometer.
        let mut slot = n_consts;
        loop {
            if slot == 0 {
                return None;
            }
            slot -= 1;
            const_vals[slot] += 1;
            if const_vals[slot] < d {
                break;
            }
            const_vals[slot] = 0;
            if slot == 0 {
                return None;
            }
        }
    }
}

/// Name-free compiled form: constants and relations resolved to indices,
/// quantified variables to scope-depth slots.
struct Compiled {
    constants: Vec<String>,
    relations: Vec<(String, usize)>,
    body: CFormula,
}

enum CTerm {
    Var(usize),
    Const(usize),
}

enum CFormula {
    Atom { rel: usize, args: Vec<CTerm> },
    Equal(CTerm, CTerm),
    Not(Box<CFormula>),
    And(Box<CFormula>, Box<CFormula>),
    Or(Box<CFormula>, Box<CFormula>),
    Implies(Box<CFormula>, Box<CFormula>),
    Iff(Box<CFormula>, Box<CFormula>),
    Forall(Box<CFormula>),
    Exists(Box<CFormula>),
}

struct Candidate<'a> {
    d: usize,
    const_vals: &'a [usize],
    masks: &'a [u64],
}

impl Compiled {
    fn build(sentence: &Formula, symbols: &SymbolTable) -> Result<Self, FoEvalError> {
        let constants: Vec<String> = sentence.constants().into_iter().collect();
        let mut relation_names = BTreeSet::new();
        collect_relations(sentence, &mut relation_names);
        let relations: Vec<(String, usize)> = relation_names
            .into_iter()
            .map(|name| {
                symbols
                    .relation_arity(&name)
                    .map(|arity| (name.clone(), arity))
                    .ok_or(FoEvalError::UndeclaredSymbol(name))
            })
            .collect::<Result<_, _>>()?;

        let mut scope: Vec<String> = Vec::new();
        let body = compile(sentence, &constants, &relations, &mut scope)?;
        Ok(Compiled {
            constants,
            relations,
            body,
        })
    }

    fn eval(&self, candidate: &Candidate, env: &mut Vec<usize>) -> bool {
        eval_compiled(&self.body, candidate, env)
    }

    /// Expands a candidate's masks into an explicit structure.
    fn realize(&self, candidate: &Candidate) -> FiniteStructure {
        let constants = self
            .constants
            .iter()
            .cloned()
            .zip(candidate.const_vals.iter().copied())
            .collect();
        let mut relations = BTreeMap::new();
        for (i, (name, arity)) in self.relations.iter().enumerate() {
            let mut table = BTreeSet::new();
            let domain: Vec<usize> = (0..candidate.d).collect();
            for (j, tuple) in crate::grounding::tuples(&domain, *arity).enumerate() {
                if candidate.masks[i] >> j & 1 == 1 {
                    table.insert(tuple);
                }
            }
            relations.insert(name.clone(), table);
        }
        FiniteStructure {
            domain_size: candidate.d,
            constants,
            relations,
        }
    }
}

fn collect_relations(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Atom(r, _) => {
            out.insert(r.clone());
        }
        Formula::Equal(..) => {}
        Formula::Not(g) => collect_relations(g, out),
        Formula::And(g, h) | Formula::Or(g, h) | Formula::Implies(g, h) | Formula::Iff(g, h) => {
            collect_relations(g, out);
            collect_relations(h, out);
        }
        Formula::Forall(_, g) | Formula::Exists(_, g) => collect_relations(g, out),
    }
}

fn compile(
    f: &Formula,
    constants: &[String],
    relations: &[(String, usize)],
    scope: &mut Vec<String>,
) -> Result<CFormula, FoEvalError> {
    let cterm = |t: &Term, scope: &[String]| -> Result<CTerm, FoEvalError> {
        match t {
            Term::Variable(x) => scope
                .iter()
                .rposition(|v| v == x)
                .map(CTerm::Var)
                .ok_or_else(|| FoEvalError::UnassignedFreeVariable(x.clone())),
            Term::Constant(c) => constants
                .iter()
                .position(|name| name == c)
                .map(CTerm::Const)
                .ok_or_else(|| FoEvalError::UndeclaredSymbol(c.clone())),
            Term::FunctionApp(name, _) => Err(FoEvalError::UndeclaredSymbol(name.clone())),
        }
    };
    Ok(match f {
        Formula::Atom(r, terms) => {
            let rel = relations
                .iter()
                .position(|(name, _)| name == r)
                .expect("relation collected above");
            let args = terms
                .iter()
                .map(|t| cterm(t, scope))
                .collect::<Result<Vec<_>, _>>()?;
            CFormula::Atom { rel, args }
        }
        Formula::Equal(t1, t2) => CFormula::Equal(cterm(t1, scope)?, cterm(t2, scope)?),
        Formula::Not(g) => CFormula::Not(Box::new(compile(g, constants, relations, scope)?)),
        Formula::And(g, h) => CFormula::And(
            Box::new(compile(g, constants, relations, scope)?),
            Box::new(compile(h, constants, relations, scope)?),
        ),
        Formula::Or(g, h) => CFormula::Or(
            Box::new(compile(g, constants, relations, scope)?),
            Box::new(compile(h, constants, relations, scope)?),
        ),
        Formula::Implies(g, h) => CFormula::Implies(
            Box::new(compile(g, constants, relations, scope)?),
            Box::new(compile(h, constants, relations, scope)?),
        ),
        Formula::Iff(g, h) => CFormula::Iff(
            Box::new(compile(g, constants, relations, scope)?),
            Box::new(compile(h, constants, relations, scope)?),
        ),
        Formula::Forall(x, g) => {
            scope.push(x.clone());
            let body = compile(g, constants, relations, scope)?;
            scope.pop();
            CFormula::Forall(Box::new(body))
        }
        Formula::Exists(x, g) => {
            scope.push(x.clone());
            let body = compile(g, constants, relations, scope)?;
            scope.pop();
            CFormula::Exists(Box::new(body))
        }
    })
}

fn eval_compiled(f: &CFormula, c: &Candidate, env: &mut Vec<usize>) -> bool {
    let value = |t: &CTerm, env: &[usize]| -> usize {
        match t {
            CTerm::Var(slot) => env[*slot],
            CTerm::Const(i) => c.const_vals[*i],
        }
    };
    match f {
        CFormula::Atom { rel, args } => {
            let mut index = 0usize;
            for arg in args {
                index = index * c.d + value(arg, env);
            }
            c.masks[*rel] >> index & 1 == 1
        }
        CFormula::Equal(t1, t2) => value(t1, env) == value(t2, env),
        CFormula::Not(g) => !eval_compiled(g, c, env),
        CFormula::And(g, h) => eval_compiled(g, c, env) && eval_compiled(h, c, env),
        CFormula::Or(g, h) => eval_compiled(g, c, env) || eval_compiled(h, c, env),
        CFormula::Implies(g, h) => !eval_compiled(g, c, env) || eval_compiled(h, c, env),
        CFormula::Iff(g, h) => eval_compiled(g, c, env) == eval_compiled(h, c, env),
        CFormula::Forall(g) => {
            for a in 0..c.d {
                env.push(a);
                let holds = eval_compiled(g, c, env);
                env.pop();
                if !holds {
                    return false;
                }
            }
            true
        }
        CFormula::Exists(g) => {
            for a in 0..c.d {
                env.push(a);
                let holds = eval_compiled(g, c, env);
                env.pop();
                if holds {
                    return true;
                }
            }
            false
        }
    }
}

/// A decision delivered by searching up to the fragment's model-size bound.
/// `Unsat` here is definitive, not merely "no model up to the bound": the
/// bound is exactly what makes exhaustive search complete for the fragment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedDecision {
    pub bound: usize,
    pub verdict: BoundVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundVerdict {
    Sat(FiniteStructure),
    Unsat,
}

impl BoundVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, BoundVerdict::Sat(_))
    }
}

impl BsSegment {
    /// Model-size bound for a universal segment: the number of its
    /// constants, at least 1.
    pub fn model_bound(&self) -> usize {
        self.constant_count().max(1)
    }

    /// Decides satisfiability by exhaustive search up to [`Self::model_bound`].
    pub fn decide_by_bound(&self, guard: u64) -> Result<BoundedDecision, OracleError> {
        let bound = self.model_bound();
        decide(&self.to_formula(), self.symbols(), bound, guard)
    }
}

impl BsExpression {
    /// Model-size bound for a prefix expression: constants plus one element
    /// per existential variable.
    pub fn model_bound(&self) -> usize {
        self.constant_count().max(1) + self.s()
    }

    pub fn decide_by_bound(&self, guard: u64) -> Result<BoundedDecision, OracleError> {
        let bound = self.model_bound();
        decide(&self.to_formula(), self.symbols(), bound, guard)
    }
}

fn decide(
    sentence: &Formula,
    symbols: &SymbolTable,
    bound: usize,
    guard: u64,
) -> Result<BoundedDecision, OracleError> {
    let verdict = match find_model(sentence, symbols, bound, guard)? {
        ModelSearch::Sat(model) => BoundVerdict::Sat(model),
        ModelSearch::UnsatUpTo(_) => BoundVerdict::Unsat,
    };
    Ok(BoundedDecision { bound, verdict })
}
