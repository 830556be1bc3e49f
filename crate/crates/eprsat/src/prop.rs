//! Propositional layer: formulas over negation and disjunction, assignment
//! evaluation, clause-form conversion, a DPLL solver, and an exhaustive
//! truth-table solver used as the solver's oracle on small inputs.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

/// A propositional formula. Only negation and disjunction exist at this
/// layer; conjunction, implication, and biconditional are desugared before
/// first-order formulas are translated down (see
/// [`crate::syntax::Formula::desugared`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropFormula {
    /// 1-based variable index.
    Var(u32),
    Not(Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn var(index: u32) -> Self {
        assert!(index >= 1, "variable indices are 1-based");
        PropFormula::Var(index)
    }

    // Constructor, not `ops::Not`; formulas are negated by wrapping.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: PropFormula) -> Self {
        PropFormula::Not(Box::new(f))
    }

    pub fn or(f: PropFormula, g: PropFormula) -> Self {
        PropFormula::Or(Box::new(f), Box::new(g))
    }

    /// The set of variable indices occurring in the formula.
    pub fn vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            PropFormula::Var(i) => {
                out.insert(*i);
            }
            PropFormula::Not(f) => f.collect_vars(out),
            PropFormula::Or(f, g) => {
                f.collect_vars(out);
                g.collect_vars(out);
            }
        }
    }

    pub fn max_var(&self) -> u32 {
        match self {
            PropFormula::Var(i) => *i,
            PropFormula::Not(f) => f.max_var(),
            PropFormula::Or(f, g) => f.max_var().max(g.max_var()),
        }
    }
}

/// A finite truth-value assignment, total over whatever formulas it is used
/// to evaluate.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<u32, bool>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, var: u32, value: bool) {
        self.0.insert(var, value);
    }

    pub fn get(&self, var: u32) -> Option<bool> {
        self.0.get(&var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.0.iter().map(|(&v, &b)| (v, b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(u32, bool)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (u32, bool)>>(iter: T) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable p{0} has no assigned value")]
    UnassignedVariable(u32),
}

/// Evaluates `f` under `b`, which must be total over the variables of `f`.
pub fn evaluate(f: &PropFormula, b: &Assignment) -> Result<bool, EvalError> {
    match f {
        PropFormula::Var(i) => b.get(*i).ok_or(EvalError::UnassignedVariable(*i)),
        PropFormula::Not(g) => Ok(!evaluate(g, b)?),
        PropFormula::Or(g, h) => Ok(evaluate(g, b)? || evaluate(h, b)?),
    }
}

/// Clause form. Literals are nonzero integers whose sign is the polarity;
/// clauses never contain a literal and its negation (such tautologies are
/// dropped at construction), and duplicate literals are merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    num_vars: u32,
    clauses: Vec<Vec<i32>>,
}

impl Cnf {
    /// Normalizes the given clauses: deduplicates literals, drops
    /// tautological clauses, and checks literal bounds.
    pub fn new(num_vars: u32, clauses: Vec<Vec<i32>>) -> Self {
        let mut kept = Vec::with_capacity(clauses.len());
        for clause in clauses {
            let mut lits: Vec<i32> = Vec::with_capacity(clause.len());
            let mut tautology = false;
            for lit in clause {
                assert!(lit != 0, "literal 0 is reserved for the DIMACS terminator");
                assert!(
                    lit.unsigned_abs() <= num_vars,
                    "literal {lit} out of range for {num_vars} variables"
                );
                if lits.contains(&-lit) {
                    tautology = true;
                    break;
                }
                if !lits.contains(&lit) {
                    lits.push(lit);
                }
            }
            if !tautology {
                kept.push(lits);
            }
        }
        Cnf {
            num_vars,
            clauses: kept,
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Clause multiset, each clause sorted, for order-insensitive
    /// comparison.
    pub fn clause_multiset(&self) -> Vec<Vec<i32>> {
        let mut normalized: Vec<Vec<i32>> = self
            .clauses
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        normalized.sort();
        normalized
    }
}

/// Reads a formula as a flat clause (a disjunction of literals, where a
/// literal is a variable under any number of negations). Returns `None` if
/// any disjunct is not a literal.
fn as_clause(f: &PropFormula) -> Option<Vec<i32>> {
    fn literal(f: &PropFormula) -> Option<i32> {
        let mut negated = false;
        let mut cur = f;
        loop {
            match cur {
                PropFormula::Var(i) => {
                    let v = *i as i32;
                    return Some(if negated { -v } else { v });
                }
                PropFormula::Not(g) => {
                    negated = !negated;
                    cur = g;
                }
                PropFormula::Or(..) => return None,
            }
        }
    }
    fn walk(f: &PropFormula, out: &mut Vec<i32>) -> bool {
        match f {
            PropFormula::Or(g, h) => walk(g, out) && walk(h, out),
            other => match literal(other) {
                Some(lit) => {
                    out.push(lit);
                    true
                }
                None => false,
            },
        }
    }
    let mut lits = Vec::new();
    if walk(f, &mut lits) {
        Some(lits)
    } else {
        None
    }
}

/// Converts a list of formulas into one equisatisfiable CNF.
///
/// Formulas already in clause shape pass through as plain clauses. Anything
/// else gets auxiliary definition variables, numbered above every input
/// variable, with full two-sided defining clauses, so a satisfying CNF
/// assignment restricted to the input variables satisfies every input
/// formula.
pub fn to_cnf(formulas: &[PropFormula]) -> Cnf {
    let max_input = formulas.iter().map(|f| f.max_var()).max().unwrap_or(0);
    let mut next_aux = max_input + 1;
    let mut clauses = Vec::new();

    for f in formulas {
        if let Some(clause) = as_clause(f) {
            clauses.push(clause);
            continue;
        }
        let root = define(f, &mut next_aux, &mut clauses);
        clauses.push(vec![root]);
    }

    Cnf::new(next_aux - 1, clauses)
}

/// Returns a literal equivalent to `f`, emitting defining clauses for every
/// disjunction node. Negations fold into the literal.
fn define(f: &PropFormula, next_aux: &mut u32, clauses: &mut Vec<Vec<i32>>) -> i32 {
    match f {
        PropFormula::Var(i) => *i as i32,
        PropFormula::Not(g) => -define(g, next_aux, clauses),
        PropFormula::Or(g, h) => {
            let a = define(g, next_aux, clauses);
            let b = define(h, next_aux, clauses);
            let v = *next_aux as i32;
            *next_aux += 1;
            // v <-> (a | b)
            clauses.push(vec![-v, a, b]);
            clauses.push(vec![v, -a]);
            clauses.push(vec![v, -b]);
            v
        }
    }
}

/// Solver outcome. A SAT verdict carries a satisfying assignment, total
/// over all variables of the instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat(Assignment),
    Unsat,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }
}

/// Complete DPLL search: unit propagation and pure-literal elimination to a
/// fixpoint, then branching on the smallest-index unassigned variable with
/// true tried first, so verdicts and witnesses are deterministic.
pub fn dpll_solve(cnf: &Cnf) -> Verdict {
    let mut assignment = vec![None; cnf.num_vars() as usize + 1];
    if search(cnf.clauses().to_vec(), &mut assignment) {
        let full = (1..=cnf.num_vars())
            .map(|v| (v, assignment[v as usize].unwrap_or(true)))
            .collect();
        Verdict::Sat(full)
    } else {
        Verdict::Unsat
    }
}

fn search(mut clauses: Vec<Vec<i32>>, assignment: &mut Vec<Option<bool>>) -> bool {
    loop {
        // Unit propagation.
        let mut changed = false;
        let mut unit = None;
        for clause in &clauses {
            if clause.is_empty() {
                return false;
            }
            if clause.len() == 1 {
                unit = Some(clause[0]);
                break;
            }
        }
        if let Some(lit) = unit {
            assignment[lit.unsigned_abs() as usize] = Some(lit > 0);
            clauses = simplify(&clauses, lit);
            changed = true;
        } else {
            // Pure-literal elimination, smallest variable first.
            let mut polarity: BTreeMap<u32, (bool, bool)> = BTreeMap::new();
            for clause in &clauses {
                for &lit in clause {
                    let entry = polarity.entry(lit.unsigned_abs()).or_insert((false, false));
                    if lit > 0 {
                        entry.0 = true;
                    } else {
                        entry.1 = true;
                    }
                }
            }
            if let Some((&var, &(pos, _))) = polarity.iter().find(|(_, &(pos, neg))| pos != neg) {
                let lit = if pos { var as i32 } else { -(var as i32) };
                assignment[var as usize] = Some(lit > 0);
                clauses = simplify(&clauses, lit);
                changed = true;
            }
        }
        if clauses.is_empty() {
            return true;
        }
        if !changed {
            break;
        }
    }

    // Branch on the smallest unassigned variable that still occurs.
    let var = clauses
        .iter()
        .flat_map(|c| c.iter().map(|l| l.unsigned_abs()))
        .min()
        .expect("non-empty clause set");
    for value in [true, false] {
        let lit = if value { var as i32 } else { -(var as i32) };
        assignment[var as usize] = Some(value);
        if search(simplify(&clauses, lit), assignment) {
            return true;
        }
    }
    assignment[var as usize] = None;
    false
}

/// Applies a literal: drops satisfied clauses and strips the falsified
/// literal from the rest.
fn simplify(clauses: &[Vec<i32>], lit: i32) -> Vec<Vec<i32>> {
    let mut out = Vec::with_capacity(clauses.len());
    for clause in clauses {
        if clause.contains(&lit) {
            continue;
        }
        if clause.contains(&-lit) {
            out.push(clause.iter().copied().filter(|&l| l != -lit).collect());
        } else {
            out.push(clause.clone());
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TruthTableError {
    #[error("{count} distinct variables exceed the truth-table limit of {max}")]
    TooManyVariables { count: usize, max: usize },
}

pub const TRUTH_TABLE_MAX_VARS: usize = 24;

/// Decides satisfiability of a formula set by exhausting all assignments
/// over its variables. Guarded to at most [`TRUTH_TABLE_MAX_VARS`] distinct
/// variables.
pub fn truth_table_solve(formulas: &[PropFormula]) -> Result<Verdict, TruthTableError> {
    let vars: Vec<u32> = {
        let mut all = BTreeSet::new();
        for f in formulas {
            f.collect_vars(&mut all);
        }
        all.into_iter().collect()
    };
    if vars.len() > TRUTH_TABLE_MAX_VARS {
        return Err(TruthTableError::TooManyVariables {
            count: vars.len(),
            max: TRUTH_TABLE_MAX_VARS,
        });
    }
    for pattern in 0u64..(1u64 << vars.len()) {
        let assignment: Assignment = vars
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, pattern >> i & 1 == 1))
            .collect();
        let all_true = formulas
            .iter()
            .all(|f| evaluate(f, &assignment).expect("assignment is total"));
        if all_true {
            return Ok(Verdict::Sat(assignment));
        }
    }
    Ok(Verdict::Unsat)
}
