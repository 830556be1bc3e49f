//! Fragment recognition: splits a formula into an existential/universal
//! prefix and a matrix, checks the side conditions, and produces validated
//! fragment values for the rest of the pipeline.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::syntax::{Formula, SymbolTable};

/// A reason a formula fails fragment validation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// The quantifier structure is not an existential block followed by a
    /// universal block over a quantifier-free matrix.
    NotPrenexEA,
    ContainsEquality,
    ContainsFunction,
    /// A quantified variable that never occurs free in the matrix, either
    /// because it is unused or because an inner binder shadows it.
    RedundantQuantifiedVariable(String),
    /// A matrix variable that no prefix quantifier binds.
    UnboundVariable(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotPrenexEA => write!(f, "NotPrenexEA"),
            Violation::ContainsEquality => write!(f, "ContainsEquality"),
            Violation::ContainsFunction => write!(f, "ContainsFunction"),
            Violation::RedundantQuantifiedVariable(v) => {
                write!(f, "RedundantQuantifiedVariable({v})")
            }
            Violation::UnboundVariable(v) => write!(f, "UnboundVariable({v})"),
        }
    }
}

impl Serialize for Violation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A validated universal sentence `forall y1 .. yt . matrix` whose matrix is
/// quantifier-free, equality-free, and function-free, and whose free
/// variables are exactly the prefix variables.
///
/// `t = 0` is the degenerate ground case: the sentence is its own matrix and
/// the pipeline treats the singleton `{matrix}` as its ground instance set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BsSegment {
    univ_vars: Vec<String>,
    matrix: Formula,
    symbols: SymbolTable,
}

impl BsSegment {
    /// Validates the pieces; on failure returns every violated condition.
    pub fn new(
        univ_vars: Vec<String>,
        matrix: Formula,
        symbols: SymbolTable,
    ) -> Result<Self, Vec<Violation>> {
        let violations = check_matrix(&[], &univ_vars, &matrix);
        if violations.is_empty() {
            Ok(BsSegment {
                univ_vars,
                matrix,
                symbols,
            })
        } else {
            Err(violations)
        }
    }

    pub fn univ_vars(&self) -> &[String] {
        &self.univ_vars
    }

    pub fn matrix(&self) -> &Formula {
        &self.matrix
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn t(&self) -> usize {
        self.univ_vars.len()
    }

    /// Number of distinct constants in the matrix (before any automatic
    /// constant is introduced by the grounder).
    pub fn constant_count(&self) -> usize {
        self.matrix.constants().len()
    }

    /// The full sentence this segment denotes.
    pub fn to_formula(&self) -> Formula {
        self.univ_vars
            .iter()
            .rev()
            .fold(self.matrix.clone(), |f, y| Formula::forall(y.clone(), f))
    }

    /// The same sentence read as a prefix expression with an empty
    /// existential block.
    pub fn to_expression(&self) -> BsExpression {
        BsExpression {
            exist_vars: Vec::new(),
            univ_vars: self.univ_vars.clone(),
            matrix: self.matrix.clone(),
            symbols: self.symbols.clone(),
        }
    }
}

/// A validated prefix sentence `exists x1 .. xs . forall y1 .. yt . matrix`
/// with the same matrix restrictions as [`BsSegment`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BsExpression {
    exist_vars: Vec<String>,
    univ_vars: Vec<String>,
    matrix: Formula,
    symbols: SymbolTable,
}

impl BsExpression {
    pub fn new(
        exist_vars: Vec<String>,
        univ_vars: Vec<String>,
        matrix: Formula,
        symbols: SymbolTable,
    ) -> Result<Self, Vec<Violation>> {
        let violations = check_matrix(&exist_vars, &univ_vars, &matrix);
        if violations.is_empty() {
            Ok(BsExpression {
                exist_vars,
                univ_vars,
                matrix,
                symbols,
            })
        } else {
            Err(violations)
        }
    }

    pub fn exist_vars(&self) -> &[String] {
        &self.exist_vars
    }

    pub fn univ_vars(&self) -> &[String] {
        &self.univ_vars
    }

    pub fn matrix(&self) -> &Formula {
        &self.matrix
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn s(&self) -> usize {
        self.exist_vars.len()
    }

    pub fn t(&self) -> usize {
        self.univ_vars.len()
    }

    pub fn constant_count(&self) -> usize {
        self.matrix.constants().len()
    }

    pub fn to_formula(&self) -> Formula {
        let inner = self
            .univ_vars
            .iter()
            .rev()
            .fold(self.matrix.clone(), |f, y| Formula::forall(y.clone(), f));
        self.exist_vars
            .iter()
            .rev()
            .fold(inner, |f, x| Formula::exists(x.clone(), f))
    }
}

/// Outcome of classification. A segment is also a valid expression with an
/// empty existential block; [`BsSegment::to_expression`] recovers that
/// reading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FragmentClass {
    Sbs(BsSegment),
    Bs(BsExpression),
    General(Vec<Violation>),
}

impl FragmentClass {
    pub fn name(&self) -> &'static str {
        match self {
            FragmentClass::Sbs(_) => "SBS",
            FragmentClass::Bs(_) => "BS",
            FragmentClass::General(_) => "general",
        }
    }
}

/// Classifies a formula. Total: every formula is either a validated
/// segment, a validated expression, or `General` with the full list of
/// violated conditions.
pub fn classify(formula: &Formula, symbols: &SymbolTable) -> FragmentClass {
    // Peel the quantifier prefix off the spine.
    let mut exist_vars: Vec<String> = Vec::new();
    let mut univ_vars: Vec<String> = Vec::new();
    let mut violations: Vec<Violation> = Vec::new();
    let mut cursor = formula;
    loop {
        match cursor {
            Formula::Exists(x, body) => {
                if !univ_vars.is_empty() {
                    violations.push(Violation::NotPrenexEA);
                }
                exist_vars.push(x.clone());
                cursor = body;
            }
            Formula::Forall(y, body) => {
                univ_vars.push(y.clone());
                cursor = body;
            }
            _ => break,
        }
    }
    violations.dedup();
    let matrix = cursor.clone();
    if violations.is_empty() {
        match (
            exist_vars.is_empty(),
            BsExpression::new(exist_vars, univ_vars, matrix, symbols.clone()),
        ) {
            (true, Ok(expr)) => {
                return FragmentClass::Sbs(BsSegment {
                    univ_vars: expr.univ_vars,
                    matrix: expr.matrix,
                    symbols: expr.symbols,
                });
            }
            (false, Ok(expr)) => return FragmentClass::Bs(expr),
            (_, Err(vs)) => return FragmentClass::General(vs),
        }
    }
    // Prefix already broken: still report the matrix-level problems.
    violations.extend(check_matrix(&exist_vars, &univ_vars, &matrix));
    violations.sort();
    violations.dedup();
    FragmentClass::General(violations)
}

fn check_matrix(exist_vars: &[String], univ_vars: &[String], matrix: &Formula) -> Vec<Violation> {
    let mut violations = Vec::new();
    if !matrix.is_quantifier_free() {
        violations.push(Violation::NotPrenexEA);
    }
    if !matrix.is_equality_free() {
        violations.push(Violation::ContainsEquality);
    }
    if !matrix.is_function_free() {
        violations.push(Violation::ContainsFunction);
    }

    let free = matrix.free_vars();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for v in exist_vars.iter().chain(univ_vars) {
        // A duplicate prefix entry is shadowed by the later binder, so the
        // earlier one can never bind anything.
        if !seen.insert(v) || !free.contains(v) {
            violations.push(Violation::RedundantQuantifiedVariable(v.clone()));
        }
    }
    for v in &free {
        if !seen.contains(v.as_str()) {
            violations.push(Violation::UnboundVariable(v.clone()));
        }
    }
    violations.sort();
    violations.dedup();
    violations
}
