//! DIMACS CNF interchange. The emitter records the ground-atom meaning of
//! each variable in leading comment lines; the reader ignores comments, so
//! emit followed by read preserves the clause multiset.

use std::fmt::Write as _;

use thiserror::Error;

use crate::grounding::AtomTable;
use crate::prop::Cnf;

/// Renders a CNF in DIMACS format. Comment lines `c <index> <ground atom>`
/// document the variable numbering for every atom in the table; auxiliary
/// variables introduced by clause conversion have no atom and get no
/// comment line.
pub fn emit_dimacs(cnf: &Cnf, atoms: &AtomTable) -> String {
    let mut out = String::new();
    for (index, atom) in atoms.iter() {
        writeln!(out, "c {index} {atom}").unwrap();
    }
    writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.clauses().len()).unwrap();
    for clause in cnf.clauses() {
        for lit in clause {
            write!(out, "{lit} ").unwrap();
        }
        writeln!(out, "0").unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {0}: missing `p cnf <vars> <clauses>` header")]
    MissingHeader(usize),
    #[error("line {0}: malformed header")]
    MalformedHeader(usize),
    #[error("line {line}: bad literal `{token}`")]
    BadLiteral { line: usize, token: String },
    #[error("line {line}: literal {lit} out of range for {num_vars} variables")]
    LiteralOutOfRange {
        line: usize,
        lit: i32,
        num_vars: u32,
    },
    #[error("clause count mismatch: header says {expected}, found {found}")]
    ClauseCount { expected: usize, found: usize },
}

/// Parses DIMACS text. Comment lines are skipped; clauses may span lines
/// and are terminated by `0`.
pub fn read_dimacs(text: &str) -> Result<Cnf, DimacsError> {
    let mut num_vars: Option<u32> = None;
    let mut expected_clauses = 0usize;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut open_clause = false;

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            let mut parts = line.split_whitespace();
            let (p, kind) = (parts.next(), parts.next());
            if p != Some("p") || kind != Some("cnf") {
                return Err(DimacsError::MalformedHeader(lineno));
            }
            let vars = parts
                .next()
                .and_then(|s| s.parse::<u32>().ok())
                .ok_or(DimacsError::MalformedHeader(lineno))?;
            let count = parts
                .next()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or(DimacsError::MalformedHeader(lineno))?;
            num_vars = Some(vars);
            expected_clauses = count;
            continue;
        }
        let num_vars = num_vars.ok_or(DimacsError::MissingHeader(lineno))?;
        for token in line.split_whitespace() {
            let lit: i32 = token.parse().map_err(|_| DimacsError::BadLiteral {
                line: lineno,
                token: token.to_string(),
            })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                open_clause = false;
            } else {
                if lit.unsigned_abs() > num_vars {
                    return Err(DimacsError::LiteralOutOfRange {
                        line: lineno,
                        lit,
                        num_vars,
                    });
                }
                current.push(lit);
                open_clause = true;
            }
        }
    }
    let num_vars = num_vars.ok_or(DimacsError::MissingHeader(1))?;
    if open_clause {
        clauses.push(current);
    }
    if clauses.len() != expected_clauses {
        return Err(DimacsError::ClauseCount {
            expected: expected_clauses,
            found: clauses.len(),
        });
    }
    Ok(Cnf::new(num_vars, clauses))
}
