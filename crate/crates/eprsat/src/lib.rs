//! A satisfiability toolkit for the Bernays–Schönfinkel fragment of
//! first-order logic (prefix `exists* forall*`, no functions, no equality)
//! and its universal-only segment.
//!
//! The pipeline: parse a formula, verify fragment membership, replace the
//! existential prefix by witness constants, enumerate the ground instances
//! of the universal matrix over the Herbrand universe, translate ground
//! atoms to propositional variables, and decide the resulting clause set
//! with a DPLL solver. A brute-force finite-model search provides an
//! independent verdict: the fragments have the finite-model property, so
//! searching up to a small bound (the constant count, plus one element per
//! existential witness) is complete.
//!
//! Two witness policies are supported. `Skolem` introduces fresh constants
//! and is sound and complete. `PaperLiteral` draws witnesses only from the
//! constants already in the sentence; it is sound but refutes
//! `exists x . P(x) & ~P(a)`, which is satisfiable — the policy exists to
//! make that divergence reproducible and testable.
//!
//! A small padding lab rounds out the toolkit: it re-encodes files to an
//! exponential length `2^(n^k)` with a reserved pseudo-blank byte and runs
//! the same pipeline over padded inputs, measuring the construction at the
//! sizes where it physically fits. No complexity-theoretic conclusion is
//! drawn from any of this; see the README.
//!
//! Every operation is a pure function over immutable values; everything
//! here is safe to use from multiple threads without coordination.
//!
//! The `examples/` directory has one runnable program per capability:
//! classification, grounding, solving, model search, policy divergence,
//! padding, pipelines, and seeded benchmarks. The `eprsat` binary wires the
//! same entry points into a batch CLI.

pub mod classify;
pub mod dimacs;
pub mod generator;
pub mod grounding;
pub mod oracle;
pub mod padding;
pub mod parser;
pub mod pipeline;
mod printer;
pub mod prop;
pub mod report;
pub mod syntax;

pub use classify::{classify, BsExpression, BsSegment, FragmentClass, Violation};
pub use grounding::{
    expression_universe, ground, pi_translate, segment_universe, skolemize, AtomTable,
    GroundInstanceSet, HerbrandUniverse, WitnessPolicy, DEFAULT_INSTANCE_CAP,
};
pub use oracle::{
    find_model, fo_evaluate, BoundVerdict, FiniteStructure, ModelSearch, DEFAULT_ENUMERATION_GUARD,
};
pub use padding::{pad, unpad, PaddedBlob, DEFAULT_MAX_BYTES, PSEUDO_BLANK};
pub use parser::{parse, ParseError, SourceFormula};
pub use pipeline::{
    check_text, ground_artifacts, run_pipeline, solve_fragment, solve_text, PipelineError,
    PipelineOptions, SolveOptions, SolveRun,
};
pub use prop::{
    dpll_solve, evaluate, to_cnf, truth_table_solve, Assignment, Cnf, PropFormula, Verdict,
};
pub use syntax::{Formula, SymbolTable, Term};
