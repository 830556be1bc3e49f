//! End-to-end drivers: classify, discharge the existential prefix per
//! policy, ground, translate, convert to clauses, solve, and optionally
//! cross-check the finite-model oracle. Also the padded file pipeline.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use thiserror::Error;

use crate::classify::{classify, BsExpression, BsSegment, FragmentClass, Violation};
use crate::dimacs::emit_dimacs;
use crate::grounding::{
    expression_universe, ground, pi_translate, segment_universe, skolemize, tuples, AtomTable,
    GroundError, HerbrandUniverse, WitnessPolicy, DEFAULT_INSTANCE_CAP,
};
use crate::oracle::{BoundVerdict, FiniteStructure, OracleError, DEFAULT_ENUMERATION_GUARD};
use crate::padding::{pad_to_length, unpad, PaddingError};
use crate::parser::{parse, ParseError};
use crate::prop::{dpll_solve, to_cnf, Assignment, Verdict};
use crate::report::{OracleReport, Report, TimingsMs};
use crate::syntax::Formula;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub policy: WitnessPolicy,
    pub instance_cap: u64,
    pub enumeration_guard: u64,
    pub oracle_check: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            policy: WitnessPolicy::Skolem,
            instance_cap: DEFAULT_INSTANCE_CAP,
            enumeration_guard: DEFAULT_ENUMERATION_GUARD,
            oracle_check: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("read: {0}")]
    Read(#[source] std::io::Error),
    #[error("unpad: {0}")]
    Unpad(#[from] PaddingError),
    #[error("decode: input is not valid UTF-8 after unpadding")]
    Decode,
    #[error("parse: {0}")]
    Parse(#[from] ParseError),
    #[error("classify: not in the decidable fragments: {}", format_violations(.0))]
    NotFragment(Vec<Violation>),
    #[error("ground: {0}")]
    Ground(#[from] GroundError),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error("grounding with the paper-literal policy produces one ground set per witness tuple; use `solve` or `pipeline`")]
    PaperLiteralGround,
    #[error("write: {0}")]
    Write(#[source] std::io::Error),
}

fn format_violations(vs: &[Violation]) -> String {
    let names: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    names.join(", ")
}

impl PipelineError {
    /// Stable process exit code for this failure. Guard refusals are 4,
    /// everything else is an input error.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Ground(GroundError::ExplosionGuard { .. }) => 4,
            PipelineError::Oracle(OracleError::EnumerationGuard { .. }) => 4,
            PipelineError::Unpad(PaddingError::Overflow { .. }) => 4,
            _ => 2,
        }
    }
}

/// Result of a full solve, with everything the text and JSON front ends
/// print.
#[derive(Debug, Clone)]
pub struct SolveRun {
    pub class: &'static str,
    pub s: usize,
    pub t: usize,
    /// Source-universe size (automatic constant included, witness constants
    /// not).
    pub m: usize,
    pub policy: WitnessPolicy,
    pub sat: bool,
    /// Ground-atom truth values backing a SAT verdict.
    pub witness: Option<BTreeMap<String, bool>>,
    /// Constants chosen for the existential prefix under the paper-literal
    /// policy.
    pub witness_constants: Option<Vec<String>>,
    pub ground_count: u64,
    pub prop_var_count: usize,
    pub parse_ms: f64,
    pub ground_ms: f64,
    pub translate_ms: f64,
    pub solve_ms: f64,
    pub oracle_ms: f64,
    pub oracle: Option<OracleOutcome>,
}

#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub sat: bool,
    pub bound: usize,
    pub model: Option<FiniteStructure>,
    pub agrees: bool,
}

impl SolveRun {
    pub fn verdict_str(&self) -> &'static str {
        if self.sat {
            "SAT"
        } else {
            "UNSAT"
        }
    }

    /// Exit code for the solve commands: 0 SAT, 1 UNSAT, 3 when an oracle
    /// cross-check disagrees.
    pub fn exit_code(&self) -> i32 {
        if let Some(oracle) = &self.oracle {
            if !oracle.agrees {
                return 3;
            }
        }
        if self.sat {
            0
        } else {
            1
        }
    }

    pub fn report(&self) -> Report {
        Report {
            class: self.class.to_string(),
            s: self.s,
            t: self.t,
            m: self.m,
            ground_count: self.ground_count,
            prop_var_count: self.prop_var_count,
            verdict: self.verdict_str().to_string(),
            witness: self.witness.clone(),
            witness_constants: self.witness_constants.clone(),
            policy: self.policy.to_string(),
            timings_ms: TimingsMs {
                parse: self.parse_ms,
                ground: self.ground_ms,
                translate: self.translate_ms,
                solve: self.solve_ms,
                unpad: None,
                oracle: self.oracle.as_ref().map(|_| self.oracle_ms),
            },
            n: None,
            padded_length: None,
            ms_per_padded_byte: None,
            oracle: self.oracle.as_ref().map(|o| OracleReport {
                verdict: if o.sat { "SAT" } else { "UNSAT" }.to_string(),
                bound: o.bound,
                agrees: o.agrees,
                model: o.model.clone(),
            }),
        }
    }
}

/// Parses and solves a formula given as text.
pub fn solve_text(text: &str, options: &SolveOptions) -> Result<SolveRun, PipelineError> {
    let started = Instant::now();
    let (formula, symbols) = parse(text)?;
    let parse_ms = elapsed_ms(started);
    let fragment = match classify(&formula, &symbols) {
        FragmentClass::General(vs) => return Err(PipelineError::NotFragment(vs)),
        other => other,
    };
    let mut run = solve_fragment(&fragment, options)?;
    run.parse_ms = parse_ms;
    Ok(run)
}

/// Solves an already classified fragment.
pub fn solve_fragment(
    fragment: &FragmentClass,
    options: &SolveOptions,
) -> Result<SolveRun, PipelineError> {
    let mut run = match fragment {
        FragmentClass::Sbs(seg) => solve_segment(seg, options)?,
        FragmentClass::Bs(expr) => match options.policy {
            WitnessPolicy::Skolem => solve_skolem(expr, options)?,
            WitnessPolicy::PaperLiteral => solve_paper_literal(expr, options)?,
        },
        FragmentClass::General(vs) => return Err(PipelineError::NotFragment(vs.clone())),
    };

    if options.oracle_check {
        let started = Instant::now();
        let decision = match fragment {
            FragmentClass::Sbs(seg) => seg.decide_by_bound(options.enumeration_guard)?,
            FragmentClass::Bs(expr) => expr.decide_by_bound(options.enumeration_guard)?,
            FragmentClass::General(_) => unreachable!(),
        };
        run.oracle_ms = elapsed_ms(started);
        let (sat, model) = match decision.verdict {
            BoundVerdict::Sat(model) => (true, Some(model)),
            BoundVerdict::Unsat => (false, None),
        };
        run.oracle = Some(OracleOutcome {
            sat,
            bound: decision.bound,
            model,
            agrees: sat == run.sat,
        });
    }
    Ok(run)
}

fn solve_segment(seg: &BsSegment, options: &SolveOptions) -> Result<SolveRun, PipelineError> {
    let universe = segment_universe(seg);
    let solved = ground_and_solve(seg, &universe, options.instance_cap)?;
    Ok(SolveRun {
        class: "SBS",
        s: 0,
        t: seg.t(),
        m: universe.source_constants().len(),
        policy: options.policy,
        sat: solved.sat,
        witness: solved.witness,
        witness_constants: None,
        ground_count: solved.instance_count,
        prop_var_count: solved.atom_count,
        parse_ms: 0.0,
        ground_ms: solved.ground_ms,
        translate_ms: solved.translate_ms,
        solve_ms: solved.solve_ms,
        oracle_ms: 0.0,
        oracle: None,
    })
}

fn solve_skolem(expr: &BsExpression, options: &SolveOptions) -> Result<SolveRun, PipelineError> {
    let universe = expression_universe(expr, WitnessPolicy::Skolem);
    let seg = skolemize(expr);
    let solved = ground_and_solve(&seg, &universe, options.instance_cap)?;
    Ok(SolveRun {
        class: "BS",
        s: expr.s(),
        t: expr.t(),
        m: universe.source_constants().len(),
        policy: options.policy,
        sat: solved.sat,
        witness: solved.witness,
        witness_constants: None,
        ground_count: solved.instance_count,
        prop_var_count: solved.atom_count,
        parse_ms: 0.0,
        ground_ms: solved.ground_ms,
        translate_ms: solved.translate_ms,
        solve_ms: solved.solve_ms,
        oracle_ms: 0.0,
        oracle: None,
    })
}

/// The literal reading of the existential prefix: witnesses range over the
/// sentence's own constants only, and every tuple is tried. SAT as soon as
/// one choice grounds to a satisfiable set; sound, but incomplete where a
/// satisfiable sentence needs a witness outside its own constants.
fn solve_paper_literal(
    expr: &BsExpression,
    options: &SolveOptions,
) -> Result<SolveRun, PipelineError> {
    let universe = expression_universe(expr, WitnessPolicy::PaperLiteral);
    let names: Vec<&str> = universe.names().collect();
    let m = names.len();
    let total_work = (m as u128)
        .checked_pow((expr.s() + expr.t()) as u32)
        .unwrap_or(u128::MAX);
    if total_work > options.instance_cap as u128 {
        return Err(PipelineError::Ground(GroundError::ExplosionGuard {
            required: total_work,
            cap: options.instance_cap,
        }));
    }

    let mut ground_ms = 0.0;
    let mut translate_ms = 0.0;
    let mut solve_ms = 0.0;
    let mut last = None;
    for tuple in tuples(&names, expr.s()) {
        let mapping: BTreeMap<String, String> = expr
            .exist_vars()
            .iter()
            .cloned()
            .zip(tuple.iter().map(|s| s.to_string()))
            .collect();
        let matrix = crate::grounding::substitute_partial(expr.matrix(), &mapping);
        let seg = BsSegment::new(expr.univ_vars().to_vec(), matrix, expr.symbols().clone())
            .expect("witness substitution preserves validity");
        let solved = ground_and_solve(&seg, &universe, options.instance_cap)?;
        ground_ms += solved.ground_ms;
        translate_ms += solved.translate_ms;
        solve_ms += solved.solve_ms;
        let chosen: Vec<String> = tuple.iter().map(|s| s.to_string()).collect();
        if solved.sat {
            return Ok(SolveRun {
                class: "BS",
                s: expr.s(),
                t: expr.t(),
                m,
                policy: options.policy,
                sat: true,
                witness: solved.witness,
                witness_constants: Some(chosen),
                ground_count: solved.instance_count,
                prop_var_count: solved.atom_count,
                parse_ms: 0.0,
                ground_ms,
                translate_ms,
                solve_ms,
                oracle_ms: 0.0,
                oracle: None,
            });
        }
        last = Some((solved.instance_count, solved.atom_count));
    }
    let (instance_count, atom_count) = last.expect("at least one witness tuple is always tried");
    Ok(SolveRun {
        class: "BS",
        s: expr.s(),
        t: expr.t(),
        m,
        policy: options.policy,
        sat: false,
        witness: None,
        witness_constants: None,
        ground_count: instance_count,
        prop_var_count: atom_count,
        parse_ms: 0.0,
        ground_ms,
        translate_ms,
        solve_ms,
        oracle_ms: 0.0,
        oracle: None,
    })
}

struct GroundSolve {
    sat: bool,
    witness: Option<BTreeMap<String, bool>>,
    instance_count: u64,
    atom_count: usize,
    ground_ms: f64,
    translate_ms: f64,
    solve_ms: f64,
}

fn ground_and_solve(
    seg: &BsSegment,
    universe: &HerbrandUniverse,
    cap: u64,
) -> Result<GroundSolve, PipelineError> {
    let started = Instant::now();
    let instances = ground(seg, universe, cap)?;
    let ground_ms = elapsed_ms(started);

    let started = Instant::now();
    let (props, atoms) = pi_translate(&instances);
    let cnf = to_cnf(&props);
    let translate_ms = elapsed_ms(started);

    let started = Instant::now();
    let verdict = dpll_solve(&cnf);
    let solve_ms = elapsed_ms(started);

    let (sat, witness) = match verdict {
        Verdict::Sat(assignment) => (true, Some(atom_witness(&assignment, &atoms))),
        Verdict::Unsat => (false, None),
    };
    Ok(GroundSolve {
        sat,
        witness,
        instance_count: instances.len() as u64,
        atom_count: atoms.len(),
        ground_ms,
        translate_ms,
        solve_ms,
    })
}

/// Projects a propositional assignment back through the atom table,
/// dropping auxiliary clause-conversion variables.
pub fn atom_witness(assignment: &Assignment, atoms: &AtomTable) -> BTreeMap<String, bool> {
    atoms
        .iter()
        .map(|(index, atom)| (atom.to_string(), assignment.get(index).unwrap_or(true)))
        .collect()
}

/// Grounding artifacts for file output: the ground-set listing and the
/// DIMACS rendering of its clause form.
#[derive(Debug, Clone)]
pub struct GroundArtifacts {
    pub universe: HerbrandUniverse,
    pub ground_text: String,
    pub dimacs: String,
    pub instance_count: u64,
    pub atom_count: usize,
}

pub fn ground_artifacts(
    fragment: &FragmentClass,
    policy: WitnessPolicy,
    cap: u64,
) -> Result<GroundArtifacts, PipelineError> {
    let (seg, universe) = match fragment {
        FragmentClass::Sbs(seg) => (seg.clone(), segment_universe(seg)),
        FragmentClass::Bs(expr) => {
            if policy == WitnessPolicy::PaperLiteral && expr.s() > 0 {
                return Err(PipelineError::PaperLiteralGround);
            }
            (
                skolemize(expr),
                expression_universe(expr, WitnessPolicy::Skolem),
            )
        }
        FragmentClass::General(vs) => return Err(PipelineError::NotFragment(vs.clone())),
    };
    let instances = ground(&seg, &universe, cap)?;
    let (props, atoms) = pi_translate(&instances);
    let cnf = to_cnf(&props);
    Ok(GroundArtifacts {
        ground_text: instances.to_text(),
        dimacs: emit_dimacs(&cnf, &atoms),
        instance_count: instances.len() as u64,
        atom_count: atoms.len(),
        universe,
    })
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub solve: SolveOptions,
    /// Treat the input file as a padded blob and unpad it first.
    pub padded: bool,
    pub k: u32,
    /// When set, write the ground-set file here (padded to the input's
    /// total length on padded runs).
    pub ground_out: Option<std::path::PathBuf>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            solve: SolveOptions::default(),
            padded: false,
            k: 1,
            ground_out: None,
        }
    }
}

/// Runs the full file pipeline: read, unpad when requested, parse,
/// classify, solve per policy, optional oracle cross-check, optional
/// artifact emission. The report records the wall-clock of every stage and,
/// on padded runs, the total time normalized by the padded length.
pub fn run_pipeline(path: &Path, options: &PipelineOptions) -> Result<Report, PipelineError> {
    let total_started = Instant::now();
    let raw = std::fs::read(path).map_err(PipelineError::Read)?;

    let (payload, unpad_ms, padded_length) = if options.padded {
        let started = Instant::now();
        let payload = unpad(&raw, options.k)?;
        (payload, Some(elapsed_ms(started)), Some(raw.len() as u64))
    } else {
        (raw, None, None)
    };
    let n = payload.len() as u64;

    let started = Instant::now();
    let text = std::str::from_utf8(&payload).map_err(|_| PipelineError::Decode)?;
    let (formula, symbols) = parse(text)?;
    let parse_ms = elapsed_ms(started);

    let fragment = match classify(&formula, &symbols) {
        FragmentClass::General(vs) => return Err(PipelineError::NotFragment(vs)),
        other => other,
    };
    let run = solve_fragment(&fragment, &options.solve)?;

    if let Some(out) = &options.ground_out {
        let artifacts =
            ground_artifacts(&fragment, options.solve.policy, options.solve.instance_cap)?;
        let mut bytes = artifacts.ground_text.into_bytes();
        if let Some(total) = padded_length {
            bytes = pad_to_length(bytes, total);
        }
        std::fs::write(out, bytes).map_err(PipelineError::Write)?;
    }

    let mut report = run.report();
    report.timings_ms.parse = parse_ms;
    report.timings_ms.unpad = unpad_ms;
    report.n = Some(n);
    report.padded_length = padded_length;
    if let Some(total) = padded_length {
        report.ms_per_padded_byte = Some(elapsed_ms(total_started) / total as f64);
    }
    Ok(report)
}

fn elapsed_ms(started: Instant) -> f64 {
    started.elapsed().as_secs_f64() * 1e3
}

/// Classification summary used by the `check` command.
pub fn check_text(text: &str) -> Result<(Formula, FragmentClass), ParseError> {
    let (formula, symbols) = parse(text)?;
    let fragment = classify(&formula, &symbols);
    Ok((formula, fragment))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(text: &str) -> SolveRun {
        solve_text(text, &SolveOptions::default()).unwrap()
    }

    #[test]
    fn segment_sat_with_witness() {
        let run = solve("forall y . P(y) | Q(a)");
        assert!(run.sat);
        assert_eq!(run.class, "SBS");
        assert_eq!(run.m, 1);
        assert_eq!(run.ground_count, 1);
        let witness = run.witness.unwrap();
        assert!(witness["P(a)"] || witness["Q(a)"]);
    }

    #[test]
    fn segment_unsat() {
        let run = solve("forall y . P(y) & ~P(a)");
        assert!(!run.sat);
        assert_eq!(run.ground_count, 1);
    }

    #[test]
    fn ground_count_is_m_to_the_t() {
        let run = solve("forall y1 y2 . R(y1,y2) | S(a) | S(b)");
        assert_eq!(run.ground_count, 4);
        assert_eq!(run.m, 2);
        assert_eq!(run.t, 2);
    }

    #[test]
    fn policies_diverge_on_the_witness_formula() {
        let text = "exists x . P(x) & ~P(a)";
        let skolem = solve_text(text, &SolveOptions::default()).unwrap();
        assert!(skolem.sat);

        let literal = solve_text(
            text,
            &SolveOptions {
                policy: WitnessPolicy::PaperLiteral,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert!(!literal.sat);
    }

    #[test]
    fn paper_literal_finds_existing_witness() {
        let run = solve_text(
            "exists x . P(x) & Q(a)",
            &SolveOptions {
                policy: WitnessPolicy::PaperLiteral,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert!(run.sat);
        assert_eq!(run.witness_constants, Some(vec!["a".to_string()]));
    }

    #[test]
    fn oracle_check_agrees_on_segments() {
        let options = SolveOptions {
            oracle_check: true,
            ..SolveOptions::default()
        };
        for text in [
            "forall y . P(y) | Q(a)",
            "forall y . P(y) & ~P(a)",
            "forall y1 y2 . R(y1,y2) -> R(y2,y1)",
            "P(a) & ~Q(a)",
        ] {
            let run = solve_text(text, &options).unwrap();
            let oracle = run.oracle.as_ref().unwrap();
            assert!(oracle.agrees, "oracle disagreed on {text}");
        }
    }

    #[test]
    fn oracle_check_flags_paper_literal_divergence() {
        let run = solve_text(
            "exists x . P(x) & ~P(a)",
            &SolveOptions {
                policy: WitnessPolicy::PaperLiteral,
                oracle_check: true,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        let oracle = run.oracle.as_ref().unwrap();
        assert!(oracle.sat);
        assert!(!run.sat);
        assert!(!oracle.agrees);
        assert_eq!(run.exit_code(), 3);
    }

    #[test]
    fn general_input_is_refused() {
        let err = solve_text("forall y . y = a", &SolveOptions::default()).unwrap_err();
        assert!(matches!(err, PipelineError::NotFragment(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn explosion_guard_maps_to_exit_4() {
        let options = SolveOptions {
            instance_cap: 3,
            ..SolveOptions::default()
        };
        let err = solve_text("forall y1 y2 . R(y1,y2) | S(a) | S(b)", &options).unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }

    #[test]
    fn ground_artifacts_for_segment() {
        let (_, fragment) = check_text("forall y1 y2 . R(y1,y2) | S(a) | S(b)").unwrap();
        let artifacts =
            ground_artifacts(&fragment, WitnessPolicy::Skolem, DEFAULT_INSTANCE_CAP).unwrap();
        assert_eq!(artifacts.instance_count, 4);
        assert_eq!(artifacts.ground_text.lines().count(), 4);
        assert!(artifacts.dimacs.starts_with("c 1 "));
    }

    #[test]
    fn paper_literal_grounding_is_refused_for_existentials() {
        let (_, fragment) = check_text("exists x . P(x) & ~P(a)").unwrap();
        let err = ground_artifacts(&fragment, WitnessPolicy::PaperLiteral, DEFAULT_INSTANCE_CAP)
            .unwrap_err();
        assert!(matches!(err, PipelineError::PaperLiteralGround));
    }
}
