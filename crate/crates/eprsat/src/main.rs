//! Batch command-line front end.
//!
//! Exit codes: 0 success (SAT where a verdict is produced), 1 UNSAT or
//! out-of-fragment for `check`, 2 input/parse errors, 3 oracle
//! disagreement, 4 guard refusals (instance cap, enumeration guard, byte
//! budget).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use eprsat::generator::{generate_segment, InstanceConfig};
use eprsat::grounding::WitnessPolicy;
use eprsat::oracle::BoundVerdict;
use eprsat::pipeline::{
    self, ground_artifacts, run_pipeline, solve_fragment, PipelineError, PipelineOptions,
    SolveOptions,
};
use eprsat::{classify, padding, parse, FragmentClass};

#[derive(Parser)]
#[command(
    name = "eprsat",
    version,
    about = "Satisfiability toolkit for exists*forall* first-order sentences: classification, Herbrand grounding, DPLL, finite-model search, and padded re-encodings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_policy(s: &str) -> Result<WitnessPolicy, String> {
    WitnessPolicy::from_str(s)
}

#[derive(Args, Clone)]
struct SolveFlags {
    /// Existential witness policy: `skolem` (fresh constants, complete) or
    /// `paper-literal` (witnesses from the sentence's own constants).
    #[arg(long, default_value = "skolem", value_parser = parse_policy)]
    policy: WitnessPolicy,
    /// Maximum number of ground instances before grounding refuses.
    #[arg(long, default_value_t = eprsat::DEFAULT_INSTANCE_CAP)]
    cap: u64,
    /// Maximum number of interpretations the model search may enumerate.
    #[arg(long, default_value_t = eprsat::DEFAULT_ENUMERATION_GUARD)]
    guard: u64,
    /// Also run the finite-model search and compare verdicts.
    #[arg(long)]
    oracle_check: bool,
}

impl SolveFlags {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            policy: self.policy,
            instance_cap: self.cap,
            enumeration_guard: self.guard,
            oracle_check: self.oracle_check,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a formula file and report fragment membership.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write the ground-instance set and its DIMACS clause form.
    Ground {
        file: PathBuf,
        #[arg(long, default_value = "skolem", value_parser = parse_policy)]
        policy: WitnessPolicy,
        #[arg(long, default_value_t = eprsat::DEFAULT_INSTANCE_CAP)]
        cap: u64,
        /// Output base path; writes `<out>.ground` and `<out>.cnf`.
        /// Defaults to the input path without its extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide satisfiability by grounding and DPLL.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        flags: SolveFlags,
        /// Print the satisfying ground-atom assignment.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide satisfiability by bounded finite-model search alone.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = eprsat::DEFAULT_ENUMERATION_GUARD)]
        guard: u64,
        #[arg(long)]
        json: bool,
    },
    /// Pad a file to exactly 2^(n^k) bytes with the pseudo-blank byte.
    Pad {
        file: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, default_value_t = eprsat::DEFAULT_MAX_BYTES)]
        max_bytes: u64,
        /// Output path; defaults to `<file>.padded`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the payload of a padded file.
    Unpad {
        file: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// Output path; defaults to `<file>.payload`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the whole file pipeline and report per-stage timings.
    Pipeline {
        file: PathBuf,
        #[command(flatten)]
        flags: SolveFlags,
        /// Treat the input as a padded blob and unpad it first.
        #[arg(long)]
        padded: bool,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// Also write the ground-set file here (padded runs pad it to the
        /// input's total length).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Generate a seeded family of universal segments and tabulate
    /// ground-instance counts and stage timings.
    Bench {
        /// Number of constants every matrix must use.
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Universal-variable counts, a single value or a range like `1..4`
        /// (inclusive).
        #[arg(long, default_value = "1..4")]
        t: String,
        /// Instances per (m, t) cell.
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relation signature, e.g. `P:1,R:2`.
        #[arg(long, default_value = "P:1,R:2")]
        relations: String,
        /// Matrix depth bound.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = eprsat::DEFAULT_INSTANCE_CAP)]
        cap: u64,
        #[arg(long)]
        json: bool,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Check { file, json } => cmd_check(&file, json),
        Command::Ground {
            file,
            policy,
            cap,
            out,
        } => cmd_ground(&file, policy, cap, out),
        Command::Solve {
            file,
            flags,
            witness,
            json,
        } => cmd_solve(&file, &flags, witness, json),
        Command::Oracle { file, guard, json } => cmd_oracle(&file, guard, json),
        Command::Pad {
            file,
            k,
            max_bytes,
            out,
        } => cmd_pad(&file, k, max_bytes, out),
        Command::Unpad { file, k, out } => cmd_unpad(&file, k, out),
        Command::Pipeline {
            file,
            flags,
            padded,
            k,
            out,
            json,
        } => cmd_pipeline(&file, &flags, padded, k, out, json),
        Command::Bench {
            m,
            t,
            count,
            seed,
            relations,
            depth,
            cap,
            json,
            out,
        } => cmd_bench(m, &t, count, seed, &relations, depth, cap, json, out),
    };
    ExitCode::from(code)
}

fn fail(code: u8, message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    code
}

fn pipeline_fail(err: &PipelineError) -> u8 {
    eprintln!("error: {err}");
    err.exit_code() as u8
}

fn read_formula(path: &Path) -> Result<eprsat::SourceFormula, u8> {
    eprsat::SourceFormula::from_file(path).map_err(|e| fail(2, e))
}

fn cmd_check(path: &Path, json: bool) -> u8 {
    let source = match read_formula(path) {
        Ok(source) => source,
        Err(code) => return code,
    };
    let fragment = classify(&source.formula, &source.symbols);
    let (s, t, m) = fragment_stats(&fragment);
    match &fragment {
        FragmentClass::General(violations) => {
            if json {
                let value = serde_json::json!({
                    "class": "general",
                    "violations": violations,
                });
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                println!("class=general violations=[{}]", list.join(","));
            }
            1
        }
        _ => {
            if json {
                let value = serde_json::json!({
                    "class": fragment.name(),
                    "s": s,
                    "t": t,
                    "m": m,
                });
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                println!("class={} s={s} t={t} m={m}", fragment.name());
            }
            0
        }
    }
}

fn fragment_stats(fragment: &FragmentClass) -> (usize, usize, usize) {
    match fragment {
        FragmentClass::Sbs(seg) => (0, seg.t(), seg.model_bound()),
        FragmentClass::Bs(expr) => (expr.s(), expr.t(), expr.constant_count().max(1)),
        FragmentClass::General(_) => (0, 0, 0),
    }
}

fn cmd_ground(path: &Path, policy: WitnessPolicy, cap: u64, out: Option<PathBuf>) -> u8 {
    let source = match read_formula(path) {
        Ok(source) => source,
        Err(code) => return code,
    };
    let fragment = classify(&source.formula, &source.symbols);
    let artifacts = match ground_artifacts(&fragment, policy, cap) {
        Ok(a) => a,
        Err(e) => return pipeline_fail(&e),
    };
    let base = out.unwrap_or_else(|| path.with_extension(""));
    let ground_path = base.with_extension("ground");
    let cnf_path = base.with_extension("cnf");
    if let Err(e) = std::fs::write(&ground_path, &artifacts.ground_text) {
        return fail(2, format_args!("{}: {e}", ground_path.display()));
    }
    if let Err(e) = std::fs::write(&cnf_path, &artifacts.dimacs) {
        return fail(2, format_args!("{}: {e}", cnf_path.display()));
    }
    println!(
        "universe={} instances={} atoms={} ground={} cnf={}",
        artifacts.universe.len(),
        artifacts.instance_count,
        artifacts.atom_count,
        ground_path.display(),
        cnf_path.display()
    );
    0
}

fn cmd_solve(path: &Path, flags: &SolveFlags, witness: bool, json: bool) -> u8 {
    let source = match read_formula(path) {
        Ok(source) => source,
        Err(code) => return code,
    };
    let fragment = classify(&source.formula, &source.symbols);
    let run = match solve_fragment(&fragment, &flags.options()) {
        Ok(run) => run,
        Err(e) => return pipeline_fail(&e),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&run.report()).unwrap());
    } else {
        println!("{}", run.verdict_str());
        if let Some(constants) = &run.witness_constants {
            println!("witness constants: {}", constants.join(", "));
        }
        if witness {
            if let Some(atoms) = &run.witness {
                for (atom, value) in atoms {
                    println!("  {atom} = {}", if *value { "T" } else { "F" });
                }
            }
        }
        if let Some(oracle) = &run.oracle {
            println!(
                "oracle: {} at bound {} ({})",
                if oracle.sat { "SAT" } else { "UNSAT" },
                oracle.bound,
                if oracle.agrees { "agree" } else { "DISAGREE" }
            );
        }
    }
    run.exit_code() as u8
}

fn cmd_oracle(path: &Path, guard: u64, json: bool) -> u8 {
    let source = match read_formula(path) {
        Ok(source) => source,
        Err(code) => return code,
    };
    let fragment = classify(&source.formula, &source.symbols);
    let decision = match &fragment {
        FragmentClass::Sbs(seg) => seg.decide_by_bound(guard),
        FragmentClass::Bs(expr) => expr.decide_by_bound(guard),
        FragmentClass::General(_) => {
            return pipeline_fail(&PipelineError::NotFragment(match fragment {
                FragmentClass::General(vs) => vs,
                _ => unreachable!(),
            }))
        }
    };
    let decision = match decision {
        Ok(d) => d,
        Err(e) => return pipeline_fail(&PipelineError::Oracle(e)),
    };
    let (s, t, m) = fragment_stats(&fragment);
    match decision.verdict {
        BoundVerdict::Sat(model) => {
            if json {
                let value = serde_json::json!({
                    "class": fragment.name(),
                    "s": s, "t": t, "m": m,
                    "verdict": "SAT",
                    "bound": decision.bound,
                    "model": model,
                });
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                println!(
                    "SAT: model at domain size {} (bound {})",
                    model.domain_size, decision.bound
                );
            }
            0
        }
        BoundVerdict::Unsat => {
            if json {
                let value = serde_json::json!({
                    "class": fragment.name(),
                    "s": s, "t": t, "m": m,
                    "verdict": "UNSAT",
                    "bound": decision.bound,
                });
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                println!("UNSAT (no model up to bound {})", decision.bound);
            }
            1
        }
    }
}

fn cmd_pad(path: &Path, k: u32, max_bytes: u64, out: Option<PathBuf>) -> u8 {
    let payload = match std::fs::read(path) {
        Ok(bytes) => bytes,
        Err(e) => return fail(2, format_args!("{}: {e}", path.display())),
    };
    let blob = match padding::pad(&payload, k, max_bytes) {
        Ok(blob) => blob,
        Err(e @ padding::PaddingError::Overflow { .. }) => return fail(4, e),
        Err(e) => return fail(2, e),
    };
    let out = out.unwrap_or_else(|| with_suffix(path, ".padded"));
    if let Err(e) = std::fs::write(&out, blob.to_bytes()) {
        return fail(2, format_args!("{}: {e}", out.display()));
    }
    println!(
        "padded {} ({} bytes) -> {} ({} bytes, k={k})",
        path.display(),
        payload.len(),
        out.display(),
        blob.total_len()
    );
    0
}

fn cmd_unpad(path: &Path, k: u32, out: Option<PathBuf>) -> u8 {
    let blob = match std::fs::read(path) {
        Ok(bytes) => bytes,
        Err(e) => return fail(2, format_args!("{}: {e}", path.display())),
    };
    let payload = match padding::unpad(&blob, k) {
        Ok(payload) => payload,
        Err(e) => return fail(2, e),
    };
    let out = out.unwrap_or_else(|| with_suffix(path, ".payload"));
    if let Err(e) = std::fs::write(&out, &payload) {
        return fail(2, format_args!("{}: {e}", out.display()));
    }
    println!(
        "unpadded {} ({} bytes) -> {} ({} bytes, k={k})",
        path.display(),
        blob.len(),
        out.display(),
        payload.len()
    );
    0
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

fn cmd_pipeline(
    path: &Path,
    flags: &SolveFlags,
    padded: bool,
    k: u32,
    out: Option<PathBuf>,
    json: bool,
) -> u8 {
    let options = PipelineOptions {
        solve: flags.options(),
        padded,
        k,
        ground_out: out,
    };
    let report = match run_pipeline(path, &options) {
        Ok(report) => report,
        Err(e) => return pipeline_fail(&e),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        println!(
            "class={} s={} t={} m={} ground_count={} prop_vars={} verdict={}",
            report.class,
            report.s,
            report.t,
            report.m,
            report.ground_count,
            report.prop_var_count,
            report.verdict
        );
        if let (Some(n), Some(padded_len)) = (report.n, report.padded_length) {
            println!("n={n} padded_length={padded_len}");
        }
        println!(
            "timings_ms: parse={:.3} ground={:.3} translate={:.3} solve={:.3}",
            report.timings_ms.parse,
            report.timings_ms.ground,
            report.timings_ms.translate,
            report.timings_ms.solve
        );
        if let Some(oracle) = &report.oracle {
            println!(
                "oracle: {} at bound {} ({})",
                oracle.verdict,
                oracle.bound,
                if oracle.agrees { "agree" } else { "DISAGREE" }
            );
        }
    }
    let disagrees = report.oracle.as_ref().is_some_and(|o| !o.agrees);
    if disagrees {
        3
    } else if report.verdict == "SAT" {
        0
    } else {
        1
    }
}

fn parse_t_range(spec: &str) -> Result<std::ops::RangeInclusive<usize>, String> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|_| format!("bad range `{spec}`"))?;
        let hi: usize = hi
            .trim()
            .parse()
            .map_err(|_| format!("bad range `{spec}`"))?;
        if lo > hi {
            return Err(format!("empty range `{spec}`"));
        }
        Ok(lo..=hi)
    } else {
        let v: usize = spec
            .trim()
            .parse()
            .map_err(|_| format!("bad value `{spec}`"))?;
        Ok(v..=v)
    }
}

fn parse_relations(spec: &str) -> Result<Vec<(String, usize)>, String> {
    spec.split(',')
        .map(|part| {
            let (name, arity) = part
                .split_once(':')
                .ok_or_else(|| format!("bad relation `{part}`, expected `Name:arity`"))?;
            let arity: usize = arity
                .parse()
                .map_err(|_| format!("bad arity in `{part}`"))?;
            Ok((name.trim().to_string(), arity))
        })
        .collect()
}

#[derive(serde::Serialize)]
struct BenchRow {
    m: usize,
    t: usize,
    seed: u64,
    index: usize,
    formula: String,
    ground_count: u64,
    prop_vars: usize,
    verdict: String,
    parse_ms: f64,
    ground_ms: f64,
    translate_ms: f64,
    solve_ms: f64,
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    m: usize,
    t_spec: &str,
    count: usize,
    seed: u64,
    relations_spec: &str,
    depth: usize,
    cap: u64,
    json: bool,
    out: Option<PathBuf>,
) -> u8 {
    let t_range = match parse_t_range(t_spec) {
        Ok(r) => r,
        Err(e) => return fail(2, e),
    };
    if m > 26 {
        return fail(2, "at most 26 constants are supported");
    }
    if m == 0 && *t_range.start() == 0 {
        return fail(
            2,
            "m = 0 with t = 0 leaves no symbols to build a matrix from",
        );
    }
    let relations = match parse_relations(relations_spec) {
        Ok(r) => r,
        Err(e) => return fail(2, e),
    };
    let relation_refs: Vec<(&str, usize)> =
        relations.iter().map(|(n, a)| (n.as_str(), *a)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for t in t_range {
        let cfg = InstanceConfig::segment(t, m, &relation_refs, depth);
        for index in 0..count {
            let seg = generate_segment(&cfg, &mut rng);
            let text = seg.to_formula().to_string();

            let started = Instant::now();
            let (formula, symbols) = parse(&text).expect("generated formulas re-parse");
            let parse_ms = started.elapsed().as_secs_f64() * 1e3;

            let fragment = classify(&formula, &symbols);
            let options = SolveOptions {
                instance_cap: cap,
                ..SolveOptions::default()
            };
            let run = match pipeline::solve_fragment(&fragment, &options) {
                Ok(run) => run,
                Err(e) => return pipeline_fail(&e),
            };
            rows.push(BenchRow {
                m,
                t,
                seed,
                index,
                formula: text,
                ground_count: run.ground_count,
                prop_vars: run.prop_var_count,
                verdict: run.verdict_str().to_string(),
                parse_ms,
                ground_ms: run.ground_ms,
                translate_ms: run.translate_ms,
                solve_ms: run.solve_ms,
            });
        }
    }

    let rendered = if json {
        serde_json::to_string_pretty(&rows).unwrap() + "\n"
    } else {
        let mut table = String::from(
            "m,t,seed,index,formula,ground_count,prop_vars,verdict,parse_ms,ground_ms,translate_ms,solve_ms\n",
        );
        for r in &rows {
            table.push_str(&format!(
                "{},{},{},{},{:?},{},{},{},{:.3},{:.3},{:.3},{:.3}\n",
                r.m,
                r.t,
                r.seed,
                r.index,
                r.formula,
                r.ground_count,
                r.prop_vars,
                r.verdict,
                r.parse_ms,
                r.ground_ms,
                r.translate_ms,
                r.solve_ms
            ));
        }
        table
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, rendered) {
                return fail(2, format_args!("{}: {e}", path.display()));
            }
            println!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => print!("{rendered}"),
    }
    0
}
