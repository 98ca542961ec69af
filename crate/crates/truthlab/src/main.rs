//! Command-line front end. Every subcommand is a thin wrapper over the
//! library; see the README for the full reference.
//!
//! Exit codes: 0 success (or "true"/"no violations"), 1 false result or
//! violations, 2 usage/parse errors, 3 pipeline invariant failures.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use truthlab::coding::{decode_formula, encode_formula, Code};
use truthlab::eval::{eval_bounded, eval_delta0, EvalConfig};
use truthlab::overspill::{
    build_gamma_sequence, build_psi_sequence, distinctness_sentence, outer_disjunction, rank,
    stopping_disjunction, StoppingSpec,
};
use truthlab::pipeline::{
    default_progression_family, default_rank_family, run_progression, run_rank_ladder,
};
use truthlab::prop::{is_tautology, proves_prop};
use truthlab::syntax::{dag_size, parse_formula, Formula};
use truthlab::truth_class::{from_manifest_json, run_checks, CheckKind};

#[derive(Parser)]
#[command(name = "truthlab", version, about = "Workbench for arithmetical syntax, bounded truth evaluation, propositional provability, and stopping-disjunction constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OracleArg {
    /// Truth oracle, currently `bounded:B` for the bounded evaluator.
    #[arg(long)]
    oracle: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and echo its canonical rendering.
    Parse { formula: String },
    /// Print the numeric code of a formula.
    Code {
        formula: String,
        /// Print hexadecimal instead of decimal.
        #[arg(long)]
        hex: bool,
    },
    /// Decode a numeric formula code.
    Decode { code: String },
    /// Evaluate a sentence; prints true or false and mirrors it in the exit code.
    Eval {
        /// Formula text, or a decimal code (digits only).
        input: String,
        /// Domain bound B for quantifier sweeps over [0, B].
        #[arg(long)]
        bound: u64,
        /// Require syntactically bounded quantifiers and evaluate exactly.
        #[arg(long)]
        delta0: bool,
    },
    /// Is the sentence a propositional tautology? Exit 0 yes, 1 no.
    Taut { formula: String },
    /// Does the premise file propositionally entail the formula? Exit 0 yes, 1 no.
    Entails {
        formula: String,
        /// File of premises: one formula per line, or a JSON array of strings.
        #[arg(long)]
        premises: String,
    },
    /// Build a disjunction with stopping conditions from guard and payload files.
    Stopping {
        #[arg(long)]
        alphas: String,
        #[arg(long)]
        betas: String,
    },
    /// Iterate the guarded-chain construction, printing sizes and ranks.
    Gamma {
        #[arg(long)]
        phis: String,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        oracle: OracleArg,
    },
    /// Build the outer disjunction of a sentence file.
    OuterD {
        #[arg(long)]
        phis: String,
    },
    /// Build the chained-implication witness sequence and evaluate it.
    PsiSeq {
        #[arg(long)]
        phis: String,
        #[command(flatten)]
        oracle: OracleArg,
    },
    /// Build the sentence asserting c pairwise distinct values exist.
    Distinct {
        c: usize,
        /// Also evaluate over [0, B].
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Audit a labeled sentence manifest; exit 0 iff no violations.
    Check {
        #[arg(long)]
        manifest: String,
        /// Comma-separated subset of: compositional,regularity,propsnd,dc,dcin.
        #[arg(long)]
        checks: Option<String>,
        /// Treat inapplicable (closure-gap) entries as failures too.
        #[arg(long)]
        strict: bool,
    },
    /// Run the rank-ladder pipeline end to end; exit 3 if an invariant fails.
    DemoT31 {
        #[arg(long)]
        c: usize,
        #[arg(long)]
        bound: u64,
        /// Replace the default base family with sentences from a file.
        #[arg(long)]
        phis: Option<String>,
        /// Where to write the JSON report ("-" for stdout, the default).
        #[arg(long, default_value = "-")]
        json: String,
    },
    /// Run the progression pipeline end to end; exit 3 if an invariant fails.
    DemoT33 {
        #[arg(long)]
        c: usize,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        phis: Option<String>,
        /// Make the default family false from this index on.
        #[arg(long)]
        break_at: Option<usize>,
        #[arg(long, default_value = "-")]
        json: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_sentences(path: &str) -> truthlab::Result<Vec<Formula>> {
    let text = fs::read_to_string(path)
        .map_err(|e| truthlab::Error::Invalid(format!("cannot read {path}: {e}")))?;
    let trimmed = text.trim_start();
    let mut out = Vec::new();
    if trimmed.starts_with('[') {
        let items: Vec<String> = serde_json::from_str(trimmed)
            .map_err(|e| truthlab::Error::Invalid(format!("bad JSON array in {path}: {e}")))?;
        for item in items {
            out.push(parse_formula(&item)?);
        }
    } else {
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            out.push(parse_formula(line)?);
        }
    }
    Ok(out)
}

fn parse_oracle(spec: &Option<String>) -> truthlab::Result<Option<EvalConfig>> {
    match spec {
        None => Ok(None),
        Some(s) => match s.strip_prefix("bounded:") {
            Some(b) => {
                let bound: u64 = b
                    .parse()
                    .map_err(|_| truthlab::Error::Invalid(format!("bad oracle bound `{b}`")))?;
                Ok(Some(EvalConfig::with_prop_attachment(bound)?))
            }
            None => Err(truthlab::Error::Invalid(format!(
                "unknown oracle `{s}` (expected bounded:B)"
            ))),
        },
    }
}

fn emit_json(target: &str, value: &serde_json::Value) -> truthlab::Result<()> {
    let line = serde_json::to_string(value).expect("reports serialize");
    if target == "-" {
        println!("{line}");
    } else {
        fs::write(target, line + "\n")
            .map_err(|e| truthlab::Error::Invalid(format!("cannot write {target}: {e}")))?;
    }
    Ok(())
}

fn run(command: Command) -> truthlab::Result<u8> {
    match command {
        Command::Parse { formula } => {
            let f = parse_formula(&formula)?;
            println!("{f}");
            Ok(0)
        }
        Command::Code { formula, hex } => {
            let f = parse_formula(&formula)?;
            let code = encode_formula(&f);
            if hex {
                println!("{}", code.to_hex());
            } else {
                println!("{code}");
            }
            Ok(0)
        }
        Command::Decode { code } => {
            let code = Code::parse_decimal(&code)?;
            println!("{}", decode_formula(&code)?);
            Ok(0)
        }
        Command::Eval {
            input,
            bound,
            delta0,
        } => {
            let trimmed = input.trim();
            let f = if !trimmed.is_empty() && trimmed.bytes().all(|b| b.is_ascii_digit()) {
                decode_formula(&Code::parse_decimal(trimmed)?)?
            } else {
                parse_formula(trimmed)?
            };
            let value = if delta0 {
                eval_delta0(&f)?
            } else {
                let cfg = EvalConfig::with_prop_attachment(bound)?;
                eval_bounded(&f, &cfg)?
            };
            println!("{value}");
            Ok(if value { 0 } else { 1 })
        }
        Command::Taut { formula } => {
            let f = parse_formula(&formula)?;
            let yes = is_tautology(&f);
            println!("{yes}");
            Ok(if yes { 0 } else { 1 })
        }
        Command::Entails { formula, premises } => {
            let goal = parse_formula(&formula)?;
            let gamma = read_sentences(&premises)?;
            let yes = proves_prop(&gamma, &goal);
            println!("{yes}");
            Ok(if yes { 0 } else { 1 })
        }
        Command::Stopping { alphas, betas } => {
            let spec = StoppingSpec::new(read_sentences(&alphas)?, read_sentences(&betas)?)?;
            let chain = stopping_disjunction(&spec);
            println!("{chain}");
            eprintln!("stages: {}, dag nodes: {}", spec.stage_count(), dag_size(&chain));
            Ok(0)
        }
        Command::Gamma {
            phis,
            c,
            steps,
            oracle,
        } => {
            let phis = read_sentences(&phis)?;
            let cfg = parse_oracle(&oracle.oracle)?;
            let gammas = build_gamma_sequence(&phis, c, steps)?;
            for (i, g) in gammas.iter().enumerate() {
                match &cfg {
                    Some(cfg) => {
                        let r = rank(g, &phis, cfg)?;
                        println!("gamma_{i}: dag {} nodes, rank {r}", dag_size(g));
                    }
                    None => println!("gamma_{i}: dag {} nodes", dag_size(g)),
                }
            }
            Ok(0)
        }
        Command::OuterD { phis } => {
            let phis = read_sentences(&phis)?;
            println!("{}", outer_disjunction(&phis)?);
            Ok(0)
        }
        Command::PsiSeq { phis, oracle } => {
            let phis = read_sentences(&phis)?;
            let cfg = parse_oracle(&oracle.oracle)?;
            let psis = build_psi_sequence(&phis)?;
            for (i, psi) in psis.iter().enumerate() {
                match &cfg {
                    Some(cfg) => {
                        println!("psi_{i}: value {}, dag {} nodes", eval_bounded(psi, cfg)?, dag_size(psi));
                    }
                    None => println!("psi_{i}: dag {} nodes", dag_size(psi)),
                }
            }
            Ok(0)
        }
        Command::Distinct { c, bound } => {
            let f = distinctness_sentence(c)?;
            println!("{f}");
            if let Some(b) = bound {
                let cfg = EvalConfig::new(b)?;
                println!("value over [0, {b}]: {}", eval_bounded(&f, &cfg)?);
            }
            Ok(0)
        }
        Command::Check {
            manifest,
            checks,
            strict,
        } => {
            let text = fs::read_to_string(&manifest)
                .map_err(|e| truthlab::Error::Invalid(format!("cannot read {manifest}: {e}")))?;
            let set = from_manifest_json(&text)?;
            let kinds: Vec<CheckKind> = match checks {
                None => CheckKind::ALL.to_vec(),
                Some(list) => list
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<truthlab::Result<_>>()?,
            };
            let reports = run_checks(&set, &kinds);
            let violations: usize = reports.iter().map(|r| r.violations.len()).sum();
            let gaps: usize = reports.iter().map(|r| r.inapplicable.len()).sum();
            for r in &reports {
                eprintln!(
                    "{}: {} violation(s), {} inapplicable",
                    r.check,
                    r.violations.len(),
                    r.inapplicable.len()
                );
                for v in &r.violations {
                    eprintln!("  [{}] {} (labeled {})", v.clause, v.subject, v.subject_value);
                }
            }
            let json = serde_json::json!({
                "manifest": manifest,
                "numeral_bound": set.numeral_bound(),
                "entries": set.len(),
                "violations": violations,
                "inapplicable": gaps,
                "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
            let fail = violations > 0 || (strict && gaps > 0);
            Ok(if fail { 1 } else { 0 })
        }
        Command::DemoT31 {
            c,
            bound,
            phis,
            json,
        } => {
            if !(1..=12).contains(&c) {
                return Err(truthlab::Error::Invalid(
                    "c must be between 1 and 12".into(),
                ));
            }
            if bound < c as u64 {
                return Err(truthlab::Error::Invalid(
                    "bound must be at least c".into(),
                ));
            }
            let family = match phis {
                Some(path) => read_sentences(&path)?,
                None => default_rank_family(c)?,
            };
            let report = run_rank_ladder(&family, c, bound)?;
            print!("{}", report.render_text());
            emit_json(&json, &serde_json::to_value(&report).unwrap())?;
            Ok(if report.ok() { 0 } else { 3 })
        }
        Command::DemoT33 {
            c,
            bound,
            phis,
            break_at,
            json,
        } => {
            let family = match phis {
                Some(path) => read_sentences(&path)?,
                None => default_progression_family(c, break_at),
            };
            if family.len() != c + 1 {
                return Err(truthlab::Error::Invalid(format!(
                    "expected {} sentences for c = {c}, got {}",
                    c + 1,
                    family.len()
                )));
            }
            let cfg = EvalConfig::with_prop_attachment(bound)?;
            let report = run_progression(&family, &cfg)?;
            print!("{}", report.render_text());
            emit_json(&json, &serde_json::to_value(&report).unwrap())?;
            Ok(if report.ok() { 0 } else { 3 })
        }
    }
}
