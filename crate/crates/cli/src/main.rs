use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use causal_core::oracle::{check_program, DEFAULT_RULE_CAP};
use causal_core::{
    causal_stable_models, canonical_term, evaluate, parse_program, parse_term, print_term, print_value,
    CausalValue, Error, Interpretation, ParseError, Program, SolveOptions, SourceProgram,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "causal", version, about = "Causal logic programs: solver, justifications and term algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every causal stable model of a program.
    Solve {
        /// Program file, or `-` for standard input.
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        max_models: Option<usize>,
        #[arg(long, default_value_t = 20)]
        atom_cap: usize,
    },
    /// Print the least model of a positive program.
    Least {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the canonical form of a term.
    Eval { term: String },
    /// Exit 0 iff both terms denote the same value.
    Equiv { left: String, right: String },
    /// Exit 0 iff the first term is below the second.
    Leq { left: String, right: String },
    /// Cross-check every stable model against its proof trees.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 20)]
        atom_cap: usize,
        #[arg(long, default_value_t = DEFAULT_RULE_CAP)]
        rule_cap: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Structured output of `solve`, `least` and `check`.
#[derive(Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
struct OutputDocument {
    models: Vec<BTreeMap<String, String>>,
    diagnostics: Vec<String>,
}

/// A failure that maps to exit code 2.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::AtomCapExceeded { .. } | Error::RuleCapExceeded { .. } => "cap exceeded",
            Error::NoConvergence { .. } => "no convergence",
            Error::NotPositive { .. } => "not positive",
        };
        Failure(format!("{kind}: {e}"))
    }
}

fn read_source(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure(format!("<stdin>: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
    }
}

fn load(path: &Path) -> Result<SourceProgram, Failure> {
    let text = read_source(path)?;
    parse_program(&text).map_err(|e| Failure(format!("{}:{e}", path.display())))
}

fn term(text: &str) -> Result<causal_core::CausalTerm, Failure> {
    parse_term(text).map_err(|e: ParseError| Failure(format!("term {text:?}: {e}")))
}

fn model_map(program: &Program, model: &Interpretation) -> BTreeMap<String, String> {
    program
        .atoms()
        .iter()
        .map(|a| (a.name().to_string(), print_value(model.get(a))))
        .collect()
}

fn print_document(doc: &OutputDocument, models: &[Interpretation], format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(doc).expect("document serializes")),
        Format::Text => {
            for (i, m) in models.iter().enumerate() {
                println!("Model {}:", i + 1);
                print!("{m}");
            }
            for d in &doc.diagnostics {
                eprintln!("{d}");
            }
        }
    }
}

fn has_models(n: usize) -> ExitCode {
    if n > 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn verdict(b: bool) -> ExitCode {
    println!("{b}");
    if b {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn solve(path: &Path, format: Format, max_models: Option<usize>, atom_cap: usize) -> Result<ExitCode, Failure> {
    let program = load(path)?.program();
    let options = SolveOptions { max_models, atom_cap, ..SolveOptions::default() };
    let models = causal_stable_models(&program, &options)?;
    let mut doc = OutputDocument {
        models: models.iter().map(|m| model_map(&program, m)).collect(),
        diagnostics: vec![],
    };
    if models.is_empty() {
        doc.diagnostics.push("no causal stable models".into());
    }
    print_document(&doc, &models, format);
    Ok(has_models(models.len()))
}

fn least(path: &Path, format: Format) -> Result<ExitCode, Failure> {
    let source = load(path)?;
    let program = source.program();
    let positive = program.into_positive().map_err(|e| match e {
        Error::NotPositive { rule } => {
            let r = &source.rules[rule];
            Failure(format!("{}:{}:{}: rule uses `not`; least requires a positive program", path.display(), r.line, r.column))
        }
        other => other.into(),
    })?;
    let lm = positive.least_model()?;
    let mut doc = OutputDocument::default();
    let mut models = vec![];
    if lm.falsum.is_zero() {
        doc.models.push(model_map(positive.program(), &lm.interpretation));
        models.push(lm.interpretation);
    } else {
        doc.diagnostics.push(format!("constraint violated with cause {}", print_value(&lm.falsum)));
    }
    print_document(&doc, &models, format);
    Ok(has_models(models.len()))
}

fn check(path: &Path, format: Format, atom_cap: usize, rule_cap: usize) -> Result<ExitCode, Failure> {
    let program = load(path)?.program();
    let options = SolveOptions { atom_cap, ..SolveOptions::default() };
    let checks = check_program(&program, &options, rule_cap)?;
    let mut lines = vec![];
    for (i, mc) in checks.iter().enumerate() {
        lines.push(format!("Model {}:", i + 1));
        for ac in &mc.atoms {
            let (model, trees) = (print_value(&ac.model_value), print_value(&ac.tree_value));
            if ac.passed() {
                lines.push(format!("PASS {} = {model}", ac.atom));
            } else {
                lines.push(format!("FAIL {}: model = {model}, trees = {trees}", ac.atom));
            }
            let raw = print_term(&ac.raw_term);
            if raw != trees {
                lines.push(format!("  note: raw tree sum {raw} canonicalizes to {trees}"));
            }
        }
    }
    let passed = checks.iter().all(|c| c.passed());
    if checks.is_empty() {
        lines.push("no causal stable models to check".into());
    }
    match format {
        Format::Text => lines.iter().for_each(|l| println!("{l}")),
        Format::Json => {
            let doc = OutputDocument {
                models: checks.iter().map(|c| model_map(&program, &c.model)).collect(),
                diagnostics: lines,
            };
            println!("{}", serde_json::to_string_pretty(&doc).expect("document serializes"));
        }
    }
    Ok(if passed { has_models(checks.len()) } else { ExitCode::from(1) })
}

fn values(left: &str, right: &str) -> Result<(CausalValue, CausalValue), Failure> {
    Ok((evaluate(&term(left)?), evaluate(&term(right)?)))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Solve { file, format, max_models, atom_cap } => solve(&file, format, max_models, atom_cap),
        Command::Least { file, format } => least(&file, format),
        Command::Eval { term: t } => {
            println!("{}", print_term(&canonical_term(&evaluate(&term(&t)?))));
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv { left, right } => {
            let (l, r) = values(&left, &right)?;
            Ok(verdict(canonical_term(&l) == canonical_term(&r)))
        }
        Command::Leq { left, right } => {
            let (l, r) = values(&left, &right)?;
            Ok(verdict(l.leq(&r)))
        }
        Command::Check { file, format, atom_cap, rule_cap } => check(&file, format, atom_cap, rule_cap),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    run(cli).unwrap_or_else(|Failure(msg)| {
        eprintln!("error: {msg}");
        ExitCode::from(2)
    })
}
