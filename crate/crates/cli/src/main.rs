use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use adtrap::corpus::BUILTIN_IDS;
use adtrap::lab::{parse_assignment, Experiment, Plan};
use adtrap::suite::verify_builtin;
use adtrap::verify::Verdict;
use adtrap::Error;

const EXIT_SUSPECT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

/// Experiments on automatic-differentiation pitfalls, and a derivative
/// verification suite.
#[derive(Debug, Parser)]
#[command(name = "adtrap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List experiment ids (with their config keys) and built-in function ids.
    List,
    /// Run an experiment and write its records as CSV.
    Run {
        /// Experiment id.
        experiment: String,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Config override `key=value`; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run gradcheck, the dot-product test and the FD-vs-VJP check on a
    /// built-in function.
    Verify {
        /// Built-in function id.
        function: String,
        /// Seed for every random test vector.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the report lines to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(if err.is_usage() { EXIT_USAGE } else { EXIT_RUNTIME })
}

fn list() -> ExitCode {
    println!("experiments:");
    for e in Experiment::ALL {
        println!("  {:<11} keys: {}", e.id(), e.keys().join(", "));
    }
    println!("functions:");
    for id in BUILTIN_IDS {
        println!("  {id}");
    }
    ExitCode::SUCCESS
}

fn run(experiment: &str, out: &PathBuf, overrides: &[String]) -> ExitCode {
    let Some(exp) = Experiment::from_id(experiment) else {
        let known: Vec<&str> = Experiment::ALL.iter().map(|e| e.id()).collect();
        eprintln!("error: unknown experiment '{experiment}' (known: {})", known.join(", "));
        return ExitCode::from(EXIT_USAGE);
    };
    let parsed: Result<Vec<_>, _> = overrides.iter().map(|s| parse_assignment(s)).collect();
    let plan = match parsed.and_then(|kv| Plan::new(exp, &kv)) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let mut buf = Vec::new();
    let rows = match plan.run(&mut buf) {
        Ok(n) => n,
        Err(e) => return fail(&e),
    };
    if let Err(e) = fs::write(out, &buf) {
        eprintln!("error: cannot write {}: {e}", out.display());
        return ExitCode::from(EXIT_RUNTIME);
    }
    println!("wrote {rows} records to {}", out.display());
    ExitCode::SUCCESS
}

fn verify(function: &str, seed: u64, report: Option<&PathBuf>) -> ExitCode {
    let checks = match verify_builtin(function, seed) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let mut text = String::new();
    for c in &checks {
        println!("{}", c.line);
        text.push_str(&c.line);
        text.push('\n');
    }
    if let Some(path) = report {
        if let Err(e) = fs::write(path, text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_RUNTIME);
        }
    }
    let suspects: Vec<&str> = checks.iter().filter(|c| c.verdict == Verdict::Suspect).map(|c| c.name.as_str()).collect();
    if suspects.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("{} suspect check(s): {}", suspects.len(), suspects.join(", "));
        ExitCode::from(EXIT_SUSPECT)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => list(),
        Command::Run { experiment, out, overrides } => run(&experiment, &out, &overrides),
        Command::Verify { function, seed, report } => verify(&function, seed, report.as_ref()),
    }
}
