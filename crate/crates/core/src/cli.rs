//! The `ljt` command line.
//!
//! Exit status: 0 on success, 1 when the answer is negative (not equivalent,
//! not inhabited, term rejected), 2 on usage or parse errors.

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analysis::{count_members, decide, enumerate_members};
use crate::corpus::{parse_corpus, random_sequent, rng, Shape};
use crate::finitary::{represent, represent_elided, FpContext};
use crate::forest::expand;
use crate::lambda_bar::check_diagnostic;
use crate::parse::{parse_fin_term, parse_proof_term, parse_sequent};
use crate::semantics::{interpret, try_check_equivalence};
use crate::syntax::Sequent;
use crate::tree::{fin_to_tree, forest_to_tree, proof_to_tree};

#[derive(Debug, Parser)]
#[command(name = "ljt", version, about = "Proof search in intuitionistic implicational logic")]
pub struct Cli {
    /// Truncation depth for forests.
    #[arg(long, global = true, default_value_t = 8)]
    pub fuel: usize,
    /// Size bound for enumeration.
    #[arg(long = "max-size", global = true, default_value_t = 12)]
    pub max_size: usize,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Use a random sequent drawn from this seed when none is given.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Run the command on every sequent of a file, one per line.
    #[arg(long, global = true, value_name = "FILE")]
    pub corpus: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Print the finitary representation of a sequent.
    Represent {
        sequent: Option<String>,
        /// Keep fixed points whose variable does not occur.
        #[arg(long)]
        raw: bool,
    },
    /// Print the solution space truncated at --fuel.
    Expand { sequent: Option<String> },
    /// Interpret the representation (or a closed finitary term) at --fuel.
    Interp {
        sequent: Option<String>,
        /// A closed finitary term to interpret instead.
        #[arg(long)]
        term: Option<String>,
    },
    /// Compare the interpreted representation with the solution space.
    Equiv { sequent: Option<String> },
    /// Typecheck a proof term against a sequent.
    Check { sequent: String, term: String },
    /// List inhabitants up to --max-size.
    Inhabit { sequent: Option<String> },
    /// Decide inhabitation, solvability and finiteness.
    Decide { sequent: Option<String> },
    /// Count inhabitants up to --max-size.
    Count { sequent: Option<String> },
}

impl Command {
    fn sequent_arg(&self) -> Option<&str> {
        match self {
            Command::Represent { sequent, .. }
            | Command::Expand { sequent }
            | Command::Interp { sequent, .. }
            | Command::Equiv { sequent }
            | Command::Inhabit { sequent }
            | Command::Decide { sequent }
            | Command::Count { sequent } => sequent.as_deref(),
            Command::Check { sequent, .. } => Some(sequent),
        }
    }
}

struct Outcome {
    text: String,
    json: Value,
    code: i32,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Outcome {
        Outcome { text, json, code: 0 }
    }

    fn error(message: String) -> Outcome {
        Outcome {
            json: json!({ "error": message }),
            text: format!("error: {message}"),
            code: 2,
        }
    }
}

fn execute(cli: &Cli, s: &Sequent) -> Outcome {
    match &cli.command {
        Command::Represent { raw, .. } => {
            let r = if *raw {
                represent(s, &FpContext::new())
            } else {
                represent_elided(s, &FpContext::new())
            };
            match r {
                Ok(t) => Outcome::ok(t.to_string(), serde_json::to_value(fin_to_tree(&t)).expect("tree")),
                Err(e) => Outcome::error(e.to_string()),
            }
        }
        Command::Expand { .. } => {
            let f = expand(s, cli.fuel);
            Outcome::ok(f.to_string(), serde_json::to_value(forest_to_tree(&f)).expect("tree"))
        }
        Command::Interp { term, .. } => {
            let t = match term {
                Some(text) => match parse_fin_term(text) {
                    Ok(t) => t,
                    Err(e) => return Outcome::error(format!("term: {e}")),
                },
                None => match represent(s, &FpContext::new()) {
                    Ok(t) => t,
                    Err(e) => return Outcome::error(e.to_string()),
                },
            };
            match interpret(&t, cli.fuel) {
                Ok(f) => Outcome::ok(f.to_string(), serde_json::to_value(forest_to_tree(&f)).expect("tree")),
                Err(e) => Outcome::error(e.to_string()),
            }
        }
        Command::Equiv { .. } => match try_check_equivalence(s, &FpContext::new(), cli.fuel) {
            Ok(eq) => Outcome {
                text: format!("equivalent up to fuel {}: {eq}", cli.fuel),
                json: json!({ "fuel": cli.fuel, "equivalent": eq }),
                code: if eq { 0 } else { 1 },
            },
            Err(e) => Outcome::error(e.to_string()),
        },
        Command::Check { term, .. } => match parse_proof_term(term) {
            Err(e) => Outcome::error(format!("term: {e}")),
            Ok(t) => match check_diagnostic(&s.ctx, &t, &s.goal) {
                Ok(()) => Outcome::ok("ok".into(), json!({ "ok": true })),
                Err(e) => Outcome {
                    text: format!("rejected: {e}"),
                    json: json!({ "ok": false, "reason": e.to_string() }),
                    code: 1,
                },
            },
        },
        Command::Inhabit { .. } => {
            let members = enumerate_members(s, cli.max_size);
            let text = members.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("\n");
            let trees: Vec<Value> = members
                .iter()
                .map(|m| serde_json::to_value(proof_to_tree(m)).expect("tree"))
                .collect();
            Outcome::ok(
                text,
                json!({ "max_size": cli.max_size, "members": members.iter().map(|m| m.to_string()).collect::<Vec<_>>(), "trees": trees }),
            )
        }
        Command::Decide { .. } => {
            let v = decide(s);
            let witness = v.witness.as_ref().map(|w| w.to_string());
            let mut text = format!(
                "inhabited: {}, solvable: {}\nfinite: {}",
                v.inhabited, v.solvable, v.finitely_inhabited
            );
            if let Some(w) = &witness {
                text.push_str(&format!("\nwitness: {w}"));
            }
            Outcome {
                text,
                json: json!({
                    "inhabited": v.inhabited,
                    "solvable": v.solvable,
                    "finite": v.finitely_inhabited.to_string(),
                    "witness": witness,
                }),
                code: if v.inhabited { 0 } else { 1 },
            }
        }
        Command::Count { .. } => {
            let n = count_members(s, cli.max_size);
            Outcome::ok(n.to_string(), json!({ "max_size": cli.max_size, "count": n }))
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match run_cli(&cli, stdin, out) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}

fn run_cli(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    if let Some(path) = &cli.corpus {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let sequents = parse_corpus(&text).map_err(|(line, e)| format!("{}:{line}: {e}", path.display()))?;
        let outcomes: Vec<Outcome> = sequents.par_iter().map(|s| execute(cli, s)).collect();
        let mut code = 0;
        for (s, o) in sequents.iter().zip(&outcomes) {
            if cli.json {
                writeln!(out, "{}", json!({ "sequent": s.to_string(), "result": o.json })).map_err(io)?;
            } else {
                writeln!(out, "# {s}\n{}", o.text).map_err(io)?;
            }
            code = code.max(o.code);
        }
        return Ok(code);
    }

    if let Command::Interp { sequent: None, term: Some(_) } = &cli.command {
        // A closed term is interpreted on its own; the sequent is unused.
        return emit(cli, None, execute(cli, &Sequent::closed(crate::syntax::Formula::atom("p"))), out);
    }

    let sequent = match (cli.command.sequent_arg(), cli.seed) {
        (Some(text), _) => parse_sequent(text).map_err(|e| format!("sequent: {e}"))?,
        (None, Some(seed)) => {
            let s = random_sequent(&mut rng(seed), &Shape::default());
            if !cli.json {
                writeln!(out, "# {s}").map_err(io)?;
            }
            s
        }
        (None, None) => {
            let mut text = String::new();
            stdin.read_to_string(&mut text).map_err(io)?;
            parse_sequent(text.trim()).map_err(|e| format!("sequent: {e}"))?
        }
    };
    let o = execute(cli, &sequent);
    emit(cli, Some(&sequent), o, out)
}

fn emit(cli: &Cli, sequent: Option<&Sequent>, o: Outcome, out: &mut dyn Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    if cli.json {
        let mut v = o.json;
        if let (Value::Object(map), Some(s)) = (&mut v, sequent) {
            map.insert("sequent".into(), Value::String(s.to_string()));
        }
        writeln!(out, "{v}").map_err(io)?;
    } else if o.code == 2 {
        return Err(o.text.trim_start_matches("error: ").to_string());
    } else if !o.text.is_empty() {
        writeln!(out, "{}", o.text).map_err(io)?;
    }
    Ok(o.code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut input = stdin.as_bytes();
        let code = run(std::iter::once("ljt").chain(args.iter().copied()), &mut input, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn decide_first_line() {
        let (code, out, _) = run_str(&["decide", "|- ((p -> q) -> p) -> p"], "");
        assert_eq!(code, 1);
        assert_eq!(out.lines().next(), Some("inhabited: false, solvable: false"));
    }

    #[test]
    fn stdin_input() {
        let (code, out, _) = run_str(&["count", "--max-size", "5"], "|- (p -> p) -> p -> p\n");
        assert_eq!((code, out.trim()), (0, "3"));
    }

    #[test]
    fn parse_errors_exit_2() {
        let (code, _, err) = run_str(&["represent", "|- p ->"], "");
        assert_eq!(code, 2);
        assert!(err.contains("error"));
        assert_eq!(run_str(&["frobnicate"], "").0, 2);
    }

    #[test]
    fn seeded_input_prints_header() {
        let (code, out, _) = run_str(&["equiv", "--seed", "3", "--fuel", "4"], "");
        assert_eq!(code, 0);
        assert!(out.starts_with("# "));
    }

    #[test]
    fn json_decide() {
        let (_, out, _) = run_str(&["decide", "--json", "|- p -> p -> p"], "");
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["inhabited"], true);
        assert_eq!(v["finite"], "yes");
    }
}
