//! Command-line front end.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::character::{dead_cliques, Character, CharacterSpace};
use crate::decider::{
    cross_check_details, fg_corollary_e, fp_codim1, fp_ideal, thm_g_sufficient, Convention, Verdict,
};
use crate::error::{Error, Result};
use crate::exactfield::FieldSpec;
use crate::graph::{Graph, Limits};
use crate::oracle::oracle_report;
use crate::selftest::{self, SelftestConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERDICT_FAILS: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "raag-fp",
    version,
    about = "Finiteness properties of coabelian ideals in right-angled Artin Lie algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// FP_n of the ideal of one character, by the dead-clique link condition.
    Fp(CharArgs),
    /// Finite generation of the ideal of one character (connected and dominant).
    Fg(CharArgs),
    /// FP_n of the ideal of a character space.
    Ideal(SpaceArgs),
    /// Sufficient order-complex condition for FP_n of the ideal of a space.
    Thmg(SpaceArgs),
    /// Graded homology table and verdict from the brute-force oracle.
    Oracle(OracleArgs),
    /// Compares the clique poset against living links for every dead clique.
    Crosscheck(CharArgs),
    /// Runs the randomised invariant suites.
    Selftest(SelftestArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Q or GF:p; overrides the field named in the input file.
    #[arg(long)]
    pub field: Option<FieldSpec>,
    #[arg(long, default_value_t = Convention::Shifted)]
    pub convention: Convention,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Exit 0 iff the verdict holds and 3 iff it fails.
    #[arg(long)]
    pub exit_status: bool,
}

#[derive(Args, Debug, Clone)]
pub struct CharArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "char")]
    pub character: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct SpaceArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub space: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    #[command(flatten)]
    pub char_args: CharArgs,
    /// Largest internal degree in the table (default max(n, s + 2)).
    #[arg(long)]
    pub max_degree: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub max_vertices: u64,
    /// Restrict random characters to one field (default: both Q and GF:5).
    #[arg(long)]
    pub field: Option<FieldSpec>,
    #[arg(long, default_value_t = Convention::Shifted)]
    pub convention: Convention,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
}

/// Result of one command: the report and the verdict it carries, if any.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub text: String,
    pub holds: Option<bool>,
    pub exit_on_verdict: bool,
    pub selftest: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self.holds {
            Some(false) if self.selftest => EXIT_SELFTEST_FAILED,
            Some(false) if self.exit_on_verdict => EXIT_VERDICT_FAILS,
            _ => EXIT_OK,
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Internal(_) => EXIT_INTERNAL,
        Error::Malformed(_)
        | Error::DivisionByZero
        | Error::Parse { .. }
        | Error::InvalidArgument(_) => EXIT_INPUT,
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph> {
    Graph::parse(&read(path)?).map_err(|e| in_file(path, e))
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        },
        other => other,
    }
}

fn load_character(g: &Graph, args: &CharArgs) -> Result<Character> {
    let path = &args.character;
    Character::parse(&read(path)?, g, args.common.field).map_err(|e| in_file(path, e))
}

fn load_space(g: &Graph, args: &SpaceArgs) -> Result<CharacterSpace> {
    let path = &args.space;
    CharacterSpace::parse(&read(path)?, g, args.common.field).map_err(|e| in_file(path, e))
}

fn finiteness_label(n: usize) -> Option<&'static str> {
    match n {
        1 => Some("finitely generated"),
        2 => Some("finitely presented"),
        _ => None,
    }
}

fn verdict_text(title: &str, v: &Verdict, g: &Graph) -> String {
    let mut out = format!(
        "{title}: FP_{} {}",
        v.n,
        if v.holds { "holds" } else { "fails" }
    );
    if let Some(label) = finiteness_label(v.n) {
        out += &format!(" ({}{label})", if v.holds { "" } else { "not " });
    }
    out.push('\n');
    if let Some(w) = &v.witness {
        out += &format!("witness: {}\n", w.to_json(g));
    }
    for note in &v.notes {
        out += &format!("note: {note}\n");
    }
    out
}

fn with_input(mut verdict: Value, input: Value) -> Value {
    verdict
        .as_object_mut()
        .expect("verdict is an object")
        .insert("input".into(), input);
    verdict
}

fn char_input(command: &str, g: &Graph, chi: &Character, common: &Common) -> Value {
    json!({
        "command": command,
        "graph": g.report(),
        "character": chi.to_json(g),
        "n": common.n,
        "field": chi.field().to_string(),
        "convention": common.convention.to_string(),
    })
}

fn space_input(command: &str, g: &Graph, sp: &CharacterSpace, common: &Common) -> Value {
    json!({
        "command": command,
        "graph": g.report(),
        "space": sp.to_json(g),
        "n": common.n,
        "field": sp.field().to_string(),
        "convention": common.convention.to_string(),
    })
}

fn verdict_outcome(report: Value, text: String, holds: bool, common: &Common) -> Outcome {
    Outcome {
        report,
        text,
        holds: Some(holds),
        exit_on_verdict: common.exit_status,
        selftest: false,
    }
}

pub fn execute(command: &Command, limits: &Limits) -> Result<Outcome> {
    match command {
        Command::Fp(args) => {
            let c = &args.common;
            let g = load_graph(&c.graph)?;
            let chi = load_character(&g, args)?;
            let v = fp_codim1(&g, &chi, c.n, c.convention, limits)?;
            let report = with_input(v.to_json(&g), char_input("fp", &g, &chi, c));
            Ok(verdict_outcome(
                report,
                verdict_text("fp", &v, &g),
                v.holds,
                c,
            ))
        }
        Command::Fg(args) => {
            let c = &args.common;
            let g = load_graph(&c.graph)?;
            let chi = load_character(&g, args)?;
            let v = fg_corollary_e(&g, &chi)?;
            let mut report = v.to_json(&g);
            // the reason for failure is lifted next to "holds"
            if let Some(Value::Object(w)) = report.get("witness").cloned() {
                let top = report.as_object_mut().expect("object");
                for (k, val) in w {
                    top.insert(k, val);
                }
            }
            let mut input = char_input("fg", &g, &chi, c);
            input["n"] = json!(1);
            let report = with_input(report, input);
            Ok(verdict_outcome(
                report,
                verdict_text("fg", &v, &g),
                v.holds,
                c,
            ))
        }
        Command::Ideal(args) => {
            let c = &args.common;
            let g = load_graph(&c.graph)?;
            let sp = load_space(&g, args)?;
            let v = fp_ideal(&g, &sp, c.n, c.convention, limits)?;
            let report = with_input(v.to_json(&g), space_input("ideal", &g, &sp, c));
            Ok(verdict_outcome(
                report,
                verdict_text("ideal", &v, &g),
                v.holds,
                c,
            ))
        }
        Command::Thmg(args) => {
            let c = &args.common;
            let g = load_graph(&c.graph)?;
            let sp = load_space(&g, args)?;
            let v = thm_g_sufficient(&g, &sp, c.n, limits)?;
            let mut input = space_input("thmg", &g, &sp, c);
            input.as_object_mut().expect("object").remove("convention");
            let report = with_input(v.to_json(&g), input);
            Ok(verdict_outcome(
                report,
                verdict_text("thmg", &v, &g),
                v.holds,
                c,
            ))
        }
        Command::Oracle(args) => {
            let c = &args.char_args.common;
            let g = load_graph(&c.graph)?;
            let chi = load_character(&g, &args.char_args)?;
            let r = oracle_report(&g, &chi, c.n, args.max_degree, limits)?;
            let mut input = char_input("oracle", &g, &chi, c);
            let obj = input.as_object_mut().expect("object");
            obj.remove("convention");
            obj.insert("max_degree".into(), json!(r.table.degree_bound));
            let report = with_input(r.to_json(&g), input);
            let mut text = String::new();
            for i in 0..=r.table.n {
                let dims: Vec<String> = (i..=r.table.degree_bound)
                    .map(|d| format!("{d}:{}", r.table.get(i, d).unwrap_or(0)))
                    .collect();
                text += &format!("H_{i}(N,K) by internal degree  {}\n", dims.join(" "));
            }
            for (i, d) in &r.c_homology {
                text += &format!("H_{i}(C) = {d}\n");
            }
            text += &verdict_text("oracle", &r.verdict, &g);
            Ok(verdict_outcome(report, text, r.verdict.holds, c))
        }
        Command::Crosscheck(args) => {
            let c = &args.common;
            let g = load_graph(&c.graph)?;
            let chi = load_character(&g, args)?;
            let mut checks = Vec::new();
            let mut text = String::new();
            let mut all = true;
            for z in dead_cliques(&g, &chi, usize::MAX, limits)? {
                let check = cross_check_details(&g, &chi, &z, limits)?;
                all &= check.agrees();
                text += &format!(
                    "Z = {:?}: {}\n",
                    z.members().iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
                    if check.agrees() {
                        "agrees"
                    } else {
                        "DISAGREES"
                    }
                );
                checks.push(check.to_json(&g));
            }
            let mut input = char_input("crosscheck", &g, &chi, c);
            let obj = input.as_object_mut().expect("object");
            obj.remove("convention");
            obj.remove("n");
            let mut report = Map::new();
            report.insert("holds".into(), json!(all));
            report.insert("checks".into(), Value::Array(checks));
            report.insert("input".into(), input);
            Ok(verdict_outcome(Value::Object(report), text, all, c))
        }
        Command::Selftest(args) => {
            let cfg = SelftestConfig {
                seed: args.seed,
                instances: args.instances,
                max_vertices: args.max_vertices as usize,
                fields: match args.field {
                    Some(f) => vec![f],
                    None => SelftestConfig::default().fields,
                },
                convention: args.convention,
                limits: *limits,
            };
            let r = selftest::run(&cfg)?;
            let mut report = r.to_json();
            report["input"] = json!({
                "command": "selftest",
                "seed": cfg.seed,
                "instances": cfg.instances,
                "max_vertices": cfg.max_vertices,
                "fields": cfg.fields.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "convention": cfg.convention.to_string(),
            });
            Ok(Outcome {
                report,
                text: r.to_string(),
                holds: Some(r.all_passed()),
                exit_on_verdict: true,
                selftest: true,
            })
        }
    }
}

fn output_format(command: &Command) -> OutputFormat {
    match command {
        Command::Fp(a) | Command::Fg(a) | Command::Crosscheck(a) => a.common.output,
        Command::Ideal(a) | Command::Thmg(a) => a.common.output,
        Command::Oracle(a) => a.char_args.common.output,
        Command::Selftest(a) => a.output,
    }
}

/// Parses, runs and prints; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let result = execute(&cli.command, &Limits::default());
    eprintln!("time: {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(outcome) => {
            match output_format(&cli.command) {
                OutputFormat::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&outcome.report).expect("serialisable")
                    )
                }
                OutputFormat::Text => print!("{}", outcome.text),
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
